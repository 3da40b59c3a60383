"""
Index selection over a whole program and compilation of loop nests into
range nested loop joins.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from autoindex.core import LexOrder, Schema, Search, SearchSet, covers
from autoindex.engine.translator import Const, Equality, LoopNest, NotEqual, Operand
from autoindex.errors import CoverViolationError, InternalCompilerError, UsageError
from autoindex.mosp import MospSolution, min_index, naive_index
from autoindex.storage import BOTTOM, TOP, BoundTuple, make_bounds

logger = logging.getLogger(__name__)

MODES = ("auto", "naive", "scan")


class Pad:
    """Index position left unspecified by a search; padded with ⊥ or ⊤."""

    def __repr__(self) -> str:
        return "△"


PAD = Pad()


def value_of(operand: Operand, env: Sequence[tuple]) -> int:
    if isinstance(operand, Const):
        return operand.value
    return env[operand.loop][operand.attr]


@dataclass(frozen=True)
class RangeAccess:
    """ρ(ℓ, a, b) with a and b still symbolic in the outer tuples."""

    order: LexOrder
    arity: int
    recipe: Tuple[Tuple[int, Union[Operand, Pad]], ...]

    @classmethod
    def build(cls, predicate: Sequence[Equality], order: LexOrder, arity: int) -> "RangeAccess":
        low, _ = make_bounds([(eq.attr, eq.rhs) for eq in predicate], order, arity)
        full = order.extend(arity).seq
        recipe = tuple((i, PAD if low[i] is BOTTOM else low[i]) for i in full)
        return cls(order, arity, recipe)

    def bounds(self, env: Sequence[tuple]) -> Tuple[BoundTuple, BoundTuple]:
        a = [BOTTOM] * self.arity
        b = [TOP] * self.arity
        for attr, operand in self.recipe:
            if operand is not PAD:
                a[attr] = b[attr] = value_of(operand, env)
        return tuple(a), tuple(b)


@dataclass(frozen=True)
class ScanAccess:
    """Reference access path: filter the primary order with the search predicate."""

    predicate: Tuple[Equality, ...]

    def predicate_values(self, env: Sequence[tuple]) -> List[Tuple[int, int]]:
        return [(eq.attr, value_of(eq.rhs, env)) for eq in self.predicate]


Access = Optional[Union[RangeAccess, ScanAccess]]


@dataclass(frozen=True)
class CompiledLoop:
    relation: str
    access: Access
    residual: Tuple[Union[Equality, NotEqual], ...] = ()


@dataclass(frozen=True)
class CompiledCheck:
    """σ_φ(R⁻) = ∅ once `level` tuples are bound."""

    relation: str
    level: int
    access: Access


@dataclass(frozen=True)
class CompiledJoin:
    output: str
    loops: Tuple[CompiledLoop, ...]
    checks: Tuple[CompiledCheck, ...]
    guards: Tuple[NotEqual, ...]
    projection: Tuple[Operand, ...]


def optimize_indexes(searches: Mapping[str, SearchSet]) -> Dict[str, MospSolution]:
    solutions = {}
    for name in sorted(searches):
        solutions[name] = min_index(searches[name])
        logger.debug(f"{name}: {len(searches[name])} searches -> {len(solutions[name].index_set)} indexes")
    return solutions


def select_indexes(searches: Mapping[str, SearchSet], mode: str = "auto") -> Optional[Dict[str, MospSolution]]:
    """auto runs the optimiser, naive builds one index per search, scan maintains none (None)."""
    if mode == "auto":
        return optimize_indexes(searches)
    if mode == "naive":
        return {name: naive_index(searches[name]) for name in sorted(searches)}
    if mode == "scan":
        return None
    raise UsageError(f"unknown mode {mode!r}, expected one of {', '.join(MODES)}")


def _access(
    relation: str,
    predicate: Tuple[Equality, ...],
    solutions: Optional[Mapping[str, MospSolution]],
    schemas: Mapping[str, Schema],
) -> Access:
    if not predicate:
        return None
    if solutions is None:
        return ScanAccess(predicate)

    search = Search.of(*(eq.attr for eq in predicate))
    solution = solutions.get(relation)
    order = solution.assignment.get(search) if solution is not None else None
    if order is None:
        raise InternalCompilerError(f"no index assigned to search {search.ids()} on {relation}")
    if not covers(order, search):
        raise InternalCompilerError(f"index {order.seq} assigned to {relation} does not cover {search.ids()}")
    try:
        return RangeAccess.build(predicate, order, schemas[relation].arity)
    except CoverViolationError as e:
        raise InternalCompilerError(e.detail) from e


def compile(
    nest: LoopNest,
    solutions: Optional[Mapping[str, MospSolution]],
    schemas: Mapping[str, Schema],
) -> CompiledJoin:
    loops = tuple(
        CompiledLoop(loop.relation, _access(loop.relation, loop.search, solutions, schemas), loop.residual)
        for loop in nest.loops
    )
    checks = tuple(
        CompiledCheck(check.relation, check.level, _access(check.relation, check.predicate, solutions, schemas))
        for check in nest.negations
    )
    return CompiledJoin(nest.output, loops, checks, nest.guards, nest.projection)
