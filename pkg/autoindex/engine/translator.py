"""
Query translator and search rewriter.

A rule becomes a loop nest in declared body order (or its .plan order): the
first positive occurrence of a variable binds it, every later occurrence turns
into an equality on the loop where it appears. The rewriter then splits each
loop predicate into a primitive search (right-hand sides bound by outer loops
or constants) and a residual predicate.
"""
import dataclasses
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from autoindex.core import Search, SearchSet
from autoindex.engine.ast import Constant, Rule, Term, Variable, Wildcard
from autoindex.storage import SymbolTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TupleRef:
    """t_{loop+1}(attr): an element of the tuple selected by a loop."""

    loop: int
    attr: int


@dataclass(frozen=True)
class Const:
    value: int


Operand = Union[TupleRef, Const]


@dataclass(frozen=True)
class Equality:
    """t_j(attr) = rhs for the loop or check that owns it."""

    attr: int
    rhs: Operand


@dataclass(frozen=True)
class NotEqual:
    left: Operand
    right: Operand


@dataclass(frozen=True)
class Loop:
    relation: str
    predicate: Tuple[Equality, ...] = ()
    constraints: Tuple[NotEqual, ...] = ()
    search: Tuple[Equality, ...] = ()
    residual: Tuple[Union[Equality, NotEqual], ...] = ()

    @property
    def primitive_search(self) -> Optional[Search]:
        return Search.of(*(eq.attr for eq in self.search)) if self.search else None


@dataclass(frozen=True)
class NegatedCheck:
    """Emptiness test on a negated atom, evaluated once `level` loops are bound."""

    relation: str
    level: int
    predicate: Tuple[Equality, ...] = ()

    @property
    def primitive_search(self) -> Optional[Search]:
        return Search.of(*(eq.attr for eq in self.predicate)) if self.predicate else None


@dataclass(frozen=True)
class LoopNest:
    output: str
    loops: Tuple[Loop, ...]
    negations: Tuple[NegatedCheck, ...] = ()
    guards: Tuple[NotEqual, ...] = ()
    projection: Tuple[Operand, ...] = ()


def _level(operands: Iterable[Operand]) -> int:
    return max((op.loop + 1 for op in operands if isinstance(op, TupleRef)), default=0)


def translate(rule: Rule, symbols: SymbolTable) -> LoopNest:
    bindings: Dict[str, TupleRef] = {}

    def operand(term: Term) -> Operand:
        if isinstance(term, Constant):
            return Const(symbols.intern(term.text))
        return bindings[term.name]

    loops: List[Loop] = []
    for j, literal in enumerate(rule.positive):
        predicate = []
        for position, term in enumerate(literal.atom.args):
            if isinstance(term, Wildcard):
                continue
            if isinstance(term, Variable) and term.name not in bindings:
                bindings[term.name] = TupleRef(j, position)
                continue
            predicate.append(Equality(position, operand(term)))
        loops.append(Loop(literal.atom.relation, tuple(predicate)))

    guards: List[NotEqual] = []
    for constraint in rule.constraints:
        check = NotEqual(operand(constraint.left), operand(constraint.right))
        level = _level((check.left, check.right))
        if level == 0:
            guards.append(check)
        else:
            # hoisted to the outermost loop where both sides are bound
            loop = loops[level - 1]
            loops[level - 1] = dataclasses.replace(loop, constraints=loop.constraints + (check,))

    negations = []
    for literal in rule.negative:
        predicate = tuple(
            Equality(position, operand(term))
            for position, term in enumerate(literal.atom.args)
            if not isinstance(term, Wildcard)
        )
        negations.append(NegatedCheck(literal.atom.relation, _level(eq.rhs for eq in predicate), predicate))

    projection = tuple(operand(term) for term in rule.head.args)
    return LoopNest(rule.head.relation, tuple(loops), tuple(negations), tuple(guards), projection)


def _outer_bound(eq: Equality, j: int) -> bool:
    return isinstance(eq.rhs, Const) or eq.rhs.loop < j


def rewrite_searches(nest: LoopNest) -> LoopNest:
    loops = []
    for j, loop in enumerate(nest.loops):
        search = tuple(eq for eq in loop.predicate if _outer_bound(eq, j))
        residual = tuple(eq for eq in loop.predicate if not _outer_bound(eq, j)) + loop.constraints
        loops.append(dataclasses.replace(loop, search=search, residual=residual))
    return dataclasses.replace(nest, loops=tuple(loops))


def collect_searches(nests: Iterable[LoopNest]) -> Dict[str, SearchSet]:
    """Nonempty primitive searches per relation, including negated atoms."""
    grouped = defaultdict(set)
    for nest in nests:
        for access in nest.loops + nest.negations:
            grouped[access.relation]
            search = access.primitive_search
            if search is not None:
                grouped[access.relation].add(search)
    return {name: SearchSet(searches) for name, searches in grouped.items()}
