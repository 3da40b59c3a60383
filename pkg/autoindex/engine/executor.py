"""
Range nested loop join evaluation.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, Sequence

from autoindex.engine.compiler import (
    Access,
    CompiledCheck,
    CompiledJoin,
    RangeAccess,
    ScanAccess,
    value_of,
)
from autoindex.engine.translator import Equality
from autoindex.storage import Database, Relation, Row, primitive_search_scan, range_search

logger = logging.getLogger(__name__)


def _retrieve(relation: Relation, access: Access, env: Sequence[Row]) -> Iterator[Row]:
    if access is None:
        return relation.scan()
    if isinstance(access, RangeAccess):
        return range_search(relation, access.order, *access.bounds(env))
    return iter(primitive_search_scan(relation, access.predicate_values(env)))


class JoinEvaluation:
    """Walks one compiled join; env holds the tuples bound by the enclosing loops."""

    def __init__(self, join: CompiledJoin, db: Database):
        self.join = join
        self.relations = [db.relation(loop.relation) for loop in join.loops]
        self.output = db.relation(join.output)
        self.checks: Dict[int, List[CompiledCheck]] = {}
        for check in join.checks:
            self.checks.setdefault(check.level, []).append(check)
        self._negated = {check.relation: db.relation(check.relation) for check in join.checks}

    def admits(self, level: int, env: Sequence[Row]) -> bool:
        if level == 0 and any(value_of(g.left, env) == value_of(g.right, env) for g in self.join.guards):
            return False
        for check in self.checks.get(level, ()):
            if next(_retrieve(self._negated[check.relation], check.access, env), None) is not None:
                return False
        return True

    def _residual_holds(self, residual, env: Sequence[Row]) -> bool:
        for condition in residual:
            if isinstance(condition, Equality):
                if env[-1][condition.attr] != value_of(condition.rhs, env):
                    return False
            elif value_of(condition.left, env) == value_of(condition.right, env):
                return False
        return True

    def candidates(self, level: int, env: Sequence[Row]) -> Iterator[Row]:
        return _retrieve(self.relations[level], self.join.loops[level].access, env)

    def bindings(self, level: int, env: List[Row]) -> Iterator[Row]:
        """Projected tuples below `level`, assuming env already passed admits(level)."""
        if level == len(self.join.loops):
            yield tuple(value_of(op, env) for op in self.join.projection)
            return
        residual = self.join.loops[level].residual
        for t in self.candidates(level, env):
            env.append(t)
            if self._residual_holds(residual, env) and self.admits(level + 1, env):
                yield from self.bindings(level + 1, env)
            env.pop()

    def chunk(self, level: int, tuples: Sequence[Row], env: Sequence[Row]) -> List[Row]:
        out = []
        residual = self.join.loops[level].residual
        for t in tuples:
            local = list(env) + [t]
            if self._residual_holds(residual, local) and self.admits(level + 1, local):
                out.extend(self.bindings(level + 1, local))
        return out


def execute(join: CompiledJoin, db: Database, threads: int = 1) -> int:
    """Extends join.output with every projected binding; returns the number of new tuples."""
    evaluation = JoinEvaluation(join, db)
    if not evaluation.admits(0, []):
        return 0

    inserted = 0
    if threads > 1 and join.loops:
        outer = list(evaluation.candidates(0, []))
        size = max(1, -(-len(outer) // threads))
        chunks = [outer[i:i + size] for i in range(0, len(outer), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: evaluation.chunk(0, c, []), chunks))
        # serialized in chunk order, so the output matches the sequential run
        for rows in results:
            for row in rows:
                inserted += evaluation.output.insert(row)
    else:
        for row in evaluation.bindings(0, []):
            inserted += evaluation.output.insert(row)

    logger.debug(f"{join.output}: {inserted} new tuples")
    return inserted
