"""
In-memory relations stored under lexicographical indexes.

Every chosen order is kept as one OOBTree keyed by the tuple permuted into
that order (extended to full width), so a range search is a single
``values(min, max)`` walk over the tree.
"""
import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from BTrees.OOBTree import OOBTree

from autoindex.core import Attribute, LexOrder, Schema, prefix_set
from autoindex.errors import (
    ArityMismatchError,
    CoverViolationError,
    MissingIndexError,
    MissingRelationError,
)

logger = logging.getLogger(__name__)


class BoundValue:
    """Comparator-level sentinel: infimum, supremum, or the unspecified marker."""

    __slots__ = ("_rank", "_label")

    def __init__(self, rank: Optional[int], label: str):
        self._rank = rank
        self._label = label

    def __repr__(self) -> str:
        return self._label

    def __eq__(self, other: object) -> bool:
        return self is other

    def __hash__(self) -> int:
        return id(self)

    def _other_rank(self, other: object) -> int:
        if self._rank is None or other is UNSPECIFIED:
            raise TypeError("unspecified bound values must be padded before comparison")
        if isinstance(other, BoundValue):
            return other._rank
        return 0

    def __lt__(self, other: object) -> bool:
        return self._rank < self._other_rank(other)

    def __le__(self, other: object) -> bool:
        return self._rank <= self._other_rank(other)

    def __gt__(self, other: object) -> bool:
        return self._rank > self._other_rank(other)

    def __ge__(self, other: object) -> bool:
        return self._rank >= self._other_rank(other)


BOTTOM = BoundValue(-1, "⊥")
TOP = BoundValue(1, "⊤")
UNSPECIFIED = BoundValue(None, "△")

Value = int
Row = Tuple[Value, ...]
BoundTuple = Tuple[Union[Value, BoundValue], ...]
Predicate = Sequence[Tuple[Union[Attribute, int], Value]]


def _attr_id(attr: Union[Attribute, int]) -> int:
    return attr.id if isinstance(attr, Attribute) else attr


class SymbolTable:
    """Interns constants to dense ordinals in first-seen order."""

    def __init__(self):
        self._ordinals: Dict[str, int] = {}
        self._symbols: List[str] = []

    def intern(self, symbol: str) -> int:
        ordinal = self._ordinals.get(symbol)
        if ordinal is None:
            ordinal = len(self._symbols)
            self._ordinals[symbol] = ordinal
            self._symbols.append(symbol)
        return ordinal

    def decode(self, ordinal: int) -> str:
        return self._symbols[ordinal]

    def __len__(self) -> int:
        return len(self._symbols)


def lex_compare(ell: LexOrder, a: BoundTuple, b: BoundTuple) -> int:
    for i in ell.seq:
        x, y = a[i], b[i]
        if x is UNSPECIFIED or y is UNSPECIFIED:
            raise ValueError("unspecified bound values must be padded before comparison")
        if x < y:
            return -1
        if y < x:
            return 1
    return 0


def lb(values: Sequence) -> BoundTuple:
    return tuple(BOTTOM if v is UNSPECIFIED else v for v in values)


def ub(values: Sequence) -> BoundTuple:
    return tuple(TOP if v is UNSPECIFIED else v for v in values)


def make_bounds(pred: Predicate, ell: LexOrder, arity: Optional[int] = None) -> Tuple[BoundTuple, BoundTuple]:
    if arity is None:
        arity = max(ell.seq) + 1
    attrs = [_attr_id(a) for a, _ in pred]
    if len(set(attrs)) != len(attrs) or set(attrs) != prefix_set(ell, len(attrs)):
        raise CoverViolationError(f"search on attributes {sorted(attrs)} is not a prefix of order {ell.seq}")
    values = [UNSPECIFIED] * arity
    for (attr, value) in pred:
        values[_attr_id(attr)] = value
    return lb(values), ub(values)


class Index:
    """One ordered container; stores full tuples keyed by their order permutation."""

    def __init__(self, order: LexOrder, arity: int):
        self.order = order
        self.full_order = order.extend(arity)
        self.inserts = 0
        self._positions = self.full_order.seq
        self._tree = OOBTree()

    def key(self, t: Sequence) -> tuple:
        return tuple(t[i] for i in self._positions)

    def insert(self, t: Row) -> None:
        self._tree[self.key(t)] = t
        self.inserts += 1

    def range(self, a: BoundTuple, b: BoundTuple) -> Iterator[Row]:
        return iter(self._tree.values(self.key(a), self.key(b)))

    def __contains__(self, t: Row) -> bool:
        return self.key(t) in self._tree

    def __iter__(self) -> Iterator[Row]:
        return iter(self._tree.values())

    def __len__(self) -> int:
        return len(self._tree)


class Relation:
    """Set of tuples mirrored into every maintained index; the first index is primary."""

    def __init__(self, schema: Schema, orders: Sequence[LexOrder] = ()):
        self.schema = schema
        orders = tuple(dict.fromkeys(orders)) or (LexOrder.identity(schema.arity),)
        self.indexes = [Index(order, schema.arity) for order in orders]

    @property
    def name(self) -> str:
        return self.schema.name

    @property
    def arity(self) -> int:
        return self.schema.arity

    @property
    def primary(self) -> Index:
        return self.indexes[0]

    @property
    def primary_order(self) -> LexOrder:
        return self.primary.order

    @property
    def secondary_orders(self) -> List[LexOrder]:
        return [index.order for index in self.indexes[1:]]

    def insert(self, t: Sequence[Value]) -> bool:
        if len(t) != self.arity:
            raise ArityMismatchError(f"{self.name} has arity {self.arity}, got a tuple of length {len(t)}")
        t = tuple(t)
        if self.contains(t):
            return False
        for index in self.indexes:
            index.insert(t)
        return True

    def contains(self, t: Sequence[Value]) -> bool:
        return tuple(t) in self.primary

    def scan(self) -> Iterator[Row]:
        return iter(self.primary)

    def index_covering(self, ell: LexOrder) -> Index:
        for index in self.indexes:
            if index.order == ell:
                return index
        for index in self.indexes:
            if index.full_order.starts_with(ell):
                return index
        raise MissingIndexError(f"{self.name} maintains no index with prefix {ell.seq}")

    def insert_counts(self) -> Dict[LexOrder, int]:
        return {index.order: index.inserts for index in self.indexes}

    @property
    def total_inserts(self) -> int:
        return sum(index.inserts for index in self.indexes)

    def mirrors_consistent(self) -> bool:
        expected = set(self.primary)
        return all(set(index) == expected for index in self.indexes[1:])

    def __len__(self) -> int:
        return len(self.primary)


def range_search(r: Relation, ell: LexOrder, a: BoundTuple, b: BoundTuple) -> Iterator[Row]:
    if UNSPECIFIED in a or UNSPECIFIED in b:
        raise ValueError("range bounds still contain unspecified values")
    return r.index_covering(ell).range(a, b)


def primitive_search_scan(r: Relation, pred: Predicate) -> List[Row]:
    """Linear-scan reference semantics of a primitive search."""
    conditions = [(_attr_id(a), v) for a, v in pred]
    return [t for t in r.scan() if all(t[i] == v for i, v in conditions)]


class Database:
    def __init__(self, symbols: Optional[SymbolTable] = None):
        self.symbols = symbols or SymbolTable()
        self.relations: Dict[str, Relation] = {}

    def add(self, relation: Relation) -> Relation:
        self.relations[relation.name] = relation
        return relation

    def relation(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise MissingRelationError(f"relation {name} is not loaded")

    def load(self, name: str, rows: Iterable[Sequence[str]]) -> int:
        relation = self.relation(name)
        loaded = 0
        for row in rows:
            if relation.insert(tuple(self.symbols.intern(v) for v in row)):
                loaded += 1
        logger.debug(f"loaded {loaded} tuples into {name}")
        return loaded

    def decoded(self, name: str) -> List[Tuple[str, ...]]:
        decode = self.symbols.decode
        return [tuple(decode(v) for v in t) for t in self.relation(name).scan()]
