"""
Shared vocabulary: attributes, searches, lexicographical orders and chains.

Searches are attribute sets stored as integer bitsets, so subset tests and
prefix comparisons are single integer operations.
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

from autoindex.errors import SchemaError

MAX_ATTRIBUTES = 64


def _mask_of(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        if not 0 <= i < MAX_ATTRIBUTES:
            raise ValueError(f"attribute id {i} outside 0..{MAX_ATTRIBUTES - 1}")
        mask |= 1 << i
    return mask


def _ids_of(mask: int) -> Tuple[int, ...]:
    ids = []
    i = 0
    while mask:
        if mask & 1:
            ids.append(i)
        mask >>= 1
        i += 1
    return tuple(ids)


@dataclass(frozen=True)
class Attribute:
    id: int
    name: str


@dataclass(frozen=True)
class Schema:
    """Relation schema; attribute ids are dense 0..m-1 in declaration order."""

    name: str
    attributes: Tuple[Attribute, ...]

    @classmethod
    def of(cls, name: str, attribute_names: Sequence[str], max_attributes: int = MAX_ATTRIBUTES) -> "Schema":
        if not attribute_names:
            raise SchemaError(f"relation {name} declares no attributes")
        if len(attribute_names) > max_attributes:
            raise SchemaError(f"relation {name} has {len(attribute_names)} attributes, limit is {max_attributes}")
        if len(set(attribute_names)) != len(attribute_names):
            raise SchemaError(f"relation {name} declares duplicate attribute names")
        if any(not n for n in attribute_names):
            raise SchemaError(f"relation {name} has an empty attribute name")
        return cls(name, tuple(Attribute(i, n) for i, n in enumerate(attribute_names)))

    @property
    def arity(self) -> int:
        return len(self.attributes)

    def attribute(self, name: str) -> Attribute:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        raise SchemaError(f"relation {self.name} has no attribute {name}")


@dataclass(frozen=True)
class Search:
    """Attribute set of a primitive search predicate."""

    mask: int

    def __post_init__(self):
        if self.mask <= 0:
            raise ValueError("a search needs at least one attribute")

    @classmethod
    def of(cls, *ids: int) -> "Search":
        return cls(_mask_of(ids))

    @property
    def attrs(self) -> frozenset:
        return frozenset(_ids_of(self.mask))

    def ids(self) -> Tuple[int, ...]:
        return _ids_of(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def sort_key(self) -> Tuple[int, int]:
        return (len(self), self.mask)


class SearchSet:
    """Deduplicated set of searches; iterates in canonical (cardinality, bitset) order."""

    __slots__ = ("_searches", "_ordered")

    def __init__(self, searches: Iterable[Search] = ()):
        self._searches = frozenset(searches)
        self._ordered = tuple(sorted(self._searches, key=Search.sort_key))

    def __iter__(self) -> Iterator[Search]:
        return iter(self._ordered)

    def __len__(self) -> int:
        return len(self._searches)

    def __contains__(self, search: object) -> bool:
        return search in self._searches

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SearchSet):
            return self._searches == other._searches
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._searches)

    def __repr__(self) -> str:
        return f"SearchSet({[s.ids() for s in self._ordered]})"

    def ordered(self) -> Tuple[Search, ...]:
        return self._ordered


@dataclass(frozen=True)
class LexOrder:
    """Attribute sequence x1 < x2 < ... inducing a lexicographical tuple order."""

    seq: Tuple[int, ...]

    def __post_init__(self):
        if not self.seq:
            raise ValueError("a lexicographical order needs at least one attribute")
        if len(set(self.seq)) != len(self.seq):
            raise ValueError(f"attribute repeated in order {self.seq}")

    @classmethod
    def of(cls, *ids: int) -> "LexOrder":
        return cls(tuple(ids))

    @classmethod
    def identity(cls, arity: int) -> "LexOrder":
        return cls(tuple(range(arity)))

    def __len__(self) -> int:
        return len(self.seq)

    def prefix_mask(self, k: int) -> int:
        return _mask_of(self.seq[:k])

    def extend(self, arity: int) -> "LexOrder":
        present = set(self.seq)
        return LexOrder(self.seq + tuple(i for i in range(arity) if i not in present))

    def starts_with(self, other: "LexOrder") -> bool:
        return self.seq[: len(other.seq)] == other.seq


@dataclass(frozen=True)
class IndexSet:
    orders: Tuple[LexOrder, ...] = ()

    def __post_init__(self):
        # canonicalized by sequence equality only
        object.__setattr__(self, "orders", tuple(dict.fromkeys(self.orders)))

    def __iter__(self) -> Iterator[LexOrder]:
        return iter(self.orders)

    def __len__(self) -> int:
        return len(self.orders)

    def __contains__(self, order: object) -> bool:
        return order in self.orders


@dataclass(frozen=True)
class Chain:
    """Searches totally ordered by strict inclusion, smallest first."""

    links: Tuple[Search, ...] = ()

    def __post_init__(self):
        for smaller, larger in zip(self.links, self.links[1:]):
            if not is_strict_subset(smaller, larger):
                raise ValueError(f"chain link {smaller.ids()} is not a strict subset of {larger.ids()}")

    def __iter__(self) -> Iterator[Search]:
        return iter(self.links)

    def __len__(self) -> int:
        return len(self.links)

    def __contains__(self, search: object) -> bool:
        return search in self.links

    @property
    def head(self) -> Search:
        return self.links[0]


@dataclass(frozen=True)
class ChainCover:
    chains: Tuple[Chain, ...] = ()

    def __iter__(self) -> Iterator[Chain]:
        return iter(self.chains)

    def __len__(self) -> int:
        return len(self.chains)

    def members(self) -> Tuple[Search, ...]:
        return tuple(s for c in self.chains for s in c)


def prefix_set(ell: LexOrder, k: int) -> frozenset:
    if k < 0:
        raise ValueError("prefix length must be non-negative")
    return frozenset(ell.seq[:k])


def covers(ell: LexOrder, search: Search) -> bool:
    """True iff search is the |search|-prefix set of ell."""
    return ell.prefix_mask(len(search)) == search.mask


def l_cover(q: Iterable[Search], orders: Iterable[LexOrder]) -> bool:
    orders = tuple(orders)
    return all(any(covers(ell, s) for ell in orders) for s in q)


def c_cover(q: Iterable[Search], cover: Iterable[Chain]) -> bool:
    members = {s for chain in cover for s in chain}
    return all(s in members for s in q)


def is_strict_subset(a: Search, b: Search) -> bool:
    return a.mask != b.mask and a.mask & b.mask == a.mask
