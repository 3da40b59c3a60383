"""
Minimal order selection: turning a minimum chain cover into a minimum set of
lexicographical orders, plus the mappings between orders and chains and the
brute-force oracles used to check optimality.
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Dict, Iterable, Iterator, Optional, Sequence, Tuple

from autoindex.core import (
    Chain,
    ChainCover,
    IndexSet,
    LexOrder,
    Search,
    SearchSet,
    covers,
)
from autoindex.errors import InstanceTooLargeError, OutOfRangeError
from autoindex.matching import Matcher, max_matching, min_chain_cover

logger = logging.getLogger(__name__)

ChoosePolicy = Callable[[Sequence[int]], Sequence[int]]

BRUTEFORCE_MAX_ATTRIBUTES = 4
BRUTEFORCE_MAX_SEARCHES = 8


@dataclass
class MospSolution:
    search_set: SearchSet = field(default_factory=SearchSet)
    chain_cover: ChainCover = field(default_factory=ChainCover)
    index_set: IndexSet = field(default_factory=IndexSet)
    assignment: Dict[Search, LexOrder] = field(default_factory=dict)


def _blocks(chain: Chain) -> Iterator[Tuple[int, ...]]:
    covered = 0
    for search in chain:
        block = search.mask & ~covered
        yield tuple(i for i in range(block.bit_length()) if block >> i & 1)
        covered = search.mask


def gamma0(chain: Chain, choose: ChoosePolicy = sorted) -> LexOrder:
    """s1 < s2 - s1 < ... < sk - s(k-1), each block ordered by choose."""
    seq: Tuple[int, ...] = ()
    for block in _blocks(chain):
        seq += tuple(choose(block))
    return LexOrder(seq)


def gamma_all(chain: Chain) -> Iterator[LexOrder]:
    """Every order the chain maps to: all permutations inside each block."""
    for parts in product(*(permutations(block) for block in _blocks(chain))):
        yield LexOrder(tuple(i for part in parts for i in part))


def gamma1(cover: ChainCover, choose: ChoosePolicy = sorted) -> IndexSet:
    return IndexSet(tuple(gamma0(chain, choose) for chain in cover))


def alpha0(ell: LexOrder, q: Iterable[Search]) -> Chain:
    """All searches of q that are prefix sets of ell, smallest first."""
    return Chain(tuple(sorted((s for s in q if covers(ell, s)), key=len)))


def alpha(orders: Iterable[LexOrder], q: SearchSet) -> Tuple[Chain, ...]:
    return tuple(dict.fromkeys(alpha0(ell, q) for ell in orders))


def _assign(cover: ChainCover, orders: Sequence[LexOrder]) -> Dict[Search, LexOrder]:
    assignment: Dict[Search, LexOrder] = {}
    # a search in several chains goes to the shortest one
    for chain, ell in sorted(zip(cover, orders), key=lambda pair: len(pair[0])):
        for search in chain:
            assignment.setdefault(search, ell)
    return assignment


def min_index(q: SearchSet, matcher: Matcher = max_matching, choose: ChoosePolicy = sorted) -> MospSolution:
    cover = min_chain_cover(q, matcher)
    orders = tuple(gamma0(chain, choose) for chain in cover)
    solution = MospSolution(q, cover, IndexSet(orders), _assign(cover, orders))
    logger.debug(f"{len(q)} searches covered by {len(solution.index_set)} indexes")
    return solution


def naive_index(q: SearchSet) -> MospSolution:
    """Baseline: one index per distinct search, attributes in ascending id order."""
    cover = ChainCover(tuple(Chain((s,)) for s in q))
    orders = tuple(LexOrder(s.ids()) for s in q)
    return MospSolution(q, cover, IndexSet(orders), dict(zip(q, orders)))


def enumerate_lex_count(m: int) -> int:
    """|L| for m attributes: sum over i of C(m, i) * i!."""
    if not 1 <= m <= 20:
        raise OutOfRangeError(f"attribute count must be within 1..20, got {m}")
    return sum(math.perm(m, i) for i in range(1, m + 1))


def lex_count_error(m: int) -> float:
    """Relative error of the e * m! over-approximation."""
    exact = enumerate_lex_count(m)
    return (math.e * math.factorial(m) - exact) / exact


def enumerate_lex_orders(m: int) -> Iterator[LexOrder]:
    for size in range(1, m + 1):
        for subset in combinations(range(m), size):
            for seq in permutations(subset):
                yield LexOrder(seq)


def brute_force_min_cover_size(
    q: SearchSet,
    arity: Optional[int] = None,
    max_attributes: int = BRUTEFORCE_MAX_ATTRIBUTES,
    max_searches: int = BRUTEFORCE_MAX_SEARCHES,
) -> int:
    """Smallest k such that some k orders of L cover q, by exhaustive search.

    Orders covering the same searches are interchangeable and an order whose
    covered searches are a strict subset of another's never helps, so the
    k-combination scan runs over the maximal coverage profiles only.
    """
    if arity is None:
        arity = max((s.mask.bit_length() for s in q), default=0)
    if arity > max_attributes or len(q) > max_searches:
        raise InstanceTooLargeError(
            f"brute-force oracle is limited to {max_attributes} attributes and {max_searches} searches"
        )
    if not len(q):
        return 0
    searches = q.ordered()
    full = (1 << len(searches)) - 1

    profiles = set()
    for ell in enumerate_lex_orders(arity):
        profile = 0
        for bit, search in enumerate(searches):
            if covers(ell, search):
                profile |= 1 << bit
        if profile:
            profiles.add(profile)
    maximal = [p for p in profiles if not any(p != o and p & o == p for o in profiles)]

    for k in range(1, len(searches) + 1):
        for combo in combinations(maximal, k):
            union = 0
            for profile in combo:
                union |= profile
            if union == full:
                return k
    raise ValueError(f"no cover found; searches use attributes beyond arity {arity}")
