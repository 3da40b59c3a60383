"""
Minimum chain cover of a search set.

The subset order over searches is turned into a bipartite graph (every search
on both sides, an edge for each strict inclusion). A maximum matching of that
graph links searches into chains; the number of chains is |q| - |matching|,
which by Dilworth's theorem equals the width of the poset.
"""
import logging
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from autoindex.core import Chain, ChainCover, Search, SearchSet, is_strict_subset
from autoindex.errors import InstanceTooLargeError

logger = logging.getLogger(__name__)

ANTICHAIN_LIMIT = 20


@dataclass(frozen=True)
class BipartiteGraph:
    left: Tuple[Search, ...]
    right: Tuple[Search, ...]
    edges: FrozenSet[Tuple[int, int]]

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in self.left]
        for i, j in sorted(self.edges):
            adj[i].append(j)
        return adj


@dataclass(frozen=True)
class Matching:
    pairs: FrozenSet[Tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)


Matcher = Callable[[BipartiteGraph], Matching]


def build_subset_graph(q: SearchSet) -> BipartiteGraph:
    vertices = q.ordered()
    edges = frozenset(
        (i, j)
        for i, a in enumerate(vertices)
        for j, b in enumerate(vertices)
        if is_strict_subset(a, b)
    )
    return BipartiteGraph(vertices, vertices, edges)


def max_matching(g: BipartiteGraph) -> Matching:
    """Hopcroft-Karp: BFS layering from free left vertices, then DFS augmentation.

    Vertices and adjacency lists are visited in canonical order, so the
    matching is a pure function of the graph.
    """
    adj = g.adjacency()
    match_left: List[Optional[int]] = [None] * len(g.left)
    match_right: List[Optional[int]] = [None] * len(g.right)
    dist: List[float] = [math.inf] * len(g.left)

    def bfs() -> bool:
        queue = deque()
        for u in range(len(g.left)):
            if match_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = math.inf
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_right[v]
                if w is None:
                    found = True
                elif dist[w] == math.inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_right[v]
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = math.inf
        return False

    phases = 0
    while bfs():
        phases += 1
        for u in range(len(g.left)):
            if match_left[u] is None:
                dfs(u)

    pairs = frozenset((u, v) for u, v in enumerate(match_left) if v is not None)
    logger.debug(f"matching of size {len(pairs)} after {phases} phases")
    return Matching(pairs)


def chains_from_matching(g: BipartiteGraph, matching: Matching) -> ChainCover:
    """Follow matched edges from every search without a matched predecessor."""
    successor: Dict[int, int] = dict(matching.pairs)
    has_predecessor = {j for _, j in matching.pairs}
    chains = []
    for head in range(len(g.left)):
        if head in has_predecessor:
            continue
        links = [g.left[head]]
        u = head
        while u in successor:
            u = successor[u]
            links.append(g.right[u])
        chains.append(Chain(tuple(links)))
    return ChainCover(tuple(chains))


def min_chain_cover(q: SearchSet, matcher: Matcher = max_matching) -> ChainCover:
    if not len(q):
        return ChainCover()
    graph = build_subset_graph(q)
    matching = matcher(graph)
    cover = chains_from_matching(graph, matching)
    logger.debug(f"{len(q)} searches, {len(graph.edges)} edges, {len(cover)} chains")
    return cover


def is_antichain(searches) -> bool:
    return not any(
        is_strict_subset(a, b) or is_strict_subset(b, a) for a, b in combinations(searches, 2)
    )


def max_antichain_bruteforce(q: SearchSet, limit: int = ANTICHAIN_LIMIT) -> int:
    """Width of the subset poset by exhaustive scan.

    Antichains are closed under taking subsets, so the scan grows the candidate
    size until no antichain of that size exists.
    """
    if len(q) > limit:
        raise InstanceTooLargeError(f"antichain oracle is limited to {limit} searches, got {len(q)}")
    searches = q.ordered()
    width = 0
    for size in range(1, len(searches) + 1):
        if not any(is_antichain(subset) for subset in combinations(searches, size)):
            break
        width = size
    return width
