import random

import networkx as nx
import pytest

from autoindex.core import Chain, Search, SearchSet, is_strict_subset
from autoindex.errors import InstanceTooLargeError
from autoindex.matching import (
    BipartiteGraph,
    Matching,
    build_subset_graph,
    chains_from_matching,
    is_antichain,
    max_antichain_bruteforce,
    max_matching,
    min_chain_cover,
)

X, Y, Z, W = 0, 1, 2, 3


def _networkx_matching_size(graph: BipartiteGraph) -> int:
    g = nx.Graph()
    top = [("l", i) for i in range(len(graph.left))]
    g.add_nodes_from(top)
    g.add_nodes_from(("r", j) for j in range(len(graph.right)))
    g.add_edges_from((("l", i), ("r", j)) for i, j in graph.edges)
    return len(nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)) // 2


def _random_search_set(rng: random.Random, attributes: int, size: int) -> SearchSet:
    return SearchSet(Search(rng.randint(1, (1 << attributes) - 1)) for _ in range(size))


def test_subset_graph_of_motivating_searches(motivating_searches):
    graph = build_subset_graph(motivating_searches)
    named = {(graph.left[i].ids(), graph.right[j].ids()) for i, j in graph.edges}
    assert named == {
        ((X,), (X, Y)),
        ((X,), (X, Z)),
        ((X,), (X, Y, Z)),
        ((X, Y), (X, Y, Z)),
        ((X, Z), (X, Y, Z)),
    }


@pytest.mark.parametrize("q", [SearchSet([Search.of(X)]), SearchSet([Search.of(X), Search.of(Y)])])
def test_subset_graph_without_edges(q):
    assert not build_subset_graph(q).edges


def test_max_matching_motivating(motivating_searches):
    graph = build_subset_graph(motivating_searches)
    matching = max_matching(graph)
    assert len(matching) == 2
    assert matching.pairs <= graph.edges


def test_max_matching_on_a_chain():
    q = SearchSet([Search.of(X), Search.of(X, Y), Search.of(X, Y, Z), Search.of(X, Y, Z, W)])
    graph = build_subset_graph(q)
    assert len(graph.edges) == 6
    assert len(max_matching(graph)) == 3


def test_max_matching_empty_graph():
    assert len(max_matching(build_subset_graph(SearchSet()))) == 0


def test_min_chain_cover_motivating(motivating_searches):
    cover = min_chain_cover(motivating_searches)
    assert [[s.ids() for s in chain] for chain in cover] == [
        [(X,), (X, Y), (X, Y, Z)],
        [(X, Z)],
    ]


def test_min_chain_cover_edge_cases():
    assert len(min_chain_cover(SearchSet())) == 0
    antichain = SearchSet([Search.of(X), Search.of(Y), Search.of(Z)])
    cover = min_chain_cover(antichain)
    assert len(cover) == 3
    assert all(len(chain) == 1 for chain in cover)


def test_chain_heads_have_no_matched_predecessor(motivating_searches):
    graph = build_subset_graph(motivating_searches)
    matching = max_matching(graph)
    matched_right = {graph.right[j] for _, j in matching.pairs}
    for chain in chains_from_matching(graph, matching):
        assert chain.head not in matched_right


def test_max_antichain_bruteforce(motivating_searches):
    assert max_antichain_bruteforce(motivating_searches) == 2
    assert max_antichain_bruteforce(SearchSet([Search.of(Y)])) == 1
    assert is_antichain([Search.of(X, Y), Search.of(X, Z)])
    assert not is_antichain([Search.of(X), Search.of(X, Z)])


def test_max_antichain_bruteforce_is_gated():
    q = SearchSet(Search(mask) for mask in range(1, 22))
    with pytest.raises(InstanceTooLargeError):
        max_antichain_bruteforce(q)


def test_random_covers_are_minimal_partitions():
    rng = random.Random(7)
    for _ in range(300):
        q = _random_search_set(rng, rng.randint(1, 5), rng.randint(1, 10))
        graph = build_subset_graph(q)
        matching = max_matching(graph)
        assert len(matching) == _networkx_matching_size(graph)

        lefts = [i for i, _ in matching.pairs]
        rights = [j for _, j in matching.pairs]
        assert len(set(lefts)) == len(lefts) and len(set(rights)) == len(rights)

        cover = min_chain_cover(q)
        members = cover.members()
        assert sorted(members, key=Search.sort_key) == list(q)
        for chain in cover:
            assert all(is_strict_subset(a, b) for a, b in zip(chain.links, chain.links[1:]))
        assert len(cover) == len(q) - len(matching) == max_antichain_bruteforce(q)


def test_corrupted_matcher_breaks_dilworth_equality(motivating_searches):
    cover = min_chain_cover(motivating_searches, matcher=lambda graph: Matching(frozenset()))
    assert len(cover) == 4
    assert len(cover) != max_antichain_bruteforce(motivating_searches)


def test_determinism(motivating_searches):
    shuffled = SearchSet(reversed(motivating_searches.ordered()))
    assert min_chain_cover(shuffled) == min_chain_cover(motivating_searches)
    assert min_chain_cover(SearchSet([Search.of(X)])).chains == (Chain((Search.of(X),)),)
