import pytest

from autoindex.core import (
    Chain,
    ChainCover,
    IndexSet,
    LexOrder,
    Schema,
    Search,
    SearchSet,
    c_cover,
    covers,
    is_strict_subset,
    l_cover,
    prefix_set,
)
from autoindex.errors import SchemaError

X, Y, Z = 0, 1, 2


def test_prefix_set():
    ell = LexOrder.of(X, Y, Z)
    assert prefix_set(ell, 2) == {X, Y}
    assert prefix_set(ell, 5) == {X, Y, Z}
    assert prefix_set(LexOrder.of(X), 0) == frozenset()
    assert prefix_set(ell, len(ell)) == set(ell.seq)
    with pytest.raises(ValueError):
        prefix_set(ell, -1)


def test_l_cover():
    assert l_cover(SearchSet([Search.of(X), Search.of(X, Y)]), IndexSet((LexOrder.of(X, Y),)))
    assert not l_cover(SearchSet([Search.of(X, Z)]), IndexSet((LexOrder.of(X, Y, Z),)))
    assert l_cover(SearchSet(), IndexSet())


def test_l_cover_is_monotone(motivating_searches):
    orders = [LexOrder.of(X, Y, Z)]
    assert not l_cover(motivating_searches, orders)
    assert l_cover(motivating_searches, orders + [LexOrder.of(X, Z)])
    assert l_cover(motivating_searches, orders + [LexOrder.of(X, Z), LexOrder.of(Z)])


def test_c_cover(motivating_searches):
    xy = Chain((Search.of(X), Search.of(X, Y)))
    assert c_cover(SearchSet([Search.of(X), Search.of(X, Y)]), ChainCover((xy,)))
    assert not c_cover(SearchSet([Search.of(X), Search.of(X, Z)]), ChainCover((xy,)))
    cover = ChainCover((Chain((Search.of(X), Search.of(X, Y), Search.of(X, Y, Z))), Chain((Search.of(X, Z),))))
    assert c_cover(motivating_searches, cover)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (Search.of(X), Search.of(X, Y), True),
        (Search.of(X, Y), Search.of(X, Y), False),
        (Search.of(X, Y), Search.of(X, Z), False),
        (Search.of(X, Y, Z), Search.of(X), False),
    ],
)
def test_is_strict_subset(a, b, expected):
    assert is_strict_subset(a, b) is expected


def test_covers_needs_exact_prefix():
    ell = LexOrder.of(Y, X, Z)
    assert covers(ell, Search.of(Y))
    assert covers(ell, Search.of(X, Y))
    assert not covers(ell, Search.of(X))
    assert not covers(ell, Search.of(Y, Z))


def test_search_set_canonical_order():
    q = SearchSet([Search.of(X, Y, Z), Search.of(Z), Search.of(X, Z), Search.of(X), Search.of(X)])
    assert len(q) == 4
    assert [s.ids() for s in q] == [(X,), (Z,), (X, Z), (X, Y, Z)]
    assert q == SearchSet(reversed(list(q)))


def test_search_and_order_validation():
    with pytest.raises(ValueError):
        Search(0)
    with pytest.raises(ValueError):
        LexOrder(())
    with pytest.raises(ValueError):
        LexOrder.of(X, Y, X)


def test_lex_order_extend():
    assert LexOrder.of(Z).extend(3).seq == (Z, X, Y)
    assert LexOrder.of(X, Z).extend(3).starts_with(LexOrder.of(X, Z))
    assert LexOrder.identity(3).seq == (X, Y, Z)


def test_index_set_dedups_equal_sequences():
    orders = IndexSet((LexOrder.of(X, Z), LexOrder.of(X, Z), LexOrder.of(Z, X)))
    assert len(orders) == 2


def test_chain_requires_strict_inclusion():
    with pytest.raises(ValueError):
        Chain((Search.of(X, Y), Search.of(X, Z)))
    assert Chain((Search.of(X), Search.of(X, Y))).head == Search.of(X)


def test_schema():
    schema = Schema.of("A", ["x", "y", "z"])
    assert schema.arity == 3
    assert schema.attribute("z").id == Z
    with pytest.raises(SchemaError):
        Schema.of("A", [])
    with pytest.raises(SchemaError):
        Schema.of("A", ["x", "x"])
    with pytest.raises(SchemaError):
        Schema.of("A", [f"a{i}" for i in range(65)])
    with pytest.raises(SchemaError):
        schema.attribute("w")
