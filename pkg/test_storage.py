import random
import time

import pytest

from autoindex.core import LexOrder, Schema
from autoindex.errors import ArityMismatchError, CoverViolationError, MissingIndexError, MissingRelationError
from autoindex.storage import (
    BOTTOM,
    TOP,
    UNSPECIFIED,
    Database,
    Relation,
    SymbolTable,
    lb,
    lex_compare,
    make_bounds,
    primitive_search_scan,
    range_search,
    ub,
)

X, Y, Z = 0, 1, 2
SCHEMA = Schema.of("A", ["x", "y", "z"])


def _relation(rows, *orders):
    relation = Relation(SCHEMA, orders)
    for row in rows:
        relation.insert(row)
    return relation


def test_bound_values_order():
    assert BOTTOM < 0 < TOP
    assert BOTTOM < TOP and not TOP < BOTTOM
    assert (5, BOTTOM) < (5, 9) < (5, TOP)
    with pytest.raises(TypeError):
        UNSPECIFIED < 1


def test_lex_compare():
    assert lex_compare(LexOrder.of(X, Y), (1, 2), (1, 3)) == -1
    assert lex_compare(LexOrder.of(Y, X), (1, 2), (2, 1)) == 1
    assert lex_compare(LexOrder.of(X), (5, BOTTOM), (5, 9)) == 0
    assert lex_compare(LexOrder.of(X, Y), (5, BOTTOM), (5, 9)) == -1
    with pytest.raises(ValueError):
        lex_compare(LexOrder.of(X, Y), (5, UNSPECIFIED), (5, 9))


def test_lb_ub():
    assert lb((1, UNSPECIFIED)) == (1, BOTTOM)
    assert ub((1, UNSPECIFIED)) == (1, TOP)


def test_make_bounds():
    a, b = make_bounds([(X, 1), (Y, 2)], LexOrder.of(X, Y, Z))
    assert a == (1, 2, BOTTOM) and b == (1, 2, TOP)
    a, b = make_bounds([(Z, 3), (X, 1)], LexOrder.of(X, Z), arity=3)
    assert a == (1, BOTTOM, 3) and b == (1, TOP, 3)
    a, b = make_bounds([(X, 1), (Y, 2), (Z, 3)], LexOrder.of(X, Y, Z))
    assert a == b == (1, 2, 3)
    with pytest.raises(CoverViolationError):
        make_bounds([(Y, 2)], LexOrder.of(X, Y, Z))


def test_range_search():
    rows = [(1, 1, 1), (1, 2, 3), (2, 1, 1)]
    relation = _relation(rows, LexOrder.of(X))
    a, b = make_bounds([(X, 1)], LexOrder.of(X), 3)
    assert list(range_search(relation, LexOrder.of(X), a, b)) == [(1, 1, 1), (1, 2, 3)]
    assert set(primitive_search_scan(relation, [(X, 1)])) == {(1, 1, 1), (1, 2, 3)}

    point = _relation(rows)
    assert list(range_search(point, LexOrder.of(X, Y, Z), (2, 1, 1), (2, 1, 1))) == [(2, 1, 1)]

    empty = _relation([], LexOrder.of(X))
    assert list(range_search(empty, LexOrder.of(X), a, b)) == []


def test_range_search_requires_covering_index():
    relation = _relation([(1, 1, 1)], LexOrder.of(X, Y))
    with pytest.raises(MissingIndexError):
        range_search(relation, LexOrder.of(Z), (BOTTOM, BOTTOM, 1), (TOP, TOP, 1))
    with pytest.raises(ValueError):
        range_search(relation, LexOrder.of(X), (1, UNSPECIFIED, UNSPECIFIED), (1, TOP, TOP))


def test_primitive_search_scan_edge_cases():
    relation = _relation([(1, 1, 1), (2, 2, 2)])
    assert len(primitive_search_scan(relation, [])) == 2
    assert primitive_search_scan(relation, [(Y, 7)]) == []


def test_insert_counters():
    relation = _relation([], LexOrder.of(X, Y, Z), LexOrder.of(X, Z))
    assert relation.insert((1, 2, 3)) is True
    assert relation.total_inserts == 2
    assert relation.insert((1, 2, 3)) is False
    assert relation.total_inserts == 2
    with pytest.raises(ArityMismatchError):
        relation.insert((1, 2))


def test_naive_and_auto_insert_arithmetic():
    rows = [(i, i % 3, i % 5) for i in range(10)]
    auto = _relation(rows, LexOrder.of(X, Y, Z), LexOrder.of(X, Z))
    naive = _relation(rows, LexOrder.of(X), LexOrder.of(X, Y), LexOrder.of(X, Z), LexOrder.of(X, Y, Z))
    assert (naive.total_inserts, auto.total_inserts) == (40, 20)


def test_indexes_mirror_and_iterate_in_order():
    rng = random.Random(5)
    relation = _relation(
        [tuple(rng.randrange(4) for _ in range(3)) for _ in range(200)],
        LexOrder.of(Z, X),
        LexOrder.of(Y),
    )
    assert relation.mirrors_consistent()
    for index in relation.indexes:
        rows = list(index)
        assert all(lex_compare(index.full_order, a, b) < 0 for a, b in zip(rows, rows[1:]))
    assert relation.primary_order == LexOrder.of(Z, X)
    assert relation.secondary_orders == [LexOrder.of(Y)]


def test_range_search_cover_random():
    rng = random.Random(17)
    for _ in range(500):
        arity = rng.randint(1, 3)
        attrs = rng.sample(range(arity), rng.randint(1, arity))
        rest = [i for i in range(arity) if i not in attrs]
        order = LexOrder(tuple(attrs + rest[: rng.randint(0, len(rest))]))
        schema = Schema.of("R", [f"a{i}" for i in range(arity)])
        relation = Relation(schema, [order])
        for _ in range(rng.randint(0, 300)):
            relation.insert(tuple(rng.randrange(6) for _ in range(arity)))

        pred = [(i, rng.randrange(6)) for i in attrs]
        expected = set(primitive_search_scan(relation, pred))
        shuffled = list(pred)
        rng.shuffle(shuffled)
        a, b = make_bounds(shuffled, order, arity)
        assert set(range_search(relation, order, a, b)) == expected


def test_symbol_table_and_database():
    symbols = SymbolTable()
    assert symbols.intern("b") == 0
    assert symbols.intern("a") == 1
    assert symbols.intern("b") == 0
    assert symbols.decode(1) == "a" and len(symbols) == 2

    db = Database(symbols)
    db.add(Relation(Schema.of("E", ["s", "d"])))
    assert db.load("E", [("a", "c"), ("a", "c"), ("c", "b")]) == 2
    assert db.decoded("E") == [("a", "c"), ("c", "b")]
    with pytest.raises(MissingRelationError):
        db.relation("F")


@pytest.mark.slow
def test_range_search_outpaces_scan_on_large_relation():
    n = 1_000_000
    relation = Relation(SCHEMA, [LexOrder.of(Y, X)])
    for i in range(n):
        relation.insert((i, i // 100, i % 7))
    a, b = make_bounds([(Y, 4242)], LexOrder.of(Y), 3)

    start = time.perf_counter()
    found = list(range_search(relation, LexOrder.of(Y), a, b))
    indexed = time.perf_counter() - start

    start = time.perf_counter()
    expected = primitive_search_scan(relation, [(Y, 4242)])
    scanned = time.perf_counter() - start

    assert len(found) == 100 and set(found) == set(expected)
    assert scanned >= 100 * indexed


def test_per_order_insert_counts():
    relation = _relation([], LexOrder.of(X, Y, Z), LexOrder.of(X, Z))
    assert relation.insert_counts() == {LexOrder.of(X, Y, Z): 0, LexOrder.of(X, Z): 0}

    assert relation.insert((1, 2, 3))
    assert relation.contains((1, 2, 3)) and not relation.contains((3, 2, 1))
    assert relation.insert_counts() == {LexOrder.of(X, Y, Z): 1, LexOrder.of(X, Z): 1}

    assert not relation.insert((1, 2, 3))
    assert relation.insert_counts() == {LexOrder.of(X, Y, Z): 1, LexOrder.of(X, Z): 1}

    assert relation.insert((1, 5, 3))
    assert set(relation.insert_counts().values()) == {2}
    assert relation.total_inserts == sum(relation.insert_counts().values())
