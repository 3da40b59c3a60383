import pytest

from autoindex.core import Search, SearchSet

X, Y, Z = 0, 1, 2


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large-instance checks (deselect with -m 'not slow')")


@pytest.fixture
def motivating_searches() -> SearchSet:
    """{x}, {x,y}, {x,z}, {x,y,z} over A(x, y, z)."""
    return SearchSet([Search.of(X), Search.of(X, Y), Search.of(X, Z), Search.of(X, Y, Z)])
