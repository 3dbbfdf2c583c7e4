import pytest

from fanoclass.classify import reference_table
from fanoclass.lattice import Polygon

SQUARE = [(1, 0), (0, 1), (-1, 0), (0, -1)]
P2 = [(0, 1), (1, 0), (-1, -1)]
P115 = [(0, 1), (1, 0), (-5, -1)]
P115_MUTANT = [(0, 1), (-5, -1), (1, -7)]


@pytest.fixture
def square():
    return Polygon(SQUARE)


@pytest.fixture
def p2():
    return Polygon(P2)


@pytest.fixture
def p115():
    return Polygon(P115)


@pytest.fixture(scope="session")
def table_rows():
    return {r["id"]: r for f in ("1/3+1/6", "1/5") for r in reference_table(f)}
