import random
from fractions import Fraction as F

import pytest

from fanoclass.laurent import (
    DISTINCT,
    INCONCLUSIVE,
    CoeffPoly,
    LaurentParseError,
    LaurentPoly,
    PeriodPrefix,
    fixture_pairs,
    load_fixtures,
    newton_polygon,
    parse_laurent,
    period_prefix,
    period_prefix_dense,
    periods_distinct,
)
from fanoclass.lattice import NotFullDimensional, Polygon

from conftest import P2


def ints(prefix):
    return [str(v) for v in prefix.values]


def test_p2_period():
    f = parse_laurent("x + y + 1/(x*y)")
    assert ints(period_prefix(f, 6)) == ["1", "0", "0", "6", "0", "0", "90"]
    assert ints(period_prefix(f, 3)) == ["1", "0", "0", "6"]


def test_parse_forms():
    a = parse_laurent("x + y + x^-1*y^-1")
    assert parse_laurent("y + x + 1/(x*y)") == a
    assert parse_laurent("x + y + x^(-1)*y^(-1)  # comment") == a
    b = parse_laurent("-2*a*x + 1/2*y - b^2*x + 3")
    assert b.terms[(1, 0)] == CoeffPoly.var("a") * CoeffPoly.const(-2) - CoeffPoly.var("b", 2)
    assert b.terms[(0, 1)] == CoeffPoly.const(F(1, 2))
    assert b.terms[(0, 0)] == CoeffPoly.const(3)


@pytest.mark.parametrize("text", ["", "x +", "x * * y", "x y", "a^-1*x", "1/(a*x)", "x + $"])
def test_parse_errors(text):
    with pytest.raises(LaurentParseError):
        parse_laurent(text)


def test_fixture_periods_match_printed():
    fx = load_fixtures()
    for row in ("1.7", "1.8"):
        assert fx[row].polynomial is not None
        assert fx[row].period(5) == fx[row].printed, row


def test_fixture_newton_polygons(table_rows):
    fx = load_fixtures()
    for row in ("1.7", "1.8"):
        assert newton_polygon(fx[row].polynomial) == Polygon(table_rows[row]["vertices"])


def test_newton_polygon_basic():
    assert newton_polygon(parse_laurent("x + y + 1/(x*y)")) == Polygon(P2)
    with pytest.raises(NotFullDimensional):
        newton_polygon(parse_laurent("5"))


def test_dense_equals_pruned():
    fx = load_fixtures()
    polys = [fx["1.7"].polynomial, fx["1.8"].polynomial, parse_laurent("x + y + 1/(x*y)")]
    rng = random.Random(5)
    for _ in range(10):
        terms = {(rng.randint(-2, 2), rng.randint(-2, 2)): CoeffPoly.const(rng.randint(-3, 3) or 1)
                 for _ in range(5)}
        polys.append(LaurentPoly(terms))
    for f in polys:
        assert period_prefix(f, 6) == period_prefix_dense(f, 6)


def test_specialization_commutes():
    f = load_fixtures()["1.7"].polynomial
    values = {"a": F(2), "b": F(-1, 3), "c": F(5)}
    lhs = period_prefix(f.substitute(values), 5)
    rhs = [v.substitute(values) for v in period_prefix(f, 5).values]
    assert list(lhs.values) == rhs


def test_half_plane_support_has_zero_periods():
    f = parse_laurent("x + a*x*y + 3*x^2*y^-1 + x^3")
    assert all(not v for v in period_prefix(f, 6).values[1:])


def test_separations():
    fx = load_fixtures()
    for r1, r2 in fixture_pairs():
        cmp = periods_distinct(fx[r1].period(5), fx[r2].period(5), 5)
        assert cmp.verdict == DISTINCT and cmp.witness == 2
    f = fx["1.7"].polynomial
    assert periods_distinct(f, f, 5).verdict == INCONCLUSIVE


def test_renaming_is_not_evidence():
    f = parse_laurent("x + y + a*x^-1*y^-1")
    g = parse_laurent("x + y + b*x^-1*y^-1")
    assert periods_distinct(f, g, 6).verdict == INCONCLUSIVE
    assert periods_distinct(f, g, 6, correspondence={"b": "b"}).verdict == DISTINCT


def test_prefix_text_round_trip():
    p = load_fixtures()["1.7"].printed
    assert PeriodPrefix.parse([str(v) for v in p.values]) == p
