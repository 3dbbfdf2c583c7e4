from fractions import Fraction
from math import gcd

import pytest

from fanoclass.lattice import Polygon, edge_data
from fanoclass.singularity import (
    SMOOTH,
    BasketNotResidual,
    BasketSyntaxError,
    NotCoprime,
    OutOfRange,
    QuotientSingularity as QS,
    basket_max_index,
    cone_singularity,
    edge_singularity_content,
    format_basket,
    hj_fraction,
    hj_value,
    is_R_singularity,
    is_T_singularity,
    max_local_index,
    parse_basket,
    singularity_content,
)

from conftest import P115, P2

ROW_1_1 = [(-1, 3), (1, 3), (0, -1)]


def _edge(p, start, end):
    return next(e for e in Polygon(p).edges() if {e.start, e.end} == {start, end})


def test_cone_types():
    assert cone_singularity(_edge(P115, (1, 0), (0, 1))) == SMOOTH
    assert cone_singularity(_edge(P115, (0, 1), (-5, -1))) == QS(5, 1)
    # the 1/6 cone of row 1.1 is its own residue: 1/6(1,1), k = 2, r = 3
    s = cone_singularity(_edge(ROW_1_1, (-1, 3), (1, 3)))
    assert s == QS(6, 1) and (s.k, s.r) == (2, 3)


def test_cone_order_equals_triangle_area():
    for verts in (P115, P2, ROW_1_1, [(-3, 5), (-2, 5), (1, -2)]):
        for e in Polygon(verts).edges():
            R = abs(e.start[0] * e.end[1] - e.start[1] * e.end[0])
            assert cone_singularity(e).R == R


def test_transpose_identified():
    assert QS(7, 2) == QS(7, 4)
    assert QS(5, 2) == QS(5, 3)


def test_bad_singularities():
    with pytest.raises(NotCoprime):
        QS(6, 2)
    with pytest.raises(NotCoprime):
        QS(5, 5)
    with pytest.raises(OutOfRange):
        QS(0, 1)


@pytest.mark.parametrize("p,q,want", [(5, 1, [5]), (3, 1, [3]), (7, 4, [2, 4]), (7, 3, [3, 2, 2])])
def test_hj_examples(p, q, want):
    assert hj_fraction(p, q) == want


def test_hj_exhaustive():
    for p in range(2, 201):
        for q in range(1, p):
            if gcd(p, q) == 1:
                hj = hj_fraction(p, q)
                assert min(hj) >= 2 and hj_value(hj) == Fraction(p, q)


def test_hj_errors():
    with pytest.raises(NotCoprime):
        hj_fraction(6, 4)
    with pytest.raises(OutOfRange):
        hj_fraction(3, 3)


def test_edge_content_examples():
    assert edge_singularity_content(_edge(ROW_1_1, (-1, 3), (1, 3))) == (0, QS(6, 1))
    for start, end in (((1, 0), (0, 1)), ((1, 0), (-5, -1))):
        assert edge_singularity_content(_edge(P115, start, end)) == (1, None)
    # height 1: every unit segment is a primitive T-cone
    e = edge_data((-2, 1), (3, 1))
    assert edge_singularity_content(e) == (5, None)


def test_edge_content_division(table_rows):
    for row in table_rows.values():
        for e in Polygon(row["vertices"]).edges():
            n, res = edge_singularity_content(e)
            k0 = e.length - n * e.height
            assert 0 <= k0 < e.height
            assert (res is None) == (k0 == 0)
            if res is not None:
                assert is_R_singularity(res) and res.r == e.height


@pytest.mark.parametrize("verts,n,basket", [
    (P115, 2, (QS(5, 1),)),
    (P2, 3, ()),
    (ROW_1_1, 2, (QS(6, 1),)),
])
def test_singularity_content(verts, n, basket):
    assert singularity_content(Polygon(verts)).key() == (n, basket)


def test_table_contents_match_columns(table_rows):
    for rid, row in table_rows.items():
        sc = singularity_content(Polygon(row["vertices"]))
        assert sc.n == row["n"], rid
        if rid.startswith("1."):
            want = [QS(3, 1)] * row["m1"] + [QS(6, 1)] * row["m2"]
        else:
            want = [QS(5, 1)] * row["m"]
        assert sc.multiset() == tuple(sorted(want)), rid


def test_t_and_r_predicates():
    s = QS(4, 1)
    assert is_T_singularity(s) and not is_R_singularity(s)
    assert is_R_singularity(QS(5, 1)) and not is_T_singularity(QS(5, 1))
    assert is_R_singularity(QS(6, 1)) and not is_T_singularity(QS(6, 1))


def test_t_family_exhaustive():
    for n in range(1, 7):
        for r in range(1, 7):
            for c in range(1, 7):
                R, a = n * r * r, n * r * c - 1
                if R < 2 or gcd(r, c) != 1 or not 0 < a % R:
                    continue
                assert is_T_singularity(QS(R, a % R)), (n, r, c)


def test_max_index():
    assert max_local_index(Polygon(ROW_1_1)) == 3
    assert basket_max_index([QS(5, 1)]) == 5
    assert basket_max_index([QS(3, 1), QS(6, 1)]) == 3
    assert basket_max_index([]) == 1


def test_parse_basket():
    b = parse_basket("1x1/3(1,1) + 2x1/6(1,1)")
    assert b == (QS(3, 1), QS(6, 1), QS(6, 1))
    assert parse_basket(" 1/5(1,1) ") == (QS(5, 1),)
    assert parse_basket("") == ()
    assert format_basket(b) == "{1 x 1/3(1,1), 2 x 1/6(1,1)}"
    with pytest.raises(BasketSyntaxError):
        parse_basket("1/5(1,1) +")
    with pytest.raises(BasketNotResidual):
        parse_basket("1/4(1,1)")
