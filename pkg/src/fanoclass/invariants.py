"""Degree and Hilbert series of the toric surface of a Fano polygon.

Everything here is exact: rationals are :class:`fractions.Fraction` and
polynomials in ``t`` are tuples of coefficients, constant term first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .lattice import Point, Polygon, cross, gcd
from .singularity import (
    QuotientSingularity,
    _cone_weight,
    hj_fraction,
    singularity_content,
)


class NotHyperplaneSummable(ValueError):
    pass


Poly = tuple[Fraction, ...]


def _trim(p: Sequence) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(Fraction(c) for c in p)


def poly_add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_divmod(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    p, q = list(_trim(p)), _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return (), tuple(p)
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(p) - len(q), -1, -1):
        c = p[i + len(q) - 1] / lead
        quot[i] = c
        if c:
            for j, b in enumerate(q):
                p[i + j] -= c * b
    return _trim(quot), _trim(p[: len(q) - 1])


def one_minus_t_pow(d: int) -> Poly:
    return _trim([1] + [0] * (d - 1) + [-1])


@dataclass(frozen=True)
class RationalFunction1:
    """``numerator / prod (1 - t^d)^e`` with ``denominator = ((d, e), ...)``."""

    numerator: Poly
    denominator: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, numerator: Sequence, denominator: Iterable[tuple[int, int]] = ()):
        den: dict[int, int] = {}
        for d, e in denominator:
            if e:
                den[d] = den.get(d, 0) + e
        return cls(_trim(numerator), tuple(sorted(den.items())))

    def denominator_poly(self) -> Poly:
        out: Poly = (Fraction(1),)
        for d, e in self.denominator:
            for _ in range(e):
                out = poly_mul(out, one_minus_t_pow(d))
        return out

    def __add__(self, other: "RationalFunction1") -> "RationalFunction1":
        den = dict(self.denominator)
        for d, e in other.denominator:
            den[d] = max(den.get(d, 0), e)
        num = poly_add(self._lift(den), other._lift(den))
        return RationalFunction1.make(num, den.items()).normalized()

    def _lift(self, den: dict[int, int]) -> Poly:
        # Numerator over the larger denominator ``den`` (a multiple of ours).
        num = self.numerator
        own = dict(self.denominator)
        for d, e in den.items():
            for _ in range(e - own.get(d, 0)):
                num = poly_mul(num, one_minus_t_pow(d))
        return num

    def __neg__(self):
        return RationalFunction1(tuple(-c for c in self.numerator), self.denominator)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction1):
            return NotImplemented
        return poly_mul(self.numerator, other.denominator_poly()) == poly_mul(
            other.numerator, self.denominator_poly())

    def __hash__(self):
        n = self.normalized()
        return hash((n.numerator, n.denominator))

    def is_zero(self) -> bool:
        return not self.numerator

    def normalized(self) -> "RationalFunction1":
        """Cancel factors of the numerator against the denominator.

        Whole factors ``(1 - t^d)`` are cancelled first; then each remaining
        ``(1 - t^d)`` is shrunk to ``(1 - t^d')`` for the smallest divisor
        ``d'`` of ``d`` such that ``(1 - t^d)/(1 - t^d')`` divides the
        numerator.
        """
        num = self.numerator
        if not num:
            return RationalFunction1((), ())
        den = dict(self.denominator)
        changed = True
        while changed:
            changed = False
            for d in sorted(den, reverse=True):
                if not den[d]:
                    continue
                q, r = poly_divmod(num, one_minus_t_pow(d))
                if not r:
                    num, den[d] = q, den[d] - 1
                    changed = True
                    continue
                for dd in range(1, d):
                    if d % dd:
                        continue
                    cyc = _trim([1 if i % dd == 0 else 0 for i in range(d - dd + 1)])
                    q, r = poly_divmod(num, cyc)
                    if not r:
                        num = q
                        den[d] -= 1
                        den[dd] = den.get(dd, 0) + 1
                        changed = True
                        break
        return RationalFunction1.make(num, den.items())

    def series(self, order: int) -> list[Fraction]:
        """Power series coefficients of t^0 .. t^order."""
        den = self.denominator_poly()
        out: list[Fraction] = []
        for i in range(order + 1):
            c = self.numerator[i] if i < len(self.numerator) else Fraction(0)
            for j in range(1, min(i, len(den) - 1) + 1):
                c -= den[j] * out[i - j]
            out.append(c / den[0])
        return out

    def __str__(self) -> str:
        return f"({_poly_str(self.numerator)}) / {_den_str(self.denominator)}"

    def to_json(self) -> dict:
        return {
            "numerator": [str(c) for c in self.numerator],
            "denominator": [[d, e] for d, e in self.denominator],
        }


def _poly_str(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c:
            terms.append(f"{c}" + ("" if i == 0 else "*t" if i == 1 else f"*t^{i}"))
    return " + ".join(terms)


def _den_str(den) -> str:
    if not den:
        return "1"
    return "".join(f"(1-t^{d})" + (f"^{e}" if e > 1 else "") for d, e in den)


@dataclass(frozen=True)
class DiscrepancyData:
    singularity: QuotientSingularity
    hj: tuple[int, ...]
    alphas: tuple[int, ...]
    betas: tuple[int, ...]
    discrepancies: tuple[Fraction, ...]


def discrepancies(s: QuotientSingularity) -> DiscrepancyData:
    """Discrepancies of the minimal resolution of 1/R(1,b), from [R/b]."""
    if s.is_smooth:
        return DiscrepancyData(s, (), (), (), ())
    R = s.R
    hj = hj_fraction(R, s.a)
    k = len(hj)
    alphas = [0, 1]
    for i in range(1, k):
        alphas.append(hj[i - 1] * alphas[-1] - alphas[-2])
    betas = [1, 0]
    for i in range(k - 1, 0, -1):
        betas.insert(0, hj[i] * betas[0] - betas[1])
    alphas, betas = alphas[1:], betas[:-1]
    ds = tuple(Fraction(al + be, R) - 1 for al, be in zip(alphas, betas))
    return DiscrepancyData(s, tuple(hj), tuple(alphas), tuple(betas), ds)


def degree_contribution(s: QuotientSingularity) -> Fraction:
    data = discrepancies(s)
    d, a = data.discrepancies, data.hj
    k = len(d)
    return (k + 1 - sum(d[i] ** 2 * a[i] for i in range(k))
            + 2 * sum(d[i] * d[i + 1] for i in range(k - 1)))


@lru_cache(maxsize=None)
def _delta_table(R: int, b: int) -> tuple[Fraction, ...]:
    # delta_j = 1/R * sum_{eps != 1} eps^j / ((1 - eps)(1 - eps^b)), using
    # 1/(1 - eps) = -(1/R) sum_m m eps^m over the R-th roots of unity.
    binv = pow(b, -1, R)
    sq = (R * (R - 1) // 2) ** 2
    out = []
    for j in range(R):
        acc = 0
        for m in range(R):
            acc += m * ((-(j + m) * binv) % R)
        out.append(Fraction(R * acc - sq, R ** 3))
    return tuple(out)


def dedekind_delta(s: QuotientSingularity, j: int) -> Fraction:
    """The Dedekind sum delta_j of 1/R(1,b) (weight ``b`` in the denominator)."""
    return _delta_table(s.R, s.a)[j % s.R]


def riemann_roch_term(s: QuotientSingularity) -> RationalFunction1:
    """Riemann-Roch contribution Q of 1/R(1,b), shift ``b + 1``."""
    if s.is_smooth:
        return RationalFunction1((), ())
    R, b = s.R, s.a
    delta = _delta_table(R, b)
    num = [delta[((b + 1) * i) % R] - delta[0] for i in range(1, R)]
    return RationalFunction1.make(num, [(R, 1)]).normalized()


def anticanonical_degree(p: Polygon) -> Fraction:
    sc = singularity_content(p)
    return 12 - sc.n - sum((degree_contribution(s) for s in sc.basket), Fraction(0))


def degree_from_content(n: int, basket: Iterable[QuotientSingularity]) -> Fraction:
    return 12 - n - sum((degree_contribution(s) for s in basket), Fraction(0))


def hilbert_series(p: Polygon) -> RationalFunction1:
    """Anticanonical Hilbert series, normalized."""
    sc = singularity_content(p)
    deg = degree_from_content(sc.n, sc.basket)
    total = RationalFunction1.make([1, deg - 2, 1], [(1, 3)])
    for s in sc.basket:
        total = total + riemann_roch_term(s)
    return total.normalized()


def shattering_check(cones: Sequence[tuple[Point, Point]]) -> tuple[RationalFunction1, Fraction]:
    """Sum Q and A over consecutive cones whose rays lie on one affine line.

    ``cones`` is ``[(u, v), (v, w), ...]``; the hyperplane sum is the cone on
    the first and last rays.
    """
    if not cones:
        raise NotHyperplaneSummable("no cones given")
    rays = [cones[0][0]]
    for i, (u, v) in enumerate(cones):
        if u != rays[-1]:
            raise NotHyperplaneSummable(f"cone {i} does not start at the previous ray")
        rays.append(v)
    for r in rays:
        if gcd(r[0], r[1]) != 1:
            raise NotHyperplaneSummable(f"ray {r} is not primitive")
    d0 = (rays[1][0] - rays[0][0], rays[1][1] - rays[0][1])
    for u, v in zip(rays, rays[1:]):
        d = (v[0] - u[0], v[1] - u[1])
        if cross(d, d0) != 0 or d[0] * d0[0] + d[1] * d0[1] <= 0:
            raise NotHyperplaneSummable("edge vectors are not parallel")
    if cross(rays[0], d0) == 0:
        raise NotHyperplaneSummable("rays lie on a line through the origin")
    sum_q = RationalFunction1((), ())
    sum_a = Fraction(0)
    for u, v in cones:
        R, a = _cone_weight(u, v)
        s = QuotientSingularity(R, a)
        sum_q = sum_q + riemann_roch_term(s)
        sum_a += degree_contribution(s)
    return sum_q.normalized(), sum_a
