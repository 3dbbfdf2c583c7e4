"""Cyclic quotient singularities attached to the edge cones of a polygon."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .lattice import EdgeData, Polygon, cross, xgcd


class NotCoprime(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class BasketNotResidual(ValueError):
    code = "BasketNotResidual"


class BasketSyntaxError(ValueError):
    code = "BasketSyntaxError"


@dataclass(frozen=True, order=True)
class QuotientSingularity:
    """The cyclic quotient singularity 1/R(1,a).

    ``a`` is stored as the smaller of ``a`` and its inverse modulo ``R``, so
    the two descriptions of the same cone compare equal.  ``R == 1`` (with
    ``a == 0``) is the smooth cone.
    """

    R: int
    a: int

    def __post_init__(self):
        R, a = self.R, self.a
        if R < 1:
            raise OutOfRange(f"group order {R} must be positive")
        if R == 1:
            object.__setattr__(self, "a", 0)
            return
        a %= R
        if gcd(a, R) != 1:
            raise NotCoprime(f"gcd({a}, {R}) != 1")
        object.__setattr__(self, "a", min(a, pow(a, -1, R)))

    @property
    def is_smooth(self) -> bool:
        return self.R == 1

    @property
    def k(self) -> int:
        return gcd(self.a + 1, self.R)

    @property
    def r(self) -> int:
        return self.R // self.k

    @property
    def c(self) -> int:
        return (self.a + 1) // self.k

    def __str__(self) -> str:
        return f"1/{self.R}(1,{self.a})"


SMOOTH = QuotientSingularity(1, 0)


def is_T_singularity(s: QuotientSingularity) -> bool:
    return s.k % s.r == 0


def is_R_singularity(s: QuotientSingularity) -> bool:
    return s.k < s.r


def _cone_weight(p0, p1) -> tuple[int, int]:
    """Return ``(R, a)`` with the cone on ``p0, p1`` of type 1/R(1,a)."""
    R = abs(cross(p0, p1))
    if R == 0:
        raise ValueError("degenerate cone")
    # Row (p0y, -p0x) kills p0, row (s, t) sends it to 1; together they
    # map p0 to (0, 1) and p1 to (+-R, w), and 1/R(1,a) has a = -w mod R.
    _, s, t = xgcd(p0[0], p0[1])
    w = s * p1[0] + t * p1[1]
    return R, (-w) % R


def cone_singularity(e: EdgeData) -> QuotientSingularity:
    """Type of the cone spanned by an edge; :data:`SMOOTH` if R == 1."""
    R, a = _cone_weight(e.start, e.end)
    if R == 1:
        return SMOOTH
    return QuotientSingularity(R, a)


def hj_fraction(p: int, q: int) -> list[int]:
    """Hirzebruch-Jung continued fraction of ``p/q``, entries >= 2."""
    if not 0 < q < p:
        raise OutOfRange(f"need 0 < q < p, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    out = []
    while q:
        a = -(-p // q)
        out.append(a)
        p, q = q, a * q - p
    return out


def hj_value(entries: Iterable[int]) -> Fraction:
    """Evaluate ``[a1, ..., ak] = a1 - 1/(a2 - 1/(...))``."""
    entries = list(entries)
    val = Fraction(entries[-1])
    for a in reversed(entries[:-1]):
        val = a - 1 / val
    return val


def residue_of(s: QuotientSingularity) -> tuple[int, Optional[QuotientSingularity]]:
    """Singularity content ``(n, residue)`` of a single cyclic quotient singularity."""
    if s.is_smooth:
        return 1, None
    k, r, c = s.k, s.r, s.c
    n, k0 = divmod(k, r)
    if k0 == 0:
        return n, None
    return n, QuotientSingularity(k0 * r, k0 * c - 1)


def edge_singularity_content(e: EdgeData) -> tuple[int, Optional[QuotientSingularity]]:
    """``(n, residue)`` of an edge: ``length = n * height + k0``."""
    n, k0 = divmod(e.length, e.height)
    if k0 == 0:
        return n, None
    s = cone_singularity(e)
    return n, QuotientSingularity(k0 * e.height, k0 * s.c - 1)


@dataclass(frozen=True)
class SingularityContent:
    n: int
    basket: tuple[QuotientSingularity, ...]  # cyclic order around the polygon

    def multiset(self) -> tuple[QuotientSingularity, ...]:
        return tuple(sorted(self.basket))

    def key(self) -> tuple:
        return (self.n, self.multiset())

    def __str__(self) -> str:
        return f"({self.n}, {format_basket(self.basket)})"


def singularity_content(p: Polygon) -> SingularityContent:
    n = 0
    basket = []
    for e in p.edges():
        ni, res = edge_singularity_content(e)
        n += ni
        if res is not None:
            basket.append(res)
    return SingularityContent(n, tuple(basket))


def max_local_index(p: Polygon) -> int:
    return max(e.height for e in p.edges())


def basket_max_index(basket: Iterable[QuotientSingularity]) -> int:
    return max((s.r for s in basket), default=1)


_TERM = re.compile(r"^(?:(\d+)x)?1/(\d+)\(1,(\d+)\)$")


def parse_basket(text: str) -> tuple[QuotientSingularity, ...]:
    """Parse ``"1x1/3(1,1) + 2x1/6(1,1)"`` into a sorted multiset.

    A missing multiplicity means 1; an empty string is the empty basket.
    """
    compact = re.sub(r"\s+", "", text)
    if not compact:
        return ()
    out: list[QuotientSingularity] = []
    for term in compact.split("+"):
        m = _TERM.match(term)
        if not m:
            raise BasketSyntaxError(f"cannot parse basket term {term!r}")
        mult = int(m.group(1) or 1)
        s = QuotientSingularity(int(m.group(2)), int(m.group(3)))
        if not is_R_singularity(s):
            raise BasketNotResidual(f"{s} is not an R-singularity")
        out.extend([s] * mult)
    return tuple(sorted(out))


def format_basket(basket: Iterable[QuotientSingularity]) -> str:
    counts = Counter(basket)
    if not counts:
        return "{}"
    return "{" + ", ".join(f"{m} x {s}" for s, m in sorted(counts.items())) + "}"
