"""Laurent polynomials in x, y with symbolic coefficients, and their periods.

The classical period of ``f`` is the sequence ``pi_n = [f^n]_0`` of constant
terms of its powers.  Coefficients live in a polynomial ring over Q in named
parameters, so periods come out as parameter polynomials.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Mapping, Optional, Sequence, Union

from .lattice import Polygon

# A monomial in the parameters: sorted ((name, exponent), ...) pairs.
Monomial = tuple[tuple[str, int], ...]


class LaurentParseError(ValueError):
    code = "LaurentParseError"


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for k, e in m2:
        out[k] = out.get(k, 0) + e
    return tuple(sorted(out.items()))


class CoeffPoly:
    """Sparse polynomial over Q in named parameters."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Fraction]] = None):
        self.terms: dict[Monomial, Fraction] = {
            m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "CoeffPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "CoeffPoly":
        return cls({((name, power),): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CoeffPoly.const(other)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return CoeffPoly(out)

    def __neg__(self):
        return CoeffPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "CoeffPoly") -> "CoeffPoly":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return CoeffPoly(out)

    def parameters(self) -> set[str]:
        return {k for m in self.terms for k, _ in m}

    def rename(self, mapping: Mapping[str, str]) -> "CoeffPoly":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((mapping.get(k, k), e) for k, e in m))
            out[nm] = out.get(nm, 0) + c
        return CoeffPoly(out)

    def substitute(self, values: Mapping[str, Fraction]) -> "CoeffPoly":
        out = CoeffPoly()
        for m, c in self.terms.items():
            term = CoeffPoly.const(c)
            for k, e in m:
                term = term * (CoeffPoly.const(Fraction(values[k]) ** e) if k in values
                               else CoeffPoly.var(k, e))
            out = out + term
        return out

    def _sorted_terms(self):
        # Higher total degree first, then by monomial.
        return sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._sorted_terms():
            mono = "*".join(k if e == 1 else f"{k}^{e}" for k, e in m)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_json(self) -> list:
        return [[{k: e for k, e in m}, str(c)] for m, c in self._sorted_terms()]


Exponent = tuple[int, int]


class LaurentPoly:
    """Sparse Laurent polynomial: ``{(i, j): coefficient of x^i y^j}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, CoeffPoly]] = None):
        self.terms: dict[Exponent, CoeffPoly] = {}
        for e, c in (terms or {}).items():
            if not isinstance(c, CoeffPoly):
                c = CoeffPoly.const(c)
            if c:
                self.terms[(int(e[0]), int(e[1]))] = c

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_laurent(text)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[Exponent, CoeffPoly] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return LaurentPoly(out)

    def constant_term(self) -> CoeffPoly:
        return self.terms.get((0, 0), CoeffPoly())

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    def parameters(self) -> set[str]:
        out: set[str] = set()
        for c in self.terms.values():
            out |= c.parameters()
        return out

    def substitute(self, values: Mapping[str, Fraction]) -> "LaurentPoly":
        return LaurentPoly({e: c.substitute(values) for e, c in self.terms.items()})

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        return LaurentPoly({e: c.rename(mapping) for e, c in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda t: (-t[0][1], -t[0][0])):
            mono = "*".join(s for s in (_var("x", i), _var("y", j)) if s)
            cs = str(c)
            if len(c.terms) > 1:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


def _var(name: str, e: int) -> str:
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)|(\^\s*\(?\s*-?\d+\s*\)?)|([*+\-/()]))")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse a sum of terms such as ``3*x^-1*y^2 + a*y^3 - 1/(x*y)``.

    ``x`` and ``y`` are the Laurent variables; any other identifier is a
    parameter.  A term is a product of factors; ``1/(...)`` divides by a
    product of powers of ``x`` and ``y``.
    """
    src = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise LaurentParseError(f"unexpected character at {pos}: {src[pos:pos + 10]!r}")
        pos = m.end()
        num, ident, power, op = m.groups()
        if num is not None:
            tokens.append(("num", Fraction(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        elif power is not None:
            tokens.append(("pow", int(re.sub(r"[\s^()]", "", power))))
        elif op is not None:
            tokens.append(("op", op))
        while pos < len(src) and src[pos].isspace():
            pos += 1
    if not tokens:
        raise LaurentParseError("empty polynomial")

    out: dict[Exponent, CoeffPoly] = {}
    i = 0

    def factor_list(i, stop_ops):
        # Parse factors joined by '*' until a token in stop_ops.
        coef = CoeffPoly.const(1)
        ex = [0, 0]
        expect = True
        while i < len(tokens) and not (tokens[i][0] == "op" and tokens[i][1] in stop_ops):
            kind, val = tokens[i]
            if kind == "op" and val == "*":
                if expect:
                    raise LaurentParseError("misplaced '*'")
                expect = True
                i += 1
                continue
            if not expect:
                raise LaurentParseError(f"missing '*' before {val!r}")
            expect = False
            if kind == "num":
                if i + 2 < len(tokens) and tokens[i + 1] == ("op", "/") and tokens[i + 2] == ("op", "("):
                    # num/(x^i*y^j)
                    j = i + 3
                    c2, e2, j = factor_list(j, {")"})
                    if j >= len(tokens) or tokens[j] != ("op", ")"):
                        raise LaurentParseError("unbalanced parenthesis")
                    if c2 != CoeffPoly.const(1):
                        raise LaurentParseError("only monomials in x, y may appear in a denominator")
                    coef = coef * CoeffPoly.const(val)
                    ex[0] -= e2[0]
                    ex[1] -= e2[1]
                    i = j + 1
                    continue
                coef = coef * CoeffPoly.const(val)
                i += 1
            elif kind == "id":
                p = 1
                if i + 1 < len(tokens) and tokens[i + 1][0] == "pow":
                    p = tokens[i + 1][1]
                    i += 1
                if val in ("x", "y"):
                    ex[0 if val == "x" else 1] += p
                else:
                    if p < 0:
                        raise LaurentParseError(f"negative power of parameter {val}")
                    coef = coef * CoeffPoly.var(val, p)
                i += 1
            else:
                raise LaurentParseError(f"unexpected token {val!r}")
        if expect:
            raise LaurentParseError("term ends unexpectedly")
        return coef, ex, i

    sign = 1
    if tokens[0] == ("op", "-"):
        sign, i = -1, 1
    elif tokens[0] == ("op", "+"):
        i = 1
    while True:
        coef, ex, i = factor_list(i, {"+", "-"})
        key = (ex[0], ex[1])
        term = coef if sign > 0 else -coef
        out[key] = out[key] + term if key in out else term
        if i >= len(tokens):
            break
        sign = 1 if tokens[i][1] == "+" else -1
        i += 1
    return LaurentPoly(out)


@dataclass(frozen=True)
class PeriodPrefix:
    """``pi_0, ..., pi_N`` as parameter polynomials."""

    values: tuple[CoeffPoly, ...]

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n) -> CoeffPoly:
        return self.values[n]

    def parameters(self) -> set[str]:
        out: set[str] = set()
        for v in self.values:
            out |= v.parameters()
        return out

    def rename(self, mapping: Mapping[str, str]) -> "PeriodPrefix":
        return PeriodPrefix(tuple(v.rename(mapping) for v in self.values))

    def to_json(self) -> list:
        return [str(v) for v in self.values]

    def __str__(self) -> str:
        parts = []
        for n, v in enumerate(self.values):
            if not v:
                continue
            s = str(v)
            if len(v.terms) > 1:
                s = f"({s})"
            parts.append(s if n == 0 else f"{s}*t^{n}" if n > 1 else f"{s}*t")
        return " + ".join(parts) + " + ..."

    @classmethod
    def parse(cls, items: Sequence[str]) -> "PeriodPrefix":
        vals = []
        for s in items:
            lp = parse_laurent(s)
            if set(lp.terms) - {(0, 0)}:
                raise LaurentParseError(f"period entry {s!r} mentions x or y")
            vals.append(lp.constant_term())
        return cls(tuple(vals))


def _window(f: LaurentPoly):
    # Inequalities <e, u> >= -h of Newt(f), or None if 0 is not interior.
    try:
        p = Polygon(f.support())
    except ValueError:
        return None
    return [(e.inner_normal, e.height) for e in p.edges()]


def period_prefix(f: LaurentPoly, n_max: int) -> PeriodPrefix:
    """Constant terms of ``f^0 .. f^n_max``.

    After ``k`` factors only exponents ``e`` with ``-e`` in ``(n_max - k)``
    times the Newton polygon can still reach the constant term, so the
    rest of each power is dropped.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    ineqs = _window(f)
    vals = [CoeffPoly.const(1)]
    power = LaurentPoly({(0, 0): CoeffPoly.const(1)})
    for k in range(1, n_max + 1):
        power = power * f
        if ineqs is not None:
            rest = n_max - k
            power = LaurentPoly({
                e: c for e, c in power.terms.items()
                if all(-(e[0] * u[0] + e[1] * u[1]) >= -rest * h for u, h in ineqs)})
        vals.append(power.constant_term())
    return PeriodPrefix(tuple(vals))


def period_prefix_dense(f: LaurentPoly, n_max: int) -> PeriodPrefix:
    """Reference computation without pruning."""
    vals = [CoeffPoly.const(1)]
    power = LaurentPoly({(0, 0): CoeffPoly.const(1)})
    for _ in range(n_max):
        power = power * f
        vals.append(power.constant_term())
    return PeriodPrefix(tuple(vals))


DISTINCT = "DISTINCT"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class PeriodComparison:
    verdict: str
    # first index at which the prefixes differ under the chosen renaming(s)
    witness: Optional[int]
    renaming: Optional[dict]

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness, "renaming": self.renaming}


def _as_prefix(f, n_max) -> PeriodPrefix:
    if isinstance(f, PeriodPrefix):
        return PeriodPrefix(f.values[: n_max + 1])
    return period_prefix(f, n_max)


def _first_difference(p: PeriodPrefix, q: PeriodPrefix) -> Optional[int]:
    for n in range(min(len(p), len(q))):
        if p[n] != q[n]:
            return n
    return None


def periods_distinct(f: Union[LaurentPoly, PeriodPrefix], g: Union[LaurentPoly, PeriodPrefix],
                     n_max: int = 5, correspondence: Optional[Mapping[str, str]] = None
                     ) -> PeriodComparison:
    """Compare period prefixes as parameter polynomials.

    With ``correspondence`` (parameters of ``g`` to those of ``f``) only that
    renaming is tried.  Otherwise every injective renaming of ``g``'s
    parameters into ``f``'s (or fresh names) is tried, and the verdict is
    DISTINCT only if all of them leave a difference.  Agreement as
    polynomials is INCONCLUSIVE: equal periods do not prove equivalence.
    """
    pf, pg = _as_prefix(f, n_max), _as_prefix(g, n_max)
    if correspondence is not None:
        w = _first_difference(pf, pg.rename(correspondence))
        if w is None:
            return PeriodComparison(INCONCLUSIVE, None, dict(correspondence))
        return PeriodComparison(DISTINCT, w, dict(correspondence))
    fp, gp = sorted(pf.parameters()), sorted(pg.parameters())
    fresh = [f"_{k}" for k in range(len(gp))]
    witness = None
    for image in itertools.permutations(fp + fresh, len(gp)):
        mapping = dict(zip(gp, image))
        w = _first_difference(pf, pg.rename(mapping))
        if w is None:
            return PeriodComparison(INCONCLUSIVE, None, mapping)
        witness = w if witness is None else min(witness, w)
    return PeriodComparison(DISTINCT, witness, None)


def newton_polygon(f: LaurentPoly) -> Polygon:
    return Polygon(f.support())


@dataclass(frozen=True)
class PeriodFixture:
    """A shipped polynomial or printed period prefix for one table row."""

    row: str
    polynomial: Optional[LaurentPoly]
    printed: PeriodPrefix
    # polynomial parameter -> name used in the printed period
    printed_names: dict
    provenance: str

    def period(self, n_max: int = 5) -> PeriodPrefix:
        if self.polynomial is None:
            return PeriodPrefix(self.printed.values[: n_max + 1])
        return period_prefix(self.polynomial, n_max).rename(self.printed_names)


def load_fixtures() -> dict[str, PeriodFixture]:
    """Fixtures keyed by table row, from the packaged data directory."""
    raw = json.loads(resources.files("fanoclass").joinpath("data/periods.json").read_text())
    out = {}
    for row, item in raw["fixtures"].items():
        poly = parse_laurent(item["polynomial"]) if item.get("polynomial") else None
        out[row] = PeriodFixture(
            row=row,
            polynomial=poly,
            printed=PeriodPrefix.parse(item["printed_period"]),
            printed_names=dict(item.get("printed_names", {})),
            provenance=item["provenance"],
        )
    return out


def fixture_pairs() -> list[tuple[str, str]]:
    raw = json.loads(resources.files("fanoclass").joinpath("data/periods.json").read_text())
    return [tuple(p) for p in raw["separated_pairs"]]
