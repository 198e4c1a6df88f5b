"""Catalog of identities as pairs of series expressions, and the engine that checks them.

An expression is a small tree: leaves build a :class:`QSeries` to a requested
order, internal nodes combine children and ask each child for exactly the
precision the combination needs.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Callable, Iterable, Sequence

from . import lambert
from .pseries import LeadingZero, Mismatch, QSeries, at_least
from .qprod import p_value, product, triple_product_theta
from .ranks import rank_diff_series


class UnknownId(KeyError):
    pass


class EvaluationError(ArithmeticError):
    """Evaluation failed; ``subtree`` names the expression that raised."""

    def __init__(self, subtree: str, cause: BaseException):
        super().__init__(f"while evaluating {subtree}: {type(cause).__name__}: {cause}")
        self.subtree = subtree
        self.cause = cause


# -- expression trees ----------------------------------------------------------


def _lift(x) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Const(x)
    raise TypeError(f"cannot use {type(x).__name__} in a series expression")


class Expr:
    """Base class; ``series(N)`` returns the value known exactly below q^N."""

    def series(self, N: int, cache: dict | None = None) -> QSeries:
        if cache is None:
            cache = {}
        key = (id(self), N)
        hit = cache.get(key)
        if hit is not None:
            return hit
        try:
            s = self._eval(N, cache)
        except EvaluationError:
            raise
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(_short(str(self)), exc) from exc
        if s.trunc < N:
            raise EvaluationError(_short(str(self)), ValueError(f"reached only q^{s.trunc}"))
        s = s.truncate(N)
        cache[key] = s
        return s

    def _eval(self, N: int, cache: dict) -> QSeries:
        raise NotImplementedError

    def __add__(self, other):
        return Add(self, _lift(other))

    def __radd__(self, other):
        return Add(_lift(other), self)

    def __sub__(self, other):
        return Sub(self, _lift(other))

    def __rsub__(self, other):
        return Sub(_lift(other), self)

    def __mul__(self, other):
        if isinstance(other, Expr):
            return Mul(self, other)
        return Scale(Fraction(other), self)

    def __rmul__(self, other):
        return Scale(Fraction(other), self)

    def __truediv__(self, other):
        if isinstance(other, Expr):
            return Div(self, other)
        return Scale(1 / Fraction(other), self)

    def __neg__(self):
        return Scale(Fraction(-1), self)

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("only positive powers of expressions are supported")
        out = self
        for _ in range(k - 1):
            out = Mul(out, self)
        return out

    def shift(self, m: int) -> "Expr":
        return Shift(self, m)

    def dilate(self, k: int) -> "Expr":
        return Dilate(self, k)

    def progression(self, ell: int, d: int) -> "Expr":
        return Progression(self, ell, d)


def _short(text: str, limit: int = 160) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


class Leaf(Expr):
    def __init__(self, label: str, build: Callable[[int], QSeries]):
        self.label = label
        self._build = build

    def _eval(self, N, cache):
        return at_least(self._build, N)

    def __str__(self):
        return self.label


class Const(Expr):
    def __init__(self, c):
        self.c = Fraction(c)

    def _eval(self, N, cache):
        return QSeries.monomial(self.c, 0, N) if N > 0 else QSeries.zero(N, N - 1)

    def __str__(self):
        return str(self.c)


class Add(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b

    def _eval(self, N, cache):
        return self.a.series(N, cache) + self.b.series(N, cache)

    def __str__(self):
        return f"({self.a} + {self.b})"


class Sub(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b

    def _eval(self, N, cache):
        return self.a.series(N, cache) - self.b.series(N, cache)

    def __str__(self):
        return f"({self.a} - {self.b})"


class Scale(Expr):
    def __init__(self, c: Fraction, a: Expr):
        self.c, self.a = c, a

    def _eval(self, N, cache):
        return self.a.series(N, cache).scale(self.c)

    def __str__(self):
        return f"{self.c}*{self.a}"


def _valuation(s: QSeries, fallback: int) -> int:
    v = s.valuation()
    return fallback if v is None else v


class Mul(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b

    def _eval(self, N, cache):
        # a*b is known below min(a.trunc + val(b), b.trunc + val(a))
        a = self.a.series(N, cache)
        b = self.b.series(N, cache)
        va, vb = _valuation(a, N), _valuation(b, N)
        if vb < 0:
            a = self.a.series(N - vb, cache)
        if va < 0:
            b = self.b.series(N - va, cache)
        return a.normalized() * b.normalized() if not (a.is_zero() or b.is_zero()) else \
            QSeries.zero(N, min(0, N - 1))

    def __str__(self):
        return f"{self.a}*{self.b}"


class Div(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b

    def _eval(self, N, cache):
        b = self.b.series(N, cache)
        vb = b.valuation()
        if vb is None:
            raise LeadingZero(f"divisor {self.b} vanishes below q^{N}")
        a = self.a.series(N, cache)
        va = _valuation(a, N)
        # 1/b is known below b.trunc - 2 vb and starts at -vb
        a = self.a.series(max(N, N + vb), cache)
        b = self.b.series(max(N, N + 2 * vb - min(va, N)), cache)
        if a.is_zero():
            return QSeries.zero(N, min(0, N - 1))
        return a.normalized() * b.normalized().invert()

    def __str__(self):
        return f"({self.a})/({self.b})"


class Shift(Expr):
    def __init__(self, a: Expr, m: int):
        self.a, self.m = a, m

    def _eval(self, N, cache):
        return self.a.series(max(N - self.m, 1), cache).shift(self.m)

    def __str__(self):
        return f"q^{self.m}*{self.a}"


class Dilate(Expr):
    def __init__(self, a: Expr, k: int):
        if k < 1:
            raise ValueError("dilation factor must be >= 1")
        self.a, self.k = a, k

    def _eval(self, N, cache):
        M = -(-(N - 1) // self.k) + 1
        return self.a.series(M, cache).dilate(self.k)

    def __str__(self):
        return f"{self.a}|q->q^{self.k}"


class Progression(Expr):
    def __init__(self, a: Expr, ell: int, d: int):
        self.a, self.ell, self.d = a, ell, d

    def _eval(self, N, cache):
        M = self.ell * (N - 1) + self.d + 1
        return self.a.series(M, cache).extract_progression(self.ell, self.d)

    def __str__(self):
        return f"[{self.a}]_{{{self.ell}n+{self.d}}}"


# -- leaves ----------------------------------------------------------------------


def Prod(text: str, ell: int | None = None) -> Leaf:
    return Leaf(f"<{text}>", lambda N: product(text, N, ell=ell))


def Mono(c, e: int) -> Leaf:
    return Leaf(f"{c}q^{e}", lambda N: QSeries.monomial(Fraction(c), e, N))


ZERO = Const(0)


def Sigma(a: int, b: int, ell: int) -> Leaf:
    if a == 0:
        return Leaf(f"Sigma(0,{b};{ell})", lambda N: lambert.sigma_0b(b, ell, N))
    return Leaf(f"Sigma({a},{b};{ell})", lambda N: lambert.sigma_ab(a, b, ell, N))


def S2(b: int, ell: int) -> Leaf:
    return Leaf(f"S2bar({b};{ell})", lambda N: lambert.s2bar(b, ell, N))


def G(a: int, ell: int) -> Leaf:
    return Leaf(f"g({a};{ell})", lambda N: lambert.g_of_a(a, ell, N))


def G2(a: int, k: int) -> Leaf:
    return Leaf(f"g2(q^{a},q^{k})", lambda N: lambert.g2_spec(a, k, N))


def G3(a: int, k: int) -> Leaf:
    return Leaf(f"g3(q^{a},q^{k})", lambda N: lambert.g3_spec(a, k, N))


OMEGA = Leaf("omega", lambert.omega)


def Pz(sign: int, j: int, k: int) -> Leaf:
    """``P(sign q^j, q^k)``; identically zero when the argument is a power of q^k."""
    if sign == 1 and j % k == 0:
        return Leaf(f"P(q^{j},q^{k})=0", lambda N: QSeries.zero(N, min(0, N - 1)))
    return Leaf(f"P({'-' if sign < 0 else ''}q^{j},q^{k})", lambda N: p_value(sign, j, k, N))


def P0(ell: int) -> Leaf:
    k = 2 * ell * ell
    return Leaf(f"(q^{k};q^{k})", lambda N: lambert._P0(ell, N))


def TQ(a: int, ell: int) -> Leaf:
    return Leaf(f"TQ({a};{ell})", lambda N: lambert.theta_quotient(a, ell, N))


def Theta(sign: int, j: int, k: int) -> Leaf:
    return Leaf(f"theta({sign},{j},{k})", lambda N: triple_product_theta(sign, j, k, N))


def Lambert(A: int, B: int, D: int, E: int) -> Leaf:
    """``sum_n (-1)^n q^(A n^2 + B n) / (1 - q^(D n + E))``."""
    s = lambert.BilateralSum(A=Fraction(A), B=Fraction(B), denominators=((1, D, E),))
    return Leaf(f"L({A},{B};{D},{E})", lambda N: lambert.expand_bilateral(s, N))


def RankGF(s: int, m: int) -> Leaf:
    return Leaf(f"Nbar2({s},{m};q)", lambda N: lambert.gf_m2_residue(s, m, N))


def RankDiff(kind: str, ell: int, s: int, t: int, d: int, source: str = "analytic") -> Leaf:
    return Leaf(f"{kind}:R{s}{t}({d};{ell})",
                lambda N: rank_diff_series(kind, ell, s, t, d, N, source))


def Decomposed(ell: int, m: int, closed: bool = False) -> Leaf:
    return Leaf(f"decomp({ell},{m},closed={closed})",
                lambda N: lambert.s2bar_decomposed(ell, m, N, closed))


def Bracket(ell: int, m: int) -> Leaf:
    return Leaf(f"bracket({ell},{m})", lambda N: lambert.bracket(ell, m, N))


def BracketClosed(ell: int, m: int) -> Leaf:
    return Leaf(f"bracket*({ell},{m})", lambda N: lambert.bracket_closed(ell, m, N))


def p_ratio(num: Sequence[tuple[int, int, int]], den: Sequence[tuple[int, int, int]]) -> Expr:
    top: Expr = Const(1)
    for s, j, k in num:
        top = top * Pz(s, j, k)
    bottom: Expr = Const(1)
    for s, j, k in den:
        bottom = bottom * Pz(s, j, k)
    return top / bottom


# -- catalog types -----------------------------------------------------------------

TIERS = ("theorem", "lemma", "proof-chain", "property")


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    lhs: Expr
    rhs: Expr
    default_order: int
    anchor: str
    tier: str

    def __post_init__(self):
        if not self.anchor:
            raise ValueError(f"{self.id}: anchor must be nonempty")
        if self.tier not in TIERS:
            raise ValueError(f"{self.id}: unknown tier {self.tier!r}")


@dataclass(frozen=True)
class VerifyReport:
    id: str
    order: int
    passed: bool
    mismatch: Mismatch | None
    millis: int
    error: str | None = None


def required_truncation(N: int, k: int, floor: int = 500) -> int:
    """Verification depth: the dimension-style bound, the quoted 72k at level 10, and a floor."""
    if N < 1:
        raise ValueError("level must be positive")
    factor = Fraction(1)
    n, p = N, 2
    while p * p <= n:
        if n % p == 0:
            factor *= 1 - Fraction(1, p * p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        factor *= 1 - Fraction(1, n * n)
    bound = math.ceil(Fraction(k * N * N, 12) * factor)
    quoted = 72 * k if N == 10 else 0
    return max(bound, quoted, floor)


CHAIN_ORDER = required_truncation(10, 4)


# -- the catalog -----------------------------------------------------------------------


def _theorem_entries() -> list[IdentityCheck]:
    one = Const(1)
    L4 = Lambert(5, 10, 10, 4)
    L2 = Lambert(5, 10, 10, 2)
    P = Prod
    rhs3 = {
        0: -one + P("(-q)(q^3;q^3)^2 / (q)(-q^3;q^3)^2"),
        1: P("2 (q^3;q^3)(q^6;q^6) / (q)"),
        2: P("4 (q^6;q^6)^4 / (q^2;q^2)(q^3;q^3)^2")
        + P("6q (-q^3;q^3) / (q^3;q^3)") * Lambert(3, 6, 6, 2),
    }
    rhs5_12 = {
        0: P("10q^2 (q^10;q^10)^4 (q,q^2,q^8,q^9;q^10) / (q)^3 (q;q^2)")
        + P("2q (q^5;q^5) / (q;q^2)^5 (q^3,q^4,q^6,q^7;q^10)"),
        1: P("-6q^3 (-q^5;q^5) / (q^5;q^5)") * L4
        + P("4q (q^10;q^10)^2 / (q;q^2)^5 (q^4,q^6;q^10)(q^5;q^5)")
        + P("20q^3 (q^10;q^10)^7 (q,q^9;q^10)^2 (q^2,q^8;q^10)^3 / (q)^4 (q^5;q^5)^2"),
        2: P("10q (q^10;q^10)^3 / (q)^2 (q^3,q^7;q^10)^3 (q,q^2,q^8,q^9;q^10)"),
        3: P("10 (q^10;q^10)^3 / (q)^2 (q^3,q^4,q^6,q^7;q^10)(q,q^9;q^10)^3")
        - P("8 (q^5;q^5) / (q;q^2)^5 (q^2,q^3,q^7,q^8;q^10)"),
        4: P("-2q (-q^5;q^5) / (q^5;q^5)") * L2
        + P("4 (q^2;q^2) / (q;q^2)^4 (q^2,q^3,q^7,q^8;q^10)^3"),
    }
    rhs5_02 = {
        0: -one + P("(q^5;q^5)^6 / (q;q^2)^6 (q^3,q^4,q^6,q^7;q^10)(q^10;q^10)^5")
        + P("q^2 (q)(q^10;q^10) / (q^3,q^4,q^6,q^7;q^10)^3 (q^5;q^5)")
        + P("4q (q^5;q^5)^2 (q,q^9;q^10) / (q;q^2)^6 (q^4,q^6,q^10;q^10)")
        - P("10q^2 (q^10;q^10)^3 / (q)^2 (q^2,q^8;q^10)(q^3,q^7;q^10)^4"),
        1: P("2q^3 (-q^5;q^5) / (q^5;q^5)") * L4
        + P("2 (q^5;q^5)^4 / (q;q^2)^6 (q^4,q^6;q^10)(q^10;q^10)^3")
        + P("2q^2 (q)(q^10;q^10)^3 / (q^3,q^7;q^10)^2 (q^4,q^6;q^10)^3 (q^5;q^5)^3"),
        2: P("4 (q^3,q^7;q^10)(q^5;q^5)^2 / (q;q^2)^6 (q^4,q^6,q^10;q^10)")
        - P("10q (q^10;q^10)^3 / (q)^2 (q^3,q^7;q^10)^3 (q,q^2,q^8,q^9;q^10)"),
        3: P("4 (q^5;q^5) / (q;q^2)^5 (q^2,q^3,q^7,q^8;q^10)"),
        4: P("4q (-q^5;q^5) / (q^5;q^5)") * L2
        - P("10 (q^10;q^10)^3 (q^5;q^5)(q^4,q^6;q^10) / (q,q^9;q^10)(q)^3 (q^3,q^7;q^10)")
        - P("2 (q^10;q^10)(-q^2,-q^3;q^5) / q (-q,-q^4;q^5)(q,q^2,q^8,q^9;q^10)")
        + P("2 (q^5;q^5)^2 (q^2,q^8;q^10)^5 (q^10;q^10)^2 / q (q;q^2)^4 (q,q^9;q^10)^4 (q^2;q^2)^3"),
    }
    out = []
    for d in range(3):
        out.append(IdentityCheck(
            f"eq-1.{5 + d}", RankDiff("m2", 3, 0, 1, d), rhs3[d], 200,
            f"M2-rank difference R01({d}) modulo 3 as products and Lambert sums", "theorem"))
    for d in range(5):
        out.append(IdentityCheck(
            f"eq-1.{8 + d}", RankDiff("m2", 5, 1, 2, d), rhs5_12[d], 60,
            f"M2-rank difference R12({d}) modulo 5", "theorem"))
    for d in range(5):
        out.append(IdentityCheck(
            f"eq-1.{13 + d}", RankDiff("m2", 5, 0, 2, d), rhs5_02[d], 60,
            f"M2-rank difference R02({d}) modulo 5", "theorem"))
    return out


def _eta_theta_term() -> Expr:
    # 6 eta^4(6t) / (q eta^2(3t) theta(2t; 6t)) with the fractional q-powers cancelled
    return Prod("6 (q^6;q^6)^4 / (q^2;q^2)(q^3;q^3)^2")


def _mock_theta_entries() -> list[IdentityCheck]:
    m2 = RankDiff("m2", 3, 0, 1, 2)
    dyson = RankDiff("dyson", 3, 0, 1, 2, "tally")
    return [
        IdentityCheck("cor-1.3", 6 * OMEGA, m2 - dyson, 100,
                      "six times omega is the M2-minus-Dyson rank difference at 3n+2", "theorem"),
        IdentityCheck("eq-5.1", OMEGA, G3(1, 2), CHAIN_ORDER,
                      "omega as the universal mock theta function g3(q, q^2)", "proof-chain"),
        IdentityCheck("eq-5.5", G3(1, 2), 2 * G2(1, 3) - Prod("(q^6;q^6)^4 / (q^2;q^2)(q^3;q^3)^2"),
                      CHAIN_ORDER, "g3(q, q^2) through g2(q, q^3) and an eta quotient", "proof-chain"),
        IdentityCheck("eq-5.3-line1", m2 - dyson,
                      Prod("6q (-q^3;q^3) / (q^3;q^3)") * Lambert(3, 6, 6, 2)
                      + Prod("6 (-q^3;q^3) / (q^3;q^3)") * Lambert(3, 3, 3, 1), 100,
                      "rank-difference gap as two Lambert sums", "proof-chain"),
        IdentityCheck("eq-5.3-final", m2 - dyson, 12 * G2(1, 3) - _eta_theta_term(), 100,
                      "rank-difference gap as 12 g2(q, q^3) minus an eta quotient", "proof-chain"),
        IdentityCheck("g2-reflection", G2(1, 3), G2(2, 3), CHAIN_ORDER,
                      "g2(q^2, q^3) = g2(q, q^3)", "property"),
    ]


_HALF_RATIO = Prod("(q) / 2 (-q)")


def _s2bar_entries() -> list[IdentityCheck]:
    out = []
    for ell, suffix in ((3, ""), (5, "-l5")):
        out.append(IdentityCheck(
            f"lem-2.1{suffix}", S2(ell, ell), Const(Fraction(1, 2)) - _HALF_RATIO, CHAIN_ORDER,
            f"S2bar({ell}) for modulus {ell} is a single product plus 1/2", "lemma"))
    for ell, b, suffix in ((5, 2, ""), (3, 1, "-l3b1"), (5, 1, "-l5b1")):
        out.append(IdentityCheck(
            f"prop-2.6{suffix}", S2(b, ell), -S2(ell - b, ell), CHAIN_ORDER,
            f"S2bar({b}) = -S2bar({ell - b}) for modulus {ell}", "property"))
    return out


def _lemma_32(ell: int, a: int, b: int) -> Expr:
    L = ell
    ratio = p_ratio(
        [(-1, 2 * b * L, L * L), (1, 4 * a * L, 2 * L * L), (1, 2 * a * L, 2 * L * L)],
        [(1, (2 * b + 2 * a) * L, 2 * L * L), (1, (2 * b - 2 * a) * L, 2 * L * L),
         (-1, 2 * a * L, L * L), (1, 2 * b * L, 2 * L * L)],
    )
    return (Sigma(a + b, a, L).shift(4 * a * L) + Sigma(b - a, -a, L)
            + TQ(a, L) * Sigma(b, 0, L) - ratio * P0(L) * P0(L))


def _eq_319_rhs(ell: int, a: int) -> Expr:
    L = ell
    first = p_ratio([(1, 6 * a * L, 2 * L * L)] * 2,
                    [(1, 2 * a * L, 2 * L * L)] * 2 + [(1, 8 * a * L, 2 * L * L)]) * P0(L) * P0(L)
    second = p_ratio([(1, 2 * a * L, L * L)] * 2 + [(1, 4 * a * L, L * L)],
                     [(-1, 2 * a * L, L * L)] * 2 + [(-1, 4 * a * L, L * L), (-1, 0, L * L)])
    return first - second * Prod(f"(q^{L * L};q^{L * L})^2")


def _eq_312(ell: int, a: int) -> tuple[Expr, Expr]:
    L = ell
    quotient = p_ratio([(1, 4 * a * L, 2 * L * L), (-1, 0, L * L)],
                       [(-1, 2 * a * L, L * L), (1, 2 * a * L, 2 * L * L)])
    lhs = Theta(-1, 0, L * L) * quotient
    rhs = Theta(-1, 2 * a * L, L * L) + Theta(-1, -2 * a * L, L * L)
    return lhs, rhs


def _g_entries() -> list[IdentityCheck]:
    out = []
    for ell, a, b in ((5, 2, 1), (5, 1, 2), (5, 1, 3), (7, 1, 2), (7, 3, 1)):
        out.append(IdentityCheck(
            f"eq-3.2-l{ell}a{a}b{b}", _lemma_32(ell, a, b), ZERO, CHAIN_ORDER,
            f"Sigma/product relation at z = y^{b}, zeta = y^{a}, base y^{ell}", "lemma"))
    cases = ((5, 1, ""), (3, 1, "-l3a1"), (5, 2, "-l5a2"))
    for ell, a, suffix in cases:
        out.append(IdentityCheck(
            f"eq-3.19{suffix}", 2 * G(a, ell) - G(2 * a, ell) + Fraction(1, 2),
            _eq_319_rhs(ell, a), CHAIN_ORDER,
            f"2g({a}) - g({2 * a}) + 1/2 as two products, modulus {ell}", "lemma"))
    for ell, a, suffix in cases:
        out.append(IdentityCheck(
            f"eq-3.20{suffix}", G(a, ell), -G(ell - a, ell), CHAIN_ORDER,
            f"g({a}) = -g({ell - a}) for modulus {ell}", "lemma"))
    for ell, a, suffix in cases:
        out.append(IdentityCheck(
            f"prop-3.11{suffix}", G(a, ell) - G(a + ell, ell), Const(-1), CHAIN_ORDER,
            f"g({a}) - g({a + ell}) = -1 for modulus {ell}", "lemma"))
    for ell, a, suffix in cases:
        lhs, rhs = _eq_312(ell, a)
        out.append(IdentityCheck(
            f"eq-3.12-spec{suffix}", lhs, rhs, CHAIN_ORDER,
            f"theta quotient splitting at z = q^{a * ell}, base q^{ell * ell}", "lemma"))
    return out


def _chain_entries() -> list[IdentityCheck]:
    out = []
    for ell, m in lambert.DECOMPOSED_CASES:
        out.append(IdentityCheck(
            f"eq-4.3-l{ell}m{m}", Decomposed(ell, m), S2(ell - m, ell), CHAIN_ORDER,
            f"S2bar({ell - m}) rebuilt from g({m}), products and Sigma({m},0)", "proof-chain"))
    for tag, (ell, m) in zip("abc", ((3, 1), (5, 2), (5, 1))):
        out.append(IdentityCheck(
            f"prop-4.1-{tag}", Bracket(ell, m), BracketClosed(ell, m), CHAIN_ORDER,
            f"coefficient bracket of Sigma({m},0) as one product, modulus {ell}", "proof-chain"))
    P = Prod
    ratio = P("(q) / (-q)")
    X9 = P("(q)(-q^9;q^9) / (-q)(q^9;q^9)")
    X25 = P("(q)(-q^25;q^25) / (-q)(q^25;q^25)")
    half = Fraction(1, 2)

    def chain(id_, lhs, rhs, what):
        out.append(IdentityCheck(id_, lhs, rhs, CHAIN_ORDER, what, "proof-chain"))

    chain("eq-4.4", ratio, P("(q^9;q^9) / (-q^9;q^9)") - P("2q (q^3,q^15,q^18;q^18)"),
          "3-dissection of (q)/(-q)")
    chain("eq-4.5", ratio,
          P("(q^25;q^25) / (-q^25;q^25)") - P("2q (q^15,q^35,q^50;q^50)")
          + P("2q^4 (q^5,q^45,q^50;q^50)"),
          "5-dissection of (q)/(-q)")
    chain("eq-4.6", (RankGF(0, 3) - RankGF(1, 3)) * _HALF_RATIO, 3 * S2(1, 3) + S2(3, 3),
          "residue generating functions modulo 3 through S2bar")
    chain("eq-4.7", S2(1, 3), G(1, 3) + (Sigma(1, 0, 3) * X9).shift(5),
          "S2bar(1) for modulus 3 through g(1) and Sigma(1,0)")
    chain("eq-4.8", S2(3, 3), half - _HALF_RATIO, "S2bar(3) for modulus 3 as a product")
    chain("eq-4.9", (RankGF(1, 5) - RankGF(2, 5)) * _HALF_RATIO, -S2(1, 5) - 3 * S2(3, 5),
          "residue generating functions 1 and 2 modulo 5 through S2bar")
    chain("eq-4.10", S2(1, 5),
          G(1, 5) + (Sigma(1, 0, 5) * X25).shift(9)
          - P("q^3 (q^50;q^50)^2 (-q^10,-q^15;q^25) / (q^10,q^40;q^50)(-q^5,-q^20;q^25)"),
          "S2bar(1) for modulus 5 through g(1) and Sigma(1,0)")
    chain("eq-4.11", S2(3, 5),
          -G(2, 5) + (Sigma(2, 0, 5) * X25).shift(16)
          - P("q^7 (q^50;q^50)^2 (-q^5,-q^20;q^25) / (q^20,q^30;q^50)(-q^10,-q^15;q^25)"),
          "S2bar(3) for modulus 5 through g(2) and Sigma(2,0)")

    def Y(text):
        return Prod(text, ell=5)

    def total(texts):
        acc = Y(texts[0])
        for t in texts[1:]:
            acc = acc + Y(t)
        return acc

    g1, g2 = G(1, 5), G(2, 5)
    chain("eq-4.12", 3 * g2 - g1, total([
        "5y^2 (q^50;q^50)^4 (q^5,q^10,q^40,q^45;q^50)(q^25;q^25) / (q^5;q^5)^3 (q^5;q^10)(-q^25;q^25)",
        "y (q^25;q^25)^2 / (q^5;q^10)^5 (q^15,q^20,q^30,q^35;q^50)(-q^25;q^25)",
        "4y^2 (q^50;q^50)^3 (q^5,q^45;q^50) / (q^5;q^10)^5 (q^20,q^30;q^50)(q^25;q^25)",
        "20y^4 (q^50;q^50)^7 (q^5,q^45;q^50)^2 (q^10,q^40;q^50)^3 (q^5,q^45,q^50;q^50) / (q^5;q^5)^4 (q^25;q^25)^2",
        "-4y (q^10;q^10)(q^15,q^35,q^50;q^50) / (q^5;q^10)^4 (q^10,q^15,q^35,q^40;q^50)^3",
    ]), "q^0 coefficient of the modulus-5 combination")
    chain("eq-4.13",
          Y("(q^5,q^10,q^40,q^45;q^50)(q^15,q^35,q^50;q^50) / (q^5;q^5)(q^5;q^10)"),
          total(["y (q^50;q^50)^2 (q^5,q^45;q^50)^2 (q^10,q^40;q^50)^3 / (q^5;q^5)^2",
                 "1 / (q^15,q^35;q^50)^3 (q^10,q^40;q^50)"]),
          "q^1 coefficient of the modulus-5 combination")
    chain("eq-4.14",
          Y("3 (-q^5,-q^20;q^25)(q^50;q^50)^2 / (q^20,q^30;q^50)(-q^10,-q^15;q^25)"),
          total([
              "-4 (q^50;q^50)^2 (q^15,q^35,q^50;q^50) / (q^5;q^10)^5 (q^20,q^30;q^50)(q^25;q^25)",
              "-20y^2 (q^50;q^50)^7 (q^5,q^45;q^50)^2 (q^10,q^40;q^50)^3 (q^15,q^35,q^50;q^50) / (q^5;q^5)^4 (q^25;q^25)^2",
              "5 (q^50;q^50)^3 (q^25;q^25) / (q^5;q^5)^2 (q^15,q^35;q^50)^3 (q^5,q^10,q^40,q^45;q^50)(-q^25;q^25)",
              "10 (q^50;q^50)^3 (q^5,q^45,q^50;q^50) / (q^5;q^5)^2 (q^5,q^45;q^50)^3 (q^15,q^20,q^30,q^35;q^50)",
              "-8 (q^25;q^25)(q^5,q^45,q^50;q^50) / (q^5;q^10)^5 (q^10,q^15,q^35,q^40;q^50)",
          ]), "q^2 coefficient of the modulus-5 combination")
    chain("eq-4.15",
          Y("(-q^10,-q^15;q^25)(q^50;q^50)^2 / (q^10,q^40;q^50)(-q^5,-q^20;q^25)"),
          total([
              "-10y (q^50;q^50)^3 (q^15,q^35,q^50;q^50) / (q^5;q^5)^2 (q^15,q^35;q^50)^3 (q^5,q^10,q^40,q^45;q^50)",
              "5 (q^50;q^50)^3 (q^25;q^25) / (q^5;q^5)^2 (q^5,q^45;q^50)^3 (q^15,q^20,q^30,q^35;q^50)(-q^25;q^25)",
              "-4 (q^25;q^25)^2 / (q^5;q^10)^5 (q^10,q^15,q^35,q^40;q^50)(-q^25;q^25)",
              "4y (q^10;q^10)(q^5,q^45,q^50;q^50) / (q^5;q^10)^4 (q^10,q^15,q^35,q^40;q^50)^3",
          ]), "q^3 coefficient of the modulus-5 combination")
    chain("eq-4.16", ZERO, total([
        "5y^2 (q^50;q^50)^4 (q^5,q^10,q^40,q^45;q^50)(q^5,q^45,q^50;q^50) / (q^5;q^5)^3 (q^5;q^10)",
        "y (q^25;q^25)(q^5,q^45,q^50;q^50) / (q^5;q^10)^5 (q^15,q^20,q^30,q^35;q^50)",
        "-5 (q^50;q^50)^3 (q^15,q^35,q^50;q^50) / (q^5;q^5)^2 (q^5,q^45;q^50)^3 (q^15,q^20,q^30,q^35;q^50)",
        "4 (q^25;q^25)(q^50;q^50) / (q^5;q^10)^5 (q^10,q^40;q^50)",
        "(q^10;q^10)(q^25;q^25) / (q^5;q^10)^4 (q^10,q^15,q^35,q^40;q^50)^3 (-q^25;q^25)",
    ]), "q^4 coefficient of the modulus-5 combination")
    chain("eq-4.18", (RankGF(0, 5) - RankGF(2, 5)) * _HALF_RATIO,
          S2(5, 5) + 2 * S2(1, 5) + S2(3, 5),
          "residue generating functions 0 and 2 modulo 5 through S2bar")
    chain("eq-4.19", 2 * g1 - g2 + half, total([
        "(q^25;q^25)^7 / 2 (q^5;q^10)^6 (q^15,q^20,q^30,q^35;q^50)(q^50;q^50)^5 (-q^25;q^25)",
        "y^2 (q^5;q^5)(q^50;q^50)(q^25;q^25) / 2 (q^15,q^20,q^30,q^35;q^50)^3 (q^25;q^25)(-q^25;q^25)",
        # the (-q^25;q^25) in this denominator is required for the identity to hold
        "2y (q^25;q^25)^3 (q^5,q^45;q^50) / (q^5;q^10)^6 (q^20,q^30,q^50;q^50)(-q^25;q^25)",
        "-5y^2 (q^50;q^50)^3 (q^25;q^25) / (q^5;q^5)^2 (q^10,q^40;q^50)(q^15,q^35;q^50)^4 (-q^25;q^25)",
        "2y^3 (q^5;q^5)(q^50;q^50)^3 (q^5,q^45,q^50;q^50) / (q^15,q^35;q^50)^2 (q^20,q^30;q^50)^3 (q^25;q^25)^3",
        "10y (q^50;q^50)^4 (q^25;q^25)(q^20,q^30;q^50) / (q^5,q^45;q^50)(q^5;q^5)^3",
        "2 (q^50;q^50)(-q^10,-q^15;q^25)(q^15,q^35,q^50;q^50) / (-q^5,-q^20;q^25)(q^5,q^10,q^40,q^45;q^50)",
        "-2 (q^25;q^25)^2 (q^10,q^40;q^50)^5 (q^50;q^50)^2 (q^15,q^35,q^50;q^50) / (q^5;q^10)^4 (q^5,q^45;q^50)^4 (q^10;q^10)^3",
        "2y (q^25;q^25)^4 (q^5,q^45;q^50) / (q^5;q^10)^6 (q^20,q^30;q^50)(q^50;q^50)^2",
    ]), "q^0 coefficient of the second modulus-5 combination")
    chain("eq-4.20", ZERO, ZERO, "q^1 coefficient of the second combination (trivial)")
    chain("eq-4.21",
          Y("2y^2 (q^5;q^5)(q^50;q^50)^4 / (q^15,q^35;q^50)(q^20,q^30;q^50)^3 (q^25;q^25)^3"),
          total([
              "y (q^50;q^50)^2 (-q^5,-q^20;q^25) / (-q^10,-q^15;q^25)(q^20,q^30;q^50)",
              "4y (q^25;q^25)(q^5,q^45,q^50;q^50) / (q^5;q^10)^5 (q^10,q^15,q^35,q^40;q^50)",
              "-5y (q^50;q^50)^3 (q^25;q^25) / (q^5;q^5)^2 (q^15,q^35;q^50)^3 (q^5,q^10,q^40,q^45;q^50)(-q^25;q^25)",
          ]), "q^2 coefficient of the second combination")
    chain("eq-4.22",
          Y("4 (q^15,q^35;q^50)^2 (q^25;q^25)^2 / (q^5;q^10)^6 (q^20,q^30;q^50)"),
          total([
              "2 (q^25;q^25)^2 / (q^5;q^10)^5 (q^10,q^15,q^35,q^40;q^50)(-q^25;q^25)",
              "2 (q^25;q^25)^2 (q^10,q^40;q^50)^5 (q^50;q^50)^2 (q^5,q^45,q^50;q^50) / (q^5;q^10)^4 (q^5,q^45;q^50)^4 (q^10;q^10)^3",
          ]), "q^3 coefficient of the second combination")
    chain("eq-4.23",
          Y("(q^25;q^25)^6 (q^5,q^45,q^50;q^50) / (q^5;q^10)^6 (q^15,q^20,q^30,q^35;q^50)(q^50;q^50)^5"),
          total([
              "-y^2 (q^5;q^5)(q^50;q^50)(q^5,q^45,q^50;q^50) / (q^15,q^20,q^30,q^35;q^50)^3 (q^25;q^25)",
              "-4y (q^25;q^25)^2 (q^5,q^45;q^50)(q^5,q^45,q^50;q^50) / (q^5;q^10)^6 (q^20,q^30,q^50;q^50)",
              "10y^2 (q^50;q^50)^3 (q^5,q^45,q^50;q^50) / (q^5;q^5)^2 (q^10,q^40;q^50)(q^15,q^35;q^50)^4",
              "4 (q^25;q^25)(q^15,q^35,q^50;q^50) / (q^5;q^10)^5 (q^10,q^15,q^35,q^40;q^50)",
              "5 (q^50;q^50)^3 (q^25;q^25)^2 (q^20,q^30;q^50) / (q^5,q^45;q^50)(q^5;q^5)^3 (q^15,q^35;q^50)(-q^25;q^25)",
              "(q^50;q^50)(-q^10,-q^15;q^25)(q^25;q^25) / y (-q^5,-q^20;q^25)(q^5,q^10,q^40,q^45;q^50)(-q^25;q^25)",
              "-(q^25;q^25)^3 (q^10,q^40;q^50)^5 (q^50;q^50)^2 / y (q^5;q^10)^4 (q^5,q^45;q^50)^4 (q^10;q^10)^3 (-q^25;q^25)",
          ]), "q^4 coefficient of the second combination")
    # addition theorem at (z, zeta, t, q) = (-q^2, q^2, -1, q^3)
    chain("addthm-spec", Pz(-1, 2, 3) ** 4 - Pz(1, 2, 3) ** 4,
          (Pz(-1, 0, 3) ** 3 * Pz(-1, 4, 3)).shift(2),
          "theta-product addition theorem specialised to base q^3")
    return out


@lru_cache(maxsize=1)
def catalog() -> tuple[IdentityCheck, ...]:
    entries = (_theorem_entries() + _mock_theta_entries()[:1] + _s2bar_entries()
               + _g_entries() + _chain_entries() + _mock_theta_entries()[1:])
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise AssertionError("duplicate catalog ids")
    return tuple(entries)


@lru_cache(maxsize=1)
def _index() -> dict[str, IdentityCheck]:
    return {e.id: e for e in catalog()}


def get(id_: str) -> IdentityCheck:
    try:
        return _index()[id_]
    except KeyError:
        raise UnknownId(id_) from None


def ids() -> list[str]:
    return [e.id for e in catalog()]


# -- verification ---------------------------------------------------------------------------


def check(entry: IdentityCheck, order: int | None = None) -> VerifyReport:
    """Evaluate both sides of ``entry`` below q^order and compare."""
    order = entry.default_order if order is None else order
    if order < 1:
        raise ValueError("order must be >= 1")
    start = time.perf_counter()
    cache: dict = {}
    try:
        lhs = entry.lhs.series(order, cache)
        rhs = entry.rhs.series(order, cache)
        cmp = lhs.eq_upto(rhs, order)
        mismatch, error = cmp.mismatch, None
    except EvaluationError as exc:
        mismatch, error = None, str(exc)
    millis = int((time.perf_counter() - start) * 1000)
    return VerifyReport(entry.id, order, error is None and mismatch is None, mismatch, millis, error)


def verify(id_: str, order: int | None = None) -> VerifyReport:
    return check(get(id_), order)


def _verify_one(args) -> VerifyReport:
    id_, order = args
    return verify(id_, order)


def verify_all(order: int | None = None, jobs: int = 1,
               ids_: Iterable[str] | None = None) -> list[VerifyReport]:
    """Verify the selected entries (all by default); reports come back in catalog order."""
    selected = [e.id for e in catalog()] if ids_ is None else list(ids_)
    for i in selected:
        get(i)
    work = [(i, order) for i in selected]
    if jobs <= 1 or len(work) <= 1:
        return [_verify_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_verify_one, work))


# -- named series for display ---------------------------------------------------------------

_R_NAMES = {("01", 3): (5, 3), ("12", 5): (8, 5), ("02", 5): (13, 5)}


def named_series(name: str) -> Expr:
    """``omega``, ``R01(d)``, ``R12(d)``, ``R02(d)``, or a catalog id with optional ``:rhs``."""
    name = name.strip()
    if name == "omega":
        return OMEGA
    if name.startswith("R") and name.endswith(")") and "(" in name:
        pair, _, rest = name[1:].partition("(")
        for (p, ell), (first, _) in _R_NAMES.items():
            if p == pair:
                try:
                    d = int(rest[:-1])
                except ValueError:
                    break
                if 0 <= d < ell:
                    return get(f"eq-1.{first + d}").rhs
        raise UnknownId(name)
    base, _, side = name.partition(":")
    entry = get(base)
    if side in ("", "lhs"):
        return entry.lhs
    if side == "rhs":
        return entry.rhs
    raise UnknownId(name)
