"""Bilateral generalized Lambert series and the named sums built from them.

All sums are expanded on the integer q-grid.  Sums written in a second
variable ``y = q^ell`` are mapped to q before expansion, so ``Sigma(a, b)``
for ell = 5 has support on multiples of 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .pseries import QSeries, at_least
from .qprod import p_value, pochhammer, product


class PoleTerm(ArithmeticError):
    """A summand has the denominator factor ``1 - 1``."""


class UnsupportedCase(ValueError):
    pass


@dataclass(frozen=True)
class BilateralSum:
    """``sum_n (-1)^n q^(A n^2 + B n + C) * sum_t c_t q^(F_t n + G_t) / prod_i (1 - s_i q^(D_i n + E_i))``.

    ``A`` and ``B`` may be half-integers as long as ``A n^2 + B n`` is an
    integer for every n.  ``primed`` drops the n = 0 term.
    """

    A: Fraction
    B: Fraction = Fraction(0)
    C: int = 0
    numerator: tuple[tuple[Fraction, int, int], ...] = ((Fraction(1), 0, 0),)
    denominators: tuple[tuple[int, int, int], ...] = ()
    alternating: bool = True
    primed: bool = False
    n_min: int | None = None

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("leading coefficient A must be positive")
        for s, _, _ in self.denominators:
            if s not in (1, -1):
                raise ValueError(f"denominator sign must be +-1, got {s}")

    def exponent(self, n: int) -> int:
        e = Fraction(self.A) * n * n + Fraction(self.B) * n + self.C
        if e.denominator != 1:
            raise ValueError(f"non-integral exponent {e} at n={n}")
        return int(e)

    def n_bound(self, N: int) -> int:
        """Every |n| > bound has all of its q-exponents >= N."""
        A = Fraction(self.A)
        lin = abs(Fraction(self.B)) + max(abs(F) for _, F, _ in self.numerator)
        lin += sum(abs(D) for _, D, _ in self.denominators)
        const = abs(self.C) + max(abs(G) for _, _, G in self.numerator)
        const += sum(abs(E) for _, _, E in self.denominators)
        # A n^2 - lin n - const >= N
        disc = lin * lin + 4 * A * (const + N)
        return int((lin + math.isqrt(math.ceil(disc)) + 1) / (2 * A)) + 1


def _term(s: BilateralSum, n: int, N: int) -> QSeries | None:
    """The n-th summand, known to order N, or None if it starts at or above q^N."""
    sign = -1 if (s.alternating and n % 2) else 1
    base = s.exponent(n)
    factor = Fraction(sign)
    shift = base
    geo: list[tuple[int, int]] = []
    for sd, D, E in s.denominators:
        M = D * n + E
        if M == 0:
            if sd == 1:
                raise PoleTerm(f"denominator 1 - q^0 at n={n}")
            factor /= 2
        elif M > 0:
            geo.append((sd, M))
        else:
            # 1/(1 - s q^M) = -s q^(-M) / (1 - s q^(-M))
            factor *= -sd
            shift += -M
            geo.append((sd, -M))
    monos = {}
    for c, F, G in s.numerator:
        e = shift + F * n + G
        monos[e] = monos.get(e, 0) + c
    monos = {e: c for e, c in monos.items() if c}
    if not monos:
        return None
    lo = min(monos)
    if lo >= N:
        return None
    t = QSeries.from_dict({e: c * factor for e, c in monos.items()}, N)
    for sd, M in geo:
        t = t.div_binomial(sd, M)
    return t


def terms_in_range(s: BilateralSum, N: int, bound: int) -> QSeries:
    """Sum of the terms with |n| <= bound (n >= n_min when set)."""
    lo_n = -bound if s.n_min is None else max(s.n_min, -bound)
    acc = None
    for n in range(lo_n, bound + 1):
        if n == 0 and s.primed:
            continue
        t = _term(s, n, N)
        if t is None:
            continue
        acc = t if acc is None else acc + t
    if acc is None:
        return QSeries.zero(N)
    return acc


def expand_bilateral(s: BilateralSum, N: int) -> QSeries:
    """Exact expansion of the sum to order N."""
    return terms_in_range(s, N, s.n_bound(N))


# -- named sums on the q-grid ---------------------------------------------


def _require_nonmultiple(a: int, ell: int, what: str) -> None:
    if a % ell == 0:
        raise ValueError(f"{what}: a={a} must not be a multiple of ell={ell}")


def sigma_sum(a: int, b: int, ell: int) -> BilateralSum:
    """``Sigma(a, b) = sum_n (-1)^n y^(2bn + ell n(n+2)) / (1 - y^(2 ell n + 2a))`` with y = q^ell."""
    return BilateralSum(
        A=Fraction(ell * ell),
        B=Fraction(2 * ell * b + 2 * ell * ell),
        denominators=((1, 2 * ell * ell, 2 * ell * a),),
        primed=(a == 0),
    )


def sigma_ab(a: int, b: int, ell: int, N: int) -> QSeries:
    _require_nonmultiple(a, ell, "Sigma(a, b)")
    return expand_bilateral(sigma_sum(a, b, ell), N)


def sigma_0b(b: int, ell: int, N: int) -> QSeries:
    """Primed ``Sigma(0, b)``."""
    return expand_bilateral(sigma_sum(0, b, ell), N)


def s2bar_sum(b: int, ell: int) -> BilateralSum:
    return BilateralSum(
        A=Fraction(1), B=Fraction(2 * b), denominators=((1, 2 * ell, 0),), primed=True
    )


def s2bar(b: int, ell: int, N: int) -> QSeries:
    """``sum'_n (-1)^n q^(n^2 + 2bn) / (1 - q^(2 ell n))``."""
    if not 1 <= b <= ell:
        raise ValueError(f"need 1 <= b <= ell, got b={b}, ell={ell}")
    return expand_bilateral(s2bar_sum(b, ell), N)


def P(sign: int, j: int, k: int, N: int) -> QSeries:
    """``P(sign q^j, q^k)`` to order N (exponents already on the q-grid)."""
    return p_value(sign, j, k, N)


def _P0(ell: int, N: int) -> QSeries:
    return pochhammer(1, 2 * ell * ell, 2 * ell * ell, N)


def P_ratio(num: list[tuple[int, int, int]], den: list[tuple[int, int, int]], N: int) -> QSeries:
    """Product of ``P(s q^j, q^k)`` over ``num`` divided by the product over ``den``."""

    def build(M):
        top = QSeries.one(M)
        for s, j, k in num:
            top = top * P(s, j, k, M)
        bottom = QSeries.one(M)
        for s, j, k in den:
            bottom = bottom * P(s, j, k, M)
        return top * bottom.normalized().invert()

    return at_least(build, N)


def theta_quotient(a: int, ell: int, N: int) -> QSeries:
    """``P(y^4a, y^2l) P(-1, y^l) / (P(-y^2a, y^l) P(y^-2a, y^2l))``."""
    L = ell
    return P_ratio(
        [(1, 4 * a * L, 2 * L * L), (-1, 0, L * L)],
        [(-1, 2 * a * L, L * L), (1, -2 * a * L, 2 * L * L)],
        N,
    )


def g_of_a(a: int, ell: int, N: int) -> QSeries:
    """``g(a) = -TQ(a) Sigma(a,0) - y^4a Sigma(2a,a) - Sigma(0,-a)``."""
    _require_nonmultiple(a, ell, "g(a)")
    L = ell

    def build(M):
        first = theta_quotient(a, L, M) * sigma_ab(a, 0, L, M)
        second = sigma_ab(2 * a, a, L, M).shift(4 * a * L)
        third = sigma_0b(-a, L, M)
        return -first - second - third

    return at_least(build, N)


def gf_m2_fixed_m(m: int, N: int) -> QSeries:
    """Generating function of overpartitions of n with M2-rank m."""
    m = abs(m)
    terms = QSeries.zero(N)
    n = 1
    while n * n + 2 * m * n < N:
        sign = 1 if n % 2 else -1
        t = QSeries.monomial(sign, n * n + 2 * m * n, N)
        t = t.mul_binomial(1, 2 * n).div_binomial(-1, 2 * n)
        terms = terms + t
        n += 1
    return (terms * _overpartition_gf(N)).scale(2)


def _overpartition_gf(N: int) -> QSeries:
    return product("(-q)/(q)", N)


def gf_m2_residue_sum(s: int, m: int) -> BilateralSum:
    return BilateralSum(
        A=Fraction(1),
        B=Fraction(2),
        numerator=((Fraction(1), 2 * s, 0), (Fraction(1), 2 * (m - s), 0)),
        denominators=((-1, 2, 0), (1, 2 * m, 0)),
        primed=True,
    )


def gf_m2_residue(s: int, m: int, N: int) -> QSeries:
    """Generating function of overpartitions of n with M2-rank congruent to s mod m."""
    if not 0 <= s < m:
        raise ValueError("need 0 <= s < m")
    return (expand_bilateral(gf_m2_residue_sum(s, m), N) * _overpartition_gf(N)).scale(2)


def _universal_sum(a: int, k: int, quad: Fraction) -> BilateralSum:
    # sum (-1)^n q^(quad*k*n(n+1)) / (1 - q^(a + k n))
    c = quad * k
    return BilateralSum(A=c, B=c, denominators=((1, k, a),))


def g2_spec(a: int, k: int, N: int) -> QSeries:
    """``g2(q^a, q^k)``: ``(-Q)_inf/(Q)_inf * sum (-1)^n Q^(n(n+1)) / (1 - q^a Q^n)`` with Q = q^k."""
    s = expand_bilateral(_universal_sum(a, k, Fraction(1)), N)
    return s * product(f"(-q^{k};q^{k})/(q^{k};q^{k})", N)


def g3_spec(a: int, k: int, N: int) -> QSeries:
    """``g3(q^a, q^k)``: ``1/(Q)_inf * sum (-1)^n Q^(3n(n+1)/2) / (1 - q^a Q^n)``."""
    s = expand_bilateral(_universal_sum(a, k, Fraction(3, 2)), N)
    return s * product(f"1/(q^{k};q^{k})", N)


def omega(N: int) -> QSeries:
    """Third order mock theta ``sum_n q^(2n(n+1)) / (q; q^2)_(n+1)^2``."""
    total = QSeries.zero(N)
    n = 0
    while 2 * n * (n + 1) < N:
        t = QSeries.monomial(1, 2 * n * (n + 1), N)
        for k in range(n + 1):
            if 2 * k + 1 < N:
                t = t.div_binomial(1, 2 * k + 1).div_binomial(1, 2 * k + 1)
        total = total + t
        n += 1
    return total


# -- decomposition of S2bar(ell - m) -----------------------------------------

DECOMPOSED_CASES = ((3, 1), (5, 1), (5, 2))


def _require_case(ell: int, m: int) -> None:
    if (ell, m) not in DECOMPOSED_CASES:
        raise UnsupportedCase(f"(ell, m) = ({ell}, {m}) not in {DECOMPOSED_CASES}")


def decomposition_indices(ell: int, m: int) -> list[int]:
    """``a`` in ``1 .. (ell-1)/2`` with ``a`` not congruent to +-m."""
    return [a for a in range(1, (ell - 1) // 2 + 1) if (a - m) % ell and (a + m) % ell]


def _a_term_coefficient(ell: int, m: int, a: int) -> tuple[int, int]:
    # sign and q-exponent of the a-th product term (after dividing by y^4a)
    return (-1) ** (m + a), (a + m) * (a - m + 2 * ell) - 4 * a * ell


def _a_term_product(ell: int, m: int, a: int, N: int) -> QSeries:
    L = ell

    def build(M):
        ratio = P_ratio(
            [(-1, 2 * m * L, L * L), (1, 4 * a * L, 2 * L * L), (1, 2 * a * L, 2 * L * L)],
            [(1, (2 * a + 2 * m) * L, 2 * L * L), (1, (2 * m - 2 * a) * L, 2 * L * L),
             (-1, 2 * a * L, L * L), (1, 2 * m * L, 2 * L * L)],
            M,
        )
        p0 = _P0(L, M)
        return ratio * p0 * p0

    return at_least(build, N)


def bracket(ell: int, m: int, N: int) -> QSeries:
    """The coefficient of ``Sigma(m, 0)`` in the decomposition, as a sum of theta quotients."""
    _require_case(ell, m)

    def build(M):
        b = QSeries.monomial((-1) ** m, m * (2 * ell - m), M) - theta_quotient(m, ell, M)
        for a in decomposition_indices(ell, m):
            c, e = _a_term_coefficient(ell, m, a)
            b = b - theta_quotient(a, ell, M).shift(e).scale(c)
        return b

    return at_least(build, N)


_CLOSED_BRACKET = {
    (3, 1): "-q^5 (q)(-q^9;q^9) / (-q)(q^9;q^9)",
    (5, 1): "-q^9 (q)(-q^25;q^25) / (-q)(q^25;q^25)",
    (5, 2): "q^16 (q)(-q^25;q^25) / (-q)(q^25;q^25)",
}


def bracket_closed(ell: int, m: int, N: int) -> QSeries:
    """Single-product form of :func:`bracket`."""
    _require_case(ell, m)
    return product(_CLOSED_BRACKET[(ell, m)], N)


def s2bar_decomposed(ell: int, m: int, N: int, closed: bool = False) -> QSeries:
    """``S2bar(ell - m)`` rebuilt from ``g(m)``, product terms and ``Sigma(m, 0)``."""
    _require_case(ell, m)

    def build(M):
        r = -g_of_a(m, ell, M)
        for a in decomposition_indices(ell, m):
            c, e = _a_term_coefficient(ell, m, a)
            r = r + _a_term_product(ell, m, a, M).shift(e).scale(c)
        br = bracket_closed(ell, m, M) if closed else bracket(ell, m, M)
        return r + sigma_ab(m, 0, ell, M) * br

    return at_least(build, N)
