"""Infinite and finite q-products.

Everything lives on the integer q-grid: a Pochhammer symbol
``(sign*q^a; q^m)_inf`` is described by ``(sign, a, m)``.  The two-variable
product ``P(z, Q) = (z; Q)_inf (Q/z; Q)_inf`` is only ever needed at
``z = sign*q^j`` and ``Q = q^k``; :func:`p_normalize` moves ``j`` into
``[0, k)`` using the quasi-periodicity of ``P``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .pseries import LeadingZero, QSeries


class VanishingFactor(ArithmeticError):
    """A product contains the factor ``1 - 1``."""


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def _apply_factor(series: QSeries, sign: int, a: int, m: int, power: int) -> QSeries:
    """Multiply ``series`` by ``(sign*q^a; q^m)_inf^power`` to its own truncation."""
    if power == 0:
        return series
    width = series.trunc - series.min_exp
    if a == 0:
        if sign == 1:
            raise (VanishingFactor if power > 0 else LeadingZero)(
                "factor (1 - q^0) vanishes")
        series = series.scale(Fraction(2) ** power)
        a = m
    e = a
    while e < width:
        for _ in range(abs(power)):
            series = series.mul_binomial(sign, e) if power > 0 else series.div_binomial(sign, e)
        e += m
    return series


def pochhammer(sign: int, a: int, m: int, N: int) -> QSeries:
    """``(sign*q^a; q^m)_inf`` truncated to order N."""
    _check_sign(sign)
    if m < 1 or a < 0:
        raise ValueError("need a >= 0 and m >= 1")
    if sign == 1 and a == 0:
        raise VanishingFactor("(1; q^m)_inf is identically zero")
    return _apply_factor(QSeries.one(N), sign, a, m, 1)


def pochhammer_fin(sign: int, a: int, m: int, n: int, N: int) -> QSeries:
    """``(sign*q^a; q^m)_n``, the product of exactly n factors."""
    _check_sign(sign)
    s = QSeries.one(N)
    for k in range(n):
        e = a + k * m
        if e == 0:
            s = s.scale(1 - sign)
        elif e < N:
            s = s.mul_binomial(sign, e)
    return s


def p_special(sign: int, j: int, k: int, N: int) -> QSeries:
    """``P(sign*q^j, q^k)`` for 0 <= j < k."""
    _check_sign(sign)
    if not 0 <= j < k:
        raise ValueError(f"p_special needs 0 <= j < k, got j={j}, k={k}; use p_normalize")
    if sign == 1 and j == 0:
        raise VanishingFactor("P(1, q) vanishes identically")
    s = _apply_factor(QSeries.one(N), sign, j, k, 1)
    return _apply_factor(s, sign, k - j, k, 1)


def p_normalize(sign: int, j: int, k: int) -> tuple[int, int, int, int]:
    """Return ``(c, t, sign, j')`` with ``P(sign q^j, q^k) = c q^t P(sign q^j', q^k)``.

    Uses ``P(zQ, Q) = -z^{-1} P(z, Q)`` and its inverse ``P(z, Q) = -z P(zQ, Q)``.
    """
    _check_sign(sign)
    if k < 1:
        raise ValueError("k must be >= 1")
    c, t = 1, 0
    while j >= k:
        # P(s q^j) = -s q^{-(j-k)} P(s q^{j-k})
        j -= k
        c *= -sign
        t -= j
    while j < 0:
        # P(s q^j) = -s q^j P(s q^{j+k})
        c *= -sign
        t += j
        j += k
    return c, t, sign, j


def p_value(sign: int, j: int, k: int, N: int) -> QSeries:
    """``P(sign q^j, q^k)`` for any integer j, known to order N."""
    c, t, sign, j = p_normalize(sign, j, k)
    return p_special(sign, j, k, N - t).shift(t).scale(c)


def triple_product_theta(sign: int, j: int, k: int, N: int) -> QSeries:
    """Sum side of the triple product: ``sum_n (sign q^j)^n q^(k n^2)``."""
    _check_sign(sign)
    if k < 1:
        raise ValueError("k must be >= 1")
    bound = int((abs(j) + math.isqrt(j * j + 4 * k * (N + abs(j)) + 1)) // (2 * k)) + 2
    terms: dict[int, int] = {}
    for n in range(-bound, bound + 1):
        e = k * n * n + j * n
        if e < N:
            terms[e] = terms.get(e, 0) + (sign ** (n % 2))
    lo = min(terms, default=0)
    return QSeries.from_dict(terms, N) if lo < N else QSeries.zero(N)


def triple_product_side(sign: int, j: int, k: int, N: int) -> QSeries:
    """Product side ``(-z Q, -Q/z, Q^2; Q^2)_inf`` for ``z = sign q^j``, ``Q = q^k``, 0 <= j < k."""
    if not 0 <= j < k:
        raise ValueError("need 0 <= j < k")
    s = pochhammer(-sign, j + k, 2 * k, N)
    s = _apply_factor(s, -sign, k - j, 2 * k, 1)
    return _apply_factor(s, 1, 2 * k, 2 * k, 1)


@dataclass(frozen=True)
class Factor:
    """``(sign*q^offset; q^modulus)_inf ** power``."""

    sign: int
    offset: int
    modulus: int
    power: int = 1

    def __post_init__(self):
        _check_sign(self.sign)
        if self.modulus < 1 or self.offset < 0:
            raise ValueError(f"bad factor {self}")
        if self.sign == 1 and self.offset == 0:
            raise VanishingFactor(f"factor {self} contains 1 - 1")


@dataclass(frozen=True)
class ProductSpec:
    """``lead_num * q^lead_exp * prod(factors)``."""

    lead_num: Fraction = Fraction(1)
    lead_exp: int = 0
    factors: tuple[Factor, ...] = field(default_factory=tuple)

    def __mul__(self, other: "ProductSpec") -> "ProductSpec":
        return ProductSpec(
            Fraction(self.lead_num) * Fraction(other.lead_num),
            self.lead_exp + other.lead_exp,
            self.factors + other.factors,
        )

    def __neg__(self) -> "ProductSpec":
        return ProductSpec(-Fraction(self.lead_num), self.lead_exp, self.factors)

    def inverse(self) -> "ProductSpec":
        return ProductSpec(
            1 / Fraction(self.lead_num),
            -self.lead_exp,
            tuple(Factor(f.sign, f.offset, f.modulus, -f.power) for f in self.factors),
        )

    def dilate(self, k: int) -> "ProductSpec":
        return ProductSpec(
            self.lead_num,
            k * self.lead_exp,
            tuple(Factor(f.sign, k * f.offset, k * f.modulus, f.power) for f in self.factors),
        )


def eval_product(spec: ProductSpec, N: int) -> QSeries:
    """Expand a :class:`ProductSpec` to order N."""
    if spec.lead_num == 0:
        return QSeries.zero(N)
    width = N - spec.lead_exp
    if width <= 0:
        return QSeries.zero(N, N - 1)
    s = QSeries.one(width)
    # multiply numerators before dividing so intermediate values stay small
    for f in sorted(spec.factors, key=lambda f: -f.power):
        s = _apply_factor(s, f.sign, f.offset, f.modulus, f.power)
    return s.scale(spec.lead_num).shift(spec.lead_exp)


def parse_product(text: str, ell: int | None = None) -> ProductSpec:
    """Parse a product written in the usual q-Pochhammer notation.

    ``"10 q^2 (q^10;q^10)^4 (q,q^2,q^8,q^9;q^10) / (q)^3 (q;q^2)"`` is
    ``10 q^2 (q^10;q^10)_inf^4 (q,q^2,q^8,q^9;q^10)_inf / ((q)_inf^3 (q;q^2)_inf)``.
    A group without ``;`` has base q.  ``y`` stands for ``q^ell``.  Everything
    after a single top-level ``/`` is the denominator.
    """
    num, _, den = _split_top(text)
    spec = _parse_side(num, ell)
    if den is not None:
        spec = spec * _parse_side(den, ell).inverse()
    return spec


def _split_top(text: str):
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return text[:i], "/", text[i + 1:]
    return text, None, None


def _exp(tok: str | None) -> int:
    return 1 if tok is None else int(tok)


def _parse_side(text: str, ell: int | None) -> ProductSpec:
    text = text.strip()
    lead = Fraction(1)
    lead_exp = 0
    factors: list[Factor] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace() or text[pos] == "*":
            pos += 1
            continue
        m = re.match(r"\d+", text[pos:])
        if m:
            lead *= int(m.group(0))
            pos += m.end()
            continue
        if text[pos] == "-":
            lead = -lead
            pos += 1
            continue
        m = re.match(r"([qy])(?:\^(-?\d+))?", text[pos:])
        if m:
            e = _exp(m.group(2))
            lead_exp += e * (_ell(ell) if m.group(1) == "y" else 1)
            pos += m.end()
            continue
        if text[pos] == "(":
            close = text.index(")", pos)
            inner = text[pos + 1: close]
            pos = close + 1
            m = re.match(r"\^(-?\d+)", text[pos:])
            power = 1
            if m:
                power = int(m.group(1))
                pos += m.end()
            factors.extend(_parse_group(inner, power, ell))
            continue
        raise ValueError(f"cannot parse product near {text[pos:]!r}")
    return ProductSpec(lead, lead_exp, tuple(factors))


def _ell(ell: int | None) -> int:
    if ell is None:
        raise ValueError("'y' used without ell")
    return ell


def _parse_group(inner: str, power: int, ell: int | None) -> list[Factor]:
    if ";" in inner:
        items, base = inner.split(";")
    else:
        items, base = inner, "q"
    bm = re.fullmatch(r"\s*q(?:\^(\d+))?\s*", base)
    if not bm:
        raise ValueError(f"bad base {base!r}")
    modulus = _exp(bm.group(1))
    out = []
    for item in items.split(","):
        im = re.fullmatch(r"\s*(-?)q(?:\^(\d+))?\s*", item)
        if not im:
            raise ValueError(f"bad Pochhammer argument {item!r}")
        sign = -1 if im.group(1) else 1
        out.append(Factor(sign, _exp(im.group(2)), modulus, power))
    return out


def product(text: str, N: int, ell: int | None = None) -> QSeries:
    return eval_product(parse_product(text, ell), N)
