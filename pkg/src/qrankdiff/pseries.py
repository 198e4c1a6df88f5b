"""Truncated Laurent series in q with exact rational coefficients.

A :class:`QSeries` knows its coefficients on the window
``min_exp <= n < trunc``.  Everything below ``min_exp`` is zero; everything
at or beyond ``trunc`` is *unknown*.  Asking for an unknown coefficient is an
error, never a silent zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence, Union

Coeff = Union[int, Fraction]


class SeriesError(ArithmeticError):
    pass


class LeadingZero(SeriesError):
    """Inverting a series whose coefficient at ``min_exp`` is zero."""


class OutOfRange(SeriesError):
    """A coefficient beyond the known truncation was requested."""


def _norm(x) -> Coeff:
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _common_denominator(coeffs: Sequence[Coeff]) -> tuple[list[int], int]:
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    if den == 1:
        return [int(c) for c in coeffs], 1
    return [int(c * den) for c in coeffs], den


def _pack(values: Sequence[int], bits: int) -> int:
    """Kronecker substitution: sum(v_i * 2**(bits*i)) for signed v_i."""
    nbytes = bits // 8
    pos = bytearray()
    neg = bytearray()
    zero = bytes(nbytes)
    for v in values:
        if v >= 0:
            pos += v.to_bytes(nbytes, "little")
            neg += zero
        else:
            pos += zero
            neg += (-v).to_bytes(nbytes, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(x: int, bits: int, count: int) -> list[int]:
    nbytes = bits // 8
    negative = x < 0
    if negative:
        x = -x
    raw = x.to_bytes(max((x.bit_length() + 7) // 8, nbytes * count), "little")
    half = 1 << (bits - 1)
    full = 1 << bits
    out = []
    carry = 0
    for i in range(count):
        v = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") + carry
        if v >= half:
            v -= full
            carry = 1
        else:
            carry = 0
        out.append(-v if negative else v)
    return out


def _convolve(a: Sequence[int], b: Sequence[int], count: int) -> list[int]:
    """First ``count`` terms of the integer Cauchy product of a and b."""
    a = a[:count]
    b = b[:count]
    if not a or not b:
        return [0] * count
    ma = max(abs(v) for v in a)
    mb = max(abs(v) for v in b)
    if ma == 0 or mb == 0:
        return [0] * count
    if len(a) * len(b) < 400:
        out = [0] * count
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), count - i)):
                    out[i + j] += x * b[j]
        return out
    bound = ma * mb * min(len(a), len(b))
    bits = bound.bit_length() + 2
    bits = (bits + 7) // 8 * 8
    prod = _pack(a, bits) * _pack(b, bits)
    return _unpack(prod, bits, count)


@dataclass(frozen=True, eq=False)
class Mismatch:
    exponent: int
    lhs: Coeff
    rhs: Coeff


@dataclass(frozen=True)
class Comparison:
    """Outcome of :meth:`QSeries.eq_upto`; truthy iff the series agree."""

    order: int
    mismatch: Mismatch | None = None

    @property
    def passed(self) -> bool:
        return self.mismatch is None

    def __bool__(self) -> bool:
        return self.passed


class QSeries:
    """Immutable truncated Laurent series ``sum c_n q^n`` for min_exp <= n < trunc."""

    __slots__ = ("_min_exp", "_trunc", "_coeffs")

    def __init__(self, coeffs: Iterable, min_exp: int = 0, trunc: int | None = None):
        cs = tuple(_norm(c) for c in coeffs)
        if trunc is None:
            trunc = min_exp + len(cs)
        if trunc <= min_exp:
            raise ValueError(f"trunc {trunc} must exceed min_exp {min_exp}")
        width = trunc - min_exp
        if len(cs) > width:
            cs = cs[:width]
        elif len(cs) < width:
            cs = cs + (0,) * (width - len(cs))
        self._min_exp = min_exp
        self._trunc = trunc
        self._coeffs = cs

    @classmethod
    def _raw(cls, coeffs: tuple, min_exp: int, trunc: int) -> "QSeries":
        obj = cls.__new__(cls)
        obj._min_exp = min_exp
        obj._trunc = trunc
        obj._coeffs = coeffs
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, trunc: int, min_exp: int | None = None) -> "QSeries":
        if min_exp is None:
            min_exp = min(0, trunc - 1)
        return cls((), min_exp, trunc)

    @classmethod
    def one(cls, trunc: int) -> "QSeries":
        return cls.monomial(1, 0, trunc)

    @classmethod
    def monomial(cls, c, exponent: int, trunc: int) -> "QSeries":
        """``c q^exponent``, known exactly up to ``trunc``."""
        if exponent >= trunc:
            return cls.zero(trunc, min(0, trunc - 1))
        return cls([c], exponent, trunc)

    @classmethod
    def from_dict(cls, terms: dict[int, Coeff], trunc: int) -> "QSeries":
        lo = min([e for e in terms if e < trunc], default=0)
        lo = min(lo, trunc - 1)
        cs = [0] * (trunc - lo)
        for e, c in terms.items():
            if e < trunc:
                cs[e - lo] += c
        return cls(cs, lo, trunc)

    # -- accessors ----------------------------------------------------
    @property
    def min_exp(self) -> int:
        return self._min_exp

    @property
    def trunc(self) -> int:
        return self._trunc

    @property
    def coeffs(self) -> tuple[Coeff, ...]:
        return self._coeffs

    def coeff(self, n: int) -> Coeff:
        if n >= self._trunc:
            raise OutOfRange(f"coefficient of q^{n} unknown (series known below q^{self._trunc})")
        if n < self._min_exp:
            return 0
        return self._coeffs[n - self._min_exp]

    __getitem__ = coeff

    def items(self):
        """(exponent, coefficient) pairs over the stored window."""
        return zip(range(self._min_exp, self._trunc), self._coeffs)

    def valuation(self) -> int | None:
        for e, c in self.items():
            if c:
                return e
        return None

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def normalized(self) -> "QSeries":
        """Drop leading zero coefficients so that ``min_exp`` is the valuation."""
        v = self.valuation()
        if v is None or v == self._min_exp:
            return self
        return QSeries._raw(self._coeffs[v - self._min_exp:], v, self._trunc)

    def truncate(self, trunc: int) -> "QSeries":
        if trunc > self._trunc:
            raise OutOfRange(f"cannot extend truncation from {self._trunc} to {trunc}")
        if trunc == self._trunc:
            return self
        if trunc <= self._min_exp:
            return QSeries.zero(trunc, trunc - 1)
        return QSeries._raw(self._coeffs[: trunc - self._min_exp], self._min_exp, trunc)

    def _window(self, lo: int, hi: int) -> list[Coeff]:
        """Coefficients on [lo, hi); requires hi <= trunc."""
        pre = max(0, min(self._min_exp, hi) - lo)
        start = max(lo, self._min_exp)
        out = [0] * pre
        out.extend(self._coeffs[start - self._min_exp: hi - self._min_exp])
        return out

    # -- ring operations ----------------------------------------------
    def __neg__(self) -> "QSeries":
        return QSeries._raw(tuple(-c for c in self._coeffs), self._min_exp, self._trunc)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            if isinstance(other, Rational):
                other = QSeries.monomial(other, 0, self._trunc)
            else:
                return NotImplemented
        lo = min(self._min_exp, other._min_exp)
        hi = min(self._trunc, other._trunc)
        if hi <= lo:
            return QSeries.zero(hi, hi - 1)
        a = self._window(lo, hi)
        b = other._window(lo, hi)
        return QSeries._raw(tuple(_norm(x + y) for x, y in zip(a, b)), lo, hi)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if isinstance(other, (QSeries, Rational)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = _norm(c)
        return QSeries._raw(tuple(_norm(c * x) for x in self._coeffs), self._min_exp, self._trunc)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        lo = self._min_exp + other._min_exp
        hi = min(self._trunc + other._min_exp, other._trunc + self._min_exp)
        count = hi - lo
        na, da = _common_denominator(self._coeffs)
        nb, db = _common_denominator(other._coeffs)
        prod = _convolve(na, nb, count)
        den = da * db
        if den == 1:
            return QSeries._raw(tuple(prod), lo, hi)
        return QSeries._raw(tuple(_norm(Fraction(v, den)) for v in prod), lo, hi)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QSeries":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        if k == 0:
            return QSeries.one(self._trunc - self._min_exp)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Multiplicative inverse; the coefficient at ``min_exp`` must be nonzero.

        Uses Newton iteration b <- b + b(1 - u b), doubling the precision each
        round, so the cost is a few full multiplications.
        """
        m = self._min_exp
        lead = self._coeffs[0]
        if lead == 0:
            raise LeadingZero(f"coefficient at min_exp={m} is zero; normalize first")
        count = self._trunc - m
        u = QSeries._raw(self._coeffs, 0, count)
        b = QSeries([Fraction(1) / Fraction(lead)], 0, 1)
        p = 1
        while p < count:
            p = min(2 * p, count)
            bp = QSeries(b._coeffs, 0, p)
            err = 1 - u.truncate(p) * bp
            b = bp + bp * err
        return b.shift(-m)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, Rational):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, QSeries):
            return self * other.invert()
        return NotImplemented

    def __rtruediv__(self, other) -> "QSeries":
        if isinstance(other, Rational):
            return self.invert().scale(other)
        return NotImplemented

    # -- sparse binomial factors ----------------------------------------
    def mul_binomial(self, sign: int, e: int) -> "QSeries":
        """Multiply by ``1 - sign*q^e`` with e >= 1 (exact, O(length))."""
        if e < 1:
            raise ValueError("exponent of binomial factor must be positive")
        cs = list(self._coeffs)
        for i in range(len(cs) - 1, e - 1, -1):
            prev = cs[i - e]
            if prev:
                cs[i] = cs[i] - sign * prev
        return QSeries._raw(tuple(cs), self._min_exp, self._trunc)

    def div_binomial(self, sign: int, e: int) -> "QSeries":
        """Divide by ``1 - sign*q^e`` with e >= 1 (geometric expansion)."""
        if e < 1:
            raise ValueError("exponent of binomial factor must be positive")
        cs = list(self._coeffs)
        for i in range(e, len(cs)):
            prev = cs[i - e]
            if prev:
                cs[i] = cs[i] + sign * prev
        return QSeries._raw(tuple(cs), self._min_exp, self._trunc)

    # -- substitutions ----------------------------------------------------
    def dilate(self, k: int) -> "QSeries":
        """Substitute q -> q^k."""
        if k < 1:
            raise ValueError("dilation factor must be >= 1")
        if k == 1:
            return self
        lo = k * self._min_exp
        hi = k * (self._trunc - 1) + 1
        cs = [0] * (hi - lo)
        for i, c in enumerate(self._coeffs):
            cs[i * k] = c
        return QSeries._raw(tuple(cs), lo, hi)

    def shift(self, m: int) -> "QSeries":
        """Multiply by q^m."""
        return QSeries._raw(self._coeffs, self._min_exp + m, self._trunc + m)

    def extract_progression(self, ell: int, d: int) -> "QSeries":
        """``sum_n c_{ell*n+d} q^n`` for a power series ``sum c_n q^n``."""
        if ell < 1 or not 0 <= d < ell:
            raise ValueError("need ell >= 1 and 0 <= d < ell")
        if self._min_exp < 0 and any(self._coeffs[: -self._min_exp]):
            raise ValueError("progression extraction needs a power series (min_exp >= 0)")
        base = self._window(0, self._trunc)
        hi = (self._trunc - 1 - d) // ell + 1
        if hi <= 0:
            # nothing known at nonnegative exponents
            return QSeries._raw((0,), hi - 1, hi)
        return QSeries._raw(tuple(base[ell * n + d] for n in range(hi)), 0, hi)

    # -- comparison -------------------------------------------------------
    def eq_upto(self, other: "QSeries", order: int) -> Comparison:
        """Compare every coefficient below q^order."""
        if order > self._trunc or order > other._trunc:
            raise OutOfRange(
                f"order {order} exceeds truncations ({self._trunc}, {other._trunc})"
            )
        lo = min(self._min_exp, other._min_exp)
        for n in range(lo, order):
            x, y = self.coeff(n), other.coeff(n)
            if x != y:
                return Comparison(order, Mismatch(n, x, y))
        return Comparison(order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self._trunc == other._trunc
            and self.eq_upto(other, self._trunc).passed
        )

    def __repr__(self) -> str:
        terms = []
        for e, c in self.items():
            if c:
                terms.append(f"{c}*q^{e}" if e else f"{c}")
            if len(terms) >= 8:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self._trunc}))"


def q(trunc: int) -> QSeries:
    """The series q itself."""
    return QSeries.monomial(1, 1, trunc)


def at_least(build, N: int, slack: int = 8, attempts: int = 12) -> QSeries:
    """Call ``build(M)`` with growing M until the result is known to order N.

    Division by series of positive valuation and multiplication by Laurent
    factors cost precision; this retries with a larger working order.
    """
    M = N
    for _ in range(attempts):
        s = build(M)
        if s.trunc >= N:
            return s.truncate(N)
        M += max(slack, N - s.trunc)
        slack *= 2
    raise OutOfRange(f"could not reach order {N} (last trunc {s.trunc})")
