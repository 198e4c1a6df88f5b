from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qrankdiff.pseries import LeadingZero, OutOfRange, QSeries, at_least, q


def poly(cs, trunc=None, min_exp=0):
    return QSeries(cs, min_exp, trunc)


def naive_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


# -- spec examples ----------------------------------------------------------------


def test_add_cancels():
    s = poly([1, -1], 5) + poly([0, 1], 5)
    assert s == QSeries.one(5)


def test_add_inverse_is_zero():
    a = poly([3, Fraction(1, 2), -7], 3, -1)
    assert (a + (-a)).is_zero()


def test_scale_half():
    s = poly([1, -2, 0, 0, 2], 6).scale(Fraction(1, 2))
    assert list(s.coeffs) == [Fraction(1, 2), -1, 0, 0, 1, 0]


def test_geometric_telescopes():
    geo = poly([1] * 20)
    assert (poly([1, -1], 20) * geo) == QSeries.one(20)


def test_square():
    assert list((poly([1, 1], 3) ** 2).coeffs) == [1, 2, 1]


def test_pentagonal_from_factors():
    s = QSeries.one(13)
    for n in range(1, 13):
        s = s * poly([1] + [0] * (n - 1) + [-1], 13)
    expected = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}
    assert all(s[n] == expected.get(n, 0) for n in range(13))


def test_invert_geometric():
    assert list(poly([1, -1], 8).invert().coeffs) == [1] * 8


def test_invert_laurent_shift():
    inv = poly([1, -1], 10, 2).invert()
    assert inv.min_exp == -2
    assert [inv[n] for n in range(-2, 6)] == [1] * 8


def partition_counts(n):
    p = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            p[m] += p[m - k]
    return p


def test_invert_euler_product_counts_partitions():
    s = QSeries.one(7)
    for n in range(1, 7):
        s = s.mul_binomial(1, n)
    assert list(s.invert().coeffs) == partition_counts(6)


def test_invert_leading_zero():
    with pytest.raises(LeadingZero):
        poly([0, 1], 5).invert()


def test_dilate():
    d = poly([1, 1], 2).dilate(3)
    assert d.trunc == 4 and [d[n] for n in range(4)] == [1, 0, 0, 1]


def test_dilate_partition_series():
    s = QSeries.one(11)
    for n in range(1, 11):
        s = s.mul_binomial(1, n)
    d = s.invert().dilate(5)
    p = partition_counts(10)
    assert all(d[n] == (p[n // 5] if n % 5 == 0 else 0) for n in range(d.trunc))


def test_shift():
    assert QSeries.one(3).shift(-1).min_exp == -1
    a = poly([1, 2, 3], 3)
    assert a.shift(4).shift(-4) == a
    s = poly([1, 1], 2).shift(2)
    assert (s.min_exp, s.trunc, list(s.coeffs)) == (2, 4, [1, 1])


def test_extract_progression():
    s = poly(list(range(30))).extract_progression(3, 2)
    assert list(s.coeffs[:3]) == [2, 5, 8]
    assert s.trunc == (30 - 1 - 2) // 3 + 1


def test_reassembly():
    a = poly([(-1) ** n * n * n for n in range(41)])
    total = QSeries.zero(a.trunc)
    ell = 5
    for d in range(ell):
        part = a.extract_progression(ell, d).dilate(ell).shift(d)
        total = total + part
    assert total.eq_upto(a, total.trunc).passed


def test_coeff_and_out_of_range():
    s = poly([1, -2, 0, 0, 2], 5)
    assert s[4] == 2
    with pytest.raises(OutOfRange):
        s.coeff(5)


def test_eq_upto_reports_first_mismatch():
    a = poly([1, -1], 10)
    b = a + QSeries.monomial(1, 7, 10)
    r = a.eq_upto(b, 10)
    assert not r.passed
    assert (r.mismatch.exponent, r.mismatch.lhs, r.mismatch.rhs) == (7, 0, 1)
    assert a.eq_upto(a, 10).passed


def test_eq_upto_refuses_unknown_range():
    with pytest.raises(OutOfRange):
        poly([1], 5).eq_upto(poly([1], 8), 6)


def test_mul_truncation_rule():
    a = QSeries([1, 1], -1, 5)
    b = QSeries([1], 2, 4)
    c = a * b
    assert c.min_exp == 1
    assert c.trunc == min(5 + 2, 4 - 1)


def test_at_least_grows_working_order():
    def build(M):
        # dividing by q^3 (1 - q) loses three orders
        return QSeries.one(M) / QSeries([1, -1], 3, M)

    s = at_least(build, 20)
    assert s.trunc == 20 and s.min_exp == -3


# -- properties ---------------------------------------------------------------------

coeff_st = st.one_of(
    st.integers(-20, 20),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
)


@st.composite
def series(draw, max_width=10):
    lo = draw(st.integers(-3, 3))
    width = draw(st.integers(1, max_width))
    cs = draw(st.lists(coeff_st, min_size=width, max_size=width))
    return QSeries(cs, lo, lo + width)


def _same(a, b):
    n = min(a.trunc, b.trunc)
    return a.eq_upto(b, n).passed


@settings(max_examples=1000, deadline=None)
@given(series(), series(), series())
def test_ring_associativity(a, b, c):
    assert _same((a + b) + c, a + (b + c))
    assert _same((a * b) * c, a * (b * c))


@settings(max_examples=1000, deadline=None)
@given(series(), series(), series())
def test_ring_commutativity_and_distributivity(a, b, c):
    assert _same(a + b, b + a)
    assert _same(a * b, b * a)
    assert _same(a * (b + c), a * b + a * c)


@settings(max_examples=400, deadline=None)
@given(series(), series(), series())
def test_ring_identities_and_inverse(a, b, c):
    assert _same(a - a, QSeries.zero(a.trunc))
    assert _same(a * QSeries.one(50), a)
    u = a.normalized()
    if not u.is_zero():
        prod = u * u.invert()
        assert _same(prod, QSeries.one(prod.trunc))
        assert _same(u.invert() * u, QSeries.one(prod.trunc))


@settings(max_examples=200, deadline=None)
@given(series(max_width=12), series(max_width=12), st.integers(1, 11), st.integers(1, 11))
def test_truncation_soundness_of_products(a, b, cut_a, cut_b):
    # treat a and b as exact polynomials; multiply truncations and compare with the exact product
    ta = a.truncate(max(a.min_exp + 1, a.trunc - cut_a))
    tb = b.truncate(max(b.min_exp + 1, b.trunc - cut_b))
    c = ta * tb
    exact = naive_mul(a, b)
    for n in range(c.min_exp, c.trunc):
        assert c[n] == exact.get(n, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.lists(coeff_st, min_size=1, max_size=6))
def test_truncation_soundness_across_orders(n1, extra, tail):
    # computing at two working orders agrees below the smaller one
    cs = [1] + tail

    def build(M):
        a = QSeries(cs, 0, M)
        return (a * a + a.shift(1)).invert()

    lo, hi = build(n1), build(n1 + extra)
    assert lo.eq_upto(hi, lo.trunc).passed


def test_dilate_composes():
    a = poly([1, 2, 3, 4], 4)
    assert a.dilate(6) == a.dilate(2).dilate(3)


def test_q_generator():
    assert [q(4)[n] for n in range(4)] == [0, 1, 0, 0]
