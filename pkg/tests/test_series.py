from fractions import Fraction

import mpmath
import pytest

from rrsearch.engel import engel_expand, engel_partial_sums
from rrsearch.errors import (DegenerateProduct, DomainError, EngelStall, NonConvergentTheta, NotInvertible,
                             TailTooLarge)
from rrsearch.fixedpoint import HighPrecisionValue, eval_fixed, log_fixed
from rrsearch.products import (classical_theta, false_theta_psi, jtp_product, poch_finite, poch_infinite,
                               theta_f)
from rrsearch.series import QSeries, SignedMonomial

import oracles


def ser(cs, order=None):
    return QSeries(list(cs), 0, len(cs) - 1 if order is None else order)


# ---------------------------------------------------------------- QSeries


def test_normalization_strips_leading_zeros():
    s = QSeries([0, 0, 3, 1], 0, 5)
    assert s.lo == 2 and s.coeff(2) == 3 and s.coeff(0) == 0
    assert QSeries([0, 0], 0, 4).is_zero()


def test_truncation_takes_minimum_order():
    a = QSeries([1, 1], 0, 10)
    b = QSeries([1, 2, 3], 0, 4)
    assert (a + b).order == 4
    assert (a * b).order == 4


def test_scale_alignment():
    half = QSeries.monomial(1, Fraction(1, 2), 3)
    s = half + QSeries.one(3)
    assert s.scale == 2
    assert s.coeff(Fraction(1, 2)) == 1 and s.coeff(0) == 1
    assert (half * half).simplify_scale().coeff(1) == 1


def test_invert_geometric():
    assert (1 / ser([1, -1], 3)).dense() == [1, 1, 1, 1]


def test_substitute_power():
    s = ser([1, 1]).substitute_power(2)
    assert s.coeff(2) == 1 and s.coeff(1) == 0


def test_mul_difference_of_squares():
    assert (ser([1, -1], 5) * ser([1, 1], 5)).dense() == [1, 0, -1, 0, 0, 0]


def test_invert_zero_raises():
    with pytest.raises(NotInvertible):
        QSeries.zero(5).invert()


def test_exact_rationals():
    s = ser([Fraction(1, 2), Fraction(1, 3)])
    t = s * s
    assert t.coeff(1) == Fraction(1, 3)
    assert all(isinstance(c, (int, Fraction)) for c in t.coeffs)


def test_laurent_support():
    s = QSeries.monomial(1, -2, 5) + QSeries.one(5)
    assert s.lo == -2
    inv = s.invert()
    assert inv.lo == 2
    assert (s * inv).truncate(inv.order - 2).first_difference(QSeries.one(inv.order - 2)) is None


# --------------------------------------------------------------- builders


@pytest.mark.parametrize("arg,base,n,expected", [
    ("q", 1, 2, [1, -1, -1, 1]),
    ("0", 1, 7, [1]),
])
def test_poch_finite_small(arg, base, n, expected):
    assert oracles.coeffs_of(poch_finite(arg, base, n, 10), 10) == expected + [0] * (11 - len(expected))


def test_poch_finite_minus_one():
    s = poch_finite("-1", 2, 3, 20)
    assert oracles.coeffs_of(s, 8) == [2, 0, 2, 0, 2, 0, 2, 0, 0]
    assert oracles.coeffs_of(s, 8) == oracles.poch(-1, 0, 2, 3, 8)


def test_poch_infinite_euler():
    assert oracles.coeffs_of(poch_infinite("q", 1, 12), 12) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]


def test_poch_infinite_minus_one():
    assert oracles.coeffs_of(poch_infinite("-1", 2, 4), 4) == [2, 0, 2, 0, 2]


def test_poch_infinite_first_factor_beyond_order():
    assert poch_infinite("q^5", 5, 4).dense() == [1, 0, 0, 0, 0]


def test_poch_infinite_degenerate():
    with pytest.raises(DegenerateProduct):
        poch_infinite("1", 1, 5)


@pytest.mark.parametrize("arg,base", [("q", 1), ("-q^2", 3), ("q^3", 2), ("-1", 4)])
def test_poch_infinite_against_multiplication(arg, base):
    m = SignedMonomial.parse(arg)
    assert oracles.coeffs_of(poch_infinite(arg, base, 40), 40) == oracles.poch(m.sign, int(m.exponent), base,
                                                                               None, 40)


def test_theta_is_euler_product():
    assert theta_f("-q", "-q^2", 12) == poch_infinite("q", 1, 12)


def test_theta_with_constant_argument():
    a = theta_f("1", "q^5", 20)
    b = theta_f("q^5", "q^15", 20)
    assert a.first_difference(2 * b) is None


def test_theta_small_direct():
    assert oracles.coeffs_of(theta_f("q", "q", 4), 4) == [1, 2, 0, 0, 2]


def test_theta_nonconvergent():
    with pytest.raises(NonConvergentTheta):
        theta_f("q", "q^-1", 10)


@pytest.mark.parametrize("a,b", [("-q", "-q^2"), ("q^3", "q^9"), ("q", "q")])
def test_jtp_examples(a, b):
    assert jtp_product(a, b, 60) == theta_f(a, b, 60)


def test_false_theta_examples():
    assert oracles.coeffs_of(false_theta_psi("-q^3", "-q", 10), 10) == [1, 1, 0, -1, 0, 0, -1, 0, 0, 0, 1]
    assert false_theta_psi("q^15", "q^3", 2).dense() == [1, 0, 0]
    s = false_theta_psi("q^15", "q^3", 18)
    assert s.coeff(3) == -1 and s.coeff(15) == 1 and s.coeff(18) == 0 and s.coeff(0) == 1


def test_false_theta_against_direct_sum():
    for sa, al, sb, be in [(-1, 3, -1, 1), (1, 15, 1, 3), (1, 22, 1, 10), (-1, 7, -1, 1)]:
        a, b = SignedMonomial(sa, al), SignedMonomial(sb, be)
        assert oracles.coeffs_of(false_theta_psi(a, b, 80), 80) == oracles.false_theta(sa, al, sb, be, 80)


def test_classical_thetas():
    assert oracles.coeffs_of(classical_theta("phi(-q)", 4), 4) == [1, -2, 0, 0, 2]
    assert classical_theta("f(-q)", 30) == poch_infinite("q", 1, 30)
    psi = classical_theta("psi(-q)", 6)
    direct = oracles.mul(oracles.poch(1, 2, 2, None, 6), oracles.inverse(oracles.poch(-1, 1, 2, None, 6), 6), 6)
    assert oracles.coeffs_of(psi, 6) == direct
    assert oracles.coeffs_of(classical_theta("phi(q)", 30), 30) == oracles.theta(1, 1, 1, 1, 30)
    assert oracles.coeffs_of(classical_theta("psi(q)", 30), 30) == oracles.theta(1, 1, 1, 3, 30)


# ----------------------------------------------------------------- Engel


def test_engel_geometric():
    # 1/(1-q) = 1 + 1/(q^-1 - 1) exactly
    target = 1 / ser([1, -1], 30)
    ex = engel_expand(target, 4)
    assert ex.terminated and len(ex) == 2
    assert ex.digits[0].coeff(0) == 1 and ex.digits[0].nonzero_count() == 1
    assert ex.digits[1].coeff(-1) == 1 and ex.digits[1].coeff(0) == -1
    sums = engel_partial_sums(ex.digits, 30)
    assert target.first_difference(sums[0]) == 1 and target.first_difference(sums[1]) is None


def test_engel_constant_terminates():
    ex = engel_expand(QSeries.one(20), 3)
    assert ex.terminated and len(ex) == 1


def test_engel_rr1_product():
    from rrsearch.prodmake import PeriodicProductForm
    A = PeriodicProductForm(5, (-1, 0, 0, -1, 0)).to_series(80)
    ex = engel_expand(A, 4)
    d = [A.first_difference(s) for s in engel_partial_sums(ex.digits, 80)]
    assert all(x is not None for x in d[:-1])
    assert all(x < y for x, y in zip(d, d[1:]) if y is not None)


def test_engel_stall_carries_digits():
    from rrsearch.prodmake import PeriodicProductForm
    A = PeriodicProductForm(5, (-1, 0, 0, -1, 0)).to_series(10)
    with pytest.raises(EngelStall) as info:
        engel_expand(A, 30)
    assert len(info.value.digits) >= 2


# -------------------------------------------------------------- fixed point


def test_eval_fixed_trivial():
    v = eval_fixed(ser([1, 1], 100), Fraction(1, 2), 10)
    assert str(v) == "1.5000000000"


def test_log_fixed_of_one():
    assert log_fixed(HighPrecisionValue.from_fraction(1, 40)).mantissa == 0


def test_log_fixed_nonpositive():
    with pytest.raises(DomainError):
        log_fixed(HighPrecisionValue.from_fraction(0, 20))


def test_eval_fixed_tail_guard():
    with pytest.raises(TailTooLarge):
        eval_fixed(poch_infinite("q", 1, 5), Fraction(1, 2), 30)


def test_log_of_euler_product_against_factor_sum():
    P = 60
    q0 = Fraction(1, 10_000)
    s = poch_infinite("q", 1, 20)
    got = log_fixed(eval_fixed(s, q0, P + 10), P)
    with mpmath.workdps(P + 20):
        q = mpmath.mpf(1) / 10_000
        ref = mpmath.fsum(mpmath.log(1 - q ** j) for j in range(1, 40))
        assert abs(mpmath.mpf(got.mantissa) / mpmath.mpf(10) ** P - ref) < mpmath.mpf(10) ** (-(P - 2))


def test_eval_fixed_error_bound_against_doubled_precision():
    q0 = Fraction(3, 100)
    s = poch_infinite("q", 1, 80)
    lo, hi = eval_fixed(s, q0, 30), eval_fixed(s, q0, 60)
    assert abs(lo.to_fraction() - hi.to_fraction()) <= Fraction(1, 10 ** 30) + Fraction(1, 10 ** 58)
