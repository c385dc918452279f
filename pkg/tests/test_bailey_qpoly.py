from fractions import Fraction

import pytest

from rrsearch import bailey
from rrsearch.bailey import (NEW_PAIR_RECURRENCE, BaileyPair, RecurrenceCoefficient, beta_from_alpha,
                             g2_pair, get_pair, guess_first_order, new_pair, new_pair_misprint,
                             q_gauss_sides, transform, unit_pair, verify_pair, verify_recurrence)
from rrsearch.catalog import expand_form, paper_catalog
from rrsearch.errors import DomainError, IncompatibleSpecialization
from rrsearch.families import expand_family
from rrsearch.products import theta_f
from rrsearch.qpoly import (QPolynomial, check_mod4poly, check_mod8poly, mod4poly_lhs, mod8poly_sides, qbinom,
                            trinomial_T0, trinomial_T1, trinomial_V)
from rrsearch.series import QSeries

import oracles

CAT = {r.id: r for r in paper_catalog()}


# ------------------------------------------------------------------ pairs


def test_new_pair_small_betas():
    p = new_pair()
    assert beta_from_alpha(p, 0, 20) == QSeries.one(20)
    assert beta_from_alpha(p, 1, 20) == QSeries([1, -1], 0, 24).invert().__pow__(2).truncate(20)


def test_unit_pair_beta():
    for x in (0, 1):
        p = unit_pair(x)
        for n in range(5):
            want = oracles.inverse(oracles.mul(oracles.poch(1, 1, 1, n, 30), oracles.poch(1, x + 1, 1, n, 30),
                                               30), 30)
            assert oracles.coeffs_of(beta_from_alpha(p, n, 30), 30) == want


def test_alpha_zero_is_one():
    for name in bailey.PAIRS:
        p = get_pair(name)
        assert p.alpha(0, 10) == QSeries.one(10, p.scale)


def test_verify_new_pair():
    assert verify_pair(new_pair(), 12, 40)


def test_verify_g2():
    assert verify_pair(g2_pair(), 10, 30)


def test_misprint_fails_at_three():
    chk = verify_pair(new_pair_misprint(), 8, 30)
    assert not chk and chk.failed_at == 3


def test_unknown_pair():
    with pytest.raises(KeyError):
        get_pair("nope")


def test_beta_linearity():
    p, u = new_pair(), unit_pair(0)
    both = BaileyPair("sum", Fraction(0), lambda n: _add(p.alpha_terms(n), u.alpha_terms(n), 3))
    for n in range(6):
        lhs = beta_from_alpha(both, n, 25)
        rhs = beta_from_alpha(p, n, 25).scalar_mul(1) + beta_from_alpha(u, n, 25).scalar_mul(3)
        assert lhs.first_difference(rhs) is None


def _add(a, b, c):
    out = dict(a)
    for e, x in b.items():
        out[e] = out.get(e, 0) + c * x
    return {e: x for e, x in out.items() if x}


# ------------------------------------------------------------- recurrence


def test_recurrence_holds_from_three():
    assert verify_recurrence(new_pair(), NEW_PAIR_RECURRENCE, range(3, 13), 40)


def test_recurrence_fails_at_two():
    chk = verify_recurrence(new_pair(), NEW_PAIR_RECURRENCE, [2], 40)
    assert not chk and chk.failed_at == 2


def test_unit_pair_forced_ratio():
    # beta_n / beta_{n-1} = 1 / ((1 - q^n)(1 - q^(n+1))) relative to x = q
    rc = RecurrenceCoefficient(1, (0, 0), (), ((-1, 1, 0), (-1, 1, 1)))
    assert verify_recurrence(unit_pair(1), rc, range(1, 10), 30)
    assert guess_first_order(unit_pair(1), range(2, 9)) is not None


def test_guess_new_pair():
    g = guess_first_order(new_pair(), range(3, 13))
    assert g == NEW_PAIR_RECURRENCE
    assert verify_recurrence(new_pair(), g, range(3, 19), 40)


def test_guess_irregular_none():
    # alpha_n = q^(n^3) has no first-order recurrence in the atom grammar
    p = BaileyPair("irregular", Fraction(0), lambda n: {n ** 3: 1} if n % 3 else {0: 1})
    assert guess_first_order(p, range(3, 9)) is None


# ------------------------------------------------------------- transforms


def test_wbl_gives_mod12():
    lhs, rhs = transform("WBL", new_pair(), 60)
    assert lhs.first_difference(rhs) is None
    assert lhs.first_difference(expand_family(CAT["mod12"].lhs, 60)) is None


def test_atnsbl_gives_mod16():
    lhs, rhs = transform("ATNSBL", new_pair(), 60)
    assert lhs.first_difference(rhs) is None
    assert lhs.first_difference(expand_family(CAT["mod16"].lhs, 60)) is None


def test_atnsneg_g2_gives_mod5():
    lhs, rhs = transform("ATNSnegBL", g2_pair(), 60)
    assert lhs.first_difference(rhs) is None
    one_plus_q = QSeries([1, 1], 0, 60)
    assert lhs.first_difference(one_plus_q * expand_family(CAT["mod5"].lhs, 60)) is None
    assert rhs.first_difference(one_plus_q * expand_form(CAT["mod5"].forms["corrected_raw"], 60)) is None


def test_literal_prefactor_breaks_the_lemma():
    lhs, rhs = transform("ATNSBL", new_pair(), 30, literal_prefactor=True)
    assert lhs.first_difference(rhs) == 2


def test_fbl_unit_pair():
    lhs, rhs = transform("FBL", unit_pair(1), 40)
    assert lhs.first_difference(rhs) is None


def test_ssbl1_unit_pair():
    lhs, rhs = transform("SSBL1", unit_pair(0), 40)
    assert lhs.first_difference(rhs) is None


def test_incompatible_specialization():
    with pytest.raises(IncompatibleSpecialization):
        transform("FBL", new_pair(), 10)
    with pytest.raises(IncompatibleSpecialization):
        transform("SSBL1", unit_pair(1), 10)


def test_theta_rewrite_used_for_mod5():
    assert theta_f("1", "q^5", 100) == theta_f("q^5", "q^15", 100).scalar_mul(2)


# ---------------------------------------------------------------- q-Gauss


def test_q_gauss_mod2_1():
    lhs, rhs = q_gauss_sides("-q", "q", 2, 100)
    assert lhs.first_difference(rhs) is None
    assert lhs.first_difference(expand_family(CAT["mod2-1"].lhs, 100)) is None


def test_q_gauss_mod2_2():
    lhs, rhs = q_gauss_sides("-q", "q^3", 2, 100)
    assert lhs.first_difference(rhs) is None
    # (q^3;q^2)_n (q^2;q^2)_n = (q;q)_{2n+1} / (1 - q)
    want = QSeries([1, -1], 0, 100) * expand_family(CAT["mod2-2"].lhs, 100)
    assert lhs.first_difference(want) is None


# -------------------------------------------------------------- q-binomials


def _poly(cs):
    return QPolynomial(tuple(cs), 0) if cs else QPolynomial()


def test_qbinom_examples():
    assert qbinom(4, 2).coeffs == (1, 1, 2, 1, 1)
    assert qbinom(3, 5).is_zero()
    assert qbinom(7, 0) == QPolynomial.const(1)


def test_qbinom_pascal():
    for A in range(1, 31):
        for B in range(0, A + 1):
            g = qbinom(A, B)
            assert g == qbinom(A - 1, B - 1) + qbinom(A - 1, B).shift(B)
            assert g == qbinom(A - 1, B) + qbinom(A - 1, B - 1).shift(A - B)
    for A in range(12):
        for B in range(A + 1):
            assert list(qbinom(A, B).coeffs) == oracles.gaussian(A, B)


def test_qbinom_base():
    assert qbinom(3, 1, 2).coeffs == (1, 0, 1, 0, 1)


def _t_direct(m, a, weight):
    total = {}
    for j in range(m + 1):
        x = oracles.gaussian(m, j)
        x2 = [0] * (2 * len(x))
        for i, c in enumerate(x):
            x2[2 * i] = c
        y = oracles.gaussian(2 * m - 2 * j, m - a - j)
        for i, c in enumerate(x2):
            for k, d in enumerate(y):
                e = i + k + (j if weight else 0)
                total[e] = total.get(e, 0) + (-1) ** j * c * d
    return {e: c for e, c in total.items() if c}


def test_trinomials_against_direct_sum():
    for m in range(6):
        for a in range(-m, m + 1):
            t1 = {e: c for e, c in trinomial_T1(m, a).to_series(80).terms()}
            t0 = {e: c for e, c in trinomial_T0(m, a).to_series(80).terms()}
            assert t1 == _t_direct(m, a, True)
            assert t0 == _t_direct(m, a, False)
    assert trinomial_T1(0, 0) == QPolynomial.const(1)


def test_trinomial_symmetry():
    for m in range(11):
        for a in range(-m, m + 1):
            assert trinomial_T1(m, a) == trinomial_T1(m, -a)
            assert trinomial_T0(m, a) == trinomial_T0(m, -a)


def test_v_examples():
    assert trinomial_V(1, 1) == QPolynomial.const(1)
    with pytest.raises(DomainError):
        trinomial_V(0, 1)


def test_mod4poly_small():
    assert all(check_mod4poly(N) for N in range(0, 12))


def test_mod8poly_from_one():
    assert all(check_mod8poly(N) for N in range(1, 12))


def test_mod8poly_at_zero_literal():
    lhs, rhs = mod8poly_sides(0)
    assert lhs == QPolynomial.const(1) and rhs.is_zero()
    assert not check_mod8poly(0)


def test_mod4poly_stabilizes():
    lhs = mod4poly_lhs(30, 15)
    assert lhs.to_series(15) == QSeries.one(15)
