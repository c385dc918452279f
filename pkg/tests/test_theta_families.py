from fractions import Fraction

import pytest

from rrsearch.catalog import paper_catalog
from rrsearch.errors import DivergentTerm, OrderTooLow
from rrsearch.families import (MapleGrid, SeriesFamily, den, expand_family, is_sparse, maple_grid, num,
                               pari_grid)
from rrsearch.products import classical_theta, false_theta_psi, theta_f
from rrsearch.series import QSeries, SignedMonomial
from rrsearch.theta_match import match_any, match_false_theta, match_theta, single

import oracles

CAT = {r.id: r for r in paper_catalog()}
RR1 = SeriesFamily(2, 0, 0, (den("q", 1),))


# ------------------------------------------------------------ theta_match


def test_match_theta_mod12_numerator():
    hit = match_theta(theta_f("q^3", "q^9", 80))
    assert str(hit) == "f(q^3, q^9)"


def test_match_theta_allows_zero_exponent():
    hit = match_theta(theta_f("1", "q^2", 80))
    t = hit.terms[0]
    assert t.a == SignedMonomial(1, 0) and t.b == SignedMonomial(1, 2) and t.coeff == 1


def test_match_theta_constant_is_none():
    assert match_theta(QSeries.one(60)) is None


@pytest.mark.parametrize("al", range(1, 13))
def test_match_theta_canonical(al):
    for be in range(al, 13):
        for sa in (1, -1):
            for sb in (1, -1):
                a, b = SignedMonomial(sa, al), SignedMonomial(sb, be)
                s = theta_f(b, a, 120)
                hit = match_theta(s)
                assert hit is not None, (a, b)
                assert hit.expand(120) == s
                t = hit.terms[0]
                assert (t.a.exponent, -t.a.sign) <= (t.b.exponent, -t.b.sign) or t.a.exponent == 0


def test_match_false_theta_catalog():
    s = expand_family(CAT["J3ft"].lhs, 100)
    assert str(match_false_theta(s)) == "Psi(q^15, q^3)"
    s = expand_family(CAT["H19ft"].lhs, 100)
    assert str(match_false_theta(s)) == "Psi(-q^3, -q)"


def test_two_term_false_theta():
    target = single("Psi", "q^22", "q^10").expand(120) + single("Psi", "q^26", "q^6", shift=1).expand(120)
    hit = match_false_theta(target, max_exp=12)
    assert hit is not None and hit.expand(120) == target
    # the same series is also a single false theta
    assert str(match_false_theta(target)) == "Psi(-q^7, -q)"


def test_ambiguous_window_is_not_matched():
    s55 = expand_family(CAT["K6ft"].lhs, 55)
    assert match_theta(s55) is not None and match_false_theta(s55) is not None
    assert match_any(s55) is None
    assert str(match_any(expand_family(CAT["K6ft"].lhs, 120))) == "Psi(q^24, q^8)"


def test_rr1_matches_nothing():
    assert match_any(expand_family(RR1, 100)) is None


def test_match_stable_under_order():
    for rid in ("mod12", "H19ft", "J3ft", "K4ft", "K6ft"):
        lhs = CAT[rid].lhs
        for theta in (None, "f(-q)", "psi(-q)"):
            s55 = expand_family(lhs, 55)
            s120 = expand_family(lhs, 120)
            if theta:
                s55 = (s55 * classical_theta(theta, 55)).truncate(55)
                s120 = (s120 * classical_theta(theta, 120)).truncate(120)
            hit = match_theta(s55) if theta else match_any(s55)
            if hit is not None:
                assert hit.expand(120) == s120, (rid, theta, str(hit))


def test_theta_expr_json_round_trip():
    e = single("Psi", "-q^3", "-q", coeff=Fraction(1, 2), shift=2)
    from rrsearch.theta_match import ThetaExpr
    assert ThetaExpr.from_json(e.to_json()) == e
    assert e.weights == (Fraction(2),)


# --------------------------------------------------------------- families


def test_rr1_expansion_is_partition_count():
    s = expand_family(RR1, 40)
    allowed = [n for n in range(1, 41) if n % 5 in (1, 4)]
    assert oracles.coeffs_of(s, 40) == oracles.partitions_with_parts(allowed, 40)
    assert oracles.coeffs_of(s, 8) == [1, 1, 1, 1, 2, 2, 3, 3, 4]


def test_mod4_series_is_one():
    assert expand_family(CAT["mod4"].lhs, 50) == QSeries.one(50)


def test_order_zero():
    assert expand_family(RR1, 0) == QSeries.one(0)


def test_divergent_family():
    with pytest.raises(DivergentTerm):
        expand_family(SeriesFamily(0, 0, 0, (den("q", 1),)), 10)


def test_is_sparse_examples():
    assert is_sparse(theta_f("q^3", "q^9", 55))
    # exponents 0, 3, 9, 18, 30, 45; the next one is 63
    assert theta_f("q^3", "q^9", 55).nonzero_count(55) == 6
    assert not is_sparse(expand_family(RR1, 60))
    assert is_sparse(QSeries.zero(60))
    with pytest.raises(OrderTooLow):
        is_sparse(expand_family(RR1, 30))


def test_alias_keys():
    # (a;q)_{2n} = (a;q^2)_n (aq;q^2)_n
    f1 = SeriesFamily(2, 0, 0, (num("-q", 1, 2), den("q", 1)))
    f2 = SeriesFamily(2, 0, 0, (num("-q^2", 2), num("-q", 2), den("q", 1)))
    assert f1.key() == f2.key()
    assert expand_family(f1, 40) == expand_family(f2, 40)
    # a factor repeated top and bottom cancels
    f3 = SeriesFamily(2, 0, 0, (num("q^2", 2), den("q^2", 2), den("q", 1)))
    assert f3.key() == RR1.key()


def test_family_json_round_trip():
    for r in paper_catalog():
        assert SeriesFamily.from_json(r.lhs.to_json()) == r.lhs


def test_smoke_grid_sizes():
    sizes = {f: sum(1 for _ in pari_grid(f, 2)) for f in ("S", "S'", "S''")}
    assert sizes == {"S": 7056, "S'": 7056, "S''": 576}


def test_grid_domains():
    for fam in pari_grid("S", 3):
        assert 0 <= abs(fam.b) <= fam.a and fam.c in (0, 1)
        assert {str(f.arg) for f in fam.factors} <= {"0", "-1", "q", "-q", "-q^2", "q^2"}


def test_maple_grid_small():
    g = MapleGrid(m=(1,), b=(1,), c=(0,), h_max=1, r_max=0, exp_max=2, offsets=(0,))
    fams = list(maple_grid(g))
    # (q;q)_j alone plus one numerator factor from the pool
    pool = 3 + 5  # sign +1: (1,1),(1,2),(2,2); sign -1: (0,1),(0,2),(1,1),(1,2),(2,2)
    assert len(fams) == 1 + pool
    assert all(f.a == 2 and f.b == 0 for f in fams)


def test_maple_grid_alternative_reading():
    g = MapleGrid(m=(1,), b=(1,), c=(0,), h_max=1, r_max=0, exp_max=1, offsets=(0,), negative_sign_floor=-1)
    fams = list(maple_grid(g))
    shifted = [f for f in fams if f.shift == -1]
    assert len(shifted) == 1
    # (-q^-1; q)_j = q^-1 (1 + q)(-1; q)_{j-1}: compare the first summands directly
    s = expand_family(shifted[0], 12)
    # sum_j q^(j^2) (-q^-1;q)_j / (q;q)_j summed directly
    want = QSeries.zero(12)
    for j in range(4):
        t = QSeries.monomial(1, j * j, 30)
        for i in range(j):
            t = t.mul_binomial(1, i - 1).div_binomial(-1, i + 1)
        want = want + t.truncate(12)
    assert s.first_difference(want) is None
