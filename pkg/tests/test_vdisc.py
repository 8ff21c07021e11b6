from fractions import Fraction

import pytest

from manin_malle import gfields as gf
from manin_malle.permgroup import DomainError
from manin_malle.reps import age, cyclic_power, cyclic_weight_rep
from manin_malle.vdisc import (WildRamificationError, check_vdisc_matches_disc, disc_zeta_partial,
                               quadratic_rep, tame_local_exponent, tuning_module_oracle, v_discriminant)


def quad(D):
    return next(r for r in gf.enumerate_quadratic(abs(D)) if r.disc == D)


def test_tame_exponent_examples():
    assert tame_local_exponent(quadratic_rep(), (1, 0)) == 1
    r = cyclic_weight_rep(2, (1, 1, 0))
    assert tame_local_exponent(r, cyclic_power(r, 1)) == 1
    r3 = cyclic_weight_rep(3, (1, 1))
    a, diag = tame_local_exponent(r3, cyclic_power(r3, 2), with_diagnostic=True)
    assert a == Fraction(2, 3) and "differ" in diag
    with pytest.raises(DomainError):
        tame_local_exponent(r3, r3.group.identity)


def test_tuning_oracle_examples():
    assert tuning_module_oracle(3, (1, 1), 1) == Fraction(2, 3)
    assert tuning_module_oracle(2, (1, 1, 0)) == 1
    for n in range(2, 13):
        assert tuning_module_oracle(n, (0, 0, 0)) == 0
    with pytest.raises(DomainError):
        tuning_module_oracle(4, (1,), 2)


def test_tuning_oracle_small_table():
    # hand-worked: n = 5, weight 1, e = 2 -> j = 3 (2*3 = 1 mod 5), total 3/5
    assert tuning_module_oracle(5, (1,), 2) == Fraction(3, 5)
    r = cyclic_weight_rep(5, (1,))
    assert age(r, cyclic_power(r, 3)) == Fraction(3, 5)  # 3 = 1/2 mod 5
    assert age(r, cyclic_power(r, 2)) == Fraction(2, 5)


def test_vdisc_examples():
    rep = quadratic_rep()
    assert v_discriminant(quad(5), rep).D == 5
    assert v_discriminant(quad(-3), rep).D == 3
    with pytest.raises(WildRamificationError, match="p=2"):
        v_discriminant(quad(8), rep)


def test_vdisc_s_places():
    rep = quadratic_rep()
    vd = v_discriminant(quad(-20), rep, s_factors={2: Fraction(1, 2)}, s_places=(2,))
    assert vd.D == 5 and vd.D_ext == Fraction(5, 2)


def test_check_report():
    recs = gf.enumerate_quadratic(200)
    rpt = check_vdisc_matches_disc(recs)
    assert rpt.ok and rpt.passed == rpt.checked
    assert all(D % 2 == 0 for D, _ in rpt.skipped)
    r5 = check_vdisc_matches_disc([quad(5)])
    assert r5.passed == 1
    even = check_vdisc_matches_disc([quad(-4)])
    assert even.checked == 0 and even.skipped


def test_disc_zeta_partial():
    rep = quadratic_rep()
    assert disc_zeta_partial([], rep, 2.0, 100) == 0
    odd = [r for r in gf.enumerate_quadratic(1000) if r.disc % 2]
    want = sum(abs(r.disc) ** -2.0 for r in odd if abs(r.disc) <= 500) / 2
    assert disc_zeta_partial(odd, rep, 2.0, 500) == pytest.approx(want, rel=1e-13)
    with pytest.raises(gf.MixedGroupsError):
        disc_zeta_partial(odd[:2] + gf.enumerate_cyclic_cubic(100), rep, 2.0, 100)
