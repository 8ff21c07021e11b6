from fractions import Fraction

import pytest

from manin_malle import permgroup as pg
from manin_malle.reps import (age, cyclic_power, cyclic_weight_rep, direct_sum, double, index,
                              ind_eq_age_check, is_faithful, k_conjugacy_classes, permutation_rep,
                              rep_from_json, singularity_invariants, trivial_rep, validate_rep)
from manin_malle.permgroup import DomainError


def test_permutation_rep_examples():
    S3 = pg.symmetric_group(3)
    r = permutation_rep(S3)
    assert r.exps((0, 1, 2)) == (0, 0, 0)
    C3 = pg.cyclic_group(3)
    rc = permutation_rep(C3)
    assert rc.N == 3 and rc.exps(C3.generators[0]) == (0, 1, 2)
    r2 = permutation_rep(pg.cyclic_group(2))
    assert r2.exps((1, 0)) == (0, 1)
    assert double(r2).exps((1, 0)) == (0, 0, 1, 1)


def test_direct_sum_mismatch():
    with pytest.raises(DomainError):
        direct_sum(permutation_rep(pg.cyclic_group(2)), permutation_rep(pg.cyclic_group(3)))


def test_age_examples():
    r = cyclic_weight_rep(3, (1, 1))
    assert age(r, r.group.identity) == 0
    assert age(r, cyclic_power(r, 1)) == Fraction(2, 3)
    assert age(r, cyclic_power(r, 2)) == Fraction(4, 3)
    S3 = pg.symmetric_group(3)
    assert age(double(permutation_rep(S3)), (1, 2, 0)) == 2


def test_age_rejects_foreign_element():
    r = cyclic_weight_rep(3, (1, 1))
    with pytest.raises(DomainError):
        age(r, (0, 2, 1))


def test_index_examples():
    assert index(pg.symmetric_group(5), (0, 1, 2, 3, 4)) == 0
    assert index(pg.cyclic_group(2), (1, 0)) == 1
    assert index(pg.symmetric_group(3), (1, 2, 0)) == 2


def test_k_classes_fuse_over_q():
    C3 = pg.cyclic_group(3)
    K = k_conjugacy_classes(C3, {1, 2})
    assert len(K) == 2
    assert len(k_conjugacy_classes(C3, {1})) == 3
    with pytest.raises(DomainError):
        k_conjugacy_classes(pg.cyclic_group(5), {2})  # not closed: 2*2 = 4


def test_ind_age_examples():
    rpt = ind_eq_age_check(pg.symmetric_group(4))
    row = next(r for r in rpt.rows if r.element == (1, 2, 3, 0))
    assert row.ind == 3 and row.age == 3
    assert all(r.ok for r in rpt.rows)
    ident = next(r for r in rpt.rows if r.element == (0, 1, 2, 3))
    assert ident.ind == 0 == ident.age


def test_rep_json_roundtrip_and_validation():
    r = double(permutation_rep(pg.symmetric_group(3)))
    r2 = rep_from_json(r.to_json())
    assert r2.exponents == r.exponents and r2.N == r.N
    bad = r.to_json()
    bad["exponents"][0]["exponents"] = [1] * 6  # identity must be zero
    with pytest.raises(ValueError):
        rep_from_json(bad)


def test_invariants_age_one():
    inv = singularity_invariants(cyclic_weight_rep(2, (1, 1, 0)))
    assert inv.age_G == 1 and inv.mld == 1
    assert inv.upsilon == 1 == inv.delta
    assert inv.gamma == 1
    assert inv.canonical and inv.manin_alpha == 1 and inv.manin_log_exponent == 1
    assert inv.malle_alpha == 1 and inv.malle_log_exponent == 0


def test_invariants_non_canonical():
    inv = singularity_invariants(cyclic_weight_rep(3, (1, 1)))
    assert inv.age_G == Fraction(2, 3)
    assert not inv.canonical
    assert inv.manin_log_exponent == "unknown"
    assert inv.toric_alpha_bound == Fraction(3, 2) == inv.malle_alpha
    assert any("unequal ages" in d for d in inv.diagnostics)


def test_invariants_terminal():
    inv = singularity_invariants(cyclic_weight_rep(2, (1, 1, 1, 1)))
    assert inv.age_G == 2 and inv.gamma == 0 and inv.manin_log_exponent == 0


def test_invariants_doubled_perm_rep():
    # index of a transposition is 1; the doubled permutation rep matches it
    for n in (3, 4):
        inv = singularity_invariants(double(permutation_rep(pg.symmetric_group(n))))
        assert inv.age_G == 1 and inv.upsilon == 1
        assert inv.etale_codim1  # a transposition has two nonzero exponents here
    # on the plain permutation rep a transposition is a reflection
    assert not singularity_invariants(permutation_rep(pg.symmetric_group(3))).etale_codim1


def test_non_faithful_rejected():
    r = cyclic_weight_rep(4, (2,))
    assert not is_faithful(r)
    with pytest.raises(DomainError):
        singularity_invariants(r)


def test_invariant_identities_on_examples():
    reps = [cyclic_weight_rep(n, w) for n, w in [(2, (1, 1)), (3, (1, 2)), (4, (1, 3, 2)), (5, (1, 2, 3)),
                                                   (6, (1, 5, 1))]]
    reps.append(double(permutation_rep(pg.symmetric_group(3))))
    for r in reps:
        validate_rep(r)
        inv = singularity_invariants(r)
        assert inv.mld == inv.age_G and inv.delta == inv.upsilon
        assert inv.canonical == (inv.mld >= 1)
        if inv.mld > 1:
            assert inv.gamma == 0
        if inv.canonical:
            assert inv.manin_alpha == 1
        assert inv.malle_alpha == 1 / inv.age_G
        assert inv.malle_log_exponent == inv.upsilon - 1
        assert inv.toric_alpha_bound == 1 / inv.mld


def test_trivial_rep_shape():
    r = trivial_rep(pg.cyclic_group(3), 2)
    assert all(e == (0, 0) for e in r.exponents.values())
