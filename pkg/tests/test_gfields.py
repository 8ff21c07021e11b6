import math

import pytest

from manin_malle import gfields as gf
from manin_malle.arith import fundamental_discriminant, is_fundamental_discriminant, is_squarefree


def brute_quadratic(B):
    return sorted((D for D in range(-B, B + 1) if D not in (0, 1) and is_fundamental_discriminant(D)),
                  key=lambda D: (abs(D), D))


def test_quadratic_examples():
    recs = gf.enumerate_quadratic(100)
    assert min(r.disc for r in recs if r.disc > 0) == 5
    assert {-3, -4} <= {r.disc for r in gf.enumerate_quadratic(4)}
    assert len(recs) == len(brute_quadratic(100))
    assert all(r.d_L == abs(r.disc) for r in recs)


def test_quadratic_sieve_matches_brute():
    assert gf.quadratic_discriminants(5000) == brute_quadratic(5000)


def test_quadratic_count_closed_form():
    ds = gf.quadratic_discriminants(20000)
    for X in (0, 2, 3, 4, 5, 100, 999, 12345, 20000):
        assert gf.quadratic_count(X) == sum(1 for D in ds if abs(D) <= X)


def test_quadratic_ramification_data():
    r = next(r for r in gf.enumerate_quadratic(100) if r.disc == -20)
    assert r.ram_primes == ((2, "2", False), (5, "2", True))


def test_cyclic_cubic_examples():
    recs = gf.enumerate_cyclic_cubic(10**4)
    assert recs[0].disc == 49
    assert sum(1 for r in recs if r.disc == 81) == 1
    assert sum(1 for r in recs if r.disc == 63 ** 2) == 2


def test_cubic_conductors_match_character_count():
    mult = {f: gf.cubic_multiplicity(t, e) for f, t, e in gf.cubic_conductors(600)}
    for f in range(2, 601):
        assert mult.get(f, 0) == gf.cubic_character_count(f)


def test_v4_examples():
    recs = gf.enumerate_v4(3000)
    by_data = {r.defining_data: r for r in recs}
    assert by_data["subfields=-4,-8,8"].d_L == 256
    assert by_data["subfields=8,12,24"].d_L == 2304
    r = by_data["subfields=-3,-4,12"]
    assert r.d_L == 144
    assert dict((p, c) for p, c, _ in r.ram_primes) == {2: "2a", 3: "2b"}


def test_v4_against_pair_scan():
    B = 20000
    want = set()
    ks = [s for s in range(-200, 201) if s not in (0, 1) and is_squarefree(s)]
    for s1 in ks:
        for s2 in ks:
            if s1 == s2:
                continue
            g = math.gcd(s1, s2)
            s3 = s1 * s2 // (g * g)
            trip = frozenset(fundamental_discriminant(s) for s in (s1, s2, s3))
            if math.prod(abs(D) for D in trip) <= B:
                want.add(trip)
    got = {frozenset(int(x) for x in r.defining_data.split("=")[1].split(",")) for r in gf.enumerate_v4(B)}
    assert got == want


def test_record_validation():
    with pytest.raises(ValueError):
        gf.GFieldRecord("C2", 2, 5, 5, ((3, "2", True),))
    with pytest.raises(ValueError):
        gf.GFieldRecord("C2", 2, 5, 6, ())


def test_csv_ingest(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("group,degree,disc,ram_data\n"
                 "S3,3,-23,23:2:true\n"
                 "C2,2,5,3:2:true\n"
                 "C2,2,-3,3:2:true\n")
    res = gf.ingest_fields_csv(p)
    assert [r.disc for r in res] == [-23, -3]
    assert res.rejected and res.rejected[0][0] == 3 and "does not divide" in res.rejected[0][1]
    empty = tmp_path / "e.csv"
    empty.write_text("")
    assert list(gf.ingest_fields_csv(empty)) == []
    bad = tmp_path / "b.csv"
    bad.write_text("group,degree\n")
    with pytest.raises(gf.CSVParseError):
        gf.ingest_fields_csv(bad)


def test_csv_roundtrip(tmp_path):
    recs = gf.enumerate_quadratic(200)
    p = tmp_path / "q.csv"
    gf.write_fields_csv(recs, p)
    back = gf.ingest_fields_csv(p)
    assert [(r.disc, r.ram_primes) for r in back] == [(r.disc, r.ram_primes) for r in recs]


def test_malle_count():
    recs = gf.enumerate_quadratic(1000)
    s = gf.malle_count(recs, [10, 100, 1000])
    assert s.N == [len(brute_quadratic(b)) for b in (10, 100, 1000)]
    assert s.N[1] == 61
    assert gf.malle_count([], [10, 100]).N == [0, 0]
    with pytest.raises(gf.MixedGroupsError):
        gf.malle_count(recs[:3] + gf.enumerate_cyclic_cubic(100), [10])


def test_large_field_count():
    recs = gf.enumerate_cyclic_cubic(10**5)
    small = gf.malle_count(recs, [10**3, 10**5])
    large = gf.large_field_count(recs, "C3", [10**3, 10**5])
    assert large.N == [2 * n for n in small.N]


def test_series_helpers_match_records():
    Bs = [10, 100, 1000, 10**4]
    assert gf.quadratic_count_series(Bs).N == gf.malle_count(gf.enumerate_quadratic(10**4), Bs).N
    assert gf.cyclic_cubic_count_series(Bs).N == gf.malle_count(gf.enumerate_cyclic_cubic(10**4), Bs).N


def test_size_caps():
    with pytest.raises(gf.SizeLimitError):
        gf.enumerate_quadratic(10**10)
