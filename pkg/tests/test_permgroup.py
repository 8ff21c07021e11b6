import itertools
from fractions import Fraction

import pytest

from manin_malle import permgroup as pg


def brute_classes(G):
    seen, out = set(), []
    for g in G.elements:
        if g in seen:
            continue
        c = frozenset(pg.conj(x, g) for x in G.elements)
        seen |= c
        out.append(c)
    return out


def test_closure_examples():
    assert pg.group_from_generators(3, [(1, 2, 0)]).order == 3
    S3 = pg.group_from_generators(3, [(1, 0, 2), (1, 2, 0)])
    assert S3.order == 6
    assert set(S3.elements) == set(itertools.permutations(range(3)))
    T = pg.group_from_generators(2, [])
    assert T.order == 1 and T.elements == ((0, 1),)


def test_elements_sorted_and_closed():
    G = pg.group_from_generators(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    assert list(G.elements) == sorted(G.elements)
    E = G.as_set()
    assert all(pg.mul(a, b) in E for a in G.elements for b in G.elements)
    assert all(pg.inv(a) in E for a in G.elements)


def test_invalid_perm_and_cap():
    with pytest.raises(ValueError):
        pg.group_from_generators(3, [(0, 0, 1)])
    with pytest.raises(pg.SizeLimitError):
        pg.group_from_generators(6, [(1, 0, 2, 3, 4, 5), (1, 2, 3, 4, 5, 0)], cap=100)


def test_conjugacy_classes():
    S3 = pg.symmetric_group(3)
    cls = pg.conjugacy_classes(S3)
    assert [len(c) for c in cls] == [1, 2, 3]
    assert {frozenset(c) for c in cls} == set(brute_classes(S3))
    C3 = pg.cyclic_group(3)
    assert [len(c) for c in pg.conjugacy_classes(C3)] == [1, 1, 1]
    assert len(pg.conjugacy_classes(pg.group_from_generators(3, []))) == 1


def test_classes_sorted_by_size_then_rep():
    cls = pg.conjugacy_classes(pg.symmetric_group(4))
    keys = [(len(c), min(c)) for c in cls]
    assert keys == sorted(keys)


def test_normalizer_centralizer_center():
    C3 = pg.cyclic_group(3)
    assert pg.centralizer_in_sym(C3).order == 3
    assert pg.normalizer_in_sym(C3).order == 6
    assert pg.center(pg.symmetric_group(3)).order == 1
    assert pg.center(pg.group_from_generators(4, [(1, 2, 3, 0), (0, 3, 2, 1)])).order == 2


def test_scan_limit():
    with pytest.raises(pg.SizeLimitError):
        pg.normalizer_in_sym(pg.cyclic_group(9))


def test_fiber_count_examples():
    for n in range(2, 7):
        assert pg.gfie_fiber_count(pg.symmetric_group(n)) == 1
    assert pg.gfie_fiber_count(pg.cyclic_group(2)) == 1
    assert pg.gfie_fiber_count(pg.cyclic_group(3)) == 2
    with pytest.raises(pg.DomainError):
        pg.gfie_fiber_count(pg.group_from_generators(3, [(1, 0, 2)]))


def test_surjection_oracle_examples():
    assert pg.surjection_orbit_oracle(pg.cyclic_group(2), 2) == 1
    assert pg.surjection_orbit_oracle(pg.cyclic_group(3), 2) == 2
    assert pg.surjection_orbit_oracle(pg.symmetric_group(3), 2) == 1


# number of conjugacy classes of subgroups of S_n and of transitive subgroups,
# and the orders of the transitive groups: standard tables
SUBGROUP_CLASSES = {1: 1, 2: 2, 3: 4, 4: 11, 5: 19}
TRANSITIVE_ORDERS = {
    2: [2], 3: [3, 6], 4: [4, 4, 8, 12, 24], 5: [5, 10, 20, 60, 120],
    6: [6, 6, 12, 12, 18, 24, 24, 24, 36, 36, 48, 60, 72, 120, 360, 720],
}


@pytest.mark.parametrize("n", sorted(SUBGROUP_CLASSES))
def test_subgroup_class_counts(n):
    assert len(pg.subgroup_classes(n)) == SUBGROUP_CLASSES[n]


@pytest.mark.parametrize("n", sorted(TRANSITIVE_ORDERS))
def test_transitive_groups(n):
    Ts = pg.transitive_groups(n)
    assert sorted(G.order for G in Ts) == TRANSITIVE_ORDERS[n]
    assert all(pg.is_transitive(G) for G in Ts)


def test_group_text_roundtrip():
    G = pg.group_from_generators(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    H = pg.parse_group_text(pg.format_group_text(G))
    assert H.as_set() == G.as_set()
    H2 = pg.parse_group_text("3\n1 0 2\n1 2 0\n")
    assert H2.order == 6


def test_fiber_count_is_integral_for_transitive_n5():
    for G in pg.transitive_groups(5):
        r = pg.gfie_fiber_count(G)
        assert isinstance(r, Fraction) and r.denominator == 1 and r >= 1
