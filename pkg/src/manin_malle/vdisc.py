"""V-discriminants of G-fields from tame local exponents.

At a tamely ramified prime with inertia generated by g, the exponent a_p
of the twisted height is the age of g on V.  The tuning-module oracle
recomputes the same number by explicit bookkeeping on the valuation
lattice of a totally ramified C_n extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import permgroup as pg
from .gfields import STANDARD_GROUPS, GFieldRecord, MixedGroupsError, inertia_element
from .permgroup import DomainError
from .reps import EigenRep, age, double, k_conjugacy_classes, permutation_rep


class WildRamificationError(ValueError):
    pass


@dataclass(frozen=True)
class LocalExponent:
    p: int
    a_p: Fraction
    source: str  # "tame-age" | "oracle" | "unramified"
    diagnostic: str = ""


@lru_cache(maxsize=64)
def _age_table(rep: EigenRep) -> dict:
    out = {}
    for K in k_conjugacy_classes(rep.group, None, rep.N):
        members = [x for c in K for x in c]
        ages = sorted({age(rep, x) for x in members})
        out.update((x, ages) for x in members)
    return out


def k_class_ages(rep: EigenRep, g) -> list[Fraction]:
    """Sorted distinct ages over the rational K-class of g."""
    try:
        return _age_table(rep)[tuple(g)]
    except KeyError:
        raise DomainError(f"{g} is not in the group") from None


def tame_local_exponent(rep: EigenRep, inertia_class, with_diagnostic: bool = False):
    """age of an inertia generator; minimum over the fused K-class if ages differ."""
    g = tuple(inertia_class)
    if g == rep.group.identity:
        raise DomainError("identity inertia class")
    ages = k_class_ages(rep, g)
    diag = ""
    if len(ages) > 1:
        diag = f"K-class ages differ {[str(a) for a in ages]}; minimum used"
    return (ages[0], diag) if with_diagnostic else ages[0]


def tuning_module_oracle(n: int, weights: Sequence[int], generator_exponent: int = 1) -> Fraction:
    """Length quotient for a tame totally ramified C_n extension, by lattice bookkeeping.

    O_L splits into lines pi^j O_K, j = 0..n-1, and the generator scales
    pi^j by zeta^(e j).  An equivariant map from the weight-w line lands in
    the first line whose character matches, i.e. the smallest j >= 0 with
    e j = w mod n; its colength over O_K-lattices is j.  Total / n.

    This equals age(g^(1/e)): the inertia element acting on the uniformizer
    by zeta itself, which is how ages are normalized.
    """
    if not 2 <= n <= 12:
        raise DomainError("oracle supports 2 <= n <= 12")
    e = generator_exponent % n
    if math.gcd(e, n) != 1:
        raise DomainError("generator exponent must be a unit mod n")
    total = 0
    for w in weights:
        w %= n
        for j in range(n):
            if e * j % n == w:
                total += j
                break
    return Fraction(total, n)


@dataclass
class VDiscriminant:
    record: GFieldRecord
    rep_label: str
    exponents: list
    D: Fraction | float
    D_ext: Fraction | float
    s_factors: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)


def _rep_element(record: GFieldRecord, rep: EigenRep, cls: str):
    g = inertia_element(record.group_label, cls)
    if g is None or g not in rep.group:
        raise DomainError(f"inertia {cls!r} of {record.group_label} is not an element of the representation's group")
    return g


def _power(p: int, a: Fraction):
    return Fraction(p) ** int(a) if a.denominator == 1 else p ** float(a)


def v_discriminant(record: GFieldRecord, rep: EigenRep, s_factors: dict | None = None,
                   s_places: Iterable[int] = ()) -> VDiscriminant:
    """D = prod over ramified p outside S of p^(a_p); D_ext = D * prod of S-factors.

    S-factors default to 1.  Wild primes outside S raise WildRamificationError.
    """
    s_places = set(s_places)
    s_factors = dict(s_factors or {})
    exps = []
    diags = []
    D = Fraction(1)
    for p, cls, tame in record.ram_primes:
        if p in s_places:
            continue
        if not tame:
            raise WildRamificationError(f"wild ramification at p={p} in {record.defining_data or record.disc}")
        g = _rep_element(record, rep, cls)
        a, diag = tame_local_exponent(rep, g, with_diagnostic=True)
        if diag:
            diags.append(f"p={p}: {diag}")
        exps.append(LocalExponent(p, a, "tame-age", diag))
        D = D * _power(p, a)
    ext = 1.0
    exact_ext = Fraction(1)
    for v in s_places | set(s_factors):
        f = s_factors.get(v, 1)
        ext *= float(f)
        if isinstance(f, (int, Fraction)):
            exact_ext *= Fraction(f)
        else:
            exact_ext = None
    if isinstance(D, Fraction) and exact_ext is not None:
        D_ext = D * exact_ext
    else:
        D_ext = float(D) * ext
    return VDiscriminant(record, rep.label, exps, D, D_ext, s_factors, diags)


def quadratic_rep() -> EigenRep:
    """Doubled permutation representation of S_2 on the C2 model."""
    return double(permutation_rep(STANDARD_GROUPS["C2"].group))


@dataclass
class DiscMatchReport:
    checked: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures


def check_vdisc_matches_disc(records: Iterable[GFieldRecord], rep: EigenRep | None = None) -> DiscMatchReport:
    """V-discriminant of the doubled permutation rep equals d_L, for odd quadratic discriminants."""
    rep = rep or quadratic_rep()
    rpt = DiscMatchReport()
    for r in records:
        if r.group_label != "C2":
            raise MixedGroupsError("expects quadratic records")
        if r.disc % 2 == 0:
            rpt.skipped.append((r.disc, "even discriminant: wild at 2"))
            continue
        rpt.checked += 1
        vd = v_discriminant(r, rep)
        if vd.D == r.d_L:
            rpt.passed += 1
        else:
            rpt.failures.append((r.disc, r.d_L, vd.D))
    return rpt


def disc_zeta_partial(records: Sequence[GFieldRecord], rep: EigenRep, s: float, cutoff: float,
                      s_factors: dict | None = None, s_places: Iterable[int] = ()) -> float:
    """(1/#Z(G)) * sum of D_ext^(-s) over records with D_ext <= cutoff."""
    if s <= 0:
        raise ValueError("need s > 0")
    labels = {r.group_label for r in records}
    if len(labels) > 1:
        raise MixedGroupsError(f"records mix groups {sorted(labels)}")
    z = pg.center(rep.group).order
    terms = []
    for r in records:
        De = float(v_discriminant(r, rep, s_factors, s_places).D_ext)
        if De <= cutoff:
            terms.append(De ** -s)
    return math.fsum(terms) / z
