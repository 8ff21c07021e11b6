"""Representations as diagonal exponent data, and the age / index invariants.

An element g acting diagonally as diag(z^a_1, ..., z^a_d), z a primitive
N-th root of unity with N = |G|, is stored as the sorted tuple (a_1..a_d).
Roots of unity are never evaluated; everything is integer arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import permgroup as pg
from .permgroup import DomainError, Perm, PermGroup


@dataclass(frozen=True)
class EigenRep:
    group: PermGroup
    N: int
    dim: int
    exponents: dict = field(hash=False)  # Perm -> sorted tuple of ints in [0, N)
    label: str = ""

    def exps(self, g: Perm) -> tuple:
        try:
            return self.exponents[tuple(g)]
        except KeyError:
            raise DomainError(f"{g} is not an element of the group") from None

    def to_json(self) -> dict:
        return {
            "group": {"n": self.group.n, "generators": [list(g) for g in self.group.generators]},
            "N": self.N,
            "dim": self.dim,
            "exponents": [{"element": list(g), "exponents": list(self.exponents[g])}
                          for g in self.group.elements],
        }


def rep_from_json(obj: dict | str) -> EigenRep:
    if isinstance(obj, str):
        obj = json.loads(obj)
    G = pg.group_from_generators(obj["group"]["n"], obj["group"]["generators"])
    ex = {tuple(row["element"]): tuple(sorted(row["exponents"])) for row in obj["exponents"]}
    r = EigenRep(G, int(obj["N"]), int(obj["dim"]), ex)
    validate_rep(r)
    return r


def validate_rep(r: EigenRep) -> None:
    """Raise ValueError unless r satisfies the structural exponent rules."""
    G, N = r.group, r.N
    if set(r.exponents) != set(G.elements):
        raise ValueError("exponent map must cover exactly the group elements")
    for g, ex in r.exponents.items():
        if len(ex) != r.dim or any(not 0 <= a < N for a in ex):
            raise ValueError(f"bad exponents {ex} for {g}")
        m = pg.perm_order(g)
        if N % m or any(a % (N // m) for a in ex):
            raise ValueError(f"exponents of {g} are not multiples of N/ord(g)")
        inv_ex = tuple(sorted((N - a) % N for a in ex))
        if r.exponents[pg.inv(g)] != inv_ex:
            raise ValueError(f"inverse rule fails at {g}")
    if r.exponents[G.identity] != (0,) * r.dim:
        raise ValueError("identity must have zero exponents")
    for cls in pg.conjugacy_classes(G):
        if len({r.exponents[g] for g in cls}) != 1:
            raise ValueError("exponents are not a class function")


def permutation_rep(G: PermGroup) -> EigenRep:
    """Eigenvalue data of the natural n-dimensional permutation representation.

    A c-cycle contributes the c-th roots of unity, i.e. exponents (N/c) i.
    """
    N = G.order
    ex = {}
    for g in G.elements:
        e = []
        for c in pg.cycles(g):
            step = N // len(c)
            e.extend(step * i for i in range(len(c)))
        ex[g] = tuple(sorted(e))
    return EigenRep(G, N, G.n, ex, label="perm")


def trivial_rep(G: PermGroup, dim: int = 1) -> EigenRep:
    return EigenRep(G, G.order, dim, {g: (0,) * dim for g in G.elements}, label=f"triv{dim}")


def direct_sum(r1: EigenRep, r2: EigenRep) -> EigenRep:
    if r1.group != r2.group or r1.N != r2.N:
        raise DomainError("direct sum needs the same group and N")
    ex = {g: tuple(sorted(r1.exponents[g] + r2.exponents[g])) for g in r1.group.elements}
    return EigenRep(r1.group, r1.N, r1.dim + r2.dim, ex, label=f"{r1.label}+{r2.label}")


def double(r: EigenRep) -> EigenRep:
    return direct_sum(r, r)


def cyclic_weight_rep(n: int, weights: Sequence[int]) -> EigenRep:
    """C_n = <g> (regular n-cycle) acting by diag(z^w_1, ..., z^w_d)."""
    if n < 2:
        raise DomainError("need n >= 2")
    w = [int(x) % n for x in weights]
    G = pg.cyclic_group(n)
    g = G.generators[0]
    ex = {}
    x = G.identity
    for k in range(n):
        ex[x] = tuple(sorted(k * a % n for a in w))
        x = pg.mul(g, x)
    return EigenRep(G, n, len(w), ex, label=f"C{n}{tuple(w)}")


def cyclic_power(r: EigenRep, k: int) -> Perm:
    """g^k for the distinguished generator of a cyclic_weight_rep group."""
    return pg.power(r.group.generators[0], k)


def age(r: EigenRep, g: Perm) -> Fraction:
    return Fraction(sum(r.exps(g)), r.N)


def index(G: PermGroup, g: Perm) -> int:
    if tuple(g) not in G:
        raise DomainError(f"{g} is not in the group")
    return G.n - len(pg.cycles(g))


def units_mod(N: int) -> frozenset:
    return frozenset(a for a in range(N) if math.gcd(a, N) == 1) if N > 1 else frozenset({0})


def _check_unit_subgroup(H: Iterable[int], N: int) -> frozenset:
    H = frozenset(a % N for a in H) if N > 1 else frozenset({0})
    if N == 1:
        return H
    if not H or any(math.gcd(a, N) != 1 for a in H):
        raise DomainError(f"H must be a nonempty set of units mod {N}")
    for a in H:
        for b in H:
            if a * b % N not in H:
                raise DomainError(f"H is not closed under multiplication mod {N}")
    return H


def k_conjugacy_classes(G: PermGroup, H: Iterable[int] | None = None,
                        N: int | None = None) -> list[tuple[tuple[Perm, ...], ...]]:
    """Fuse conjugacy classes under the power maps g -> g^a, a in H.

    H defaults to all units mod N (the base field Q), N to |G|.
    """
    N = G.order if N is None else N
    H = units_mod(N) if H is None else _check_unit_subgroup(H, N)
    classes = pg.conjugacy_classes(G)
    where = {g: i for i, c in enumerate(classes) for g in c}
    parent = list(range(len(classes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, c in enumerate(classes):
        for a in H:
            j = where[pg.power(c[0], a)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list] = {}
    for i, c in enumerate(classes):
        groups.setdefault(find(i), []).append(c)
    return [tuple(v) for _, v in sorted(groups.items())]


def is_faithful(r: EigenRep) -> bool:
    # a finite-order diagonalizable element acts trivially iff all exponents vanish
    zero = (0,) * r.dim
    return all(ex != zero for g, ex in r.exponents.items() if g != r.group.identity)


def is_pseudo_reflection(r: EigenRep, g: Perm) -> bool:
    return sum(1 for a in r.exps(g) if a) == 1


def is_nontrivial_scalar(r: EigenRep, g: Perm) -> bool:
    ex = r.exps(g)
    return len(set(ex)) == 1 and ex[0] != 0


@dataclass
class SingularityInvariants:
    age_G: Fraction
    mld: Fraction
    upsilon: int
    delta: int
    gamma: int
    rho: int
    etale_codim1: bool
    canonical: bool
    manin_alpha: Fraction
    manin_log_exponent: int | str
    toric_alpha_bound: Fraction
    malle_alpha: Fraction
    malle_log_exponent: int
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = str(v) if isinstance(v, Fraction) else v
        return out


def singularity_invariants(r: EigenRep, H: Iterable[int] | None = None) -> SingularityInvariants:
    """Age, mld, youngest-class count and the exponent predictions derived from them.

    gamma counts age-one K-classes; identifying those with crepant divisors
    is the usual McKay dictionary and is flagged in diagnostics.
    """
    G = r.group
    if G.order == 1:
        raise DomainError("trivial group has no age")
    if not is_faithful(r):
        raise DomainError("representation is not faithful")
    e = G.identity
    diag = []
    kcls = k_conjugacy_classes(G, H, r.N)
    cls_ages = []
    for K in kcls:
        members = [g for c in K for g in c]
        if e in members:
            continue
        ages = {age(r, g) for g in members}
        if len(ages) > 1:
            diag.append(f"K-class with element {members[0]} has unequal ages "
                        f"{sorted(str(a) for a in ages)}; using the minimum")
        cls_ages.append(min(ages))
    age_G = min(cls_ages)
    mld = age_G
    upsilon = sum(1 for a in cls_ages if a == age_G)
    gamma = sum(1 for a in cls_ages if a == 1) if age_G <= 1 else 0
    if age_G <= 1:
        diag.append("gamma counts age-one K-classes (McKay correspondence assumed)")
    etale = not any(is_pseudo_reflection(r, g) or is_nontrivial_scalar(r, g)
                    for g in G.elements if g != e)
    canonical = mld >= 1
    rho = 1
    if canonical:
        manin_alpha, manin_log = Fraction(1), rho + gamma - 1
    else:
        manin_alpha, manin_log = 1 / age_G, "unknown"
        diag.append("non-canonical: Manin side uses the 1/age exponent, log power unknown")
    return SingularityInvariants(
        age_G=age_G, mld=mld, upsilon=upsilon, delta=upsilon, gamma=gamma, rho=rho,
        etale_codim1=etale, canonical=canonical, manin_alpha=manin_alpha,
        manin_log_exponent=manin_log, toric_alpha_bound=1 / mld,
        malle_alpha=1 / age_G, malle_log_exponent=upsilon - 1, diagnostics=diag)


@dataclass
class IndAgeRow:
    element: Perm
    ind: int
    age: Fraction

    @property
    def ok(self) -> bool:
        return self.ind == self.age


@dataclass
class IndAgeReport:
    n: int
    order: int
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)


def ind_eq_age_check(G: PermGroup) -> IndAgeReport:
    if not pg.is_transitive(G):
        raise DomainError("group is not transitive")
    r2 = double(permutation_rep(G))
    rows = [IndAgeRow(g, index(G, g), age(r2, g)) for g in G.elements]
    return IndAgeReport(G.n, G.order, rows)
