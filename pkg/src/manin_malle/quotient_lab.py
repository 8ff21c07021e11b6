"""Quotient experiments: the S_2 fiber classifier and C_2 acting on A^3 by diag(-1,-1,1).

A primitive rational point of X = A^3/C_2 comes from a quadratic field
L = Q(sqrt m) and a point (a, b, c) in Q^3 with (a, b) != 0, lifted to
y = (sqrt(m) a, sqrt(m) b, c, 1) in P^3(L).  Writing a, b, c = A/D, B'/D,
C/D in lowest terms, the anticanonical height of the lift is

    H^4 = (max(|m| A^2, |m| B'^2, C^2, D^2) / gcd(C, D, m))^2.

Points are counted up to (a, b, c) -> (-a, -b, c), the action of Aut(L).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator

from .arith import (as_fraction, factorize, floor_root, is_squarefree, mobius_sieve,
                    squarefree_divisors, squarefree_kernel, fundamental_discriminant)
from .asymptotics import CountSeries, decade_points, fit_asymptotic, ratio_drift
from .gfields import odd_squarefree_count
from .heights import affine_count, naive_bound
from .reps import EigenRep, cyclic_weight_rep, direct_sum, singularity_invariants, trivial_rep


class CompletenessWarning(UserWarning):
    pass


# ---- S_2 on A^2 ----------------------------------------------------------------

@dataclass(frozen=True)
class FiberClass:
    kind: str  # "split" | "ramified-locus" | "primitive"
    disc: Fraction
    field_disc: int | None = None


def fiber_quadratic(e1, e2) -> FiberClass:
    """Classify the fiber algebra Q[t]/(t^2 - e1 t + e2) over the point (e1, e2) of A^2/S_2."""
    e1, e2 = as_fraction(e1), as_fraction(e2)
    disc = e1 * e1 - 4 * e2
    if disc == 0:
        return FiberClass("ramified-locus", disc)
    k = squarefree_kernel(disc.numerator * disc.denominator)
    if k == 1:
        return FiberClass("split", disc)
    return FiberClass("primitive", disc, fundamental_discriminant(k))


# ---- heights of lifts ----------------------------------------------------------

def lift_height4(m: int, a, b, c) -> Fraction:
    """Anticanonical height of (sqrt(m) a : sqrt(m) b : c : 1) in P^3(Q(sqrt m))."""
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    D = math.lcm(a.denominator, b.denominator, c.denominator)
    A, Bp, C = int(a * D), int(b * D), int(c * D)
    g = math.gcd(math.gcd(C, D), m)
    M = max(abs(m) * A * A, abs(m) * Bp * Bp, C * C, D * D)
    return Fraction(M, g) ** 2


@dataclass(frozen=True)
class PrimPoint:
    m: int
    a: Fraction
    b: Fraction
    c: Fraction
    height: Fraction  # H^4 of the lift

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("(a, b) = (0, 0) lies on the branch locus")
        if self.m in (0, 1) or not is_squarefree(self.m):
            raise ValueError(f"m = {self.m} does not define a quadratic field")

    def partner(self) -> tuple:
        return (self.m, -self.a, -self.b, self.c)


@dataclass
class Caps:
    """Search box: |m| <= max_m, |numerators of c| and denominators <= max_num."""

    max_m: int
    max_num: int

    def complete_bound(self) -> Fraction:
        # every point with H^4 <= B has |m| <= B and |C|, D <= B^(1/2), |A|, |B'| <= B^(1/4)
        return Fraction(min(self.max_m, self.max_num ** 2))

    @classmethod
    def for_bound(cls, B) -> "Caps":
        B = as_fraction(B)
        return cls(int(B), math.isqrt(int(B)) + 1)


def _root4_bound(B: Fraction, c: int) -> int:
    """Largest x >= 0 with c^2 x^4 <= B."""
    return floor_root(B / (c * c), 4)


def _mp_divisors(n):
    return squarefree_divisors(tuple(p for p, _ in factorize(n))) if n > 1 else [(1, 1)]


def enumerate_xprim_c2(B, caps: Caps | None = None) -> Iterator[PrimPoint]:
    """Orbit representatives of primitive points with H^4 <= B; first nonzero of (a, b) positive.

    Ordered by (|m|, m) then lexicographically on (A, B', C, D).  If B is
    beyond the caps' guaranteed range a CompletenessWarning is issued and
    only points inside the caps are produced.
    """
    B = as_fraction(B)
    caps = caps or Caps.for_bound(B)
    if B > caps.complete_bound():
        warnings.warn(f"B={B} exceeds guaranteed-complete range {caps.complete_bound()}", CompletenessWarning)
    if B < 1:
        return
    M_max = min(int(B), caps.max_m)
    for absm in range(1, M_max + 1):
        if not is_squarefree(absm):
            continue
        for m in (-absm, absm):
            if m == 1:
                continue
            yield from _points_for_m(m, B, caps)


def _points_for_m(m: int, B: Fraction, caps: Caps) -> Iterator[PrimPoint]:
    pts = []
    for g, _ in _mp_divisors(abs(m)):
        mp = m // g
        al = _root4_bound(B, mp)
        ga = _root4_bound(B, g)
        if al == 0 or ga == 0:
            continue
        for A in range(0, al + 1):
            for Bq in range(-al, al + 1):
                if A == 0 and Bq <= 0:
                    continue
                for Dq in range(1, ga + 1):
                    D = g * Dq
                    if D > caps.max_num:
                        break
                    for Cq in range(-ga, ga + 1):
                        C = g * Cq
                        if abs(C) > caps.max_num:
                            continue
                        if math.gcd(math.gcd(Cq, Dq), mp) != 1:
                            continue
                        if reduce(math.gcd, (A, Bq, C, D)) != 1:
                            continue
                        a, b, c = Fraction(A, D), Fraction(Bq, D), Fraction(C, D)
                        pts.append((A, Bq, C, D, PrimPoint(m, a, b, c, lift_height4(m, a, b, c))))
    pts.sort(key=lambda t: t[:4])
    for *_, p in pts:
        yield p


def xprim_predup_count(B) -> int:
    """Number of (L, (a, b, c)) pairs with H^4 <= B before identifying Aut(L)-orbits.

    Moebius sum over the parametrization m = g m' (g = gcd(C, D, m) > 0):
    |A|, |B'| <= alpha(m'), C = g C', D = g D' with |C'|, D' <= gamma(g),
    gcd(C', D', m') = 1 and gcd(A, B', g C', g D') = 1, (A, B') != 0.
    """
    B = as_fraction(B)
    if B < 1:
        return 0
    T = math.isqrt(math.floor(B))
    mu = mobius_sieve(T + 1)
    total = 0
    for g in range(1, T + 1):
        if not mu[g]:
            continue
        ga = _root4_bound(B, g)
        if ga == 0:
            break
        gdivs = _mp_divisors(g)
        for ap in range(1, T + 1):
            if not mu[ap] or math.gcd(g, ap) != 1:
                continue
            al = _root4_bound(B, ap)
            if al == 0:
                break
            signs = 1 if (g == 1 and ap == 1) else 2  # m' = -1 only when g = 1 and |m'| = 1
            mdivs = _mp_divisors(ap)
            F = 0
            gm = g * ap
            for k3 in range(1, min(al, ga) + 1):
                if not mu[k3] or math.gcd(k3, gm) != 1:
                    continue
                for k1, s1 in gdivs:
                    q = al // (k1 * k3)
                    a_term = (2 * q + 1) ** 2 - 1
                    if not a_term:
                        continue
                    for k2, s2 in mdivs:
                        r = ga // (k2 * k3)
                        F += int(mu[k3]) * s1 * s2 * a_term * (2 * r + 1) * r
            total += signs * F
    return total


def xprim_count(B) -> int:
    """Primitive points of X with H^4 <= B (orbits are free of size two)."""
    P = xprim_predup_count(B)
    if P % 2:
        raise AssertionError("pre-dedup count is odd; orbits are not free")
    return P // 2


@dataclass
class IdentityReport:
    B: list
    orbit_counts: list
    predup_counts: list
    complete_bound: float

    @property
    def ok(self) -> bool:
        return all(p == 2 * n for n, p in zip(self.orbit_counts, self.predup_counts))


def height_zeta_identity_check(B_list: Iterable, caps: Caps | None = None) -> IdentityReport:
    """Orbit counts from the canonical-representative stream versus half the pre-dedup Moebius count."""
    B_list = [as_fraction(b) for b in B_list]
    top = max(B_list) if B_list else Fraction(0)
    caps = caps or Caps.for_bound(max(top, 1))
    heights = sorted(p.height for p in enumerate_xprim_c2(top, caps)) if top >= 1 else []
    import bisect
    orbit = [bisect.bisect_right(heights, b) for b in B_list]
    pre = [xprim_predup_count(b) for b in B_list]
    return IdentityReport([float(b) for b in B_list], orbit, pre, float(caps.complete_bound()))


# ---- the Z^disc * Z_V prediction ------------------------------------------------

def lab_rep() -> EigenRep:
    return cyclic_weight_rep(2, (1, 1, 0))


def vdisc_multiplicity(n: int) -> int:
    """Quadratic fields whose odd V-discriminant (2 treated as an S-place) equals n."""
    if n % 2 == 0 or not is_squarefree(n):
        return 0
    return 3 if n == 1 else 4


def affine_points(B) -> int:
    """Points of A^3 subset P^3 with anticanonical height <= B."""
    return affine_count(3, naive_bound(3, B))


def convolution_prediction(B) -> Fraction:
    """(1/#Z(G)) * sum over quadratic L of N_V(B / D~_L), grouped by the naive bound of B / n."""
    B = as_fraction(B)
    if B < 1:
        return Fraction(0)
    total = 0
    tmax = floor_root(B, 4)
    for t in range(1, tmax + 1):
        hi = math.floor(B / t ** 4)
        lo = math.floor(B / (t + 1) ** 4)
        k = odd_squarefree_count(hi) - odd_squarefree_count(lo)
        if not k:
            continue
        ones = 1 if lo < 1 <= hi else 0
        fields = 4 * k - ones
        total += fields * affine_count(3, t)
    return Fraction(total, 2)


def compactification_strata(r: EigenRep) -> list[dict]:
    """Fixed strata of P(V + 1)/G: for each eigenvalue class of g, the age of lambda^-1 g.

    The singular locus of the projective quotient has a component for each
    eigenspace of each nonidentity g; the transversal age there is the age of
    g rescaled by the inverse eigenvalue, computed on V + trivial.
    """
    ext = direct_sum(r, trivial_rep(r.group, 1))
    N = ext.N
    out = []
    for g in r.group.elements:
        if g == r.group.identity:
            continue
        ex = ext.exponents[g]
        for lam in sorted(set(ex)):
            shifted = tuple(sorted((a - lam) % N for a in ex))
            dim_fixed = sum(1 for a in shifted if a == 0) - 1
            out.append({"element": list(g), "eigen_exponent": lam, "fixed_dim": dim_fixed,
                        "age": str(Fraction(sum(shifted), N))})
    return out


@dataclass
class HeuristicReport:
    B: list
    n_xprim: list
    n_pred: list
    fit_xprim: object
    fit_pred: object
    ratios: list
    drift: float
    predicted: dict
    strata: list
    label: str = "consistency, not ground truth"
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "B": self.B,
            "N_xprim": self.n_xprim,
            "N_pred": [float(x) for x in self.n_pred],
            "fit_xprim": self.fit_xprim.to_json(),
            "fit_pred": self.fit_pred.to_json(),
            "ratio": self.ratios,
            "ratio_drift_top_two_decades": self.drift,
            "predicted": self.predicted,
            "compactification_strata": self.strata,
            "checks": self.checks,
        }


DRIFT_TOL = 0.25


def heuristic_consistency_report(B_list: Iterable | None = None) -> HeuristicReport:
    B_list = decade_points(1e6, 10, 2) if B_list is None else [float(b) for b in B_list]
    n_x = [xprim_count(b) for b in B_list]
    n_p = [convolution_prediction(b) for b in B_list]
    fx = fit_asymptotic(CountSeries(B_list, n_x, "N_xprim"))
    fp = fit_asymptotic(CountSeries(B_list, [float(x) for x in n_p], "N_pred"))
    ratios, drift = ratio_drift(n_x, n_p, B_list)
    inv = singularity_invariants(lab_rep())
    strata = compactification_strata(lab_rep())
    crepant_strata = sum(1 for s in strata if s["age"] == "1")
    predicted = {
        "affine_quotient": {"alpha": str(inv.manin_alpha), "log_exponent": inv.manin_log_exponent},
        "projective_closure": {"alpha": "1", "log_exponent": inv.rho + crepant_strata - 1,
                               "crepant_strata": crepant_strata},
    }
    checks = {
        "beta_is_1": fx.beta == 1,
        "alpha_in_0.9_1.1": 0.9 <= fx.alpha <= 1.1,
        "ratio_drift_below_0.25": drift < DRIFT_TOL,
    }
    return HeuristicReport(B_list, n_x, n_p, fx, fp, ratios, drift, predicted, strata, checks=checks)
