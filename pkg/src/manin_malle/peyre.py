"""Peyre constants of P^d over Q, with finite-place metric twists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import as_fraction, is_prime
from .heights import MetricTwist, _twist, count_points

# Bernoulli numbers B_2, B_4, ..., B_20
_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66),
              Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
              Fraction(-174611, 330)]


class CalibrationError(RuntimeError):
    pass


def zeta(s: float, N: int = 12) -> float:
    """Riemann zeta for real s > 1 by Euler-Maclaurin summation."""
    if s <= 1:
        raise ValueError("need s > 1")
    head = math.fsum(n ** -s for n in range(1, N))
    tail = [N ** (1 - s) / (s - 1), 0.5 * N ** -s]
    rising = s  # s (s+1) ... (s + 2k - 2)
    for k, b in enumerate(_BERNOULLI, start=1):
        tail.append(float(b) / math.factorial(2 * k) * rising * N ** (-s - 2 * k + 1))
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + math.fsum(tail)


def local_density(d: int, p: int, a_p=0) -> Fraction | float:
    """p^(-a_p) * sum_{i=0}^d p^(-i); exact when a_p is an integer."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    a = as_fraction(a_p)
    base = sum(Fraction(1, p ** i) for i in range(d + 1))
    if a.denominator == 1:
        return base / Fraction(p) ** int(a)
    return float(base) * p ** -float(a)


def twist_factor(twist) -> float:
    """prod p^(-a_p)."""
    tw = _twist(twist)
    return math.prod(p ** -float(a) for p, a in tw.entries)


def finite_part(d: int, twist=None) -> float:
    # (1 - 1/p) * sum p^-i telescopes to 1 - p^-(d+1); the product is 1/zeta(d+1)
    return twist_factor(twist) / zeta(d + 1)


def archimedean_density(d: int) -> Fraction:
    """Integral of max(1, |x_1|, ..., |x_d|)^(-(d+1)) over R^d, unnormalized.

    Region where all |x_i| <= 1 contributes 2^d.  Region where x_j is the
    largest and |x_j| > 1 contributes 2 * int_1^inf (2x)^(d-1) x^(-(d+1)) dx
    = 2^d; there are d such regions.  Total (d+1) 2^d.
    """
    if d < 0:
        raise ValueError("need d >= 0")
    return Fraction((d + 1) * 2 ** d)


def normalization_rule(d: int) -> Fraction:
    """Factor between the chart integral and the Tamagawa normalization: 1/(d+1)."""
    return Fraction(1, d + 1)


@dataclass
class PeyreConstant:
    d: int
    twist: MetricTwist
    residue_factor: float
    finite_part: float
    archimedean_part: float
    normalization: float
    value: float
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "twist": {str(p): str(a) for p, a in self.twist.entries},
            "residue_factor": self.residue_factor,
            "finite_part": self.finite_part,
            "archimedean_raw": self.archimedean_part,
            "normalization": self.normalization,
            "value": self.value,
            "provenance": self.provenance,
        }


def peyre_constant(d: int, twist=None, normalization: float | None = None) -> PeyreConstant:
    tw = _twist(twist)
    fin = finite_part(d, tw)
    raw = float(archimedean_density(d))
    norm = float(normalization_rule(d)) if normalization is None else float(normalization)
    value = 1.0 * fin * raw * norm
    prov = {"residue_factor": "exact", "finite_part": "computed", "archimedean_raw": "exact",
            "normalization": "exact" if normalization is None else "fitted"}
    return PeyreConstant(d, tw, 1.0, fin, raw, norm, value, prov)


@dataclass
class Calibration:
    d: int
    B: list
    ratios: list
    drift: float
    value: float
    rule: float


def calibrate_normalization(d: int, B_top=None, samples: int = 5, tol: float = 0.02, twist=None) -> Calibration:
    """Empirical N(B)/B divided by finite_part * raw integral over the top two decades.

    Raises CalibrationError if the ratio moves more than ``tol`` (max/min - 1).
    """
    B_top = float(1000 ** (d + 1)) if B_top is None else float(B_top)
    Bs = [B_top * 10 ** (-2 + 2 * i / (samples - 1)) for i in range(samples)]
    denom = finite_part(d, twist) * float(archimedean_density(d))
    ratios = [count_points(d, B, twist) / B / denom for B in Bs]
    drift = max(ratios) / min(ratios) - 1
    cal = Calibration(d, Bs, ratios, drift, ratios[-1], float(normalization_rule(d)))
    if drift >= tol:
        raise CalibrationError(f"normalization drifts by {drift:.4f} over {Bs[0]:.3g}..{Bs[-1]:.3g}: {ratios}")
    return cal
