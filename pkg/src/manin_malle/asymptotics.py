"""Counting series, Dirichlet-series poles, and (alpha, beta, C) fits.

Convention: a pole of order beta at s = alpha of sum a_n n^-s corresponds to
N(B) ~ C B^alpha (log B)^(beta - 1).  Fits report the log power directly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

POLE_TOL = 1e-12
DEFAULT_BETA_GRID = (0, 1, 2, 3)


class FitError(ValueError):
    pass


@dataclass
class CountSeries:
    B: list
    N: list
    label: str = ""
    provenance: str = "exact"

    def __post_init__(self):
        self.B = [float(b) for b in self.B]
        self.N = list(self.N)
        if len(self.B) != len(self.N):
            raise ValueError("B and N differ in length")
        if any(b < 1 for b in self.B):
            raise ValueError("sample points must satisfy B >= 1")
        if any(b2 <= b1 for b1, b2 in zip(self.B, self.B[1:])):
            raise ValueError("B must be strictly increasing")
        if any(n2 < n1 for n1, n2 in zip(self.N, self.N[1:])):
            raise ValueError("N must be nondecreasing")

    def __len__(self) -> int:
        return len(self.B)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["B", "N"])
        for b, n in zip(self.B, self.N):
            w.writerow([fmt_num(b), fmt_num(n)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str = "") -> "CountSeries":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [h.strip() for h in rows[0]] != ["B", "N"]:
            raise ValueError("series CSV must start with header B,N")
        Bs, Ns = [], []
        for row in rows[1:]:
            if not row:
                continue
            Bs.append(float(row[0]))
            n = float(row[1])
            Ns.append(int(n) if n.is_integer() and "." not in row[1] and "e" not in row[1].lower() else n)
        return cls(Bs, Ns, label=label)


def fmt_num(x) -> str:
    """Integers verbatim, floats with 15 significant digits."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return format(float(x), ".15g")


def decade_points(B_max: float, B_min: float = 10.0, per_decade: int = 2) -> list[float]:
    """Log-spaced samples from B_min to B_max, per_decade points per decade, both ends included."""
    k0 = round(math.log10(B_min) * per_decade)
    k1 = math.floor(math.log10(B_max) * per_decade + 1e-9)
    pts = [10 ** (k / per_decade) for k in range(k0, k1 + 1)]
    pts = [float(round(p)) if abs(p - round(p)) < 1e-9 * p else p for p in pts]
    if pts and pts[-1] < B_max * (1 - 1e-12):
        pts.append(float(B_max))
    return pts


@dataclass(frozen=True)
class PoleData:
    alpha: float
    beta: int
    C: float | None = None

    def __post_init__(self):
        if self.beta < 1:
            raise ValueError("pole order must be >= 1")
        if self.C is not None and self.C < 0:
            raise ValueError("leading constant must be >= 0")

    def counting_exponents(self) -> tuple:
        """(alpha, log power) of the associated counting function."""
        return self.alpha, self.beta - 1


def tauberian_constant(alpha: float, beta: int, limit_value: float) -> float:
    """C with N(B) ~ C B^alpha (log B)^(beta-1), from lim f(s) (s - alpha)^beta."""
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    if beta < 1:
        raise ValueError("need beta >= 1")
    return limit_value / (math.gamma(beta) * alpha)


def _same(a, b) -> bool:
    return abs(float(a) - float(b)) <= POLE_TOL * max(1.0, abs(float(a)))


def pole_product(z1: PoleData, z2: PoleData, value1_at=None, value2_at=None) -> PoleData:
    """Right-most pole of a product of two Dirichlet series.

    value1_at / value2_at: values of the holomorphic factor at the other
    series' pole, used to carry the leading constant when locations differ.
    """
    if _same(z1.alpha, z2.alpha):
        C = z1.C * z2.C if z1.C is not None and z2.C is not None else None
        a = z1.alpha if isinstance(z1.alpha, Fraction) else z2.alpha
        return PoleData(a, z1.beta + z2.beta, C)
    hi, other, val = (z1, z2, value2_at) if z1.alpha > z2.alpha else (z2, z1, value1_at)
    C = hi.C * val if hi.C is not None and val is not None else None
    return PoleData(hi.alpha, hi.beta, C)


@dataclass
class FitResult:
    alpha: float
    beta: int
    C: float
    residuals: dict
    alphas: dict
    drift: float
    used: int
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha, "beta": self.beta, "C": self.C,
            "residuals": {str(k): v for k, v in self.residuals.items()},
            "alphas": {str(k): v for k, v in self.alphas.items()},
            "drift_top_two_decades": self.drift, "samples_used": self.used,
            "diagnostics": self.diagnostics,
            "provenance": "fitted",
        }


def fit_asymptotic(series: CountSeries, beta_grid: Iterable[int] = DEFAULT_BETA_GRID,
                   top_fraction: float = 0.5) -> FitResult:
    """Least-squares fit of log N - beta log log B = alpha log B + log C on the top samples.

    Leading samples with B <= 1 or N = 0 are dropped (noted in diagnostics).
    beta is chosen from the grid by smallest RMS residual.  ``drift`` is
    max/min - 1 of N / (C B^alpha (log B)^beta) over samples with
    B >= B_max / 100.
    """
    B = np.asarray(series.B, dtype=float)
    N = np.asarray(series.N, dtype=float)
    keep = (B > 1) & (N > 0)  # N is nondecreasing, so this drops a leading block only
    dropped = int(len(B) - keep.sum())
    B, N = B[keep], N[keep]
    if len(B) < 6:
        raise FitError("need at least 6 samples")
    if B[-1] / B[0] < 1e3:
        raise FitError("samples must span at least three decades")
    k = max(3, int(math.ceil(len(B) * top_fraction)))
    idx = np.arange(len(B) - k, len(B))
    x = np.log(B[idx])
    A = np.vstack([x, np.ones_like(x)]).T
    res, alphas, consts = {}, {}, {}
    for beta in sorted(set(int(b) for b in beta_grid)):
        y = np.log(N[idx]) - beta * np.log(np.log(B[idx]))
        sol, *_ = np.linalg.lstsq(A, y, rcond=None)
        r = float(np.sqrt(np.mean((A @ sol - y) ** 2)))
        res[beta], alphas[beta], consts[beta] = r, float(sol[0]), float(math.exp(sol[1]))
    best = min(res, key=lambda b: (res[b], b))
    alpha, C = alphas[best], consts[best]
    top = B >= B[-1] / 100 * (1 - 1e-12)
    model = C * B[top] ** alpha * np.log(B[top]) ** best
    ratio = N[top] / model
    drift = float(ratio.max() / ratio.min() - 1)
    diags = [f"dropped {dropped} leading samples with B <= 1 or N = 0"] if dropped else []
    ordered = sorted(res.values())
    if len(ordered) > 1 and ordered[1] < 1.5 * ordered[0]:
        diags.append("beta selection is weak: runner-up residual within 50% of the best")
    return FitResult(alpha, best, C, res, alphas, drift, int(k), diags)


def ratio_drift(num: Sequence[float], den: Sequence[float], B: Sequence[float], decades: float = 2.0) -> tuple:
    """Ratio series num/den and its max/min - 1 over B >= B_max / 10^decades."""
    r = [float(a) / float(b) for a, b in zip(num, den)]
    lo = max(B) / 10 ** decades * (1 - 1e-12)
    top = [x for x, b in zip(r, B) if b >= lo]
    return r, max(top) / min(top) - 1


def prediction_consistency(inv) -> dict:
    """Combine the predicted pole of the discriminant series with the simple pole of Z_V at 1.

    Compares the implied point-count exponents with the singularity-side
    prediction carried by ``inv`` (a SingularityInvariants).
    """
    disc = PoleData(inv.malle_alpha, inv.malle_log_exponent + 1)
    zv = PoleData(Fraction(1), 1)
    prod = pole_product(disc, zv)
    implied = (prod.alpha, prod.beta - 1)
    age = inv.age_G
    if age > 1:
        regime = "age>1"
    elif age == 1:
        regime = "age=1"
    else:
        regime = "age<1"
    manin = (inv.manin_alpha, inv.manin_log_exponent)
    agree = implied[0] == manin[0] and implied[1] == manin[1]
    tension = regime == "age<1"
    out = {
        "label": "consistency, not ground truth",
        "regime": regime,
        "disc_pole": {"alpha": str(disc.alpha), "order": disc.beta},
        "zv_pole": {"alpha": "1", "order": 1},
        "product_pole": {"alpha": str(prod.alpha), "order": prod.beta},
        "implied_counting": {"alpha": str(implied[0]), "log_exponent": implied[1]},
        "manin_prediction": {"alpha": str(manin[0]), "log_exponent": manin[1]},
        "agree": bool(agree),
        "tension": tension,
    }
    if tension:
        out["candidates"] = {
            "heuristic": {"alpha": str(implied[0]), "log_exponent": implied[1]},
            "toric_bound": {"alpha": str(inv.toric_alpha_bound), "log_exponent": "unknown"},
        }
        out["note"] = "right-most pole of the product sits at 1/age(G) > 1; true point-count exponents left open"
    return out
