"""Anticanonical heights on P^d over Q, finite-place metric twists, and point counts.

Height of a primitive integer point x is max|x_i|^(d+1), multiplied by
prod p^(a_p) when the p-adic metric is rescaled by p^(-a_p).  Counting is
exact: an integer bound t on max|x_i| is derived with rational arithmetic
and the number of primitive points is obtained from a Moebius sum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .arith import as_fraction, floor_root, is_prime, is_squarefree, mobius_sieve

MAX_TWIST_DENOMINATOR = 12
# largest naive bound T allowed for explicit enumeration, by dimension
ENUM_CAPS = {1: 10**7, 2: 10**3, 3: 200, 4: 60}
COUNT_CAP = 10**8


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple

    def __post_init__(self):
        c = self.coords
        if not any(c):
            raise ValueError("all-zero coordinates")
        if reduce(math.gcd, c) != 1 or next(x for x in c if x) < 0:
            raise ValueError(f"{c} is not in canonical form")

    @property
    def d(self) -> int:
        return len(self.coords) - 1

    def __str__(self) -> str:
        return ":".join(map(str, self.coords))


def proj_point(coords: Sequence) -> ProjPoint:
    """Canonical representative of a rational point: primitive, first nonzero entry positive."""
    fr = [as_fraction(x) for x in coords]
    if not any(fr):
        raise ValueError("all-zero coordinates")
    den = math.lcm(*(f.denominator for f in fr))
    ints = [int(f * den) for f in fr]
    g = reduce(math.gcd, ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return ProjPoint(tuple(ints))


@dataclass(frozen=True)
class MetricTwist:
    """Finite map p -> a_p; the p-adic metric is p^(-a_p) times the model metric."""

    entries: tuple = ()  # sorted (p, Fraction) pairs, zero entries dropped
    max_denominator: int = field(default=MAX_TWIST_DENOMINATOR, compare=False)

    def __post_init__(self):
        for p, a in self.entries:
            if not is_prime(p):
                raise ValueError(f"twist at non-prime {p}")
            if a.denominator > self.max_denominator:
                raise ValueError(f"twist exponent {a} has denominator above {self.max_denominator}")

    @classmethod
    def of(cls, entries: Mapping | Iterable | None = None, max_denominator: int = MAX_TWIST_DENOMINATOR):
        if entries is None:
            return cls((), max_denominator)
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[int, Fraction] = {}
        for p, a in items:
            acc[int(p)] = acc.get(int(p), Fraction(0)) + as_fraction(a)
        return cls(tuple(sorted((p, a) for p, a in acc.items() if a != 0)), max_denominator)

    @classmethod
    def parse(cls, text: str | None):
        """'2=1,3=1/2' -> {2: 1, 3: 1/2}."""
        if not text:
            return cls.of()
        pairs = []
        for tok in text.split(","):
            tok = tok.strip()
            if not tok:
                continue
            p, a = tok.split("=")
            pairs.append((int(p), Fraction(a.strip())))
        return cls.of(pairs)

    def as_dict(self) -> dict:
        return dict(self.entries)

    @property
    def integral(self) -> bool:
        return all(a.denominator == 1 for _, a in self.entries)

    @property
    def denominator(self) -> int:
        return math.lcm(*(a.denominator for _, a in self.entries)) if self.entries else 1

    def exact_power(self) -> tuple[int, Fraction]:
        """(r, Q) with factor^r = Q exactly, Q = prod p^(r a_p) rational."""
        r = self.denominator
        q = Fraction(1)
        for p, a in self.entries:
            q *= Fraction(p) ** int(a * r)
        return r, q

    def factor(self):
        """prod p^(a_p): a Fraction when integral, else a float."""
        if self.integral:
            return self.exact_power()[1]
        return math.prod(p ** float(a) for p, a in self.entries)

    def __str__(self) -> str:
        return ",".join(f"{p}={a}" for p, a in self.entries)


NO_TWIST = MetricTwist()


def _twist(tw) -> MetricTwist:
    if tw is None:
        return NO_TWIST
    if isinstance(tw, MetricTwist):
        return tw
    if isinstance(tw, str):
        return MetricTwist.parse(tw)
    return MetricTwist.of(tw)


def anticanonical_height(pt: ProjPoint | Sequence, twist=None):
    if not isinstance(pt, ProjPoint):
        pt = proj_point(pt)
    tw = _twist(twist)
    naive = max(abs(x) for x in pt.coords) ** (pt.d + 1)
    f = tw.factor()
    return naive * f if isinstance(f, Fraction) else naive * f


def naive_bound(d: int, B, twist=None) -> int:
    """Largest integer t >= 0 with t^(d+1) * prod p^(a_p) <= B, decided exactly."""
    tw = _twist(twist)
    B = as_fraction(B)
    if B <= 0:
        return 0
    r, q = tw.exact_power()
    # t^((d+1) r) * q <= B^r
    return floor_root(B ** r / q, (d + 1) * r)


def enumerate_points(d: int, B, twist=None) -> Iterator[ProjPoint]:
    """Every point of P^d(Q) of height <= B once, in lexicographic coordinate order."""
    if not 1 <= d <= 4:
        raise SizeLimitError("enumeration supports 1 <= d <= 4")
    t = naive_bound(d, B, twist)
    if t > ENUM_CAPS[d]:
        raise SizeLimitError(f"naive bound {t} exceeds cap {ENUM_CAPS[d]} for d={d}")
    rng = range(-t, t + 1)
    for c in itertools.product(rng, repeat=d + 1):
        nz = next((x for x in c if x), 0)
        if nz <= 0:
            continue
        if reduce(math.gcd, c) == 1:
            yield ProjPoint(c)


def _mertens_blocks(t: int, mu_cum: np.ndarray) -> Iterator[tuple[int, int]]:
    """(q, M(k2) - M(k1 - 1)) over maximal blocks k1..k2 with t // k = q."""
    k = 1
    while k <= t:
        q = t // k
        k2 = t // q
        yield q, int(mu_cum[k2] - mu_cum[k - 1])
        k = k2 + 1


_MU_CACHE: dict = {"n": 0, "cum": np.zeros(1, dtype=np.int64)}


def _mertens(n: int) -> np.ndarray:
    if _MU_CACHE["n"] < n:
        size = max(n, 2 * _MU_CACHE["n"], 1024)
        _MU_CACHE["cum"] = np.cumsum(mobius_sieve(size), dtype=np.int64)
        _MU_CACHE["n"] = size
    return _MU_CACHE["cum"]


def primitive_count(d: int, t: int) -> int:
    """Number of points of P^d(Q) whose primitive coordinates have max |x_i| <= t."""
    if t <= 0:
        return 0
    if t > COUNT_CAP:
        raise SizeLimitError(f"bound {t} exceeds {COUNT_CAP}")
    cum = _mertens(t)
    s = sum(m * ((2 * q + 1) ** (d + 1) - 1) for q, m in _mertens_blocks(t, cum))
    return s // 2


def affine_count(d: int, t: int) -> int:
    """Points of A^d inside P^d (last coordinate nonzero) with primitive max <= t."""
    if t <= 0:
        return 0
    cum = _mertens(t)
    return sum(m * q * (2 * q + 1) ** d for q, m in _mertens_blocks(t, cum))


def count_points(d: int, B, twist=None) -> int:
    return primitive_count(d, naive_bound(d, B, twist))


def count_series(d: int, B_list: Iterable, twist=None):
    from .asymptotics import CountSeries

    Bs = [float(as_fraction(b)) for b in B_list]
    Ns = [count_points(d, b, twist) for b in B_list]
    return CountSeries(Bs, Ns, label=f"P{d}" + (f"[{_twist(twist)}]" if _twist(twist).entries else ""),
                       provenance="exact")


def points_with_max(d: int, T: int) -> np.ndarray:
    """c[M] = number of points of P^d(Q) with primitive max exactly M, 0 <= M <= T."""
    if T > 10**7:
        raise SizeLimitError(f"bound {T} too large")
    small = T * (2 * T + 1) ** (d + 1) < 2**62
    n = np.arange(T + 1, dtype=np.int64 if small else object)
    S = (2 * n + 1) ** (d + 1) - (2 * n - 1) ** (d + 1)
    S[0] = 0
    out = np.zeros(T + 1, dtype=S.dtype)
    mu = mobius_sieve(T)
    for k in range(1, T + 1):
        if mu[k]:
            out[k::k] += int(mu[k]) * S[1:T // k + 1]
    return out // 2


def height_zeta_partial(d: int, s: float, B, twist=None) -> float:
    """Sum of H(x)^(-s) over points with H(x) <= B, compensated summation."""
    if s <= 0:
        raise ValueError("need s > 0")
    tw = _twist(twist)
    T = naive_bound(d, B, tw)
    if T == 0:
        return 0.0
    cnt = points_with_max(d, T)
    logf = sum(float(a) * math.log(p) for p, a in tw.entries)
    M = np.arange(1, T + 1, dtype=np.float64)
    terms = cnt[1:].astype(np.float64) * np.exp(-s * ((d + 1) * np.log(M) + logf))
    return math.fsum(terms.tolist())


# ---- quadratic points -----------------------------------------------------

@dataclass(frozen=True)
class QuadPoint:
    """Point of P^d(Q(sqrt m)); coordinate i is u_i + v_i sqrt(m)."""

    m: int
    coords: tuple  # tuple of (Fraction, Fraction)

    def __post_init__(self):
        if self.m in (0, 1) or not is_squarefree(self.m):
            raise ValueError(f"m = {self.m} must be squarefree and not 0, 1")
        if all(u == 0 and v == 0 for u, v in self.coords):
            raise ValueError("all-zero coordinates")


def quad_point(m: int, coords: Sequence) -> QuadPoint:
    return QuadPoint(int(m), tuple((as_fraction(u), as_fraction(v)) for u, v in coords))


def _omega_coords(m: int, u: int, v: int) -> tuple[int, int]:
    # integral basis {1, w}: w = (1 + sqrt m)/2 if m = 1 mod 4, else sqrt m
    if m % 4 == 1:
        return u - v, 2 * v
    return u, v


def _times_omega(m: int, a: int, b: int) -> tuple[int, int]:
    if m % 4 == 1:
        return b * (m - 1) // 4, a + b
    return b * m, a


def content_norm(m: int, ints: Sequence[tuple[int, int]]) -> int:
    """Absolute norm of the ideal generated by integral u_i + v_i sqrt m."""
    rows = []
    for u, v in ints:
        a, b = _omega_coords(m, u, v)
        rows.append((a, b))
        rows.append(_times_omega(m, a, b))
    g = 0
    for (a1, b1), (a2, b2) in itertools.combinations(rows, 2):
        g = math.gcd(g, a1 * b2 - a2 * b1)
    return g


def quad_height(pt: QuadPoint, d: int | None = None) -> float:
    """Absolute multiplicative naive height over Q(sqrt m); the anticanonical one is this^(d+1)."""
    m = pt.m
    den = math.lcm(*(f.denominator for uv in pt.coords for f in uv))
    ints = [(int(u * den), int(v * den)) for u, v in pt.coords]
    N = content_norm(m, ints)
    r = math.sqrt(abs(m))
    if m > 0:
        e1 = max(abs(u + v * r) for u, v in ints)
        e2 = max(abs(u - v * r) for u, v in ints)
    else:
        e1 = e2 = max(math.hypot(u, v * r) for u, v in ints)
    return math.sqrt(e1 * e2 / N)
