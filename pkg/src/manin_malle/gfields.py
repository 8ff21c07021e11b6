"""Galois G-fields over Q at desk scale: quadratic, cyclic cubic, Klein four.

Records carry the signed discriminant, d_L = |disc| and, for each ramified
prime, the inertia class label in the group model of STANDARD_GROUPS plus
a tameness flag.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import permgroup as pg
from .arith import factorize, is_prime, iter_squarefree_segments, mobius_sieve, squarefree_kernel

QUAD_MAX = 10**9
CUBIC_MAX = 10**10
V4_MAX = 10**8


class SizeLimitError(ValueError):
    pass


class MixedGroupsError(ValueError):
    pass


@dataclass(frozen=True)
class GroupModel:
    label: str
    group: pg.PermGroup
    classes: dict = field(hash=False, compare=False)  # inertia label -> representative Perm

    @property
    def degree(self) -> int:
        return self.group.n


def _model(label: str, n: int, gens, classes: dict) -> GroupModel:
    G = pg.group_from_generators(n, gens)
    for rep in classes.values():
        if rep is not None and rep not in G:
            raise AssertionError(f"{label}: class representative {rep} not in group")
    return GroupModel(label, G, classes)


STANDARD_GROUPS = {
    "C2": _model("C2", 2, [(1, 0)], {"2": (1, 0)}),
    "C3": _model("C3", 3, [(1, 2, 0)], {"3": (1, 2, 0)}),
    # regular Klein four; "2x" fixes the x-th quadratic subfield, "V4" = full group as inertia
    "V4": _model("V4", 4, [(1, 0, 3, 2), (2, 3, 0, 1)],
                 {"2a": (1, 0, 3, 2), "2b": (2, 3, 0, 1), "2c": (3, 2, 1, 0), "V4": None}),
    "S3": _model("S3", 3, [(1, 0, 2), (1, 2, 0)], {"2": (1, 0, 2), "3": (1, 2, 0)}),
    "C4": _model("C4", 4, [(1, 2, 3, 0)], {"2^2": (2, 3, 0, 1), "4": (1, 2, 3, 0)}),
    "D4": _model("D4", 4, [(1, 2, 3, 0), (0, 3, 2, 1)],
                 {"2^2c": (2, 3, 0, 1), "2^2": (1, 0, 3, 2), "2": (0, 3, 2, 1), "4": (1, 2, 3, 0)}),
    "A4": _model("A4", 4, [(1, 2, 0, 3), (1, 0, 3, 2)], {"2^2": (1, 0, 3, 2), "3": (1, 2, 0, 3)}),
    "S4": _model("S4", 4, [(1, 0, 2, 3), (1, 2, 3, 0)],
                 {"2": (1, 0, 2, 3), "2^2": (1, 0, 3, 2), "3": (1, 2, 0, 3), "4": (1, 2, 3, 0)}),
}


def inertia_element(group_label: str, inertia_class: str):
    """Representative element of an inertia label, or None for non-cyclic (wild) inertia."""
    try:
        return STANDARD_GROUPS[group_label].classes[inertia_class]
    except KeyError:
        raise ValueError(f"unknown inertia class {inertia_class!r} for group {group_label!r}") from None


@dataclass(frozen=True)
class GFieldRecord:
    group_label: str
    degree: int
    disc: int
    d_L: int
    ram_primes: tuple = ()  # (p, inertia_class, tame)
    defining_data: str = ""

    def __post_init__(self):
        problems = record_problems(self)
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def odd(self) -> bool:
        return self.disc % 2 != 0


def record_problems(r: GFieldRecord) -> list[str]:
    out = []
    if r.d_L < 1 or r.d_L != abs(r.disc):
        out.append(f"d_L={r.d_L} must equal |disc|={abs(r.disc)} >= 1")
    model = STANDARD_GROUPS.get(r.group_label)
    for p, cls, tame in r.ram_primes:
        if not is_prime(p):
            out.append(f"{p} is not prime")
            continue
        if r.disc % p:
            out.append(f"ramified prime {p} does not divide disc {r.disc}")
        if model is None:
            continue
        if cls not in model.classes:
            out.append(f"unknown inertia class {cls!r} for {r.group_label}")
            continue
        g = model.classes[cls]
        if g is not None and g == model.group.identity:
            out.append(f"identity inertia at ramified prime {p}")
        expect_tame = g is not None and pg.perm_order(g) % p != 0
        if bool(tame) != expect_tame:
            out.append(f"tame flag at {p} inconsistent with inertia {cls}")
    return out


# ---- quadratic ---------------------------------------------------------------

def _check(B, cap, what):
    if B > cap:
        raise SizeLimitError(f"{what} bound {B} exceeds {cap}")


def _quad_record(D: int) -> GFieldRecord:
    ram = tuple((p, "2", p != 2) for p in sorted({p for p, _ in factorize(D)}))
    return GFieldRecord("C2", 2, D, abs(D), ram, f"Q(sqrt({squarefree_kernel(D)}))")


def enumerate_quadratic(B: int) -> list[GFieldRecord]:
    """All quadratic fields with |disc| <= B, sorted by (|D|, D); sieve based."""
    B = int(B)
    _check(B, QUAD_MAX, "quadratic")
    return [_quad_record(D) for D in quadratic_discriminants(B)]


def quadratic_discriminants(B: int) -> list[int]:
    """Fundamental discriminants with |D| <= B, sorted by (|D|, D), from squarefree sieves."""
    B = int(B)
    if B < 3:
        return []
    out = []
    for lo, mask in iter_squarefree_segments(B):
        idx = np.nonzero(mask)[0] + lo
        odd = idx[idx % 2 == 1]
        out.extend(int(-n) for n in odd[odd % 4 == 3])
        out.extend(int(n) for n in odd[(odd % 4 == 1) & (odd > 1)])
        m = idx[idx <= B // 4]
        out.extend(int(4 * x) for x in m[(m % 4 == 2) | (m % 4 == 3)])
        out.extend(int(-4 * x) for x in m[(m % 4 == 1) | (m % 4 == 2)])
    out.sort(key=lambda D: (abs(D), D))
    return out


def odd_squarefree_count(y: int) -> int:
    """#{odd squarefree 1 <= n <= y} = sum over odd k of mu(k) * #{odd multiples of k^2 <= y}."""
    if y < 1:
        return 0
    r = math.isqrt(y)
    mu = mobius_sieve(r)
    tot = 0
    for k in range(1, r + 1, 2):
        if mu[k]:
            q = y // (k * k)
            tot += int(mu[k]) * ((q + 1) // 2)
    return tot


def quadratic_count(X: int) -> int:
    """Number of quadratic fields with |disc| <= X.

    D = +-n odd squarefree (n > 1 for the positive sign taken by n = 1 mod 4),
    or D = 4m: m odd contributes one sign, m = 2 mod 4 both signs.
    """
    X = int(X)
    if X < 3:
        return 0
    return odd_squarefree_count(X) - 1 + odd_squarefree_count(X // 4) + 2 * odd_squarefree_count(X // 8)


# ---- cyclic cubic --------------------------------------------------------------

def cubic_conductors(F: int) -> list[tuple[int, int, int]]:
    """(f, t, e) for admissible conductors f <= F: f = 9^e p_1...p_t, p_i = 1 mod 3."""
    out = []
    for f in range(7, F + 1):
        fac = factorize(f)
        e = 0
        ok = True
        t = 0
        for p, k in fac:
            if p == 3:
                if k != 2:
                    ok = False
                    break
                e = 1
            elif p % 3 == 1 and k == 1:
                t += 1
            else:
                ok = False
                break
        if ok:
            out.append((f, t, e))
    return out


def cubic_multiplicity(t: int, e: int) -> int:
    return 2 ** (t + e - 1)


def enumerate_cyclic_cubic(B: int) -> list[GFieldRecord]:
    """Cyclic cubic fields with disc f^2 <= B; one record per field, sorted by disc."""
    B = int(B)
    _check(B, CUBIC_MAX, "cyclic cubic")
    out = []
    for f, t, e in cubic_conductors(math.isqrt(B)):
        ram = tuple((p, "3", p != 3) for p, _ in factorize(f))
        for j in range(cubic_multiplicity(t, e)):
            out.append(GFieldRecord("C3", 3, f * f, f * f, ram, f"conductor={f}#{j}"))
    return out


def cubic_character_count(f: int) -> int:
    """Cyclic cubic fields of conductor exactly f, via primitive order-3 characters mod f.

    #{x in (Z/f)^* : x^3 = 1} = #Hom((Z/f)^*, mu_3); Moebius inversion over
    divisors isolates primitive characters; conjugate pairs give one field.
    """
    def hom3(m):
        return sum(1 for x in range(1, m + 1) if math.gcd(x, m) == 1 and pow(x, 3, m) == 1 % m) if m > 1 else 1

    prim = 0
    for d in range(1, f + 1):
        if f % d:
            continue
        k = f // d
        mu = 0 if any(e > 1 for _, e in factorize(k)) else (-1) ** len(factorize(k)) if k > 1 else 1
        if mu:
            prim += mu * hom3(d)
    return prim // 2


# ---- Klein four --------------------------------------------------------------

def _fund_from_kernel(s: int) -> int:
    return s if s % 4 == 1 else 4 * s


def _kernel_of_fund(D: int) -> int:
    return D if D % 4 == 1 else D // 4


def _disc_key(D: int):
    return (abs(D), D)


def enumerate_v4(B: int) -> list[GFieldRecord]:
    """Biquadratic fields with d_L = |D1 D2 D3| <= B, subfield discs sorted by (|D|, D)."""
    B = int(B)
    _check(B, V4_MAX, "V4")
    if B < 1:
        return []
    lim2 = math.isqrt(B // 3) + 1
    discs = quadratic_discriminants(lim2)
    out = []
    for i, D1 in enumerate(discs):
        a1 = abs(D1)
        if a1 ** 3 > B:
            break
        s1 = _kernel_of_fund(D1)
        for D2 in discs[i + 1:]:
            if a1 * D2 * D2 > B:
                break
            s2 = _kernel_of_fund(D2)
            g = math.gcd(s1, s2)
            D3 = _fund_from_kernel(s1 * s2 // (g * g))
            if _disc_key(D3) <= _disc_key(D2):
                continue
            dL = a1 * abs(D2) * abs(D3)
            if dL > B:
                continue
            out.append(_v4_record(D1, D2, D3))
    out.sort(key=lambda r: (r.d_L, r.defining_data))
    return out


def _v4_record(D1: int, D2: int, D3: int) -> GFieldRecord:
    trip = (D1, D2, D3)
    dL = abs(D1 * D2 * D3)
    ram = []
    for p, _ in factorize(dL):
        unram = [x for x, D in zip("abc", trip) if D % p]
        if len(unram) == 1:
            ram.append((p, "2" + unram[0], p != 2))
        else:
            ram.append((p, "V4", False))
    disc = dL  # biquadratic discriminants are positive
    return GFieldRecord("V4", 4, disc, dL, tuple(ram), f"subfields={D1},{D2},{D3}")


# ---- CSV ---------------------------------------------------------------------

class CSVParseError(ValueError):
    pass


class IngestResult(list):
    """Accepted records; rejected rows are kept as (line, reason) in ``rejected``."""

    def __init__(self, records=(), rejected=()):
        super().__init__(records)
        self.rejected = list(rejected)


FIELD_CSV_HEADER = ["group", "degree", "disc", "ram_data"]


def ingest_fields_csv(path) -> IngestResult:
    res = IngestResult()
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return res
    header = [h.strip() for h in rows[0]]
    if header != FIELD_CSV_HEADER:
        raise CSVParseError(f"line 1: header must be {','.join(FIELD_CSV_HEADER)}, got {','.join(header)}")
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise CSVParseError(f"line {lineno}: expected 4 fields, got {len(row)}")
        group, degree, disc, ram_data = (c.strip() for c in row)
        try:
            degree_i, disc_i = int(degree), int(disc)
            ram = []
            for tok in filter(None, (t.strip() for t in ram_data.split(";"))):
                p, cls, tame = tok.split(":")
                if tame.lower() not in ("true", "false", "1", "0"):
                    raise ValueError(f"bad tame flag {tame!r}")
                ram.append((int(p), cls, tame.lower() in ("true", "1")))
        except ValueError as exc:
            raise CSVParseError(f"line {lineno}: {exc}") from None
        try:
            rec = GFieldRecord(group, degree_i, disc_i, abs(disc_i), tuple(ram), f"csv:{lineno}")
        except ValueError as exc:
            res.rejected.append((lineno, str(exc)))
            continue
        model = STANDARD_GROUPS.get(group)
        if model is not None and model.degree != degree_i and model.group.order != degree_i:
            res.rejected.append((lineno, f"degree {degree_i} does not fit group {group}"))
            continue
        res.append(rec)
    return res


def fields_csv_text(records: Iterable[GFieldRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELD_CSV_HEADER)
    for r in records:
        w.writerow([r.group_label, r.degree, r.disc,
                    ";".join(f"{p}:{c}:{str(t).lower()}" for p, c, t in r.ram_primes)])
    return buf.getvalue()


def write_fields_csv(records: Iterable[GFieldRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(fields_csv_text(records))


# ---- counting ----------------------------------------------------------------

def _common_label(records: Sequence[GFieldRecord]) -> str | None:
    labels = {r.group_label for r in records}
    if len(labels) > 1:
        raise MixedGroupsError(f"records mix groups {sorted(labels)}")
    return labels.pop() if labels else None


def malle_count(records: Sequence[GFieldRecord], B_list: Iterable):
    from .asymptotics import CountSeries

    label = _common_label(records)
    ds = sorted(r.d_L for r in records)
    Bs = [float(b) for b in B_list]
    Ns = [bisect.bisect_right(ds, math.floor(b)) for b in Bs]
    return CountSeries(Bs, Ns, label=f"n({label})" if label else "n(empty)", provenance="exact")


def large_field_count(records: Sequence[GFieldRecord], G, B_list: Iterable):
    """Small-field counts scaled by the exact G-field fiber ratio."""
    from .asymptotics import CountSeries

    label = _common_label(records)
    if isinstance(G, str):
        G = STANDARD_GROUPS[G].group
    ratio = pg.gfie_fiber_count(G)
    base = malle_count(records, B_list)
    Ns = [int(n * ratio) if ratio.denominator == 1 else float(n * ratio) for n in base.N]
    return CountSeries(base.B, Ns, label=f"large({label})", provenance="exact")


def quadratic_count_series(B_list: Iterable):
    from .asymptotics import CountSeries

    Bs = [float(b) for b in B_list]
    return CountSeries(Bs, [quadratic_count(math.floor(b)) for b in Bs], label="n(C2)", provenance="exact")


def cyclic_cubic_count_series(B_list: Iterable):
    from .asymptotics import CountSeries

    Bs = [float(b) for b in B_list]
    conds = cubic_conductors(math.isqrt(math.floor(max(Bs))) if Bs else 0)
    fs = [f for f, _, _ in conds]
    cum = np.cumsum([cubic_multiplicity(t, e) for _, t, e in conds]).tolist() if conds else []
    Ns = []
    for b in Bs:
        k = bisect.bisect_right(fs, math.isqrt(math.floor(b)))
        Ns.append(int(cum[k - 1]) if k else 0)
    return CountSeries(Bs, Ns, label="n(C3)", provenance="exact")
