"""Exhaustive finite permutation groups.

Permutations are tuples of 0-based images.  Composition follows the
functional convention ``mul(g, h)[i] = g[h[i]]`` (apply h first).
Everything here is exact and brute force; degrees are kept small.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

Perm = tuple  # tuple[int, ...]

DEFAULT_CAP = 10**6
SYM_SCAN_MAX_DEGREE = 8
ORACLE_TUPLE_CAP = 10**7


class SizeLimitError(ValueError):
    pass


class DomainError(ValueError):
    pass


def check_perm(p: Sequence[int], n: int | None = None) -> Perm:
    p = tuple(int(x) for x in p)
    if n is not None and len(p) != n:
        raise ValueError(f"permutation {p} has degree {len(p)}, expected {n}")
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"{p} is not a permutation of 0..{len(p) - 1}")
    return p


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(g: Perm, h: Perm) -> Perm:
    return tuple(g[i] for i in h)


def inv(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def conj(x: Perm, g: Perm) -> Perm:
    """x g x^-1."""
    return mul(mul(x, g), inv(x))


def power(g: Perm, k: int) -> Perm:
    if k < 0:
        g, k = inv(g), -k
    out = identity(len(g))
    base = g
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def cycles(g: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(g)
    out = []
    for i in range(len(g)):
        if seen[i]:
            continue
        c = []
        j = i
        while not seen[j]:
            seen[j] = True
            c.append(j)
            j = g[j]
        out.append(tuple(c))
    return out


def cycle_type(g: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(g)), reverse=True))


def perm_order(g: Perm) -> int:
    return math.lcm(*cycle_type(g)) if g else 1


def from_cycles(n: int, *cycs: Iterable[int]) -> Perm:
    img = list(range(n))
    for c in cycs:
        c = list(c)
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return check_perm(img, n)


@dataclass(frozen=True)
class PermGroup:
    n: int
    generators: tuple
    elements: tuple
    order: int
    _index: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self._index is None:
            object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.elements)})

    def __contains__(self, g) -> bool:
        return tuple(g) in self._index

    def index_of(self, g: Perm) -> int:
        return self._index[tuple(g)]

    @property
    def identity(self) -> Perm:
        return identity(self.n)

    def as_set(self) -> frozenset:
        return frozenset(self.elements)


def group_from_generators(n: int, gens: Sequence[Sequence[int]], cap: int = DEFAULT_CAP) -> PermGroup:
    """Breadth-first closure of ``gens``; elements sorted lexicographically."""
    gens = tuple(check_perm(g, n) for g in gens)
    e = identity(n)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise SizeLimitError(f"closure exceeds cap {cap}")
                queue.append(y)
    elems = tuple(sorted(seen))
    return PermGroup(n, gens, elems, len(elems))


def group_from_elements(n: int, elems: Iterable[Perm], gens: Sequence[Perm] = ()) -> PermGroup:
    elems = tuple(sorted(set(tuple(x) for x in elems)))
    return PermGroup(n, tuple(gens), elems, len(elems))


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return group_from_generators(max(n, 1), [])
    gens = [from_cycles(n, (0, 1)), from_cycles(n, range(n))]
    elems = tuple(itertools.permutations(range(n)))
    return PermGroup(n, tuple(gens), elems, len(elems))


def cyclic_group(n: int) -> PermGroup:
    return group_from_generators(n, [from_cycles(n, range(n))] if n > 1 else [])


def orbits(G: PermGroup) -> list[tuple[int, ...]]:
    gens = G.generators or G.elements
    seen = set()
    out = []
    for i in range(G.n):
        if i in seen:
            continue
        orb = {i}
        stack = [i]
        while stack:
            j = stack.pop()
            for g in gens:
                if g[j] not in orb:
                    orb.add(g[j])
                    stack.append(g[j])
        seen |= orb
        out.append(tuple(sorted(orb)))
    return out


def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G)) == 1


def conjugacy_classes(G: PermGroup) -> list[tuple[Perm, ...]]:
    """Conjugation orbits, each sorted, listed by (size, smallest member)."""
    gens = G.generators or G.elements
    seen = set()
    classes = []
    for g in G.elements:
        if g in seen:
            continue
        cls = {g}
        stack = [g]
        while stack:
            x = stack.pop()
            for s in gens:
                y = conj(s, x)
                if y not in cls:
                    cls.add(y)
                    stack.append(y)
        seen |= cls
        classes.append(tuple(sorted(cls)))
    classes.sort(key=lambda c: (len(c), c[0]))
    return classes


def _check_scan_degree(G: PermGroup):
    if G.n > SYM_SCAN_MAX_DEGREE:
        raise SizeLimitError(f"S_{G.n} scan disabled above degree {SYM_SCAN_MAX_DEGREE}")


def normalizer_in_sym(G: PermGroup) -> PermGroup:
    _check_scan_degree(G)
    gens = G.generators or G.elements
    keep = [x for x in itertools.permutations(range(G.n))
            if all(conj(x, g) in G for g in gens)]
    return group_from_elements(G.n, keep)


def centralizer_in_sym(G: PermGroup) -> PermGroup:
    _check_scan_degree(G)
    gens = G.generators or G.elements
    keep = [x for x in itertools.permutations(range(G.n))
            if all(mul(x, g) == mul(g, x) for g in gens)]
    return group_from_elements(G.n, keep)


def center(G: PermGroup) -> PermGroup:
    gens = G.generators or G.elements
    keep = [x for x in G.elements if all(mul(x, g) == mul(g, x) for g in gens)]
    return group_from_elements(G.n, keep)


def gfie_fiber_count(G: PermGroup) -> Fraction:
    """#N(G) #Z(G) / (#C(G) #G), normalizer and centralizer taken in S_n.

    Counts how many inequivalent G-field structures sit over one field.
    Non-integral values are returned as-is; callers may flag them.
    """
    if not is_transitive(G):
        raise DomainError("group is not transitive")
    N = normalizer_in_sym(G)
    C = centralizer_in_sym(G)
    Z = center(G)
    return Fraction(N.order * Z.order, C.order * G.order)


def _mult_table(G: PermGroup) -> np.ndarray:
    idx = G._index
    m = len(G.elements)
    tab = np.empty((m, m), dtype=np.int32)
    for i, g in enumerate(G.elements):
        tab[i] = [idx[mul(g, h)] for h in G.elements]
    return tab


def surjection_orbit_oracle(G: PermGroup, k: int = 2) -> Fraction:
    """Ratio of orbit counts of generating k-tuples under G- and N_{S_n}(G)-conjugation.

    Independent of gfie_fiber_count: nothing here touches centralizers
    or the center, only tuple enumeration and orbit marking.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    m = G.order
    if m ** k > ORACLE_TUPLE_CAP:
        raise SizeLimitError(f"|G|^k = {m ** k} exceeds {ORACLE_TUPLE_CAP}")
    tab = _mult_table(G)
    e = G.index_of(G.identity)

    def generates(tup) -> bool:
        seen = np.zeros(m, dtype=bool)
        seen[e] = True
        frontier = [e]
        count = 1
        while frontier:
            new = []
            for x in frontier:
                for t in tup:
                    y = tab[t, x]
                    if not seen[y]:
                        seen[y] = True
                        new.append(int(y))
            count += len(new)
            if count == m:
                return True
            frontier = new
        return count == m

    surj = [t for t in itertools.product(range(m), repeat=k) if generates(t)]
    surj_set = set(surj)

    def count_orbits(acting: Sequence[Perm]) -> int:
        # conjugation by x as a map on G's indices
        maps = [np.array([G.index_of(conj(x, g)) for g in G.elements]) for x in acting]
        visited = set()
        n_orb = 0
        for t in surj:
            if t in visited:
                continue
            n_orb += 1
            for mp in maps:
                u = tuple(int(mp[i]) for i in t)
                visited.add(u)
        assert visited <= surj_set
        return n_orb

    N = normalizer_in_sym(G)
    return Fraction(count_orbits(G.elements), count_orbits(N.elements))


# ---- text format -------------------------------------------------------

def parse_group_text(text: str) -> PermGroup:
    """First non-blank line: n; each further line: images of one generator."""
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty group description")
    n = int(lines[0])
    gens = [check_perm([int(x) for x in ln.split()], n) for ln in lines[1:]]
    return group_from_generators(n, gens)


def format_group_text(G: PermGroup) -> str:
    return "\n".join([str(G.n)] + [" ".join(map(str, g)) for g in G.generators]) + "\n"


# ---- transitive subgroups of small symmetric groups -------------------

class _SymTables:
    """Index-level multiplication and inverse tables for S_n."""

    def __init__(self, n: int):
        self.n = n
        self.elems = list(itertools.permutations(range(n)))
        self.idx = {g: i for i, g in enumerate(self.elems)}
        arr = np.array(self.elems, dtype=np.int64).reshape(len(self.elems), n)
        # rank of a perm = position in lexicographic order
        fact = [math.factorial(n - 1 - i) for i in range(n)]
        m = len(self.elems)
        self.mul = np.empty((m, m), dtype=np.int32)
        for i in range(m):
            comp = arr[i][arr]  # g_i[h[j]] for every h
            self.mul[i] = self._rank(comp, fact)
        self.inv = np.empty(m, dtype=np.int32)
        ident = self.idx[tuple(range(n))]
        for i in range(m):
            self.inv[i] = int(np.nonzero(self.mul[i] == ident)[0][0])
        self.ident = ident
        self.mul_list = self.mul.tolist()
        # conj_tab[x][h] = index of x h x^-1
        self.conj_tab = self.mul[self.mul, self.inv[:, None]]

    def _rank(self, rows: np.ndarray, fact) -> np.ndarray:
        n = self.n
        r = np.zeros(len(rows), dtype=np.int64)
        for i in range(n):
            smaller = (rows[:, i + 1:] < rows[:, i:i + 1]).sum(axis=1)
            r += smaller * fact[i]
        return r


    def closure(self, gens: Sequence[int]) -> frozenset:
        mt = self.mul_list
        seen = {self.ident}
        frontier = [self.ident]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = mt[g][x]
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return frozenset(seen)

    def conjugates(self, H: frozenset) -> set[frozenset]:
        cols = self.conj_tab[:, np.fromiter(H, dtype=np.int64)]
        cols.sort(axis=1)
        return {frozenset(row) for row in np.unique(cols, axis=0).tolist()}


@lru_cache(maxsize=None)
def _sym_tables(n: int) -> _SymTables:
    return _SymTables(n)


def subgroup_classes(n: int) -> list[tuple[frozenset, list[int]]]:
    """Representatives of all conjugacy classes of subgroups of S_n (n <= 6).

    Returns (element indices, generator indices) pairs over the
    lexicographic listing of S_n.

    Every subgroup is a join of cyclic subgroups, so layered joins of class
    representatives with all cyclic subgroups reach every class.
    """
    if n > 6:
        raise SizeLimitError("subgroup lattice enumeration limited to n <= 6")
    T = _sym_tables(n)
    cyc_gens: dict[frozenset, int] = {}
    for g in range(len(T.elems)):
        cyc_gens.setdefault(T.closure([g]), g)
    known: set[frozenset] = set()
    order: list[tuple[frozenset, list[int]]] = []

    def add(H: frozenset, gens: list[int]) -> bool:
        if H in known:
            return False
        known.update(T.conjugates(H))
        order.append((H, gens))
        return True

    layer = []
    for C in sorted(cyc_gens, key=lambda s: (len(s), sorted(s))):
        if add(C, [cyc_gens[C]]):
            layer.append(order[-1])
    while layer:
        nxt = []
        for H, gens in layer:
            for C, c in cyc_gens.items():
                if c in H:
                    continue
                J = T.closure(gens + [c])
                if add(J, gens + [c]):
                    nxt.append(order[-1])
        layer = nxt
    return order


@lru_cache(maxsize=None)
def transitive_groups(n: int) -> tuple[PermGroup, ...]:
    """One PermGroup per conjugacy class of transitive subgroups of S_n, n <= 6.

    Sorted by (order, sorted element list); generators are a small
    greedy generating set.
    """
    if n == 1:
        return (group_from_generators(1, []),)
    T = _sym_tables(n)
    out = []
    for H, gens in subgroup_classes(n):
        G = PermGroup(n, tuple(T.elems[g] for g in gens),
                      tuple(sorted(T.elems[h] for h in H)), len(H))
        if is_transitive(G):
            out.append(G)
    out.sort(key=lambda G: (G.order, G.elements))
    return tuple(out)
