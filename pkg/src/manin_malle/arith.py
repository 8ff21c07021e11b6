"""Small exact number-theory helpers shared by the counting modules."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as sorted (p, e) pairs; trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factorize(n))


def squarefree_kernel(n: int) -> int:
    """Signed squarefree part s of n, i.e. n = s * k^2."""
    if n == 0:
        raise ValueError("0 has no squarefree kernel")
    s = 1
    for p, e in factorize(n):
        if e % 2:
            s *= p
    return s if n > 0 else -s


def squarefree_divisors(primes: tuple[int, ...]) -> list[tuple[int, int]]:
    """All (d, mu(d)) for d a product of a subset of ``primes``."""
    out = [(1, 1)]
    for p in primes:
        out += [(d * p, -s) for d, s in out]
    return out


def fundamental_discriminant(m: int) -> int:
    """Discriminant of Q(sqrt(m)) for squarefree m != 0, 1."""
    if m in (0, 1) or not is_squarefree(m):
        raise ValueError(f"{m} does not define a quadratic field")
    return m if m % 4 == 1 else 4 * m


def is_fundamental_discriminant(D: int) -> bool:
    """Direct per-candidate test: D = 1 mod 4 squarefree, or D = 4m, m = 2,3 mod 4 squarefree."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def units_mod(N: int) -> tuple[int, ...]:
    return tuple(a for a in range(1, N + 1) if math.gcd(a, N) == 1) if N > 1 else (1,)


def mobius_sieve(n: int) -> np.ndarray:
    """mu(k) for 0 <= k <= n as an int8 array (mu(0) = 0)."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if is_comp[p]:
            continue
        is_comp[2 * p::p] = True
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return mu


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.nonzero(sieve)[0]


def squarefree_segment(lo: int, hi: int, primes: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask over [lo, hi) marking squarefree integers (0 is not squarefree)."""
    if lo < 0 or hi < lo:
        raise ValueError("need 0 <= lo <= hi")
    mask = np.ones(hi - lo, dtype=bool)
    if primes is None:
        primes = primes_up_to(math.isqrt(max(hi - 1, 1)))
    for p in primes:
        q = int(p) * int(p)
        if q >= hi:
            break
        start = (-lo) % q
        mask[start::q] = False
    if lo == 0 and hi > 0:
        mask[0] = False
    return mask


def iter_squarefree_segments(n: int, segment: int = 1 << 22) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (lo, mask) pairs covering [0, n] with squarefree masks."""
    primes = primes_up_to(math.isqrt(max(n, 1)))
    lo = 0
    while lo <= n:
        hi = min(n + 1, lo + segment)
        yield lo, squarefree_segment(lo, hi, primes)
        lo = hi


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, float or numeric string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return Fraction(float(x))
    return Fraction(x)


def floor_root(q, k: int) -> int:
    """Largest integer t >= 0 with t**k <= q, exactly (q rational)."""
    q = as_fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    num, den = q.numerator, q.denominator
    t = int(math.floor((num / den) ** (1.0 / k))) if q > 0 else 0
    while t > 0 and t ** k * den > num:
        t -= 1
    while (t + 1) ** k * den <= num:
        t += 1
    return t
