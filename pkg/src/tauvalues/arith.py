"""Integer arithmetic helpers: primes, primality, factorization, integer roots."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import gmpy2
import numpy as np

TRIAL_LIMIT = 10**5
DEFAULT_EFFORT = 10**8

# Miller-Rabin with the first 13 prime bases is deterministic below this bound.
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FactorizationIncomplete(ArithmeticError):
    """Raised when an operation needs a complete factorization it did not get."""


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return flags


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit, ascending."""
    if limit < 2:
        return []
    return np.flatnonzero(_sieve(limit)).tolist()


_SMALL_PRIMES = primes_up_to(TRIAL_LIMIT)


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic (Miller-Rabin, 13 fixed bases) for n < 3.3e24. Above that
    the answer is a strong BPSW probable-prime verdict; see ``is_certified_prime``.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    if n < 10_000:
        return True
    if n < _MR_DETERMINISTIC_BOUND:
        return _miller_rabin(n, _MR_BASES)
    return _miller_rabin(n, _MR_BASES) and bool(gmpy2.is_strong_bpsw_prp(n))


def is_certified_prime(n: int) -> bool:
    """True only if ``is_prime(n)`` holds and the test was deterministic."""
    return n < _MR_DETERMINISTIC_BOUND and is_prime(n)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def iroot(n: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of n >= 0, and whether it is exact."""
    r, exact = gmpy2.iroot(gmpy2.mpz(n), k)
    return int(r), bool(exact)


def perfect_power(n: int) -> tuple[int, int]:
    """Write n >= 2 as b**k with k maximal; returns (b, k)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    best = (n, 1)
    for k in primes_up_to(n.bit_length()):
        r, exact = iroot(n, k)
        if exact:
            b, e = perfect_power(r) if r >= 2 else (r, 1)
            return b, e * k
    return best


def prime_power(n: int) -> tuple[int, int] | None:
    """(q, k) if n = q**k with q prime and k >= 1, else None."""
    if n < 2:
        return None
    b, k = perfect_power(n)
    if is_prime(b):
        return b, k
    return None


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def divisor_sigma(n: int, k: int = 1) -> int:
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
    return total


@dataclass(frozen=True)
class Factorization:
    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]
    # Composite cofactors that resisted the effort budget.
    unfactored: tuple[int, ...] = ()
    certified: bool = True

    @property
    def complete(self) -> bool:
        return not self.unfactored

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        parts += [f"[{c}]" for c in self.unfactored]
        body = " * ".join(parts) or "1"
        return f"-{body}" if self.sign < 0 else body


@dataclass
class _Budget:
    remaining: int
    rng: random.Random = field(default_factory=random.Random)


def _brent(n: int, budget: _Budget) -> int | None:
    """One nontrivial factor of the odd composite n, or None if out of budget."""
    while budget.remaining > 0:
        y = budget.rng.randrange(1, n)
        c = budget.rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1 and budget.remaining > 0:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, r - k)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget.remaining -= steps
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # Backtrack one step at a time from the last checkpoint.
            while True:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                if g > 1:
                    break
        if 1 < g < n:
            return g
    return None


def _split(n: int, budget: _Budget, out: dict[int, int], stuck: list[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r, exact = iroot(n, 2)
    if exact:
        for _ in range(2):
            _split(r, budget, out, stuck)
        return
    f = _brent(n, budget)
    if f is None:
        stuck.append(n)
        return
    _split(f, budget, out, stuck)
    _split(n // f, budget, out, stuck)


def factor(v: int, effort: int = DEFAULT_EFFORT, seed: int = 0) -> Factorization:
    """Prime factorization of a nonzero integer.

    Trial division up to 1e5, then Brent's rho. ``effort`` caps the total
    number of rho iterations; cofactors left over are reported in
    ``unfactored`` rather than raising.
    """
    if v == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if v < 0 else 1
    n = abs(v)
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stuck: list[int] = []
    if n > 1:
        if n < TRIAL_LIMIT**2:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, _Budget(effort, random.Random(seed)), out, stuck)
    factors = tuple(sorted(out.items()))
    certified = all(p < _MR_DETERMINISTIC_BOUND for p, _ in factors)
    return Factorization(v, sign, factors, tuple(sorted(stuck)), certified)


def omega_counts(f: Factorization) -> tuple[int, int]:
    """(omega, Omega): distinct prime count and count with multiplicity."""
    if not f.complete:
        raise FactorizationIncomplete(f"unfactored cofactors {f.unfactored}")
    return len(f.factors), sum(e for _, e in f.factors)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    """Solve x = r1 (m1), x = r2 (m2) for arbitrary moduli; None if incompatible."""
    g = gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    t = (r2 - r1) // g * pow(m1 // g, -1, m2 // g) % (m2 // g)
    return (r1 + m1 * t) % lcm, lcm
