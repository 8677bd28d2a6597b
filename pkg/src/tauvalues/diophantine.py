"""Explicit Diophantine side conditions and the Fibonacci/Lucas 11th-power sieve."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import gcd, isqrt

from .arith import is_prime, iroot, prime_power, primes_up_to, valuation
from .tau import TauTable, tau_prime_power, tau_table

# ---------------------------------------------------------------------------
# The polynomials F_m(X, Y) from 1 / (1 - sqrt(Y) T + X T^2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FmPolynomial:
    """F_m with the sqrt(Y) factor split off for odd m.

    ``coeffs[i]`` is the coefficient of X^i Y^(deg - i), deg = m // 2.
    """

    index: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.index // 2

    @property
    def has_sqrt_y(self) -> bool:
        return self.index % 2 == 1

    def core(self, x: int, y: int) -> int:
        """The homogeneous part (F_m itself for even m, F_m / sqrt(Y) for odd m)."""
        k = self.degree
        return sum(c * x**i * y ** (k - i) for i, c in enumerate(self.coeffs))

    def __call__(self, x: int, y: int, sqrt_y: int | None = None) -> int:
        val = self.core(x, y)
        if not self.has_sqrt_y:
            return val
        if sqrt_y is None:
            r = isqrt(y)
            if r * r != y:
                raise ValueError("odd index needs sqrt(Y); Y is not a square")
            sqrt_y = r
        return sqrt_y * val

    def __str__(self) -> str:
        k = self.degree
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "*".join(_power("X", i) + _power("Y", k - i))
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts).removeprefix("+ ") or "0"
        if text.startswith("- "):
            text = "-" + text[2:]
        return f"sqrt(Y)*({text})" if self.has_sqrt_y else text


def _power(var: str, e: int) -> list[str]:
    if e == 0:
        return []
    return [var if e == 1 else f"{var}^{e}"]


def generate_fm(max_m: int) -> list[FmPolynomial]:
    """F_0 .. F_max_m via F_m = sqrt(Y) F_(m-1) - X F_(m-2).

    With the sqrt(Y) factor removed both parities share one rule on the
    homogeneous parts: even m picks up Y * G_(m-1), odd m just G_(m-1).
    """
    if max_m < 0:
        raise ValueError("max_m must be >= 0")
    cores: list[list[int]] = [[1], [1]]
    for m in range(2, max_m + 1):
        prev, prev2 = cores[m - 1], cores[m - 2]
        c = [0] * (m // 2 + 1)
        for i, v in enumerate(prev):
            c[i] += v
        for i, v in enumerate(prev2):
            c[i + 1] -= v
        cores.append(c)
    return [FmPolynomial(m, tuple(cores[m])) for m in range(max_m + 1)]


class IdentityViolation(AssertionError):
    pass


def taup4_point(p: int, tau_p: int, table: TauTable | None = None) -> tuple[int, int]:
    """(x, y) = (p, 2 tau(p)^2 - 3 p^11), checked against y^2 = 5 x^22 + 4 tau(p^4).

    tau(p^4) is taken from the table (a shared one by default), so a wrong
    ``tau_p`` is caught rather than carried through the recurrence.
    """
    if table is None:
        table = tau_table(p)
    if p <= table.limit and table[p] != tau_p:
        raise IdentityViolation(f"tau({p}) given as {tau_p}, table says {table[p]}")
    if p**4 <= table.limit:
        a = table[p**4]
    else:
        a = tau_prime_power(table[p], p, 4)
    y = 2 * tau_p * tau_p - 3 * p**11
    if y * y != 5 * p**22 + 4 * a:
        raise IdentityViolation(f"y^2 != 5x^22 + 4a at p={p}")
    return p, y


# ---------------------------------------------------------------------------
# Exhaustive searches for the three small equations
# ---------------------------------------------------------------------------


def solve_p_squared_eq(bound_p: int, bound_r: int) -> list[tuple[int, int, int]]:
    """All (eps, p, r) with p prime <= bound_p, 0 <= r <= bound_r and p^2 - eps p + 1 = 3^r."""
    out = []
    for p in primes_up_to(bound_p):
        for eps in (1, -1):
            v = p * p - eps * p + 1
            r = valuation(v, 3)
            if v == 3**r and r <= bound_r:
                out.append((eps, p, r))
    return sorted(out)


@dataclass(frozen=True)
class PowerSolution:
    ell: int
    j: int
    p: int
    d: int
    eps: int


def _search_t_ell_power(t: int, bound_p: int, bound_d: int, bound_j: int) -> list[PowerSolution]:
    """t * ell^j = p^d + eps, d odd >= 3, ell odd prime, p prime <= bound_p.

    For odd d, p + eps divides p^d + eps and the quotient is odd, so the
    2-adic part is fixed by p + eps and (p + eps)/t must itself be a power
    of ell. That pins ell down from small numbers before any big power is
    formed.
    """
    v2t = valuation(t, 2)
    ds = range(3, bound_d + 1, 2)
    out = []
    for p in primes_up_to(bound_p):
        if p == 2:
            continue  # 2^d + eps is odd, never t * ell^j with t even
        for eps in (1, -1):
            a = p + eps
            if valuation(a, 2) != v2t:
                continue
            g = a // t
            if g == 1:
                ell_fixed = None
            else:
                pp = prime_power(g)
                if pp is None or pp[0] == 2:
                    continue
                ell_fixed = pp[0]
            for d in ds:
                w = (p**d + eps) // t
                if ell_fixed is None:
                    pp = prime_power(w)
                    if pp is None or pp[0] == 2:
                        continue
                    ell, j = pp
                else:
                    ell, j = ell_fixed, 0
                    while w % ell == 0:
                        w //= ell
                        j += 1
                    if w != 1:
                        continue
                if j <= bound_j:
                    out.append(PowerSolution(ell, j, p, d, eps))
    return out


def search_two_ell_power(bound_p: int, bound_d: int, bound_j: int) -> list[PowerSolution]:
    return _search_t_ell_power(2, bound_p, bound_d, bound_j)


def search_eight_ell_power(bound_p: int, bound_d: int, bound_j: int) -> list[PowerSolution]:
    return _search_t_ell_power(8, bound_p, bound_d, bound_j)


@dataclass
class DefectiveCheck:
    k: int
    four_value: int
    eight_value: int
    # (ell, j) when the value is ell^(2j) for an odd prime ell, j >= 1
    four_solution: tuple[int, int] | None
    eight_solution: tuple[int, int] | None

    @property
    def trivial(self) -> bool:
        """The j = 0 case: both values equal 1."""
        return self.four_value == 1 and self.eight_value == 1

    @property
    def solvable(self) -> bool:
        return self.trivial or self.four_solution is not None or self.eight_solution is not None


def _as_even_prime_power(v: int) -> tuple[int, int] | None:
    if v < 2:
        return None
    r, exact = iroot(v, 2)
    if not exact:
        return None
    pp = prime_power(r)
    if pp is None or pp[0] == 2:
        return None
    return pp


def genEVT_defective_check(k: int) -> DefectiveCheck:
    """Decide ell^(2j) = (3^(2k-1) - 1)/2 and ell^(2j) = (7^(2k-1) + 1)/8."""
    if k < 1:
        raise ValueError("k must be >= 1")
    e = 2 * k - 1
    four = (3**e - 1) // 2
    eight = (7**e + 1) // 8
    return DefectiveCheck(k, four, eight, _as_even_prime_power(four), _as_even_prime_power(eight))


# ---------------------------------------------------------------------------
# Fibonacci / Lucas 11th-power sieve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FibSieveResult:
    a: int
    b: int
    q: int
    period: int
    power_residue_classes: frozenset[int]

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "q": self.q,
            "period": self.period,
            "classes": sorted(self.power_residue_classes),
        }


def is_11th_power_residue(x: int, q: int) -> bool:
    """Zero counts as an 11th power."""
    x %= q
    if x == 0 or (q - 1) % 11:
        return True
    return pow(x, (q - 1) // 11, q) == 1


def fib_lucas_mod(a: int, b: int, q: int) -> FibSieveResult:
    """Period of (F_n, L_n) mod q and the n-classes where a F_n + b L_n is an 11th power."""
    if q in (2, 5):
        raise ValueError("q must not be 2 or 5")
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    fib = [0, 1]
    while True:
        fib.append((fib[-1] + fib[-2]) % q)
        if fib[-2] == 0 and fib[-1] == 1:
            break
    period = len(fib) - 2
    classes = set()
    for n in range(period):
        luc = (fib[n - 1] + fib[n + 1]) % q if n else 2
        if is_11th_power_residue(a * fib[n] + b * luc, q):
            classes.add(n)
    return FibSieveResult(a, b, q, period, frozenset(classes))


def crt_incompatible(r1: FibSieveResult, r2: FibSieveResult) -> bool:
    """True iff no integer n is admissible for both results."""
    g = gcd(r1.period, r2.period)
    return not any(
        (c1 - c2) % g == 0 for c1 in r1.power_residue_classes for c2 in r2.power_residue_classes
    )


def default_dj_pool(q_max: int = 2000) -> list[int]:
    return [q for q in primes_up_to(q_max) if q % 11 == 1]


def find_norm_generator(ell: int, v_max: int | None = None) -> tuple[int, int] | None:
    """Some (u, v) with u^2 - 5 v^2 = +-ell, or None when ell is inert in Q(sqrt 5)."""
    if ell % 5 in (2, 3):
        return None
    for v in range(0, (v_max or ell) + 1):
        for s in (1, -1):
            u2 = s * ell + 5 * v * v
            if u2 >= 0:
                u = isqrt(u2)
                if u * u == u2:
                    return u, v
    return None


@dataclass
class BranchCertificate:
    generator: tuple[int, int]
    excluded: bool
    primes_used: list[int] = field(default_factory=list)
    results: list[dict] = field(default_factory=list)


@dataclass
class DJCertificate:
    target: int
    verdict: str  # "excluded" | "inconclusive"
    reason: str
    branches: list[BranchCertificate] = field(default_factory=list)

    @property
    def excluded(self) -> bool:
        return self.verdict == "excluded"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "DJCertificate":
        branches = [
            BranchCertificate(tuple(b["generator"]), b["excluded"], b["primes_used"], b["results"])
            for b in data["branches"]
        ]
        return cls(data["target"], data["verdict"], data["reason"], branches)


def _exclude_branch(u: int, v: int, pool: list[int]) -> BranchCertificate:
    results = [fib_lucas_mod(u, v, q) for q in pool if (q - 1) % 11 == 0 and q not in (2, 5)]
    for r in results:
        if not r.power_residue_classes:
            return BranchCertificate((u, v), True, [r.q], [r.to_dict()])
    for r1, r2 in combinations(results, 2):
        if crt_incompatible(r1, r2):
            return BranchCertificate((u, v), True, [r1.q, r2.q], [r1.to_dict(), r2.to_dict()])
    return BranchCertificate((u, v), False, [r.q for r in results], [])


def dj_exclude(
    a: int, generator: tuple[int, int] | None = None, pool: list[int] | None = None
) -> DJCertificate:
    """Try to rule out tau(p^4) = a for every prime p.

    tau(p^4) = a makes (y + p^11 sqrt5)/2 an element of norm a, hence a unit
    times a generator g = u + v sqrt5 of a prime above |a| (or its conjugate).
    Comparing sqrt5-parts gives (+-p)^11 = u F_n + v L_n for some n in Z.
    Both conjugates are scanned explicitly; negative n and the sign of p are
    covered because the classes are taken over a full period and -1 is an
    11th power.
    """
    ell = abs(a)
    if generator is None:
        if not is_prime(ell):
            raise ValueError("supply a generator when |a| is not prime")
        if ell == 5:
            raise ValueError("|a| = 5 ramifies; not handled")
        generator = find_norm_generator(ell)
        if generator is None:
            return DJCertificate(a, "excluded", f"{ell} is inert in Q(sqrt5): no element of norm {a}")
    u, v = generator
    if abs(u * u - 5 * v * v) != ell:
        raise ValueError(f"generator {generator} has norm {u * u - 5 * v * v}, not +-{ell}")
    pool = default_dj_pool() if pool is None else pool
    branches = [_exclude_branch(u, v, pool), _exclude_branch(u, -v, pool)]
    if all(b.excluded for b in branches):
        used = sorted({q for b in branches for q in b.primes_used})
        return DJCertificate(a, "excluded", f"11th-power sieve modulo {used}", branches)
    return DJCertificate(a, "inconclusive", "no single prime or prime pair in the pool eliminates all n", branches)
