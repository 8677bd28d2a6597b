"""Lucas pairs, their sequences, ranks of apparition and primitive divisors.

A pair is stored through its integer invariants A = alpha + beta and
Q = alpha * beta, so u_1 = 1, u_2 = A, u_n = A u_(n-1) - Q u_(n-2).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .arith import DEFAULT_EFFORT, FactorizationIncomplete, factor


class LucasPairError(ValueError):
    pass


class RankSearchError(ValueError):
    pass


@dataclass(frozen=True)
class LucasContext:
    A: int
    Q: int

    @property
    def D(self) -> int:
        return self.A * self.A - 4 * self.Q


def make_context(A: int, Q: int, strict: bool = True) -> LucasContext:
    """Validate (A, Q) as a Lucas pair.

    ``strict=False`` skips the coprimality clause, which is useful for the
    tau recurrence at non-ordinary primes (e.g. p = 2) where the sequence is
    still well defined but (A, Q) is not a Lucas pair.
    """
    if A == 0 or Q == 0:
        raise LucasPairError(f"A and Q must be nonzero (A={A}, Q={Q})")
    if strict and gcd(A, Q) != 1:
        raise LucasPairError(f"A and Q not coprime: gcd({A}, {Q}) = {gcd(A, Q)}")
    # alpha/beta is a root of unity exactly when A^2 / Q is 0, 1, 2, 3 or 4.
    if A * A in (0, Q, 2 * Q, 3 * Q, 4 * Q):
        raise LucasPairError(f"degenerate pair: alpha/beta is a root of unity (A={A}, Q={Q})")
    return LucasContext(A, Q)


def tau_context(p: int, tau_p: int, strict: bool = True) -> LucasContext:
    """The pair with u_i = tau(p^(i-1)): roots of X^2 - tau(p) X + p^11."""
    return make_context(tau_p, p**11, strict=strict)


def terms(ctx: LucasContext, n: int, mod: int | None = None) -> list[int]:
    """[u_1, ..., u_n], optionally reduced mod ``mod``."""
    if n < 1:
        return []
    A, Q = ctx.A, ctx.Q
    if mod is not None:
        A, Q = A % mod, Q % mod
    out = [1 % mod if mod else 1]
    prev, cur = 0, out[0]
    for _ in range(n - 1):
        prev, cur = cur, A * cur - Q * prev
        if mod:
            cur %= mod
        out.append(cur)
    return out


def u_n(ctx: LucasContext, n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return terms(ctx, n)[-1]


def rank_of_apparition(ctx: LucasContext, ell: int, bound: int | None = None) -> int:
    """Least m >= 1 with ell | u_m.

    Searches up to 4(ell + 1) terms; theory puts the rank at most ell + 1
    whenever ell does not divide Q.
    """
    if ctx.Q % ell == 0:
        raise RankSearchError(f"{ell} divides Q; rank may not exist")
    cap = 4 * (ell + 1)
    limit = min(cap, max(ell + 1, bound or 0))
    A, Q = ctx.A % ell, ctx.Q % ell
    prev, cur = 0, 1
    for m in range(1, limit + 1):
        if cur == 0:
            return m
        prev, cur = cur, (A * cur - Q * prev) % ell
    raise RankSearchError(f"no m <= {limit} with {ell} | u_m")


def is_primitive_divisor(ctx: LucasContext, n: int, q: int) -> bool:
    """q | u_n but q divides neither D nor any earlier term (checked mod q)."""
    if ctx.D % q == 0:
        return False
    ts = terms(ctx, n, mod=q)
    return ts[-1] == 0 and all(t != 0 for t in ts[:-1])


class PrimitiveDivisors(NamedTuple):
    primes: frozenset[int]
    # Composite cofactors of u_n that could not be split within budget.
    unknown: tuple[int, ...]


def primitive_prime_divisors(
    ctx: LucasContext, n: int, effort: int = DEFAULT_EFFORT, seed: int = 0
) -> PrimitiveDivisors:
    if n <= 2:
        raise ValueError("primitive divisors are defined for n > 2")
    un = u_n(ctx, n)
    if un == 0:
        raise LucasPairError("u_n = 0 for a degenerate pair")
    f = factor(un, effort=effort, seed=seed)
    prim = frozenset(q for q, _ in f.factors if is_primitive_divisor(ctx, n, q))
    return PrimitiveDivisors(prim, f.unfactored)


def is_defective(ctx: LucasContext, n: int, effort: int = DEFAULT_EFFORT, seed: int = 0) -> bool:
    """True iff u_n (n > 2) has no primitive prime divisor."""
    res = primitive_prime_divisors(ctx, n, effort=effort, seed=seed)
    if res.primes:
        return False
    if res.unknown:
        raise FactorizationIncomplete(f"cannot decide: cofactors {res.unknown} unfactored")
    return True


def de_pair(p: int, eps: int) -> LucasContext:
    """The pair (alpha, beta) = (p, -eps): A = p - eps, Q = -eps p."""
    return make_context(p - eps, -eps * p)
