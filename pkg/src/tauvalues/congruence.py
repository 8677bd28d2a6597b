"""Ramanujan congruences for tau and the residue sieve built on them.

Residue tables give, for each modulus m, the residues tau(p^(d-1)) can take
mod m as p runs over all primes. Entries such as ``d`` or ``2d`` stand for
the residue of that expression mod m and are evaluated at query time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

from .arith import divisor_sigma, is_prime, legendre, primes_up_to
from .tau import TauTable, is_ordinary, tau_prime_power, tau_table

MODULI = (3, 4, 5, 7, 12, 23)
SIEVE_MODULI = (3, 4, 5, 7, 23)


class CongruenceRuleError(AssertionError):
    """An empirical check of a congruence rule against exact tau values failed."""


@dataclass(frozen=True)
class ResidueRule:
    modulus: int
    d_class: str
    # Symbolic entries: ints are literal residues, "d"/"2d"/"4d" are scaled d.
    allowed: tuple

    def residues(self, d: int) -> frozenset[int]:
        out = set()
        for entry in self.allowed:
            if isinstance(entry, str):
                out.add((int(entry[:-1] or 1) * d) % self.modulus)
            else:
                out.add(entry % self.modulus)
        return frozenset(out)


# (modulus, parity of d) -> [(residue of d, modulus for d, allowed entries)]
_RULES: dict[tuple[int, str], list[tuple[tuple[int, ...], int, tuple]]] = {
    (3, "odd"): [((1,), 2, (0, 1, "d"))],
    (4, "odd"): [((1,), 2, (0, 1, "d"))],
    (5, "odd"): [((1,), 4, (0, 1, "d")), ((3,), 4, (0, 1, 2, 3, "d"))],
    (7, "odd"): [((1,), 6, (0, 1, "d")), ((3, 5), 6, (0, 1, 2, 4, "d", "2d", "4d"))],
    (23, "odd"): [((1,), 6, (1, "d")), ((3,), 6, (0, 1, "d")), ((5,), 6, (1, -1, "d"))],
    (3, "even"): [((0,), 2, (0, "d"))],
    (4, "even"): [((0,), 2, (0, "d"))],
    (5, "even"): [((0,), 4, (0, "d")), ((2,), 4, (0, 1, 2, "d"))],
    (7, "even"): [((0, 2), 6, (0, "d", "2d", "4d")), ((4,), 6, (0, "d"))],
    # p != 23 only; tau(23^k) = 1 mod 23 is handled by the caller.
    (23, "even"): [((0,), 6, (0, "d")), ((2,), 6, (0, -1, "d")), ((4,), 6, (0, 1, "d"))],
}


def residue_rules(modulus: int) -> list[ResidueRule]:
    """All rules for a modulus; together they cover every d >= 1."""
    out = []
    for parity in ("odd", "even"):
        for classes, dm, allowed in _RULES[(modulus, parity)]:
            cls = ", ".join(map(str, classes))
            out.append(ResidueRule(modulus, f"d {parity}, d = {cls} mod {dm}", allowed))
    return out


def _rule_for(d: int, modulus: int) -> ResidueRule:
    parity = "odd" if d % 2 else "even"
    for classes, dm, allowed in _RULES[(modulus, parity)]:
        if d % dm in classes:
            return ResidueRule(modulus, f"d {parity}, d = {d % dm} mod {dm}", allowed)
    raise AssertionError(f"no rule for d={d} mod {modulus}")


def allowed_residues(d: int, m: int) -> frozenset[int]:
    """Residues of tau(p^(d-1)) mod m over primes p (p != 23 when m = 23, d even).

    m = 12 is the CRT combination of the mod-3 and mod-4 sets.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if m == 12:
        r3, r4 = allowed_residues(d, 3), allowed_residues(d, 4)
        return frozenset(x for x in range(12) if x % 3 in r3 and x % 4 in r4)
    if m not in (3, 4, 5, 7, 23):
        raise ValueError(f"unsupported modulus {m}")
    return _rule_for(d, m).residues(d)


def tau_mod_formulas(n: int) -> tuple[int, int, int, int]:
    """tau(n) mod (3, 4, 5, 7) from the divisor-sum formulas."""
    if n < 1:
        raise ValueError("n must be positive")
    s1 = divisor_sigma(n, 1)
    s3 = divisor_sigma(n, 3)
    return (n * n * s1 % 3, n**3 * s1 % 4, n * s1 % 5, n * s3 % 7)


def represented_by_1_23(p: int) -> bool:
    """Whether p = a^2 + 23 b^2 for integers a, b."""
    b = 0
    while 23 * b * b <= p:
        r = p - 23 * b * b
        if isqrt(r) ** 2 == r:
            return True
        b += 1
    return False


def tau_p_mod23(p: int) -> int:
    """Class of tau(p) mod 23 as 0, 2 or -1."""
    if p == 23:
        raise ValueError("p = 23 is special: tau(23) = 1 mod 23")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if legendre(p, 23) == -1:
        return 0
    return 2 if represented_by_1_23(p) else -1


@lru_cache(maxsize=None)
def verify_mod23_rule(p_max: int = 10_000) -> int:
    """Check tau_p_mod23 against exact tau(p) for p <= p_max; returns count checked."""
    table = tau_table(p_max)
    count = 0
    for p in primes_up_to(p_max):
        if p == 23:
            continue
        if (table[p] - tau_p_mod23(p)) % 23:
            raise CongruenceRuleError(f"mod-23 class rule fails at p={p}")
        count += 1
    return count


def _tau23_power(d: int) -> int:
    return tau_prime_power(tau_table(23)[23], 23, d - 1)


@dataclass
class SieveVerdict:
    value: int
    d: int
    passed: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def sieve_prime_power_target(a: int, d: int) -> SieveVerdict:
    """Can tau(p^(d-1)) = a for some prime p, as far as the residue tables see?"""
    if a == 0 or d < 2:
        raise ValueError("need a != 0 and d >= 2")
    verdict = SieveVerdict(a, d, True)
    for m in (3, 4, 5, 7):
        allowed = allowed_residues(d, m)
        if a % m not in allowed:
            verdict.passed = False
            verdict.reasons.append(f"mod {m}: {a % m} not in {sorted(allowed)}")
    allowed = allowed_residues(d, 23)
    if a % 23 not in allowed:
        # Only p = 23 can escape the table; its value is known exactly.
        if a == _tau23_power(d):
            verdict.reasons.append("mod 23: realized exactly by p = 23")
        else:
            verdict.passed = False
            verdict.reasons.append(
                f"mod 23: {a % 23} not in {sorted(allowed)} and tau(23^{d - 1}) != {a}"
            )
    return verdict


@dataclass(frozen=True)
class Survivor:
    eps: int
    ell: int
    d: int


def d_candidates(ell: int) -> list[int]:
    """Odd primes d dividing ell^2 - 1 (d = ell already removed by the rank bound)."""
    n = ell * ell - 1
    return [d for d in primes_up_to(ell + 1) if d > 2 and n % d == 0]


def reproduce_survivors_theorem1(
    ell_max: int = 1000, ell_min: int = 252, eps_values=(1, -1)
) -> list[Survivor]:
    """(eps, ell, d) with tau(p^(d-1)) = eps*ell not ruled out by the residue tables."""
    table = tau_table(ell_max)
    out = []
    for eps in eps_values:
        for ell in primes_up_to(ell_max - 1):
            if ell <= ell_min or ell == 2 or not is_ordinary(ell, table):
                continue
            for d in d_candidates(ell):
                if sieve_prime_power_target(eps * ell, d):
                    out.append(Survivor(eps, ell, d))
    return out


def reproduce_L_sets(t: int, eps: int, ell_max: int = 1000, t2_floor: int | None = 100) -> list[int]:
    """Odd primes ell < ell_max with eps*t*ell a congruence-consistent value of tau(p).

    ``t2_floor`` drops ell <= floor when t = 2 (those values are excluded by
    earlier work); pass None to scan the whole range.
    """
    if t not in (1, 2, 4, 8) or eps not in (1, -1):
        raise ValueError("t must be 1, 2, 4 or 8 and eps +-1")
    out = []
    for ell in primes_up_to(ell_max - 1):
        if ell == 2:
            continue
        if t == 2 and t2_floor is not None and ell <= t2_floor:
            continue
        if sieve_prime_power_target(eps * t * ell, 2):
            out.append(ell)
    return out


def tau_p_residues(p: int) -> dict[int, int]:
    """tau(p) mod 3, 4, 5, 7 from the divisor-sum formulas (sigma of a prime)."""
    return {3: p * p * (1 + p) % 3, 4: p**3 * (1 + p) % 4, 5: p * (1 + p) % 5, 7: p * (1 + p**3) % 7}


@dataclass
class AdmissibilityReport:
    target: tuple[int, int, int]
    p: int | None
    verdicts: dict[int, bool]
    detail: dict[int, str]

    @property
    def overall(self) -> bool:
        return all(self.verdicts.values())


def admissible_prime(p: int, target: tuple[int, int, int]) -> AdmissibilityReport:
    """Whether tau(p) = eps*t*ell is consistent with the congruences at this p."""
    eps, t, ell = target
    value = eps * t * ell
    verify_mod23_rule()
    verdicts, detail = {}, {}
    for m, r in tau_p_residues(p).items():
        verdicts[m] = value % m == r
        detail[m] = f"tau(p) = {r} mod {m}, target = {value % m}"
    if p == 23:
        exact = tau_table(23)[23]
        verdicts[23] = value == exact
        detail[23] = f"tau(23) = {exact} exactly"
    else:
        cls = tau_p_mod23(p)
        verdicts[23] = (value - cls) % 23 == 0
        detail[23] = f"tau(p) = {cls} mod 23, target = {value % 23}"
    return AdmissibilityReport(target, p, verdicts, detail)


def admissible_classes(target: tuple[int, int, int]) -> dict[int, list]:
    """Residue classes of p consistent with tau(p) = eps*t*ell, per modulus.

    Mod 23 lists which of the three classes are allowed: "nonresidue",
    "a^2+23b^2" and "residue, not a^2+23b^2" (plus p = 23 if exact).
    """
    eps, t, ell = target
    value = eps * t * ell
    out: dict[int, list] = {}
    for m in (3, 4, 5, 7):
        out[m] = [r for r in range(m) if tau_p_residues(r)[m] == value % m]
    classes = []
    if value % 23 == 0:
        classes.append("nonresidue")
    if (value - 2) % 23 == 0:
        classes.append("a^2+23b^2")
    if (value + 1) % 23 == 0:
        classes.append("residue, not a^2+23b^2")
    if value == tau_table(23)[23]:
        classes.append("p = 23")
    out[23] = classes
    return out


def export_rules_json(indent: int | None = 2) -> str:
    rules = {
        str(m): [
            {"d_class": r.d_class, "allowed": [str(a) for a in r.allowed]}
            for r in residue_rules(m)
        ]
        for m in SIEVE_MODULI
    }
    rules["12"] = "CRT combination of the mod 3 and mod 4 sets"
    rules["23_p_equals_23"] = "tau(23^(d-1)) = 1 mod 23 for all d"
    return json.dumps(rules, indent=indent)


def attained_residues(table: TauTable, d: int, m: int, p_max: int) -> set[int]:
    """Residues of tau(p^(d-1)) mod m actually hit for p <= p_max (no sharpness claim)."""
    seen = set()
    for p in primes_up_to(p_max):
        seen.add(tau_prime_power(table[p] % m, p % m, d - 1) % m)
    return seen
