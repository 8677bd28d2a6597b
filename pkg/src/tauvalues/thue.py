"""Ruling out tau(p^(d-1)) = sign * ell through F_(d-1)(p^11, tau(p)^2) = sign * ell.

No Thue solver is used. An instance is *certified* when some modulus leaves
no residue pair (x, y) of the right shape with F(x, y) = target. Otherwise
a bounded search over p supplies evidence only.

Two kinds of modulus are tried:

* uncoupled moduli q, where x runs over 11th powers and y over squares mod q
  independently (only useful when 11 divides phi(q));
* coupled residue families, where tau(p) mod M is a known function of p mod M
  (the classical congruences modulo powers of 2, 3, 5, 7 and modulo 23 and
  691), so x and y are tied together through p. Each family is checked
  against exact tau values before it is trusted.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .arith import is_prime, legendre, prime_power, primes_up_to
from .diophantine import generate_fm
from .tau import tau_prime_power, tau_table

LD_PLUS = ((277, 23), (421, 7), (631, 79), (827, 23), (827, 59), (967, 7), (967, 11), (967, 23))
LD_MINUS = ((367, 23), (443, 17), (643, 23), (643, 107), (827, 59), (829, 23), (829, 83), (919, 17))

FAMILY_CHECK_P_MAX = 10_000
_PREFILTER_MOD = (1 << 61) - 1


class FamilyVerificationError(AssertionError):
    """A residue family disagreed with an exact tau value."""


@dataclass(frozen=True)
class ThueInstance:
    ell: int
    d: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")
        if self.d < 3 or self.d % 2 == 0 or not is_prime(self.d):
            raise ValueError("d must be an odd prime")
        if self.ell < 3 or not is_prime(self.ell):
            raise ValueError("ell must be an odd prime")

    @property
    def target(self) -> int:
        return self.sign * self.ell

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficients of F_(d-1): entry i multiplies X^i Y^(k-i)."""
        return _fm_coeffs(self.d - 1)

    def __str__(self) -> str:
        return f"F_{self.d - 1}(p^11, tau(p)^2) = {self.target}"


@lru_cache(maxsize=None)
def _fm_coeffs(m: int) -> tuple[int, ...]:
    return generate_fm(m)[m].coeffs


def eval_form(coeffs: Iterable[int], x, y, mod: int):
    """sum c_i x^i y^(k-i) mod ``mod``; x and y may be int64 arrays that broadcast."""
    c = [v % mod for v in coeffs]
    k = len(c) - 1
    x = np.asarray(x % mod if isinstance(x, int) else x, dtype=np.int64) % mod
    y = np.asarray(y % mod if isinstance(y, int) else y, dtype=np.int64) % mod
    ypow = [np.ones_like(y)]
    for _ in range(k):
        ypow.append(ypow[-1] * y % mod)
    acc = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    for i in range(k, -1, -1):
        acc = (acc * x + c[i] * ypow[k - i]) % mod
    return acc


# ---------------------------------------------------------------------------
# Uncoupled moduli
# ---------------------------------------------------------------------------


def _phi_prime_power(q: int) -> int:
    r, k = prime_power(q)
    return r ** (k - 1) * (r - 1)


def default_moduli(q_max: int = 5000) -> list[int]:
    """Prime powers q <= q_max with 11 | phi(q); for the rest every unit is an 11th power."""
    out = []
    for r in primes_up_to(q_max):
        q = r
        while q <= q_max:
            if _phi_prime_power(q) % 11 == 0:
                out.append(q)
            q *= r
    return sorted(out)


@lru_cache(maxsize=None)
def _power_tables(q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """11th powers of units mod q, all 11th powers mod q, and the square indicator."""
    r = np.arange(q, dtype=np.int64)
    p11 = np.ones(q, dtype=np.int64)
    for _ in range(11):
        p11 = p11 * r % q
    is_square = np.zeros(q, dtype=bool)
    is_square[r * r % q] = True
    units = np.unique(p11[np.gcd(r, q) == 1])
    return units, np.unique(p11), is_square


def _dead_prime(coeffs: tuple[int, ...], target: int, q: int) -> bool:
    """No (x, y) = (r^11, s^2) mod prime q with F(x, y) = target.

    Units x are handled through F(h, h z) = h^k F(1, z), so one pass over z
    covers every unit x at once.
    """
    c = [v % q for v in coeffs]
    k = len(c) - 1
    z = np.arange(q, dtype=np.int64)
    g = np.zeros(q, dtype=np.int64)
    for i in range(k + 1):
        g = (g * z + c[i]) % q
    units, _, is_square = _power_tables(q)
    tgt = target % q
    want = np.array([tgt * pow(int(h), -k, q) % q for h in units], dtype=np.int64)
    hit = (g[None, :] == want[:, None]) & is_square[units[:, None] * z[None, :] % q]
    if hit.any():
        return False
    # x = 0 (q = p): F(0, y) = c_0 y^k
    ys = np.flatnonzero(is_square)
    return not bool((eval_form(coeffs, 0, ys, q) == tgt).any())


def _dead_general(coeffs: tuple[int, ...], target: int, q: int) -> bool:
    _, xs, is_square = _power_tables(q)
    ys = np.flatnonzero(is_square)
    vals = eval_form(coeffs, xs[:, None], ys[None, :], q)
    return not bool((vals == target % q).any())


def uncoupled_dead(coeffs: tuple[int, ...], target: int, q: int) -> bool:
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    if is_prime(q) and q > 2:
        return _dead_prime(tuple(coeffs), target, q)
    return _dead_general(tuple(coeffs), target, q)


# ---------------------------------------------------------------------------
# Coupled residue families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidueClass:
    """Primes p = r mod ``modulus`` with r satisfying ``member``; tau(p) mod modulus in ``values(r)``."""

    label: str
    modulus: int
    member: Callable[[int], bool]
    values: Callable[[int], tuple[int, ...]]

    def pairs(self) -> set[tuple[int, int]]:
        m = self.modulus
        out = set()
        for r in range(m):
            if self.member(r):
                for t in self.values(r):
                    out.add((pow(r, 11, m), t * t % m))
        return out


@dataclass(frozen=True)
class ResidueFamily:
    name: str
    classes: tuple[ResidueClass, ...]
    # Primes not covered by any class; they are checked with exact tau values.
    exact_primes: tuple[int, ...]

    def class_of(self, p: int) -> ResidueClass | None:
        for cls in self.classes:
            if cls.member(p % cls.modulus):
                return cls
        return None


def _sigma(r: int, k: int, m: int) -> int:
    return (1 + pow(r, k, m)) % m


def _two_adic() -> ResidueFamily:
    classes = []
    for cls, k, c in ((1, 11, 1), (3, 13, 1217), (5, 12, 1537), (7, 14, 705)):
        m = 2**k
        classes.append(
            ResidueClass(
                f"p = {cls} mod 8: tau = {c} sigma_11 mod 2^{k}",
                m,
                lambda r, cls=cls: r % 8 == cls,
                lambda r, c=c, m=m: (c * _sigma(r, 11, m) % m,),
            )
        )
    return ResidueFamily("2-adic", tuple(classes), (2,))


def _three_adic() -> ResidueFamily:
    classes = []
    for cls, k in ((1, 6), (2, 7)):
        m = 3**k
        classes.append(
            ResidueClass(
                f"p = {cls} mod 3: tau = p^-610 sigma_1231 mod 3^{k}",
                m,
                lambda r, cls=cls: r % 3 == cls,
                lambda r, m=m: (pow(r, -610, m) * _sigma(r, 1231, m) % m,),
            )
        )
    return ResidueFamily("3-adic", tuple(classes), (3,))


def _five_adic() -> ResidueFamily:
    cls = ResidueClass(
        "p != 5: tau = p^-30 sigma_71 mod 5^3",
        125,
        lambda r: r % 5 != 0,
        lambda r: (pow(r, -30, 125) * _sigma(r, 71, 125) % 125,),
    )
    return ResidueFamily("5-adic", (cls,), (5,))


def _seven_adic() -> ResidueFamily:
    c7 = ResidueClass(
        "p = 0, 1, 2, 4 mod 7: tau = p sigma_9 mod 7",
        7,
        lambda r: r in (1, 2, 4),
        lambda r: (r * _sigma(r, 9, 7) % 7,),
    )
    c49 = ResidueClass(
        "p = 3, 5, 6 mod 7: tau = p sigma_9 mod 7^2",
        49,
        lambda r: r % 7 in (3, 5, 6),
        lambda r: (r * _sigma(r, 9, 49) % 49,),
    )
    return ResidueFamily("7-adic", (c7, c49), (7,))


def _mod23() -> ResidueFamily:
    c = ResidueClass(
        "tau = 0 for nonresidues, 2 or -1 for residues mod 23",
        23,
        lambda r: r != 0,
        lambda r: (0,) if legendre(r, 23) == -1 else (2, 22),
    )
    return ResidueFamily("mod 23", (c,), (23,))


def _mod691() -> ResidueFamily:
    c = ResidueClass("tau = sigma_11 mod 691", 691, lambda r: True, lambda r: (_sigma(r, 11, 691),))
    return ResidueFamily("mod 691", (c,), ())


def coupled_families() -> list[ResidueFamily]:
    return [_two_adic(), _three_adic(), _five_adic(), _seven_adic(), _mod23(), _mod691()]


@lru_cache(maxsize=None)
def verify_families(p_max: int = FAMILY_CHECK_P_MAX) -> int:
    """Check every family against exact tau(p), p <= p_max; returns the number of checks."""
    table = tau_table(p_max)
    n = 0
    for fam in coupled_families():
        for p in primes_up_to(p_max):
            if p in fam.exact_primes:
                continue
            cls = fam.class_of(p)
            if cls is None:
                raise FamilyVerificationError(f"{fam.name}: p = {p} falls in no class")
            m = cls.modulus
            if table[p] % m not in cls.values(p % m):
                raise FamilyVerificationError(f"{fam.name}: fails at p = {p} ({cls.label})")
            n += 1
    return n


@lru_cache(maxsize=None)
def _family_pairs(name: str) -> tuple[tuple[int, np.ndarray, np.ndarray], ...]:
    fam = next(f for f in coupled_families() if f.name == name)
    out = []
    for cls in fam.classes:
        pairs = sorted(cls.pairs())
        xs = np.array([x for x, _ in pairs], dtype=np.int64)
        ys = np.array([y for _, y in pairs], dtype=np.int64)
        out.append((cls.modulus, xs, ys))
    return tuple(out)


def _exact_value(p: int, d: int) -> int:
    return tau_prime_power(tau_table(p)[p], p, d - 1)


def family_dead(fam: ResidueFamily, inst: ThueInstance) -> bool:
    """True iff no prime p is consistent with the family and the instance."""
    for m, xs, ys in _family_pairs(fam.name):
        if (eval_form(inst.coeffs, xs, ys, m) == inst.target % m).any():
            return False
    return all(_exact_value(p, inst.d) != inst.target for p in fam.exact_primes)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class SieveCertificate:
    instance: ThueInstance
    status: str  # "excluded" | "inconclusive"
    witness: str | None
    moduli_tried: list[int] = field(default_factory=list)
    families_tried: list[str] = field(default_factory=list)
    transcript_hash: str = ""

    @property
    def excluded(self) -> bool:
        return self.status == "excluded"

    def to_dict(self) -> dict:
        return {
            "instance": {"ell": self.instance.ell, "d": self.instance.d, "sign": self.instance.sign},
            "status": self.status,
            "witness": self.witness,
            "moduli_tried": self.moduli_tried,
            "families_tried": self.families_tried,
            "transcript_hash": self.transcript_hash,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SieveCertificate":
        return cls(
            ThueInstance(**data["instance"]),
            data["status"],
            data["witness"],
            list(data["moduli_tried"]),
            list(data["families_tried"]),
            data["transcript_hash"],
        )


def modular_exclusion(
    inst: ThueInstance, moduli: list[int] | None = None, coupled: bool = True
) -> SieveCertificate:
    """Look for a modulus with no admissible residue pair.

    Moduli are tried one at a time. For pairwise coprime moduli the residue
    pairs mod q1*q2 are the product of those mod q1 and mod q2, so a CRT
    combination is empty exactly when one factor is; pairs add nothing.
    """
    moduli = default_moduli() if moduli is None else list(moduli)
    transcript = [str(inst)]
    tried_q: list[int] = []
    tried_f: list[str] = []
    witness = None
    if coupled:
        verify_families()
        for fam in coupled_families():
            tried_f.append(fam.name)
            dead = family_dead(fam, inst)
            transcript.append(f"family {fam.name}: {'dead' if dead else 'alive'}")
            if dead:
                witness = f"family {fam.name}"
                break
    if witness is None:
        for q in moduli:
            tried_q.append(q)
            dead = uncoupled_dead(inst.coeffs, inst.target, q)
            transcript.append(f"q={q}: {'dead' if dead else 'alive'}")
            if dead:
                witness = f"q={q}"
                break
    digest = hashlib.sha256("\n".join(transcript).encode()).hexdigest()
    status = "excluded" if witness else "inconclusive"
    return SieveCertificate(inst, status, witness, tried_q, tried_f, digest)


def bounded_search(inst: ThueInstance, p_max: int) -> list[int]:
    """Primes p <= p_max with tau(p^(d-1)) = target, by the Hecke recurrence."""
    if p_max < 2:
        return []
    table = tau_table(p_max)
    m = _PREFILTER_MOD
    tgt = inst.target % m
    out = []
    for p in primes_up_to(p_max):
        if tau_prime_power(table[p] % m, p, inst.d - 1) % m != tgt:
            continue
        if tau_prime_power(table[p], p, inst.d - 1) == inst.target:
            out.append(p)
    return out


@dataclass
class InstanceReport:
    certificate: SieveCertificate
    search_p_max: int
    solutions: list[int]

    @property
    def status(self) -> str:
        if self.solutions:
            return "solution-found"
        return "certificate" if self.certificate.excluded else "evidence-only"

    def to_dict(self) -> dict:
        return {
            "certificate": self.certificate.to_dict(),
            "search_p_max": self.search_p_max,
            "solutions": self.solutions,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceReport":
        return cls(SieveCertificate.from_dict(data["certificate"]), data["search_p_max"], list(data["solutions"]))


@dataclass
class LDReport:
    instances: list[InstanceReport]

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps([r.to_dict() for r in self.instances], indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "LDReport":
        return cls([InstanceReport.from_dict(d) for d in json.loads(text)])

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.instances:
            out[r.status] = out.get(r.status, 0) + 1
        return out


def check_instance(inst: ThueInstance, p_max: int = 10_000, moduli: list[int] | None = None) -> InstanceReport:
    return InstanceReport(modular_exclusion(inst, moduli), p_max, bounded_search(inst, p_max))


def verify_LD_lists(p_max: int = 10_000, moduli: list[int] | None = None) -> LDReport:
    reports = []
    for sign, pairs in ((1, LD_PLUS), (-1, LD_MINUS)):
        for ell, d in pairs:
            reports.append(check_instance(ThueInstance(ell, d, sign), p_max, moduli))
    return LDReport(reports)
