"""End-to-end exclusion runs for tau(n) = eps * t * ell, t in {1, 2, 4, 8}, ell an odd prime.

Verdicts:

* ``excluded``: every branch was closed by a congruence, a prior published
  bound, a Dembner-Jain certificate or a modular certificate;
* ``exceptional``: the target survives every test and is part of the final
  exceptional sets (with the shape of n it forces);
* ``evidence-only``: some branch was closed only by a bounded search.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache

from .arith import is_prime, primes_up_to, valuation
from .congruence import d_candidates, sieve_prime_power_target, Survivor
from .diophantine import dj_exclude
from .tau import is_ordinary, tau_table
from .thue import ThueInstance, check_instance

LIN_MA_BOUND = 252  # |tau(n)| > |tau(3)| = 252 whenever tau(n) is odd and n > 3
EVEN_PRIOR_BOUND = 100  # tau(n) != +-2 ell for odd primes ell < 100
# Odd primes ell with +-ell known not to be tau-values by earlier work.
KNOWN_ODD_NON_VALUES = frozenset((3, 5, 7, 13, 17, 23, 37, 691))

DEFAULTS = {"ell_max": 1000, "p_max": 5000, "n_max": 10**5, "search_p_max": 10**4}


@dataclass(frozen=True)
class ReasonStep:
    step: str
    module: str
    citation: str


@dataclass
class ExclusionReport:
    target: tuple[int, int, int]  # (eps, t, ell)
    verdict: str
    reasons: list[ReasonStep] = field(default_factory=list)
    shape: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def value(self) -> int:
        eps, t, ell = self.target
        return eps * t * ell

    def add(self, step: str, module: str, citation: str) -> None:
        self.reasons.append(ReasonStep(step, module, citation))

    def to_dict(self) -> dict:
        return asdict(self)


def _merge_verdicts(branch_verdicts: list[str]) -> str:
    for v in ("exceptional", "evidence-only"):
        if v in branch_verdicts:
            return v
    return "excluded"


# ---------------------------------------------------------------------------
# tau(n) = +-ell
# ---------------------------------------------------------------------------


@dataclass
class Theorem1Run:
    reports: list[ExclusionReport]
    survivors: list[Survivor]

    def exceptional(self, eps: int) -> list[int]:
        return [r.target[2] for r in self.reports if r.target[0] == eps and r.verdict == "exceptional"]


def _odd_target_branch(eps: int, ell: int, d: int, report: ExclusionReport, search_p_max: int, moduli) -> str:
    if d == 5:
        cert = dj_exclude(eps * ell)
        report.details[f"d={d}"] = cert.to_dict()
        report.add(f"d={d}: 11th-power Fibonacci/Lucas sieve ({cert.verdict})", "diophantine.dj_exclude", "dembner-jain")
        if cert.excluded:
            return "excluded"
        report.shape = "n = p^4"
        return "exceptional"
    rep = check_instance(ThueInstance(ell, d, eps), search_p_max, moduli)
    report.details[f"d={d}"] = rep.to_dict()
    report.add(f"d={d}: modular certificate / bounded search ({rep.status})", "thue.modular_exclusion", "thue-sieve")
    if rep.solutions:
        raise AssertionError(f"tau(p^{d - 1}) = {eps * ell} realized at p = {rep.solutions}")
    return "excluded" if rep.status == "certificate" else "evidence-only"


def theorem1_target(
    eps: int, ell: int, table=None, search_p_max: int = DEFAULTS["search_p_max"], moduli=None
) -> tuple[ExclusionReport, list[Survivor]]:
    table = table or tau_table(max(ell, 10))
    rep = ExclusionReport((eps, 1, ell), "excluded")
    if ell <= LIN_MA_BOUND:
        rep.add(f"ell <= {LIN_MA_BOUND}: odd tau-values exceed 252 in size", "pipeline", "lin-ma-bound")
        return rep, []
    if not is_ordinary(ell, table):
        rep.verdict = "evidence-only"
        rep.add("ell is non-ordinary; the rank argument does not apply", "tau.is_ordinary", "ordinary-primes")
        return rep, []
    rep.add("n = p^(d-1) with d an odd prime", "pipeline", "prime-power-reduction")
    rep.add("d | ell^2 - 1 via the rank of apparition of ell", "lucas.rank_of_apparition", "rank-of-apparition")
    survivors = [Survivor(eps, ell, d) for d in d_candidates(ell) if sieve_prime_power_target(eps * ell, d)]
    rep.details["surviving_d"] = [s.d for s in survivors]
    rep.add(f"congruence sieve leaves d in {[s.d for s in survivors]}", "congruence.sieve_prime_power_target", "residue-tables")
    if not survivors:
        return rep, []
    if ell in KNOWN_ODD_NON_VALUES:
        rep.add(f"+-{ell} is a known non-value", "pipeline", "known-non-values")
        return rep, survivors
    verdicts = [_odd_target_branch(eps, ell, s.d, rep, search_p_max, moduli) for s in survivors]
    rep.verdict = _merge_verdicts(verdicts)
    return rep, survivors


def run_theorem1(
    ell_max: int = DEFAULTS["ell_max"],
    eps_values=(1, -1),
    search_p_max: int = DEFAULTS["search_p_max"],
    moduli=None,
) -> Theorem1Run:
    table = tau_table(ell_max)
    reports, survivors = [], []
    for eps in eps_values:
        for ell in primes_up_to(ell_max - 1):
            if ell == 2:
                continue
            rep, surv = theorem1_target(eps, ell, table, search_p_max, moduli)
            reports.append(rep)
            survivors.extend(surv)
    return Theorem1Run(reports, survivors)


# ---------------------------------------------------------------------------
# tau(n) = +-t * ell, t = 2, 4, 8
# ---------------------------------------------------------------------------


def p_cubed_branch_closed(ell: int) -> bool:
    """tau(p^3) = +-4 ell forces tau(p) = 2 and eps*ell = 2 - p^11, impossible when ell < 2046."""
    return ell < 2**11 - 2


def theorem2_target(eps: int, t: int, ell: int, n_values: dict[int, list[int]] | None = None) -> ExclusionReport:
    rep = ExclusionReport((eps, t, ell), "excluded")
    if t == 2 and ell < EVEN_PRIOR_BOUND:
        rep.add(f"+-2 ell with ell < {EVEN_PRIOR_BOUND} is a known non-value", "pipeline", "even-values-prior")
        return rep
    rep.add("omega(n) >= 2 forces a prime p || n with tau(p) = 2", "pipeline", "power-of-two-values")
    rep.add("omega(n) = 1: n = p^(d-1) with d = 2 (or d = 4 when t = 4)", "lucas.is_defective", "lucas-d-restriction")
    if t == 4:
        if not p_cubed_branch_closed(ell):
            raise ValueError(f"ell = {ell} too large for the tau(p^3) argument")
        rep.add("d = 4 closed: |2 - p^11| >= 2046", "pipeline", "p-cubed-branch")
    verdict = sieve_prime_power_target(eps * t * ell, 2)
    rep.add(f"congruence sieve on tau(p) ({'passes' if verdict else 'fails'})", "congruence.sieve_prime_power_target", "ramanujan-congruences")
    if verdict:
        rep.verdict = "exceptional"
        rep.shape = f"n prime with tau(n) = {eps * t * ell}, or n has a prime p || n with tau(p) = 2"
        if n_values is not None:
            rep.details["realized_by"] = n_values.get(eps * t * ell, [])
    else:
        rep.details["sieve"] = verdict.reasons
    return rep


def _tau_value_index(n_max: int) -> dict[int, list[int]]:
    table = tau_table(n_max)
    out: dict[int, list[int]] = {}
    for n, v in table.items():
        if n > n_max:
            break
        out.setdefault(v, []).append(n)
    return out


def run_theorem2(
    t: int, ell_max: int = DEFAULTS["ell_max"], eps_values=(1, -1), n_max: int = DEFAULTS["n_max"]
) -> list[ExclusionReport]:
    if t not in (2, 4, 8):
        raise ValueError("t must be 2, 4 or 8")
    index = _tau_value_index(n_max)
    return [
        theorem2_target(eps, t, ell, index)
        for eps in eps_values
        for ell in primes_up_to(ell_max - 1)
        if ell != 2
    ]


def exceptional_sets(
    ell_max: int = DEFAULTS["ell_max"], search_p_max: int = DEFAULTS["search_p_max"]
) -> dict[tuple[int, int], list[int]]:
    """{(t, eps): sorted exceptional ell} for t in 1, 2, 4, 8."""
    return {k: list(v) for k, v in _exceptional_sets(ell_max, search_p_max)}


@lru_cache(maxsize=4)
def _exceptional_sets(ell_max: int, search_p_max: int) -> tuple:
    out: dict[tuple[int, int], list[int]] = {}
    run1 = run_theorem1(ell_max, search_p_max=search_p_max)
    for eps in (1, -1):
        out[(1, eps)] = run1.exceptional(eps)
    for t in (2, 4, 8):
        for r in run_theorem2(t, ell_max):
            eps = r.target[0]
            out.setdefault((t, eps), [])
            if r.verdict == "exceptional":
                out[(t, eps)].append(r.target[2])
    return tuple((k, tuple(v)) for k, v in out.items())


# ---------------------------------------------------------------------------
# Examples, shapes and scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FirstExample:
    sign: int
    t: int
    p: int
    ell: int

    def __str__(self) -> str:
        return f"tau({self.p}) = {'-' if self.sign < 0 else ''}{self.t} * {self.ell}"


def first_examples(p_max: int = DEFAULTS["p_max"], per_shape: int = 1) -> dict[tuple[int, int], list[FirstExample]]:
    """The first ``per_shape`` primes p with tau(p) = sign * t * ell, ell an odd prime, t = 2, 4, 8."""
    table = tau_table(p_max)
    out: dict[tuple[int, int], list[FirstExample]] = {(s, t): [] for t in (2, 4, 8) for s in (1, -1)}
    for p in primes_up_to(p_max):
        v = table[p]
        j = valuation(v, 2)
        if not 1 <= j <= 3:
            continue
        sign, t = (1 if v > 0 else -1), 2**j
        hits = out[(sign, t)]
        if len(hits) >= per_shape:
            continue
        ell = abs(v) >> j
        if ell > 2 and is_prime(ell):
            hits.append(FirstExample(sign, t, p, ell))
    return out


@dataclass(frozen=True)
class Shape:
    k: int  # number of primes with tau(p) = 2
    remainder: str
    allowed: bool

    def __str__(self) -> str:
        head = "*".join(f"p{i + 1}" for i in range(self.k))
        return f"{head}*{self.remainder}" if head else self.remainder


def classify_n_for_target(
    target: tuple[int, int, int], n_max: int = DEFAULTS["n_max"], sets: dict | None = None
) -> dict:
    """Shapes of n allowed for tau(n) = eps * t * ell and the instances with n <= n_max.

    With k primes of tau-value 2 split off, the rest has tau = eps * 2^(j-k) * ell,
    which must be p^4 with eps*ell exceptional (j = k) or a prime with ell in
    the matching exceptional set.
    """
    eps, t, ell = target
    j = valuation(t, 2)
    sets = sets or exceptional_sets()
    shapes = []
    for k in range(j + 1):
        rest = 2 ** (j - k)
        if rest == 1:
            rem = f"p{k + 1}^4 with tau = {eps * ell}"
        else:
            rem = f"p{k + 1} with tau = {eps * rest * ell}"
        shapes.append(Shape(k, rem, ell in sets.get((rest, eps), [])))
    index = _tau_value_index(n_max)
    return {
        "target": target,
        "shapes": [str(s) for s in shapes if s.allowed],
        "all_shapes": [(str(s), s.allowed) for s in shapes],
        "instances": index.get(eps * t * ell, []),
        "tau_equals_2": index.get(2, []),
        "n_max": n_max,
    }


def power_of_two_scan(n_max: int = DEFAULTS["n_max"], k_max: int = 6) -> dict[int, list[int]]:
    """n <= n_max with tau(n) = +-2^k, 1 <= k <= k_max."""
    index = _tau_value_index(n_max)
    out = {}
    for k in range(1, k_max + 1):
        for s in (1, -1):
            hits = index.get(s * 2**k, [])
            if hits:
                out[s * 2**k] = hits
    return out


def soundness_scan(reports: list[ExclusionReport], n_max: int = DEFAULTS["n_max"]) -> list[tuple[tuple[int, int, int], list[int]]]:
    """Excluded targets that are nonetheless tau-values for some n <= n_max (should be empty)."""
    index = _tau_value_index(n_max)
    return [(r.target, index[r.value]) for r in reports if r.verdict == "excluded" and r.value in index]


def reports_to_json(reports: list[ExclusionReport], indent: int | None = 2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)
