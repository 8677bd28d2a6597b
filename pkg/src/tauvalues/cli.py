"""Command line entry point: ``tau <subcommand>``.

Exit status is 0 when everything was reproduced with certificate-grade
steps, 2 when some verdict rests on a bounded search only, and 1 on error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from .arith import factor
from .congruence import sieve_prime_power_target
from .diophantine import default_dj_pool, dj_exclude
from .lucas import make_context, primitive_prime_divisors, terms
from .tau import expand_delta, load_table, save_table
from .thue import ThueInstance, check_instance, default_moduli

log = logging.getLogger("tauvalues")

EXIT_OK, EXIT_ERROR, EXIT_EVIDENCE = 0, 1, 2


def _load_config(path: str | None) -> dict:
    cfg = dict(pipeline.DEFAULTS)
    cfg["thue_moduli"] = None
    cfg["dj_pool"] = None
    if path:
        user = json.loads(Path(path).read_text())
        unknown = set(user) - set(cfg)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(user)
    return cfg


def _pick(arg, cfg: dict, key: str):
    return cfg[key] if arg is None else arg


def cmd_compute(args, cfg) -> tuple[dict, int]:
    table = None
    if args.cache and Path(args.cache).exists():
        table = load_table(args.cache)
        if table.limit < args.n:
            log.info("cache covers %d values, recomputing to %d", table.limit, args.n)
            table = None
    if table is None:
        table = expand_delta(args.n)
        if args.cache:
            save_table(table, args.cache)
    value = table[args.n]
    print(f"tau({args.n}) = {value}")
    print(f"        = {factor(value)}" if value else "")
    return {"n": args.n, "tau": value, "table_size": table.limit}, EXIT_OK


def cmd_sieve(args, cfg) -> tuple[dict, int]:
    v = sieve_prime_power_target(args.value, args.d)
    word = "consistent with" if v.passed else "ruled out by"
    print(f"tau(p^{args.d - 1}) = {args.value} is {word} the residue tables")
    for r in v.reasons:
        print(f"  {r}")
    return {"value": args.value, "d": args.d, "passed": v.passed, "reasons": v.reasons}, EXIT_OK


def cmd_lucas(args, cfg) -> tuple[dict, int]:
    ctx = make_context(args.A, args.Q, strict=not args.loose)
    us = terms(ctx, args.n)
    print(f"A = {ctx.A}, Q = {ctx.Q}, D = {ctx.D}")
    for i, u in enumerate(us, 1):
        print(f"u_{i} = {u}")
    out = {"A": ctx.A, "Q": ctx.Q, "D": ctx.D, "terms": us}
    if args.n > 2 and us[-1] != 0:
        prim = primitive_prime_divisors(ctx, args.n)
        print(f"primitive prime divisors of u_{args.n}: {sorted(prim.primes) or 'none'}")
        if prim.unknown:
            print(f"  unfactored cofactors: {list(prim.unknown)}")
        out["primitive"] = sorted(prim.primes)
        out["unfactored"] = list(prim.unknown)
    return out, EXIT_OK


def cmd_dj(args, cfg) -> tuple[dict, int]:
    gen = tuple(args.generator) if args.generator else None
    pool = cfg["dj_pool"] or default_dj_pool()
    cert = dj_exclude(args.target, gen, pool)
    print(f"tau(p^4) = {args.target}: {cert.verdict} ({cert.reason})")
    for b in cert.branches:
        print(f"  generator {b.generator}: {'excluded' if b.excluded else 'open'} via {b.primes_used if b.excluded else '-'}")
    return cert.to_dict(), EXIT_OK if cert.excluded else EXIT_EVIDENCE


def cmd_thue(args, cfg) -> tuple[dict, int]:
    p_max = _pick(args.p_max, cfg, "search_p_max")
    moduli = cfg["thue_moduli"] or default_moduli()
    signs = [args.sign] if args.sign else [1, -1]
    out, code = [], EXIT_OK
    for s in signs:
        rep = check_instance(ThueInstance(args.ell, args.d, s), p_max, moduli)
        c = rep.certificate
        print(f"{c.instance}: {rep.status} (witness: {c.witness or 'none'}; search p <= {p_max}: {rep.solutions or 'no solution'})")
        if rep.status != "certificate":
            code = EXIT_EVIDENCE
        out.append(rep.to_dict())
    return {"instances": out}, code


def _print_reports(reports) -> int:
    code = EXIT_OK
    for r in reports:
        if r.verdict == "excluded" and not r.shape:
            continue
        eps, t, ell = r.target
        extra = f" [{r.shape}]" if r.shape else ""
        print(f"  {eps * t * ell:>7}: {r.verdict}{extra}")
        if r.verdict == "evidence-only":
            code = EXIT_EVIDENCE
    return code


def cmd_theorem1(args, cfg) -> tuple[dict, int]:
    ell_max = _pick(args.ell_max, cfg, "ell_max")
    run = pipeline.run_theorem1(ell_max, search_p_max=cfg["search_p_max"], moduli=cfg["thue_moduli"])
    print(f"tau(n) = +-ell, odd prime ell < {ell_max}; non-excluded targets:")
    code = _print_reports(run.reports)
    for eps in (1, -1):
        print(f"L_1^{'+' if eps > 0 else '-'} = {run.exceptional(eps)}")
    survivors = [(s.eps, s.ell, s.d) for s in run.survivors]
    print(f"congruence survivors (eps, ell, d): {survivors}")
    return {
        "reports": [r.to_dict() for r in run.reports],
        "survivors": survivors,
        "exceptional": {str(e): run.exceptional(e) for e in (1, -1)},
    }, code


def cmd_theorem2(args, cfg) -> tuple[dict, int]:
    ell_max = _pick(args.ell_max, cfg, "ell_max")
    reports = pipeline.run_theorem2(args.t, ell_max, n_max=cfg["n_max"])
    print(f"tau(n) = +-{args.t} ell, odd prime ell < {ell_max}; exceptional targets:")
    code = _print_reports(reports)
    sets = {}
    for eps in (1, -1):
        sets[str(eps)] = [r.target[2] for r in reports if r.target[0] == eps and r.verdict == "exceptional"]
        print(f"L_{args.t}^{'+' if eps > 0 else '-'} = {sets[str(eps)]}")
    for r in reports:
        if r.details.get("realized_by"):
            print(f"  {r.value} is realized: n = {r.details['realized_by']}")
    return {"reports": [r.to_dict() for r in reports], "exceptional": sets}, code


def cmd_examples(args, cfg) -> tuple[dict, int]:
    p_max = _pick(args.p_max, cfg, "p_max")
    ex = pipeline.first_examples(p_max, args.count)
    out = {}
    for (sign, t), hits in ex.items():
        label = f"{'+' if sign > 0 else '-'}{t}ell"
        print(f"{label:>6}: " + ("; ".join(str(h) for h in hits) or f"none with p <= {p_max}"))
        out[label] = [{"p": h.p, "ell": h.ell} for h in hits]
    return out, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tau", description="Exact tau values and exclusion of small tau-values.")
    ap.add_argument("--json", metavar="FILE", help="also write a structured report to FILE")
    ap.add_argument("--config", metavar="FILE", help="JSON file with bounds and modulus pools")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="tau(n) from the product expansion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cache", metavar="FILE")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sieve", help="congruence test for tau(p^(d-1)) = A")
    p.add_argument("--value", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("lucas", help="terms and primitive divisors of a Lucas sequence")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--loose", action="store_true", help="allow gcd(A, Q) > 1")
    p.set_defaults(func=cmd_lucas)

    p = sub.add_parser("dj", help="Fibonacci/Lucas sieve for tau(p^4) = A")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--generator", type=int, nargs=2, metavar=("U", "V"))
    p.set_defaults(func=cmd_dj)

    p = sub.add_parser("thue", help="certificate and bounded search for tau(p^(d-1)) = +-ell")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sign", type=int, choices=(1, -1))
    p.add_argument("--p-max", type=int)
    p.set_defaults(func=cmd_thue)

    p = sub.add_parser("theorem1", help="exclude tau(n) = +-ell")
    p.add_argument("--ell-max", type=int)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("theorem2", help="exclude tau(n) = +-t ell, t = 2, 4, 8")
    p.add_argument("--t", type=int, choices=(2, 4, 8), required=True)
    p.add_argument("--ell-max", type=int)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("examples", help="first primes with tau(p) = +-2ell, +-4ell, +-8ell")
    p.add_argument("--p-max", type=int)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _load_config(args.config)
        payload, code = args.func(args, cfg)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        Path(args.json).write_text(json.dumps({"command": args.command, "result": payload, "exit": code}, indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
