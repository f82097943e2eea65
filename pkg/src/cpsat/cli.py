"""Command-line entry point: solve, walkthrough, validate, patterns, bench."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import campaign, oracle
from .clausepoly import pattern_table
from .engine import (CertificateFailure, Mode, PrimePolicy, SolverConfig, Verdict, decide,
                     extract_certificate)
from .formula import ParseError, parse_clause_spec, parse_dimacs
from .walkthrough import run_walkthrough

SCHEMA_VERSION = 1
PATTERN_VAR_CAP = 16

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_CODES = {
    Verdict.SATISFIABLE: 10,
    Verdict.LIKELY_UNSATISFIABLE: 20,
    Verdict.INDETERMINATE: 30,
}


class UsageError(Exception):
    pass


def _env(name: str, default, convert=str):
    raw = os.environ.get(f"CPSAT_{name}")
    if raw is None or raw == "":
        return default
    try:
        return convert(raw)
    except ValueError as exc:
        raise UsageError(f"bad CPSAT_{name}={raw!r}: {exc}") from exc


def _config(args) -> SolverConfig:
    """Flags win over CPSAT_* environment variables, which win over defaults."""
    base = SolverConfig()
    mode = args.mode or _env("MODE", base.mode.value)
    policy = _env("POLICY", base.prime_policy.value)
    try:
        return SolverConfig(
            mode=Mode(mode),
            primes=args.primes if args.primes is not None else _env("PRIMES", base.primes, int),
            seed=args.seed if args.seed is not None else _env("SEED", base.seed, int),
            prime_policy=PrimePolicy(policy),
            dense_cap=_env("DENSE_CAP", base.dense_cap, int),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--primes", type=int)
    p.add_argument("--seed", type=int)


def cmd_solve(args) -> int:
    cfg = _config(args)
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        f = parse_dimacs(text)
    except ParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    decision = decide(f, cfg)
    certificate = None
    if decision.verdict is Verdict.SATISFIABLE:
        cert = extract_certificate(f, cfg, decision)
        certificate = ({"status": "failed", "reason": cert.reason, "partial": list(cert.partial)}
                       if isinstance(cert, CertificateFailure) else list(cert))
    oracle_verdict = None
    if args.with_oracle and f.num_vars <= cfg.dense_cap:
        oracle_verdict = "satisfiable" if oracle.is_satisfiable(f, cfg.dense_cap) else "unsatisfiable"
    wall = time.perf_counter() - start

    body = decision.to_dict()
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "instance": str(path),
        "variables": f.num_vars,
        "clauses": f.n,
        "config": {"mode": cfg.mode.value, "primes": cfg.primes, "seed": cfg.seed,
                   "primePolicy": cfg.prime_policy.value, "denseCap": cfg.dense_cap},
        "verdict": body["verdict"],
        "certificate": certificate,
        "evidence": body["evidence"],
        "errorBound": body["errorBoundFloat"],
        "schwartzBound": body["schwartzBound"],
        "plan": body["plan"],
        "diagnostics": body["diagnostics"],
        "oracle": oracle_verdict,
        "wallTime": round(wall, 6),
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_CODES[decision.verdict]


def cmd_walkthrough(args) -> int:
    expected = None
    if args.expect:
        try:
            expected = json.loads(Path(args.expect).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot load expectations: {exc}", file=sys.stderr)
            return EXIT_USAGE
    checks = run_walkthrough(expected, args.mod_prime)
    width = max(len(c.name) for c in checks)
    for c in checks:
        mark = "PASS" if c.ok else "FAIL"
        print(f"{mark}  {c.name:<{width}}  expected={c.expected}  actual={c.actual}  [{c.source}]")
    failures = [c for c in checks if not c.ok]
    if failures:
        print(f"{len(failures)} mismatch(es): " + "; ".join(c.name for c in failures),
              file=sys.stderr)
        return EXIT_MISMATCH
    print(f"all {len(checks)} identities hold")
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _config(args)
    if args.vars > cfg.dense_cap:
        raise UsageError(f"--vars {args.vars} exceeds the oracle cap {cfg.dense_cap}")
    if args.k > args.vars and args.trials:
        raise UsageError("--k cannot exceed --vars")
    results = campaign.run_campaign(args.vars, args.clauses, args.k, args.trials, cfg.seed, cfg,
                                    certificates=not args.no_certificates, workers=args.workers)
    sys.stdout.write(campaign.campaign_csv(results))
    summary = campaign.summarize(results, cfg)
    text = json.dumps(summary, indent=2)
    if args.summary:
        Path(args.summary).write_text(text + "\n")
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


def cmd_patterns(args) -> int:
    if not 0 < args.vars <= PATTERN_VAR_CAP:
        raise UsageError(f"--vars must lie in 1..{PATTERN_VAR_CAP}")
    try:
        clauses = [parse_clause_spec(spec, args.vars) for spec in args.clauses]
    except (ParseError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(pattern_table(clauses, args.vars))
    return EXIT_OK


def _ladder(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad ladder {text!r}") from exc
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("ladder entries must be positive")
    return values


def cmd_bench(args) -> int:
    cfg = _config(args)
    rows = campaign.run_bench(args.ladder, args.vars, cfg, k=args.k, repeats=args.repeats,
                              seed=cfg.seed)
    sys.stdout.write(campaign.bench_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpsat", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a DIMACS CNF file")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--with-oracle", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("walkthrough", help="replay the worked two-clause example")
    p.add_argument("--expect", help="JSON object overriding expected values by name")
    p.add_argument("--mod-prime", type=int, default=7)
    p.set_defaults(func=cmd_walkthrough)

    p = sub.add_parser("validate", help="compare decisions with brute force on random k-SAT")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--summary", help="write the JSON summary here instead of stderr")
    p.add_argument("--no-certificates", action="store_true")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("patterns", help="print clause indicator columns")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("clauses", nargs="+")
    p.set_defaults(func=cmd_patterns)

    p = sub.add_parser("bench", help="time decide over a ladder of clause counts")
    p.add_argument("--ladder", type=_ladder, default=[4, 8, 16, 32])
    p.add_argument("--vars", type=int, default=8)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--repeats", type=int, default=1)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.verbose:
        import logging
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
