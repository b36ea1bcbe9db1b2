"""Command-line front end.

Exit codes of ``check`` and ``oracle``: 0 equivalent, 1 non-equivalent.
Every subcommand returns 2 on usage or parse errors and 3 on numeric failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .bench import ERROR_KINDS, PATTERNS, BenchSpec, generate_two_local, inject_error, rewrite_to_heron, run_scaling_study
from .checker import CheckConfig, check_equivalence
from .circuit import Circuit
from .oracle import MAX_DENSE_QUBITS, oracle_equivalent
from .qasm import QasmError, emit_qasm, load_qasm
from .tensor import NumericError

EXIT_EQUIVALENT = 0
EXIT_NON_EQUIVALENT = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _read(path: str) -> Circuit:
    try:
        return load_qasm(path)
    except QasmError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from exc


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _config(args: argparse.Namespace) -> CheckConfig:
    try:
        return CheckConfig(
            svd_threshold=args.svd_threshold,
            trace_tolerance=args.tolerance,
            max_bond=args.max_bond,
            early_stop=not args.no_early_stop,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_check(args: argparse.Namespace) -> int:
    cfg = _config(args)
    g, g_prime = _read(args.circuit1), _read(args.circuit2)
    if g.num_qubits != g_prime.num_qubits:
        raise UsageError(f"qubit count mismatch: {g.num_qubits} vs {g_prime.num_qubits}")
    if args.oracle and g.num_qubits > MAX_DENSE_QUBITS:
        raise UsageError(f"--oracle supports at most {MAX_DENSE_QUBITS} qubits")

    report = check_equivalence(g, g_prime, cfg)
    out = report.to_dict()
    if args.oracle:
        ok, phase = oracle_equivalent(g, g_prime)
        out["oracle"] = {"equivalent": ok, "phase": phase, "agreement": ok == report.equivalent}

    if args.json:
        print(json.dumps(out, indent=2))
    else:
        r = report.trace_ratio
        print(f"verdict: {report.verdict}")
        print(f"trace ratio: {r.real:.15g}{r.imag:+.15g}j (|.| = {abs(r):.15g})")
        print(f"max bond: {report.max_bond_seen}, sweeps: {report.sweeps}, gates: {report.gate_applications}")
        if report.early_stopped_at is not None:
            print(f"early stop at qubit {report.early_stopped_at} (distance {report.early_stop_distance:.3g})")
        if args.oracle:
            o = out["oracle"]
            print(f"oracle: {'equivalent' if o['equivalent'] else 'non_equivalent'}, agreement: {o['agreement']}")
        print(f"time: {report.timings['total_s']:.3f} s")
    return EXIT_EQUIVALENT if report.equivalent else EXIT_NON_EQUIVALENT


def cmd_oracle(args: argparse.Namespace) -> int:
    g, g_prime = _read(args.circuit1), _read(args.circuit2)
    try:
        ok, phase = oracle_equivalent(g, g_prime, args.tolerance)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(json.dumps({"equivalent": ok, "phase": phase}))
    return EXIT_EQUIVALENT if ok else EXIT_NON_EQUIVALENT


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        c = generate_two_local(args.n, args.pattern, args.reps, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.heron:
        c = rewrite_to_heron(c)
    _write(emit_qasm(c), args.output)
    return 0


def cmd_inject(args: argparse.Namespace) -> int:
    c = _read(args.circuit)
    if args.heron:
        c = rewrite_to_heron(c)
    try:
        c = inject_error(c, args.kind, args.severity, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(emit_qasm(c), args.output)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config(args)
    try:
        grid = [
            BenchSpec(n, pattern, args.reps, args.error_kind, args.severity, cfg)
            for pattern in args.pattern
            for n in args.n
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    records = run_scaling_study(grid, args.samples, args.out, args.seed, args.jobs, args.csv)
    for r in records:
        if r["kind"] == "aggregate":
            print(
                f"{r['pattern']:>6} n={r['n']:<3} {r['verdicts']} "
                f"max_bond={r['max_bond']} mean={r['mean_ms']:.1f} ms std={r['std_ms']:.1f} ms"
            )
    return 0


def _add_check_flags(p: argparse.ArgumentParser) -> None:
    d = CheckConfig()
    p.add_argument("--svd-threshold", type=float, default=d.svd_threshold, help="relative singular value cutoff")
    p.add_argument("--tolerance", type=float, default=d.trace_tolerance, help="trace ratio tolerance eps")
    p.add_argument("--max-bond", type=_positive_int, default=None, help="hard bond dimension cap")
    p.add_argument("--no-early-stop", action="store_true", help="always sweep to the end")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpoec", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether two QASM circuits are equivalent")
    p.add_argument("circuit1")
    p.add_argument("circuit2")
    _add_check_flags(p)
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--oracle", action="store_true", help=f"also run the dense oracle (n <= {MAX_DENSE_QUBITS})")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="dense brute-force equivalence check")
    p.add_argument("circuit1")
    p.add_argument("circuit2")
    p.add_argument("--tolerance", type=float, default=1e-9, help="max-norm tolerance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="emit a seeded two-local circuit as QASM")
    p.add_argument("--n", type=int, required=True, help="number of qubits")
    p.add_argument("--pattern", choices=PATTERNS, default="linear")
    p.add_argument("--reps", type=_positive_int, default=None, help="blocks (default n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heron", action="store_true", help="rewrite into the native basis")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("inject", help="inject an error into a QASM circuit")
    p.add_argument("circuit")
    p.add_argument("--kind", choices=ERROR_KINDS, required=True)
    p.add_argument("--severity", type=float, default=0.0, help="gate count, swap count or angle offset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heron", action="store_true", help="rewrite into the native basis first")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("bench", help="run a seeded scaling study")
    p.add_argument("--n", type=int, nargs="+", required=True, help="qubit counts")
    p.add_argument("--pattern", choices=PATTERNS, nargs="+", default=["linear"])
    p.add_argument("--reps", type=_positive_int, default=None)
    p.add_argument("--error-kind", choices=ERROR_KINDS, default="none")
    p.add_argument("--severity", type=float, default=0.0)
    p.add_argument("--samples", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0, help="base seed; sample k uses seed + k")
    p.add_argument("--jobs", type=_positive_int, default=1, help="parallel worker processes")
    p.add_argument("--out", required=True, help="JSON-lines results file")
    p.add_argument("--csv", default=None, help="also write aggregate rows as CSV")
    _add_check_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
