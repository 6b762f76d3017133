"""Batch compiler driver.

Exit codes: 0 ok, 1 usage, 2 configuration, 3 input, 4 pass failure.
"""
from __future__ import annotations

import argparse
import sys

from . import errors
from .pipeline import (
    CompileOptions,
    PASS_ORDER,
    SCHEDULE_MODES,
    compile_source,
)
from .platform import load_platform_file
from .report import report_rows
from .sim import SIM_MAX_QUBITS, simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_PASS = 4

_CONFIG_ERRORS = (
    errors.ConfigNotFound,
    errors.ParseError,
    errors.SchemaError,
    errors.ValidationError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quantcc", description="gate-level quantum circuit compiler")
    p.add_argument("--config", required=True, help="hardware configuration JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", help="program file (cQASM subset)")
    src.add_argument("--example", help="built-in example name (bell, grover-3q)")
    p.add_argument(
        "--passes",
        default=",".join(PASS_ORDER),
        help=f"comma-separated subset of {','.join(PASS_ORDER)}",
    )
    p.add_argument("--schedule", default="asap", choices=SCHEDULE_MODES,
                   help="scheduling discipline")
    p.add_argument("--resource-constrained", action="store_true",
                   help="respect the platform resource model while scheduling")
    p.add_argument("--epsilon", type=float, default=1e-9,
                   help="optimizer error budget (infidelity)")
    p.add_argument("--window", type=int, default=8, help="optimizer window size")
    p.add_argument("--out-cqasm", help="write cQASM here")
    p.add_argument("--out-timing", help="write the timing trace here")
    p.add_argument("--timing-format", default="tsv", choices=("tsv", "json"))
    p.add_argument("--report", help="write the per-pass report here (TSV + figures)")
    p.add_argument("--dump-state", action="store_true",
                   help="print the final state vector (unitary gates only)")
    return p


def _parse_passes(text: str) -> tuple[str, ...]:
    requested = [t.strip() for t in text.split(",") if t.strip()]
    for t in requested:
        if t not in PASS_ORDER:
            raise ValueError(f"unknown pass {t!r}")
    return tuple(p for p in PASS_ORDER if p in requested)


def _dump_state(result) -> None:
    n = result.program.qubit_count
    if n > SIM_MAX_QUBITS:
        print(f"# state dump skipped: {n} qubits exceeds the simulator limit")
        return
    gates = [
        g for g in result.program.all_gates()
        if g.name not in ("measure", "prepz")
    ]
    state = simulate(gates, n, platform=result.program.platform)
    for i, amp in enumerate(state):
        if abs(amp) > 1e-12:
            print(f"|{i:0{n}b}>  {amp.real:+.9f}{amp.imag:+.9f}j  p={abs(amp) ** 2:.9f}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        passes = _parse_passes(args.passes)
        options = CompileOptions(
            passes=passes,
            schedule_mode=args.schedule,
            resource_constrained=args.resource_constrained,
            epsilon=args.epsilon,
            window=args.window,
            out_cqasm=args.out_cqasm,
            out_timing=args.out_timing,
            report_path=args.report,
            timing_format=args.timing_format,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out_timing and "schedule" not in passes:
        print("error: --out-timing requires the schedule pass", file=sys.stderr)
        return EXIT_USAGE

    try:
        platform = load_platform_file(args.config)
    except _CONFIG_ERRORS as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = compile_source(
            platform, options, input_path=args.input, example=args.example
        )
    except (errors.InputError, errors.UnknownGate, errors.OperandRange,
            errors.DuplicateOperand, errors.MissingAngle) as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except errors.CompilerError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_PASS

    for line in report_rows(result):
        print(line)
    if result.placement_exact is not None:
        kind = "exact" if result.placement_exact else "heuristic"
        print(f"# placement: {kind}")
    if args.dump_state:
        _dump_state(result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
