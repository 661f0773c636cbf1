"""Command-line interface: solve, generate, verify, order.

Exit codes: 0 success, 1 non-convergence (max_iterations / diverged or a
failed verification), 2 input or schema error, 3 internal numeric error
(collision / non-finite values).
"""

import argparse
import sys
from importlib import resources
from pathlib import Path

from mpmath import mp

from .convergence import ConvergenceParams, check_conditions, estimate_order
from .errors import (
    InsufficientDataError,
    InvalidConfigurationError,
    MultirootsError,
    SchemaError,
)
from .polynomials import (
    ALGEBRAIC,
    FAMILIES,
    TRIGONOMETRIC,
    FactoredForm,
    RootConfiguration,
    expand_from_roots,
)
from .precision import eps, format_real, parse_real, working
from .report_io import (
    Problem,
    load_problem,
    load_report,
    save_problem,
    save_report,
)
from .solver import (
    COLLISION,
    CONVERGED,
    DIVERGED,
    MAX_ITERATIONS,
    NONFINITE,
    SolveSettings,
    TraceEntry,
    order_error_sequence,
    solve,
)
from .verification import verify_roots

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_TERMINATION_EXIT = {
    CONVERGED: EXIT_OK,
    MAX_ITERATIONS: EXIT_NOT_CONVERGED,
    DIVERGED: EXIT_NOT_CONVERGED,
    COLLISION: EXIT_NUMERIC,
    NONFINITE: EXIT_NUMERIC,
}


def _bundled_names():
    return sorted(
        p.name[:-5] for p in resources.files("multiroots.problems").iterdir()
        if p.name.endswith(".json")
    )


def _resolve_problem_path(spec_arg):
    path = Path(spec_arg)
    if path.exists():
        return path
    candidate = resources.files("multiroots.problems") / f"{spec_arg}.json"
    if candidate.is_file():
        return candidate
    raise SchemaError(
        f"no such file, and no bundled problem named {spec_arg!r} "
        f"(bundled: {', '.join(_bundled_names())})"
    )


def _apply_overrides(problem, args):
    kwargs = {
        "precision_bits": problem.settings.precision_bits,
        "max_iterations": problem.settings.max_iterations,
        "correction_tolerance": problem.settings.correction_tolerance,
        "sweep_mode": problem.settings.sweep_mode,
    }
    if args.max_iterations is not None:
        kwargs["max_iterations"] = args.max_iterations
    if args.tolerance is not None:
        kwargs["correction_tolerance"] = parse_real(
            args.tolerance, kwargs["precision_bits"])
    if args.sweep is not None:
        kwargs["sweep_mode"] = args.sweep
    problem.settings = SolveSettings(**kwargs)


def _condition_params(problem, args):
    truth = problem.truth()
    if truth is None:
        raise SchemaError(
            "--theorems needs the true root configuration; the problem file "
            "carries neither roots nor true_roots"
        )
    if args.c is None or args.q is None:
        raise SchemaError("--theorems requires --c and --q")
    if (args.kappa is not None) != (problem.family == TRIGONOMETRIC):
        raise SchemaError(
            "--kappa is required for trigonometric problems and "
            "disallowed otherwise"
        )
    return ConvergenceParams(
        family=problem.family, c=args.c, q=args.q, roots=truth,
        multiplicities=problem.multiplicities, kappa=args.kappa,
        precision_bits=problem.precision_bits,
    )


def _cmd_solve(args):
    problem = load_problem(_resolve_problem_path(args.problem),
                           precision_override=args.precision_bits)
    _apply_overrides(problem, args)
    verdict = None
    if args.theorems:
        verdict = check_conditions(_condition_params(problem, args))

    poly = problem.polynomial()
    report = solve(poly, problem.multiplicities, problem.initial,
                   settings=problem.settings, true_roots=problem.truth())

    bits = problem.precision_bits
    print(f"problem: {problem.label or args.problem}  family: {problem.family}  "
          f"precision: {bits} bits  sweep: {problem.settings.sweep_mode}")
    for entry in report.trace:
        parts = [f"k={entry.k}"]
        if entry.corrections is not None:
            parts.append(f"max correction={mp.nstr(max(entry.corrections), 6)}")
        if entry.errors is not None:
            parts.append(f"max error={mp.nstr(max(entry.errors), 6)}")
        print("  " + "  ".join(parts))
    print(f"termination: {report.termination} "
          f"after {report.iterations_used} iterations")
    for i, v in enumerate(report.final):
        print(f"  x_{i} = {format_real(v, bits)}")
    if report.estimated_order is not None:
        print(f"estimated order: {mp.nstr(report.estimated_order, 6)}")
    if verdict is not None:
        print(str(verdict))

    output = args.output
    if output is None:
        stem = Path(args.problem).stem or "problem"
        output = Path.cwd() / f"{stem}.report.json"
    save_report(report, problem, output, verdict=verdict)
    print(f"report written to {output}")
    return _TERMINATION_EXIT[report.termination]


def _parse_roots_arg(text, bits):
    roots, mults = [], []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" in chunk:
            root_text, mult_text = chunk.rsplit(":", 1)
            mult = int(mult_text)
        else:
            root_text, mult = chunk, 1
        roots.append(parse_real(root_text, bits))
        mults.append(mult)
    if not roots:
        raise SchemaError("--roots must list at least one root[:multiplicity]")
    return roots, mults


def _default_initial(roots, mults, bits):
    # deterministic off-root guesses: alternate sides at 0.25 * min gap
    with working(bits):
        if len(roots) > 1:
            gap = min(abs(a - b) for i, a in enumerate(roots)
                      for b in roots[i + 1:])
        else:
            gap = mp.mpf(1)
        return [r + gap / 4 * (1 if i % 2 == 0 else -1)
                for i, r in enumerate(roots)]


def _cmd_generate(args):
    bits = args.precision_bits or 192
    roots, mults = _parse_roots_arg(args.roots, bits)
    cfg = RootConfiguration(roots, mults, precision_bits=bits)
    form = FactoredForm(args.family, cfg, scale=args.scale, precision_bits=bits)
    expanded = expand_from_roots(form)

    if args.initial:
        initial = [parse_real(v, bits) for v in args.initial.split(",")]
    else:
        initial = _default_initial(cfg.roots, mults, bits)
    if len(initial) != len(mults):
        raise SchemaError(
            f"{len(initial)} initial values vs {len(mults)} roots")

    if args.family == ALGEBRAIC:
        coefficients = expanded.coeffs
    elif args.family == TRIGONOMETRIC:
        coefficients = {"a0": expanded.a0, "cos": expanded.cos_coeffs,
                        "sin": expanded.sin_coeffs}
    else:
        coefficients = {"a0": expanded.a0, "ch": expanded.ch_coeffs,
                        "sh": expanded.sh_coeffs}
    problem = Problem(
        family=args.family,
        representation="coefficients",
        precision_bits=bits,
        multiplicities=tuple(mults),
        initial=tuple(initial),
        label=args.label,
        coefficients=coefficients,
        true_roots=cfg.roots,
        settings=SolveSettings(precision_bits=bits),
    )
    save_problem(problem, args.output)
    print(f"problem written to {args.output}")
    return EXIT_OK


def _cmd_verify(args):
    problem = load_problem(_resolve_problem_path(args.problem))
    report = load_report(args.report)
    if len(report["final"]) != len(problem.multiplicities):
        raise SchemaError(
            f"report has {len(report['final'])} approximations but the "
            f"problem has {len(problem.multiplicities)} roots")
    bits = problem.precision_bits
    try:
        claimed = RootConfiguration(report["final"], problem.multiplicities,
                                    precision_bits=bits)
    except InvalidConfigurationError as exc:
        raise SchemaError(f"reported approximations are not a valid "
                          f"root configuration: {exc}")
    outcome = verify_roots(problem.polynomial(), claimed, args.tolerance,
                           bits=bits)
    print(str(outcome))
    return EXIT_OK if outcome.passed else EXIT_NOT_CONVERGED


def _cmd_order(args):
    report = load_report(args.report)
    bits = report["precision_bits"]
    trace = tuple(
        TraceEntry(e["k"], e["approximations"], e["residuals"],
                   e["corrections"], e["errors"])
        for e in report["trace"]
    )
    sequence, kind = order_error_sequence(trace)
    scale = max([mp.mpf(1)] + [abs(v) for v in report["final"]])
    floor = mp.mpf(2) ** 8 * eps(bits) * scale
    try:
        estimate = estimate_order(sequence, floor=floor)
    except InsufficientDataError as exc:
        print(f"order: insufficient data ({exc})", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    print(f"sequence: {kind}, window entries "
          f"{estimate.window[0]}..{estimate.window[1]}")
    print("per-step orders: "
          + ", ".join(mp.nstr(p, 6) for p in estimate.per_step_orders))
    print(f"estimated order: {mp.nstr(estimate.order, 6)}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="multiroots",
        description="Simultaneous refinement of all roots (with known "
                    "multiplicities) of algebraic, trigonometric and "
                    "exponential polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("problem",
                         help="problem file path or bundled name "
                              "(example1, example2, example3)")
    p_solve.add_argument("-o", "--output", default=None,
                         help="report file path (default: <stem>.report.json)")
    p_solve.add_argument("--precision-bits", type=int, default=None)
    p_solve.add_argument("--max-iterations", type=int, default=None)
    p_solve.add_argument("--tolerance", default=None,
                         help="correction tolerance (decimal string)")
    p_solve.add_argument("--sweep", choices=["simultaneous", "sequential"],
                         default=None)
    p_solve.add_argument("--theorems", action="store_true",
                         help="also check the family's convergence condition "
                              "at --c/--q (and --kappa for trigonometric)")
    p_solve.add_argument("--c", default=None)
    p_solve.add_argument("--q", default=None)
    p_solve.add_argument("--kappa", default=None)
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("generate",
                           help="expand roots into a coefficient-form problem")
    p_gen.add_argument("--family", choices=list(FAMILIES), required=True)
    p_gen.add_argument("--roots", required=True,
                       help="comma-separated root:multiplicity pairs, "
                            "e.g. '2:2,3:3,5:1'")
    p_gen.add_argument("--initial", default=None,
                       help="comma-separated initial guesses "
                            "(default: deterministic off-root offsets)")
    p_gen.add_argument("--scale", default="1")
    p_gen.add_argument("--precision-bits", type=int, default=None)
    p_gen.add_argument("--label", default="")
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=_cmd_generate)

    p_verify = sub.add_parser("verify",
                              help="check a report's roots against the problem")
    p_verify.add_argument("problem")
    p_verify.add_argument("report")
    p_verify.add_argument("--tolerance", default="1e-12")
    p_verify.set_defaults(func=_cmd_verify)

    p_order = sub.add_parser("order",
                             help="re-estimate convergence order from a report")
    p_order.add_argument("report")
    p_order.set_defaults(func=_cmd_order)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MultirootsError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
