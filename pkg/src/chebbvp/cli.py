"""Command-line front end.

Two subcommands:

    solve     solve one problem, print a JSON or CSV report, optionally
              write an SVG plot and evaluate at requested points
    converge  print a CSV error table over a ladder of point counts, with
              an optional finite-difference baseline

Exit codes: 0 success, 1 solver error (reported on stderr), 2 usage error.
"""

import argparse
import json
import sys
from xml.sax.saxutils import escape

import numpy as np

from .errors import ChebBvpError, ProblemError
from .expr import Classification, evaluate, make_problem, mentions_u, parse
from .grid import Domain
from .interp import sample_uniform
from .solve import solve_adaptive, solve_bvp_linear, solve_bvp_nonlinear, solve_fd_baseline

DEFAULT_POINTS = 10
PLOT_SAMPLES = 500
CONVERGE_SAMPLES = 200
REFERENCE_POINTS = 128
FD_LADDER = (16, 32, 64, 128, 256, 512, 1024)

SVG_WIDTH = 800
SVG_HEIGHT = 600
SVG_MARGIN = 40

_GRAMMAR_HELP = """\
expression language:
  expr   := term (('+' | '-') term)*
  term   := factor (('*' | '/') factor)*
  factor := '-' factor | base ('^' factor)?
  base   := NUMBER | 'x' | 'u' | 'pi' | 'e' | FUNC '(' expr ')'
          | 'diff' '(' 'u' (',' INT)? ')' | '(' expr ')'

  FUNC is one of exp, sin, cos, tan, log, sqrt, abs, sinh, cosh, tanh
  (a leading "math." prefix is accepted).  diff(u) means diff(u,1); the
  left-hand side must be linear in u with highest order exactly 2, e.g.
  "diff(u,2) + 2*diff(u) + 3*u".  The right-hand side may mention u itself
  (nonlinear problems) but not diff(u,k).
"""


def _fmt(value: float) -> str:
    return f"{value:.17g}"


# --- flag parsing ------------------------------------------------------------

def _domain_arg(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers: a,b")
    try:
        a, b = (float(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"could not parse {text!r} as a,b")
    if not (np.isfinite(a) and np.isfinite(b)):
        raise argparse.ArgumentTypeError("domain endpoints must be finite")
    if not a < b:
        raise argparse.ArgumentTypeError("domain endpoints must satisfy a < b")
    return (a, b)


def _bc_arg(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers: l,r")
    try:
        return tuple(float(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"could not parse {text!r} as l,r")


def _float_list_arg(text):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"could not parse {text!r} as a number list")


def _ladder_arg(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo,hi,step")
    try:
        lo, hi, step = (int(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"could not parse {text!r} as integers lo,hi,step")
    if lo < 4:
        raise argparse.ArgumentTypeError("ladder must start at 4 points or more")
    if hi < lo:
        raise argparse.ArgumentTypeError("ladder upper bound must be >= lower bound")
    if step < 1:
        raise argparse.ArgumentTypeError("ladder step must be positive")
    return (lo, hi, step)


def _add_problem_flags(sub):
    sub.add_argument("--lhs", required=True,
                     help="left-hand side, e.g. 'diff(u,2) + 2*diff(u) + 3*u'")
    sub.add_argument("--rhs", required=True,
                     help="right-hand side, e.g. 'exp(2*x)' or 'exp(2*u)'")
    sub.add_argument("--domain", type=_domain_arg, default=(-1.0, 1.0),
                     metavar="A,B", help="interval endpoints (default -1,1)")
    sub.add_argument("--bc", type=_bc_arg, default=(0.0, 0.0), metavar="L,R",
                     help="Dirichlet values at a and b, in that order (default 0,0)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chebbvp",
        description="Solve second-order two-point boundary value problems by "
                    "Chebyshev spectral collocation.",
        epilog=_GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser(
        "solve", help="solve one problem and print a report",
        epilog=_GRAMMAR_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_problem_flags(solve)
    mode = solve.add_mutually_exclusive_group()
    mode.add_argument("--n", type=int, metavar="P",
                      help=f"number of collocation points (default {DEFAULT_POINTS})")
    mode.add_argument("--precision", type=float, metavar="EPS",
                      help="pick the point count adaptively for this precision")
    solve.add_argument("--format", choices=("json", "csv"), default="json",
                       help="report format (default json)")
    solve.add_argument("--plot", metavar="PATH", help="write an SVG plot of the solution")
    solve.add_argument("--eval", type=_float_list_arg, metavar="X1,X2,...",
                       help="also evaluate the solution at these points")

    converge = commands.add_parser(
        "converge", help="print a CSV error table over a ladder of point counts",
        epilog=_GRAMMAR_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_problem_flags(converge)
    converge.add_argument("--ladder", type=_ladder_arg, default=(6, 16, 2),
                          metavar="LO,HI,STEP", help="point-count ladder (default 6,16,2)")
    converge.add_argument("--exact", metavar="EXPR",
                          help="closed-form solution to measure errors against "
                               "(default: the 128-point spectral solution)")
    converge.add_argument("--fd", action="store_true",
                          help="also tabulate the finite-difference baseline "
                               "at m = 16, 32, ..., 1024")
    return parser


# --- reports -----------------------------------------------------------------

def render_json(obj) -> str:
    """Serialize a report with every real at 17 significant digits, which
    round-trips doubles losslessly."""
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {render_json(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_report(args, mode, solution, evaluations):
    report = {
        "request": {
            "lhs": args.lhs,
            "rhs": args.rhs,
            "domain": [float(args.domain[0]), float(args.domain[1])],
            "bc": [float(args.bc[0]), float(args.bc[1])],
            "mode": mode,
        },
        "solution": {
            "nodes": [float(v) for v in solution.grid.nodes],
            "values": [float(v) for v in solution.values],
            "weights": [float(v) for v in solution.interpolant.weights],
        },
        "diagnostics": {
            "iterations": int(solution.diagnostics.iterations),
            "residual_inf": float(solution.diagnostics.residual_inf),
            "final_p": int(solution.diagnostics.final_p),
            "converged": bool(solution.diagnostics.converged),
        },
    }
    if evaluations is not None:
        report["evaluations"] = [{"x": x, "u": u} for x, u in evaluations]
    return report


def render_solution_csv(solution, evaluations) -> str:
    lines = ["x,u"]
    if evaluations is not None:
        lines += [f"{_fmt(x)},{_fmt(u)}" for x, u in evaluations]
    else:
        lines += [f"{_fmt(x)},{_fmt(u)}"
                  for x, u in zip(solution.grid.nodes, solution.values)]
    return "\n".join(lines) + "\n"


# --- SVG ---------------------------------------------------------------------

def emit_svg(samples, path, title=""):
    """Write a standalone 800x600 SVG with axis lines, min/max tick labels
    and a single solution polyline."""
    xs = np.asarray(samples[0], dtype=float)
    ys = np.asarray(samples[1], dtype=float)
    if xs.size < 2 or xs.size != ys.size:
        raise ValueError("plot needs at least two samples of matching length")
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise ValueError("plot samples must all be finite")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(_render_svg(xs, ys, title))


def _render_svg(xs, ys, title):
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    inner_w = SVG_WIDTH - 2 * SVG_MARGIN
    inner_h = SVG_HEIGHT - 2 * SVG_MARGIN

    def px(x):
        return SVG_MARGIN + inner_w * (x - x_lo) / (x_hi - x_lo)

    def py(y):
        return SVG_HEIGHT - SVG_MARGIN - inner_h * (y - y_lo) / (y_hi - y_lo)

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    heading = escape(title)
    bottom = SVG_HEIGHT - SVG_MARGIN
    right = SVG_WIDTH - SVG_MARGIN
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'  <title>{heading}</title>',
        f'  <text x="{SVG_WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{heading}</text>',
        f'  <line x1="{SVG_MARGIN}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'  <line x1="{SVG_MARGIN}" y1="{SVG_MARGIN}" x2="{SVG_MARGIN}" y2="{bottom}" stroke="black"/>',
        f'  <text x="{SVG_MARGIN}" y="{bottom + 18}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{x_lo:.6g}</text>',
        f'  <text x="{right}" y="{bottom + 18}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{x_hi:.6g}</text>',
        f'  <text x="{SVG_MARGIN - 6}" y="{bottom + 4}" text-anchor="end" '
        f'font-family="sans-serif" font-size="12">{y_lo:.6g}</text>',
        f'  <text x="{SVG_MARGIN - 6}" y="{SVG_MARGIN + 4}" text-anchor="end" '
        f'font-family="sans-serif" font-size="12">{y_hi:.6g}</text>',
        f'  <polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{points}"/>',
        '</svg>',
    ]
    return "\n".join(lines) + "\n"


# --- runners -----------------------------------------------------------------

def _run_solve(args):
    domain = Domain(*args.domain)
    problem = make_problem(args.lhs, args.rhs, domain, args.bc[0], args.bc[1])
    if args.precision is not None:
        solution = solve_adaptive(problem, args.precision)
        mode = {"precision": float(args.precision)}
    else:
        p = args.n if args.n is not None else DEFAULT_POINTS
        if problem.classification is Classification.LINEAR:
            solution = solve_bvp_linear(problem, p)
        else:
            solution = solve_bvp_nonlinear(problem, p)
        mode = {"n": int(p)}

    evaluations = None
    if args.eval is not None:
        evaluations = [(float(x), float(solution.interpolant(x))) for x in args.eval]
    if args.plot:
        xs, ys = sample_uniform(solution.interpolant, PLOT_SAMPLES, domain)
        emit_svg((xs, ys), args.plot, title=f"{args.lhs} = {args.rhs}")

    if args.format == "json":
        print(render_json(build_report(args, mode, solution, evaluations)))
    else:
        print(render_solution_csv(solution, evaluations), end="")
    return 0


def _run_converge(args):
    domain = Domain(*args.domain)
    problem = make_problem(args.lhs, args.rhs, domain, args.bc[0], args.bc[1])
    if problem.classification is not Classification.LINEAR:
        raise ProblemError("the convergence study requires a linear problem")

    xs = np.linspace(domain.a, domain.b, CONVERGE_SAMPLES)
    if args.exact:
        exact = parse(args.exact)
        if mentions_u(exact):
            raise ProblemError("--exact must be an expression in x only")
        reference = np.array([evaluate(exact, float(x)) for x in xs])
    else:
        reference = solve_bvp_linear(problem, REFERENCE_POINTS).interpolant(xs)

    rows = []
    lo, hi, step = args.ladder
    for p in range(lo, hi + 1, step):
        solution = solve_bvp_linear(problem, p)
        error = float(np.abs(solution.interpolant(xs) - reference).max())
        rows.append(("spectral", p, error))
    if args.fd:
        for m in FD_LADDER:
            solution = solve_fd_baseline(problem, m)
            # Piecewise-linear sampling: O(h^2) like the scheme itself, and
            # immune to the Runge oscillation a global polynomial through
            # equispaced points would add.
            ys = np.interp(xs, solution.grid.nodes[::-1], solution.values[::-1])
            error = float(np.abs(ys - reference).max())
            rows.append(("fd", m, error))

    print("method,points,error")
    for method, points, error in rows:
        print(f"{method},{points},{_fmt(error)}")
    return 0


_VALUE_FLAGS = {"--domain", "--bc", "--eval", "--ladder"}


def _glue_negative_values(argv):
    """Rewrite `--domain -1,1` as `--domain=-1,1` so argparse does not read
    the leading-dash value as an option."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1][:1] == "-":
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        if args.command == "solve":
            return _run_solve(args)
        return _run_converge(args)
    except (ChebBvpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))
