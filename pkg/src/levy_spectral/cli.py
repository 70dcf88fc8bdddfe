"""Command-line interface: CSV tables of phases, eigenfunctions, densities,
hitting times and spectral transforms, plus the validation suite.

Exit codes: 0 success, 1 usage or parse error, 2 accuracy failure,
3 violated hypothesis in a command that needs it (see ``--advisory``).
"""

import argparse
import csv
import io
import sys
import warnings

import numpy as np

from .eigenfunctions import Method, compute_eigendata, eval_F
from .exceptions import (AccuracyError, AssumptionError, CapabilityError, DomainError,
                         PositivityError)
from .exponents import parse_family
from .grids import GridFunction, RealGrid
from .kernels import AssumptionWarning, hitting_prob_finite, hitting_tail, kernel_grid
from .quadrature import DEFAULT_CONFIG
from .spectral import pi_even, pi_odd
from .validation import SUITE_FAMILIES, run_checks

EXIT_OK, EXIT_USAGE, EXIT_ACCURACY, EXIT_ASSUMPTION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(v):
    return repr(float(v))


def _table(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v) for v in row])
    return buf.getvalue()


def _grid(text, name):
    if text is None:
        raise DomainError(f"--{name} is required")
    return RealGrid.parse(text)


def _config(args):
    cfg = DEFAULT_CONFIG
    if args.abs_tol is not None or args.rel_tol is not None:
        cfg = cfg.with_tolerances(args.abs_tol, args.rel_tol)
    return cfg


def cmd_theta(args, exp, cfg):
    lam = _grid(args.lam, "lambda").points
    rows = []
    for l in lam:
        e = compute_eigendata(exp, l, cfg)
        rows.append((l, e.K, e.theta))
    return _table(["lambda", "K", "theta"], rows)


def cmd_eigfun(args, exp, cfg):
    lam = _grid(args.lam, "lambda").points
    if lam.size != 1:
        raise DomainError("eigfun takes a single --lambda value")
    method = None if args.method == "auto" else Method(args.method)
    prof = eval_F(exp, compute_eigendata(exp, lam[0], cfg), _grid(args.x, "x"), cfg, method)
    rows = zip(prof.x_grid.points, prof.F_values, prof.G_values, prof.sine_envelope)
    return _table(["x", "F", "G", "sine_envelope"], rows)


def cmd_density(args, exp, cfg):
    ts = _grid(args.t, "t").points
    xs, ys = _grid(args.x, "x"), _grid(args.y, "y")
    rows = []
    for t in ts:
        kg = kernel_grid(exp, t, xs, ys, cfg, advisory=args.advisory)
        for i, x in enumerate(xs.points):
            for j, y in enumerate(ys.points):
                rows.append((t, x, y, kg.values[i, j], kg.free_values[i, j]))
    return _table(["t", "x", "y", "p_killed", "p_free"], rows)


def cmd_hitting(args, exp, cfg):
    ts = _grid(args.t, "t").points
    rows = []
    for x in _grid(args.x, "x").points:
        if x == 0:
            rows += [(t, x, 0.0, 1.0) for t in ts]
            continue
        tail = np.atleast_1d(hitting_tail(exp, ts, x, cfg, advisory=args.advisory))
        prob = hitting_prob_finite(exp, x, cfg)
        rows += [(t, x, v, prob) for t, v in zip(ts, tail)]
    return _table(["t", "x", "tail", "prob_finite"], rows)


_TEST_FUNCTIONS = {
    "exp": lambda x, p: np.exp(-p.get("xi", 1.0) * np.abs(x)),
    "signexp": lambda x, p: np.sign(x) * np.exp(-p.get("xi", 1.0) * np.abs(x)),
    "ramp": lambda x, p: np.where(np.abs(x) <= p.get("width", 1.0), x, 0.0),
    "bump": lambda x, p: _bump(x, p.get("center", 1.5), p.get("width", 1.0)),
}


def _bump(x, center, width):
    u = (np.asarray(x) - center) / width
    inside = np.abs(u) < 1
    out = np.zeros_like(u, dtype=float)
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def _test_function(text):
    name, _, rest = text.partition(":")
    if name not in _TEST_FUNCTIONS:
        raise DomainError(f"unknown test function {name!r}; expected one of {sorted(_TEST_FUNCTIONS)}")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise DomainError(f"bad parameter {item!r}") from None
        if not eq:
            raise DomainError(f"bad parameter {item!r}")
    return lambda x: _TEST_FUNCTIONS[name](x, params)


def cmd_transform(args, exp, cfg):
    lam = _grid(args.lam, "lambda")
    xs = RealGrid.parse(args.x or "-40:40:40001")
    f = GridFunction(xs, _test_function(args.f)(xs.points))
    even = pi_even(exp, f, lam, cfg)
    odd = pi_odd(f, lam, cfg)
    return _table(["lambda", "even", "odd"], zip(lam.points, even, odd))


def cmd_validate(args, cfg):
    families = SUITE_FAMILIES if args.family == "all" else (parse_family(args.family),)
    lines, failed = [], False
    for exp in families:
        for check in run_checks(exp, cfg):
            lines.append(f"{exp}\t{check.line()}")
            failed |= check.status == "FAIL"
    lines.append("RESULT " + ("FAIL" if failed else "PASS"))
    return "\n".join(lines) + "\n", EXIT_ACCURACY if failed else EXIT_OK


def build_parser():
    parser = _Parser(prog="levy-spectral", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *flags):
        p.add_argument("family", help="e.g. stable:alpha=1.5, mix:alpha=0.5,beta=1, rel:alpha=1.5,m=1, "
                                      "trunc:alpha=1.5,c=1, bmpoisson:rate=9")
        for flag in flags:
            dest = "lam" if flag == "lambda" else flag
            p.add_argument(f"--{flag}", dest=dest, help="grid min:max:count[:log] or a single value")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--abs-tol", type=float)
        p.add_argument("--rel-tol", type=float)
        p.add_argument("--advisory", action="store_true",
                       help="warn instead of failing when the concavity hypothesis does not hold")
        return p

    common(sub.add_parser("theta", help="phase shifts K_λ and θ_λ"), "lambda")
    eig = common(sub.add_parser("eigfun", help="eigenfunction profile F_λ, G_λ"), "lambda", "x")
    eig.add_argument("--method", choices=["auto", Method.FOURIER.value, Method.LAPLACE.value], default="auto")
    common(sub.add_parser("density", help="killed and free transition densities"), "t", "x", "y")
    common(sub.add_parser("hitting", help="P_x(t < τ₀ < ∞) and P_x(τ₀ < ∞)"), "t", "x")
    tr = common(sub.add_parser("transform", help="spectral transform of a test function"), "lambda", "x", "xi")
    tr.add_argument("--f", default="exp", help="exp[:xi=…], signexp[:xi=…], ramp[:width=…], bump[:center=…,width=…]")
    val = sub.add_parser("validate", help="run the self-checks")
    val.add_argument("family", help="a family spec or 'all'")
    val.add_argument("--out")
    val.add_argument("--abs-tol", type=float)
    val.add_argument("--rel-tol", type=float)
    val.add_argument("--advisory", action="store_true")
    return parser


_COMMANDS = {"theta": cmd_theta, "eigfun": cmd_eigfun, "density": cmd_density,
             "hitting": cmd_hitting, "transform": cmd_transform}


def _run(args):
    cfg = _config(args)
    if args.command == "validate":
        return cmd_validate(args, cfg)
    exp = parse_family(args.family)
    if args.command == "transform" and args.xi is not None and args.f == "exp":
        args.f = f"exp:xi={float(args.xi)}"
    return _COMMANDS[args.command](args, exp, cfg), EXIT_OK


_GRID_FLAGS = ("--lambda", "--x", "--y", "--t", "--xi")


def _join_grid_values(argv):
    """Turn ``--x -2:2:5`` into ``--x=-2:2:5`` so negative grids are not read as options."""
    out, it = [], iter(argv)
    for token in it:
        if token in _GRID_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_grid_values(argv))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", AssumptionWarning)
            text, code = _run(args)
    except AssumptionError as exc:
        print(f"assumption violated: {exc} (rerun with --advisory to proceed)", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (AccuracyError, PositivityError) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (DomainError, CapabilityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
