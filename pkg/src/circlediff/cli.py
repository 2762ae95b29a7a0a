"""Command-line front end.

Every subcommand reads JSON inputs (series, diffeomorphisms or fields) and
writes JSON or CSV to ``--out`` or standard output.  Exit status: 0 on
success, 2 when a computation leaves its mathematical domain (chart overflow,
antipodal pair, pole), 1 for usage and input errors.
"""

import argparse
import io
import sys
from dataclasses import dataclass

from . import jsonio
from .diffeo import CircleDiffeo, RealCircleFunction, chart_out, compose, grid_size, invert, mu
from .errors import CircleDiffError
from .flow import TimeDependentField, ball_certificate, bracket, evol, exp, integrate_flow, lipschitz_probe
from .laurent import DEFAULT_DEGREE
from .obstruction import PoleObstruction, divergence_scan, obstruction_report, write_scan_csv
from .silva import compactness_table, write_compactness_csv

SUBCOMMANDS = ("compose", "invert", "mu", "flow", "evol", "exp", "bracket", "certify", "lipschitz",
               "silva-diag", "obstruction")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    degree: int = DEFAULT_DEGREE
    grid: int = 0
    step: float = 1e-3
    tolerance: float = 1e-3

    def __post_init__(self):
        if self.degree < 0:
            raise UsageError("--degree must be non-negative")
        if self.grid == 0:
            object.__setattr__(self, "grid", grid_size(self.degree))
        if self.grid < 2 * (2 * self.degree + 1):
            raise UsageError(f"--grid must be at least 2(2K+1) = {2 * (2 * self.degree + 1)}")
        if not 0 < self.step <= 0.1:
            raise UsageError("--step must lie in (0, 0.1]")
        if not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="truncation degree K")
    common.add_argument("--grid", type=int, default=0, help="circle samples (default 4(2K+1))")
    common.add_argument("--step", type=float, default=1e-3, help="RK4 step")
    common.add_argument("--tolerance", type=float, default=1e-3)
    common.add_argument("--level", type=int, default=None, help="annulus level n")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = _Parser(prog="circlediff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, nargs, help_ in [
        ("compose", 2, "compose two diffeomorphisms (a o b)"),
        ("invert", 1, "invert a diffeomorphism"),
        ("mu", 2, "chart transport eta1 o E(eta2)"),
        ("flow", 1, "integrate a time-dependent field (trajectory)"),
        ("evol", 1, "time-one evolution of a field"),
        ("exp", 1, "exponential of a vector field"),
        ("bracket", 2, "Lie algebra bracket of two fields"),
        ("certify", 1, "ball certificate of a field"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("inputs", nargs=nargs, metavar="JSON")
        if name == "flow":
            p.add_argument("--record-every", type=int, default=1)

    p = sub.add_parser("lipschitz", parents=[common], help="empirical Lipschitz constant of evol")
    p.add_argument("inputs", nargs="+", metavar="JSON", help="center field, then perturbations")

    p = sub.add_parser("silva-diag", parents=[common], help="bonding-map norm ratios")
    p.add_argument("--k-max", type=int, default=32)
    p.add_argument("--n-max", type=int, default=8)

    p = sub.add_parser("obstruction", parents=[common], help="non-analyticity report")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--r", type=float, default=None, help="scale (default: normalise to 1/(4n))")
    p.add_argument("--K", type=int, default=64, help="Taylor coefficients for the radius estimate")
    p.add_argument("--sweep-r", type=_floats, default=[1e-1, 1e-3, 1e-5])
    p.add_argument("--sweep-n", type=_ints, default=[2, 4, 8])
    p.add_argument("--t-grid", type=_floats, default=None)
    return parser


def _read_json(path):
    try:
        with open(path) as fh:
            return jsonio.loads(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    except ValueError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}")


def _read_eta(path):
    data = _read_json(path)
    return RealCircleFunction.from_dict(data["eta"] if "eta" in data else data)


def _read_diffeo(path):
    data = _read_json(path)
    return CircleDiffeo.from_dict(data) if "eta" in data else chart_out(RealCircleFunction.from_dict(data))


def _read_field(path, level=None):
    data = _read_json(path)
    if level is not None:
        data = dict(data, level=level)
    return TimeDependentField.from_dict(data)


def _trajectory_csv(traj, points):
    buf = io.StringIO()
    buf.write(",".join(["t"] + [f"eta_{j}" for j in range(points)]) + "\n")
    for t, s in zip(traj.times, traj.states):
        vals = s.eta.on_grid(points)
        buf.write(",".join([f"{t:.17g}"] + [f"{v:.17g}" for v in vals]) + "\n")
    return buf.getvalue()


def _dispatch(args, cfg):
    cmd = args.command
    fmt = args.format
    kw = dict(degree=cfg.degree, points=cfg.grid)
    if cmd == "compose":
        a, b = (_read_diffeo(p) for p in args.inputs)
        return jsonio.dumps(compose(a, b, **kw).to_dict())
    if cmd == "invert":
        return jsonio.dumps(invert(_read_diffeo(args.inputs[0]), **kw).to_dict())
    if cmd == "mu":
        e1, e2 = (_read_eta(p) for p in args.inputs)
        return jsonio.dumps(mu(e1, e2, **kw).to_dict())
    if cmd == "bracket":
        X, Y = (_read_eta(p) for p in args.inputs)
        return jsonio.dumps(bracket(X, Y, degree=cfg.degree).to_dict())
    if cmd == "exp":
        return jsonio.dumps(exp(_read_eta(args.inputs[0]), cfg.step, **kw).to_dict())
    if cmd == "evol":
        field = _read_field(args.inputs[0], args.level)
        return jsonio.dumps(evol(field, cfg.step, **kw).to_dict())
    if cmd == "flow":
        field = _read_field(args.inputs[0], args.level)
        traj = integrate_flow(field, cfg.step, record_every=args.record_every, **kw)
        if fmt == "json":
            return jsonio.dumps({
                "times": list(traj.times),
                "states": [s.to_dict() for s in traj.states],
                "max_displacement": traj.max_displacement,
                "certified": traj.certified,
                "level": traj.level,
            })
        return _trajectory_csv(traj, cfg.grid)
    if cmd == "certify":
        field = _read_field(args.inputs[0])
        cert = ball_certificate(field, args.level)
        return jsonio.dumps(vars(cert))
    if cmd == "lipschitz":
        if len(args.inputs) < 2:
            raise UsageError("lipschitz needs a center field and at least one perturbation")
        fields = [_read_field(p, args.level) for p in args.inputs]
        value = lipschitz_probe(fields[0], fields[1:], cfg.step, **kw)
        return jsonio.dumps({"lipschitz": value, "perturbations": len(fields) - 1})
    if cmd == "silva-diag":
        if fmt == "json":
            rows = compactness_table(args.k_max, args.n_max)
            return jsonio.dumps([dict(zip(("k", "n", "closed_form_ratio", "measured_ratio"), r))
                                 for r in rows])
        buf = io.StringIO()
        write_compactness_csv(buf, args.k_max, args.n_max)
        return buf.getvalue()
    if cmd == "obstruction":
        n = args.level or 2
        obs = PoleObstruction.normalized(args.R, n) if args.r is None else PoleObstruction(args.R, args.r, n)
        if fmt == "csv":
            buf = io.StringIO()
            write_scan_csv(buf, divergence_scan(obs, args.t_grid))
            return buf.getvalue()
        report = obstruction_report(obs, args.sweep_r, args.sweep_n, K=args.K, t_grid=args.t_grid,
                                    degree=cfg.degree)
        return jsonio.dumps(report)
    raise UsageError(f"unknown subcommand {cmd}")


def run(argv=None):
    """Run the command line; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.degree, args.grid, args.step, args.tolerance)
        text = _dispatch(args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except CircleDiffError as exc:
        print(f"circlediff: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, TypeError) as exc:
        print(f"circlediff: invalid input: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
