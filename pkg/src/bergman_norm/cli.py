"""Command-line front end: ``bergman-norm {constant,certify,sweep,table,check}``.

Exit codes: 0 pass, 1 fail, 2 usage or domain error, 3 I/O error.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from .bergman_ops import ProjectionParams
from .certification import (
    certify,
    closed_constant,
    default_eps_list,
    default_radius_grid,
    divergence_probe,
    lower_bound_sweep,
    sigma_zero_factorial,
)
from .checks import SUITES, run_suite
from .errors import DomainError
from .quadrature import QuadratureConfig, worker_count

SCHEMA = "bergman-cert/1"

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Fully resolved settings of one run; embedded in JSON output."""

    command: str
    n: int | None = None
    n_range: list = field(default_factory=list)
    sigma: float | None = None
    sigma_list: list = field(default_factory=list)
    samples: int | None = None
    seed: int = 0
    eps_list: list = field(default_factory=list)
    radius_grid: list = field(default_factory=list)
    sampler: str | None = None
    suite: str | None = None
    allow_unbounded: bool = False
    output: str | None = None
    format: str = "text"

    def quadrature(self):
        return QuadratureConfig(self.samples, seed=self.seed)


def _count(text):
    """Sample count; accepts ``1000000`` or ``1e6``."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError(f"sample count must be a positive integer, got {text!r}")
    return int(value)


def _float_list(text):
    if not text.strip():
        return []
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_range(text):
    """``"1..3"``, ``"1-3"`` or ``"1,2,5"``."""
    try:
        for sep in ("..", "-"):
            if sep in text:
                lo, hi = (int(x) for x in text.split(sep))
                return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n-range {text!r}") from None


def _num(x):
    """Locale-free shortest representation that round-trips."""
    if x is None:
        return ""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _params(cfg):
    return ProjectionParams(cfg.n, cfg.sigma)


def _unbounded_message(p):
    return f"unbounded: sigma <= -(n+1) (n={p.n}, sigma={p.sigma:g}, mu={p.mu:g})"


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(cfg, payload):
    record = {"schema": SCHEMA, "config": asdict(cfg), **payload}
    record["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return json.dumps(record, indent=2, allow_nan=False) + "\n"


def cmd_constant(cfg):
    p = _params(cfg)
    if not p.bounded:
        if not cfg.allow_unbounded:
            raise DomainError(_unbounded_message(p))
        value = "unbounded"
    else:
        value = "%#.12g" % closed_constant(p)
    if cfg.format == "csv":
        _emit(_csv(["n", "sigma", "mu", "C"], [[p.n, _num(p.sigma), _num(p.mu), value]]), cfg.output)
    else:
        _emit(f"n = {p.n}\nsigma = {p.sigma:g}\nmu = {p.mu:g}\nC = {value}\n", cfg.output)
    return EXIT_PASS


def cmd_certify(cfg):
    p = _params(cfg)
    cert = certify(p, cfg.quadrature(), eps_list=cfg.eps_list, radius_grid=cfg.radius_grid, sampler=cfg.sampler)
    d = cert.to_dict()
    payload = {
        "closed_form": d["closed_form"],
        "boundary_limit": d["boundary_limit"],
        "extrapolated_limit": d["extrapolated_limit"],
        "upper": d["upper"],
        "lower": d["lower"],
        "divergence": d["divergence"],
        "checks": d["checks"],
        "errors": d["errors"],
        "verdict": d["verdict"],
        "tolerances": d["tolerances"],
    }
    _emit(_json(cfg, payload), cfg.output)
    if cfg.output not in (None, "-"):
        print(f"verdict: {cert.verdict}", file=sys.stderr)
    return EXIT_PASS if cert.passed else EXIT_FAIL


def cmd_sweep(cfg):
    p = _params(cfg)
    if p.bounded:
        points = lower_bound_sweep(p, cfg.eps_list, cfg.quadrature(), sampler=cfg.sampler)
        header = ["eps", "numeric", "std_error", "closed"]
        rows = [[_num(s.eps), _num(s.numeric), _num(s.std_error), _num(s.closed)] for s in points]
    else:
        if not cfg.allow_unbounded:
            raise DomainError(_unbounded_message(p))
        header = ["eps", "J"]
        rows = [[_num(e), _num(j)] for e, j in divergence_probe(p, cfg.eps_list)]
    if cfg.format == "json":
        _emit(_json(cfg, {"rows": [dict(zip(header, map(float, r))) for r in rows]}), cfg.output)
    else:
        _emit(_csv(header, rows), cfg.output)
    return EXIT_PASS


def cmd_table(cfg):
    if not cfg.sigma_list:
        raise UsageError("table needs a non-empty --sigma-list")
    if not cfg.n_range:
        raise UsageError("table needs a non-empty --n-range")
    header = ["n", "sigma", "mu", "C_closed", "C_sigma0_factorial_check"]
    rows = []
    for n in cfg.n_range:
        for sigma in cfg.sigma_list:
            p = ProjectionParams(n, sigma)
            if p.bounded:
                c = "%.15g" % closed_constant(p)
            elif cfg.allow_unbounded:
                c = "unbounded"
            else:
                raise DomainError(_unbounded_message(p))
            check = "%.15g" % sigma_zero_factorial(n) if sigma == 0 else ""
            rows.append([n, _num(sigma), _num(p.mu), c, check])
    if cfg.format == "json":
        _emit(_json(cfg, {"rows": [dict(zip(header, r)) for r in rows]}), cfg.output)
    else:
        _emit(_csv(header, rows), cfg.output)
    return EXIT_PASS


def cmd_check(cfg):
    results = run_suite(cfg.suite, samples=cfg.samples, seed=cfg.seed)
    failed = [r for r in results if not r.passed]
    lines = [r.line() for r in results]
    lines.append(f"{cfg.suite}: {len(results) - len(failed)}/{len(results)} passed")
    _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_PASS if not failed else EXIT_FAIL


COMMANDS = {
    "constant": cmd_constant,
    "certify": cmd_certify,
    "sweep": cmd_sweep,
    "table": cmd_table,
    "check": cmd_check,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bergman-norm",
        description="Sharp norm of the weighted Bergman projection from L1(dlambda) onto B1.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, samples=None, fmt=("text",)):
        sp.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
        sp.add_argument("--samples", "-N", type=_count, default=samples, help="Monte Carlo sample count")
        sp.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=fmt, default=fmt[0])

    def point(sp):
        sp.add_argument("--n", type=int, required=True, help="complex dimension")
        sp.add_argument("--sigma", type=float, required=True, help="weight exponent")
        sp.add_argument("--allow-unbounded", action="store_true",
                        help="report sigma <= -(n+1) instead of failing")

    sp = sub.add_parser("constant", help="closed-form norm C(n, sigma)")
    point(sp)
    common(sp, fmt=("text", "csv"))

    sp = sub.add_parser("certify", help="JSON certificate with numerical evidence")
    point(sp)
    common(sp, samples=1_000_000, fmt=("json",))
    sp.add_argument("--eps-list", type=_float_list, default=None,
                    help="comma-separated eps in (0,1); default 1-2^-k, k=1..12")
    sp.add_argument("--radius-grid", type=_float_list, default=None, help="comma-separated radii in [0,1)")
    sp.add_argument("--sampler", choices=("moebius", "uniform"), default="moebius")

    sp = sub.add_parser("sweep", help="CSV of the lower-bound sweep (or J growth when unbounded)")
    point(sp)
    common(sp, samples=1_000_000, fmt=("csv", "json"))
    sp.add_argument("--eps-list", type=_float_list, default=None)
    sp.add_argument("--sampler", choices=("moebius", "uniform"), default="moebius")

    sp = sub.add_parser("table", help="CSV of C(n, sigma) over a grid")
    sp.add_argument("--n-range", type=_int_range, default="1..3", help='e.g. "1..3" or "1,2,5"')
    sp.add_argument("--sigma-list", type=_float_list, required=True, help='e.g. "0,1,-0.5"')
    sp.add_argument("--allow-unbounded", action="store_true")
    common(sp, fmt=("csv", "json"))

    sp = sub.add_parser("check", help="run an invariant suite")
    sp.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}")
    common(sp)
    return parser


def resolve(args):
    """Turn parsed arguments into a :class:`RunConfig` with every default filled in."""
    cfg = RunConfig(command=args.command, seed=args.seed, output=args.output, format=args.format,
                    samples=args.samples)
    if hasattr(args, "n"):
        cfg.n, cfg.sigma = args.n, args.sigma
    if hasattr(args, "allow_unbounded"):
        cfg.allow_unbounded = args.allow_unbounded
    if args.command == "certify":
        cfg.eps_list = default_eps_list() if args.eps_list is None else args.eps_list
        cfg.radius_grid = default_radius_grid() if args.radius_grid is None else args.radius_grid
        cfg.sampler = args.sampler
    elif args.command == "sweep":
        p = ProjectionParams(args.n, args.sigma)
        if args.eps_list is not None:
            cfg.eps_list = args.eps_list
        else:
            cfg.eps_list = default_eps_list() if p.bounded else default_eps_list(20)
        cfg.sampler = args.sampler
    elif args.command == "table":
        cfg.n_range = args.n_range
        cfg.sigma_list = args.sigma_list
    elif args.command == "check":
        if args.suite not in SUITES:
            raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
        cfg.suite = args.suite
    return cfg


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        worker_count()
        cfg = resolve(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bergman-norm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"bergman-norm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bergman-norm: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
