"""Command-line front end.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .exact_pwl import DomainError, as_rational, fmt_rational, pwl_eval
from .formats import FormatError, check_entry, dumps
from .lattice_minima import (
    BodyError,
    IdentityPreconditionError,
    TargetPoint,
    TrajectoryError,
    duality_defect,
    minkowski_defect_report,
    mu_equivalence_check,
    phi_window_estimates,
    precision_horizon,
    scaling_identity_check,
    trace_trajectory,
)
from .system_builder import (
    BlockSpec,
    GeneralizedSystem,
    GluedTriple,
    GrowthSequence,
    SpecError,
    SystemParams,
    WindowError,
    build_block,
    build_system,
)
from .system_checks import (
    PreconditionError,
    asymptotic_report,
    phi_inequality_check,
    separation_check,
    validate_gsystem,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- argument helpers ----------------------------------------------------------


def rational(text: str) -> Fraction:
    try:
        return as_rational(str(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def rational_list(text: str) -> list:
    items = [t for t in str(text).replace(" ", "").split(",") if t]
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return [rational(t) for t in items]


def int_range(text: str) -> tuple:
    """``"a..b"`` (inclusive) or a single integer."""
    text = str(text).strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def read_config(path) -> dict:
    """``key = value`` lines, ``#`` comments, keys named like long options."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sequence_from(args) -> GrowthSequence:
    if args.theta is not None and args.sequence is not None:
        raise InputError("give either --theta or --sequence, not both")
    if args.sequence is not None:
        return GrowthSequence.from_values(args.sequence, args.seq_start)
    theta = Fraction(1) if args.theta is None else args.theta
    return GrowthSequence.theta_form(theta)


def _params_from(args) -> SystemParams:
    if args.n is None or args.k is None:
        raise InputError("--n and --k are required")
    m0, m1 = args.blocks
    return SystemParams(args.n, args.k, _sequence_from(args), m0, m1, args.alpha, args.beta, args.gamma)


def _add_system_params(p, required=True):
    p.add_argument("--n", type=int, help="dimension parameter n >= 2")
    p.add_argument("--k", type=int, help="index k with 2 <= k <= n")
    p.add_argument("--theta", type=rational, help="theta for a_m = theta * 2^(m^3) (default 1)")
    p.add_argument("--sequence", type=rational_list, help="explicit values a_m0, a_m0+1, ...")
    p.add_argument("--seq-start", type=int, default=0, help="index m of the first --sequence value")
    p.add_argument("--blocks", type=int_range, default=(0, 2), help="block window m0..m1")
    p.add_argument("--alpha", type=rational)
    p.add_argument("--beta", type=rational)
    p.add_argument("--gamma", type=rational)


# -- commands ----------------------------------------------------------------------


def cmd_build(args) -> int:
    P = build_system(_params_from(args))
    out = Path(args.out)
    out.write_text(formats.dump_system(P))
    knots = Path(args.knots) if args.knots else out.with_name(out.stem + "_knots.csv")
    knots.write_text(formats.knots_csv(P))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", "r", "s", "t"])
    for rec in P.registry:
        w.writerow([rec.m, fmt_rational(rec.r), fmt_rational(rec.s), fmt_rational(rec.t)])
    return EXIT_OK


def _load(path):
    try:
        return formats.load_system(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_validate(args) -> int:
    P = _load(args.system)
    if not isinstance(P, GeneralizedSystem):
        raise InputError("file holds a glued triple, not a generalized system")
    rep = validate_gsystem(P)
    doc = {
        "g1_ok": rep.g1_ok,
        "g2_ok": rep.g2_ok,
        "g3_ok": rep.g3_ok,
        "witnesses": [{"axiom": w.axiom, "q": w.q, "description": w.description} for w in rep.witnesses],
        "groups": [{"lo": g.lo, "hi": g.hi, "start": g.start, "end": g.end} for g in rep.groups],
    }
    text = dumps(doc)
    if args.report:
        Path(args.report).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_CHECK


def _figure_data(args):
    if (args.spec is None) == (args.system is None):
        raise InputError("give exactly one of --spec or --system")
    if args.spec is not None:
        if len(args.spec) != 6:
            raise InputError("--spec takes a,b,c,alpha,beta,gamma")
        blk = build_block(BlockSpec(*args.spec))
        comps = [("A", blk.A), ("B", blk.B), ("C", blk.C)]
        top = blk.C
        marks = [("r", blk.r), ("s", blk.s), ("t", blk.t), ("u", blk.u)]
    else:
        P = _load(args.system)
        if isinstance(P, GluedTriple):
            comps = [("A", P.A), ("B", P.B), ("C", P.C)]
        else:
            comps = [(f"P_{j + 1}", f) for j, f in enumerate(P.components)]
        top = comps[-1][1]
        marks = []
        for rec in P.registry:
            marks += [(f"r_{rec.m}", rec.r), (f"s_{rec.m}", rec.s), (f"t_{rec.m}", rec.t)]
        end = top.domain[1]
        if P.registry and end not in [q for _, q in marks]:
            marks.append((f"r_{P.registry[-1].m + 1}", end))
    lo, hi = top.domain
    if args.window is not None:
        if len(args.window) != 2:
            raise InputError("--window takes lo,hi")
        wlo, whi = args.window
        lo, hi = max(lo, wlo), min(hi, whi)
    if not lo < hi:
        raise InputError("figure window is empty")
    polylines = []
    for name, f in comps:
        g = f.restrict(lo, hi) if (lo, hi) != f.domain else f
        polylines.append((name, list(zip(g.knots, g.values))))
    verticals = [(label, q, Fraction(0), pwl_eval(top, q)) for label, q in marks if lo <= q <= hi]
    return polylines, verticals


def cmd_figure(args) -> int:
    polylines, verticals = _figure_data(args)
    _write(args.tsv, formats.figure_tsv(polylines, verticals))
    for path in (args.svg, args.png):
        if path:
            from .plotting import render_polylines

            render_polylines(polylines, verticals, path)
    return EXIT_OK


def _grid(args) -> list:
    if args.grid is not None and args.grid_pow is not None:
        raise InputError("give either --grid or --grid-pow")
    if args.grid is not None:
        return args.grid
    if args.grid_pow is not None:
        i0, i1 = args.grid_pow
        if i0 < 0:
            raise InputError("--grid-pow exponents must be >= 0")
        return [args.base**i for i in range(i0, i1 + 1)]
    raise InputError("a Q grid is required (--grid or --grid-pow)")


def cmd_trace(args) -> int:
    if args.xi is None:
        raise InputError("--xi is required")
    pt = TargetPoint(args.xi)
    grid = _grid(args)
    traj = trace_trajectory(pt, grid, workers=args.workers)
    _write(args.csv, formats.trajectory_csv(traj))
    checks = []
    doc = {"xi": [fmt_rational(c) for c in pt.coords], "rows": len(traj.rows), "complete": traj.complete}
    if not traj.complete:
        doc["aborted_at"] = traj.aborted_at
        doc["abort_reason"] = traj.abort_reason
    if len(traj.rows) >= 3:
        dr = minkowski_defect_report(traj)
        doc["defect"] = {"min": dr.minimum, "max": dr.maximum, "range": dr.range, "slope": dr.slope}
        checks.append(check_entry("defect_range", dr.range <= args.defect_bound, dr.range, args.defect_bound))
    try:
        est = phi_window_estimates(traj, args.tail)
    except TrajectoryError as exc:
        doc["phi"] = {"skipped": str(exc)}
    else:
        horizon = precision_horizon(pt)
        doc["phi"] = {"under": est.under, "over": est.over, "q_lo": est.q_lo, "q_hi": est.q_hi,
                      "precision_horizon": horizon}
        pc = phi_inequality_check(est, pt.n, args.k, slack=args.slack)
        entries = [check_entry(c.name, c.passed, c.observed, c.bound) for c in pc.comparisons]
        # past the horizon the window sees the rational point, where the
        # exponent inequalities need not hold; report without judging
        if est.q_lo <= horizon or args.ignore_horizon:
            checks.extend(entries)
        else:
            doc["phi"]["comparisons_not_judged"] = entries
    doc["checks"] = checks
    doc["pass"] = all(c["pass"] for c in checks)
    if args.report:
        Path(args.report).write_text(dumps(doc))
    if args.plot and traj.rows:
        from .plotting import render_trajectory

        render_trajectory(traj, args.plot)
    if not traj.complete:
        print(f"resource guard: {traj.abort_reason}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK if doc["pass"] else EXIT_CHECK


def cmd_check(args) -> int:
    if args.xi is None:
        raise InputError("--xi is required")
    pt = TargetPoint(args.xi)
    modes = ["mu", "duality", "scaling"] if args.mode == "all" else [args.mode]
    checks = []
    for mode in modes:
        if mode in ("mu", "duality") and args.N is None:
            raise InputError(f"--N is required for mode {mode}")
        if mode == "scaling" and args.M is None:
            raise InputError("--M is required for mode scaling")
        if mode == "mu":
            rep = mu_equivalence_check(pt, args.N, args.root)
            checks.append(check_entry("mu_equivalence", rep.passed, {"cube": rep.left, "K": rep.right}, "equal"))
        elif mode == "duality":
            if args.bounds is not None and len(args.bounds) != 2:
                raise InputError("--bounds takes lo,hi")
            rep = duality_defect(pt, args.N, args.root, bounds=args.bounds)
            checks.append(
                check_entry(
                    "duality_products",
                    rep.passed,
                    {"products": rep.products, "lambda_K": rep.lambdas_k, "lambda_Kstar": rep.lambdas_kstar},
                    [rep.lower, rep.upper],
                )
            )
        else:
            rep = scaling_identity_check(pt, args.M)
            checks.append(check_entry("scaling", rep.passed, {"C": rep.left, "M*Kstar": rep.right}, "equal"))
    doc = {"xi": [fmt_rational(c) for c in pt.coords], "checks": checks, "pass": all(c["pass"] for c in checks)}
    text = dumps(doc)
    if args.report:
        Path(args.report).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if doc["pass"] else EXIT_CHECK


def cmd_asymptotics(args) -> int:
    if args.system is not None:
        P = _load(args.system)
        n = getattr(P, "n", None)
        k = getattr(P, "k", None)
    else:
        params = _params_from(args)
        P = build_system(params)
        n, k = params.n, params.k
    rep = asymptotic_report(P, n, k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "r", "s", "a_m", "a_m+1", "max_A_ratio", "min_C_ratio", "gap_C", "max_A_ratio_f", "gap_C_f"])
    for row in rep.rows:
        w.writerow([
            row.m, fmt_rational(row.r), fmt_rational(row.s), fmt_rational(row.a_m), fmt_rational(row.a_next),
            fmt_rational(row.max_a_ratio), fmt_rational(row.min_c_ratio), fmt_rational(row.gap_c),
            formats.fmt_float(row.max_a_ratio), formats.fmt_float(row.gap_c),
        ])
    _write(args.csv, buf.getvalue())
    if args.report:
        doc = {
            "slopes": rep.slopes,
            "limsup_A_over_q": rep.limsup_a_target,
            "liminf_C_over_q": rep.liminf_c_target,
            "theorem_target": rep.theorem_target,
            "target_matches": rep.target_matches,
        }
        Path(args.report).write_text(dumps(doc))
    if args.plot:
        from .plotting import render_asymptotics

        render_asymptotics(rep, args.plot)
    return EXIT_CHECK if rep.target_matches is False else EXIT_OK


def cmd_separation(args) -> int:
    if args.theta is None or args.theta_prime is None:
        raise InputError("--theta and --theta-prime are required")
    m0, m1 = args.m
    rep = separation_check(args.theta, args.theta_prime, range(m0, m1 + 1), args.n, args.k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "r", "r_prime", "t", "sandwich", "amplitude", "amplitude_ok"])
    for row in rep.rows:
        w.writerow([row.m, fmt_rational(row.r), fmt_rational(row.r_prime), fmt_rational(row.t),
                    int(row.sandwich), fmt_rational(row.amplitude), int(row.amplitude_ok)])
    _write(args.csv, buf.getvalue())
    return EXIT_OK if rep.ok else EXIT_CHECK


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgnlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="key = value file; flags override it")
        p.set_defaults(func=func)
        return p

    p = add("build", cmd_build, "build a generalized system and write JSON + knots CSV")
    _add_system_params(p)
    p.add_argument("--out", default="system.json")
    p.add_argument("--knots", help="knots CSV path (default: <out>_knots.csv)")

    p = add("validate", cmd_validate, "check the axioms on a system JSON")
    p.add_argument("system")
    p.add_argument("--report")

    p = add("figure", cmd_figure, "polyline data (TSV) and optional rendered figure")
    p.add_argument("--spec", type=rational_list, help="a,b,c,alpha,beta,gamma of one block")
    p.add_argument("--system", help="system JSON")
    p.add_argument("--window", type=rational_list, help="lo,hi restriction")
    p.add_argument("--tsv", default="-")
    p.add_argument("--svg")
    p.add_argument("--png")

    p = add("trace", cmd_trace, "successive-minima trajectory of C_xi(Q)")
    p.add_argument("--xi", type=rational_list)
    p.add_argument("--grid", type=rational_list, help="explicit Q values")
    p.add_argument("--grid-pow", type=int_range, help="exponent range i0..i1 for Q = base^i")
    p.add_argument("--base", type=rational, default=Fraction(2))
    p.add_argument("--csv", default="-")
    p.add_argument("--report")
    p.add_argument("--plot")
    p.add_argument("--tail", type=rational, default=Fraction(1, 2))
    p.add_argument("--slack", type=rational, default=Fraction(1, 20))
    p.add_argument("--defect-bound", type=float, default=3.0)
    p.add_argument("--k", type=int, help="also run the chain check for this k")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--ignore-horizon", action="store_true",
                   help="judge exponent checks even when the tail window starts past the precision horizon")

    p = add("check", cmd_check, "exact identity checks between the bodies")
    p.add_argument("--mode", choices=["mu", "duality", "scaling", "all"], default="all")
    p.add_argument("--xi", type=rational_list)
    p.add_argument("--N", type=rational)
    p.add_argument("--root", type=rational)
    p.add_argument("--M", type=rational)
    p.add_argument("--bounds", type=rational_list, help="lo,hi bracket for the duality products")
    p.add_argument("--report")

    p = add("asymptotics", cmd_asymptotics, "per-block extremal ratios and their limits")
    _add_system_params(p)
    p.add_argument("--system")
    p.add_argument("--csv", default="-")
    p.add_argument("--report")
    p.add_argument("--plot")

    p = add("separation", cmd_separation, "compare the systems for theta and theta'")
    p.add_argument("--theta", type=rational)
    p.add_argument("--theta-prime", type=rational)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int_range, default=(0, 4))
    p.add_argument("--csv", default="-")
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest for a in sp._actions}
            unknown = set(cfg) - dests
            if unknown:
                continue
            sp.set_defaults(**cfg)
    args_cmd = next((a for a in argv if not a.startswith("-")), None)
    if args_cmd is not None:
        sp = parser._subparsers._group_actions[0].choices.get(args_cmd)
        if sp is not None:
            bad = set(cfg) - {a.dest for a in sp._actions}
            if bad:
                raise InputError(f"config keys not valid for {args_cmd}: {', '.join(sorted(bad))}")


_NEG = re.compile(r"^-\d")


def _glue_negative_values(argv):
    """Turn ``--opt -1..2`` into ``--opt=-1..2`` so argparse keeps the value."""
    out = []
    for tok in argv:
        if out and _NEG.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except InputError as exc:
        print(f"pgnlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, SpecError, WindowError, PreconditionError, FormatError, BodyError,
            IdentityPreconditionError, TrajectoryError, DomainError) as exc:
        print(f"pgnlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
