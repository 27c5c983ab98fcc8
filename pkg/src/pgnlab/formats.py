"""File formats: system JSON, knot/trajectory CSV, figure TSV, report JSON.

Rationals always cross the file boundary as ``"p/q"`` strings.  Floats
(only logs and derived quantities) are written with 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Optional

from .exact_pwl import PiecewiseLinear, fmt_rational, merged_knots, pwl_eval
from .lattice_minima.bodies import GaugeValue
from .system_builder import BlockRecord, GeneralizedSystem, GluedTriple


class FormatError(ValueError):
    """A file does not follow the expected schema."""


def fmt_float(x: float) -> str:
    return format(float(x), ".12g")


def to_jsonable(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return float(fmt_float(x))
    if isinstance(x, GaugeValue):
        return str(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return str(x)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + "\n"


# -- systems -------------------------------------------------------------------


def _component(f: PiecewiseLinear) -> dict:
    return {"knots": [fmt_rational(k) for k in f.knots], "values": [fmt_rational(v) for v in f.values]}


def system_to_dict(P) -> dict:
    if isinstance(P, GluedTriple):
        comps, n, k, kind = (P.A, P.B, P.C), None, None, "triple"
    else:
        comps, n, k, kind = P.components, P.n, P.k, "system"
    return {
        "kind": kind,
        "n": n,
        "k": k,
        "slopes": None if P.slopes is None else {
            name: fmt_rational(v) for name, v in zip(("alpha", "beta", "gamma"), P.slopes)
        },
        "components": [_component(f) for f in comps],
        "registry": [
            {"m": rec.m, "r": fmt_rational(rec.r), "s": fmt_rational(rec.s), "t": fmt_rational(rec.t)}
            for rec in P.registry
        ],
    }


def dump_system(P) -> str:
    return json.dumps(system_to_dict(P), indent=2) + "\n"


def _rat(v, what):
    if not isinstance(v, (str, int)) or isinstance(v, bool):
        raise FormatError(f"{what}: expected a rational string, got {v!r}")
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{what}: {exc}") from None


def system_from_dict(d: dict):
    if not isinstance(d, dict):
        raise FormatError("top level must be an object")
    try:
        comps_raw = d["components"]
        reg_raw = d.get("registry", [])
    except KeyError as exc:
        raise FormatError(f"missing key {exc}") from None
    if not isinstance(comps_raw, list) or not comps_raw:
        raise FormatError("components must be a non-empty list")
    comps = []
    for i, c in enumerate(comps_raw):
        try:
            ks = [_rat(v, f"component {i + 1} knot") for v in c["knots"]]
            vs = [_rat(v, f"component {i + 1} value") for v in c["values"]]
            comps.append(PiecewiseLinear(ks, vs))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"component {i + 1}: {exc}") from None
        except ValueError as exc:
            raise FormatError(f"component {i + 1}: {exc}") from None
    registry = []
    for row in reg_raw:
        try:
            registry.append(BlockRecord(int(row["m"]), _rat(row["r"], "r"), _rat(row["s"], "s"), _rat(row["t"], "t")))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"registry row {row!r}: {exc}") from None
    slopes = d.get("slopes")
    if slopes is not None:
        try:
            slopes = tuple(_rat(slopes[k], k) for k in ("alpha", "beta", "gamma"))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"slopes: {exc}") from None
    kind = d.get("kind", "system")
    if kind == "triple":
        if len(comps) != 3:
            raise FormatError("a triple has exactly three components")
        return GluedTriple(comps[0], comps[1], comps[2], slopes, tuple(registry), comps[0].domain[1])
    n = d.get("n")
    if n is None:
        n = len(comps) - 1
    if not isinstance(n, int) or n + 1 != len(comps):
        raise FormatError(f"n = {n!r} does not match {len(comps)} components")
    k = d.get("k")
    if k is not None and not isinstance(k, int):
        raise FormatError("k must be an integer")
    try:
        return GeneralizedSystem(n, k, slopes, tuple(comps), tuple(registry))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_system(path) -> object:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg})") from None
    return system_from_dict(data)


def knots_csv(P) -> str:
    comps = P.components if isinstance(P, GeneralizedSystem) else (P.A, P.B, P.C)
    names = [f"P_{j + 1}" for j in range(len(comps))] if isinstance(P, GeneralizedSystem) else ["A", "B", "C"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", *names])
    for q in merged_knots(comps):
        w.writerow([fmt_rational(q), *(fmt_rational(pwl_eval(f, q)) for f in comps)])
    return buf.getvalue()


# -- figure data ------------------------------------------------------------------


def figure_tsv(polylines: Iterable, verticals: Iterable) -> str:
    """Headerless listing of polyline vertices and vertical guides.

    ``poly<TAB>name<TAB>q<TAB>y`` per vertex, then
    ``vline<TAB>label<TAB>q<TAB>y0<TAB>y1`` per dashed vertical.
    """
    lines = []
    for name, pts in polylines:
        for q, y in pts:
            lines.append(f"poly\t{name}\t{fmt_rational(q)}\t{fmt_rational(y)}")
    for label, q, y0, y1 in verticals:
        lines.append(f"vline\t{label}\t{fmt_rational(q)}\t{fmt_rational(y0)}\t{fmt_rational(y1)}")
    return "\n".join(lines) + "\n"


def parse_figure_tsv(text: str) -> tuple:
    polys, vlines = {}, []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if parts[0] == "poly":
            polys.setdefault(parts[1], []).append((Fraction(parts[2]), Fraction(parts[3])))
        elif parts[0] == "vline":
            vlines.append((parts[1], Fraction(parts[2]), Fraction(parts[3]), Fraction(parts[4])))
        else:
            raise FormatError(f"unknown record {parts[0]!r}")
    return polys, vlines


# -- trajectories --------------------------------------------------------------------


def trajectory_csv(traj) -> str:
    d = traj.point.dim
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Q", "q", *(f"L_{j + 1}" for j in range(d)), "defect"])
    for r in traj.rows:
        w.writerow([fmt_rational(r.Q), fmt_float(r.q), *(fmt_float(v) for v in r.L), fmt_float(r.defect)])
    text = buf.getvalue()
    if traj.aborted_at is not None:
        text += f"# partial: aborted at Q={fmt_rational(traj.aborted_at)}: {traj.abort_reason}\n"
    return text


def check_entry(name: str, passed: bool, observed, bound) -> dict:
    return {"name": name, "pass": bool(passed), "observed": to_jsonable(observed), "bound": to_jsonable(bound)}
