"""Matplotlib rendering for the figure, trace and asymptotics reports.

Figures are drawn on an Agg canvas and written straight to disk; nothing
here touches pyplot's global state.  SVG output is byte-stable: the
element-id salt is fixed and the date stamp is dropped.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.backends.backend_agg import FigureCanvasAgg  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

_RC = {
    "svg.hashsalt": "pgnlab",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.4,
    "path.simplify": False,
}

_COLORS = ["#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#117a65", "#5d6d7e"]


def _new_axes(width=6.4, height=4.0):
    fig = Figure(figsize=(width, height), dpi=100)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    return fig, ax


def _save(fig, path):
    path = str(path)
    meta = {"Date": None} if path.endswith(".svg") else None
    if path.endswith(".png"):
        meta = {"Software": None}
    fig.savefig(path, metadata=meta, bbox_inches="tight")


def render_polylines(polylines, verticals, path, title=""):
    """Draw named polylines with dashed verticals, e.g. the block picture."""
    with rc_context(_RC):
        fig, ax = _new_axes()
        seen = {}
        for i, (name, pts) in enumerate(polylines):
            xs = [float(q) for q, _ in pts]
            ys = [float(y) for _, y in pts]
            key = tuple(pts)
            # coinciding components share one colour and one legend entry
            if key in seen:
                continue
            seen[key] = name
            ax.plot(xs, ys, color=_COLORS[len(seen) % len(_COLORS)], label=name, marker="o", markersize=2.5)
        for label, q, y0, y1 in verticals:
            ax.plot([float(q)] * 2, [float(y0), float(y1)], linestyle="--", color="0.45", linewidth=0.8)
            ax.annotate(label, (float(q), float(y1)), textcoords="offset points", xytext=(3, 4),
                        ha="center", fontsize=8)
        ax.set_xlabel("q")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper left", frameon=False)
        _save(fig, path)


def render_trajectory(traj, path):
    with rc_context(_RC):
        fig, ax = _new_axes()
        qs = [r.q for r in traj.rows]
        for j in range(traj.point.dim):
            ax.plot(qs, [r.L[j] for r in traj.rows], marker=".", color=_COLORS[j % len(_COLORS)], label=f"L_{j + 1}")
        if qs:
            ax.plot(qs, [q / traj.point.dim for q in qs], linestyle=":", color="0.5", label="q/(n+1)")
        ax.set_xlabel("q = log Q")
        ax.set_ylabel("log of successive minimum")
        ax.set_title(f"xi = ({traj.point})")
        ax.legend(loc="upper left", frameon=False)
        _save(fig, path)


def render_asymptotics(report, path):
    with rc_context(_RC):
        fig, ax = _new_axes()
        ms = [row.m for row in report.rows]
        ax.plot(ms, [float(row.max_a_ratio) for row in report.rows], marker="o", label="a_m / r_m")
        ax.plot(ms, [float(row.min_c_ratio) for row in report.rows], marker="s", label="a_{m+1} / s_m")
        ax.axhline(float(report.liminf_c_target), linestyle="--", color="0.4", linewidth=0.8, label="target")
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("block m")
        ax.legend(frameon=False)
        _save(fig, path)
