"""Matplotlib figures written next to the JSON/SVG artifacts.

Figures are illustrations only; every number in them comes from exact data
and is converted to float at draw time.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bounds import BoundReport, Power, as_int  # noqa: E402
from .diagram import PALETTE, Diagram  # noqa: E402

RC = {
    "font.size": 10,
    "axes.linewidth": 0.8,
    "figure.dpi": 100,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    # no timestamps or version strings, so reruns give identical bytes
    metadata = {"Software": None} if fmt == "png" else {"Date": None, "Creator": None} if fmt in ("pdf", "svg") else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def plot_diagram(dg: Diagram, path, title: str | None = None) -> None:
    """Draw the projected link with under-strand gaps."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        seg = 0
        ends = {}
        for ci, strand in enumerate(dg.strands):
            colour = PALETTE[ci % len(PALETTE)]
            for i, p in enumerate(strand):
                r = strand[(i + 1) % len(strand)]
                seg += 1
                xy = ((float(p[0]), float(r[0])), (float(p[1]), float(r[1])))
                ends[seg] = (xy, colour)
                ax.plot(*xy, color=colour, lw=2, zorder=1)
        for c in dg.crossings:
            (xs, ys), colour = ends[c.over]
            cx, cy = float(c.point[0]), float(c.point[1])
            ax.plot([cx], [cy], "o", ms=11, color="white", zorder=2)
            dx, dy = xs[1] - xs[0], ys[1] - ys[0]
            norm = math.hypot(dx, dy) or 1.0
            span = 0.06 * max(_extent(dg), 1e-9)
            ax.plot([cx - dx / norm * span, cx + dx / norm * span],
                    [cy - dy / norm * span, cy + dy / norm * span], color=colour, lw=2, zorder=3)
        ax.set_aspect("equal")
        ax.set_xticks([])
        ax.set_yticks([])
        ax.set_title(title or f"{len(dg.crossings)} crossings")
        _save(fig, path)


def _extent(dg: Diagram) -> float:
    pts = [p for s in dg.strands for p in s]
    if not pts:
        return 1.0
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    return max(max(xs) - min(xs), max(ys) - min(ys))


def _log10(x) -> float:
    if isinstance(x, Power):
        return x.exponent * math.log10(x.base)
    x = as_int(x)
    if x <= 0:
        return 0.0
    shift = max(x.bit_length() - 53, 0)
    return math.log10(x >> shift) + shift * math.log10(2)


def plot_bounds(rep: BoundReport, path) -> None:
    """Bar chart of log10 of every crossing bound, with the achieved count marked."""
    keys = list(rep.cr_bounds)
    values = [_log10(rep.cr_bounds[k]) for k in keys]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        colours = ["#2ca02c" if k in rep.applicable else "#bbbbbb" for k in keys]
        ax.barh(range(len(keys)), values, color=colours)
        ax.set_yticks(range(len(keys)))
        ax.set_yticklabels(keys)
        ax.set_xscale("symlog", linthresh=10)
        ax.set_xlabel("log10(bound)")
        if rep.achieved is not None:
            ax.axvline(math.log10(rep.achieved) if rep.achieved > 0 else 0.0, color="#d62728",
                       ls="--", label=f"achieved = {rep.achieved}")
            ax.legend(loc="lower right", frameon=False)
        ax.set_title(f"n = {rep.n}, k = {rep.k}, certificate: {rep.certificate}")
        _save(fig, path)
