"""Figures written next to the CLI's JSON output."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .reduction import SurvivorReport  # noqa: E402
from .straightening import HomotopyCheck  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 150,
}


def _figure(width: float = 4.5, height: float = 4.0):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(width, height))
    return fig, ax


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.tight_layout()
        fig.savefig(path)
    plt.close(fig)
    return path


def plot_projected_loop(points: Sequence[Tuple[int, int]], path: Path, winding: int) -> Path:
    """Closed (a, c) polygon with the origin marked."""
    fig, ax = _figure()
    xs = [p[0] for p in points] + [points[0][0]]
    ys = [p[1] for p in points] + [points[0][1]]
    ax.plot(xs, ys, "-o", color="tab:blue", lw=1.5, ms=4)
    for i, (x, y) in enumerate(points):
        ax.annotate(str(i), (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
    for (x0, y0), (x1, y1) in zip(zip(xs, ys), list(zip(xs, ys))[1:]):
        if (x0, y0) != (x1, y1):
            ax.annotate("", (x1, y1), (x0, y0), arrowprops={"arrowstyle": "->", "color": "tab:blue"})
    ax.plot([0], [0], "x", color="tab:red", ms=8)
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_xlabel("a (row 1 of column 2)")
    ax.set_ylabel("c (row 2 of column 2)")
    ax.set_title(f"projected loop, winding {winding} (mod 2 = {winding % 2})")
    ax.set_aspect("equal", adjustable="datalim")
    return _save(fig, path)


def plot_homotopy(check: HomotopyCheck, path: Path) -> Path:
    """Coefficients of det(B_t + sI) over t in [0, 1]."""
    fig, ax = _figure(5.0, 3.2)
    ts = np.linspace(0.0, 1.0, 101)
    # c3 and c0 often coincide; dashes keep both visible.
    for name, style in (("c3", "--"), ("c2", "-"), ("c1", "-"), ("c0", ":")):
        poly = getattr(check, name)
        text = str(poly).replace("x", "t")
        ax.plot(ts, [float(poly(t)) for t in ts], style, lw=1.5, label=f"{name}(t) = {text}")
    ax.axhline(0, color="0.6", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("coefficient of det(B_t + sI)")
    ax.legend(loc="best")
    return _save(fig, path)


def plot_enumeration(reports: Iterable[SurvivorReport], path: Path) -> Path:
    """Enumerated standard forms in the (c, trace) plane, survivors highlighted."""
    reports: List[SurvivorReport] = list(reports)
    fig, ax = _figure(5.0, 4.0)
    plain = [r for r in reports if not r.survivor]
    surv = [r for r in reports if r.survivor]
    if plain:
        ax.scatter([r.form.c for r in plain], [r.form.trace for r in plain], s=6, c="0.6", label="not a survivor")
    if surv:
        ax.scatter([r.form.c for r in surv], [r.form.trace for r in surv], s=14, c="tab:red", label="survivor")
    ax.set_xlabel("c")
    ax.set_ylabel("trace = c + f")
    ax.set_title(f"{len(reports)} standard forms, {len(surv)} survivors")
    if reports:
        ax.legend(loc="best")
    return _save(fig, path)
