"""SVG figures: the lambda(Lambda) branch and the habit normals on the unit sphere.

Figures are drawn on a bare ``Figure`` (no pyplot state) and written with a
fixed hash salt and no date stamp, so identical data gives identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .crossing import BranchSet, NormalCurve  # noqa: E402

SVG_RC = {
    "svg.hashsalt": "crosstwin",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.linewidth": 0.8,
}
CURVE_COLORS = {("low", "+"): "C0", ("low", "-"): "C1", ("high", "+"): "C2", ("high", "-"): "C3"}


def _hemisphere_xy(m: np.ndarray, upper: bool) -> np.ndarray:
    """Orthographic view of one hemisphere; the lower one is seen from below."""
    xy = m[:, :2].copy()
    mask = m[:, 2] >= 0 if upper else m[:, 2] < 0
    if not upper:
        xy[:, 1] = -xy[:, 1]
    xy[~mask] = np.nan
    return xy


def _sphere_axes(ax, title):
    t = np.linspace(0, 2 * np.pi, 361)
    ax.plot(np.cos(t), np.sin(t), color="0.3", lw=0.8)
    ax.plot([-1, 1], [0, 0], color="0.8", lw=0.5)
    ax.plot([0, 0], [-1, 1], color="0.8", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlim(-1.08, 1.08)
    ax.set_ylim(-1.08, 1.08)
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title(title)


def branch_figure(branches: BranchSet, curves: list[NormalCurve], classical_normals,
                  lambda_star: float | None = None) -> Figure:
    fig = Figure(figsize=(11.0, 3.8))
    ax1, ax2, ax3 = fig.subplots(1, 3, gridspec_kw={"width_ratios": [1.25, 1, 1]})

    low = {p.Lambda: p.lam for p in branches.side("low")}
    # NaN where no root exists, so uncovered Lambda ranges show as gaps
    ax1.plot(branches.grid, [low.get(float(L), np.nan) for L in branches.grid], "-", lw=1.2,
             color="C0")
    if lambda_star is not None:
        ax1.axhline(lambda_star, color="0.5", lw=0.6, ls="--")
    ax1.set_xlim(0, 1)
    ax1.set_xlabel(r"$\Lambda$")
    ax1.set_ylabel(r"$\lambda$")
    ax1.set_title(r"Roots of $g(\lambda,\Lambda)=0$, $\lambda\leq 1/2$")

    _sphere_axes(ax2, "normals, $m_z \\geq 0$")
    _sphere_axes(ax3, "normals, $m_z < 0$ (from below)")
    for curve in curves:
        m = curve.normals()
        color = CURVE_COLORS.get((curve.side, curve.sign), "k")
        for ax, upper in ((ax2, True), (ax3, False)):
            xy = _hemisphere_xy(m, upper)
            ax.plot(xy[:, 0], xy[:, 1], color=color, lw=1.2)
    cn = np.asarray(classical_normals, dtype=float).reshape(-1, 3)
    cn = np.vstack([cn, -cn])
    for ax, upper in ((ax2, True), (ax3, False)):
        xy = _hemisphere_xy(cn, upper)
        ax.plot(xy[:, 0], xy[:, 1], "o", ms=3, mfc="none", mec="k", mew=0.7)

    fig.tight_layout()
    return fig


def write_svg(fig: Figure, path) -> None:
    with mpl.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})


def render_svg(path, branches: BranchSet, curves: list[NormalCurve], classical_normals,
               lambda_star: float | None = None) -> None:
    with mpl.rc_context(SVG_RC):
        fig = branch_figure(branches, curves, classical_normals, lambda_star)
        write_svg(fig, path)
