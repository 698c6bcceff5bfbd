"""SVG figure of the real picture in an affine chart of the dual plane."""
from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .errors import InputError
from .forms import evaluate_many

matplotlib.rcParams["svg.hashsalt"] = "quartalg"
matplotlib.rcParams["svg.fonttype"] = "path"

REAL_TOL = 1e-9


def _is_real(v, tol=REAL_TOL) -> bool:
    return bool(np.max(np.abs(np.imag(v))) <= tol)


def render_quartic(
    form,
    lines=(),
    certificates=(),
    path: str | Path = "quartic.svg",
    extent: float = 2.0,
    resolution: int = 400,
    title: str | None = None,
) -> Path:
    """Draw the quartic, the candidate lines and real tangency points in the chart xi3 = 1.

    Lines with non-real coefficients are drawn through their real parts, dashed.
    """
    if not extent > 0:
        raise InputError("viewport extent must be positive")
    if resolution < 2:
        raise InputError("resolution must be at least 2")
    path = Path(path)
    f = form.scaled()
    xs = np.linspace(-extent, extent, resolution)
    X, Y = np.meshgrid(xs, xs)
    pts = np.column_stack([X.ravel(), Y.ravel(), np.ones(X.size)])
    vals = evaluate_many(f, pts).reshape(X.shape)
    re = np.ma.masked_where(np.abs(vals.imag) > 1e-6 * max(np.max(np.abs(vals)), 1e-300), vals.real)

    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot(1, 1, 1)
    has_curve = re.count() > 0 and re.min() < 0 < re.max()
    if has_curve:
        ax.contour(X, Y, re, levels=[0.0], colors="k", linewidths=1.5)
    else:
        ax.text(0.5, 0.5, "no real points in view", transform=ax.transAxes, ha="center", va="center")

    for ln in lines:
        a, b, c = ln.ell.real
        style = "-" if _is_real(ln.ell) else "--"
        if abs(b) >= abs(a) and b != 0:
            ax.plot(xs, -(a * xs + c) / b, style, lw=0.6, color="tab:blue", alpha=0.7)
        elif a != 0:
            ax.plot(-(b * xs + c) / a, xs, style, lw=0.6, color="tab:blue", alpha=0.7)

    tx, ty = [], []
    for cert in certificates:
        for p in cert.tangency_points:
            if abs(p[2]) > 1e-12:
                q = p / p[2]
                if _is_real(q, 1e-7):
                    tx.append(q[0].real)
                    ty.append(q[1].real)
    if tx:
        ax.plot(tx, ty, "o", ms=3, color="tab:red")

    ax.set_xlim(-extent, extent)
    ax.set_ylim(-extent, extent)
    ax.set_aspect("equal")
    ax.set_xlabel(r"$\xi_1/\xi_3$")
    ax.set_ylabel(r"$\xi_2/\xi_3$")
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path
