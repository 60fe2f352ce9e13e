"""Figures for wall diagrams and the counter-example window.

This is the only module that converts exact values to floats, and only for
pixel positions; every label carries the exact value.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Arc  # noqa: E402

from .exactnum import format_quadratic, QuadraticNumber  # noqa: E402

# fixed ids and no timestamp so identical inputs give identical SVG bytes
matplotlib.rcParams["svg.hashsalt"] = "tiltstab"
matplotlib.rcParams["svg.fonttype"] = "none"


def _label(x) -> str:
    if isinstance(x, QuadraticNumber):
        return format_quadratic(x)
    return str(x)


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if path.suffix.lower() in (".svg", ".pdf") else None
    fig.savefig(path, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_walls(walls, path, title: str = "numerical walls") -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    xs_lo, xs_hi, top = -1.0, 1.0, 1.0
    for i, wall in enumerate(walls):
        c = float(wall.center_beta)
        colour = f"C{i % 10}"
        if wall.vertical:
            ax.axvline(c, color=colour, lw=1.0, ls="--")
            ax.annotate(f"beta = {_label(wall.center_beta)}", (c, 0.05), fontsize=7, color=colour, rotation=90)
            xs_lo, xs_hi = min(xs_lo, c - 0.5), max(xs_hi, c + 0.5)
            continue
        r = float(wall.radius)
        ax.add_patch(Arc((c, 0.0), 2 * r, 2 * r, theta1=0, theta2=180, color=colour, lw=1.2))
        ax.annotate(
            f"c={_label(wall.center_beta)}, R={_label(wall.radius)}",
            (c, r),
            textcoords="offset points",
            xytext=(0, 3),
            ha="center",
            fontsize=7,
            color=colour,
        )
        xs_lo, xs_hi, top = min(xs_lo, c - r), max(xs_hi, c + r), max(top, r)
    pad = 0.1 * (xs_hi - xs_lo)
    ax.set_xlim(xs_lo - pad, xs_hi + pad)
    ax.set_ylim(0.0, 1.15 * top)
    ax.set_xlabel("beta")
    ax.set_ylabel("alpha")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="box")
    ax.grid(True, ls=":", alpha=0.4)
    fig.tight_layout()
    return _save(fig, path)


def plot_certificate(cert, path) -> Path:
    """Real part of Z on ``O_D[1]`` at beta = 1 under both normalizations."""
    re_conv = cert.checks["central_charge_real_convention"]
    re_app = cert.checks["central_charge_real_alt"]
    hi = float(max(cert.rez_thresholds)) * 1.2
    xs = [hi * i / 200 for i in range(1, 201)]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    # both real parts are 3/8 - c alpha^2
    for thr, label, colour in zip(cert.rez_thresholds, (re_conv, re_app), ("C0", "C1")):
        t = float(thr)
        ax.plot(xs, [3 / 8 * (1 - (x / t) ** 2) for x in xs], color=colour, label=f"Re Z = {label}")
        ax.axvline(t, color=colour, ls=":", lw=0.8)
    ax.axhline(0.0, color="k", lw=0.6)
    rb = float(cert.radius_bound)
    ax.axvline(rb, color="C3", ls="--", lw=0.8, label=f"radius bound {cert.radius_bound}")
    if cert.window is not None:
        ax.axvspan(float(cert.window[0]), float(cert.window[1]), color="C2", alpha=0.15, label="window")
    ax.set_xlabel("alpha")
    ax.set_ylabel("Re Z(O_D[1]) at beta = 1")
    ax.set_title(f"plane counter-example, L^3 = {cert.s}, m = {cert.m}")
    ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)
