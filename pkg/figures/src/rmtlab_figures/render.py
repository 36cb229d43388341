"""The six figure families.

Every renderer takes already-loaded column tables, draws with a fixed
style, stamps the config hash in the footer, and writes SVG (or PNG).
Analytic overlays are taken from CSV columns; nothing is recomputed.
"""

from __future__ import annotations

from typing import Dict, List

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .csvio import FigureInputError, read_table, require_columns

__all__ = ["FIGURES", "render"]

plt.rcParams["svg.hashsalt"] = "rmtlab-figures"  # byte-stable SVG output


def _finish(fig, output: str, config_hash: str, png: bool) -> None:
    fig.text(0.005, 0.005, f"config {config_hash[:16]}", fontsize=6,
             color="0.45", family="monospace")
    fig.savefig(output, format="png" if png else "svg", dpi=150,
                metadata=None if png else {"Date": None})
    plt.close(fig)


def fig1_resolution(inputs: List[str], output: str, config_hash: str, png: bool):
    """Stieltjes transforms of one spectrum at two resolutions."""
    curves = read_table(inputs[0])
    require_columns(curves, ["eta", "E", "im_s_pi", "im_m_pi"], inputs[0])
    spectrum = read_table(inputs[1]) if len(inputs) > 1 else None
    etas = np.unique(curves["eta"])[::-1][:2]
    fig, axes = plt.subplots(1, len(etas), figsize=(9.6, 3.4), sharey=True)
    axes = np.atleast_1d(axes)
    for ax, eta in zip(axes, etas):
        sel = curves["eta"] == eta
        ax.plot(curves["E"][sel], curves["im_s_pi"][sel], "r", lw=0.9,
                label="empirical")
        ax.plot(curves["E"][sel], curves["im_m_pi"][sel], "b", lw=1.3,
                label="semicircle")
        if spectrum is not None:
            require_columns(spectrum, ["lambda"], inputs[1])
            ax.vlines(spectrum["lambda"], 0, 0.02, color="k", lw=0.15)
        ax.set_title(f"resolution eta = {eta:g}")
        ax.set_xlabel("E")
    axes[0].set_ylabel("smoothed density")
    axes[0].legend(loc="upper right", fontsize=8)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    _finish(fig, output, config_hash, png)


def fig2_global(inputs: List[str], output: str, config_hash: str, png: bool):
    """Spectral histogram against the limiting density."""
    spectrum = read_table(inputs[0])
    require_columns(spectrum, ["lambda"], inputs[0])
    density = read_table(inputs[1])
    require_columns(density, ["x", "rho"], inputs[1])
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.hist(spectrum["lambda"], bins=60, density=True, color="r", alpha=0.55,
            label="spectrum")
    ax.plot(density["x"], density["rho"], "b", lw=1.4, label="density")
    ax.set_xlabel("E")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    _finish(fig, output, config_hash, png)


def fig3_locallaw(inputs: List[str], output: str, config_hash: str, png: bool):
    """Trace of the Green function inside its error bands."""
    t = read_table(inputs[0])
    require_columns(t, ["E", "eta", "im_s", "im_m", "band_lo", "band_hi"],
                    inputs[0])
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(t["E"], t["im_s"], "r", lw=0.9, label="empirical")
    ax.plot(t["E"], t["im_m"], "b", lw=1.3, label="limit")
    ax.plot(t["E"], t["band_lo"], "g--", lw=0.9, label="error bands")
    ax.plot(t["E"], t["band_hi"], "g--", lw=0.9)
    ax.set_xlabel("E")
    ax.set_ylabel("Im s(E + i eta)")
    ax.set_title(f"eta = {t['eta'][0]:g}")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    _finish(fig, output, config_hash, png)


def fig4_repulsion(inputs: List[str], output: str, config_hash: str, png: bool):
    """Matrix spectra versus i.i.d. samples, small and zoomed panels."""
    t = read_table(inputs[0])
    require_columns(t, ["source", "N", "i", "x"], inputs[0])
    sizes = sorted(set(int(n) for n in t["N"]))
    fig, axes = plt.subplots(len(sizes), 1, figsize=(7.2, 1.6 * len(sizes) + 0.8))
    axes = np.atleast_1d(axes)
    for ax, N in zip(axes, sizes):
        for src, color, y0 in (("matrix", "r", 0.55), ("iid", "b", 0.0)):
            sel = (t["N"] == N) & (t["source"] == src)
            ax.vlines(t["x"][sel], y0, y0 + 0.45, color=color, lw=0.5)
        ax.set_yticks([0.22, 0.77])
        ax.set_yticklabels(["iid", "matrix"], fontsize=7)
        ax.set_title(f"N = {N}", fontsize=8)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    _finish(fig, output, config_hash, png)


def fig5_rigidity(inputs: List[str], output: str, config_hash: str, png: bool):
    """Spectrum scatter on the quantile curve with a rigidity envelope."""
    t = read_table(inputs[0])
    require_columns(t, ["N", "seed", "i", "lambda", "gamma"], inputs[0])
    seed0 = t["seed"][0]
    sel = t["seed"] == seed0
    N = float(t["N"][0])
    i = t["i"][sel]
    q = (i - 0.5) / N
    order = np.argsort(q)
    q, lam, gam = q[order], t["lambda"][sel][order], t["gamma"][sel][order]
    envelope = 5.0 / N * np.minimum(q, 1 - q) ** (-1.0 / 3.0)
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(q, gam, "b", lw=1.2, label="quantile curve")
    ax.plot(q, gam + envelope, "g--", lw=0.8, label="rigidity envelope")
    ax.plot(q, gam - envelope, "g--", lw=0.8)
    ax.plot(q, lam, "r.", ms=1.6, label="spectrum")
    ax.set_xlabel("(i - 1/2)/N")
    ax.set_ylabel("location")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    _finish(fig, output, config_hash, png)


def fig6_deloc(inputs: List[str], output: str, config_hash: str, png: bool):
    """Heatmap of eigenvector component weights against perfect flatness."""
    t = read_table(inputs[0])
    require_columns(t, ["N", "i", "k", "value"], inputs[0])
    N = int(t["N"][0])
    grid = np.zeros((N, N))
    grid[t["k"].astype(int) - 1, t["i"].astype(int) - 1] = np.abs(
        t["value"] - 1.0 / N)
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    im = ax.imshow(grid, origin="lower", cmap="viridis",
                   extent=(0, 1, 0, 1), aspect="auto")
    ax.set_xlabel("i/N (eigenvector index)")
    ax.set_ylabel("k/N (component)")
    fig.colorbar(im, ax=ax, label="| |u_i(k)|^2 - 1/N |")
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    _finish(fig, output, config_hash, png)


FIGURES = {
    "fig1-resolution": (fig1_resolution,
                        "global-law.csv [globallaw_spectrum.csv]"),
    "fig2-global": (fig2_global,
                    "globallaw_spectrum.csv globallaw_density.csv"),
    "fig3-locallaw": (fig3_locallaw, "locallaw_curve.csv"),
    "fig4-repulsion": (fig4_repulsion, "repulsion.csv"),
    "fig5-rigidity": (fig5_rigidity, "rigidity.csv"),
    "fig6-deloc": (fig6_deloc, "deloc_heatmap.csv"),
}


def render(figure_id: str, inputs: List[str], output: str,
           config_hash: str, png: bool = False) -> None:
    if figure_id not in FIGURES:
        raise FigureInputError(
            f"unknown figure {figure_id!r}; valid: {', '.join(sorted(FIGURES))}")
    fn, _ = FIGURES[figure_id]
    fn(inputs, output, config_hash, png)
