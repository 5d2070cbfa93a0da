"""Matplotlib figure rendering for the CLI report path.

Each function draws one figure and writes it to a file; no interactive state.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .exact_spectra import ExactSpectrum  # noqa: E402
from .grid import GridGeometry  # noqa: E402
from .nodal import NodalDecomposition  # noqa: E402


def save_counting_staircase(spec0: ExactSpectrum, sub: ExactSpectrum,
                            lam_max: float, path, labels=("parent", "half")) -> None:
    """Step plot of n_upper for the parent against twice the subdomain count."""
    xs = np.linspace(0, lam_max, 600)
    y0 = [sum(e.multiplicity for e in spec0.entries if e.q <= x) for x in xs]
    y1 = [2 * sum(e.multiplicity for e in sub.entries if e.q <= x) for x in xs]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.step(xs, y0, where="post", label=f"count, {labels[0]}")
    ax.step(xs, y1, where="post", label=f"2 x count, {labels[1]}")
    ax.set_xlabel("energy")
    ax.set_ylabel("eigenvalues counted (with multiplicity)")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_eigenfunction(geometry: GridGeometry, vector: np.ndarray, path,
                       title: str = "") -> None:
    field = geometry.to_lattice(vector)
    x0, y0 = geometry.origin
    extent = (x0, x0 + geometry.h * (geometry.nx - 1),
              y0, y0 + geometry.h * (geometry.ny - 1))
    top = np.abs(field).max()
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    im = ax.imshow(field, origin="lower", extent=extent, cmap="RdBu_r",
                   vmin=-top, vmax=top)
    fig.colorbar(im, ax=ax, shrink=0.85)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_nodal_map(decomp: NodalDecomposition, path, title: str = "") -> None:
    img = np.ma.masked_less(decomp.component_id.astype(float), 0)
    g = decomp.geometry
    x0, y0 = g.origin
    extent = (x0, x0 + g.h * (g.nx - 1), y0, y0 + g.h * (g.ny - 1))
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    ax.imshow(img, origin="lower", extent=extent, cmap="tab20",
              interpolation="nearest")
    ys, xs = np.nonzero(decomp.nodal_nodes)
    ax.plot(x0 + g.h * xs, y0 + g.h * ys, ".", color="black", markersize=1.5)
    ax.set_title(title or f"nodal domains: {decomp.mu}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_deficit_curve(rows, path) -> None:
    """rows: iterable of (lam, A0_plus, A1_plus, deficit, ratio)."""
    lam = np.array([float(r[0]) for r in rows])
    ratio = np.array([r[4] for r in rows])
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogx(lam, ratio, "o-", markersize=3)
    ax.axhline(1.0, linestyle="--", color="gray",
               label="asymptotic slope sqrt(energy)/2")
    ax.set_xlabel("energy")
    ax.set_ylabel("deficit / (sqrt(energy)/2)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_capacity_fit(rows, fit_c: float, r_squared: float, path) -> None:
    """rows: iterable of (h, capacity)."""
    h = np.array([r[0] for r in rows])
    cap = np.array([r[1] for r in rows])
    x = 1.0 / np.log(1.0 / h)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(x, cap, "o", label="single-node capacity")
    xs = np.linspace(0, x.max() * 1.05, 100)
    ax.plot(xs, fit_c * xs, "-",
            label=f"fit {fit_c:.3f}/log(1/h), R^2={r_squared:.4f}")
    ax.set_xlabel("1 / log(1/h)")
    ax.set_ylabel("capacity")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
