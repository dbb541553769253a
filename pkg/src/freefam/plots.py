"""Figure rendering for the fit and report paths.

Figures are a visual companion to the CSV output, never a data product.
Rendering is pinned (Agg backend, fixed dpi, fixed metadata) so repeated
runs write byte-identical PNG files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

PNG_DPI = 144
_PNG_METADATA = {"Software": "freefam"}


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=PNG_DPI, metadata=_PNG_METADATA, bbox_inches="tight")
    plt.close(fig)


def save_fit_figure(fit, path: str | Path) -> None:
    """Log-log plot of mean constructed size against n, with the fitted
    slope and the predicted-exponent guide line."""
    ns = [s.n for s in fit.samples]
    means = [s.mean_size for s in fit.samples]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for sample in fit.samples:
        ax.plot([sample.n] * len(sample.sizes), sample.sizes, ".", color="0.65", ms=4)
    ax.plot(ns, means, "o-", color="tab:blue", label="mean size")
    n0, m0 = ns[0], means[0]
    fitted = [m0 * (n / n0) ** fit.slope for n in ns]
    ax.plot(ns, fitted, "--", color="tab:orange", label=f"fit slope {fit.slope:.3f}")
    if fit.predicted is not None:
        guide = [m0 * (n / n0) ** float(fit.predicted) for n in ns]
        ax.plot(ns, guide, ":", color="tab:green", label=f"predicted {fit.predicted}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("edges")
    ax.set_title(f"{fit.kind} growth (r={fit.r}, t={fit.t})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, Path(path))


def save_table_figure(rows, label: str, path: str | Path) -> None:
    """Maximum family size against n from an exact-search table."""
    ns = [row["n"] for row in rows]
    sizes = [row["max_size"] for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(ns, sizes, "o-", color="tab:blue")
    open_ns = [row["n"] for row in rows if not row["optimal"]]
    open_sizes = [row["max_size"] for row in rows if not row["optimal"]]
    if open_ns:
        ax.plot(open_ns, open_sizes, "x", color="tab:red", label="budget exhausted")
        ax.legend()
    ax.set_xlabel("n")
    ax.set_ylabel("maximum family size")
    ax.set_title(label)
    ax.grid(True, alpha=0.3)
    _save(fig, Path(path))
