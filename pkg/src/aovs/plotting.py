"""Matplotlib figures written next to the CSV/JSON outputs.

Figures are optional: every function takes already-computed data, draws it
with the non-interactive Agg backend and saves to ``path``.  The numbers in
the delimited files are the source of truth.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "axes.grid": True,
    "grid.linewidth": 0.4,
    "grid.alpha": 0.5,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.4,
    "legend.frameon": False,
    "font.size": 10,
}


def _save(fig, path):
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_cap_profile(profile, n, path):
    """Cap area fraction against cap height."""
    h = [row[0] for row in profile]
    frac = [row[1] for row in profile]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(h, frac, color="#0072B2")
        ax.set_xlabel("cap height h")
        ax.set_ylabel("fraction of sphere area")
        ax.set_title(f"Spherical cap area, unit sphere in R^{n}")
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 0.5)
        return _save(fig, path)


def plot_normal_comparison(rows, path, label=""):
    """Standardised empirical density against the standard normal."""
    z = [r[0] for r in rows]
    emp = [r[1] for r in rows]
    gauss = [r[2] for r in rows]
    width = z[1] - z[0] if len(z) > 1 else 1.0
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.bar(z, emp, width=width, color="#56B4E9", alpha=0.7, label=label or "empirical")
        ax.plot(z, gauss, color="#D55E00", label="standard normal")
        ax.set_xlabel("standardised cosine similarity")
        ax.set_ylabel("density")
        ax.set_xlim(max(min(z), -6.0), min(max(z), 6.0))
        ax.legend()
        return _save(fig, path)


def plot_trajectory(trajectory, path, title=None):
    steps = [s for s, _ in trajectory]
    vals = [v for _, v in trajectory]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(steps, vals, color="#009E73")
        ax.set_xlabel("step")
        ax.set_ylabel("max |cos|")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_benchmark(result, path):
    """Best max|cos| per method against vector count, one panel per dimension."""
    dims = sorted({r.dim for r in result.rows})
    methods = sorted({r.method for r in result.rows})
    ncols = min(3, len(dims))
    nrows = math.ceil(len(dims) / ncols)
    colors = {"orthonormal": "#000000", "random": "#E69F00",
              "projection": "#0072B2", "energy": "#CC79A7"}
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                                 figsize=(4.0 * ncols, 3.2 * nrows))
        for ax, dim in zip(axes.flat, dims):
            for method in methods:
                best = {}
                for r in result.rows:
                    if r.dim == dim and r.method == method:
                        best[r.count] = min(best.get(r.count, math.inf), r.max_abs_cos)
                if best:
                    xs = sorted(best)
                    ax.plot(xs, [best[x] for x in xs], marker="o", ms=3,
                            color=colors.get(method), label=method)
            ax.set_title(f"d = {dim}")
            ax.set_xlabel("vector count k")
            ax.set_ylabel("best max |cos|")
            ax.legend(fontsize=8)
        for ax in list(axes.flat)[len(dims):]:
            ax.set_visible(False)
        return _save(fig, path)
