"""Build matplotlib figures from sweep CSV data.

No numerics beyond grouping and NaN-masking happen here; every plotted
number comes straight out of the CSV.
"""

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
# deterministic SVG element ids, so re-rendering is byte-identical
matplotlib.rcParams["svg.hashsalt"] = "figscripts"

import matplotlib.pyplot as plt
import numpy as np

from .errors import EmptyInput
from .reader import masked_series

#: curve styles per thermal occupation (legend order of the detuning sweep)
NTH_STYLES = {
    70.0: ("red", "solid"),
    100.0: ("blue", "dashed"),
    130.0: ("green", "dashdot"),
    160.0: ("magenta", "dotted"),
}

#: fallback style cycle for curve keys outside the table above
STYLE_CYCLE = (("red", "solid"), ("blue", "dashed"), ("green", "dashdot"),
               ("magenta", "dotted"), ("black", "solid"))


@dataclass
class FigureSpec:
    figure_id: str
    xcol: str
    xlabel: str
    ylabel: str
    group_col: str = ""          # one curve per distinct value of this column
    legend_fmt: str = "{:g}"
    title: str = ""
    xlim: tuple = ()


FIGURE_SPECS = {
    "fig2": FigureSpec(
        figure_id="fig2", xcol="delta_over_wm",
        xlabel=r"$\Delta/\omega_m$", ylabel=r"$E_N$",
        group_col="n_th", legend_fmt=r"$n_{{th}} = {:g}$",
        title="Exciton-mechanics entanglement vs detuning"),
    "fig3a": FigureSpec(
        figure_id="fig3a", xcol="power_uW",
        xlabel=r"$P$ [$\mu$W]", ylabel=r"$E_N$",
        group_col="delta_over_wm", legend_fmt=r"$\Delta/\omega_m = {:g}$",
        title="Exciton-mechanics entanglement vs drive power"),
    "fig3b": FigureSpec(
        figure_id="fig3b", xcol="power_uW",
        xlabel=r"$P$ [$\mu$W]", ylabel=r"$\mathrm{Im}\,\lambda/\omega_m$",
        title="Hybrid-mode frequencies vs drive power"),
    "fig4": FigureSpec(
        figure_id="fig4", xcol="delta_over_wm",
        xlabel=r"$\Delta/\omega_m$", ylabel=r"$E_N^{max}$",
        group_col="n_th", legend_fmt=r"$n_{{th}} = {:g}$",
        title="Power-optimized entanglement vs detuning"),
}


def _style_for(key, index):
    if key in NTH_STYLES:
        return NTH_STYLES[key]
    return STYLE_CYCLE[index % len(STYLE_CYCLE)]


def _footer_text(sidecar):
    if sidecar is None:
        return "no provenance sidecar"
    parts = []
    for k in ("sweep_var", "schema_version", "version", "generated_utc"):
        if k in sidecar:
            parts.append(f"{k}={sidecar[k]}")
    if "n_points_total" in sidecar:
        parts.append(f"points={sidecar['n_points_total']}")
    return "  ".join(parts)


def _add_footer(fig, sidecar):
    fig.text(0.01, 0.01, _footer_text(sidecar), fontsize=6, color="gray")


def build_curves_figure(spec, data, sidecar=None):
    """One curve per distinct value of `spec.group_col`, E_N on the y-axis."""
    keys = sorted(set(float(v) for v in data[spec.group_col]))
    if not keys:
        raise EmptyInput(f"{spec.figure_id}: no curves in input")
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    y_all = masked_series(data, "E_N")
    for i, key in enumerate(keys):
        sel = data[spec.group_col] == key
        order = np.argsort(data[spec.xcol][sel], kind="stable")
        x = data[spec.xcol][sel][order]
        y = y_all[sel][order]
        color, ls = _style_for(key, i)
        ax.plot(x, y, color=color, linestyle=ls,
                label=spec.legend_fmt.format(key))
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.set_title(spec.title)
    ax.legend()
    _add_footer(fig, sidecar)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    return fig


def build_spectrum_figure(spec, data, sidecar=None):
    """The two upper drift-eigenvalue branches vs drive power.

    Eigenvalues arrive sorted by descending imaginary part, so columns
    eig1_im and eig2_im are the two positive branches. They are normalized
    by omega_m from the sidecar when available, else plotted in rad/s.
    """
    omega_m = None
    if sidecar is not None:
        omega_m = sidecar.get("base_params", {}).get("omega_m")
    scale = omega_m if omega_m else 1.0
    ylabel = spec.ylabel if omega_m else r"$\mathrm{Im}\,\lambda$ [rad/s]"

    order = np.argsort(data[spec.xcol], kind="stable")
    x = data[spec.xcol][order]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for col, (color, ls), label in (
            ("eig1_im", ("red", "solid"), "upper branch"),
            ("eig2_im", ("blue", "dashed"), "lower branch")):
        y = masked_series(data, col)[order] / scale
        ax.plot(x, y, color=color, linestyle=ls, label=label)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(spec.title)
    ax.legend()
    _add_footer(fig, sidecar)
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    return fig


def build_figure(figure_id, data, sidecar=None):
    spec = FIGURE_SPECS[figure_id]
    if figure_id == "fig3b":
        return build_spectrum_figure(spec, data, sidecar=sidecar)
    return build_curves_figure(spec, data, sidecar=sidecar)


def save_figure(fig, path):
    """Write the figure without volatile metadata (re-runs are identical)."""
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    elif path.endswith(".png"):
        fig.savefig(path, metadata={"Software": None})
    else:
        fig.savefig(path)
    plt.close(fig)
