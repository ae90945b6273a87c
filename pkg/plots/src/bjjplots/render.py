"""Figure rendering from recipe files.

A recipe is a small JSON document naming the figure kind, the panel layout,
and the input files with their display styles.  Rendering is file-in,
image-out: identical inputs give byte-identical images.
"""

from __future__ import annotations

import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .readers import ParseError, read_husimi, read_sweep, read_trajectory

Z_LABEL = r"$z$"
SIN_LABEL = r"$\langle\sin\hat{\varphi}\rangle$"
VAR_LABEL = r"$\Delta(\sin\hat{\varphi})$"

_METHOD_STYLE = {
    "meanfield": dict(color="k", ls="-", marker=None, label="mean field"),
    "variational-n2": dict(color="tab:red", ls="none", marker="D", label="two configurations"),
    "exact-groundstate": dict(color="tab:blue", ls="none", marker="o", label="exact ground state"),
}


def load_recipe(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        recipe = json.load(fh)
    for key in ("figure", "kind", "panels", "out"):
        if key not in recipe:
            raise ParseError(f"{path}: recipe is missing the {key!r} key")
    return recipe


def render(recipe: dict, data_dir: str) -> plt.Figure:
    kind = recipe["kind"]
    if kind == "phase_portraits":
        fig = _render_portraits(recipe, data_dir)
    elif kind == "timeseries":
        fig = _render_timeseries(recipe, data_dir)
    elif kind == "husimi":
        fig = _render_husimi(recipe, data_dir)
    elif kind == "onset":
        fig = _render_onset(recipe, data_dir)
    else:
        raise ParseError(f"unknown figure kind {kind!r}")
    return fig


def render_to_file(recipe_path: str, data_dir: str, out_dir: str) -> str:
    recipe = load_recipe(recipe_path)
    fig = render(recipe, data_dir)
    os.makedirs(out_dir, exist_ok=True)
    out = os.path.join(out_dir, recipe["out"])
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def _panel_grid(recipe):
    panels = recipe["panels"]
    ncols = recipe.get("ncols", len(panels))
    nrows = (len(panels) + ncols - 1) // ncols
    width = recipe.get("panel_width", 3.4)
    height = recipe.get("panel_height", 3.0)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(width * ncols, height * nrows), squeeze=False
    )
    return fig, [axes[i // ncols][i % ncols] for i in range(len(panels))], axes


def _render_portraits(recipe, data_dir):
    fig, axes, all_axes = _panel_grid(recipe)
    for ax, panel in zip(axes, recipe["panels"]):
        for item in panel["inputs"]:
            traj = read_trajectory(os.path.join(data_dir, item["file"]))
            ax.plot(traj["z"], traj["sin_phi"], label=item.get("label"), lw=0.8,
                    **item.get("style", {}))
        ax.set_title(panel.get("label", ""), fontsize=10)
        ax.set_xlabel(Z_LABEL)
        ax.set_ylabel(SIN_LABEL)
        if any("label" in item for item in panel["inputs"]):
            ax.legend(fontsize=7)
    _hide_spare_axes(all_axes, len(recipe["panels"]))
    fig.suptitle(recipe.get("title", ""), fontsize=11)
    fig.tight_layout()
    return fig


def _render_timeseries(recipe, data_dir):
    fig, axes, all_axes = _panel_grid(recipe)
    labels = {"sin_phi": SIN_LABEL, "var_sin": VAR_LABEL, "z": Z_LABEL}
    for ax, panel in zip(axes, recipe["panels"]):
        for item in panel["inputs"]:
            traj = read_trajectory(os.path.join(data_dir, item["file"]))
            column = item.get("column", "sin_phi")
            ax.plot(traj["t"], traj[column], label=item.get("label"), lw=0.8,
                    **item.get("style", {}))
        ax.set_title(panel.get("label", ""), fontsize=10)
        ax.set_xlabel(r"$Jt$")
        ax.set_ylabel(labels.get(panel.get("ylabel", "sin_phi"), panel.get("ylabel", "")))
        ax.legend(fontsize=7)
    _hide_spare_axes(all_axes, len(recipe["panels"]))
    fig.suptitle(recipe.get("title", ""), fontsize=11)
    fig.tight_layout()
    return fig


def _render_husimi(recipe, data_dir):
    fig, axes, all_axes = _panel_grid(recipe)
    for ax, panel in zip(axes, recipe["panels"]):
        (item,) = panel["inputs"]
        grid = read_husimi(os.path.join(data_dir, item["file"]))
        mesh = ax.pcolormesh(grid.z_axis, grid.phi_axis, grid.Q.T, cmap="viridis",
                             shading="nearest", rasterized=True)
        fig.colorbar(mesh, ax=ax, shrink=0.85)
        ax.set_title(panel.get("label", ""), fontsize=10)
        ax.set_xlabel(Z_LABEL)
        ax.set_ylabel(r"$\varphi$")
    _hide_spare_axes(all_axes, len(recipe["panels"]))
    fig.suptitle(recipe.get("title", ""), fontsize=11)
    fig.tight_layout()
    return fig


def _render_onset(recipe, data_dir):
    fig, axes, all_axes = _panel_grid(recipe)
    for ax, panel in zip(axes, recipe["panels"]):
        for item in panel["inputs"]:
            sweep = read_sweep(os.path.join(data_dir, item["file"]))
            method = sweep.method[0]
            style = dict(_METHOD_STYLE.get(method, {}))
            style.update(item.get("style", {}))
            label = style.pop("label", method)
            if method == "meanfield":
                # draw the smooth classical curve through the swept range
                S_dense = np.linspace(sweep.S.min(), sweep.S.max(), 200)
                ax.plot(S_dense, 2.0 / (S_dense - 1.0), color=style.get("color", "k"),
                        lw=1.0, label=label)
                ax.plot(sweep.S, np.abs(sweep.u_critical), ls="none", marker="+",
                        color=style.get("color", "k"))
            else:
                ax.plot(sweep.S, np.abs(sweep.u_critical), label=label, **style)
        ax.set_xlabel(r"$S$")
        ax.set_ylabel(r"$|U|/J$")
        ax.set_title(panel.get("label", ""), fontsize=10)
        ax.legend(fontsize=8)
    _hide_spare_axes(all_axes, len(recipe["panels"]))
    fig.suptitle(recipe.get("title", ""), fontsize=11)
    fig.tight_layout()
    return fig


def _hide_spare_axes(axes, used):
    flat = [ax for row in axes for ax in row]
    for ax in flat[used:]:
        ax.set_visible(False)
