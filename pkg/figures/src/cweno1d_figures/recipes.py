"""Figure recipes: each one turns a directory of CSV tables into one PNG.

Inputs are located by schema (column lists) or by the snapshot naming
convention ``<test>_t<time>.csv``; every failure message says which
cweno1d invocation produces the missing table.
"""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import FigureDataError, check_columns, list_csvs, read_table


def _tables_with_columns(in_dir, expected) -> list:
    out = []
    for path in list_csvs(in_dir):
        meta, columns, data = read_table(path)
        if list(columns) == list(expected):
            out.append((path, meta, data))
    return out


def _snapshots(in_dir, test, columns, hint) -> list:
    """Snapshot tables ``<test>_t*.csv`` in time order."""
    paths = [p for p in list_csvs(in_dir)
             if os.path.basename(p).startswith(f"{test}_t")]
    if not paths:
        raise FigureDataError(
            f"no {test} snapshots ({test}_t*.csv) in {in_dir};"
            f" produce them with: {hint}")
    out = []
    for path in paths:
        meta, cols, data = read_table(path)
        check_columns(path, cols, columns)
        if "tend" not in meta:
            raise FigureDataError(f"{path} lacks tend metadata")
        out.append((float(meta["tend"]), meta, data))
    out.sort(key=lambda item: item[0])
    return out


def convergence(in_dir, out_path) -> None:
    tables = _tables_with_columns(in_dir, ["N", "error", "rate"])
    if not tables:
        raise FigureDataError(
            f"no convergence tables (columns N,error,rate) in {in_dir};"
            f" produce one per order with: cweno1d convergence"
            f" --test advect_low --order 3 --out {in_dir}/advect3.csv")
    tables.sort(key=lambda item: item[1].get("order", ""))
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    for path, meta, data in tables:
        order = meta.get("order", os.path.basename(path))
        n, err = data[:, 0], data[:, 1]
        ax.loglog(n, err, "o-", label=f"order {order}")
        try:
            slope = float(order)
        except ValueError:
            continue
        # dashed guide of the nominal slope anchored at the finest point
        guide = err[-1] * (n / n[-1]) ** -slope
        ax.loglog(n, guide, "--", color="0.65", linewidth=1.0, zorder=1)
        ax.annotate(f"{order}", (n[0], guide[0]), fontsize=8,
                    color="0.45", textcoords="offset points", xytext=(3, 3))
    ax.set_xlabel("cells N")
    ax.set_ylabel("1-norm error")
    ax.set_title("grid convergence")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def burgers(in_dir, out_path) -> None:
    snaps = _snapshots(in_dir, "burgers", ["x", "comp0"],
                       f"cweno1d solve --test burgers --out {in_dir}")
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    for t, _, data in snaps:
        ax.plot(data[:, 0], data[:, 1], label=f"t = {t:g}")
    x, u = snaps[-1][2][:, 0], snaps[-1][2][:, 1]
    steep = int(np.argmax(np.abs(np.diff(u))))
    x0 = 0.5 * (x[steep] + x[steep + 1])
    inset = ax.inset_axes([0.04, 0.06, 0.4, 0.4])
    for t, _, data in snaps:
        inset.plot(data[:, 0], data[:, 1])
    inset.set_xlim(x0 - 0.15, x0 + 0.15)
    near = u[np.abs(x - x0) <= 0.15]
    pad = 0.1 * (near.max() - near.min() + 1e-30)
    inset.set_ylim(near.min() - pad, near.max() + pad)
    inset.tick_params(labelsize=6)
    ax.indicate_inset_zoom(inset, edgecolor="0.4")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("Burgers snapshots with shock zoom")
    ax.legend(fontsize=8, loc="upper right")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def lax(in_dir, out_path) -> None:
    snaps = _snapshots(
        in_dir, "lax", ["x", "comp0", "comp1", "comp2"],
        f"cweno1d solve --test lax --char-proj on --out {in_dir}")
    t, _, data = snaps[-1]
    x, rho = data[:, 0], data[:, 1]
    fig, (left, right) = plt.subplots(1, 2, figsize=(8.0, 3.6))
    left.plot(x, rho, "-")
    left.set_xlabel("x")
    left.set_ylabel("density")
    left.set_title(f"t = {t:g}")
    peak = x[int(np.argmax(rho))]
    right.plot(x, rho, ".-", markersize=3)
    right.set_xlim(peak - 1.0, peak + 1.0)
    sel = rho[np.abs(x - peak) <= 1.0]
    pad = 0.05 * (sel.max() - sel.min() + 1e-30)
    right.set_ylim(sel.min() - pad, sel.max() + pad)
    right.set_xlabel("x")
    right.set_title("density peak")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def dam_break(in_dir, out_path) -> None:
    snaps = _snapshots(
        in_dir, "dam_break", ["x", "comp0", "comp1"],
        f"cweno1d solve --test dam_break --wb on --out {in_dir}")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(5.6, 5.6),
                                      sharex=True)
    for t, _, data in snaps:
        top.plot(data[:, 0], data[:, 1], label=f"t = {t:g}")
        bottom.plot(data[:, 0], data[:, 2])
    top.set_ylabel("water depth")
    top.set_title("dam break over a hump")
    top.legend(fontsize=8)
    bottom.set_ylabel("discharge")
    bottom.set_xlabel("x")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def discscan(in_dir, out_path) -> None:
    tables = _tables_with_columns(in_dir, ["d0", "D", "min", "max"])
    if not tables:
        raise FigureDataError(
            f"no step-scan tables (columns d0,D,min,max) in {in_dir};"
            f" produce one with: cweno1d discscan --order 3"
            f" --d0 0.5,0.75,0.9 --out {in_dir}/scan.csv")
    data = np.vstack([t[2] for t in tables])
    d0_values = np.unique(data[:, 0])
    fig, axes = plt.subplots(1, d0_values.size,
                             figsize=(2.8 * d0_values.size, 3.2),
                             sharey=True, squeeze=False)
    for ax, d0 in zip(axes[0], d0_values):
        block = data[data[:, 0] == d0]
        block = block[np.argsort(block[:, 1])]
        ax.plot(block[:, 1], block[:, 2], "-", label="min")
        ax.plot(block[:, 1], block[:, 3], "-", label="max")
        ax.axhline(0.0, color="0.6", linestyle=":", linewidth=1.0)
        ax.axhline(1.0, color="0.6", linestyle=":", linewidth=1.0)
        ax.set_title(f"d0 = {d0:g}", fontsize=9)
        ax.set_xlabel("intermediate value D")
    axes[0][0].set_ylabel("reconstruction range")
    axes[0][0].legend(fontsize=8)
    order = tables[0][1].get("order")
    if order is not None:
        fig.suptitle(f"step reconstruction range, order {order}",
                     fontsize=10)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


RECIPES = {
    "convergence": convergence,
    "burgers": burgers,
    "lax": lax,
    "dam_break": dam_break,
    "discscan": discscan,
}


def render(fig: str, in_dir, out_dir) -> str:
    """Render one named figure from the tables in ``in_dir``; returns the
    path of the PNG written into ``out_dir``."""
    if fig not in RECIPES:
        raise FigureDataError(f"unknown figure {fig!r}; choose from"
                              f" {', '.join(sorted(RECIPES))}")
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, f"{fig}.png")
    RECIPES[fig](in_dir, out_path)
    return out_path
