"""Figure builders: CSV records in, matplotlib Figure out."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, live_rows

# fixed style so identical inputs render pixel-identical files
STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "lines.linewidth": 1.6,
}

_POLICY_DASH = {"half": "--", "bal": "-"}
_POLICY_NAME = {"half": "T = 1/2", "bal": "T = T_bal"}
_M_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _policy_style(policy: str):
    return _POLICY_DASH.get(policy, ":"), _POLICY_NAME.get(policy, f"T = {policy}")


def render_fig2(rows, title=None):
    rows = live_rows(rows)
    x = np.array([r["x"] for r in rows])
    fig, ax = plt.subplots()
    ax.fill_between(x, [r["p_plus"] for r in rows], color="#1f77b4", alpha=0.35)
    ax.plot(x, [r["p_plus"] for r in rows], color="#1f77b4", label="plus component")
    ax.fill_between(x, [r["p_minus"] for r in rows], color="#ff7f0e", alpha=0.35)
    ax.plot(x, [r["p_minus"] for r in rows], color="#ff7f0e", label="minus component")
    ax.set_xlabel("x (quadrature units)")
    ax.set_ylabel("probability density")
    ax.set_title(title or "macroscopic wavepackets")
    ax.legend(loc="upper right")
    return fig


def _render_curves(rows, value_column, ylabel, title):
    rows = live_rows(rows)
    fig, ax = plt.subplots()
    groups = {}
    for r in rows:
        groups.setdefault((int(r["m"]), r["t_policy"]), []).append((r["r_db"], r[value_column]))
    for (m, policy) in sorted(groups, key=lambda k: (k[0], k[1])):
        pts = sorted(groups[(m, policy)])
        dash, policy_name = _policy_style(policy)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], dash,
                color=_M_COLORS[m % len(_M_COLORS)], label=f"m = {m}, {policy_name}")
    ax.set_xlabel("squeezing (dB)")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=8, ncol=2)
    return fig


def render_fig3(rows, title=None):
    return _render_curves(rows, "D", "mean phase-space distance D",
                          title or "distance vs squeezing")


def render_fig4(rows, title=None):
    return _render_curves(rows, "P", "discrimination rate P",
                          title or "homodyne discrimination rate vs squeezing")


def render_fig5(rows, overlay_rows=None, title=None):
    rows = live_rows(rows)
    dbs = sorted({r["r_db"] for r in rows})
    ts = sorted({r["t"] for r in rows})
    lookup = {(r["r_db"], r["t"]): r["P"] for r in rows}
    grid = np.full((len(ts), len(dbs)), np.nan)
    for i, t in enumerate(ts):
        for j, db in enumerate(dbs):
            grid[i, j] = lookup.get((db, t), np.nan)
    fig, ax = plt.subplots()
    mesh = ax.pcolormesh(dbs, ts, grid, shading="nearest", cmap="viridis",
                         vmin=0.5, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="discrimination rate P")
    if overlay_rows is not None:
        overlay = live_rows(overlay_rows)
        pts = sorted((r["r_db"], r["t_bal"]) for r in overlay)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "--", color="white",
                linewidth=1.8, label="balanced transmission")
        ax.legend(loc="lower right", fontsize=8)
    ax.set_xlabel("squeezing (dB)")
    ax.set_ylabel("transmission T")
    ax.set_title(title or "discrimination rate over squeezing and transmission")
    return fig


def render_remote(rows, title=None):
    rows = live_rows(rows)
    fig, (ax_f, ax_p) = plt.subplots(1, 2, figsize=(9.0, 4.2))
    groups = {}
    for r in rows:
        groups.setdefault(r["lambda"], []).append(r)
    for idx, lam in enumerate(sorted(groups)):
        pts = sorted(groups[lam], key=lambda r: r["eta"])
        etas = [p["eta"] for p in pts]
        color = _M_COLORS[idx % len(_M_COLORS)]
        ax_f.plot(etas, [p["fidelity"] for p in pts], "o-", color=color,
                  label=f"lambda = {lam:g}")
        ax_p.semilogy(etas, [max(p["herald_prob"], 1e-12) for p in pts], "o-", color=color)
    ax_f.set_xlabel("channel transmissivity eta")
    ax_f.set_ylabel("fidelity to the delocalized photon")
    ax_f.set_ylim(0.0, 1.05)
    ax_f.legend(fontsize=8)
    ax_p.set_xlabel("channel transmissivity eta")
    ax_p.set_ylabel("herald probability")
    fig.suptitle(title or "remote heralded preparation under loss")
    return fig


RENDERERS = {
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
    "remote": render_remote,
}


def render(kind, rows, overlay_rows=None, title=None):
    if kind not in RENDERERS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of {sorted(RENDERERS)}")
    with plt.rc_context(STYLE):
        if kind == "fig5":
            return RENDERERS[kind](rows, overlay_rows=overlay_rows, title=title)
        return RENDERERS[kind](rows, title=title)
