"""Matplotlib rendering of trajectories, sweeps, and preset figure datasets."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .ddcontrol import DecoherenceProfile
from .sweep import FigureData, SweepRecord


def render_trajectory(prof: DecoherenceProfile, path, title: str | None = None) -> None:
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax1.plot(prof.t, prof.coherence, color="tab:blue", lw=1.2)
    ax1.set_ylabel("coherence")
    ax1.set_ylim(0, 1.05)
    ax2.plot(prof.t, prof.gamma, color="tab:red", lw=1.2)
    ax2.set_ylabel("dephasing exponent")
    ax2.set_xlabel(r"$t\,[1/\omega_c]$")
    for tp in prof.breakpoints:
        ax1.axvline(tp, color="0.8", lw=0.6, zorder=0)
        ax2.axvline(tp, color="0.8", lw=0.6, zorder=0)
    if title:
        ax1.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _column(data: FigureData, name: str):
    return [row[data.header.index(name)] for row in data.rows]


def _render_fig1(data: FigureData, ax) -> None:
    groups: dict[tuple, list] = {}
    for row in data.rows:
        groups.setdefault((row[0], row[1], row[2]), []).append((row[3], row[5]))
    for (series, s, dt), pts in sorted(groups.items()):
        ts, cs = zip(*pts)
        label = f"s={s:g} free" if series == "free" else f"s={s:g} dt={dt:g}"
        style = "--" if series == "free" else "-"
        ax.plot(ts, cs, style, lw=1.1, label=label)
    ax.set_xlabel(r"$t\,[1/\omega_c]$")
    ax.set_ylabel("coherence")
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=8)


def _render_curves_vs_s(data: FigureData, ax) -> None:
    s = _column(data, "s")
    for name in data.header[1:]:
        ax.plot(s, _column(data, name), "o-", ms=3, lw=1.0, label=name)
    ax.set_xlabel("Ohmicity s")
    ax.legend(fontsize=8)


def _render_fig5(data: FigureData, ax) -> None:
    by_n: dict[int, list] = {}
    for dt, n, s_star, _, _ in data.rows:
        if s_star is not None:
            by_n.setdefault(int(n), []).append((dt, s_star))
    for n, pts in sorted(by_n.items()):
        dts, stars = zip(*sorted(pts))
        if n == 0:
            ax.plot(dts, stars, "r-", lw=1.2, label="free")
        else:
            ax.plot(dts, stars, "o", ms=5, label=f"n={n}")
    ax.axhline(2.0, color="0.6", lw=0.8)
    ax.set_xlabel(r"$\Delta t\,[1/\omega_c]$")
    ax.set_ylabel(r"optimal $s$")
    ax.legend(fontsize=8)


def render_figure(data: FigureData, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    if data.figure_id == "fig1":
        _render_fig1(data, ax)
    elif data.figure_id == "fig5":
        _render_fig5(data, ax)
    else:
        _render_curves_vs_s(data, ax)
        ax.set_ylabel(
            {"fig2": "measure value", "fig3": "efficiency", "fig4": "back-flow measure"}.get(
                data.figure_id, "value"
            )
        )
    if data.comments:
        ax.set_title(data.comments[0], fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep(records: list[SweepRecord], path) -> None:
    slices: dict[tuple, list] = {}
    for rec in records:
        if rec.report is None:
            continue
        slices.setdefault((rec.dt, rec.n_pulses, rec.t_final), []).append(rec)
    fields = ("blp", "efficiency", "stationary_coherence")
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax, name in zip(axes, fields):
        for key, recs in sorted(slices.items()):
            pts = [(r.s, getattr(r.report, name)) for r in recs if getattr(r.report, name) is not None]
            if not pts:
                continue
            ss, vv = zip(*sorted(pts))
            ax.plot(ss, vv, "o-", ms=3, lw=1.0, label=f"dt={key[0]:g} n={key[1]} tf={key[2]:g}")
        ax.set_xlabel("Ohmicity s")
        ax.set_title(name)
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
