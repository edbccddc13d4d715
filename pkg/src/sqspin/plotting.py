"""Figure rendering for sweep outputs.

Kept separate from the CLI so the heavy matplotlib import only happens when a
figure was actually requested.  All functions take plain columns and return a
Figure; callers own saving and closing.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_PHASE_COLORS = {"ordered": "#1f77b4", "disordered": "#d62728", "critical": "#2ca02c"}


def phase_diagram_figure(mode, g, axis2, phases, crit_g, crit_axis2):
    axis2_name = "T" if mode == "equilibrium" else "gamma"
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for label, color in _PHASE_COLORS.items():
        xs = [gv for gv, ph in zip(g, phases) if ph == label]
        ys = [av for av, ph in zip(axis2, phases) if ph == label]
        if xs:
            ax.scatter(xs, ys, s=9, color=color, label=label, linewidths=0)
    if crit_g:
        ax.plot(crit_g, crit_axis2, ".", color="black", markersize=3, label="boundary")
    ax.set_xlabel("g")
    ax.set_ylabel(axis2_name)
    ax.set_title(f"{mode} phase diagram")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def qfi_figure(g, qfi, mode, gamma=None):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    finite = [(gv, qv) for gv, qv in zip(g, qfi) if qv == qv and abs(qv) != float("inf")]
    if finite:
        ax.plot([p[0] for p in finite], [p[1] for p in finite], "-", lw=1.2)
    ax.set_xlabel("g")
    ax.set_ylabel("quantum Fisher information")
    title = f"{mode} QFI"
    if gamma is not None:
        title += f" (gamma={gamma:g})"
    ax.set_title(title)
    ax.set_yscale("log")
    fig.tight_layout()
    return fig


def fisher_figure(g, omega, normalized):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for om in sorted(set(omega)):
        xs = [gv for gv, o, nv in zip(g, omega, normalized) if o == om and nv == nv]
        ys = [nv for gv, o, nv in zip(g, omega, normalized) if o == om and nv == nv]
        if xs:
            ax.plot(xs, ys, "-", lw=1.2, label=f"Omega={om:g}")
    ax.set_xlabel("g")
    ax.set_ylabel("F / QFI")
    ax.set_title("normalized photon-counting Fisher information")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def fisher_vs_squeezing_figure(r, fisher, g):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.plot(r, fisher, "-", lw=1.2)
    ax.set_xlabel("squeezing magnitude r")
    ax.set_ylabel("Fisher information")
    ax.set_title(f"photon-counting Fisher information vs squeezing (g={g:g})")
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=150)
    plt.close(fig)
