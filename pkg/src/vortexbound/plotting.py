"""Figure rendering for the CLI report paths.

Every figure-producing subcommand emits a CSV first; these helpers
render the same rows with matplotlib when --plot is given.  Data files
stay the deterministic artifact; the figures are a convenience view.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_profile(rows, header, path, gamma2):
    cols = {name: [r[i] for r in rows] for i, name in enumerate(header)}
    fig, axes = plt.subplots(2, 2, figsize=(8, 6), sharex=True)
    for ell, ax in zip(range(4), axes.ravel()):
        ax.plot(cols["r"], cols[f"veff_l{ell}_ode"], "r-", label="numeric")
        ax.plot(cols["r"], cols[f"veff_l{ell}_var"], "b--", label="trial")
        ax.axhline(gamma2, color="grey", lw=0.8)
        ax.set_ylim(0, 2.5 * gamma2)
        ax.set_title(f"$\\ell$ = {ell}")
        if ell == 0:
            ax.legend(fontsize=8)
    for ax in axes[1]:
        ax.set_xlabel(r"$r/\xi$")
    for ax in axes[:, 0]:
        ax.set_ylabel(r"$V_{\mathrm{eff}}$")
    _save(fig, path)


def plot_spectrum_sweep(rows, header, path):
    idx = {name: i for i, name in enumerate(header)}
    fig, ax = plt.subplots(figsize=(7, 5))
    markers = {"deep": "o", "shallow": "D", "exact-match": ".", "numeric": "s"}
    colors = ["tab:blue", "tab:red", "tab:purple", "tab:orange"]
    for ell in sorted({int(r[idx["ell"]]) for r in rows}):
        pts = [r for r in rows if int(r[idx["ell"]]) == ell]
        for kind, mark in markers.items():
            sel = [r for r in pts if r[idx["class"]] == kind]
            if sel:
                ax.plot([r[idx["gamma2"]] for r in sel],
                        [r[idx["E_over_n0g12"]] for r in sel],
                        mark, ms=3, color=colors[ell % 4],
                        label=f"$\\ell$={ell} {kind}")
    ax.set_xlabel(r"$\gamma^2$")
    ax.set_ylabel(r"$E/(n_0 g_{12})$")
    ax.legend(fontsize=7, ncol=2)
    _save(fig, path)


def plot_compare(rows, header, path):
    idx = {name: i for i, name in enumerate(header)}
    fig, ax = plt.subplots(figsize=(7, 5))
    for r in rows:
        g2 = r[idx["gamma2"]]
        ax.plot(g2, r[idx["eps_numeric"]] / g2, "s", color="purple", ms=4)
        ax.plot(g2, r[idx["eps_exactmatch"]] / g2, ".", color="k", ms=3)
        if not math.isnan(r[idx["eps_closedform"]]):
            ax.plot(g2, r[idx["eps_closedform"]] / g2, "x", color="tab:red", ms=4)
    ax.set_xlabel(r"$\gamma^2$")
    ax.set_ylabel(r"$\varepsilon/\gamma^2$")
    ax.set_title("numeric (squares) / matching (dots) / closed form (crosses)")
    _save(fig, path)


def plot_onset_fits(fits, r_grid, solve, path):
    fig, axes = plt.subplots(3, 1, figsize=(6, 9), sharex=True)
    import numpy as np

    for ell, ax in zip((0, 1, 2), axes):
        for fit in [f for f in fits if f.ell == ell]:
            lam = np.array([solve(ell, fit.p, r) for r in r_grid])
            ax.semilogx(r_grid, 1.0 / lam, "o", ms=3)
            ax.semilogx(r_grid, fit.c * (np.log(r_grid) + fit.ln_inv_r), "-", lw=1)
        ax.set_ylabel(rf"$1/\lambda_{{{ell}}}$")
    axes[-1].set_xlabel(r"$R/\xi$")
    _save(fig, path)


def plot_regime(rows, header, path):
    import numpy as np

    idx = {name: i for i, name in enumerate(header)}
    rs = sorted({r[idx["r_over_xi"]] for r in rows})
    gs = sorted({r[idx["gamma2"]] for r in rows})
    grid = np.zeros((len(gs), len(rs)))
    rpos = {v: i for i, v in enumerate(rs)}
    gpos = {v: i for i, v in enumerate(gs)}
    for r in rows:
        grid[gpos[r[idx["gamma2"]]], rpos[r[idx["r_over_xi"]]]] = r[idx["n_states"]]
    fig, ax = plt.subplots(figsize=(7, 5))
    pc = ax.pcolormesh(rs, gs, grid, cmap="Greys", shading="nearest")
    ax.set_xscale("log")
    ax.set_xlabel(r"$R/\xi$")
    ax.set_ylabel(r"$\gamma^2$")
    fig.colorbar(pc, ax=ax, label="bound states")
    _save(fig, path)


def plot_specfun_check(rows, header, path):
    idx = {name: i for i, name in enumerate(header)}
    lam = [r[idx["lambda"]] for r in rows]
    fig, axes = plt.subplots(2, 2, figsize=(8, 6))
    axes[0, 0].plot(lam, [r[idx["K"]] for r in rows], "r-")
    axes[0, 0].set_title(r"$K_{i\lambda}(\lambda)$")
    axes[0, 1].plot(lam, [r[idx["Kprime"]] for r in rows], "r-")
    axes[0, 1].set_title(r"$K'_{i\lambda}(\lambda)$")
    axes[1, 0].plot(lam, [r[idx["K1"]] for r in rows], "r-", label="quadrature")
    axes[1, 0].plot(lam, [r[idx["K1_asym"]] for r in rows], "b--", label="asymptotic")
    axes[1, 0].set_title(r"$\mathcal{K}_1(\lambda)$")
    axes[1, 0].legend(fontsize=8)
    axes[1, 1].plot(lam, [r[idx["K1"]] ** 2 for r in rows], "r-")
    axes[1, 1].plot(lam, [r[idx["K1_asym"]] ** 2 for r in rows], "b--")
    axes[1, 1].set_title(r"$\mathcal{K}_1^2(\lambda)$")
    for ax in axes[1]:
        ax.set_xlabel(r"$\lambda$")
    _save(fig, path)
