"""Figure rendering for the report commands.

Each renderer takes already-computed data and writes a PNG next to the
delimited output; nothing here feeds back into the numbers.
"""

import matplotlib

matplotlib.use("Agg")

import numpy as np
import matplotlib.pyplot as plt


def render_mi_sweep(rows, path, bits=False):
    """MI curves versus average power on a log axis."""
    unit = "bit/symb." if bits else "nat/symb."
    p = np.array([r["power_mw"] for r in rows])

    def col(name):
        return np.array([np.nan if r[name] is None else r[name] for r in rows])

    fig, ax = plt.subplots(figsize=(7.2, 5.0))
    series = [
        ("i_opt", "optimal input", dict(color="k", ls="-", lw=2.0)),
        ("i_beta2", "Gaussian input", dict(color="C0", ls="--", lw=1.8)),
        ("i_beta1", "half-Gaussian input", dict(color="C3", ls="-.", lw=1.8)),
        ("shannon", "linear-channel log(1+SNR)", dict(color="C2", ls=":", lw=1.8)),
    ]
    for key, label, style in series:
        v = col(key)
        if np.any(np.isfinite(v)):
            ax.plot(p, v, label=label, **style)
    for key, label, color in (("i_beta1_asymptote", "half-Gaussian plateau", "C3"),
                              ("prior_bound", "prior baseline", "0.5")):
        v = col(key)
        if np.any(np.isfinite(v)):
            ax.axhline(np.nanmax(v), color=color, ls=":", lw=1.0, label=label)
    ax.set_xscale("log")
    ax.set_xlabel("P [mW]")
    ax.set_ylabel(f"I [{unit}]")
    ax.grid(True, alpha=0.3, which="both")
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_pdf_grid(x0, y0, p_lead, p_nlo, path):
    """Side-by-side heatmaps of the conditional density at both orders."""
    fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.2), sharey=True)
    for ax, vals, title in ((axes[0], p_lead, "leading order"),
                            (axes[1], p_nlo, "next-to-leading order")):
        pc = ax.pcolormesh(x0, y0, vals.T, shading="auto", cmap="viridis")
        fig.colorbar(pc, ax=ax, label="density [1/mW]")
        ax.set_xlabel("x0 [mW$^{1/2}$]")
        ax.set_title(title)
    axes[0].set_ylabel("y0 [mW$^{1/2}$]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mc_cartesian(emp, masses, path):
    """Empirical vs analytic cell masses and their difference."""
    xedges, yedges = emp.edges
    emp_mass = emp.cell_mass()
    fig, axes = plt.subplots(1, 3, figsize=(13.0, 4.0), sharey=True)
    vmax = float(max(emp_mass.max(), masses.max()))
    for ax, vals, title in ((axes[0], emp_mass, "empirical"),
                            (axes[1], masses, "analytic")):
        pc = ax.pcolormesh(xedges, yedges, vals.T, shading="auto", vmin=0.0, vmax=vmax)
        fig.colorbar(pc, ax=ax)
        ax.set_title(title)
        ax.set_xlabel("x0")
    diff = emp_mass - masses
    lim = float(np.abs(diff).max())
    pc = axes[2].pcolormesh(xedges, yedges, diff.T, shading="auto",
                            cmap="RdBu_r", vmin=-lim, vmax=lim)
    fig.colorbar(pc, ax=axes[2])
    axes[2].set_title("difference")
    axes[2].set_xlabel("x0")
    axes[0].set_ylabel("y0")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mc_radial(emp, masses, path):
    """Radial histogram against the analytic bin masses."""
    (redges,) = emp.edges
    centers = 0.5 * (redges[:-1] + redges[1:])
    width = redges[1] - redges[0]
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    ax.bar(centers, emp.cell_mass() / width, width=width, alpha=0.45,
           label="empirical", color="C0")
    ax.plot(centers, masses / width, "k-", lw=1.6, label="analytic")
    ax.set_xlabel("|Y| [mW$^{1/2}$]")
    ax.set_ylabel("radial density [1/mW$^{1/2}$]")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
