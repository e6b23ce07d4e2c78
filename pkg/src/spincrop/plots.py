"""Quick-look figures written next to the delimited output files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .propagate import multiplet_magnitudes, reduced_projection


def waveform_figure(waveform, path):
    """Amplitude and phase of the shaped pulse versus time."""
    t = waveform.times * 1e3
    fig, (ax_a, ax_p) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 4.2))
    n_soft = len(t) - waveform.n_hard_cells
    ax_a.step(t[:n_soft], waveform.amplitude[:n_soft], where="post", lw=1.0)
    if waveform.n_hard_cells:
        ax_a.step(t[n_soft - 1:], waveform.amplitude[n_soft - 1:],
                  where="post", lw=1.0, color="C3")
    ax_a.set_ylabel("amplitude (Hz)")
    ax_p.step(t, waveform.phase, where="post", lw=1.0, color="C1")
    ax_p.set_ylabel("phase (rad)")
    ax_p.set_xlabel("t (ms)")
    ax_a.set_title(f"transfer pulse, predicted efficiency "
                   f"{waveform.eta_truncated:.4f}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def trajectory_figure(record, path):
    """Longitudinal coefficients, transverse magnitudes and the multiplet
    component magnitudes along a propagated trajectory."""
    t = record.t * 1e3
    l1, l2, r1, r2, _ = reduced_projection(record.coeffs)
    alpha, beta = multiplet_magnitudes(record.coeffs)
    fig, (ax_z, ax_m) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 4.6))
    ax_z.plot(t, record.expectations("Iz"), label="$I_z$")
    ax_z.plot(t, record.expectations("2IzSz"), label="$2I_zS_z$")
    ax_z.plot(t, r1, "--", lw=0.8, label="$r_1$")
    ax_z.plot(t, r2, "--", lw=0.8, label="$r_2$")
    ax_z.set_ylabel("coefficient")
    ax_z.legend(loc="center right", fontsize=8)
    ax_m.plot(t, l1, label="$l_1$")
    ax_m.plot(t, l2, label="$l_2$")
    ax_m.plot(t, alpha, ":", label=r"$|\alpha|$")
    ax_m.plot(t, beta, ":", label=r"$|\beta|$")
    ax_m.set_ylabel("magnitude")
    ax_m.set_xlabel("t (ms)")
    ax_m.legend(loc="center right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def comparison_figure(rows, path):
    """Optimized efficiency versus ka/J, one line per (scheme, kc/ka)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series = {}
    for row in rows:
        series.setdefault((row["scheme"], row["kc_over_ka"]), []).append(
            (row["ka_over_J"], row["efficiency"]))
    for (scheme, ratio), pts in sorted(series.items()):
        pts = np.array(sorted(pts))
        ax.plot(pts[:, 0], pts[:, 1], marker=".",
                label=f"{scheme}, $k_c/k_a$={ratio:g}")
    ax.set_xlabel("$k_a/J$")
    ax.set_ylabel("efficiency")
    ax.set_xscale("log")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
