"""Weak-coupling regime where the geometric phase transiently dominates.

With weak, strongly asymmetric couplings the eigenvectors rotate a lot per
unit decay, so early in the drive the geometric phase outweighs the
dynamical one before dissipation eventually takes over.  Uses the paper
chart gauge (first eigenvector component fixed to 1), in which the
closed-form two-body integrand applies.

Run:  python demos/geometric_phase_dominance.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import berryheat as bh
from berryheat.phases import accumulate_phases

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

scn = bh.preset("fig3")[0]
eigen, _ = bh.eigen_trajectory(scn, gauge="chart")
ph = accumulate_phases(eigen)

fig, ax = plt.subplots(figsize=(6.5, 4.2))
colors = ("tab:blue", "tab:red")
for branch in range(2):
    ax.plot(eigen.times, ph.dynamical[:, branch], color=colors[branch], lw=1.3,
            label=rf"$\gamma_d$ branch {branch + 1}")
    ax.plot(eigen.times, ph.geometric[:, branch], color=colors[branch], ls="--",
            lw=1.3, label=rf"$\gamma_g$ branch {branch + 1}")
ax.set_xlabel("t (s)")
ax.set_ylabel("cumulative phase")
ax.set_title("Weak asymmetric coupling: geometric phase dominates early")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "phase_dominance.png", dpi=160)

first_cycle = eigen.times <= 1.0
gg = np.abs(ph.geometric[first_cycle]).max(axis=0)
gd = np.abs(ph.dynamical[first_cycle]).max(axis=0)
print("first bath cycle, per branch:")
for branch in range(2):
    ratio = gg[branch] / gd[branch]
    print(f"  branch {branch + 1}: max|gamma_g| = {gg[branch]:.4f}, "
          f"max|gamma_d| = {gd[branch]:.4f}  (ratio {ratio:.2f})")
print("after one pair period (t = 10 s):")
for branch in range(2):
    print(f"  branch {branch + 1}: |gamma_g| = {abs(ph.geometric[-1, branch]):.2e} "
          f"<< |gamma_d| = {abs(ph.dynamical[-1, branch]):.3f}")
print("the geometric boost is transient: closed loops cancel and decay wins")
print(f"figure written to {OUT}/")
