"""
Pushing qutrit channels off the boundary
========================================

Channels on the conjectured qutrit boundary are stacked into a Kraus
column and rotated by exp(iHt) for random GUE Hamiltonians H.  If some
H pushed a channel below the curve, that curve would not be the true edge.
"""

import numpy as np

from opentropy.families import boundary_curve, lower_boundary
from opentropy.linalg import RngStream, gue_hamiltonian
from opentropy.sampling import boundary_probe, evolve_channel

main_branch = boundary_curve(3)[0]
start = main_branch.channel(1 / 3)  # the cusp on the diagonal
h = gue_hamiltonian(9, RngStream(0))
traj = evolve_channel(start, h, np.linspace(0, 1, 11))
for t, p in zip(traj.times, traj.points):
    above = p.s_tilde - lower_boundary(3, [p.s])[0]
    print(f"t = {t:.1f}: S = {p.s:.4f}  S~ = {p.s_tilde:.4f}  height above curve = {above:+.2e}")

report = boundary_probe(3, 30, np.arange(51) * 0.01, seed=0)
print(f"\n{report.n_hamiltonians} Hamiltonians x {report.n_starts} starts x {report.n_times} times")
print(f"deepest point below the curve: {report.max_violation:.2e} (negative or ~0 means none)")
print("worst case:", report.worst)
