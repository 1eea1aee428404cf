"""
The qubit boundary
==================

Random qubit channels fill a region of the entropy plane whose lower edge
is traced by a one-parameter family of spontaneous emission channels.
We sample both ways and measure how close the cloud comes to the edge.
"""

import numpy as np

from opentropy.channel import entropy_point
from opentropy.families import boundary_curve, qubit_extremal_channel, violation_depth
from opentropy.sampling import SamplerConfig, survey_arrays

(curve,) = boundary_curve(2)
for a in np.linspace(0, 0.5, 6):
    p = entropy_point(qubit_extremal_channel(a))
    print(f"a = {a:.1f}: family ({p.s:.6f}, {p.s_tilde:.6f})  curve ({curve(a)[0]:.6f}, {curve(a)[1]:.6f})")

# plain Haar block columns rarely reach the edge; the stratified sampler does
for method in ("haar_block", "stratified"):
    s, st, _ = survey_arrays(SamplerConfig(2, 2, method, 20_000, seed=3))
    gap = -violation_depth(2, s, st)
    print(f"{method:>10}: min S~ = {st.min():.2e}, closest approach to the curve = {gap.min():.2e}")
