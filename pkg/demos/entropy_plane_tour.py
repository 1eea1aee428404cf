"""
A tour of the entropy plane
===========================

Every channel gets a point (S, S~): the entropy of its Choi state and the
entropy of its complementary channel.  This script places the named
channels, checks the trade-off S + S~ >= ln N, and shows the two
eigenproblems that give the same number.
"""

import math

import numpy as np

from opentropy import channel as chn
from opentropy.families import named_channel
from opentropy.linalg import RngStream
from opentropy.sampling import haar_block_channel

# named qubit and qutrit channels
for name, n in [("identity", 2), ("emission", 2), ("coarse_graining", 2), ("phi4", 3)]:
    p = chn.entropy_point(named_channel(name, n))
    print(f"{name:>16} N={n}:  S = {p.s:.6f}  S~ = {p.s_tilde:.6f}  sum - ln N = {p.total - math.log(n):+.2e}")

# the map entropy from the N^2 x N^2 Choi state and from the m x m environment state
ch = haar_block_channel(3, 3, RngStream(1))
print("\nChoi spectrum:", np.round(np.linalg.eigvalsh(chn.choi(ch))[::-1], 4))
print("S via Choi state        :", chn.map_entropy(ch))
print("S via complement image  :", chn.map_entropy_via_complement_image(ch))

# the complementary channel swaps the two coordinates
q = chn.entropy_point(chn.complementary(ch))
p = chn.entropy_point(ch)
print(f"\n(S, S~) = ({p.s:.4f}, {p.s_tilde:.4f});  complement: ({q.s:.4f}, {q.s_tilde:.4f})")
