"""
Stationary laws and directed detailed balance
=============================================

On a regular graph the stationary wedge law is proportional to the wedge
weights.  Removing one edge from K4 breaks regularity, yet the edge chain
still satisfies directed detailed balance.
"""

import numpy as np

from walklab import Params, build_edge_kernel, build_wedge_kernel, stationary
from walklab.balance import check_edb, check_eulerianity, check_wdb, closed_form_regular
from walklab.generators import clique4_minus_edge, complete

p = Params(1, 2, 3)

k4 = complete(4)
pi = stationary(build_wedge_kernel(k4, p))
print("K4: max |pi - lambda/Z| =", np.abs(pi.values - closed_form_regular(k4, p).values).max())
print("K4: weighted Eulerian:", check_eulerianity(k4, p).holds)

g = clique4_minus_edge()
ke, kw = build_edge_kernel(g, p), build_wedge_kernel(g, p)
pe, pw = stationary(ke), stationary(kw)
print("\nK4 minus an edge: weighted Eulerian:", check_eulerianity(g, p).holds)
print("  edge directed balance residual :", check_edb(g, pe, ke))
print("  wedge directed balance residual:", check_wdb(g, pw, kw))

a, b, c = p.as_tuple()
z = 10 * a + 12 * b + 8 * c
print(f"\nstationary wedge law, times Z = {z:g}:")
for lab, v in zip(g.wedge_labels(), pw.values):
    print(f"  {'-'.join(lab):10s} {v * z:7.4f}")
