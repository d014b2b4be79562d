"""
Simulated trajectories against the exact stationary law
=======================================================

A million steps on K4 minus an edge, compared with the node law obtained by
pulling the stationary wedge law back to nodes.  Mean return times should be
close to 1 / pi(v).
"""

from walklab import Params, build_wedge_kernel, pullback, stationary, walk
from walklab.simulate import occupation, return_times
from walklab.stationary import total_variation
from walklab.generators import clique4_minus_edge

g = clique4_minus_edge()
p = Params(1, 2, 3)
tr = walk(g, p, (0, 1), 10**6, seed=42)
print("trajectory digest:", tr.digest())

exact = pullback(g, stationary(build_wedge_kernel(g, p)), "node").values
emp = occupation(g, tr)["node"].values
print("total variation:", total_variation(emp, exact))
for v in range(g.n):
    rs = return_times(tr, v)
    print(f"  {g.labels[v]}: pi={exact[v]:.4f}  empirical={emp[v]:.4f}  mean return={rs.mean:.3f}  1/pi={1 / exact[v]:.3f}")
