"""
Lifting a second-order walk to a Markov chain
=============================================

A node2vec walk remembers where it came from, so it is not Markov on nodes.
It becomes Markov once the state is the last directed edge, or the last
two-step path (a wedge).  This script builds both kernels for the triangle
with a pendant edge and looks at their column sums.
"""

import numpy as np

from walklab import Params, build_edge_kernel, build_wedge_kernel, is_bistochastic
from walklab.generators import fig3_triangle_arm

g = fig3_triangle_arm()
print(g.name, "nodes:", g.labels, "degrees:", g.degrees.tolist())
print("directed edges:", g.num_directed_edges, " wedges:", g.num_wedges, g.kind_counts())

# backtrack weight 1, triangle-closing weight 2, any other move weight 3
p = Params(1, 2, 3)
k = build_edge_kernel(g, p)
print("\nedge kernel rows (state -> next state: probability)")
for i, (t, h) in enumerate(g.edge_labels()):
    row = ", ".join(f"{g.edge_labels()[j]}: {v:.3f}" for j, v in k.row(i))
    print(f"  ({t},{h}) -> {row}")

# Rows always sum to one.  Columns only do so when beta == gamma.
print("\ncolumn sums:", np.round(k.col_sums(), 4).tolist())
for b, c in [(2, 3), (2, 2)]:
    v = is_bistochastic(build_edge_kernel(g, Params(1, b, c)))
    print(f"beta={b} gamma={c}: bistochastic={v.bistochastic} (max deviation {v.max_deviation:.3g})")

# The wedge kernel: the probability of entering w does not depend on where we came from.
kw = build_wedge_kernel(g, p)
print("\nwedge kernel:", kw.dim, "states,", kw.matrix.nnz, "nonzero transitions")
