"""
Resistance growth on lattice patches
====================================

For a reversible chain, recurrence is read off from the resistance between a
centre and infinity.  On finite balls we glue the outer sphere into one node
and watch the resistance as the radius grows: it keeps increasing for the
triangular lattice and levels off below 2/3 for the 3-regular tree.
"""

from walklab import Params
from walklab.recurrence import growth_table_csv, recurrence_proxy_experiment, tree_resistance_to_infinity

p = Params(1, 1, 1)
print("triangular lattice patches")
print(growth_table_csv(recurrence_proxy_experiment("triangular", range(2, 7), p)))
print("3-regular tree, infinite-tree resistance =", tree_resistance_to_infinity(3))
print(growth_table_csv(recurrence_proxy_experiment("tree3", range(2, 7), p)))
