"""Second-order (node2vec) random walks on finite simple graphs.

The walk is studied through its two Markov lifts: the chain on directed
edges and the chain on directed wedges (two-step paths).
"""

from .errors import WalkLabError
from .generators import generate
from .graph import DirectedEdge, Graph, Params, Wedge, WedgeKind, load_edge_list, read_edge_list
from .kernels import Kernel, build_edge_kernel, build_wedge_kernel, is_bistochastic, lazy, n_step
from .stationary import Measure, pullback, stationary
from .simulate import Trajectory, walk

__version__ = "0.1.0"

__all__ = [
    "DirectedEdge",
    "Graph",
    "Kernel",
    "Measure",
    "Params",
    "Trajectory",
    "WalkLabError",
    "Wedge",
    "WedgeKind",
    "build_edge_kernel",
    "build_wedge_kernel",
    "generate",
    "is_bistochastic",
    "lazy",
    "load_edge_list",
    "n_step",
    "pullback",
    "read_edge_list",
    "stationary",
    "walk",
]
