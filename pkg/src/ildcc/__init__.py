"""Two-phase relay node deployment for 3-D grid wireless sensor networks.

Phase one connects the base station and cluster heads with the fewest grid
relays; phase two places extra relays with an Artificial Bee Colony search
that minimizes the spectral Wiener index of the backbone while keeping its
algebraic connectivity inside a window.
"""

from .backbone import Backbone, build_backbone, fprn_count
from .colony import AbcResult, ColonyConfig, PlacementProblem, decode, fitness, optimize
from .energy import EnergyParams, lifetime_report, lifetime_rounds, node_energy_per_round
from .errors import (
    ConfigError,
    DisconnectedGraphError,
    DomainError,
    IldccError,
    InfeasibleError,
    NumericError,
)
from .spectral import (
    NetworkGraph,
    Spectrum,
    average_distance,
    eigenvalues,
    fiedler_value,
    laplacian,
    wiener_paths,
    wiener_spectral,
)
from .topology import GridInstance, GridSpec, NodeRole, euclidean_distance, feasible_links, grid_path_relays

__version__ = "0.1.0"
