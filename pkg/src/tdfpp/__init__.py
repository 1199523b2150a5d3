"""First passage percolation in time-dependent random environments."""
from .environment import (
    EnvironmentSpec,
    FieldSpec,
    regime_covariance_theoretical,
    sample_environment,
)
from .errors import ConfigurationError, OracleInfeasible, VerificationError
from .geometry import Edge, Path, l1_ball, l1_distance, neighbors
from .kernels import BACKEND_NAME
from .solver import (
    PassageQuery,
    brute_force_first_passage,
    directional_passage,
    earliest_arrival,
    first_passage,
    reachable_set,
    region_radius,
)
from .travel import arrival, path_travel_time, traversal_time

__version__ = "0.1.0"
