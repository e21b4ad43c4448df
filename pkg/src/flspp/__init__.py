"""k-means clustering with d2-sampling seeding and foresight local search."""

from .dataset import Dataset, describe, load_csv, load_ppm_rgb, write_csv
from .errors import ConfigError, DatasetError, DegenerateSamplingError, FlsppError
from .estimator import FLSKMeans
from .lloyd import EmptyPolicy, LloydConfig, lloyd, lloyd_step
from .localsearch import fls_iteration, ls_iteration, naive_swap_oracle
from .pipelines import ALGORITHMS, AlgoConfig, RunRecord, run
from .sampling import RngStream, SeedingConfig, d2_init, greedy_d2_init, sample_center
from .state import ClusteringState, build_state, centroid, cost_with_assignment

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AlgoConfig",
    "ClusteringState",
    "ConfigError",
    "Dataset",
    "DatasetError",
    "DegenerateSamplingError",
    "EmptyPolicy",
    "FLSKMeans",
    "FlsppError",
    "LloydConfig",
    "RngStream",
    "RunRecord",
    "SeedingConfig",
    "build_state",
    "centroid",
    "cost_with_assignment",
    "d2_init",
    "describe",
    "fls_iteration",
    "greedy_d2_init",
    "lloyd",
    "lloyd_step",
    "load_csv",
    "load_ppm_rgb",
    "ls_iteration",
    "naive_swap_oracle",
    "run",
    "sample_center",
    "write_csv",
]
