"""One Lloyd iteration and the iterated loop with a relative-improvement stop."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import Dataset
from .errors import ConfigError
from .state import ClusteringState, build_state


class EmptyPolicy(Enum):
    KEEP_OLD = "keep"
    FARTHEST_POINT = "farthest"


DEFAULT_MAX_STEPS = 300
DEFAULT_REL_TOL = 0.0001


@dataclass(frozen=True)
class LloydConfig:
    max_steps: int | None = DEFAULT_MAX_STEPS  # None = unbounded
    rel_tol: float = DEFAULT_REL_TOL
    empty_policy: EmptyPolicy = EmptyPolicy.FARTHEST_POINT

    def __post_init__(self):
        if self.rel_tol < 0:
            raise ConfigError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.max_steps is not None and self.max_steps < 0:
            raise ConfigError(f"max_steps must be >= 0, got {self.max_steps}")


def _centroid_update(ds: Dataset, state: ClusteringState, policy: EmptyPolicy) -> np.ndarray:
    """Centers moved to the centroids of their clusters, empties per policy."""
    counts = state.cluster_count
    new_centers = state.centers.copy()
    nonempty = counts > 0
    new_centers[nonempty] = state.cluster_sum[nonempty] / counts[nonempty, None]
    empties = np.flatnonzero(~nonempty)
    if empties.size and policy is EmptyPolicy.FARTHEST_POINT:
        # distinct farthest points, ties by smallest point index
        order = np.lexsort((np.arange(ds.n), -state.dist1_sq))
        for slot, j in enumerate(empties):
            new_centers[j] = ds.points[order[slot % ds.n]]
    return new_centers


def lloyd_step(
    ds: Dataset,
    state: ClusteringState,
    empty_policy: EmptyPolicy = EmptyPolicy.FARTHEST_POINT,
) -> tuple[ClusteringState, np.ndarray]:
    """One assign-then-recenter step.

    Returns the rebuilt state and the nearest-center assignment of the
    *input* state (the assignment that produced the new centroids), so
    callers can price the new centers under the old assignment.
    """
    phi = state.assign1
    new_centers = _centroid_update(ds, state, empty_policy)
    return build_state(ds, new_centers), phi


def lloyd(
    ds: Dataset, state: ClusteringState, cfg: LloydConfig
) -> tuple[ClusteringState, int]:
    """Iterate lloyd_step until 1 - cost_after/cost_before < rel_tol or the cap."""
    steps = 0
    cur = state
    while cfg.max_steps is None or steps < cfg.max_steps:
        if cur.total_cost == 0.0:
            break
        new, _ = lloyd_step(ds, cur, cfg.empty_policy)
        steps += 1
        prev_cost = cur.total_cost
        cur = new
        # the assign-then-recenter step can never raise the cost; allow a
        # hair of floating-point slack
        assert cur.total_cost <= prev_cost * (1.0 + 1e-9), "lloyd step increased cost"
        if 1.0 - cur.total_cost / prev_cost < cfg.rel_tol:
            break
    return cur, steps
