"""Center-swap local search: the plain swap step, the foresight swap step
with its O(ndk) fast path, and a naive O(ndk^2) oracle for equivalence tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateSamplingError
from .lloyd import EmptyPolicy, lloyd_step
from .sampling import RngStream, sample_center
from .state import ClusteringState, build_state, cost_with_assignment


@dataclass(frozen=True)
class SwapEvaluation:
    removed_center: int
    inserted_point: int
    resulting_cost: float


@dataclass(frozen=True)
class IterationResult:
    """Outcome of one local-search iteration.

    ``chosen_swap`` is the removed center index, or None when the no-swap
    baseline won (or the iteration was a degenerate no-op). ``swap_costs``
    holds the evaluated cost for every candidate removal; ``best_swap``
    is the argmin over swaps only, ignoring the baseline.
    """

    state: ClusteringState
    noop: bool
    c_new: int | None = None
    chosen_swap: int | None = None
    baseline_cost: float | None = None
    swap_costs: np.ndarray | None = None
    best_swap: SwapEvaluation | None = None


def _new_point_dists(ds: Dataset, idx: int) -> np.ndarray:
    diff = ds.points - ds.points[idx]
    return np.einsum("ij,ij->i", diff, diff)


def ls_iteration(
    ds: Dataset,
    state: ClusteringState,
    rng: RngStream | None,
    candidate: int | None = None,
) -> IterationResult:
    """One plain swap step: d2-sample a point, take the best strict improvement.

    Every candidate removal is priced by direct nearest-assignment cost
    using the closest/second-closest caches, so the full sweep over k
    removals costs O(n + k) after the O(nd) distance pass. ``candidate``
    forces the sampled point index (no draw is made).
    """
    if state.k < 2:
        raise ValueError("local search requires k >= 2")
    if candidate is not None:
        c_new = int(candidate)
    else:
        try:
            c_new = sample_center(ds, state.dist1_sq, rng)
        except DegenerateSamplingError:
            return IterationResult(state=state, noop=True)

    d_new = _new_point_dists(ds, c_new)
    k = state.k

    # cost of removing center j = base cost with points of cluster j
    # re-priced against min(second-closest, new point)
    base = np.minimum(state.dist1_sq, d_new)
    total_base = float(base.sum())
    kept = np.bincount(state.assign1, weights=base, minlength=k)
    repriced = np.bincount(
        state.assign1, weights=np.minimum(state.dist2_sq, d_new), minlength=k
    )
    swap_costs = total_base - kept + repriced

    best_j = None
    best_cost = state.total_cost
    for j in range(k):
        if swap_costs[j] < best_cost:
            best_j = j
            best_cost = swap_costs[j]

    best_swap = SwapEvaluation(
        removed_center=int(np.argmin(swap_costs)),
        inserted_point=c_new,
        resulting_cost=float(swap_costs.min()),
    )
    if best_j is None:
        return IterationResult(
            state=state,
            noop=False,
            c_new=c_new,
            chosen_swap=None,
            baseline_cost=state.total_cost,
            swap_costs=swap_costs,
            best_swap=best_swap,
        )

    new_centers = state.centers.copy()
    new_centers[best_j] = ds.points[c_new]
    return IterationResult(
        state=build_state(ds, new_centers),
        noop=False,
        c_new=c_new,
        chosen_swap=best_j,
        baseline_cost=state.total_cost,
        swap_costs=swap_costs,
        best_swap=best_swap,
    )


def _partition_cost_and_centroids(
    ds: Dataset, phi: np.ndarray, pre_step_centers: np.ndarray
) -> tuple[float, np.ndarray]:
    """One centroid step for assignment phi, empty clusters keeping position.

    Returns the cost of phi priced against the moved centers, and the
    moved centers themselves.
    """
    k = pre_step_centers.shape[0]
    counts = np.bincount(phi, minlength=k)
    centers = pre_step_centers.copy()
    nonempty = counts > 0
    sums = np.empty((k, ds.d), dtype=np.float64)
    for dim in range(ds.d):
        sums[:, dim] = np.bincount(phi, weights=ds.points[:, dim], minlength=k)
    centers[nonempty] = sums[nonempty] / counts[nonempty, None]
    diff = ds.points - centers[phi]
    cost = float(np.einsum("ij,ij->i", diff, diff).sum())
    return cost, centers


def fls_iteration(
    ds: Dataset,
    state: ClusteringState,
    rng: RngStream | None,
    candidate: int | None = None,
) -> IterationResult:
    """One foresight swap step.

    Samples a new point by d2-sampling, then evaluates the no-swap
    baseline and every removal candidate by one Lloyd step each. Each
    candidate's post-swap assignment is resolved per point in O(1) from
    the cached closest/second-closest centers and the distance to the
    sampled point, so the whole iteration runs in O(ndk). The winner's
    caches are rebuilt once at the end (the reassignment that is skipped
    per candidate). ``candidate`` forces the sampled point index.
    """
    if state.k < 2:
        raise ValueError("local search requires k >= 2")
    if candidate is not None:
        c_new = int(candidate)
    else:
        try:
            c_new = sample_center(ds, state.dist1_sq, rng)
        except DegenerateSamplingError:
            return IterationResult(state=state, noop=True)

    k = state.k
    assign1 = state.assign1
    assign2 = state.assign2
    d_new = _new_point_dists(ds, c_new)
    x_new = ds.points[c_new]

    # no-swap baseline: one centroid step under the current assignment
    baseline_cost, baseline_centers = _partition_cost_and_centroids(
        ds, assign1, state.centers
    )

    swap_costs = np.empty(k, dtype=np.float64)
    best_cost = baseline_cost
    best_j = None
    best_centers = baseline_centers
    best_swap_j = None
    best_swap_cost = np.inf
    best_swap_centers = None

    for j in range(k):
        # new point occupies slot j; ties go to the smaller center index
        prefer_new = (d_new < state.dist1_sq) | (
            (d_new == state.dist1_sq) & (j < assign1)
        )
        phi = np.where(prefer_new, j, assign1)
        in_j = assign1 == j
        if in_j.any():
            to_new = (d_new[in_j] < state.dist2_sq[in_j]) | (
                (d_new[in_j] == state.dist2_sq[in_j]) & (j < assign2[in_j])
            )
            phi[in_j] = np.where(to_new, j, assign2[in_j])

        pre_step = state.centers.copy()
        pre_step[j] = x_new
        cost, moved = _partition_cost_and_centroids(ds, phi, pre_step)
        swap_costs[j] = cost
        if cost < best_swap_cost:
            best_swap_j, best_swap_cost, best_swap_centers = j, cost, moved
        if cost < best_cost:
            best_j, best_cost, best_centers = j, cost, moved

    best_swap = SwapEvaluation(
        removed_center=best_swap_j, inserted_point=c_new, resulting_cost=best_swap_cost
    )
    return IterationResult(
        state=build_state(ds, best_centers),
        noop=False,
        c_new=c_new,
        chosen_swap=best_j,
        baseline_cost=baseline_cost,
        swap_costs=swap_costs,
        best_swap=best_swap,
    )


def naive_swap_oracle(
    ds: Dataset, centers: np.ndarray, c_new: int
) -> tuple[int, float, np.ndarray]:
    """Evaluate every removal from scratch: rebuild, one textbook Lloyd step.

    Returns the best (removed index, cost under the pre-centroid
    assignment, moved centers), ties by smallest removed index. Costs
    O(ndk) per removal, O(ndk^2) total.
    """
    centers = np.asarray(centers, dtype=np.float64)
    k = centers.shape[0]
    if k < 2:
        raise ValueError("local search requires k >= 2")
    best = None
    for j in range(k):
        swapped = centers.copy()
        swapped[j] = ds.points[c_new]
        st = build_state(ds, swapped)
        stepped, phi = lloyd_step(ds, st, EmptyPolicy.KEEP_OLD)
        cost = cost_with_assignment(ds, stepped.centers, phi)
        if best is None or cost < best[1]:
            best = (j, cost, stepped.centers)
    return best
