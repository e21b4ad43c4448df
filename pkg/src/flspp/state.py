"""Clustering state with first/second-nearest caches and exact cost accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


def pairwise_sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """n x k squared Euclidean distances, computed directly per center.

    Distances are summed as (x_i - c_i)^2 rather than via the norm
    expansion, trading a little speed for exact reproducibility.
    """
    n = points.shape[0]
    k = centers.shape[0]
    out = np.empty((n, k), dtype=np.float64)
    for j in range(k):
        diff = points - centers[j]
        out[:, j] = np.einsum("ij,ij->i", diff, diff)
    return out


@dataclass(frozen=True)
class ClusteringState:
    """Immutable snapshot of a center set against a dataset.

    Carries, for every point, the closest and second-closest center
    (ties broken by smallest center index) with their squared distances,
    plus per-cluster coordinate sums and counts. For k = 1 the
    second-closest fields are sentinels (index = closest, distance inf).
    """

    centers: np.ndarray       # k x d
    assign1: np.ndarray       # n, closest center index
    assign2: np.ndarray       # n, second-closest center index
    dist1_sq: np.ndarray      # n
    dist2_sq: np.ndarray      # n
    cluster_sum: np.ndarray   # k x d
    cluster_count: np.ndarray  # k
    total_cost: float

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def _freeze(*arrays):
    for a in arrays:
        a.flags.writeable = False


def build_state(ds: Dataset, centers: np.ndarray) -> ClusteringState:
    """Full O(ndk) pass: nearest and second-nearest center for every point."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[1] != ds.d:
        raise ValueError(f"centers must be k x {ds.d}, got shape {centers.shape}")
    centers = centers.copy()
    n = ds.n
    k = centers.shape[0]
    dmat = pairwise_sq_dists(ds.points, centers)
    rows = np.arange(n)
    assign1 = np.argmin(dmat, axis=1)
    dist1_sq = dmat[rows, assign1].copy()
    if k >= 2:
        dmat[rows, assign1] = np.inf
        assign2 = np.argmin(dmat, axis=1)
        dist2_sq = dmat[rows, assign2].copy()
    else:
        assign2 = assign1.copy()
        dist2_sq = np.full(n, np.inf)

    cluster_count = np.bincount(assign1, minlength=k)
    cluster_sum = np.empty((k, ds.d), dtype=np.float64)
    for dim in range(ds.d):
        cluster_sum[:, dim] = np.bincount(assign1, weights=ds.points[:, dim], minlength=k)

    _freeze(centers, assign1, assign2, dist1_sq, dist2_sq, cluster_sum, cluster_count)
    return ClusteringState(
        centers=centers,
        assign1=assign1,
        assign2=assign2,
        dist1_sq=dist1_sq,
        dist2_sq=dist2_sq,
        cluster_sum=cluster_sum,
        cluster_count=cluster_count,
        total_cost=float(dist1_sq.sum()),
    )


def cost_with_assignment(ds: Dataset, centers: np.ndarray, assignment: np.ndarray) -> float:
    """Cost of the clustering under a fixed (possibly suboptimal) assignment."""
    assignment = np.asarray(assignment)
    centers = np.asarray(centers, dtype=np.float64)
    if assignment.min() < 0 or assignment.max() >= centers.shape[0]:
        raise ValueError("assignment contains out-of-range center indices")
    diff = ds.points - centers[assignment]
    return float(np.einsum("ij,ij->i", diff, diff).sum())


def centroid(ds: Dataset, assignment: np.ndarray, j: int) -> np.ndarray | None:
    """Mean of the points assigned to cluster j, or None if it is empty."""
    mask = np.asarray(assignment) == j
    if not mask.any():
        return None
    return ds.points[mask].mean(axis=0)
