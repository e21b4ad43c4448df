"""Seeded randomness, d2-sampling, and the standard / greedy seeding routines."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, DegenerateSamplingError


class RngStream:
    """Deterministic random stream backed by numpy's PCG64 generator.

    The generator algorithm is fixed (PCG64 with SeedSequence expansion of
    ``(seed, namespace)``), so an identical seed yields an identical draw
    sequence on every platform and run. A stream is single-owner: draws
    mutate internal state and must not be interleaved across threads.
    """

    def __init__(self, seed: int, namespace: int = 0):
        self.seed = int(seed)
        self.namespace = int(namespace)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed, self.namespace]))
        )

    def uniform(self) -> float:
        """One uniform real in [0, 1)."""
        return float(self._gen.random())

    def integer(self, m: int) -> int:
        """One uniform integer in [0, m)."""
        return int(self._gen.integers(m))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, namespace={self.namespace})"


def default_greedy_candidates(k: int) -> int:
    """The customary candidate count for greedy seeding: 2 + floor(ln k)."""
    return 2 + int(math.floor(math.log(k)))


@dataclass(frozen=True)
class SeedingConfig:
    k: int
    greedy_candidates: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.greedy_candidates < 1:
            raise ConfigError(f"greedy_candidates must be >= 1, got {self.greedy_candidates}")


def sample_center(ds: Dataset, dists: np.ndarray | None, rng: RngStream) -> int:
    """Draw one point index with probability dists[i] / sum(dists).

    With ``dists`` absent the draw is uniform over all points. Sampling
    follows the three-pass scheme: total the weights, draw r in [0, 1),
    then scan the prefix sums past r * total.
    """
    if dists is None:
        return rng.integer(ds.n)
    dists = np.asarray(dists, dtype=np.float64)
    total = float(dists.sum())
    if total <= 0.0:
        raise DegenerateSamplingError("all candidate distances are zero")
    threshold = rng.uniform() * total
    idx = int(np.searchsorted(np.cumsum(dists), threshold, side="right"))
    return min(idx, ds.n - 1)


def _sq_dists_to(ds: Dataset, point: np.ndarray) -> np.ndarray:
    diff = ds.points - point
    return np.einsum("ij,ij->i", diff, diff)


def d2_init(ds: Dataset, cfg: SeedingConfig, rng: RngStream) -> np.ndarray:
    """Standard adaptive seeding: k centers drawn by iterated d2-sampling.

    The per-point distance cache is updated incrementally after every
    draw, so the whole procedure costs O(ndk).
    """
    if cfg.k > ds.n:
        raise ConfigError(f"k={cfg.k} exceeds number of points n={ds.n}")
    chosen = []
    dists = None
    for _ in range(cfg.k):
        idx = sample_center(ds, dists, rng)
        chosen.append(idx)
        new = _sq_dists_to(ds, ds.points[idx])
        dists = new if dists is None else np.minimum(dists, new)
    return ds.points[chosen].copy()


def greedy_d2_init(
    ds: Dataset, cfg: SeedingConfig, rng: RngStream, trace: list | None = None
) -> np.ndarray:
    """Greedy adaptive seeding.

    Each round draws ``greedy_candidates`` i.i.d. d2-sampled indices
    (uniform in the first round, duplicates allowed) and keeps the one
    whose addition minimizes the total cost, ties broken by smallest
    point index. ``trace``, when a list, collects per-round candidate
    indices and their resulting costs for inspection.
    """
    if cfg.k > ds.n:
        raise ConfigError(f"k={cfg.k} exceeds number of points n={ds.n}")
    ell = cfg.greedy_candidates
    chosen = []
    dists = None
    for _ in range(cfg.k):
        candidates = [sample_center(ds, dists, rng) for _ in range(ell)]
        best_idx = None
        best_cost = None
        best_dists = None
        cand_costs = []
        for idx in candidates:
            new = _sq_dists_to(ds, ds.points[idx])
            merged = new if dists is None else np.minimum(dists, new)
            cost = float(merged.sum())
            cand_costs.append(cost)
            if (
                best_cost is None
                or cost < best_cost
                or (cost == best_cost and idx < best_idx)
            ):
                best_idx, best_cost, best_dists = idx, cost, merged
        if trace is not None:
            trace.append({"candidates": list(candidates), "costs": cand_costs, "chosen": best_idx})
        chosen.append(best_idx)
        dists = best_dists
    return ds.points[chosen].copy()


def seed_centers(ds: Dataset, cfg: SeedingConfig, rng: RngStream) -> np.ndarray:
    """Dispatch to greedy or standard seeding based on the candidate count."""
    if cfg.greedy_candidates > 1:
        return greedy_d2_init(ds, cfg, rng)
    return d2_init(ds, cfg, rng)
