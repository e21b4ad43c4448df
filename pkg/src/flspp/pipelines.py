"""The six named pipelines: km, gkm, ls, gls, fls, gfls.

Each run derives two independent sub-streams from one master seed (one
for seeding, one for local-search sampling) so that changing the number
of local-search steps never perturbs the initial centers.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import ConfigError
from .lloyd import EmptyPolicy, LloydConfig, lloyd, lloyd_step
from .localsearch import fls_iteration, ls_iteration
from .sampling import RngStream, SeedingConfig, default_greedy_candidates, seed_centers
from .state import build_state

ALGORITHMS = ("km", "gkm", "ls", "gls", "fls", "gfls")

_SEEDING_NS = 0
_SEARCH_NS = 1


@dataclass(frozen=True)
class AlgoConfig:
    algorithm: str
    k: int
    z: int = 0
    greedy_candidates: int | None = None
    lloyd: LloydConfig = field(default_factory=LloydConfig)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.z < 0:
            raise ConfigError(f"z must be >= 0, got {self.z}")
        if self.greedy_candidates is not None and self.greedy_candidates < 1:
            raise ConfigError(f"greedy_candidates must be >= 1, got {self.greedy_candidates}")

    @property
    def is_greedy(self) -> bool:
        return self.algorithm.startswith("g")

    @property
    def uses_local_search(self) -> bool:
        return self.algorithm in ("ls", "gls", "fls", "gfls")

    @property
    def uses_foresight(self) -> bool:
        return self.algorithm in ("fls", "gfls")

    def seeding_config(self) -> SeedingConfig:
        if self.is_greedy:
            ell = self.greedy_candidates or default_greedy_candidates(self.k)
            if ell < 2:
                raise ConfigError("greedy variants require greedy_candidates >= 2")
        else:
            ell = 1
        return SeedingConfig(k=self.k, greedy_candidates=ell)


@dataclass
class RunRecord:
    algo: str
    seed: int
    k: int
    z: int
    greedy_l: int
    final_cost: float
    wall_time_ms: float
    lloyd_steps: int
    ls_iterations: int
    init_digest: str
    trajectory: list  # [[elapsed_ms, best_cost_so_far], ...]
    reference_opt: float | None = None

    def to_dict(self) -> dict:
        out = {
            "algo": self.algo,
            "seed": self.seed,
            "k": self.k,
            "z": self.z,
            "greedy_l": self.greedy_l,
            "final_cost": self.final_cost,
            "wall_time_ms": self.wall_time_ms,
            "lloyd_steps": self.lloyd_steps,
            "ls_iterations": self.ls_iterations,
            "init_digest": self.init_digest,
            "trajectory": self.trajectory,
        }
        if self.reference_opt is not None:
            out["reference_opt"] = self.reference_opt
        return out


def centers_digest(centers: np.ndarray) -> str:
    """Stable hash of a center array, for shared-init verification."""
    h = hashlib.sha256()
    h.update(str(centers.shape).encode())
    h.update(np.ascontiguousarray(centers, dtype=np.float64).tobytes())
    return h.hexdigest()[:16]


class _Trajectory:
    """Best-cost-so-far samples against a monotonic clock."""

    def __init__(self):
        self._t0 = time.perf_counter()
        self.points: list[list[float]] = []
        self._best = np.inf

    def record(self, cost: float):
        self._best = min(self._best, cost)
        elapsed_ms = (time.perf_counter() - self._t0) * 1000.0
        self.points.append([elapsed_ms, self._best])

    @property
    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0

    @property
    def best(self) -> float:
        return self._best


def run(
    ds: Dataset,
    cfg: AlgoConfig,
    reference_opt: float | None = None,
    return_state: bool = False,
):
    """Execute one pipeline end to end and fill a RunRecord.

    With ``return_state`` the final ClusteringState is returned alongside
    the record.
    """
    if cfg.k > ds.n:
        raise ConfigError(f"k={cfg.k} exceeds number of points n={ds.n}")
    if cfg.uses_local_search and cfg.k < 2:
        raise ConfigError("local-search pipelines require k >= 2")

    seed_rng = RngStream(cfg.seed, namespace=_SEEDING_NS)
    search_rng = RngStream(cfg.seed, namespace=_SEARCH_NS)
    traj = _Trajectory()

    centers = seed_centers(ds, cfg.seeding_config(), seed_rng)
    digest = centers_digest(centers)
    state = build_state(ds, centers)
    traj.record(state.total_cost)

    lloyd_steps = 0
    ls_iterations = 0

    if cfg.uses_foresight:
        state, _ = lloyd_step(ds, state, cfg.lloyd.empty_policy)
        lloyd_steps += 1
        traj.record(state.total_cost)
        for _ in range(cfg.z):
            result = fls_iteration(ds, state, search_rng)
            state = result.state
            ls_iterations += 1
            traj.record(state.total_cost)
    elif cfg.uses_local_search:
        for _ in range(cfg.z):
            result = ls_iteration(ds, state, search_rng)
            state = result.state
            ls_iterations += 1
            traj.record(state.total_cost)

    state, steps = lloyd(ds, state, cfg.lloyd)
    lloyd_steps += steps
    traj.record(state.total_cost)

    record = RunRecord(
        algo=cfg.algorithm,
        seed=cfg.seed,
        k=cfg.k,
        z=cfg.z if cfg.uses_local_search else 0,
        greedy_l=cfg.seeding_config().greedy_candidates,
        final_cost=traj.best,
        wall_time_ms=traj.elapsed_ms,
        lloyd_steps=lloyd_steps,
        ls_iterations=ls_iterations,
        init_digest=digest,
        trajectory=traj.points,
        reference_opt=reference_opt,
    )
    if return_state:
        return record, state
    return record


def run_kmeans_pp(ds: Dataset, cfg: AlgoConfig, **kw) -> RunRecord:
    if cfg.algorithm not in ("km", "gkm"):
        raise ConfigError(f"run_kmeans_pp expects km/gkm, got {cfg.algorithm}")
    return run(ds, cfg, **kw)


def run_ls_pp(ds: Dataset, cfg: AlgoConfig, **kw) -> RunRecord:
    if cfg.algorithm not in ("ls", "gls"):
        raise ConfigError(f"run_ls_pp expects ls/gls, got {cfg.algorithm}")
    return run(ds, cfg, **kw)


def run_fls_pp(ds: Dataset, cfg: AlgoConfig, **kw) -> RunRecord:
    if cfg.algorithm not in ("fls", "gfls"):
        raise ConfigError(f"run_fls_pp expects fls/gfls, got {cfg.algorithm}")
    return run(ds, cfg, **kw)
