"""Scikit-learn style estimator wrapping the clustering pipelines."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dataset import Dataset
from .lloyd import EmptyPolicy, LloydConfig
from .pipelines import ALGORITHMS, AlgoConfig, run
from .state import pairwise_sq_dists


def _check_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2d array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains NaN or infinite values")
    return X


class FLSKMeans(ClusterMixin, TransformerMixin, BaseEstimator):
    """K-means solved by adaptive seeding plus foresight local search.

    Parameters
    ----------
    n_clusters : number of centers.
    algorithm : one of 'km', 'gkm', 'ls', 'gls', 'fls', 'gfls'. The 'g'
        prefix selects greedy seeding; 'ls'/'fls' add local-search swap
        steps, the 'f' variants evaluating each swap with one look-ahead
        Lloyd step.
    local_search_steps : number of swap iterations (ignored by km/gkm).
    greedy_candidates : seeding candidates per round for greedy variants;
        None picks 2 + floor(ln k).
    max_iter : cap on final Lloyd iterations.
    tol : relative cost-improvement threshold that stops Lloyd's loop.
    empty_policy : 'farthest' re-seeds emptied clusters at the costliest
        point, 'keep' leaves their centers in place.
    random_state : integer seed; runs are fully deterministic given it.
    """

    def __init__(
        self,
        n_clusters: int = 8,
        algorithm: str = "gfls",
        local_search_steps: int = 15,
        greedy_candidates: int | None = None,
        max_iter: int = 300,
        tol: float = 1e-4,
        empty_policy: str = "farthest",
        random_state: int | None = None,
    ):
        self.n_clusters = n_clusters
        self.algorithm = algorithm
        self.local_search_steps = local_search_steps
        self.greedy_candidates = greedy_candidates
        self.max_iter = max_iter
        self.tol = tol
        self.empty_policy = empty_policy
        self.random_state = random_state

    def _config(self) -> AlgoConfig:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.random_state is None:
            seed = int(np.random.SeedSequence().entropy % (2**63))
        elif isinstance(self.random_state, numbers.Integral):
            seed = int(self.random_state)
        else:
            raise ValueError("random_state must be an int or None")
        return AlgoConfig(
            algorithm=self.algorithm,
            k=self.n_clusters,
            z=self.local_search_steps,
            greedy_candidates=self.greedy_candidates,
            lloyd=LloydConfig(
                max_steps=self.max_iter,
                rel_tol=self.tol,
                empty_policy=EmptyPolicy(self.empty_policy),
            ),
            seed=seed,
        )

    def fit(self, X, y=None):
        X = _check_matrix(X)
        record, state = run(Dataset(X, name="fit"), self._config(), return_state=True)
        self.cluster_centers_ = np.array(state.centers)
        self.labels_ = np.array(state.assign1)
        self.inertia_ = state.total_cost
        self.n_iter_ = record.lloyd_steps
        self.n_local_search_ = record.ls_iterations
        self.run_record_ = record
        return self

    def predict(self, X):
        check_is_fitted(self, "cluster_centers_")
        X = _check_matrix(X)
        if X.shape[1] != self.cluster_centers_.shape[1]:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.cluster_centers_.shape[1]}"
            )
        return np.argmin(pairwise_sq_dists(X, self.cluster_centers_), axis=1)

    def transform(self, X):
        check_is_fitted(self, "cluster_centers_")
        X = _check_matrix(X)
        return np.sqrt(pairwise_sq_dists(X, self.cluster_centers_))

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)
