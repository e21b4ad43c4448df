import numpy as np
import pytest

from flspp import Dataset


@pytest.fixture
def blobs():
    """Four well-separated 2d Gaussian blobs, 30 points each."""
    rng = np.random.default_rng(7)
    means = np.array([[0.0, 0.0], [8.0, 0.0], [0.0, 8.0], [8.0, 8.0]])
    pts = np.vstack([m + rng.normal(0, 0.5, (30, 2)) for m in means])
    return Dataset(pts, name="blobs")


@pytest.fixture
def line():
    """Six collinear points with obvious 2-means structure."""
    return Dataset(np.array([[0.0], [2.0], [10.0], [12.0], [1.0], [11.0]]), name="line")
