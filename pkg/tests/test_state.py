import numpy as np
import pytest

from flspp import Dataset, build_state, centroid, cost_with_assignment
from flspp.state import pairwise_sq_dists

from _helpers import sq_dist_matrix


def test_pairwise_matches_naive():
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(40, 3))
    centers = rng.normal(size=(6, 3))
    fast = pairwise_sq_dists(pts, centers)
    slow = sq_dist_matrix(pts, centers)
    assert np.allclose(fast, slow, rtol=1e-12, atol=1e-12)


def test_build_state_hand_example():
    ds = Dataset(np.array([[0.0], [2.0], [10.0]]))
    st = build_state(ds, np.array([[0.0], [9.0]]))
    assert st.k == 2
    assert st.assign1.tolist() == [0, 0, 1]
    assert st.assign2.tolist() == [1, 1, 0]
    assert st.dist1_sq.tolist() == [0.0, 4.0, 1.0]
    assert st.dist2_sq.tolist() == [81.0, 49.0, 100.0]
    assert st.total_cost == 5.0
    assert st.cluster_count.tolist() == [2, 1]
    assert st.cluster_sum.tolist() == [[2.0], [10.0]]


def test_build_state_oracle_random():
    rng = np.random.default_rng(2)
    pts = rng.normal(size=(50, 4))
    centers = rng.normal(size=(5, 4))
    ds = Dataset(pts)
    st = build_state(ds, centers)
    dmat = sq_dist_matrix(pts, centers)
    for i in range(50):
        order = sorted(range(5), key=lambda j: (dmat[i, j], j))
        assert st.assign1[i] == order[0]
        assert st.assign2[i] == order[1]
        assert st.dist1_sq[i] == pytest.approx(dmat[i, order[0]], rel=1e-12)
        assert st.dist2_sq[i] == pytest.approx(dmat[i, order[1]], rel=1e-12)
    assert st.total_cost == pytest.approx(dmat.min(axis=1).sum(), rel=1e-12)


def test_build_state_tie_breaks_smallest_index():
    ds = Dataset(np.array([[0.0]]))
    st = build_state(ds, np.array([[1.0], [-1.0], [1.0]]))
    assert st.assign1[0] == 0  # all three tie at distance 1
    assert st.assign2[0] == 1


def test_build_state_k1_sentinels():
    ds = Dataset(np.array([[0.0], [3.0]]))
    st = build_state(ds, np.array([[1.0]]))
    assert st.assign2.tolist() == st.assign1.tolist()
    assert np.all(np.isinf(st.dist2_sq))
    assert st.total_cost == 5.0


def test_build_state_idempotent(blobs):
    centers = blobs.points[[0, 40, 70, 100]]
    a = build_state(blobs, centers)
    b = build_state(blobs, a.centers)
    assert np.array_equal(a.assign1, b.assign1)
    assert np.array_equal(a.assign2, b.assign2)
    assert np.array_equal(a.dist1_sq, b.dist1_sq)
    assert a.total_cost == b.total_cost


def test_state_arrays_are_frozen(blobs):
    st = build_state(blobs, blobs.points[:3])
    for arr in (st.centers, st.assign1, st.dist1_sq, st.cluster_sum):
        with pytest.raises(ValueError):
            arr[0] = 0


def test_build_state_rejects_wrong_width(blobs):
    with pytest.raises(ValueError):
        build_state(blobs, np.zeros((2, 5)))


def test_cost_with_assignment_examples():
    ds = Dataset(np.array([[0.0], [2.0]]))
    centers = np.array([[0.0], [10.0]])
    assert cost_with_assignment(ds, centers, np.array([0, 0])) == 4.0
    assert cost_with_assignment(ds, centers, np.array([0, 1])) == 64.0
    with pytest.raises(ValueError):
        cost_with_assignment(ds, centers, np.array([0, 2]))


def test_cost_with_assignment_nearest_is_minimal(blobs):
    centers = blobs.points[[5, 35, 65, 95]]
    st = build_state(blobs, centers)
    nearest = cost_with_assignment(blobs, centers, st.assign1)
    assert nearest == pytest.approx(st.total_cost, rel=1e-12)
    rng = np.random.default_rng(4)
    for _ in range(10):
        other = rng.integers(0, 4, size=blobs.n)
        assert cost_with_assignment(blobs, centers, other) >= nearest - 1e-9


def test_centroid():
    ds = Dataset(np.array([[0.0, 0.0], [2.0, 4.0], [7.0, 7.0]]))
    labels = np.array([0, 0, 1])
    assert centroid(ds, labels, 0).tolist() == [1.0, 2.0]
    assert centroid(ds, labels, 1).tolist() == [7.0, 7.0]
    assert centroid(ds, labels, 2) is None


def test_centroid_minimizes_cluster_cost():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(30, 2))
    ds = Dataset(pts)
    labels = np.zeros(30, dtype=int)
    mean = centroid(ds, labels, 0)
    base = float(((pts - mean) ** 2).sum())
    for _ in range(20):
        other = mean + rng.normal(0, 0.1, 2)
        assert float(((pts - other) ** 2).sum()) >= base
