import numpy as np
import pytest

from flspp import Dataset, DatasetError, describe, load_csv, load_ppm_rgb, write_csv


def test_dataset_basic_shape():
    ds = Dataset(np.array([[1.0, 2.0], [3.0, 4.0]]), name="t")
    assert ds.n == 2
    assert ds.d == 2
    assert ds.name == "t"
    assert ds.sq_norms.tolist() == [5.0, 25.0]


def test_dataset_is_immutable():
    ds = Dataset(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        ds.points[0, 0] = 1.0


def test_dataset_rejects_bad_input():
    with pytest.raises(DatasetError):
        Dataset(np.zeros(3))  # 1d
    with pytest.raises(DatasetError):
        Dataset(np.zeros((0, 2)))  # no points
    with pytest.raises(DatasetError):
        Dataset(np.array([[1.0, np.nan]]))
    with pytest.raises(DatasetError):
        Dataset(np.array([[1.0, np.inf]]))


def test_load_csv_basic(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("1.0, 2.0\n3,4\n\n5.5,-6\n")
    ds = load_csv(p)
    assert ds.points.tolist() == [[1.0, 2.0], [3.0, 4.0], [5.5, -6.0]]


def test_load_csv_header(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("\nx,y\n1,2\n")
    ds = load_csv(p, has_header=True)
    assert ds.points.tolist() == [[1.0, 2.0]]


def test_load_csv_ragged_row_names_line(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("1,2\n3,4,5\n")
    with pytest.raises(DatasetError, match="line 2"):
        load_csv(p)


def test_load_csv_non_numeric(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("1,2\n3,oops\n")
    with pytest.raises(DatasetError, match="line 2"):
        load_csv(p)


def test_load_csv_empty(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("\n\n")
    with pytest.raises(DatasetError, match="no data rows"):
        load_csv(p)


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    ds = Dataset(rng.normal(size=(17, 4)))
    p = tmp_path / "rt.csv"
    write_csv(ds, p)
    back = load_csv(p)
    assert np.array_equal(back.points, ds.points)  # full precision


PIXELS = [(10, 20, 30), (0, 0, 0), (255, 255, 255), (1, 2, 3), (4, 5, 6), (7, 8, 9)]


def _p3_bytes():
    body = "\n".join(" ".join(map(str, px)) for px in PIXELS)
    return f"P3\n# a comment\n3 2\n255\n{body}\n".encode()


def _p6_bytes():
    raster = bytes(v for px in PIXELS for v in px)
    return b"P6\n3 2\n255\n" + raster


def test_load_ppm_p3(tmp_path):
    p = tmp_path / "img.ppm"
    p.write_bytes(_p3_bytes())
    ds = load_ppm_rgb(p)
    assert ds.n == 6
    assert ds.d == 3
    assert ds.points.tolist() == [list(map(float, px)) for px in PIXELS]


def test_load_ppm_p6_matches_p3(tmp_path):
    a = tmp_path / "a.ppm"
    b = tmp_path / "b.ppm"
    a.write_bytes(_p3_bytes())
    b.write_bytes(_p6_bytes())
    assert np.array_equal(load_ppm_rgb(a).points, load_ppm_rgb(b).points)


def test_load_ppm_rejects_bad_magic(tmp_path):
    p = tmp_path / "img.ppm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes(4))
    with pytest.raises(DatasetError, match="magic"):
        load_ppm_rgb(p)


def test_load_ppm_truncated(tmp_path):
    p = tmp_path / "img.ppm"
    p.write_bytes(b"P6\n3 2\n255\n" + bytes(5))
    with pytest.raises(DatasetError, match="truncated"):
        load_ppm_rgb(p)


def test_load_ppm_big_maxval(tmp_path):
    p = tmp_path / "img.ppm"
    p.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))
    with pytest.raises(DatasetError, match="maxval"):
        load_ppm_rgb(p)


def test_describe_exact():
    ds = Dataset(np.array([[0.0, 4.0], [2.0, 8.0]]), name="two")
    info = describe(ds)
    assert info == {
        "n": 2,
        "d": 2,
        "name": "two",
        "min": [0.0, 4.0],
        "max": [2.0, 8.0],
        "mean": [1.0, 6.0],
    }
