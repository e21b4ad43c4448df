"""Point-set loading and validation (CSV files and PPM images)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetError


@dataclass(frozen=True)
class Dataset:
    """An immutable n x d matrix of finite real coordinates.

    ``points`` is locked against writes after construction so the same
    dataset can be shared freely between runs and threads.
    """

    points: np.ndarray
    name: str = ""
    _sq_norms: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise DatasetError(f"points must be 2-dimensional, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DatasetError(f"need n >= 1 and d >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DatasetError("points contain NaN or infinite coordinates")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        sq = np.einsum("ij,ij->i", pts, pts)
        sq.flags.writeable = False
        object.__setattr__(self, "_sq_norms", sq)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def sq_norms(self) -> np.ndarray:
        """Per-point squared Euclidean norms (cached)."""
        return self._sq_norms


def load_csv(path, has_header: bool = False, name: str | None = None) -> Dataset:
    """Load a comma-separated numeric file, one point per row.

    Fields are trimmed of surrounding whitespace; rows must all have the
    same number of fields. Errors name the offending 1-based line number.
    """
    rows = []
    width = None
    header_pending = has_header
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if header_pending:
                header_pending = False
                continue
            fields = [f.strip() for f in line.split(",")]
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise DatasetError(
                    f"{path}: ragged row at line {lineno}: "
                    f"expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError as exc:
                raise DatasetError(f"{path}: non-numeric field at line {lineno}: {exc}") from exc
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return Dataset(np.array(rows, dtype=np.float64), name=name or str(path))


def write_csv(ds: Dataset, path) -> None:
    """Write one point per row, comma separated, full float64 precision."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in ds.points:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _ppm_header_tokens(data: bytes):
    """Yield whitespace-separated header tokens, skipping '#' comments."""
    pos = 0
    while pos < len(data):
        ch = data[pos : pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            yield data[pos:end], end
            pos = end


def load_ppm_rgb(path, name: str | None = None) -> Dataset:
    """Load a P3 (plain) or P6 (binary) PPM image as n x 3 RGB points.

    Pixels are returned in row-major order with coordinates in [0, 255];
    maxval must be at most 255.
    """
    with open(path, "rb") as fh:
        data = fh.read()

    tokens = _ppm_header_tokens(data)
    try:
        magic, _ = next(tokens)
    except StopIteration:
        raise DatasetError(f"{path}: empty file") from None
    if magic not in (b"P3", b"P6"):
        raise DatasetError(f"{path}: unsupported PPM magic {magic!r} (need P3 or P6)")

    header = []
    pos = 0
    for tok, end in tokens:
        header.append(tok)
        pos = end
        if len(header) == 3:
            break
    if len(header) < 3:
        raise DatasetError(f"{path}: truncated PPM header")
    try:
        width, height, maxval = (int(t) for t in header)
    except ValueError as exc:
        raise DatasetError(f"{path}: bad PPM header: {exc}") from exc
    if width < 1 or height < 1:
        raise DatasetError(f"{path}: bad image size {width}x{height}")
    if maxval > 255 or maxval < 1:
        raise DatasetError(f"{path}: maxval {maxval} out of supported range [1, 255]")

    npix = width * height
    if magic == b"P6":
        # exactly one whitespace byte separates the header from raster data
        raster = data[pos + 1 :]
        if len(raster) < 3 * npix:
            raise DatasetError(f"{path}: truncated pixel data ({len(raster)} of {3 * npix} bytes)")
        values = np.frombuffer(raster[: 3 * npix], dtype=np.uint8)
    else:
        vals = []
        for tok, _ in _ppm_header_tokens(data[pos:]):
            try:
                vals.append(int(tok))
            except ValueError as exc:
                raise DatasetError(f"{path}: bad pixel value {tok!r}") from exc
            if len(vals) == 3 * npix:
                break
        if len(vals) < 3 * npix:
            raise DatasetError(f"{path}: truncated pixel data ({len(vals)} of {3 * npix} values)")
        values = np.array(vals)
        if values.min() < 0 or values.max() > maxval:
            raise DatasetError(f"{path}: pixel value out of range [0, {maxval}]")

    points = values.astype(np.float64).reshape(npix, 3)
    return Dataset(points, name=name or str(path))


def describe(ds: Dataset) -> dict:
    """Exact per-dimension summary: n, d, min, max, mean."""
    return {
        "n": ds.n,
        "d": ds.d,
        "name": ds.name,
        "min": ds.points.min(axis=0).tolist(),
        "max": ds.points.max(axis=0).tolist(),
        "mean": ds.points.mean(axis=0).tolist(),
    }
