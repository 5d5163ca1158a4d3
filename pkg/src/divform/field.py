"""Sampled matrix-valued coefficient fields and their file format.

A coefficient field assigns to every sample point a complex (d*N) x (d*N)
matrix acting on gradient vectors.  Row and column indices are flattened
identically as k = i*N + alpha with spatial index i in [0, d) major and
component index alpha in [0, N) minor.  Fields live either on a periodic
grid (``torus``: n points per axis, side length s, samples in row-major
grid order) or on an explicit point list (``points``).

Fields are immutable after construction; every operation in this package
treats them as read-only values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

FORMAT_VERSION = 1


class FieldFormatError(ValueError):
    """Raised when a field file or constructor input is malformed."""


@dataclass(frozen=True)
class TorusDomain:
    """Periodic grid with ``n`` points per axis and side length ``side``."""

    n: int
    side: float


@dataclass(frozen=True)
class PointDomain:
    """Explicit sample coordinates, one row per sample."""

    coords: np.ndarray  # (num_samples, d) float

    def __eq__(self, other):
        return isinstance(other, PointDomain) and np.array_equal(self.coords, other.coords)


Domain = Union[TorusDomain, PointDomain]


@dataclass(frozen=True)
class MatrixField:
    """A sampled coefficient map x -> A(x) in L((C^N)^d).

    Attributes
    ----------
    d : int
        Spatial dimension, at least 3.
    N : int
        System size, at least 1.
    domain : TorusDomain or PointDomain
        Where the samples live.
    samples : ndarray, shape (num_samples, d*N, d*N), complex
        One matrix per sample point.  Torus samples are in row-major grid
        order; point samples follow the coordinate order.
    """

    d: int
    N: int
    domain: Domain
    samples: np.ndarray

    @property
    def block_size(self) -> int:
        return self.d * self.N

    @property
    def num_samples(self) -> int:
        return self.samples.shape[0]

    def sample_coords(self) -> np.ndarray:
        """Coordinates of all samples, shape (num_samples, d)."""
        if isinstance(self.domain, PointDomain):
            return self.domain.coords
        n, s = self.domain.n, self.domain.side
        axes = [np.arange(n) * (s / n)] * self.d
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def grid_samples(self) -> np.ndarray:
        """Torus samples reshaped to (n, ..., n, dN, dN)."""
        if not isinstance(self.domain, TorusDomain):
            raise FieldFormatError("grid_samples requires a torus field")
        n = self.domain.n
        m = self.block_size
        return self.samples.reshape((n,) * self.d + (m, m))


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _validate(d, N, domain, samples) -> MatrixField:
    if d < 3:
        raise FieldFormatError(f"spatial dimension must be >= 3, got {d}")
    if N < 1:
        raise FieldFormatError(f"system size must be >= 1, got {N}")
    m = d * N
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.ndim != 3 or samples.shape[1:] != (m, m):
        raise FieldFormatError(
            f"samples must have shape (K, {m}, {m}), got {samples.shape}"
        )
    if isinstance(domain, TorusDomain):
        if domain.n < 2:
            raise FieldFormatError(f"torus grid needs n >= 2, got {domain.n}")
        if not domain.side > 0:
            raise FieldFormatError(f"torus side must be positive, got {domain.side}")
        expected = domain.n ** d
        if samples.shape[0] != expected:
            raise FieldFormatError(
                f"torus field needs n^d = {expected} samples, got {samples.shape[0]}"
            )
    elif isinstance(domain, PointDomain):
        coords = np.asarray(domain.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != d:
            raise FieldFormatError(
                f"point coords must have shape (K, {d}), got {coords.shape}"
            )
        if coords.shape[0] != samples.shape[0]:
            raise FieldFormatError(
                f"{coords.shape[0]} coords but {samples.shape[0]} samples"
            )
        domain = PointDomain(_freeze(coords))
    else:
        raise FieldFormatError(f"unknown domain {domain!r}")
    bad = ~np.isfinite(samples)
    if bad.any():
        k, row, col = (int(v[0]) for v in np.nonzero(bad))
        raise FieldFormatError(
            f"non-finite entry at sample {k}, flat index ({row}, {col})"
        )
    return MatrixField(d=d, N=N, domain=domain, samples=_freeze(samples))


def torus_field(d: int, N: int, n: int, side: float, samples) -> MatrixField:
    """Build a validated torus field from samples in row-major grid order."""
    return _validate(d, N, TorusDomain(n=n, side=float(side)), samples)


def point_field(d: int, N: int, coords, samples) -> MatrixField:
    """Build a validated point-list field."""
    return _validate(d, N, PointDomain(np.asarray(coords, dtype=float)), samples)


def constant_field(d: int, N: int, matrix) -> MatrixField:
    """Single-sample field representing a constant-coefficient operator."""
    m = d * N
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (m, m):
        raise FieldFormatError(
            f"constant field for d={d}, N={N} needs a {m}x{m} matrix, got {matrix.shape}"
        )
    coords = np.zeros((1, d))
    return point_field(d, N, coords, matrix[None, :, :])


def extend_constant(field: MatrixField, t_star: float) -> MatrixField:
    """Extend a field by one sample equal to (1/t_star) * identity.

    When ``t_star`` realizes the minimum in the field's distance to the
    identity, the padded sample contributes ``|1 - t/t_star|`` to the
    norm profile, which vanishes at the minimizer, so the extended field
    has the same distance as the input.
    """
    if not t_star > 0:
        raise ValueError(f"t_star must be positive, got {t_star}")
    m = field.block_size
    pad = (np.eye(m, dtype=np.complex128) / t_star)[None, :, :]
    samples = np.concatenate([field.samples, pad], axis=0)
    coords = field.sample_coords()
    # fresh coordinate strictly outside the existing bounding box
    span = coords.max() - coords.min() if coords.size else 1.0
    extra = np.full((1, field.d), coords.max() + max(span, 1.0))
    return point_field(field.d, field.N, np.concatenate([coords, extra]), samples)


# ---------------------------------------------------------------------------
# file format


def _header_dict(field: MatrixField) -> dict:
    if isinstance(field.domain, TorusDomain):
        domain = {"kind": "torus", "n": field.domain.n, "side": field.domain.side}
    else:
        domain = {"kind": "points", "coords": field.domain.coords.tolist()}
    return {"format_version": FORMAT_VERSION, "d": field.d, "N": field.N, "domain": domain}


def save_field(field: MatrixField, path) -> None:
    """Write a field in the interchange format (JSON, pinned key names)."""
    data = []
    for sample in field.samples:
        flat = sample.reshape(-1)
        data.append([[float(z.real), float(z.imag)] for z in flat])
    doc = {"header": _header_dict(field), "data": data}
    with open(path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def load_field(path) -> MatrixField:
    """Load and validate a field file.

    Errors name the offending part: malformed header keys, dimension
    mismatches, and non-finite entries (reported with their sample index
    and flat matrix index).
    """
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FieldFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "header" not in doc or "data" not in doc:
        raise FieldFormatError("file must contain 'header' and 'data'")
    header = doc["header"]
    for key in ("format_version", "d", "N", "domain"):
        if key not in header:
            raise FieldFormatError(f"header missing key {key!r}")
    if header["format_version"] != FORMAT_VERSION:
        raise FieldFormatError(
            f"unsupported format_version {header['format_version']!r}"
        )
    d, N = header["d"], header["N"]
    if not isinstance(d, int) or not isinstance(N, int):
        raise FieldFormatError("header d and N must be integers")
    dom = header["domain"]
    kind = dom.get("kind")
    if kind == "torus":
        for key in ("n", "side"):
            if key not in dom:
                raise FieldFormatError(f"torus domain missing key {key!r}")
        domain: Domain = TorusDomain(n=dom["n"], side=float(dom["side"]))
    elif kind == "points":
        if "coords" not in dom:
            raise FieldFormatError("points domain missing key 'coords'")
        domain = PointDomain(np.asarray(dom["coords"], dtype=float))
    else:
        raise FieldFormatError(f"unknown domain kind {kind!r}")
    m = d * N
    raw = doc["data"]
    samples = np.empty((len(raw), m, m), dtype=np.complex128)
    for k, flat in enumerate(raw):
        if len(flat) != m * m:
            raise FieldFormatError(
                f"sample {k} has {len(flat)} entries, expected {m * m}"
            )
        arr = np.asarray(flat, dtype=float)
        if arr.shape != (m * m, 2):
            raise FieldFormatError(f"sample {k} entries must be [re, im] pairs")
        samples[k] = (arr[:, 0] + 1j * arr[:, 1]).reshape(m, m)
    return _validate(d, N, domain, samples)
