"""Flux-form divergence discretization shared by all grid solvers.

The action u -> -Div_h(A_h grad_h u) on a uniform grid splits per
coefficient block:

* diagonal blocks (i = i): conservative face terms
  -D-_i( avg_i(A_ii) D+_i u ) with the face coefficient the arithmetic
  mean of the two adjacent cell-centered values,
* off-diagonal blocks (i != j): node-centered terms
  -c_i( A_ij c_j u ) built from centered differences.

This placement makes three properties exact for every coefficient field:
the operator equals the (2d+1)-point Laplacian when A = I, the adjoint
operator is the one assembled from the conjugate-transposed field, and
Re<Lu, u> >= lambda_min(A) * ||grad_h u||^2 where grad_h collects the
compact face differences.
"""

from __future__ import annotations

import numpy as np


class ConvergenceError(RuntimeError):
    """An inner iteration failed to reach its tolerance."""


def split_blocks(grid_samples: np.ndarray, d: int, N: int):
    """Split (grid..., dN, dN) samples into per-(i,j) N x N blocks.

    Returns ``(diag, off)`` with ``diag[i]`` of shape (grid..., N, N) and
    ``off[(i, j)]`` for i != j.
    """
    diag = []
    off = {}
    for i in range(d):
        diag.append(grid_samples[..., i * N:(i + 1) * N, i * N:(i + 1) * N])
        for j in range(d):
            if j != i:
                off[(i, j)] = grid_samples[..., i * N:(i + 1) * N, j * N:(j + 1) * N]
    return diag, off


def face_average(block: np.ndarray, axis: int) -> np.ndarray:
    """Arithmetic mean of node values across the face in +axis direction
    (periodic): entry x holds the face between x and x+e_axis."""
    return 0.5 * (block + np.roll(block, -1, axis=axis))


def _cdiff_periodic(u: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (np.roll(u, -1, axis=axis) - np.roll(u, 1, axis=axis)) / (2.0 * h)


def apply_periodic(diag_face, off_node, u: np.ndarray, h: float) -> np.ndarray:
    """Periodic operator action.

    Parameters
    ----------
    diag_face : sequence of (grid..., N, N) arrays
        Face-averaged diagonal blocks per axis (see ``face_average``).
    off_node : dict (i, j) -> (grid..., N, N)
        Off-diagonal blocks at nodes.
    u : (grid..., N) array
    """
    d = u.ndim - 1
    out = np.zeros_like(u, dtype=np.result_type(u, diag_face[0]))
    for i in range(d):
        dup = (np.roll(u, -1, axis=i) - u) / h
        flux = np.einsum("...ab,...b->...a", diag_face[i], dup)
        out -= (flux - np.roll(flux, 1, axis=i)) / h
    for (i, j), block in off_node.items():
        w = np.einsum("...ab,...b->...a", block, _cdiff_periodic(u, j, h))
        out -= _cdiff_periodic(w, i, h)
    return out


def _shift(u: np.ndarray, axis: int, by: int) -> np.ndarray:
    """Non-periodic shift: result[x] = u[x + by*e_axis], zero-filled."""
    out = np.zeros_like(u)
    src = [slice(None)] * u.ndim
    dst = [slice(None)] * u.ndim
    if by > 0:
        src[axis] = slice(by, None)
        dst[axis] = slice(0, -by)
    elif by < 0:
        src[axis] = slice(0, by)
        dst[axis] = slice(-by, None)
    else:
        return u.copy()
    out[tuple(dst)] = u[tuple(src)]
    return out


def _cdiff_interior(u: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (_shift(u, axis, 1) - _shift(u, axis, -1)) / (2.0 * h)


def apply_interior(diag_node, off_node, u: np.ndarray, h: float) -> np.ndarray:
    """Non-periodic operator action, valid at nodes one step from the
    boundary (garbage in the outer layer; callers mask it).

    ``diag_node`` holds the diagonal blocks at nodes; face averages are
    formed internally.
    """
    d = u.ndim - 1
    out = np.zeros_like(u, dtype=np.result_type(u, diag_node[0]))
    for i in range(d):
        face = 0.5 * (diag_node[i] + _shift(diag_node[i], i, 1))
        dup = (_shift(u, i, 1) - u) / h
        flux = np.einsum("...ab,...b->...a", face, dup)
        out -= (flux - _shift(flux, i, -1)) / h
    for (i, j), block in off_node.items():
        w = np.einsum("...ab,...b->...a", block, _cdiff_interior(u, j, h))
        out -= _cdiff_interior(w, i, h)
    return out


def face_gradient(u: np.ndarray, h: float) -> np.ndarray:
    """Compact face differences, shape (grid..., d, N):
    entry (x, i, beta) = (u^beta(x + h e_i) - u^beta(x)) / h (periodic)."""
    d = u.ndim - 1
    comps = [(np.roll(u, -1, axis=i) - u) / h for i in range(d)]
    return np.stack(comps, axis=-2)


def l2_inner(u: np.ndarray, v: np.ndarray, h: float, d: int) -> complex:
    """Discrete L2 pairing sum(u . conj(v)) h^d over all grid values."""
    return complex(np.sum(u * v.conj()) * h**d)


def lp_norm(u: np.ndarray, p: float, h: float, d: int) -> float:
    """Discrete Lp norm with pointwise Euclidean norm over trailing axes.

    ``u`` has shape (grid...,) + value_shape where the grid occupies the
    first ``d`` axes.
    """
    value_axes = tuple(range(d, u.ndim))
    mags = np.sqrt(np.sum(np.abs(u) ** 2, axis=value_axes)) if value_axes else np.abs(u)
    if p == np.inf:
        return float(mags.max())
    return float((np.sum(mags**p) * h**d) ** (1.0 / p))
