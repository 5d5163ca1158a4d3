"""Quantitative ellipticity of coefficient fields.

For a sampled field A this module computes

* ``lambda_min(A)``: the least eigenvalue of the Hermitian part
  (A(x) + A(x)*)/2, minimized over samples (strong ellipticity constant),
* ``sup_norm(A)``: the largest operator norm over samples,
* ``distance(A)``: min over t >= 0 of the sup over samples of
  ||I - t A(x)||, together with its minimizer t*.

The profile g(t) = max_x ||I - t A(x)|| is a max of norms of matrix-affine
functions of t, hence convex, and for elliptic fields the minimizer lies
in the open interval (0, 2/Lambda) because t* Lambda <= 1 + d(A) < 2.
A derivative-free golden-section search plus a final three-point quadratic
refinement therefore locates it to tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import MatrixField, TorusDomain, torus_field

# golden-section tolerance on t and the default comparison slack
T_TOL = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# dense singular values up to this block size, power iteration beyond
_DENSE_LIMIT = 64


class NonEllipticError(ValueError):
    """Raised when an operation requires lambda_min > 0 but the field fails."""


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value of a single complex matrix."""
    if matrix.shape[0] <= _DENSE_LIMIT:
        return float(np.linalg.svd(matrix, compute_uv=False)[0])
    return _power_norm(matrix)


def _power_norm(matrix: np.ndarray, tol: float = 1e-12, max_iter: int = 10000) -> float:
    rng = np.random.default_rng(0)
    m = matrix.shape[0]
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    v /= np.linalg.norm(v)
    sigma = 0.0
    herm = matrix.conj().T @ matrix
    for _ in range(max_iter):
        w = herm @ v
        new = math.sqrt(float(np.linalg.norm(w)))
        if abs(new - sigma) <= tol * max(new, 1.0):
            return new
        sigma = new
        v = w / np.linalg.norm(w)
    return sigma


def _batched_op_norms(samples: np.ndarray) -> np.ndarray:
    if samples.shape[1] <= _DENSE_LIMIT:
        return np.linalg.svd(samples, compute_uv=False)[:, 0]
    return np.array([_power_norm(s) for s in samples])


def lambda_min(field: MatrixField) -> float:
    """Least eigenvalue of the Hermitian part, minimized over samples.

    May be nonpositive; callers that require ellipticity must check.
    """
    herm = 0.5 * (field.samples + field.samples.conj().transpose(0, 2, 1))
    return float(np.linalg.eigvalsh(herm)[:, 0].min())


def sup_norm(field: MatrixField) -> float:
    """Largest singular value over samples (the L-infinity operator norm)."""
    return float(_batched_op_norms(field.samples).max())


def _norm_profile(samples: np.ndarray, eye: np.ndarray, t: float) -> float:
    return float(_batched_op_norms(eye - t * samples).max())


def distance(field: MatrixField) -> tuple[float, float]:
    """Distance of the field to scalar multiples of the identity.

    Returns ``(dist, t_star)`` with ``dist = min_{t>=0} max_x ||I - t A(x)||``
    attained at ``t_star``.  Requires an elliptic field; the result always
    satisfies ``dist < 1``.
    """
    lam = lambda_min(field)
    if not lam > 0:
        raise NonEllipticError(
            f"field is not strongly elliptic (lambda_min = {lam:.6g}); "
            "the distance-based theory does not apply"
        )
    Lam = sup_norm(field)
    samples = field.samples
    eye = np.eye(field.block_size, dtype=np.complex128)

    def g(t: float) -> float:
        return _norm_profile(samples, eye, t)

    a, b = 0.0, 2.0 / Lam
    c = b - _INV_PHI * (b - a)
    e = a + _INV_PHI * (b - a)
    gc, ge = g(c), g(e)
    while b - a > T_TOL:
        if gc < ge:
            b, e, ge = e, c, gc
            c = b - _INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, e, ge
            e = a + _INV_PHI * (b - a)
            ge = g(e)
    t_best = c if gc < ge else e
    g_best = min(gc, ge)

    # three-point quadratic refinement around the golden-section result
    h = max(b - a, T_TOL)
    tl, tr = max(t_best - h, 0.0), t_best + h
    gl, gr = g(tl), g(tr)
    num = (t_best - tl) ** 2 * (g_best - gr) - (t_best - tr) ** 2 * (g_best - gl)
    den = (t_best - tl) * (g_best - gr) - (t_best - tr) * (g_best - gl)
    if den != 0.0:
        t_quad = t_best - 0.5 * num / den
        if tl < t_quad < tr:
            g_quad = g(t_quad)
            if g_quad < g_best:
                t_best, g_best = t_quad, g_quad
    return g_best, t_best


@dataclass(frozen=True)
class EllipticityReport:
    """Quantitative ellipticity certificate for one field."""

    lam: float
    Lam: float
    rho: float
    dist: float
    t_star: float


def ellipticity_report(field: MatrixField) -> EllipticityReport:
    """Compute lambda, Lambda, their ratio, and the distance certificate."""
    lam = lambda_min(field)
    if not lam > 0:
        raise NonEllipticError(f"field is not strongly elliptic (lambda_min = {lam:.6g})")
    Lam = sup_norm(field)
    dist, t_star = distance(field)
    report = EllipticityReport(lam=lam, Lam=Lam, rho=lam / Lam, dist=dist, t_star=t_star)
    _check_report(report)
    return report


def _check_report(r: EllipticityReport, tol: float = 1e-8) -> None:
    rho = r.rho
    if not (1 - rho) / (1 + rho) - tol <= r.dist <= math.sqrt(1 - rho**2) + tol:
        raise AssertionError(f"ellipticity sandwich violated: {r}")
    if r.t_star * r.lam < 1 - r.dist - tol or r.t_star * r.Lam > 1 + r.dist + tol:
        raise AssertionError(f"minimizer bounds violated: {r}")


@dataclass(frozen=True)
class SandwichReport:
    """Lower bound, distance, and upper bound with their slacks."""

    lower: float
    dist: float
    upper: float
    rho: float
    slack_lower: float
    slack_upper: float
    hermitian: bool


def is_hermitian(field: MatrixField, tol: float = 0.0) -> bool:
    diff = field.samples - field.samples.conj().transpose(0, 2, 1)
    return float(np.abs(diff).max()) <= tol


def verify_sandwich(field: MatrixField, tol: float = 1e-8) -> SandwichReport:
    """Check (1-rho)/(1+rho) <= d(A) <= sqrt(1-rho^2) on a field.

    For fields that are Hermitian at every sample the lower bound is an
    equality (checked to ``tol``).  A violation beyond ``tol`` signals a
    solver bug and raises.
    """
    lam = lambda_min(field)
    if not lam > 0:
        raise NonEllipticError(f"field is not strongly elliptic (lambda_min = {lam:.6g})")
    Lam = sup_norm(field)
    rho = lam / Lam
    dist, _ = distance(field)
    lower = (1 - rho) / (1 + rho)
    upper = math.sqrt(max(1 - rho**2, 0.0))
    hermitian = is_hermitian(field)
    report = SandwichReport(
        lower=lower,
        dist=dist,
        upper=upper,
        rho=rho,
        slack_lower=dist - lower,
        slack_upper=upper - dist,
        hermitian=hermitian,
    )
    if report.slack_lower < -tol or report.slack_upper < -tol:
        raise AssertionError(f"sandwich violated beyond tolerance: {report}")
    if hermitian and abs(report.slack_lower) > tol:
        raise AssertionError(f"Hermitian equality case violated: {report}")
    return report


def mollify(field: MatrixField, n: int) -> MatrixField:
    """Smooth a torus field by periodic convolution with a unit-mass bump.

    The bump is a tensor-product raised cosine supported in radius 1/n,
    sampled on the grid and renormalized to unit mass.  Because the result
    is a convex combination of translates, lambda cannot decrease, Lambda
    cannot increase, and the distance cannot increase.
    """
    if not isinstance(field.domain, TorusDomain):
        raise ValueError("mollify requires a torus field")
    if n < 1:
        raise ValueError(f"smoothing index must be >= 1, got {n}")
    grid_n, side = field.domain.n, field.domain.side
    h = side / grid_n
    radius = 1.0 / n
    if radius <= h:
        raise ValueError(
            f"bump support 1/n = {radius:.6g} is below the grid resolution h = {h:.6g}; "
            "n is too large for this grid"
        )
    offsets = np.arange(grid_n) * h
    offsets = np.minimum(offsets, side - offsets)  # periodic distance to 0
    w1 = np.where(offsets <= radius, 0.5 * (1 + np.cos(np.pi * offsets / radius)), 0.0)
    kernel = w1
    for _ in range(field.d - 1):
        kernel = np.multiply.outer(kernel, w1)
    kernel = kernel / kernel.sum()
    grid = field.grid_samples()
    axes = tuple(range(field.d))
    khat = np.fft.fftn(kernel, axes=axes)
    ghat = np.fft.fftn(grid, axes=axes)
    smoothed = np.fft.ifftn(ghat * khat[..., None, None], axes=axes)
    m = field.block_size
    return torus_field(field.d, field.N, grid_n, side, smoothed.reshape(-1, m, m))
