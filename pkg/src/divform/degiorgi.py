"""Sharp-threshold counterexample systems with singular solutions.

The family is indexed by c > 0 and D >= (c^2+1)/((d-2)c).  At a nonzero
point x the coefficient matrix is the identity plus the rank-one tensor
of the vectorized symmetric matrix c I + D xhat xhat^T:

    A(x) = I + v v^T,   v = vec(c I + D xhat xhat^T),

with the package's flattening k = i*N + alpha (system size N = d).  The
field u(x) = x / |x|^b is then a weak solution of -Div(A grad u) = 0 on
the punctured unit ball for

    b = d/2 - sqrt(d^2/4 - (d(d-1) c D + (d-1) D^2) / (1 + (c+D)^2)),

which lies in [1, d/2) on the admissible parameter range and equals 1
exactly on the threshold curve D = (c^2+1)/((d-2)c).  Along that curve
the distance of the field attains the dimensional threshold at one
critical c, found numerically by ``solve_c_for_delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import dimensional_threshold
from .ellipticity import distance
from .field import MatrixField, point_field
from .discrete.stencil import apply_interior


@dataclass(frozen=True)
class DeGiorgiSpec:
    """Parameters of one counterexample system (system size N = d)."""

    d: int
    c: float
    D: float
    b: float


def threshold_D(d: int, c: float) -> float:
    """Smallest admissible D for a given c: the b = 1 curve."""
    return (c * c + 1.0) / ((d - 2.0) * c)


def build_spec(d: int, c: float, D: float) -> DeGiorgiSpec:
    """Validate parameters and compute the singular exponent b."""
    if d < 3:
        raise ValueError(f"dimension must be >= 3, got {d}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    d_thresh = threshold_D(d, c)
    if D < d_thresh * (1.0 - 1e-12):
        raise ValueError(
            f"D = {D} is below the admissible threshold {d_thresh:.6g} for c = {c}"
        )
    radicand = d * d / 4.0 - (d * (d - 1) * c * D + (d - 1) * D * D) / (
        1.0 + (c + D) ** 2
    )
    if radicand < 0:
        raise ValueError(f"exponent radicand is negative ({radicand:.6g})")
    b = d / 2.0 - math.sqrt(radicand)
    if not (1.0 - 1e-9 <= b < d / 2.0):
        raise ValueError(f"exponent b = {b} outside [1, d/2)")
    return DeGiorgiSpec(d=d, c=c, D=float(D), b=b)


def direction_matrix(spec: DeGiorgiSpec, x: np.ndarray) -> np.ndarray:
    """The symmetric d x d matrix c I + D xhat xhat^T at a nonzero point."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x)
    if r == 0:
        raise ValueError("coefficients are undefined at x = 0")
    xh = x / r
    return spec.c * np.eye(spec.d) + spec.D * np.outer(xh, xh)


def coefficients_at(spec: DeGiorgiSpec, x) -> np.ndarray:
    """The (d*d) x (d*d) coefficient matrix at a nonzero point.

    Real symmetric, depends only on the direction x/|x|, and equals the
    identity plus the rank-one tensor of vec(c I + D xhat xhat^T).
    """
    M = direction_matrix(spec, np.asarray(x, dtype=float))
    v = M.reshape(-1)
    return np.eye(spec.d * spec.d) + np.outer(v, v)


def singular_solution(spec: DeGiorgiSpec, points: np.ndarray) -> np.ndarray:
    """u(x) = x / |x|^b evaluated at points of shape (..., d)."""
    r = np.linalg.norm(points, axis=-1, keepdims=True)
    return points / r**spec.b


def sphere_directions(d: int, count: int) -> np.ndarray:
    """Deterministic quasi-uniform directions on the unit sphere.

    Dimension 3 uses the golden-angle spiral; higher dimensions map a
    Halton sequence through the normal quantile and normalize.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if d == 3:
        i = np.arange(count)
        z = 1.0 - 2.0 * (i + 0.5) / count
        phi = i * math.pi * (3.0 - math.sqrt(5.0))
        rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)
    from scipy.special import ndtri
    from scipy.stats.qmc import Halton

    raw = Halton(d=d, scramble=False, seed=None).random(count + 1)[1:]
    gauss = ndtri(raw)
    norms = np.linalg.norm(gauss, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return gauss / norms


def degiorgi_field(spec: DeGiorgiSpec, sphere_samples: int) -> MatrixField:
    """Point-list field sampling the coefficients over sphere directions."""
    if sphere_samples < 100:
        raise ValueError(f"need at least 100 sphere samples, got {sphere_samples}")
    dirs = sphere_directions(spec.d, sphere_samples)
    m = spec.d * spec.d
    samples = np.empty((sphere_samples, m, m), dtype=np.complex128)
    for k, x in enumerate(dirs):
        samples[k] = coefficients_at(spec, x)
    return point_field(spec.d, spec.d, dirs, samples)


def distance_of_degiorgi(spec: DeGiorgiSpec, sphere_samples: int) -> float:
    """Distance of the counterexample field, via sphere sampling.

    The coefficients at any two directions are orthogonally conjugate, so
    the sampled distance is independent of the direction set; sampling
    only exercises the generic solver path.
    """
    dist, _ = distance(degiorgi_field(spec, sphere_samples))
    return dist


def solve_c_for_delta(
    d: int, tol: float = 1e-6, sphere_samples: int = 200
) -> tuple[float, float]:
    """Find c > 0 on the b = 1 curve where the distance meets the
    dimensional threshold.

    Along the curve the distance has a single interior minimum whose value
    is the threshold itself, so the witness is located by minimizing over
    a log-spaced scan of [0.05, 20] followed by golden-section refinement.
    Raises if the scanned family never comes within ``tol``.
    """
    delta = dimensional_threshold(d)

    def dist_at(c: float) -> float:
        spec = build_spec(d, c, threshold_D(d, c))
        return distance_of_degiorgi(spec, sphere_samples)

    grid = np.geomspace(0.05, 20.0, 33)
    values = [dist_at(c) for c in grid]
    k = int(np.argmin(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    # golden-section on log(c)
    a, b = math.log(lo), math.log(hi)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c1 = b - inv_phi * (b - a)
    c2 = a + inv_phi * (b - a)
    f1, f2 = dist_at(math.exp(c1)), dist_at(math.exp(c2))
    while b - a > 1e-12:
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - inv_phi * (b - a)
            f1 = dist_at(math.exp(c1))
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + inv_phi * (b - a)
            f2 = dist_at(math.exp(c2))
    c_best = math.exp(c1 if f1 < f2 else c2)
    dist_best = min(f1, f2)
    if abs(dist_best - delta) > tol:
        raise RuntimeError(
            f"no parameter with |dist - threshold| <= {tol} found; scanned "
            f"distances range over [{min(values):.6g}, {max(values):.6g}] "
            f"against threshold {delta:.6g}"
        )
    return c_best, dist_best


def residual_on_annulus(
    spec: DeGiorgiSpec,
    grid_n: int,
    r_inner: float = 0.25,
    r_outer: float = 0.75,
) -> float:
    """Max divergence-form residual of the singular solution on an annulus.

    Samples u(x) = x/|x|^b and the coefficients on a uniform grid over
    [-1, 1]^d, applies the same flux-form stencil as the torus operators,
    and returns the largest residual magnitude over annulus nodes,
    normalized by the largest discrete gradient magnitude there.  Second
    order: halving h divides the result by about four.
    """
    if not 0.0 < r_inner < r_outer <= 1.0:
        raise ValueError(f"need 0 < r_inner < r_outer <= 1, got ({r_inner}, {r_outer})")
    if grid_n < 16:
        raise ValueError(f"grid_n must be >= 16, got {grid_n}")
    d = spec.d
    xs = np.linspace(-1.0, 1.0, grid_n)
    h = xs[1] - xs[0]
    if r_outer - r_inner < 2.0 * h:
        raise ValueError(
            f"annulus width {r_outer - r_inner:.6g} is too thin for grid spacing {h:.6g}"
        )
    X = np.stack(np.meshgrid(*([xs] * d), indexing="ij"), axis=-1)
    r = np.linalg.norm(X, axis=-1)
    singular = r == 0.0
    rsafe = np.where(singular, 1.0, r)
    xh = X / rsafe[..., None]
    u = X / rsafe[..., None] ** spec.b
    u[singular] = 0.0
    M = spec.c * np.eye(d) + spec.D * np.einsum("...i,...j->...ij", xh, xh)
    M[singular] = spec.c * np.eye(d)
    # A = I + vv^T: block (i,j) = delta_ij I + outer(M[i,:], M[j,:])
    diag, off = [], {}
    for i in range(d):
        for j in range(d):
            block = np.einsum("...a,...b->...ab", M[..., i, :], M[..., j, :])
            if i == j:
                diag.append(block + np.eye(d))
            else:
                off[(i, j)] = block
    Lu = apply_interior(diag, off, u, h)
    interior = np.zeros_like(r, dtype=bool)
    interior[(slice(2, -2),) * d] = True
    mask = (r >= r_inner) & (r <= r_outer) & interior
    if not mask.any():
        raise ValueError("annulus contains no interior grid nodes")
    resid = np.linalg.norm(Lu, axis=-1)
    grads = [
        (np.roll(u, -1, axis=ax) - np.roll(u, 1, axis=ax)) / (2 * h) for ax in range(d)
    ]
    grad_mag = np.sqrt(sum(np.sum(np.abs(g) ** 2, axis=-1) for g in grads))
    return float(resid[mask].max() / grad_mag[mask].max())


def integrability_witness(spec: DeGiorgiSpec, q: float) -> bool:
    """Whether |x|^(1-b) fails to lie in L^q near the origin.

    True exactly when q >= d/(b-1).  Degenerate for b = 1, where the
    solution is bounded and the witness does not apply.
    """
    if not spec.b > 1.0:
        raise ValueError(
            f"witness not applicable: b = {spec.b} does not exceed 1"
        )
    return q >= spec.d / (spec.b - 1.0)
