"""Closed-form certificates for the heat semigroup's Lp behavior.

Everything here is dimension-free algebra on the ellipticity distance
``dist`` of a field:

* ``dimensional_threshold(d)``: the critical distance
  (1 + (d-2)^2/(d-1))^(-1/2).  Fields with ``dist`` below it have
  Gaussian kernel bounds and an unrestricted Lp range.
* ``p_plus_lower(dist, d)``: lower bound for the upper endpoint of the
  semigroup's Lp-boundedness interval.
* ``q_plus_lower(dist)``: dimensionless lower bound for the gradient
  family, via the Riesz-transform majorant ``riesz_majorant`` and its
  crossover exponent.
* ``absorption_constant`` / ``holder_exponent``: the constants of the
  weighted-Morrey absorption argument behind the subcritical regime.
* ``build_family`` / ``family_matrix``: the analytic matrix family used
  to interpolate a supercritical field against subcritical ones.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .field import MatrixField, point_field, torus_field, PointDomain, TorusDomain
from .ellipticity import distance, lambda_min, sup_norm

INF = math.inf


def sobolev_conjugate(d: int) -> float:
    """2d/(d-2), the generic lower anchor for the semigroup's p range."""
    _check_dim(d)
    return 2.0 * d / (d - 2.0)


def _check_dim(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {d!r}")


def dimensional_threshold(d: int) -> float:
    """Critical distance delta(d) = (1 + (d-2)^2/(d-1))^(-1/2)."""
    _check_dim(d)
    return (1.0 + (d - 2.0) ** 2 / (d - 1.0)) ** -0.5


def threshold_ellipticity_ratio(d: int) -> float:
    """The ratio rho = lambda/Lambda at which a Hermitian field reaches
    the critical distance: solves (1-rho)/(1+rho) = delta(d)."""
    delta = dimensional_threshold(d)
    return (1.0 - delta) / (1.0 + delta)


def p_plus_lower(dist: float, d: int) -> float:
    """Lower bound for the upper Lp endpoint of the heat semigroup.

    Below the critical distance the range is unrestricted (+inf).  At or
    above it the bound is 2* / (1 - ln(dist)/ln(delta(d))), with the
    convention 2*/0 := +inf exactly at the threshold.
    """
    _check_dim(d)
    if not 0.0 <= dist < 1.0:
        raise ValueError(f"dist must lie in [0, 1), got {dist}")
    delta = dimensional_threshold(d)
    if dist <= delta:
        return INF
    denom = 1.0 - math.log(dist) / math.log(delta)
    return sobolev_conjugate(d) / denom


@lru_cache(maxsize=1)
def riesz_majorant_crossover() -> float:
    """The exponent where the Riesz-norm majorant switches branches.

    Unique real root of ln(2s - 2) = s(s-2)/(2(s-1)), located by bisection
    on [2.01, 20] and polished by Newton to a residual below 1e-12.
    """

    def f(s: float) -> float:
        return math.log(2 * s - 2) - s * (s - 2) / (2 * (s - 1))

    def fprime(s: float) -> float:
        return -((s - 2) ** 2) / (2 * (s - 1) ** 2)

    lo, hi = 2.01, 20.0
    flo = f(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    s = 0.5 * (lo + hi)
    for _ in range(50):
        step = f(s) / fprime(s)
        s -= step
        if abs(step) < 1e-15:
            break
    return s


def riesz_majorant(p: float) -> float:
    """Majorant of the Lp Riesz-transform norm: the interpolated branch
    exp(s^2/(s-1))^(1/2 - 1/p) up to the crossover s, then 2(p-1)."""
    if p < 2:
        raise ValueError(f"majorant defined for p >= 2, got {p}")
    s = riesz_majorant_crossover()
    if p <= s:
        return math.exp(s**2 / (s - 1.0)) ** (0.5 - 1.0 / p)
    return 2.0 * (p - 1.0)


def riesz_majorant_inverse(y: float) -> float:
    """The unique p >= 2 with majorant(p) = y."""
    if y < 1:
        raise ValueError(f"majorant values are >= 1, got {y}")
    s = riesz_majorant_crossover()
    if y <= 2.0 * (s - 1.0):
        if y == 1.0:
            return 2.0
        return 2.0 / (1.0 - 2.0 * (s - 1.0) * math.log(y) / s**2)
    return y / 2.0 + 1.0


def q_plus_lower(dist: float) -> float:
    """Dimensionless lower bound for the upper Lp endpoint of the
    gradient family sqrt(t) grad exp(-tL).

    Equals the majorant inverse evaluated at 1/sqrt(dist); the two-branch
    closed form is used directly.
    """
    if not 0.0 < dist < 1.0:
        raise ValueError(f"dist must lie in (0, 1), got {dist}")
    s = riesz_majorant_crossover()
    if dist >= 1.0 / (4.0 * (s - 1.0) ** 2):
        return 2.0 / (1.0 + (s - 1.0) / s**2 * math.log(dist))
    return 0.5 / math.sqrt(dist) + 1.0


class Regime(Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class BoundCertificate:
    """Per-field summary of the closed-form Lp bounds."""

    d: int
    dist: float
    threshold: float
    sobolev_conjugate: float
    regime: Regime
    p_plus_lower: float
    q_plus_lower: float
    crossover: float


def bound_certificate(d: int, dist: float) -> BoundCertificate:
    """Assemble the certificate for a dimension and a distance value."""
    _check_dim(d)
    if not 0.0 <= dist < 1.0:
        raise ValueError(f"dist must lie in [0, 1), got {dist}")
    delta = dimensional_threshold(d)
    regime = Regime.SUBCRITICAL if dist < delta else Regime.SUPERCRITICAL
    q_lo = INF if dist == 0.0 else q_plus_lower(dist)
    return BoundCertificate(
        d=d,
        dist=dist,
        threshold=delta,
        sobolev_conjugate=sobolev_conjugate(d),
        regime=regime,
        p_plus_lower=p_plus_lower(dist, d),
        q_plus_lower=q_lo,
        crossover=riesz_majorant_crossover(),
    )


# ---------------------------------------------------------------------------
# weighted-Morrey absorption constants


def absorption_constant(alpha: float, d: int, eps: float) -> float:
    """The constant c(alpha, d, eps) controlling the absorption step of
    the weighted-Morrey estimate for harmonic functions:

        (1 + alpha (d-2)/(d-1) + eps)^(1/2)
            / (1 - alpha (alpha - (d-2)) / (2 (d-1)) - eps).

    Tends to 1/delta(d) as alpha -> d-2 and eps -> 0.
    """
    _check_dim(d)
    if alpha <= d - 2:
        raise ValueError(f"alpha must exceed d-2 = {d - 2}, got {alpha}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    denom = 1.0 - alpha * (alpha - (d - 2.0)) / (2.0 * (d - 1.0)) - eps
    if denom <= 0:
        raise ValueError(
            f"(alpha, eps) = ({alpha}, {eps}) outside the admissible window: "
            f"denominator {denom:.6g} is not positive"
        )
    num = math.sqrt(1.0 + alpha * (d - 2.0) / (d - 1.0) + eps)
    return num / denom


@dataclass(frozen=True)
class HolderEstimate:
    """Admissible Morrey weight exponent and derived Holder exponent."""

    alpha: float
    eps: float
    c_alpha: float
    mu: float
    margin: float


_HOLDER_EPS = 1e-3


def holder_exponent(d: int, dist: float, margin: float = 0.01) -> HolderEstimate:
    """Largest admissible weight exponent for absorbing a given distance.

    With eps fixed at 1e-3, bisects for the largest alpha > d-2 such that
    dist * c(alpha, d, eps) <= 1 - margin, and returns the Holder exponent
    mu = (alpha - d + 2)/2.  Requires a subcritical distance; at a fixed
    margin the absorption is also impossible for distances too close to
    the threshold, which is reported as an error.
    """
    _check_dim(d)
    delta = dimensional_threshold(d)
    if dist >= delta:
        raise ValueError(
            f"dist = {dist} is not below the threshold {delta:.6g}; "
            "absorption is impossible"
        )
    eps = _HOLDER_EPS
    # the admissible alpha window ends where the denominator vanishes
    disc = (d - 2.0) ** 2 + 8.0 * (d - 1.0) * (1.0 - eps)
    alpha_hi = 0.5 * ((d - 2.0) + math.sqrt(disc))
    base = d - 2.0

    def admissible(alpha: float) -> bool:
        return dist * absorption_constant(alpha, d, eps) <= 1.0 - margin

    lo = base + 1e-12 * max(base, 1.0)
    if not admissible(lo):
        raise ValueError(
            f"absorption impossible at margin {margin}: even alpha -> (d-2)+ gives "
            f"dist * c = {dist * absorption_constant(lo, d, eps):.6g} > {1 - margin}"
        )
    hi = alpha_hi - 1e-12 * alpha_hi
    if admissible(hi):
        alpha = hi
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if admissible(mid):
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-14 * alpha_hi:
                break
        alpha = lo
    return HolderEstimate(
        alpha=alpha,
        eps=eps,
        c_alpha=absorption_constant(alpha, d, eps),
        mu=(alpha - d + 2.0) / 2.0,
        margin=margin,
    )


# ---------------------------------------------------------------------------
# analytic interpolation family


@dataclass(frozen=True)
class InterpolationFamily:
    """Analytic family A_z = tau (I - F(z) B) with F(z) = r^(1-z) R^z.

    ``B = I - t* A`` has sup norm equal to the field's distance, and the
    radii are chosen so the imaginary axis stays subcritical while the
    whole closed strip stays elliptic.  ``theta`` is the unique parameter
    in (0, 1) with F(theta) = 1, so the family passes through A itself.
    """

    tau: float
    B: MatrixField
    r: float
    R: float
    eps: float
    theta: float
    dist: float
    d: int


def build_family(field: MatrixField, eps: float) -> InterpolationFamily:
    """Embed a supercritical field into the analytic interpolation family."""
    dist, t_star = distance(field)
    d = field.d
    delta = dimensional_threshold(d)
    if dist < delta:
        raise ValueError(
            f"dist = {dist:.6g} is subcritical (threshold {delta:.6g}); "
            "the interpolation family is not needed there"
        )
    if not 0.0 < eps < 1.0 - dist:
        raise ValueError(f"eps must lie in (0, 1 - dist) = (0, {1 - dist:.6g}), got {eps}")
    eye = np.eye(field.block_size, dtype=np.complex128)
    b_samples = eye[None, :, :] - t_star * field.samples
    if isinstance(field.domain, TorusDomain):
        B = torus_field(d, field.N, field.domain.n, field.domain.side, b_samples)
    else:
        B = point_field(d, field.N, field.domain.coords, b_samples)
    r = delta / (dist + eps)
    R = 1.0 / (dist + eps)
    theta = 1.0 - math.log(R) / math.log(R / r)
    return InterpolationFamily(
        tau=1.0 / t_star, B=B, r=r, R=R, eps=eps, theta=theta, dist=dist, d=d
    )


def family_factor(family: InterpolationFamily, z: complex) -> complex:
    """F(z) = r^(1-z) R^z; |F(z)| = r^(1-Re z) R^(Re z)."""
    return cmath.exp((1 - z) * math.log(family.r) + z * math.log(family.R))


def family_matrix(
    family: InterpolationFamily, z: complex, allow_outside: bool = False
) -> MatrixField:
    """The sampled field A_z = tau (I - F(z) B) of the analytic family.

    ``z`` must lie in the closed strip 0 <= Re z <= 1 unless
    ``allow_outside`` is set.
    """
    z = complex(z)
    if not allow_outside and not 0.0 <= z.real <= 1.0:
        raise ValueError(
            f"Re z = {z.real} outside the closed strip [0, 1]; "
            "pass allow_outside=True for wider strips"
        )
    F = family_factor(family, z)
    B = family.B
    eye = np.eye(B.block_size, dtype=np.complex128)
    samples = family.tau * (eye[None, :, :] - F * B.samples)
    if isinstance(B.domain, TorusDomain):
        return torus_field(B.d, B.N, B.domain.n, B.domain.side, samples)
    return point_field(B.d, B.N, B.domain.coords, samples)
