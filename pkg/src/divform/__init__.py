"""Toolkit for divergence-form elliptic systems with matrix coefficients.

Computes quantitative ellipticity (lambda, Lambda, the normalized distance
to the identity and its minimizer), closed-form certificates for the upper
endpoints of the Lp-boundedness intervals of the heat semigroup and of its
gradient, the sharp-threshold counterexample family, and discrete torus /
cube experiments (heat kernels, Gaussian envelope fits, Lp probes, Riesz
transform and factorization solvers) that exercise the same quantities at
desk scale.
"""

__version__ = "0.1.0"

from .field import (
    FieldFormatError,
    MatrixField,
    PointDomain,
    TorusDomain,
    constant_field,
    extend_constant,
    load_field,
    point_field,
    save_field,
    torus_field,
)
from .ellipticity import (
    EllipticityReport,
    NonEllipticError,
    SandwichReport,
    distance,
    ellipticity_report,
    lambda_min,
    mollify,
    sup_norm,
    verify_sandwich,
)
from .bounds import (
    BoundCertificate,
    HolderEstimate,
    InterpolationFamily,
    absorption_constant,
    bound_certificate,
    build_family,
    dimensional_threshold,
    family_matrix,
    holder_exponent,
    p_plus_lower,
    q_plus_lower,
    riesz_majorant,
    riesz_majorant_crossover,
    riesz_majorant_inverse,
    sobolev_conjugate,
    threshold_ellipticity_ratio,
)
from .degiorgi import (
    DeGiorgiSpec,
    build_spec,
    coefficients_at,
    degiorgi_field,
    distance_of_degiorgi,
    integrability_witness,
    residual_on_annulus,
    solve_c_for_delta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
