"""Desk-scale discrete verification: torus operators, heat semigroups,
Gaussian kernel fits, Lp probes, cube Dirichlet problems, and the
Riesz-transform factorization solver."""

from .stencil import (
    ConvergenceError,
    apply_interior,
    apply_periodic,
    face_average,
    face_gradient,
    l2_inner,
    lp_norm,
    split_blocks,
)
from .operator import TorusOperator, assemble, heat_apply, kernel_column
from .kernelfit import HeatKernelFit, gaussian_fit, torus_distance_sq
from .probes import gradient_probe, lp_ratio_probe
from .dirichlet import dirichlet_solve, holder_probe
from .riesz import (
    divergence_apply_spectral,
    neumann_solve,
    riesz_adjoint_apply,
    riesz_apply,
)

__all__ = [name for name in dir() if not name.startswith("_")]
