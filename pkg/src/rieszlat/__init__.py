"""Discrete Riesz transforms on the integer lattice.

Kernels, Fourier multipliers, and operator-norm experiments for three
families of discrete singular integrals: the Calderon-Zygmund
discretisation, the probabilistic (harmonic-extension) discretisation, and
the method-of-rotations discretisation.
"""

from .quadrature import (
    DEFAULT_CONFIG,
    RELAXED_CONFIG,
    QuadConfig,
    QuadResult,
    QuadratureError,
    digamma,
    integrate_1d,
    integrate_halfspace,
    integrate_semiinf,
    trigamma,
)
from .poisson import (
    PeriodicPoissonEvaluator,
    harmonic_extension,
    periodic_h,
    periodic_h_grad,
    poisson_grad,
    poisson_p,
    psi_boundary,
)
from .kernels import (
    ConstantMatrix,
    KernelKind,
    cz_riesz_kernel,
    finite_w_kernel,
    hmatrix,
    limit_kernel,
    prob_hilbert_kernel_1d,
    prob_riesz_kernel,
    rotation_kernel,
    rotation_kernel_2d,
)
from .multipliers import (
    convolution_factorization_check,
    hdis_multiplier,
    multiplier_M,
    multiplier_Mtilde,
    pkernel_coefficients,
    pkernel_multiplier,
)
from .transforms import (
    Sequence,
    apply_kernel,
    cot_bound,
    delta,
    hdis_apply_reference,
    kernel_entry,
    kernel_value,
    littlewood_paley_check,
    lp_norm,
    norm_lower_bound_search,
    norm_ratio,
)
from .mc import SdeConfig, drift_field, estimate_projection, simulate_exit

__all__ = [
    "DEFAULT_CONFIG",
    "RELAXED_CONFIG",
    "QuadConfig",
    "QuadResult",
    "QuadratureError",
    "digamma",
    "integrate_1d",
    "integrate_halfspace",
    "integrate_semiinf",
    "trigamma",
    "PeriodicPoissonEvaluator",
    "harmonic_extension",
    "periodic_h",
    "periodic_h_grad",
    "poisson_grad",
    "poisson_p",
    "psi_boundary",
    "ConstantMatrix",
    "KernelKind",
    "cz_riesz_kernel",
    "finite_w_kernel",
    "hmatrix",
    "limit_kernel",
    "prob_hilbert_kernel_1d",
    "prob_riesz_kernel",
    "rotation_kernel",
    "rotation_kernel_2d",
    "convolution_factorization_check",
    "hdis_multiplier",
    "multiplier_M",
    "multiplier_Mtilde",
    "pkernel_coefficients",
    "pkernel_multiplier",
    "Sequence",
    "apply_kernel",
    "cot_bound",
    "delta",
    "hdis_apply_reference",
    "kernel_entry",
    "kernel_value",
    "littlewood_paley_check",
    "lp_norm",
    "norm_lower_bound_search",
    "norm_ratio",
    "SdeConfig",
    "drift_field",
    "estimate_projection",
    "simulate_exit",
]

__version__ = "0.1.0"
