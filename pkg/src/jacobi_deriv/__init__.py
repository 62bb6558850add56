"""Derivative estimation from noisy, uniformly sampled data.

Estimates n-th order derivatives by convolving the samples against
central kernels built from weighted Jacobi polynomials, and sizes the
integration window from a three-part error budget (bias, noise
amplification, trapezoid discretization).
"""
from ._accel import BACKEND
from .errors import (
    CertificateError,
    DomainError,
    EvaluationError,
    FormatError,
    JacobiDerivError,
    ParameterError,
    SingularityError,
    WindowError,
)
from .error_model import (
    ErrorBudget,
    LocalWindowSelection,
    OptimalWindow,
    bias_constant,
    bound_bias,
    bound_noise,
    bound_numerical,
    noise_amplification,
    optimal_h,
    select_window_global,
    select_window_local,
    weighted_absolute_moment,
)
from .estimator import (
    EstimateSeries,
    SampledSignal,
    affine_combination_identity,
    discrete_weights,
    estimate_analytic,
    estimate_generalized,
    estimate_sampled,
    estimate_sampled_varying,
    minimal_vs_zero_order_identity,
)
from .functions import NoiseSpec, TestFunction, get_test_function, synthesize
from .jacobi import (
    JacobiIndex,
    beta_function,
    jacobi_norm_squared,
    jacobi_polynomial,
    jacobi_weight,
    log_gamma,
    ultraspherical_at_zero,
)
from .kernels import (
    EstimatorParams,
    Kernel,
    affine_coefficient_sum,
    affine_kernel,
    kernel_moments,
    minimal_kernel,
    ultraspherical_kernel,
)

__version__ = "0.1.0"
