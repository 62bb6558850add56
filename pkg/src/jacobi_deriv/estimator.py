"""Applying kernels to functions and sampled signals.

Two estimation paths exist on purpose:

* ``estimate_analytic`` integrates kernel * function with a high-resolution
  quadrature; it serves as the reference path and is exact (to quadrature
  error) on polynomials up to degree n+q.
* ``estimate_sampled`` realizes the same integral as a discrete convolution
  of the samples with precomputed trapezoid weights; this is the production
  path for noisy data, with the window half-length quantized to h = m*step.

All operations are pure.  Sampled estimation evaluates each output point
from a fixed summation order (window offsets -m..m), so results do not
depend on how the work is batched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import EvaluationError, ParameterError, WindowError
from .jacobi import JacobiIndex, jacobi_polynomial
from .kernels import EstimatorParams, Kernel, affine_kernel, minimal_kernel
from .quadrature import ESTIMATE_NODES, gauss_jacobi, simpson_rule

__all__ = [
    "SampledSignal",
    "EstimateSeries",
    "estimate_analytic",
    "discrete_weights",
    "estimate_sampled",
    "estimate_generalized",
    "estimate_sampled_varying",
    "minimal_vs_zero_order_identity",
    "affine_combination_identity",
]


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled data: abscissas are exactly origin + i*step."""

    origin: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ParameterError(f"step must be a positive real, got {self.step}")
        if vals.ndim != 1 or len(vals) < 3:
            raise ParameterError("signal needs at least 3 samples in a 1-D array")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> float:
        return self.origin + (len(self.values) - 1) * self.step

    @property
    def abscissas(self) -> np.ndarray:
        return self.origin + np.arange(len(self.values)) * self.step


@dataclass(frozen=True)
class EstimateSeries:
    """Per-point derivative estimates on the interior where windows fit."""

    abscissas: np.ndarray
    values: np.ndarray
    half_window: float
    params: EstimatorParams
    budget: object = None
    half_windows: np.ndarray | None = field(default=None)  # set for varying windows


def _analytic_quadrature(kernel: Kernel, f, x: float, h: float) -> float:
    p = kernel.params
    if min(p.alpha, p.beta) >= 0:
        nodes, w = simpson_rule(ESTIMATE_NODES)
        kv = kernel.values_on_grid(nodes, key=("simpson", ESTIMATE_NODES))
        fv = np.asarray(f(x + h * nodes), dtype=float)
        if not np.all(np.isfinite(fv)):
            raise EvaluationError(f"function produced non-finite values on [{x - h}, {x + h}]")
        return float(w @ (kv * fv))
    # negative exponents: endpoint-free Gauss-Jacobi per basis term
    total = 0.0
    for c, a, b in zip(kernel._coefs, kernel._alphas, kernel._betas):
        nodes, w = gauss_jacobi(200, a, b)
        fv = np.asarray(f(x + h * nodes), dtype=float)
        if not np.all(np.isfinite(fv)):
            raise EvaluationError(f"function produced non-finite values on [{x - h}, {x + h}]")
        pv = jacobi_polynomial(JacobiIndex(p.n, a, b), nodes) if p.n else 1.0
        total += c * float(w @ (pv * fv))
    return total


def estimate_analytic(f, x: float, h: float, kernel: Kernel) -> float:
    """n-th derivative estimate at ``x`` from the window [x-h, x+h].

    ``f`` must accept an ndarray of abscissas.  Exact up to quadrature
    error for polynomials of degree <= n+q.
    """
    if not (h > 0 and math.isfinite(h)):
        raise ParameterError(f"window half-length h must be positive, got {h}")
    return _analytic_quadrature(kernel, f, x, h) / h ** kernel.params.n


def discrete_weights(kernel: Kernel, m: int, step: float) -> np.ndarray:
    """Trapezoid convolution weights w_j, j = -m..m, for h = m*step.

    Convolving samples f(x + j*step) with these weights realizes the
    kernel integral under the composite trapezoid rule on 2m panels.
    """
    p = kernel.params
    if p.alpha < 0 or p.beta < 0:
        raise ParameterError(
            "discrete weights need alpha, beta >= 0: the trapezoid rule samples "
            f"the kernel at t = +-1 where it diverges for ({p.alpha}, {p.beta})"
        )
    if m < p.n + p.q + 1:
        raise ParameterError(f"m={m} too small to resolve the kernel; need m >= {p.n + p.q + 1}")
    if not (step > 0 and math.isfinite(step)):
        raise ParameterError(f"step must be a positive real, got {step}")
    h = m * step
    t = np.arange(-m, m + 1, dtype=float) / m
    w = kernel(t) / (m * h**p.n)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _check_window(signal: SampledSignal, m: int) -> None:
    need = 2 * m + 1
    if len(signal) < need:
        raise WindowError(
            f"window m={m} needs at least {need} samples, signal has {len(signal)}"
        )


def estimate_sampled(signal: SampledSignal, kernel: Kernel, m: int, budget=None) -> EstimateSeries:
    """Derivative estimates at every interior sample m <= i <= N-1-m."""
    _check_window(signal, m)
    w = discrete_weights(kernel, m, signal.step)
    values = _accel.sliding_correlate(signal.values, w)
    h = m * signal.step
    abscissas = signal.origin + (m + np.arange(len(values))) * signal.step
    return EstimateSeries(abscissas, values, h, kernel.params, budget)


def estimate_generalized(signal: SampledSignal, kernel: Kernel, m: int, budget=None) -> EstimateSeries:
    """``estimate_sampled`` under the weaker contract at kink points.

    For f with existing one-sided n-th derivatives, the estimate converges
    (h -> 0, noise-free) to their average; this requires the symmetric
    kernel family with even q, which is enforced here.
    """
    p = kernel.params
    if not (p.is_ultraspherical and p.q % 2 == 0):
        raise ParameterError(
            "generalized estimation requires a symmetric kernel (alpha == beta) "
            f"with even q, got alpha={p.alpha}, beta={p.beta}, q={p.q}"
        )
    return estimate_sampled(signal, kernel, m, budget)


def estimate_sampled_varying(
    signal: SampledSignal, kernel: Kernel, centers: np.ndarray, window_sizes: np.ndarray,
    budget=None,
) -> EstimateSeries:
    """Per-point estimates with an individual window size at each center.

    ``centers`` are sample indices; each window [i - m_i, i + m_i] must fit
    inside the signal.  Weight vectors are cached per distinct window size.
    """
    centers = np.asarray(centers, dtype=np.intp)
    window_sizes = np.asarray(window_sizes, dtype=np.intp)
    if centers.shape != window_sizes.shape:
        raise ParameterError("centers and window_sizes must have matching shapes")
    n_last = len(signal) - 1
    if np.any(window_sizes > np.minimum(centers, n_last - centers)):
        bad = int(np.argmax(window_sizes > np.minimum(centers, n_last - centers)))
        raise WindowError(
            f"window m={int(window_sizes[bad])} does not fit at sample index {int(centers[bad])}"
        )
    values = np.empty(len(centers))
    for m in np.unique(window_sizes):
        sel = window_sizes == m
        w = discrete_weights(kernel, int(m), signal.step)
        values[sel] = _accel.windowed_dot(signal.values, w, centers[sel])
    hs = window_sizes * signal.step
    return EstimateSeries(
        signal.origin + centers * signal.step,
        values,
        float(hs.max()) if len(hs) else 0.0,
        kernel.params,
        budget,
        half_windows=hs,
    )


def minimal_vs_zero_order_identity(f, f_n, x: float, h: float, n: int, alpha: float, beta: float):
    """Two independent routes to the same value.

    Left: n-th-derivative kernel applied to f.  Right: zero-order kernel
    with exponents shifted by n applied to the supplied analytic n-th
    derivative ``f_n``.  The two agree for smooth f.
    """
    left = estimate_analytic(f, x, h, minimal_kernel(n, alpha, beta))
    right = estimate_analytic(f_n, x, h, minimal_kernel(0, alpha + n, beta + n))
    return left, right


def affine_combination_identity(f, x: float, h: float, params: EstimatorParams):
    """Direct kernel estimate vs the explicit combination of minimal ones.

    Returns (direct, combined); they agree for any f defined on the window.
    """
    direct = estimate_analytic(f, x, h, affine_kernel(params))
    n, alpha, beta = params.n, params.alpha, params.beta
    combined = 0.0
    for i in range(params.q + 1):
        p_i0 = jacobi_polynomial(JacobiIndex(i, alpha + n, beta + n), 0.0)
        if p_i0 == 0.0:
            continue
        ratio = (2 * i + alpha + beta + 2 * n + 1) / (i + alpha + beta + 2 * n + 1)
        for j in range(i + 1):
            coef = p_i0 * ratio * (-1) ** (i + j) * math.comb(i, j)
            combined += coef * estimate_analytic(
                f, x, h, minimal_kernel(n, alpha + i - j, beta + j)
            )
    return direct, combined
