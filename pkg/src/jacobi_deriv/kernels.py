"""Construction and validation of the integration kernels.

A kernel is a finite combination of weighted Jacobi polynomials

    sum_k  c_k * P_n^{(a_k, b_k)}(t) * (1-t)^{a_k} (1+t)^{b_k}

on [-1, 1].  Convolving a function against it (and scaling by the window
half-length) estimates the n-th derivative at the window center.  The
minimal kernel is the single-term normalized product; the affine kernel
combines parameter-shifted minimal kernels so that moments up to order
n+q are annihilated, which raises the bias order of the estimator.

Every kernel validates its own moment certificate at construction and
refuses to exist otherwise: a silently wrong moment destroys the order
of the whole method.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CertificateError, DomainError, ParameterError, SingularityError
from .jacobi import JacobiIndex, jacobi_polynomial, jacobi_recurrence, log_gamma
from .quadrature import gauss_jacobi

__all__ = [
    "MOMENT_TOL",
    "EstimatorParams",
    "Kernel",
    "minimal_kernel",
    "affine_kernel",
    "ultraspherical_kernel",
    "kernel_moments",
    "affine_coefficient_sum",
]

MOMENT_TOL = 1e-8


@dataclass(frozen=True)
class EstimatorParams:
    """Full configuration of one estimator: derivative order ``n``, weight
    exponents ``alpha``/``beta`` and truncation order ``q``."""

    n: int
    alpha: float
    beta: float
    q: int = 0

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ParameterError(f"derivative order n must be a non-negative integer, got {self.n}")
        if self.q < 0 or int(self.q) != self.q:
            raise ParameterError(f"truncation order q must be a non-negative integer, got {self.q}")
        JacobiIndex(self.n, self.alpha, self.beta)  # validates the exponent range

    @property
    def is_ultraspherical(self) -> bool:
        return self.alpha == self.beta


def _norm_const(n: int, a: float, b: float) -> float:
    """Normalization 2^{-(n+a+b+1)} n! / B(n+a+1, n+b+1), in log space."""
    lg = (
        log_gamma(n + 1.0)
        - log_gamma(n + a + 1)
        - log_gamma(n + b + 1)
        + log_gamma(2 * n + a + b + 2)
    )
    return math.exp(lg - (n + a + b + 1) * math.log(2.0))


class Kernel:
    """Immutable integration kernel with its moment certificate.

    ``terms`` is the coefficient expansion over normalized weighted Jacobi
    basis terms; evaluation is closed-form and independent of the window
    size, so one kernel serves every h.
    """

    __slots__ = ("params", "kind", "_coefs", "_alphas", "_betas", "_moments", "_grid_cache")

    def __init__(self, params: EstimatorParams, kind: str, terms, _moments=None):
        if kind not in ("minimal", "affine"):
            raise ParameterError(f"unknown kernel kind {kind!r}")
        coefs, alphas, betas = (np.asarray(col, dtype=float) for col in zip(*terms))
        self.params = params
        self.kind = kind
        self._coefs = coefs
        self._alphas = alphas
        self._betas = betas
        self._grid_cache = {}
        moments = self._compute_moments(params.n + params.q + 1)
        self._validate(moments)
        if _moments is not None and not np.allclose(moments, _moments, atol=MOMENT_TOL):
            raise CertificateError("stored moments disagree with recomputed certificate")
        self._moments = moments

    # -- evaluation ----------------------------------------------------

    def _eval_terms(self, t: np.ndarray, with_weight: bool) -> np.ndarray:
        n = self.params.n
        a0, b0 = self.params.alpha, self.params.beta
        out = np.zeros_like(t)
        for c, a, b in zip(self._coefs, self._alphas, self._betas):
            v = c * jacobi_recurrence(n, a, b, t)
            if with_weight:
                v *= (1.0 - t) ** a * (1.0 + t) ** b
            else:
                # shared factor (1-t)^a0 (1+t)^b0 removed; the remaining
                # exponents are non-negative integers, finite everywhere
                v *= (1.0 - t) ** (a - a0) * (1.0 + t) ** (b - b0)
            out += v
        return out

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(np.abs(arr) > 1) or not np.all(np.isfinite(arr)):
            raise DomainError("kernel evaluation is only defined on [-1, 1]")
        if self.params.alpha < 0 and np.any(arr == 1.0):
            raise SingularityError(f"kernel diverges at t=1 for alpha={self.params.alpha} < 0")
        if self.params.beta < 0 and np.any(arr == -1.0):
            raise SingularityError(f"kernel diverges at t=-1 for beta={self.params.beta} < 0")
        out = self._eval_terms(arr + 0.0, with_weight=True)
        return float(out) if np.isscalar(t) or arr.ndim == 0 else out

    def poly_factor(self, t):
        """Kernel divided by its leading weight (1-t)^alpha (1+t)^beta.

        A polynomial, finite on all of [-1, 1] even for negative exponents;
        used with Gauss-Jacobi rules for absolute-value integrals.
        """
        arr = np.asarray(t, dtype=float)
        out = self._eval_terms(arr + 0.0, with_weight=False)
        return float(out) if np.isscalar(t) or arr.ndim == 0 else out

    def values_on_grid(self, nodes: np.ndarray, key=None) -> np.ndarray:
        """Kernel values on a quadrature grid, cached per ``key``."""
        if key is not None and key in self._grid_cache:
            return self._grid_cache[key]
        vals = self._eval_terms(np.asarray(nodes, dtype=float), with_weight=True)
        vals.setflags(write=False)
        if key is not None:
            self._grid_cache[key] = vals
        return vals

    # -- certificate ---------------------------------------------------

    def _compute_moments(self, max_m: int) -> np.ndarray:
        n = self.params.n
        moments = np.zeros(max_m + 1)
        for m in range(max_m + 1):
            tot = 0.0
            for c, a, b in zip(self._coefs, self._alphas, self._betas):
                if c == 0.0:
                    continue
                x, w = gauss_jacobi((n + m) // 2 + 1, a, b)
                tot += c * float(w @ (jacobi_recurrence(n, a, b, x) * x**m))
            moments[m] = tot
        return moments

    def _validate(self, moments: np.ndarray) -> None:
        n, q = self.params.n, self.params.q
        target = np.zeros_like(moments)
        target[n] = math.factorial(n)
        bad = np.abs(moments[: n + q + 1] - target[: n + q + 1]) > MOMENT_TOL
        if np.any(bad):
            m = int(np.argmax(bad))
            raise CertificateError(
                f"moment {m} of kernel {self.params} is {moments[m]:.3e}, "
                f"expected {target[m]:g} (tolerance {MOMENT_TOL:g})"
            )
        if self.params.is_ultraspherical and q % 2 == 0:
            if abs(moments[n + q + 1]) > MOMENT_TOL:
                raise CertificateError(
                    f"symmetric kernel {self.params}: moment {n + q + 1} should vanish "
                    f"by parity, got {moments[n + q + 1]:.3e}"
                )

    @property
    def moment_certificate(self) -> list[tuple[int, float]]:
        return [(m, float(v)) for m, v in enumerate(self._moments)]

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        p = self.params
        return {
            "n": p.n,
            "alpha": p.alpha,
            "beta": p.beta,
            "q": p.q,
            "kind": self.kind,
            "terms": [
                {"coef": float(c), "alpha_ij": float(a), "beta_j": float(b)}
                for c, a, b in zip(self._coefs, self._alphas, self._betas)
            ],
            "moments": [float(v) for v in self._moments],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "Kernel":
        params = EstimatorParams(doc["n"], doc["alpha"], doc["beta"], doc["q"])
        terms = [(t["coef"], t["alpha_ij"], t["beta_j"]) for t in doc["terms"]]
        return cls(params, doc["kind"], terms, _moments=np.asarray(doc["moments"]))

    @classmethod
    def from_json(cls, text: str) -> "Kernel":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"Kernel({self.kind}, n={self.params.n}, alpha={self.params.alpha}, beta={self.params.beta}, q={self.params.q})"


@lru_cache(maxsize=256)
def minimal_kernel(n: int, alpha: float, beta: float) -> Kernel:
    """Single-term kernel estimating the n-th derivative at bias order h."""
    params = EstimatorParams(n, alpha, beta, 0)
    return Kernel(params, "minimal", [(_norm_const(n, alpha, beta), alpha, beta)])


def _affine_terms(params: EstimatorParams, degrees) -> list[tuple[float, float, float]]:
    n, alpha, beta = params.n, params.alpha, params.beta
    terms = []
    for i in degrees:
        p_i0 = jacobi_polynomial(JacobiIndex(i, alpha + n, beta + n), 0.0)
        ratio = (2 * i + alpha + beta + 2 * n + 1) / (i + alpha + beta + 2 * n + 1)
        for j in range(i + 1):
            a_ij, b_j = alpha + i - j, beta + j
            coef = p_i0 * ratio * (-1) ** (i + j) * math.comb(i, j)
            terms.append((coef * _norm_const(n, a_ij, b_j), a_ij, b_j))
    return terms


@lru_cache(maxsize=256)
def affine_kernel(params: EstimatorParams) -> Kernel:
    """Affine combination of parameter-shifted minimal kernels.

    Annihilates moments up to n+q, which raises the bias order of the
    derivative estimate from h to h^{q+1} (h^{q+2} for the symmetric
    alpha = beta family with even q).
    """
    return Kernel(params, "affine", _affine_terms(params, range(params.q + 1)))


@lru_cache(maxsize=256)
def ultraspherical_kernel(n: int, alpha: float, q: int) -> Kernel:
    """Symmetric-weight kernel, assembled from even expansion degrees only.

    Pointwise identical to ``affine_kernel`` with beta = alpha: the odd
    degrees drop out because symmetric Jacobi polynomials of odd degree
    vanish at zero.  Requires even ``q``.
    """
    if q % 2 == 1:
        raise ParameterError(
            f"ultraspherical_kernel needs an even truncation order, got q={q}; "
            "use affine_kernel for odd q"
        )
    params = EstimatorParams(n, alpha, alpha, q)
    return Kernel(params, "affine", _affine_terms(params, range(0, q + 1, 2)))


def kernel_moments(kernel: Kernel, max_m: int) -> list[float]:
    """Moments integral(kernel(t) * t^m) for m = 0..max_m.

    Computed per basis term with a Gauss-Jacobi rule matched to the term's
    weight, hence exact to rounding for any admissible exponents.
    """
    n, q = kernel.params.n, kernel.params.q
    if max_m > 2 * (n + q) + 4:
        raise ParameterError(f"no moment contract beyond m={2 * (n + q) + 4}, requested {max_m}")
    return [float(v) for v in kernel._compute_moments(max_m)]


def affine_coefficient_sum(params: EstimatorParams) -> float:
    """The affine-combination coefficient sum; equals 1 for all parameters."""
    n, alpha, beta = params.n, params.alpha, params.beta
    total = 0.0
    for i in range(params.q + 1):
        p_i0 = jacobi_polynomial(JacobiIndex(i, alpha + n, beta + n), 0.0)
        ratio = (2 * i + alpha + beta + 2 * n + 1) / (i + alpha + beta + 2 * n + 1)
        inner = sum((-1) ** (i + j) * math.comb(i, j) for j in range(i + 1))
        total += p_i0 * ratio * inner
    return total
