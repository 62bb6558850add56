"""Built-in benchmark functions with analytic derivatives, plus noise.

The three benchmark signals:

* ``f1(x) = sin(2 pi x) exp(-x^2)`` -- smooth and oscillatory.
* ``f2(x) = exp(x^2)`` -- smooth with rapidly growing derivatives.
* ``f3`` -- piecewise cubic (-x^3/6 + 2x for x <= 0, x^3/6 + 2x above),
  twice continuously differentiable with f3'' = |x| and one-sided third
  derivatives -1 / +1 at the origin.

Derivatives of f1 and f2 come from exact polynomial recurrences, so any
order is available; f3 carries its piecewise closed forms, with the
convention that the third derivative at exactly 0 is the average of the
two one-sided values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .estimator import SampledSignal

__all__ = ["TestFunction", "NoiseSpec", "get_test_function", "synthesize", "TEST_FUNCTIONS"]

_Poly = np.polynomial.Polynomial


class TestFunction:
    """A benchmark function with vectorized analytic derivatives."""

    def __init__(self, fid: str, deriv_factory):
        self.id = fid
        self._factory = deriv_factory
        self._cache: dict[int, object] = {}

    def __call__(self, x):
        return self.derivative(0)(x)

    def derivative(self, order: int):
        """Vectorized evaluator of the ``order``-th derivative."""
        if order < 0:
            raise ParameterError(f"derivative order must be >= 0, got {order}")
        if order not in self._cache:
            self._cache[order] = self._factory(order)
        return self._cache[order]

    def __repr__(self):
        return f"TestFunction({self.id!r})"


def _f1_factory():
    # d/dx [e^{-x^2} (A sin(2 pi x) + B cos(2 pi x))] keeps the same shape with
    # A <- A' - 2xA - 2 pi B,  B <- B' - 2xB + 2 pi A
    two_x = _Poly([0.0, 2.0])
    coeffs = [(_Poly([1.0]), _Poly([0.0]))]

    def factory(order):
        while len(coeffs) <= order:
            a, b = coeffs[-1]
            coeffs.append((a.deriv() - two_x * a - 2 * math.pi * b,
                           b.deriv() - two_x * b + 2 * math.pi * a))
        a, b = coeffs[order]

        def ev(x, _a=a, _b=b):
            x = np.asarray(x, dtype=float)
            return np.exp(-x * x) * (_a(x) * np.sin(2 * math.pi * x) + _b(x) * np.cos(2 * math.pi * x))

        return ev

    return factory


def _f2_factory():
    # d/dx [e^{x^2} p(x)] = e^{x^2} (p' + 2x p)
    two_x = _Poly([0.0, 2.0])
    polys = [_Poly([1.0])]

    def factory(order):
        while len(polys) <= order:
            polys.append(polys[-1].deriv() + two_x * polys[-1])
        p = polys[order]

        def ev(x, _p=p):
            x = np.asarray(x, dtype=float)
            return np.exp(x * x) * _p(x)

        return ev

    return factory


def _f3_factory():
    def factory(order):
        def ev(x):
            x = np.asarray(x, dtype=float)
            s = np.sign(x)
            if order == 0:
                return s * x**3 / 6.0 + 2.0 * x
            if order == 1:
                return s * x**2 / 2.0 + 2.0
            if order == 2:
                return np.abs(x)
            if order == 3:
                return s + 0.0  # sign(0) = 0: average of the one-sided values
            return np.zeros_like(x)

        return ev

    return factory


TEST_FUNCTIONS = {
    "f1": TestFunction("f1", _f1_factory()),
    "f2": TestFunction("f2", _f2_factory()),
    "f3": TestFunction("f3", _f3_factory()),
}


def get_test_function(fid: str) -> TestFunction:
    try:
        return TEST_FUNCTIONS[fid]
    except KeyError:
        raise ParameterError(
            f"unknown test function {fid!r}; choose from {sorted(TEST_FUNCTIONS)}"
        ) from None


@dataclass(frozen=True)
class NoiseSpec:
    """Seeded zero-mean Gaussian noise; the level follows the 3-sigma rule."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0 or not math.isfinite(self.sigma):
            raise ParameterError(f"sigma must be >= 0, got {self.sigma}")

    @property
    def delta(self) -> float:
        """Sup-norm noise level: exactly 3 * sigma."""
        return 3.0 * self.sigma


def synthesize(fn: TestFunction, interval: tuple[float, float], step: float,
               noise: NoiseSpec | None = None) -> SampledSignal:
    """Sample ``fn`` uniformly over ``interval``, adding seeded noise.

    Deterministic for a fixed seed; with sigma = 0 the samples are exact.
    """
    a, b = interval
    if not a < b:
        raise ParameterError(f"empty interval [{a}, {b}]")
    if not (step > 0 and math.isfinite(step)):
        raise ParameterError(f"step must be positive, got {step}")
    count = round((b - a) / step) + 1
    xs = a + np.arange(count) * step
    values = np.asarray(fn(xs), dtype=float)
    if noise is not None and noise.sigma > 0:
        rng = np.random.default_rng(noise.seed)
        values = values + noise.sigma * rng.standard_normal(count)
    return SampledSignal(a, step, values)
