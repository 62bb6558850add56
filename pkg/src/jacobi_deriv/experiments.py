"""Reproducible experiment drivers: benchmark tables, convergence slopes,
and constant sweeps.

``REFERENCE_TABLES`` holds the published benchmark results for the three
test functions (max error over [-2, 2] and the window size m used), keyed
by (noise level, sampling period).  Exact values depend on the original
noise stream and are not bit-reproducible; reproduction is judged by
order of magnitude across seeds.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError
from .error_model import noise_amplification, select_window_global, weighted_absolute_moment
from .estimator import SampledSignal, estimate_analytic, estimate_sampled
from .functions import get_test_function
from .kernels import (
    EstimatorParams,
    affine_kernel,
    kernel_moments,
    minimal_kernel,
    ultraspherical_kernel,
)

__all__ = [
    "REFERENCE_TABLES",
    "run_table",
    "run_slope",
    "run_sweep",
    "validate_certificates",
]

# (example) -> (delta, step) -> n -> (max_error, m); None where no published
# error exists (example 3 third-derivative runs are shown only graphically)
REFERENCE_TABLES = {
    1: {
        (0.15, 1e-3): {1: (9.45e-2, 591), 2: (1.1, 698), 3: (1.258e1, 777), 4: (1.278e2, 850)},
        (0.015, 1e-3): {1: (1.85e-2, 425), 2: (2.951e-1, 523), 3: (3.888, 601), 4: (4.588e1, 675)},
        (0.015, 1e-2): {1: (4.06e-2, 47), 2: (5.645e-1, 55), 3: (7.359, 62), 4: (9.686e1, 69)},
    },
    2: {
        (0.15, 1e-3): {1: (1.42e-1, 442), 2: (2.152, 549), 3: (2.982e1, 643), 4: (3.756e2, 733)},
        (0.015, 1e-3): {1: (2.22e-2, 346), 2: (4.435e-1, 428), 3: (5.973, 510), 4: (8.769e1, 595)},
        (0.015, 1e-2): {1: (3.404e-1, 54), 2: (3.425, 61), 3: (3.638e1, 68), 4: (5.235e2, 79)},
    },
    3: {
        (0.15, 1e-3): {1: (9.7e-3, 1700), 2: (9.65e-2, 1700), 3: (None, 1700)},
        (0.015, 1e-3): {1: (4.7e-3, 1200), 2: (7.23e-2, 1200), 3: (None, 1500)},
    },
}

TABLE_INTERVAL = (-2.0, 2.0)
TABLE_MARGIN = 1.2  # extra sampled data on each side for auto-selected windows


def _example_params(example: int, n: int) -> EstimatorParams:
    if example == 3 and n >= 3:
        # third derivatives of the kink function need a gentler kernel
        return EstimatorParams(n, 2.0, 2.0, 2)
    return EstimatorParams(n, 5.0, 5.0, 4)


def _example_kernel(params: EstimatorParams):
    if params.is_ultraspherical and params.q % 2 == 0:
        return ultraspherical_kernel(params.n, params.alpha, params.q)
    return affine_kernel(params)


def run_table(example: int, delta: float, step: float, seeds,
              ns=(1, 2)) -> dict:
    """Reproduce one benchmark table: per (n, seed) the window size and the
    max error over [-2, 2], aggregated across seeds.

    Examples 1 and 2 select the window by budget minimization; example 3
    uses the fixed published window sizes (its kink breaks the smoothness
    the bias budget needs).
    """
    if example not in (1, 2, 3):
        raise ParameterError(f"example must be 1, 2 or 3, got {example}")
    fn = get_test_function(f"f{example}")
    refs = REFERENCE_TABLES[example].get((delta, step), {})
    if example == 3 and not refs:
        raise ParameterError(
            f"example 3 has no published window sizes for delta={delta}, step={step}"
        )
    a, b = TABLE_INTERVAL
    sigma = delta / 3.0
    rows = []
    for row_idx, n in enumerate(ns):
        params = _example_params(example, n)
        kernel = _example_kernel(params)
        ref_err, ref_m = refs.get(n, (None, None))
        if example == 3:
            m, budget = ref_m, None
        else:
            margin = TABLE_MARGIN
            count = round((b - a + 2 * margin) / step) + 1
            meta = SampledSignal(a - margin, step, np.zeros(count))
            m, budget = select_window_global(meta, fn, kernel, delta, target=(a, b))
            margin_needed = m * step
            if margin_needed > margin:  # pragma: no cover - scan is capped by margin
                raise ParameterError(f"selected window m={m} exceeds the sampled margin")
        margin = m * step
        count = round((b - a + 2 * margin) / step) + 1
        xs = (a - margin) + np.arange(count) * step
        base = np.asarray(fn(xs), dtype=float)
        lo = round((a - xs[0]) / step)
        hi = round((b - xs[0]) / step)
        centers = np.arange(lo, hi + 1)
        truth = fn.derivative(n)(xs[centers])
        errors = []
        for seed in seeds:
            rng = np.random.default_rng([int(seed), row_idx])
            noisy = base + sigma * rng.standard_normal(len(base)) if sigma > 0 else base
            series = estimate_sampled(SampledSignal(xs[0], step, noisy), kernel, m)
            sel = series.values[centers - m]
            errors.append(float(np.max(np.abs(sel - truth))))
        rows.append({
            "n": n,
            "alpha": params.alpha,
            "q": params.q,
            "m": int(m),
            "reference_error": ref_err,
            "reference_m": ref_m,
            "errors": errors,
            "min": min(errors),
            "median": float(np.median(errors)),
            "max": max(errors),
            "budget": budget.to_dict() if budget is not None else None,
        })
    return {"example": example, "delta": delta, "step": step,
            "seeds": [int(s) for s in seeds], "rows": rows}


def run_slope(fn, n: int, alpha: float, beta: float, q: int, h_list,
              xs=None) -> dict:
    """Least-squares order fit of log(max error) against log(h), noise-free."""
    h_list = np.asarray(sorted(h_list), dtype=float)
    if len(h_list) < 3:
        raise ParameterError(f"slope fit needs at least 3 window lengths, got {len(h_list)}")
    if h_list[-1] < 4 * h_list[0]:
        raise ParameterError("h values must span at least a factor of 4")
    if xs is None:
        xs = np.linspace(-1.0, 1.0, 21)
    params = EstimatorParams(n, alpha, beta, q)
    kernel = _example_kernel(params)
    d_n = fn.derivative(n)
    errs = []
    for h in h_list:
        worst = 0.0
        for x in xs:
            est = estimate_analytic(fn, float(x), float(h), kernel)
            worst = max(worst, abs(est - float(np.asarray(d_n(x)))))
        errs.append(worst)
    errs = np.asarray(errs)
    scale = max(1.0, float(np.max(np.abs(d_n(xs)))))
    floor_limited = bool(np.min(errs) < 1e-10 * scale)
    slope = float(np.polyfit(np.log(h_list), np.log(np.maximum(errs, 1e-300)), 1)[0])
    return {
        "slope": slope,
        "h": [float(h) for h in h_list],
        "max_errors": [float(e) for e in errs],
        "floor_limited": floor_limited,
    }


def run_sweep(n_list, q_list, alpha_list) -> dict:
    """Constant sweep over symmetric kernels, with monotonicity report.

    Returns one row per (n, q, alpha) with the noise constant c3 and the
    bias-side constant c4 (exponent n+q+2), plus whether c3 is
    nondecreasing in q and c4 nonincreasing in alpha across the sweep.
    """
    n_list, q_list, alpha_list = (sorted(set(v)) for v in (n_list, q_list, alpha_list))
    if not (n_list and q_list and alpha_list):
        raise ParameterError("sweep lists must be nonempty")
    rows = []
    table = {}
    for n in n_list:
        for q in q_list:
            for alpha in alpha_list:
                params = EstimatorParams(int(n), float(alpha), float(alpha), int(q))
                kernel = _example_kernel(params)
                c3 = noise_amplification(kernel)
                c4 = weighted_absolute_moment(kernel, params.n + params.q + 2)
                table[(n, q, alpha)] = (c3, c4)
                rows.append({"n": int(n), "q": int(q), "alpha": float(alpha),
                             "c3": c3, "c4": c4})
    tol = 1e-8
    c3_mono = all(
        table[(n, q_list[i], a)][0] <= table[(n, q_list[i + 1], a)][0] + tol
        for n in n_list for a in alpha_list for i in range(len(q_list) - 1)
    )
    c4_mono = all(
        table[(n, q, alpha_list[i])][1] + tol >= table[(n, q, alpha_list[i + 1])][1]
        for n in n_list for q in q_list for i in range(len(alpha_list) - 1)
    )
    return {"rows": rows, "c3_nondecreasing_in_q": c3_mono, "c4_nonincreasing_in_alpha": c4_mono}


def validate_certificates() -> dict:
    """Re-derive kernel moments for a parameter grid and check the targets.

    Construction already certifies every kernel; this walks a grid anyway
    and reports each check, for the CLI's validate subcommand.
    """
    failures = []
    checked = 0
    grids = [(n, alpha, alpha, q) for n in range(0, 4) for q in (0, 2, 4) for alpha in (0.0, 1.0, 5.0)]
    grids += [(1, 0.0, 1.0, 3), (2, 2.0, 0.5, 2), (0, 4.0, 1.5, 1)]
    for n, alpha, beta, q in grids:
        params = EstimatorParams(n, alpha, beta, q)
        kernel = affine_kernel(params)
        moments = kernel_moments(kernel, n + q)
        target = [math.factorial(n) if m == n else 0.0 for m in range(n + q + 1)]
        err = max(abs(got - want) for got, want in zip(moments, target))
        checked += 1
        if err > 1e-8:
            failures.append({"params": (n, alpha, beta, q), "max_moment_error": err})
    # spot-check the minimal kernels too
    for n, alpha, beta in [(0, 0.0, 0.0), (1, 5.0, 5.0), (3, 0.5, 2.0)]:
        kernel = minimal_kernel(n, alpha, beta)
        moments = kernel_moments(kernel, n)
        err = max(abs(got - want) for got, want in
                  zip(moments, [math.factorial(n) if m == n else 0.0 for m in range(n + 1)]))
        checked += 1
        if err > 1e-8:
            failures.append({"params": (n, alpha, beta, 0), "max_moment_error": err})
    return {"checked": checked, "failures": failures}
