"""Error constants, bounds, and bound-driven window selection.

The total estimation error splits into three budgeted parts:

* bias: ``c_bias * h^{q+1}`` in general, ``c_bias * h^{q+2}`` for the
  symmetric (alpha == beta, even q) kernel family, where ``c_bias``
  combines a sup bound on a high derivative of f with a weighted absolute
  kernel moment;
* noise: ``c3 * delta / h^n`` where ``c3`` is the absolute kernel integral
  and ``delta`` the sup-norm noise level;
* discretization: the composite-trapezoid error of the window sum, bounded
  through a grid estimate of the second derivative of kernel * function.

Window selection scans integer window sizes m (h = m * step) and minimizes
the sum of the three.  The derivative sup bounds are taken on the working
interval widened by h/(n+q+3) on each side, which is where the Taylor
remainder point can fall asymptotically.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import EvaluationError, ParameterError
from .estimator import SampledSignal
from .kernels import Kernel
from .quadrature import CONSTANT_NODES, gauss_jacobi, simpson_rule

__all__ = [
    "ErrorBudget",
    "OptimalWindow",
    "LocalWindowSelection",
    "noise_amplification",
    "weighted_absolute_moment",
    "bias_constant",
    "bound_bias",
    "bound_noise",
    "bound_numerical",
    "optimal_h",
    "select_window_global",
    "select_window_local",
]

NUM_SUP_GRID = 2001   # composite second-derivative sup grid
NUM_SUP_STEP = 1e-4   # central-difference step on that grid
M_BOUND_GRID = 20001  # derivative sup-bound search grid


@dataclass(frozen=True)
class ErrorBudget:
    """Constants and bound values for one estimator configuration."""

    c_bias: float
    c3: float
    c4: float
    m_bound: float
    delta: float
    h_opt: float
    b_bias: float
    b_noise: float
    b_num: float
    b_total: float
    branch: str  # "general" | "ultraspherical"

    def __post_init__(self):
        for name in ("c_bias", "c3", "c4", "m_bound", "delta", "b_bias", "b_noise", "b_num"):
            if getattr(self, name) < 0:
                raise ParameterError(f"budget field {name} must be >= 0")
        if not math.isclose(self.b_total, self.b_bias + self.b_noise + self.b_num, rel_tol=1e-12):
            raise ParameterError("b_total must equal b_bias + b_noise + b_num")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


class OptimalWindow(NamedTuple):
    h: float      # 0.0 signals "no finite minimizer": pure-bias mode
    bound: float  # bias + noise bound at h


def _branch(kernel: Kernel) -> str:
    p = kernel.params
    return "ultraspherical" if p.is_ultraspherical and p.q % 2 == 0 else "general"


def _abs_weighted_integral(kernel: Kernel, exponent: int) -> float:
    """integral of |t|^exponent * |kernel(t)| over [-1, 1]."""
    p = kernel.params
    if min(p.alpha, p.beta) >= 0:
        nodes, w = simpson_rule(CONSTANT_NODES)
        kv = kernel.values_on_grid(nodes, key=("simpson", CONSTANT_NODES))
        integrand = np.abs(kv)
        if exponent:
            integrand = integrand * np.abs(nodes) ** exponent
        return float(w @ integrand)
    # negative exponents: pull the leading weight into a Gauss-Jacobi rule and
    # integrate the absolute polynomial factor (piecewise smooth; interior nodes)
    nodes, w = gauss_jacobi(4001, p.alpha, p.beta)
    integrand = np.abs(kernel.poly_factor(nodes))
    if exponent:
        integrand = integrand * np.abs(nodes) ** exponent
    return float(w @ integrand)


def noise_amplification(kernel: Kernel) -> float:
    """Absolute kernel integral: the noise-to-output amplification constant."""
    return _abs_weighted_integral(kernel, 0)


def weighted_absolute_moment(kernel: Kernel, exponent: int) -> float:
    """integral of |t^exponent * kernel(t)|, the bias-side kernel constant."""
    if exponent < 0:
        raise ParameterError(f"exponent must be >= 0, got {exponent}")
    return _abs_weighted_integral(kernel, exponent)


def _bias_order(kernel: Kernel) -> tuple[int, int]:
    """(derivative order of the sup bound, h exponent) for the kernel branch."""
    p = kernel.params
    if _branch(kernel) == "ultraspherical":
        return p.n + p.q + 2, p.q + 2
    return p.n + p.q + 1, p.q + 1


def bias_constant(kernel: Kernel, m_bound: float) -> float:
    """Bias-bound constant from a sup bound on the relevant f derivative.

    ``m_bound`` must bound |f^{(n+q+1)}| (general) or |f^{(n+q+2)}|
    (symmetric kernel, even q) on the working interval.
    """
    if not (m_bound > 0 and math.isfinite(m_bound)):
        raise ParameterError(f"derivative sup bound must be positive, got {m_bound}")
    e, _ = _bias_order(kernel)
    return m_bound / math.factorial(e) * weighted_absolute_moment(kernel, e)


def bound_bias(c_bias: float, h: float, q: int, branch: str = "general") -> float:
    """Bias part of the budget at window half-length h."""
    if not (h > 0 and math.isfinite(h)):
        raise ParameterError(f"h must be positive, got {h}")
    power = q + 2 if branch == "ultraspherical" else q + 1
    return c_bias * h**power


def bound_noise(c3: float, delta: float, h: float, n: int) -> float:
    """Noise part of the budget: c3 * delta / h^n."""
    if not (h > 0 and math.isfinite(h)):
        raise ParameterError(f"h must be positive, got {h}")
    if delta < 0:
        raise ParameterError(f"noise level must be >= 0, got {delta}")
    return c3 * delta / h**n


def _composite_second_derivative(kernel: Kernel, f, x: float, h: float) -> np.ndarray:
    """|d^2/dt^2 [kernel(t) f(x+ht)]| on the sup grid, by central differences."""
    eps = NUM_SUP_STEP
    tg = np.linspace(-1.0 + eps, 1.0 - eps, NUM_SUP_GRID)
    rows = []
    for shift in (-eps, 0.0, eps):
        t = tg + shift
        rows.append(kernel(t) * np.asarray(f(x + h * t), dtype=float))
    gm, g0, gp = rows
    d2 = (gp - 2 * g0 + gm) / (eps * eps)
    finite = np.isfinite(d2)
    if finite.sum() < 5:
        raise EvaluationError("fewer than 5 evaluable grid points for the trapezoid-error sup")
    return np.abs(d2[finite])


def bound_numerical(kernel: Kernel, f, x: float, h: float, m: int) -> float:
    """Composite-trapezoid error bound for the discrete window sum.

    Grid-estimated sup, an approximation rather than a certified bound.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    sup = float(np.max(_composite_second_derivative(kernel, f, x, h)))
    return 8.0 / (12.0 * (2 * m) ** 2) * sup


def kernel_derivative_sups(kernel: Kernel) -> tuple[float, float, float]:
    """sup |k|, sup |k'|, sup |k''| on (-1, 1), by central differences."""
    cached = kernel._grid_cache.get("dsups")
    if cached is not None:
        return cached
    eps = NUM_SUP_STEP
    tg = np.linspace(-1.0 + eps, 1.0 - eps, NUM_SUP_GRID)
    km, k0, kp = kernel(tg - eps), kernel(tg), kernel(tg + eps)
    sups = (
        float(np.max(np.abs(k0))),
        float(np.max(np.abs((kp - km) / (2 * eps)))),
        float(np.max(np.abs((kp - 2 * k0 + km) / (eps * eps)))),
    )
    kernel._grid_cache["dsups"] = sups
    return sups


def optimal_h(c_bias: float, c3: float, delta: float, n: int, q: int,
              branch: str = "general") -> OptimalWindow:
    """Closed-form minimizer of the bias + noise bound.

    Returns h = 0.0 when no finite minimizer exists (delta = 0, or n = 0
    where the noise term does not depend on h): callers should fall back
    to pure-bias reasoning.
    """
    if c_bias <= 0 or c3 <= 0:
        raise ParameterError("optimal_h needs positive constants")
    if delta < 0:
        raise ParameterError(f"noise level must be >= 0, got {delta}")
    power = q + 2 if branch == "ultraspherical" else q + 1
    if delta == 0 or n == 0:
        return OptimalWindow(0.0, c3 * delta if n == 0 else 0.0)
    h = (n * c3 * delta / (power * c_bias)) ** (1.0 / (n + power))
    bound = c_bias * h**power + c3 * delta / h**n
    return OptimalWindow(h, bound)


# ---------------------------------------------------------------------------
# window selection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalWindowSelection:
    """Per-point window sizes with their budget components."""

    abscissas: np.ndarray
    centers: np.ndarray       # sample indices into the signal
    window_sizes: np.ndarray  # integer m_i per point
    b_bias: np.ndarray
    b_noise: np.ndarray
    b_num: np.ndarray

    @property
    def b_total(self) -> np.ndarray:
        return self.b_bias + self.b_noise + self.b_num

    def pairs(self) -> list[tuple[float, int]]:
        return [(float(x), int(m)) for x, m in zip(self.abscissas, self.window_sizes)]


class _IntervalMax:
    """Range-max queries over nested intervals that share a common core.

    Splits the grid at the core midpoint and keeps cumulative maxima on
    both sides; any query containing the split point is then O(1).
    """

    def __init__(self, xs: np.ndarray, vals: np.ndarray, split_at: float):
        self.xs = xs
        ic = int(np.searchsorted(xs, split_at))
        ic = min(max(ic, 1), len(xs) - 1)
        self.ic = ic
        self.left = np.maximum.accumulate(vals[:ic][::-1])[::-1]  # max over [i, ic)
        self.right = np.maximum.accumulate(vals[ic:])             # max over [ic, ic+k]

    def query(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        ilo = np.searchsorted(self.xs, lo, side="left")
        ihi = np.searchsorted(self.xs, hi, side="right") - 1
        ilo = np.clip(ilo, 0, self.ic - 1)
        ihi = np.clip(ihi - self.ic, 0, len(self.right) - 1)
        return np.maximum(self.left[ilo], self.right[ihi])


def _deriv_on(fn, order: int, xs: np.ndarray) -> np.ndarray:
    vals = np.abs(np.asarray(fn.derivative(order)(xs), dtype=float))
    if not np.all(np.isfinite(vals)):
        raise EvaluationError(f"derivative of order {order} is not finite on the scan interval")
    return vals


def _scan_constants(kernel: Kernel):
    p = kernel.params
    branch = _branch(kernel)
    e_exp, h_pow = _bias_order(kernel)
    c3 = noise_amplification(kernel)
    c4e = weighted_absolute_moment(kernel, e_exp)
    s0, s1, s2 = kernel_derivative_sups(kernel)
    return p, branch, e_exp, h_pow, c3, c4e, (s0, s1, s2)


def select_window_global(signal: SampledSignal, fn, kernel: Kernel, delta: float,
                         target: tuple[float, float] | None = None,
                         m_min: int | None = None,
                         m_max: int | None = None) -> tuple[int, ErrorBudget]:
    """Integer window size minimizing the three-part budget over a scan.

    ``fn`` supplies derivative evaluators (``fn.derivative(k)``); ``target``
    restricts the estimation interval to a strict sub-interval of the data,
    in which case the scan is capped so every target window fits.  Without
    a target, estimates live on the trimmed interior and the scan runs to
    half the signal length.
    """
    p, branch, e_exp, h_pow, c3, c4e, (s0, s1, s2) = _scan_constants(kernel)
    n, q = p.n, p.q
    step = signal.step
    dom_a, dom_b = signal.origin, signal.end
    if m_min is None:
        m_min = 4 * (n + q + 2)
    if target is None:
        a, b = dom_a, dom_b
        m_cap = (len(signal) - 1) // 2
    else:
        a, b = target
        if not (dom_a <= a < b <= dom_b):
            raise ParameterError(f"target [{a}, {b}] must lie inside the data [{dom_a}, {dom_b}]")
        m_cap = int(min(a - dom_a, dom_b - b) / step + 1e-9)
    m_max = min(5000, m_cap) if m_max is None else min(m_max, m_cap)
    if m_max < m_min:
        raise ParameterError(
            f"window scan range is empty: m_min={m_min} > m_max={m_max} "
            "(signal too short for this kernel)"
        )
    ms = np.arange(m_min, m_max + 1)
    hs = ms * step
    wid = n + q + 3
    h_top = hs[-1]

    # sup bound of f^(e_exp) over [a - h/wid, b + h/wid]
    gx = np.linspace(a - h_top / wid, b + h_top / wid, M_BOUND_GRID)
    m_tab = _IntervalMax(gx, _deriv_on(fn, e_exp, gx), (a + b) / 2)
    m_of_h = m_tab.query(a - hs / wid, b + hs / wid)

    # sups of f, f', f'' over the evaluation windows [a-h, b+h] (inside the data)
    flo, fhi = max(dom_a, a - h_top), min(dom_b, b + h_top)
    gx2 = np.linspace(flo, fhi, M_BOUND_GRID)
    f_tabs = [_IntervalMax(gx2, _deriv_on(fn, k, gx2), (a + b) / 2) for k in (0, 1, 2)]
    flo_m = np.maximum(dom_a, a - hs)
    fhi_m = np.minimum(dom_b, b + hs)
    f0, f1, f2 = (tab.query(flo_m, fhi_m) for tab in f_tabs)

    b_bias = m_of_h / math.factorial(e_exp) * c4e * hs**h_pow
    b_noise = c3 * delta / hs**n
    b_num = (s2 * f0 + 2 * hs * s1 * f1 + hs * hs * s0 * f2) * (8.0 / (12.0 * (2 * ms) ** 2))
    b_total = b_bias + b_noise + b_num
    i = int(np.argmin(b_total))

    c4_report = c4e if branch == "ultraspherical" else weighted_absolute_moment(kernel, n + q + 2)
    budget = ErrorBudget(
        c_bias=m_of_h[i] / math.factorial(e_exp) * c4e,
        c3=c3,
        c4=c4_report,
        m_bound=float(m_of_h[i]),
        delta=delta,
        h_opt=float(hs[i]),
        b_bias=float(b_bias[i]),
        b_noise=float(b_noise[i]),
        b_num=float(b_num[i]),
        b_total=float(b_total[i]),
        branch=branch,
    )
    return int(ms[i]), budget


def select_window_local(signal: SampledSignal, fn, kernel: Kernel, delta: float,
                        target: tuple[float, float] | None = None,
                        m_min: int | None = None) -> LocalWindowSelection:
    """Per-point minimizing window sizes.

    For each usable sample index the budget is minimized with the
    derivative sup bounds taken on that point's own (widened) window, so
    quiet regions get wide windows and strongly varying regions get narrow
    ones.
    """
    p, branch, e_exp, h_pow, c3, c4e, (s0, s1, s2) = _scan_constants(kernel)
    n, q = p.n, p.q
    step = signal.step
    nlast = len(signal) - 1
    if m_min is None:
        m_min = 4 * (n + q + 2)
    if target is None:
        a, b = signal.origin, signal.end
    else:
        a, b = target
    idx = np.arange(len(signal))
    xs = signal.abscissas
    caps = np.minimum(np.minimum(idx, nlast - idx), 5000)
    usable = (xs >= a) & (xs <= b) & (caps >= m_min)
    centers = idx[usable]
    if len(centers) == 0:
        raise ParameterError("no sample admits a window: signal too short for this kernel")

    wid = n + q + 3
    # fine grid at step/wid so the widened half-width h/wid advances one
    # node per unit of m; stays inside the data since h/wid < h
    fine = np.arange(nlast * wid + 1) * (step / wid) + signal.origin
    dv_e = _deriv_on(fn, e_exp, fine)
    dv_f = [_deriv_on(fn, k, xs) for k in (0, 1, 2)]

    pref_bias = c4e / math.factorial(e_exp)
    trap = 8.0 / 12.0
    m_sel = np.empty(len(centers), dtype=np.intp)
    b_parts = np.empty((3, len(centers)))
    for k, ci in enumerate(centers):
        top = int(caps[ci])
        mm = np.arange(m_min, top + 1)
        hh = mm * step
        cf = ci * wid
        lmax = np.maximum.accumulate(dv_e[cf - top: cf + 1][::-1])
        rmax = np.maximum.accumulate(dv_e[cf: cf + top + 1])
        m_loc = np.maximum(lmax[mm], rmax[mm])
        f_loc = []
        for dv in dv_f:
            lm = np.maximum.accumulate(dv[ci - top: ci + 1][::-1])
            rm = np.maximum.accumulate(dv[ci: ci + top + 1])
            f_loc.append(np.maximum(lm[mm], rm[mm]))
        bb = pref_bias * m_loc * hh**h_pow
        bn = c3 * delta / hh**n
        bu = (s2 * f_loc[0] + 2 * hh * s1 * f_loc[1] + hh * hh * s0 * f_loc[2]) * (
            trap / (2 * mm) ** 2
        )
        j = int(np.argmin(bb + bn + bu))
        m_sel[k] = mm[j]
        b_parts[:, k] = bb[j], bn[j], bu[j]

    return LocalWindowSelection(
        abscissas=xs[centers],
        centers=centers,
        window_sizes=m_sel,
        b_bias=b_parts[0],
        b_noise=b_parts[1],
        b_num=b_parts[2],
    )
