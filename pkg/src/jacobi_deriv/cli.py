"""Command-line front end.

Subcommands: estimate, kernel dump, table, slope, sweep, validate.
Exit codes: 0 success, 2 input format error, 3 parameter error,
4 certificate/validation failure.  Setting JACOBI_DERIV_OUTDIR redirects
relative output paths into that directory.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import CertificateError, FormatError, JacobiDerivError, ParameterError
from .error_model import (
    ErrorBudget,
    bias_constant,
    bound_bias,
    bound_noise,
    noise_amplification,
    optimal_h,
    select_window_global,
    select_window_local,
    weighted_absolute_moment,
)
from .estimator import estimate_sampled, estimate_sampled_varying
from .experiments import run_slope, run_sweep, run_table, validate_certificates
from .functions import NoiseSpec, get_test_function, synthesize
from .io import load_csv, write_estimates_csv
from .kernels import EstimatorParams, affine_kernel, minimal_kernel, ultraspherical_kernel


def _outpath(path: str | None) -> str | None:
    if path is None or path == "-" or os.path.isabs(path):
        return path
    outdir = os.environ.get("JACOBI_DERIV_OUTDIR")
    return os.path.join(outdir, path) if outdir else path


def _emit(text: str, path: str | None) -> None:
    path = _outpath(path)
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _build_kernel(n: int, alpha: float, beta: float, q: int):
    params = EstimatorParams(n, alpha, beta, q)
    if q == 0:
        return minimal_kernel(n, alpha, beta)
    if params.is_ultraspherical and q % 2 == 0:
        return ultraspherical_kernel(n, alpha, q)
    return affine_kernel(params)


def _cmd_estimate(args) -> int:
    if (args.input is None) == (args.fn is None):
        raise ParameterError("exactly one of --input or --fn is required")
    sigma = args.sigma if args.sigma is not None else (
        args.delta / 3.0 if args.delta is not None else 0.0
    )
    delta = 3.0 * sigma
    fn = get_test_function(args.fn) if args.fn else None
    if fn is not None:
        signal = synthesize(fn, tuple(args.range), args.step, NoiseSpec(sigma, args.seed))
    else:
        signal = load_csv(args.input)
    kernel = _build_kernel(args.n, args.alpha, args.beta if args.beta is not None else args.alpha, args.q)

    point_budgets = None
    budget = None
    if args.local_window:
        if fn is None:
            raise ParameterError("--local-window needs an analytic test function (--fn)")
        sel = select_window_local(signal, fn, kernel, delta)
        series = estimate_sampled_varying(signal, kernel, sel.centers, sel.window_sizes)
        point_budgets = {"b_bias": sel.b_bias, "b_noise": sel.b_noise,
                         "b_num": sel.b_num, "b_total": sel.b_total}
    else:
        if args.auto_window:
            if fn is not None:
                m, budget = select_window_global(signal, fn, kernel, delta)
            elif args.m_bound is not None:
                # no function knowledge: closed-form minimizer from the
                # user-supplied derivative bound (trapezoid term omitted)
                m = _auto_window_from_bound(signal, kernel, delta, args.m_bound)
                budget = _budget_from_bound(kernel, delta, args.m_bound, m * signal.step)
            else:
                raise ParameterError("--auto-window with --input needs --m-bound")
        else:
            if args.m is None:
                raise ParameterError("one of --m, --auto-window or --local-window is required")
            m = args.m
            if fn is not None:
                _, budget = select_window_global(signal, fn, kernel, delta, m_min=m, m_max=m)
            elif args.m_bound is not None:
                budget = _budget_from_bound(kernel, delta, args.m_bound, m * signal.step)
        series = estimate_sampled(signal, kernel, m, budget)

    out = _outpath(args.output)
    write_estimates_csv(out, series, budget=budget, point_budgets=point_budgets)
    if args.budget_out and budget is not None:
        _emit(budget.to_json(indent=2), args.budget_out)
    print(f"wrote {len(series.values)} estimates to {out}")
    return 0


def _auto_window_from_bound(signal, kernel, delta, m_bound) -> int:
    p = kernel.params
    branch = "ultraspherical" if p.is_ultraspherical and p.q % 2 == 0 else "general"
    c_bias = bias_constant(kernel, m_bound)
    c3 = noise_amplification(kernel)
    h = optimal_h(c_bias, c3, delta, p.n, p.q, branch).h
    m_min = 4 * (p.n + p.q + 2)
    m_max = min(5000, (len(signal) - 1) // 2)
    if m_max < m_min:
        raise ParameterError(f"signal too short: window scan needs m up to {m_min}")
    if h == 0.0:
        return m_min
    return int(np.clip(round(h / signal.step), m_min, m_max))


def _budget_from_bound(kernel, delta, m_bound, h) -> ErrorBudget:
    p = kernel.params
    branch = "ultraspherical" if p.is_ultraspherical and p.q % 2 == 0 else "general"
    c_bias = bias_constant(kernel, m_bound)
    c3 = noise_amplification(kernel)
    b_b = bound_bias(c_bias, h, p.q, branch)
    b_n = bound_noise(c3, delta, h, p.n)
    return ErrorBudget(c_bias, c3, weighted_absolute_moment(kernel, p.n + p.q + 2),
                       m_bound, delta, h, b_b, b_n, 0.0, b_b + b_n, branch)


def _cmd_kernel_dump(args) -> int:
    kernel = _build_kernel(args.n, args.alpha, args.beta if args.beta is not None else args.alpha, args.q)
    _emit(kernel.to_json(indent=2), args.output)
    return 0


def _cmd_table(args) -> int:
    report = run_table(args.example, args.delta, args.step, range(args.seeds), ns=tuple(args.ns))
    for row in report["rows"]:
        ref = f"{row['reference_error']:.3e}" if row["reference_error"] else "n/a"
        print(f"n={row['n']}: m={row['m']} (ref {row['reference_m']}), "
              f"median max-error {row['median']:.3e} (ref {ref})")
    if args.output:
        _emit(json.dumps(report, indent=2), args.output)
    return 0


def _cmd_slope(args) -> int:
    fn = get_test_function(args.fn)
    hs = np.geomspace(args.h_min, args.h_max, args.count)
    result = run_slope(fn, args.n, args.alpha,
                       args.beta if args.beta is not None else args.alpha, args.q, hs)
    note = " (floor-limited)" if result["floor_limited"] else ""
    print(f"fitted order: {result['slope']:.3f}{note}")
    if args.output:
        _emit(json.dumps(result, indent=2), args.output)
    return 0


def _cmd_sweep(args) -> int:
    result = run_sweep(args.n_list, args.q_list, args.alpha_list)
    path = _outpath(args.output)
    rows = result["rows"]
    if path and path != "-":
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["n", "q", "alpha", "c3", "c4"])
            writer.writeheader()
            writer.writerows(rows)
    else:
        print("n,q,alpha,c3,c4")
        for r in rows:
            print(f"{r['n']},{r['q']},{r['alpha']},{r['c3']!r},{r['c4']!r}")
    print(f"c3 nondecreasing in q: {result['c3_nondecreasing_in_q']}; "
          f"c4 nonincreasing in alpha: {result['c4_nonincreasing_in_alpha']}",
          file=sys.stderr)
    if not (result["c3_nondecreasing_in_q"] and result["c4_nonincreasing_in_alpha"]):
        raise CertificateError("constant sweep violated a monotonicity assertion")
    return 0


def _cmd_validate(args) -> int:
    result = validate_certificates()
    print(f"checked {result['checked']} kernels, {len(result['failures'])} failure(s)")
    if result["failures"]:
        for failure in result["failures"]:
            print(f"  {failure}", file=sys.stderr)
        raise CertificateError("kernel validation failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobi-deriv",
        description="Derivative estimation from noisy samples by Jacobi-kernel convolution",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p, need_n=True):
        p.add_argument("--n", type=int, required=need_n, help="derivative order")
        p.add_argument("--alpha", type=float, required=True, help="first weight exponent (> -1)")
        p.add_argument("--beta", type=float, default=None, help="second weight exponent (default: alpha)")
        p.add_argument("--q", type=int, default=0, help="truncation order (default 0)")

    est = sub.add_parser("estimate", help="estimate derivatives of a signal")
    est.add_argument("--input", help="two-column x,y CSV with a uniform grid")
    est.add_argument("--fn", choices=("f1", "f2", "f3"), help="built-in test function")
    est.add_argument("--range", type=float, nargs=2, default=(-2.0, 2.0), metavar=("A", "B"))
    est.add_argument("--step", type=float, default=1e-3, help="sampling period for --fn")
    add_params(est)
    win = est.add_mutually_exclusive_group()
    win.add_argument("--m", type=int, help="window half-length in samples (h = m*step)")
    win.add_argument("--auto-window", action="store_true", help="minimize the error budget globally")
    win.add_argument("--local-window", action="store_true", help="minimize the budget per point")
    noise = est.add_mutually_exclusive_group()
    noise.add_argument("--sigma", type=float, help="Gaussian noise std dev")
    noise.add_argument("--delta", type=float, help="noise level (= 3 sigma)")
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--m-bound", type=float, help="derivative sup bound for CSV input budgets")
    est.add_argument("--output", required=True, help="estimates CSV path")
    est.add_argument("--budget-out", help="write the budget JSON here")
    est.set_defaults(func=_cmd_estimate)

    ker = sub.add_parser("kernel", help="kernel inspection")
    ker_sub = ker.add_subparsers(dest="kernel_command", required=True)
    dump = ker_sub.add_parser("dump", help="serialize a kernel as JSON")
    add_params(dump)
    dump.add_argument("--output", default="-", help="path or - for stdout")
    dump.set_defaults(func=_cmd_kernel_dump)

    tab = sub.add_parser("table", help="reproduce a benchmark error table")
    tab.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    tab.add_argument("--delta", type=float, default=0.15)
    tab.add_argument("--step", type=float, default=1e-3)
    tab.add_argument("--seeds", type=int, default=10, help="number of noise seeds")
    tab.add_argument("--ns", type=int, nargs="+", default=(1, 2), help="derivative orders")
    tab.add_argument("--output", help="report JSON path")
    tab.set_defaults(func=_cmd_table)

    slp = sub.add_parser("slope", help="fit the noise-free convergence order")
    slp.add_argument("--fn", choices=("f1", "f2", "f3"), required=True)
    add_params(slp)
    slp.add_argument("--h-min", type=float, default=0.05)
    slp.add_argument("--h-max", type=float, default=0.4)
    slp.add_argument("--count", type=int, default=7, help="number of h values")
    slp.add_argument("--output", help="result JSON path")
    slp.set_defaults(func=_cmd_slope)

    swp = sub.add_parser("sweep", help="tabulate the error constants c3, c4")
    swp.add_argument("--n-list", type=int, nargs="+", required=True)
    swp.add_argument("--q-list", type=int, nargs="+", required=True)
    swp.add_argument("--alpha-list", type=float, nargs="+", required=True)
    swp.add_argument("--output", help="CSV path (default: stdout)")
    swp.set_defaults(func=_cmd_sweep)

    val = sub.add_parser("validate", help="run the kernel certificate suite")
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except JacobiDerivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
