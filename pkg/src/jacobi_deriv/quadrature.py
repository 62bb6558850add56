"""Quadrature rules on [-1, 1] used by kernel construction and estimation.

Two rules cover all needs:

* Gauss-Jacobi nodes/weights (Golub-Welsch) for integrals of the form
  smooth * (1-t)^a (1+t)^b.  Exact for polynomial integrands, valid for
  every a, b > -1 including the singular range (-1, 0), since the nodes
  are interior.
* Composite Simpson for plain integrands that are merely continuous
  (absolute values of kernels).  Node counts follow the conventions used
  throughout the package: 200001 for constants, 20001 for estimation.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .jacobi import beta_function

CONSTANT_NODES = 200001   # absolute-integral constants
ESTIMATE_NODES = 20001    # analytic derivative estimates


@lru_cache(maxsize=16)
def simpson_rule(nnodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Equispaced nodes and composite-Simpson weights on [-1, 1]."""
    if nnodes < 3 or nnodes % 2 == 0:
        raise ValueError(f"Simpson rule needs an odd node count >= 3, got {nnodes}")
    t = np.linspace(-1.0, 1.0, nnodes)
    w = np.ones(nnodes)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (2.0 / (nnodes - 1)) / 3.0
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@lru_cache(maxsize=4096)
def gauss_jacobi(npts: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """``npts``-point Gauss-Jacobi rule for weight (1-t)^a (1+t)^b.

    Builds the symmetric tridiagonal recurrence matrix and diagonalizes it;
    the first recurrence coefficients use their dedicated closed forms so
    the a+b = -1 degeneracy of the generic formula never appears.
    """
    if npts < 1:
        raise ValueError("gauss_jacobi needs npts >= 1")
    ab = a + b
    diag = np.empty(npts)
    diag[0] = (b - a) / (ab + 2)
    j = np.arange(1, npts, dtype=float)
    s = 2 * j + ab
    diag[1:] = (b * b - a * a) / (s * (s + 2))
    off = np.empty(max(npts - 1, 0))
    if npts > 1:
        off[0] = np.sqrt(4 * (a + 1) * (b + 1) / ((ab + 2) ** 2 * (ab + 3)))
    if npts > 2:
        j2 = np.arange(2, npts, dtype=float)
        s2 = 2 * j2 + ab
        off[1:] = np.sqrt(
            4 * j2 * (j2 + a) * (j2 + b) * (j2 + ab) / (s2 * s2 * (s2 + 1) * (s2 - 1))
        )
    mat = np.diag(diag)
    if npts > 1:
        mat += np.diag(off, 1) + np.diag(off, -1)
    nodes, vecs = np.linalg.eigh(mat)
    mu0 = 2.0 ** (ab + 1) * beta_function(a + 1, b + 1)
    weights = mu0 * vecs[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights
