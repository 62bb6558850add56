"""Backend selection for the hot convolution kernels.

The compiled extension (Cython) is preferred when it was built; the pure
NumPy fallback is used otherwise, or when JACOBI_DERIV_FORCE_FALLBACK is
set in the environment.  Both backends implement:

    sliding_correlate(values, weights) -> estimates at every valid center
    windowed_dot(values, weights, centers) -> estimates at given centers

and agree to floating-point rounding (the compiled path accumulates each
window strictly left to right).
"""
import os

from . import fallback as _fallback

BACKEND = "fallback"
_impl = _fallback

if not os.environ.get("JACOBI_DERIV_FORCE_FALLBACK"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass


def sliding_correlate(values, weights):
    return _impl.sliding_correlate(values, weights)


def windowed_dot(values, weights, centers):
    return _impl.windowed_dot(values, weights, centers)


def get_backend(name=None):
    """Return (label, module) for ``name`` in {None, 'compiled', 'fallback'}.

    ``None`` gives the active backend.  Requesting 'compiled' when the
    extension is unavailable raises ImportError.
    """
    if name in (None, BACKEND):
        return BACKEND, _impl
    if name == "fallback":
        return "fallback", _fallback
    if name == "compiled":
        from . import _core  # raises ImportError if not built

        return "compiled", _core
    raise ValueError(f"unknown backend {name!r}")
