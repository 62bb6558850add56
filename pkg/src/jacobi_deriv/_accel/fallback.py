"""Pure NumPy implementations of the hot convolution kernels."""
import numpy as np


def sliding_correlate(values, weights):
    """sum_j values[i+j-m] * weights[j] for every center m <= i <= N-1-m.

    ``weights`` has odd length 2m+1; the output has length N - 2m.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return np.correlate(values, weights, mode="valid")


def windowed_dot(values, weights, centers):
    """Window products at selected centers only.

    Equivalent to ``sliding_correlate(values, weights)[centers - m]`` but
    computed without touching the skipped windows.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.intp)
    m = (len(weights) - 1) // 2
    if centers.size == 0:
        return np.empty(0)
    if np.any(centers < m) or np.any(centers > len(values) - 1 - m):
        raise IndexError("window exceeds the sample range at some center")
    windows = np.lib.stride_tricks.sliding_window_view(values, len(weights))
    return windows[centers - m] @ weights
