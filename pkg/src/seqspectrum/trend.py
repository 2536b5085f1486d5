"""Trend fitting for norm sequences.

A single log-log slope (ln of the norm against ln of the index) feeds
both the growth classifier and the tail statistics.  Classification
thresholds are heuristics: |slope| below 0.05 reads as bounded, a slope
above 3 on the fitted window can no longer be explained by a polynomial
of the dimensions this package handles and is flagged as exponential.
"""

import numpy as np

GROWTH_DECAYING = "decaying"
GROWTH_BOUNDED = "bounded"
GROWTH_POLYNOMIAL = "polynomial-suspect"
GROWTH_EXPONENTIAL = "exponential-suspect"

_SLOPE_FLAT = 0.05
_SLOPE_EXPONENTIAL = 3.0


def log_log_slope(indices: np.ndarray, values: np.ndarray) -> float:
    """Least-squares slope of ln(values) vs ln(indices).

    Zero values cannot enter the fit; they are masked out.  With fewer
    than two usable points the slope is reported as 0.0.
    """
    idx = np.asarray(indices, dtype=float)
    val = np.asarray(values, dtype=float)
    mask = (val > 0.0) & (idx > 0.0)
    if int(mask.sum()) < 2:
        return 0.0
    x = np.log(idx[mask])
    y = np.log(val[mask])
    x = x - x.mean()
    denom = float(x @ x)
    if denom == 0.0:
        return 0.0
    return float(x @ (y - y.mean()) / denom)


def classify_from_logs(log_norms: np.ndarray, window_start: int | None = None) -> str:
    """Classify growth from ln-norm samples over a trailing window.

    ``log_norms[k]`` is ln of the norm at index k+1 (1-based indices keep
    the log-log fit well defined); -inf marks exactly-zero norms.  The
    window defaults to the last half of the range.
    """
    logs = np.asarray(log_norms, dtype=float)
    n = logs.shape[0]
    if window_start is None:
        window_start = n // 2
    window = logs[max(0, window_start - 1):]
    indices = np.arange(max(0, window_start - 1) + 1, n + 1, dtype=float)
    if window.size == 0:
        return GROWTH_BOUNDED
    mask = np.isfinite(window)
    if not mask.any():
        return GROWTH_DECAYING
    if int(mask.sum()) < 2:
        return GROWTH_BOUNDED
    x = np.log(indices[mask])
    y = window[mask]
    x = x - x.mean()
    denom = float(x @ x)
    slope = 0.0 if denom == 0.0 else float(x @ (y - y.mean()) / denom)
    if slope >= _SLOPE_EXPONENTIAL:
        return GROWTH_EXPONENTIAL
    if slope >= _SLOPE_FLAT:
        return GROWTH_POLYNOMIAL
    if slope > -_SLOPE_FLAT:
        return GROWTH_BOUNDED
    return GROWTH_DECAYING


def classify_growth(norms: np.ndarray, window_start: int | None = None) -> str:
    """Classify a norm sequence; see :func:`classify_from_logs`."""
    norms = np.asarray(norms, dtype=float)
    with np.errstate(divide="ignore"):
        logs = np.where(norms > 0.0, np.log(np.maximum(norms, 1e-300)), -np.inf)
    return classify_from_logs(logs, window_start)
