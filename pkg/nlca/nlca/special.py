"""
Special functions and robust statistics behind the Rician noise-level correction.

The Bessel functions wrap the exponentially scaled scipy kernels (i0e, i1e) so
that overflow can be reported instead of silently returning inf.
"""

import math

import numpy as np
from scipy import special as sp

from nlca.errors import ParameterError, SpecialFunctionRangeError

MAD_SCALE = 0.6745

# Above this SNR the closed form loses digits to cancellation between two ~theta^2 terms.
XI_ASYMPTOTIC_THETA = 1.0e3

_LOG_MAX_FLOAT = math.log(np.finfo(np.float64).max)


def _result(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


def _finite_argument(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ParameterError("Bessel argument must be finite")
    return x


def _unscale(scaled: np.ndarray, x: np.ndarray, name: str) -> np.ndarray:
    with np.errstate(divide="ignore"):
        log_magnitude = np.log(np.abs(scaled)) + np.abs(x)
    if np.any(log_magnitude > _LOG_MAX_FLOAT):
        raise SpecialFunctionRangeError(f"{name}({float(np.max(np.abs(x)))}) overflows double precision")
    return scaled * np.exp(np.abs(x))


def bessel_i0(x):
    """Modified Bessel function of the first kind, order 0."""
    x = _finite_argument(x)
    return _result(_unscale(sp.i0e(x), x, "I0"))


def bessel_i1(x):
    """Modified Bessel function of the first kind, order 1 (odd in x)."""
    x = _finite_argument(x)
    return _result(_unscale(sp.i1e(x), x, "I1"))


def xi_correction(theta):
    """
    Ratio between the magnitude-domain variance and the Gaussian-component variance
    of a Rician variable with SNR `theta`:

        xi = 2 + t^2 - pi/8 * exp(-t^2/2) * ((2 + t^2) I0(t^2/4) + t^2 I1(t^2/4))^2

    exp(-t^2/2) equals exp(-z)^2 with z = t^2/4, so it is folded into the scaled
    Bessel kernels before squaring and never overflows. Past XI_ASYMPTOTIC_THETA
    the series 1 - 1/(2 t^2) is used instead.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if not np.all(np.isfinite(theta)) or np.any(theta < 0):
        raise ParameterError("SNR theta must be finite and non-negative")
    t2 = theta * theta
    z = t2 / 4.0
    bracket = (2.0 + t2) * sp.i0e(z) + t2 * sp.i1e(z)
    direct = 2.0 + t2 - (math.pi / 8.0) * bracket * bracket
    with np.errstate(divide="ignore"):
        asymptotic = 1.0 - 0.5 / t2
    return _result(np.where(theta >= XI_ASYMPTOTIC_THETA, asymptotic, direct))


def mad_sigma(samples) -> float:
    """Gaussian scale from the median absolute value: median(|y|) / 0.6745."""
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size == 0:
        raise ParameterError("MAD estimate needs at least one sample")
    return float(np.median(np.abs(samples))) / MAD_SCALE
