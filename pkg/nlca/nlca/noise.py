"""
Rician noise synthesis and automatic estimation of the Gaussian noise level.
"""

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import pywt
from loguru import logger

from nlca.errors import ParameterError
from nlca.special import mad_sigma, xi_correction
from nlca.volume import Volume3D

# Voxels per random stream. Streams are keyed by chunk index, never by worker.
NOISE_CHUNK = 1 << 16

EIGHT_BIT_MAX = 255.0


@dataclasses.dataclass(frozen=True)
class NoiseModel:
    sigma_n: float
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.sigma_n) or self.sigma_n < 0:
            raise ParameterError(f"Noise sigma must be non-negative, got {self.sigma_n}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError(f"Seed must fit in 64 unsigned bits, got {self.seed}")


@dataclasses.dataclass(frozen=True)
class NoiseEstimate:
    sigma_hat: float
    theta_hat: float
    sigma_n_hat: float
    iterations: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class HHHField:
    dims: tuple
    data: np.ndarray


def percent_to_sigma(percent: float, max_level: float = EIGHT_BIT_MAX) -> float:
    """'p% noise' is sigma_n = p/100 of the maximum gray level (255 for 8-bit data)."""
    if not 0 < percent < 100:
        raise ParameterError(f"Noise percentage must lie in (0, 100), got {percent}")
    return percent / 100.0 * max_level


# <editor-fold desc="Synthesis">

def _chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _corrupt_chunk(signal: np.ndarray, out: np.ndarray, model: NoiseModel, chunk: int):
    start = chunk * NOISE_CHUNK
    stop = min(start + NOISE_CHUNK, signal.size)
    # Box-Muller on one uniform pair per voxel: n1 from the cosine branch, n2 from the sine branch.
    uniforms = _chunk_generator(model.seed, chunk).random((stop - start, 2))
    radius = model.sigma_n * np.sqrt(-2.0 * np.log1p(-uniforms[:, 0]))
    angle = 2.0 * math.pi * uniforms[:, 1]
    n1 = radius * np.cos(angle)
    n2 = radius * np.sin(angle)
    a = signal[start:stop].astype(np.float64)
    out[start:stop] = np.sqrt((a + n1) ** 2 + n2 ** 2)


def add_rician(volume: Volume3D, model: NoiseModel, workers: int = 1) -> Volume3D:
    """M = sqrt((A + n1)^2 + n2^2) per voxel, n1 and n2 ~ N(0, sigma_n^2)."""
    volume.require_magnitude()
    if model.sigma_n == 0:
        return volume.with_data(volume.data)
    signal = volume.to_linear()
    out = np.empty(signal.size, dtype=np.float64)
    chunks = range(math.ceil(signal.size / NOISE_CHUNK))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        list(pool.map(lambda c: _corrupt_chunk(signal, out, model, c), chunks))
    logger.debug(f"Added Rician noise sigma={model.sigma_n:.4g} seed={model.seed} to {volume.dims} volume")
    return Volume3D.from_linear(out.astype(np.float32), volume.dims, volume.spacing)

# </editor-fold>


# <editor-fold desc="Estimation">

def _even_extended(data: np.ndarray) -> np.ndarray:
    """Appends the mirrored sample n-2 to every odd-length axis."""
    for axis, n in enumerate(data.shape):
        if n % 2:
            tail = np.take(data, [n - 2], axis=axis)
            data = np.concatenate([data, tail], axis=axis)
    return data


def _haar_subbands(volume: Volume3D) -> dict:
    if min(volume.dims) < 2:
        raise ParameterError(f"Wavelet analysis needs at least 2 voxels per axis, got {volume.dims}")
    data = _even_extended(volume.data.astype(np.float64))
    return pywt.dwtn(data, "haar")


def dwt_hhh(volume: Volume3D) -> HHHField:
    """Detail subband that is high-pass along x, y and z of a single-level orthonormal Haar analysis."""
    hhh = _haar_subbands(volume)["ddd"]
    return HHHField(dims=tuple(hhh.shape), data=hhh)


def estimate_noise(volume: Volume3D, foreground_only: bool = True, max_iterations: int = 100,
                   tolerance: float = 1e-6) -> NoiseEstimate:
    """
    Robust Rician noise estimate from the HHH subband.

    sigma_hat is the MAD of the HHH coefficients. With `foreground_only`, only
    coefficients whose 2x2x2 block mean exceeds the global mean take part, so the
    Rayleigh-distributed air background does not drag the estimate down. The
    Gaussian-component sigma then solves sigma_n = sqrt(sigma_hat^2 / xi(S / sigma_n))
    by fixed-point iteration, S being the mean intensity of foreground voxels.
    """
    volume.require_magnitude()
    subbands = _haar_subbands(volume)
    coefficients = subbands["ddd"]
    threshold = float(volume.data.mean(dtype=np.float64))
    if foreground_only:
        block_means = subbands["aaa"] / (2.0 * math.sqrt(2.0))
        selected = coefficients[block_means > threshold]
        if selected.size:
            coefficients = selected
    sigma_hat = mad_sigma(coefficients)
    if sigma_hat == 0:
        return NoiseEstimate(sigma_hat=0.0, theta_hat=0.0, sigma_n_hat=0.0, iterations=0)

    foreground = volume.data[volume.data > threshold]
    signal = float(foreground.mean(dtype=np.float64)) if foreground.size else threshold
    sigma_n = sigma_hat
    theta = signal / sigma_n
    iterations = 0
    converged = False
    while iterations < max_iterations:
        theta = signal / sigma_n
        updated = math.sqrt(sigma_hat ** 2 / xi_correction(theta))
        iterations += 1
        change = abs(updated - sigma_n) / sigma_n
        sigma_n = updated
        if change < tolerance:
            converged = True
            break
    # report the ratio at the returned sigma, not the one used for the last update
    theta = signal / sigma_n
    if not converged:
        logger.warning(f"Noise estimate did not converge in {max_iterations} iterations")
    logger.debug(f"Noise estimate sigma_hat={sigma_hat:.4g} sigma_n_hat={sigma_n:.4g} "
                 f"theta={theta:.4g} after {iterations} iterations")
    return NoiseEstimate(sigma_hat=sigma_hat, theta_hat=theta, sigma_n_hat=sigma_n, iterations=iterations)

# </editor-fold>
