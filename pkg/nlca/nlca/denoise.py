"""
Conventional Approach (CA) and non-local CA (NLCA) estimators for Rician data.

Both estimate the noise-free amplitude from a second moment,

    A = sqrt(max(<M^2> - 2 sigma_n^2, 0)),

CA over the local patch, NLCA over all patches in the search window whose
first and second moments are close to the centre patch.
"""

import dataclasses
import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Tuple

import numpy as np
from loguru import logger
from scipy import ndimage

from nlca.errors import ParameterError
from nlca.volume import Volume3D, mirror_pad, require_same_dims


@dataclasses.dataclass(frozen=True)
class DenoiseParams:
    sigma_n: float = 0.0
    patch_radius: int = 1
    search_radius: int = 5
    c1: float = 0.9
    c2: float = 0.5

    def __post_init__(self):
        if not math.isfinite(self.sigma_n) or self.sigma_n < 0:
            raise ParameterError(f"Noise sigma must be non-negative, got {self.sigma_n}")
        if self.patch_radius < 0 or self.search_radius < 0:
            raise ParameterError("Patch and search radii must be non-negative")
        for name in ("c1", "c2"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ParameterError(f"{name} must lie in (0, 1], got {value}")

    def replace(self, **changes) -> "DenoiseParams":
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class MomentTables:
    mean_field: np.ndarray
    sqmean_field: np.ndarray
    patch_radius: int

    def at(self, i: int, j: int, k: int) -> Tuple[float, float]:
        return float(self.mean_field[i, j, k]), float(self.sqmean_field[i, j, k])


def build_moment_tables(volume: Volume3D, patch_radius: int) -> MomentTables:
    """Patch mean and second moment at every voxel via separable running sums in double precision."""
    if patch_radius < 0:
        raise ParameterError("Patch radius must be non-negative")
    size = 2 * patch_radius + 1
    values = volume.data.astype(np.float64)
    # scipy's "mirror" extension is the same reflection as sample_mirrored.
    mean_field = ndimage.uniform_filter(values, size=size, mode="mirror", output=np.float64)
    sqmean_field = ndimage.uniform_filter(values * values, size=size, mode="mirror", output=np.float64)
    # Running sums leave ~-1e-12 residues in zero regions next to tissue; a negative
    # centre would fail its own similarity test.
    np.maximum(mean_field, 0.0, out=mean_field)
    np.maximum(sqmean_field, 0.0, out=sqmean_field)
    return MomentTables(mean_field=mean_field, sqmean_field=sqmean_field, patch_radius=patch_radius)


def signal_from_second_moment(second_moment, sigma_n: float) -> np.ndarray:
    return np.sqrt(np.maximum(second_moment - 2.0 * sigma_n ** 2, 0.0)).astype(np.float32)


def ca_filter(volume: Volume3D, params: DenoiseParams, workers: int = 1) -> Volume3D:
    volume.require_magnitude()
    tables = build_moment_tables(volume, params.patch_radius)
    return volume.with_data(signal_from_second_moment(tables.sqmean_field, params.sigma_n))


# <editor-fold desc="Similarity">

def _within(center, candidate, bound: float):
    # c * center <= candidate <= center / c; a zero centre only admits a zero candidate.
    return (bound * center <= candidate) & (candidate <= center / bound)


def similarity_accept(center_moments: Tuple[float, float], candidate_moments: Tuple[float, float],
                      c1: float, c2: float) -> bool:
    (center_mean, center_sq), (candidate_mean, candidate_sq) = center_moments, candidate_moments
    return bool(_within(center_mean, candidate_mean, c1) and _within(center_sq, candidate_sq, c2))

# </editor-fold>


def search_offsets(search_radius: int):
    """Candidate offsets in the fixed accumulation order (dx outermost, dz innermost)."""
    span = range(-search_radius, search_radius + 1)
    return itertools.product(span, span, span)


def _nlca_slab(tables: MomentTables, padded: Tuple[np.ndarray, np.ndarray], params: DenoiseParams,
               x0: int, x1: int) -> np.ndarray:
    mean_pad, sq_pad = padded
    r = params.search_radius
    _, ny, nz = tables.mean_field.shape
    center_mean = tables.mean_field[x0:x1]
    center_sq = tables.sqmean_field[x0:x1]
    total = np.zeros(center_mean.shape, dtype=np.float64)
    count = np.zeros(center_mean.shape, dtype=np.int64)
    for dx, dy, dz in search_offsets(r):
        window = (slice(r + dx + x0, r + dx + x1), slice(r + dy, r + dy + ny), slice(r + dz, r + dz + nz))
        candidate_sq = sq_pad[window]
        accepted = _within(center_mean, mean_pad[window], params.c1) & _within(center_sq, candidate_sq, params.c2)
        total += np.where(accepted, candidate_sq, 0.0)
        count += accepted
    return signal_from_second_moment(total / count, params.sigma_n)


def _slabs(n: int, workers: int):
    bounds = np.linspace(0, n, num=min(n, max(1, workers)) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def nlca_filter(volume: Volume3D, params: DenoiseParams, workers: int = 1) -> Volume3D:
    """
    For each voxel, averages the patch second moments of every candidate in the
    (2R+1)^3 search window that passes similarity_accept against the centre patch,
    then applies the CA estimator to that average. The centre always passes.
    """
    volume.require_magnitude()
    start = time.perf_counter()
    tables = build_moment_tables(volume, params.patch_radius)
    padded = (mirror_pad(tables.mean_field, params.search_radius),
              mirror_pad(tables.sqmean_field, params.search_radius))
    out = np.empty(volume.dims, dtype=np.float32)

    def run(slab):
        x0, x1 = slab
        out[x0:x1] = _nlca_slab(tables, padded, params, x0, x1)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        list(pool.map(run, _slabs(volume.dims[0], workers)))
    logger.debug(f"NLCA on {volume.dims} (patch r={params.patch_radius}, search r={params.search_radius}) "
                 f"took {time.perf_counter() - start:.2f}s with {workers} worker(s)")
    return volume.with_data(out)


def residual(noisy: Volume3D, denoised: Volume3D) -> Volume3D:
    require_same_dims(noisy, denoised)
    return noisy.with_data(noisy.data.astype(np.float64) - denoised.data.astype(np.float64))


FILTERS: Dict[str, Callable[..., Volume3D]] = {
    "ca": ca_filter,
    "nlca": nlca_filter,
}


def get_filter(name: str) -> Callable[..., Volume3D]:
    try:
        return FILTERS[name]
    except KeyError:
        raise ParameterError(f"Unknown filter {name!r}; supported filters: {', '.join(sorted(FILTERS))}") from None
