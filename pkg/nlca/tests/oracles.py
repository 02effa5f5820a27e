"""Brute-force reference implementations used as test oracles."""

import itertools
import math

import numpy as np

from nlca.volume import Volume3D, mirror_index, sample_mirrored


def windowed_moments(volume: Volume3D, radius: int):
    """Mean and second moment over the (2r+1)^3 mirrored window, one voxel at a time."""
    nx, ny, nz = volume.dims
    mean = np.zeros(volume.dims)
    sqmean = np.zeros(volume.dims)
    span = range(-radius, radius + 1)
    for i, j, k in itertools.product(range(nx), range(ny), range(nz)):
        samples = [sample_mirrored(volume, i + a, j + b, k + c) for a, b, c in itertools.product(span, span, span)]
        samples = np.asarray(samples, dtype=np.float64)
        mean[i, j, k] = samples.mean()
        sqmean[i, j, k] = (samples * samples).mean()
    return mean, sqmean


def naive_nlca(tables, params):
    """
    Per-voxel loop over the search window: accepts candidates by the moment-ratio
    test, sums their patch second moments in offset order, applies the CA estimator.
    """
    nx, ny, nz = tables.mean_field.shape
    mean_field, sq_field = tables.mean_field.tolist(), tables.sqmean_field.tolist()
    r = params.search_radius
    offsets = list(itertools.product(range(-r, r + 1), repeat=3))
    # mirrored coordinate of (index + offset), looked up at [index + offset + r]
    mx, my, mz = ([mirror_index(p, n) for p in range(-r, n + r)] for n in (nx, ny, nz))
    out = np.zeros((nx, ny, nz), dtype=np.float32)
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                center_mean, center_sq = mean_field[i][j][k], sq_field[i][j][k]
                total = 0.0
                count = 0
                for dx, dy, dz in offsets:
                    a, b, c = mx[i + dx + r], my[j + dy + r], mz[k + dz + r]
                    candidate_mean, candidate_sq = mean_field[a][b][c], sq_field[a][b][c]
                    mean_ok = params.c1 * center_mean <= candidate_mean <= center_mean / params.c1
                    sq_ok = params.c2 * center_sq <= candidate_sq <= center_sq / params.c2
                    if mean_ok and sq_ok:
                        total += candidate_sq
                        count += 1
                selected = total / count
                out[i, j, k] = np.float32(math.sqrt(max(selected - 2.0 * params.sigma_n ** 2, 0.0)))
    return out


def series_i0(x: float, terms: int = 60) -> float:
    return sum((x / 2.0) ** (2 * k) / math.factorial(k) ** 2 for k in range(terms))


def series_i1(x: float, terms: int = 60) -> float:
    return sum((x / 2.0) ** (2 * k + 1) / (math.factorial(k) * math.factorial(k + 1)) for k in range(terms))


def recomputing_nlca(volume: Volume3D, params) -> np.ndarray:
    """
    NLCA without moment tables: for every search offset, the patch moments of the
    candidate are gathered again from the volume, voxel by patch voxel.
    """
    data = volume.data.astype(np.float64)
    p, r = params.patch_radius, params.search_radius
    grids = [np.arange(n) for n in volume.dims]
    patch = list(itertools.product(range(-p, p + 1), repeat=3))
    size = float(len(patch))

    def patch_moments(centres):
        mean = np.zeros(volume.dims)
        sqmean = np.zeros(volume.dims)
        for offset in patch:
            index = np.ix_(*[mirror_index(c + q, n) for c, q, n in zip(centres, offset, volume.dims)])
            values = data[index]
            mean += values
            sqmean += values * values
        return np.maximum(mean / size, 0.0), np.maximum(sqmean / size, 0.0)

    center_mean, center_sq = patch_moments(grids)
    total = np.zeros(volume.dims)
    count = np.zeros(volume.dims, dtype=np.int64)
    for offset in itertools.product(range(-r, r + 1), repeat=3):
        centres = [mirror_index(g + d, n) for g, d, n in zip(grids, offset, volume.dims)]
        candidate_mean, candidate_sq = patch_moments(centres)
        accepted = ((params.c1 * center_mean <= candidate_mean) & (candidate_mean <= center_mean / params.c1)
                    & (params.c2 * center_sq <= candidate_sq) & (candidate_sq <= center_sq / params.c2))
        total += np.where(accepted, candidate_sq, 0.0)
        count += accepted
    return np.sqrt(np.maximum(total / count - 2.0 * params.sigma_n ** 2, 0.0)).astype(np.float32)
