"""
Bundled ground-truth volumes for validation runs when no BrainWeb volume is at hand.
"""

from typing import Dict, Sequence

import numpy as np

from nlca.errors import ParameterError
from nlca.volume import Volume3D

# 8-bit tissue intensities roughly following the three BrainWeb contrasts.
TISSUE_INTENSITIES: Dict[str, Dict[str, float]] = {
    "T1w": {"background": 0, "scalp": 110, "csf": 40, "gray": 125, "white": 185, "detail": 235},
    "T2w": {"background": 0, "scalp": 70, "csf": 230, "gray": 135, "white": 85, "detail": 200},
    "PDw": {"background": 0, "scalp": 120, "csf": 205, "gray": 170, "white": 140, "detail": 225},
}


def two_region_phantom(dims: Sequence[int] = (16, 16, 16), low: float = 10.0, high: float = 100.0,
                       axis: int = 0) -> Volume3D:
    """`low` below the mid-plane n // 2 along `axis`, `high` from it on."""
    data = np.full(tuple(dims), high, dtype=np.float32)
    index = [slice(None)] * 3
    index[axis] = slice(0, dims[axis] // 2)
    data[tuple(index)] = low
    return Volume3D(data)


def boundary_slab_mask(dims: Sequence[int], axis: int = 0, thickness: int = 2) -> np.ndarray:
    """Planes straddling the two-region boundary, `thickness` voxels in total."""
    boundary = dims[axis] // 2
    first = max(boundary - thickness // 2, 0)
    mask = np.zeros(tuple(dims), dtype=bool)
    index = [slice(None)] * 3
    index[axis] = slice(first, min(first + thickness, dims[axis]))
    mask[tuple(index)] = True
    return mask


def _ellipsoid(grid, center, radii) -> np.ndarray:
    x, y, z = grid
    return (((x - center[0]) / radii[0]) ** 2 + ((y - center[1]) / radii[1]) ** 2
            + ((z - center[2]) / radii[2]) ** 2) <= 1.0


def brain_phantom(dims: Sequence[int] = (64, 64, 64), modality: str = "T1w", seed: int = 0) -> Volume3D:
    """
    Piecewise-constant head: scalp shell, CSF rim, gray and white matter, two
    ventricles and a handful of small bright spheres standing in for vessels.
    Intensities stay within the 8-bit range.
    """
    if modality not in TISSUE_INTENSITIES:
        raise ParameterError(f"Unknown modality {modality!r}; expected one of {', '.join(TISSUE_INTENSITIES)}")
    levels = TISSUE_INTENSITIES[modality]
    dims = tuple(int(d) for d in dims)
    grid = np.meshgrid(*[np.linspace(-1.0, 1.0, n) for n in dims], indexing="ij")

    data = np.full(dims, levels["background"], dtype=np.float32)
    data[_ellipsoid(grid, (0, 0, 0), (0.92, 0.95, 0.88))] = levels["scalp"]
    data[_ellipsoid(grid, (0, 0, 0), (0.80, 0.84, 0.76))] = levels["csf"]
    data[_ellipsoid(grid, (0, 0, 0), (0.74, 0.78, 0.70))] = levels["gray"]
    data[_ellipsoid(grid, (0, 0.02, 0), (0.56, 0.60, 0.50))] = levels["white"]
    for side in (-1, 1):
        data[_ellipsoid(grid, (0.14 * side, 0.05, 0.05), (0.08, 0.25, 0.12))] = levels["csf"]

    rng = np.random.default_rng(seed)
    voxel = 2.0 / max(max(dims) - 1, 1)
    for center in rng.uniform(-0.4, 0.4, size=(6, 3)):
        data[_ellipsoid(grid, center, (2.0 * voxel,) * 3)] = levels["detail"]
    return Volume3D(data)


PHANTOMS = {
    "brain": brain_phantom,
    "two-region": two_region_phantom,
}
