"""
RMSE and windowed 3D SSIM between a ground-truth and an estimated volume.
"""

import dataclasses
import math
from typing import Any, Dict, Optional

import numpy as np
from scipy import ndimage

from nlca.errors import ParameterError
from nlca.volume import Volume3D, require_same_dims


@dataclasses.dataclass(frozen=True)
class SsimParams:
    window_radius: int = 3
    c1_const: float = 6.5025
    c2_const: float = 58.5225

    def __post_init__(self):
        if self.window_radius < 0:
            raise ParameterError("SSIM window radius must be non-negative")
        if not (self.c1_const > 0 and self.c2_const > 0):
            raise ParameterError("SSIM stabilising constants must be positive")

    @classmethod
    def for_dynamic_range(cls, level: float, window_radius: int = 3) -> "SsimParams":
        """(0.01 L)^2 and (0.03 L)^2 for data spanning [0, L]."""
        return cls(window_radius=window_radius, c1_const=(0.01 * level) ** 2, c2_const=(0.03 * level) ** 2)


@dataclasses.dataclass
class MetricsReport:
    rmse: float
    ssim: float
    voxel_count: int
    window_radius: int
    c1_const: float
    c2_const: float
    metadata: Dict[str, Any] = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        result = {
            "rmse": self.rmse,
            "ssim": self.ssim,
            "voxel_count": self.voxel_count,
            "window_radius": self.window_radius,
            "c1_const": self.c1_const,
            "c2_const": self.c2_const,
        }
        result.update(self.metadata)
        return result


def rmse(reference: Volume3D, estimate: Volume3D) -> float:
    require_same_dims(reference, estimate)
    difference = reference.data.astype(np.float64) - estimate.data.astype(np.float64)
    return math.sqrt(float(np.mean(difference * difference)))


def ssim(reference: Volume3D, estimate: Volume3D, window_radius: int = 3, c1_const: float = 6.5025,
         c2_const: float = 58.5225) -> float:
    """Mean of the local SSIM map over cubic (2r+1)^3 windows with population (co)variances."""
    require_same_dims(reference, estimate)
    SsimParams(window_radius, c1_const, c2_const)
    size = 2 * window_radius + 1
    x = reference.data.astype(np.float64)
    y = estimate.data.astype(np.float64)

    def local_mean(values):
        return ndimage.uniform_filter(values, size=size, mode="mirror", output=np.float64)

    mu_x = local_mean(x)
    mu_y = local_mean(y)
    mu_xx = mu_x * mu_x
    mu_yy = mu_y * mu_y
    mu_xy = mu_x * mu_y
    var_x = local_mean(x * x) - mu_xx
    var_y = local_mean(y * y) - mu_yy
    cov_xy = local_mean(x * y) - mu_xy
    numerator = (2.0 * mu_xy + c1_const) * (2.0 * cov_xy + c2_const)
    denominator = (mu_xx + mu_yy + c1_const) * (var_x + var_y + c2_const)
    return float(np.mean(numerator / denominator))


def report(reference: Volume3D, estimate: Volume3D, ssim_params: Optional[SsimParams] = None,
           **metadata) -> MetricsReport:
    ssim_params = ssim_params or SsimParams()
    return MetricsReport(
        rmse=rmse(reference, estimate),
        ssim=ssim(reference, estimate, ssim_params.window_radius, ssim_params.c1_const, ssim_params.c2_const),
        voxel_count=reference.voxel_count,
        window_radius=ssim_params.window_radius,
        c1_const=ssim_params.c1_const,
        c2_const=ssim_params.c2_const,
        metadata=dict(metadata),
    )
