# Import any modules or subpackages that should be available when the package is imported

from nlca._version import __version__
from nlca.denoise import DenoiseParams, MomentTables, build_moment_tables, ca_filter, nlca_filter, residual, \
    similarity_accept
from nlca.metrics import MetricsReport, SsimParams, report, rmse, ssim
from nlca.noise import HHHField, NoiseEstimate, NoiseModel, add_rician, dwt_hhh, estimate_noise
from nlca.special import bessel_i0, bessel_i1, mad_sigma, xi_correction
from nlca.volume import Volume3D, VolumeHeader, crop, load_nifti, load_raw, sample_mirrored, save_raw
