from loguru import logger

from nlca.denoise import DenoiseParams, get_filter, residual
from nlca.domain.use_case_command import UseCaseCommand
from nlca.errors import ParameterError
from nlca.noise import estimate_noise
from nlca.volume import read_volume, write_volume


class DenoiseCommand(UseCaseCommand):

    def __init__(self, input_path, output_path, filter_name="nlca", sigma="auto", params=None, input_format=None,
                 residual_path=None, sample_type="f32", workers=1):
        super().__init__()
        self.input_path = input_path
        self.output_path = output_path
        self.filter = get_filter(filter_name)
        self.filter_name = filter_name
        self.sigma = sigma
        self.params = params or DenoiseParams()
        self.input_format = input_format
        self.residual_path = residual_path
        self.sample_type = sample_type
        self.workers = workers

    def resolve_sigma(self, volume) -> float:
        if isinstance(self.sigma, str):
            if self.sigma != "auto":
                raise ParameterError(f"Sigma must be a number or 'auto', got {self.sigma!r}")
            sigma = estimate_noise(volume).sigma_n_hat
            logger.info(f"Estimated noise sigma_n={sigma:.4g}")
            return sigma
        if self.sigma < 0:
            raise ParameterError(f"Sigma must be non-negative, got {self.sigma}")
        return float(self.sigma)

    def execute(self):
        volume = read_volume(self.input_path, self.input_format)
        params = self.params.replace(sigma_n=self.resolve_sigma(volume))
        logger.info(f"Running {self.filter_name} on {self.input_path} {volume.dims} with {params}")
        denoised = self.filter(volume, params, workers=self.workers)
        write_volume(denoised, self.output_path, self.sample_type)
        if self.residual_path:
            write_volume(residual(volume, denoised), self.residual_path, "f32")
        return denoised
