from loguru import logger

from nlca._benchmark import noise_max_level
from nlca.domain.use_case_command import UseCaseCommand
from nlca.noise import NoiseModel, add_rician, percent_to_sigma
from nlca.volume import read_volume, write_volume


class AddNoiseCommand(UseCaseCommand):

    def __init__(self, input_path, output_path, percent, seed=0, input_format=None, noise_reference="8bit",
                 sample_type="f32", workers=1):
        super().__init__()
        self.input_path = input_path
        self.output_path = output_path
        self.percent = percent
        self.seed = seed
        self.input_format = input_format
        self.noise_reference = noise_reference
        self.sample_type = sample_type
        self.workers = workers

    def execute(self):
        volume = read_volume(self.input_path, self.input_format)
        sigma = percent_to_sigma(self.percent, noise_max_level(volume, self.noise_reference))
        logger.info(f"Adding {self.percent}% Rician noise (sigma_n={sigma:.4g}, seed={self.seed}) to {self.input_path}")
        noisy = add_rician(volume, NoiseModel(sigma_n=sigma, seed=self.seed), workers=self.workers)
        write_volume(noisy, self.output_path, self.sample_type)
        return sigma
