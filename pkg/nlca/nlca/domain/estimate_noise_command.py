import json

from nlca.domain.use_case_command import UseCaseCommand
from nlca.noise import estimate_noise
from nlca.volume import read_volume


class EstimateNoiseCommand(UseCaseCommand):

    def __init__(self, input_path, input_format=None):
        super().__init__()
        self.input_path = input_path
        self.input_format = input_format

    def execute(self):
        estimate = estimate_noise(read_volume(self.input_path, self.input_format))
        print(json.dumps(estimate.to_dict()))
        return estimate
