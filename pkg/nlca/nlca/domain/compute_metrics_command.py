import json

from nlca.domain.use_case_command import UseCaseCommand
from nlca.metrics import SsimParams, report
from nlca.volume import read_volume


class ComputeMetricsCommand(UseCaseCommand):

    def __init__(self, reference_path, estimate_path, ssim_params=None, input_format=None):
        super().__init__()
        self.reference_path = reference_path
        self.estimate_path = estimate_path
        self.ssim_params = ssim_params or SsimParams()
        self.input_format = input_format

    def execute(self):
        reference = read_volume(self.reference_path, self.input_format)
        estimate = read_volume(self.estimate_path, self.input_format)
        metrics = report(reference, estimate, self.ssim_params)
        print(json.dumps(metrics.to_dict()))
        return metrics
