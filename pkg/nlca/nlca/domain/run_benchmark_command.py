from nlca._benchmark import BenchmarkRunner
from nlca.domain.use_case_command import UseCaseCommand


class RunBenchmarkCommand(UseCaseCommand):

    def __init__(self, spec, print_summary=True):
        super().__init__()
        self.runner = BenchmarkRunner(spec)
        self.print_summary = print_summary

    def execute(self):
        rows = self.runner.run_benchmark()
        self.runner.write_results()
        if self.print_summary:
            self.runner.print_results()
        return rows
