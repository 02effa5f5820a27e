import argparse
import sys
from typing import List, Optional, Sequence

from loguru import logger

import nlca._version as nlca_version
from nlca.config import load_config
from nlca.denoise import FILTERS, DenoiseParams
from nlca.errors import NlcaError
from nlca.metrics import SsimParams
from nlca.phantoms import PHANTOMS, TISSUE_INTENSITIES


def _float_list(value: str) -> List[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from None


def _int_list(expected: int):
    def parse(value: str) -> List[int]:
        try:
            items = [int(item) for item in value.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None
        if len(items) != expected:
            raise argparse.ArgumentTypeError(f"expected {expected} integers, got {len(items)}")
        return items
    return parse


def _sigma(value: str):
    if value == "auto":
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sigma must be a number or 'auto', got {value!r}") from None


class NlcaApplication:
    """
    Command-line front end. Each sub-command builds a use-case command object from
    the parsed flags and executes it. Flags override the config file, which
    overrides the built-in defaults.
    """

    # <editor-fold desc="Initialization">

    def __init__(self):
        self.program_name = "nlca"
        self.version = nlca_version.__version__
        self.parser = self._build_parser()

    # </editor-fold>

    # <editor-fold desc="Entry point">

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        argv = list(sys.argv[1:] if argv is None else argv)
        pre_parser = argparse.ArgumentParser(add_help=False)
        pre_parser.add_argument("--config")
        pre_args, _ = pre_parser.parse_known_args(argv)
        self._configure_logging(verbose="--verbose" in argv, quiet="--quiet" in argv)
        try:
            config = load_config(pre_args.config)
            for subparser in self._subparsers.values():
                subparser.set_defaults(**config)
            args = self.parser.parse_args(argv)
            args.handler(args)
        except (NlcaError, OSError) as e:
            logger.error(str(e))
            return 1
        return 0

    # </editor-fold>

    # <editor-fold desc="Commands">

    @staticmethod
    def cmd_add_noise(args):
        from nlca.domain.add_noise_command import AddNoiseCommand
        command = AddNoiseCommand(args.input, args.output, args.percent, seed=args.seed, input_format=args.format,
                                  noise_reference=args.noise_reference, sample_type=args.dtype,
                                  workers=args.workers)
        command.execute()

    @staticmethod
    def cmd_estimate(args):
        from nlca.domain.estimate_noise_command import EstimateNoiseCommand
        command = EstimateNoiseCommand(args.input, input_format=args.format)
        command.execute()

    @staticmethod
    def cmd_denoise(args):
        from nlca.domain.denoise_command import DenoiseCommand
        command = DenoiseCommand(args.input, args.output, filter_name=args.filter, sigma=args.sigma,
                                 params=NlcaApplication._denoise_params(args), input_format=args.format,
                                 residual_path=args.residual, sample_type=args.dtype, workers=args.workers)
        command.execute()

    @staticmethod
    def cmd_benchmark(args):
        from nlca._benchmark import BenchmarkSpec
        from nlca.domain.run_benchmark_command import RunBenchmarkCommand
        spec = BenchmarkSpec(output_csv=args.output, input_path=args.input, input_format=args.format,
                             levels=args.levels, filters=args.filters, seed=args.seed,
                             sigma_policy=args.sigma_policy, crop=args.crop, repeats=args.repeats,
                             modality=args.modality, noise_reference=args.noise_reference,
                             params=NlcaApplication._denoise_params(args),
                             ssim_params=NlcaApplication._ssim_params(args), phantom_dims=tuple(args.dims),
                             workers=args.workers, json_path=args.json)
        command = RunBenchmarkCommand(spec, print_summary=not args.quiet)
        command.execute()

    @staticmethod
    def cmd_metrics(args):
        from nlca.domain.compute_metrics_command import ComputeMetricsCommand
        command = ComputeMetricsCommand(args.reference, args.estimate, NlcaApplication._ssim_params(args),
                                        input_format=args.format)
        command.execute()

    @staticmethod
    def cmd_phantom(args):
        from nlca.domain.write_phantom_command import WritePhantomCommand
        command = WritePhantomCommand(args.output, kind=args.kind, dims=args.dims, modality=args.modality,
                                      seed=args.seed, sample_type=args.dtype)
        command.execute()

    # </editor-fold>

    # <editor-fold desc="Private methods">

    @staticmethod
    def _configure_logging(verbose=False, quiet=False):
        logger.remove()
        level = "DEBUG" if verbose else "WARNING" if quiet else "INFO"
        logger.add(sys.stderr, level=level, format="<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {message}")

    @staticmethod
    def _denoise_params(args) -> DenoiseParams:
        return DenoiseParams(patch_radius=args.patch_radius, search_radius=args.search_radius, c1=args.c1, c2=args.c2)

    @staticmethod
    def _ssim_params(args) -> SsimParams:
        return SsimParams(window_radius=args.window_radius, c1_const=args.c1_const, c2_const=args.c2_const)

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.program_name,
                                         description="Rician MRI denoising with the conventional approach (CA) "
                                                     "and its non-local extension (NLCA)")
        parser.add_argument("--version", action="version", version=f"%(prog)s {self.version}")
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", help="JSON or YAML file mirroring these flags; flags win on conflict")
        common.add_argument("--format", choices=["raw", "nifti"], help="Input reader (default: from extension)")
        common.add_argument("--workers", type=int, help="Worker threads; results do not depend on it")
        common.add_argument("--verbose", action="store_true", help="Debug logging")
        common.add_argument("--quiet", action="store_true", help="Warnings and errors only")
        subcommands = parser.add_subparsers(dest="command", required=True)
        self._subparsers = {}

        def add(name, handler, help_text):
            subparser = subcommands.add_parser(name, parents=[common], help=help_text)
            subparser.set_defaults(handler=handler)
            self._subparsers[name] = subparser
            return subparser

        add_noise = add("add-noise", self.cmd_add_noise, "Inject Rician noise into a volume")
        add_noise.add_argument("--input", required=True)
        add_noise.add_argument("--output", required=True)
        add_noise.add_argument("--percent", type=float, required=True,
                               help="Noise level as a percentage of the maximum gray level")
        add_noise.add_argument("--seed", type=int)
        add_noise.add_argument("--noise-reference", choices=["8bit", "data-max"],
                               help="Gray level the percentage refers to: 255 or the data maximum")
        add_noise.add_argument("--dtype", choices=["u8", "i16", "f32"], help="Raw output sample type")

        estimate = add("estimate", self.cmd_estimate, "Estimate the Gaussian noise level, print JSON")
        estimate.add_argument("--input", required=True)

        denoise = add("denoise", self.cmd_denoise, "Denoise a volume with CA or NLCA")
        denoise.add_argument("--input", required=True)
        denoise.add_argument("--output", required=True)
        denoise.add_argument("--filter", help=f"One of: {', '.join(sorted(FILTERS))}")
        denoise.add_argument("--sigma", type=_sigma, help="Gaussian noise sigma, or 'auto' to estimate it")
        denoise.add_argument("--residual", help="Also write noisy minus denoised here")
        denoise.add_argument("--dtype", choices=["u8", "i16", "f32"], help="Raw output sample type")
        self._add_filter_arguments(denoise)

        benchmark = add("benchmark", self.cmd_benchmark, "Noise/denoise/score grid written as CSV")
        benchmark.add_argument("--input", help="Noise-free volume (default: bundled phantom)")
        benchmark.add_argument("--output", required=True, help="CSV path")
        benchmark.add_argument("--levels", type=_float_list, help="Noise percentages, e.g. 5,10,15,20")
        benchmark.add_argument("--filters", "--filter", dest="filters", type=lambda v: [f for f in v.split(",") if f],
                               help=f"Comma-separated subset of {', '.join(sorted(FILTERS))}")
        benchmark.add_argument("--seed", type=int)
        benchmark.add_argument("--repeats", type=int, help="Noise realisations per level (seeds seed, seed+1, ...)")
        benchmark.add_argument("--sigma-policy", choices=["exact", "estimated"])
        benchmark.add_argument("--crop", type=_int_list(6), help="x,y,z,ex,ey,ez")
        benchmark.add_argument("--modality", choices=sorted(TISSUE_INTENSITIES))
        benchmark.add_argument("--dims", type=_int_list(3), help="Phantom dims when no --input is given")
        benchmark.add_argument("--noise-reference", choices=["8bit", "data-max"])
        benchmark.add_argument("--json", help="Also dump every MetricsReport to this JSON file")
        self._add_filter_arguments(benchmark)
        self._add_ssim_arguments(benchmark)

        metrics = add("metrics", self.cmd_metrics, "RMSE and SSIM of an estimate against a reference")
        metrics.add_argument("--reference", required=True)
        metrics.add_argument("--estimate", required=True)
        self._add_ssim_arguments(metrics)

        phantom = add("phantom", self.cmd_phantom, "Write a bundled phantom volume")
        phantom.add_argument("--output", required=True)
        phantom.add_argument("--kind", choices=sorted(PHANTOMS))
        phantom.add_argument("--dims", type=_int_list(3))
        phantom.add_argument("--modality", choices=sorted(TISSUE_INTENSITIES))
        phantom.add_argument("--seed", type=int)
        phantom.add_argument("--dtype", choices=["u8", "i16", "f32"], help="Raw output sample type")
        return parser

    @staticmethod
    def _add_filter_arguments(subparser):
        subparser.add_argument("--patch-radius", type=int, help="Patch radius (1 -> 3^3 patch)")
        subparser.add_argument("--search-radius", type=int, help="Search radius (5 -> 11^3 window)")
        subparser.add_argument("--c1", type=float, help="Mean-ratio strictness in (0, 1]")
        subparser.add_argument("--c2", type=float, help="Second-moment-ratio strictness in (0, 1]")

    @staticmethod
    def _add_ssim_arguments(subparser):
        subparser.add_argument("--window-radius", type=int, help="SSIM window radius (3 -> 7^3)")
        subparser.add_argument("--c1-const", type=float)
        subparser.add_argument("--c2-const", type=float)

    # </editor-fold>

