import dataclasses
import time
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pandas as pd
import prettytable.prettytable
from loguru import logger
from tqdm import tqdm

from nlca.denoise import DenoiseParams, get_filter
from nlca.errors import ParameterError
from nlca.metrics import SsimParams, report
from nlca.noise import EIGHT_BIT_MAX, NoiseModel, add_rician, estimate_noise, percent_to_sigma
from nlca.phantoms import brain_phantom
from nlca.volume import Volume3D, crop, read_volume

CSV_COLUMNS = ["filter", "noise_pct", "rmse", "ssim", "seed", "sigma_policy", "elapsed_ms"]
CSV_FLOAT_FORMAT = "%.6g"
BASELINE = "noisy"
SIGMA_POLICIES = ("exact", "estimated")


@dataclasses.dataclass
class BenchmarkSpec:
    output_csv: str
    input_path: Optional[str] = None
    input_format: Optional[str] = None
    levels: Sequence[float] = (5, 10, 15, 20)
    filters: Sequence[str] = ("ca", "nlca")
    seed: int = 0
    sigma_policy: str = "exact"
    crop: Optional[Tuple[int, int, int, int, int, int]] = None
    repeats: int = 1
    modality: str = "T1w"
    noise_reference: str = "8bit"
    params: DenoiseParams = dataclasses.field(default_factory=DenoiseParams)
    ssim_params: SsimParams = dataclasses.field(default_factory=SsimParams)
    phantom_dims: Tuple[int, int, int] = (64, 64, 64)
    workers: int = 1
    json_path: Optional[str] = None

    def __post_init__(self):
        if not self.filters:
            raise ParameterError("Benchmark needs at least one filter")
        for name in self.filters:
            get_filter(name)
        if not self.levels:
            raise ParameterError("Benchmark needs at least one noise level")
        for level in self.levels:
            if not 0 < level < 100:
                raise ParameterError(f"Noise percentage must lie in (0, 100), got {level}")
        if self.sigma_policy not in SIGMA_POLICIES:
            raise ParameterError(f"Sigma policy must be one of {', '.join(SIGMA_POLICIES)}, got {self.sigma_policy!r}")
        if self.repeats < 1:
            raise ParameterError("Repeats must be at least 1")


@dataclasses.dataclass
class BenchmarkRow:
    filter: str
    noise_pct: float
    rmse: float
    ssim: float
    seed: int
    sigma_policy: str
    elapsed_ms: float


def noise_max_level(volume: Volume3D, reference: str) -> float:
    """Gray level that noise percentages refer to: 255 for 8-bit data, otherwise the data maximum."""
    if reference == "8bit":
        return EIGHT_BIT_MAX
    if reference == "data-max":
        return float(volume.data.max())
    raise ParameterError(f"Unknown noise reference {reference!r}; expected 8bit or data-max")


class BenchmarkRunner:
    """
    Runs every (repeat, noise level, filter) cell against a noise-free volume: injects
    Rician noise, denoises with the exact or estimated sigma, and scores the result.
    The unfiltered noisy volume is scored as a baseline row for each level.
    """

    def __init__(self, spec: BenchmarkSpec):
        self.spec = spec
        self.rows: List[BenchmarkRow] = []
        self.reports = []

    def load_ground_truth(self) -> Volume3D:
        spec = self.spec
        if spec.input_path:
            volume = read_volume(spec.input_path, spec.input_format)
            logger.info(f"Ground truth {spec.input_path} dims={volume.dims}")
        else:
            volume = brain_phantom(spec.phantom_dims, modality=spec.modality)
            logger.info(f"No ground truth given, using the bundled {spec.modality} phantom {volume.dims}")
        if spec.crop is not None:
            volume = crop(volume, spec.crop[:3], spec.crop[3:])
        return volume

    def run_benchmark(self) -> List[BenchmarkRow]:
        spec = self.spec
        ground_truth = self.load_ground_truth()
        max_level = noise_max_level(ground_truth, spec.noise_reference)
        cells = [(repeat, level) for repeat in range(spec.repeats) for level in spec.levels]
        for repeat, level in tqdm(cells, desc="Benchmark cells"):
            self.run_cell(ground_truth, spec.seed + repeat, level, percent_to_sigma(level, max_level))
        return self.rows

    def run_cell(self, ground_truth: Volume3D, seed: int, level: float, sigma: float):
        spec = self.spec
        noisy = add_rician(ground_truth, NoiseModel(sigma_n=sigma, seed=seed), workers=spec.workers)
        self._score(ground_truth, noisy, BASELINE, level, seed, 0.0)
        if spec.sigma_policy == "estimated":
            sigma = estimate_noise(noisy).sigma_n_hat
        params = spec.params.replace(sigma_n=sigma)
        for name in spec.filters:
            start = time.perf_counter()
            denoised = get_filter(name)(noisy, params, workers=spec.workers)
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            self._score(ground_truth, denoised, name, level, seed, elapsed_ms)

    def _score(self, ground_truth: Volume3D, estimate: Volume3D, name: str, level: float, seed: int,
               elapsed_ms: float):
        spec = self.spec
        metrics = report(ground_truth, estimate, spec.ssim_params, filter=name, modality=spec.modality,
                         noise_pct=level, seed=seed, sigma_policy=spec.sigma_policy)
        logger.debug(f"{name} at {level}% seed={seed}: rmse={metrics.rmse:.4f} ssim={metrics.ssim:.4f}")
        self.reports.append(metrics)
        self.rows.append(BenchmarkRow(filter=name, noise_pct=level, rmse=metrics.rmse, ssim=metrics.ssim,
                                      seed=seed, sigma_policy=spec.sigma_policy, elapsed_ms=elapsed_ms))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([dataclasses.asdict(row) for row in self.rows], columns=CSV_COLUMNS)

    def write_results(self):
        path = Path(self.spec.output_csv)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        logger.info(f"Wrote {len(self.rows)} benchmark rows to {path}")
        if self.spec.json_path:
            pd.DataFrame([r.to_dict() for r in self.reports]).to_json(self.spec.json_path, orient="records", indent=2)

    def summary_table(self) -> prettytable.PrettyTable:
        """Mean RMSE/SSIM per filter and level; the best filter value per level is starred."""
        frame = self.to_frame().groupby(["filter", "noise_pct"], sort=False)[["rmse", "ssim"]].mean()
        filters = list(dict.fromkeys(self.to_frame()["filter"]))
        table = prettytable.PrettyTable()
        table.field_names = ["Filter"] + [f"{column} {level:g}%" for level in self.spec.levels
                                          for column in ("RMSE", "SSIM")]
        table.align["Filter"] = "l"
        for name in filters:
            cells = [f"{self.spec.modality} {name}"]
            for level in self.spec.levels:
                scores = frame.xs(level, level="noise_pct")
                rmse_value, ssim_value = scores.loc[name, "rmse"], scores.loc[name, "ssim"]
                cells.append(f"{rmse_value:.4f}{'*' if rmse_value == scores['rmse'].min() else ''}")
                cells.append(f"{ssim_value:.4f}{'*' if ssim_value == scores['ssim'].max() else ''}")
            table.add_row(cells)
        return table

    def print_results(self):
        print(self.summary_table())


def aggregate_csv(paths: Sequence[str]) -> pd.DataFrame:
    """Averages benchmark rows over seeds per (filter, noise_pct, sigma_policy)."""
    frame = pd.concat([pd.read_csv(path) for path in paths], ignore_index=True)
    grouped = frame.groupby(["filter", "noise_pct", "sigma_policy"], sort=True)
    summary = grouped.agg(rmse_mean=("rmse", "mean"), rmse_std=("rmse", "std"), ssim_mean=("ssim", "mean"),
                          ssim_std=("ssim", "std"), elapsed_ms_mean=("elapsed_ms", "mean"),
                          runs=("seed", "count"))
    return summary.reset_index()
