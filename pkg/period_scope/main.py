import json
import logging
import math
import sys
from argparse import ArgumentParser
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Type

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import (
    BaseSettings,
    CliApp,
    CliSettingsSource,
    CliSubCommand,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    SettingsError,
)

from period_scope.models.experiment import ExperimentConfig
from period_scope.models.period import MonteCarloParams
from period_scope.models.signal import Signal, Waveform
from period_scope.services.estimators import create_estimator
from period_scope.services.experiments import (
    load_config,
    run_dc_split_check,
    run_hit_miss,
    run_reconstruction_eval,
    run_runtime_comparison,
    run_snr_sweep,
    write_report,
)
from period_scope.services.period_finder import subsampled_profile, variance_profile
from period_scope.services.signals import measure_snr, synthesize
from period_scope.services.svd_baseline import svd_spectrum
from period_scope.utils.config import Config
from period_scope.utils.errors import BadConfigError, BadFlagsError, PeriodScopeError
from period_scope.utils.io import (
    format_table_csv,
    read_signal_csv,
    write_json,
    write_signal_csv,
    write_table_csv,
)
from period_scope.utils.logger import report_writer, setup_logging
from period_scope.workflow.analysis_workflow import create_analysis_workflow, initial_state

# Dip records printed with an estimate
REPORTED_DIPS = 10

DEFAULT_BENCH_LENGTHS = [4096, 8192, 16384, 32768]


def _read_signal(path: Path) -> Signal:
    return Signal(samples=read_signal_csv(path))


def _monte_carlo_params(command) -> MonteCarloParams:
    try:
        return MonteCarloParams(
            resends=command.resends, columns=command.columns, rows=command.rows, seed=command.seed
        )
    except ValidationError as e:
        raise BadFlagsError(f"Invalid Monte Carlo flags: {e}") from e


def _base_config(path: Optional[Path]) -> ExperimentConfig:
    return load_config(path) if path else ExperimentConfig()


def _with_overrides(base: ExperimentConfig, **overrides) -> ExperimentConfig:
    """
    The base config with every flag that was given applied on top.
    """
    values = base.model_dump()
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        raise BadConfigError(f"Invalid experiment settings: {e}") from e


def _print_report(payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, default=str)
    with report_writer() as out:
        print(text, file=out)


def _add_argument(parser: ArgumentParser, *names: str, **kwargs):
    """
    Register a CLI option. One-letter options such as `-n` also answer to
    their long spelling `--n`.
    """
    long_names = [
        f"-{name}" for name in names if len(name) == 2 and name.startswith("-") and name != "--"
    ]
    return parser.add_argument(*names, *long_names, **kwargs)


class SynthCommand(BaseModel):
    """Synthesize a composite periodic test signal."""

    periods: List[int] = Field(..., description="Hidden periods, e.g. 8,11,16.")
    wave: Optional[List[Waveform]] = Field(None, description="Waveform per period: tri, cos or rand.")
    amplitude: Optional[List[float]] = Field(None, description="Amplitude per period.")
    n: int = Field(..., description="Number of samples N.")
    snr: Optional[float] = Field(None, description="SNR in dB of noisy.csv; noiseless if omitted.")
    seed: int = Field(Config.DEFAULT_SEED, description="Seed for templates and noise.")
    out_dir: Path = Field(Path(Config.OUTPUT_DIR), description="Directory for the output files.")

    def cli_cmd(self) -> None:
        truth = synthesize(self.periods, self.n, self.wave, self.amplitude, self.snr, self.seed)
        write_signal_csv(self.out_dir / "clean.csv", truth.clean.samples)
        write_signal_csv(self.out_dir / "noisy.csv", truth.noisy.samples)
        measured = None
        if self.snr is not None and math.isfinite(self.snr):
            measured = measure_snr(truth.clean, truth.noisy)
        write_json(
            self.out_dir / "truth.json",
            {
                "schema_version": Config.SCHEMA_VERSION,
                "hidden_periods": list(truth.components),
                "waveforms": {p: w.value for p, w in truth.waveforms.items()},
                "amplitudes": truth.amplitudes,
                "composite_period": truth.composite_period,
                "N": self.n,
                "snr_db": self.snr,
                "measured_snr_db": measured,
                "seed": self.seed,
            },
        )
        logging.info(f"Wrote clean.csv, noisy.csv and truth.json to {self.out_dir}")


class EstimateCommand(BaseModel):
    """Estimate the composite period of a signal file."""

    input: Path = Field(..., description="Signal CSV, one sample per line.")
    method: str = Field("variance", description="variance, montecarlo or svd.")
    resends: int = Field(Config.MC_RESENDS, description="Monte Carlo runs that must agree.")
    columns: int = Field(Config.MC_COLUMNS, description="Columns sampled per assumed period.")
    rows: int = Field(Config.MC_ROWS, description="Rows sampled per column.")
    records: List[Path] = Field(
        default_factory=list, description="Further observations of the same signal."
    )
    emit_profile: Optional[Path] = Field(None, description="Write the P,value spectrum here.")
    format: Literal["json", "csv"] = Field("json", description="Report format on stdout.")
    seed: int = Field(Config.DEFAULT_SEED, description="Seed of the Monte Carlo subsampling.")

    def cli_cmd(self) -> None:
        signals = [_read_signal(path) for path in [self.input, *self.records]]
        params = _monte_carlo_params(self)
        estimate = create_estimator(self.method, params).estimate(signals)

        if self.emit_profile:
            self._write_profile(signals[0], params)
        top = sorted(estimate.dips, key=lambda dip: (-dip.score, dip.period))[:REPORTED_DIPS]
        if self.format == "csv":
            _print_report(
                f"# period={estimate.period} method={estimate.method.value}\n"
                + format_table_csv(
                    ["P", "measure1", "measure2", "score"],
                    ([d.period, d.measure1, d.measure2, d.score] for d in top),
                ).rstrip("\n")
            )
        else:
            _print_report(estimate.model_copy(update={"dips": top}).model_dump_json(indent=2))

    def _write_profile(self, signal: Signal, params: MonteCarloParams) -> None:
        if self.method == "svd":
            values = svd_spectrum(signal).ratios
        elif self.method == "montecarlo":
            values = subsampled_profile(signal, params, 0).values
        else:
            values = variance_profile(signal).values
        write_table_csv(self.emit_profile, ["P", "value"], sorted(values.items()))
        logging.info(f"Wrote the {self.method} spectrum to {self.emit_profile}")


class DecomposeCommand(BaseModel):
    """Project a signal onto the Ramanujan subspaces of its period and rebuild the hidden components."""

    input: Path = Field(..., description="Signal CSV, one sample per line.")
    period: Optional[int] = Field(None, description="Period to fold at; estimated when omitted.")
    hidden_periods: Optional[List[int]] = Field(
        None, description="Hidden periods to rebuild; inferred from the strengths when omitted."
    )
    method: str = Field("variance", description="Estimator used when no period is given.")
    resends: int = Field(Config.MC_RESENDS)
    columns: int = Field(Config.MC_COLUMNS)
    rows: int = Field(Config.MC_ROWS)
    seed: int = Field(Config.DEFAULT_SEED)
    out_dir: Path = Field(Path(Config.OUTPUT_DIR), description="Directory for the output files.")

    def cli_cmd(self) -> None:
        estimator = create_estimator(self.method, _monte_carlo_params(self))
        workflow = create_analysis_workflow(estimator)
        state = workflow.invoke(
            initial_state([_read_signal(self.input)], self.period, self.hidden_periods)
        )

        write_table_csv(
            self.out_dir / "strengths.csv", ["q", "strength"], sorted(state["strengths"].items())
        )
        summary = {"period": state["period"], "hidden_periods": state["hidden_periods"] or []}
        if state.get("components") is not None:
            components = state["components"]
            hidden = sorted(components.components)
            write_table_csv(
                self.out_dir / "components.csv",
                ["n"] + [f"p{p_i}" for p_i in hidden],
                (
                    [n] + [float(components.components[p_i][n]) for p_i in hidden]
                    for n in range(state["period"])
                ),
            )
            summary["dc_value"] = components.dc_value
        _print_report(summary)


class BenchCommand(BaseModel):
    """Runtime comparison of the Monte Carlo finder and the SVD baseline over a length sweep."""

    n: Optional[List[int]] = Field(None, description="Signal lengths, e.g. 4096,8192,16384,32768.")
    repeats: Optional[int] = Field(None, description="Timing repeats per method and length.")
    seed: Optional[int] = Field(None, description="Master seed.")
    config: Optional[Path] = Field(None, description="ExperimentConfig JSON.")
    out_dir: Path = Field(Path(Config.OUTPUT_DIR))

    def cli_cmd(self) -> None:
        base = _base_config(self.config)
        config = _with_overrides(
            base,
            n_sweep=self.n or base.n_sweep or DEFAULT_BENCH_LENGTHS,
            repeats=self.repeats,
            master_seed=self.seed,
        )
        report = run_runtime_comparison(config)
        write_report(report, self.out_dir)
        _print_report({method: fit.slope for method, fit in report.slopes.items()})


class HitMissCommand(BaseModel):
    """Hit-miss count of the Monte Carlo finder over repeated noisy trials."""

    resends: Optional[int] = Field(None, description="Noisy records per trial.")
    trials: Optional[int] = Field(None)
    snr: Optional[float] = Field(None, description="SNR in dB.")
    seed: Optional[int] = Field(None, description="Master seed.")
    config: Optional[Path] = Field(None, description="ExperimentConfig JSON.")
    out_dir: Path = Field(Path(Config.OUTPUT_DIR))

    def cli_cmd(self) -> None:
        base = _base_config(self.config)
        monte_carlo = None
        if self.resends is not None:
            monte_carlo = {**base.monte_carlo.model_dump(), "resends": self.resends}
        config = _with_overrides(
            base,
            trials=self.trials,
            snr_db=self.snr,
            master_seed=self.seed,
            monte_carlo=monte_carlo,
        )
        report = run_hit_miss(config)
        write_report(report, self.out_dir)
        _print_report({"hits": report.hits, "misses": report.misses})


class ReconCommand(BaseModel):
    """Reconstruction quality against SNR, with optional hit-rate and DC-split checks."""

    snr_sweep: Optional[List[float]] = Field(None, description="SNR values in dB, e.g. 5,10,20,35.")
    trials: Optional[int] = Field(None)
    method: Optional[str] = Field(None, description="Estimator used before decomposing.")
    seed: Optional[int] = Field(None, description="Master seed.")
    hit_rate: bool = Field(False, description="Also report the estimator's hit rate per SNR.")
    dc_draws: int = Field(0, ge=0, description="Random DC splits to compare against the equal one.")
    config: Optional[Path] = Field(None, description="ExperimentConfig JSON.")
    out_dir: Path = Field(Path(Config.OUTPUT_DIR))

    def cli_cmd(self) -> None:
        config = _with_overrides(
            _base_config(self.config),
            snr_sweep=self.snr_sweep,
            trials=self.trials,
            method=self.method,
            master_seed=self.seed,
        )
        report = run_reconstruction_eval(config)
        write_report(report, self.out_dir)
        summary = {
            "mean_correlations": {
                str(s.snr_db): s.mean_correlations for s in report.snr_summary
            },
            "noise_strength_rank_correlation": report.noise_strength_rank_correlation,
        }
        if self.hit_rate:
            sweep = run_snr_sweep(config)
            write_report(sweep, self.out_dir)
            summary["hits"] = {str(s.snr_db): s.hits for s in sweep.snr_summary}
        if self.dc_draws:
            dc_split = run_dc_split_check(config, self.dc_draws).dc_split
            write_json(self.out_dir / "dc_split.json", dc_split)
            summary["dc_split"] = dc_split.model_dump()
        _print_report(summary)


class PeriodScopeCLI(BaseSettings):
    """Estimate periods of noisy signals and extract their hidden periodic components."""

    model_config = SettingsConfigDict(
        cli_prog_name="period-scope",
        cli_kebab_case=True,
        cli_implicit_flags=True,
    )

    log_level: str = Field(Config.LOG_LEVEL, description="Logging level name.")
    log_file: Optional[str] = Field(Config.LOG_FILE_PATH, description="Also log (and tee reports) here.")

    synth: CliSubCommand[SynthCommand]
    estimate: CliSubCommand[EstimateCommand]
    decompose: CliSubCommand[DecomposeCommand]
    bench: CliSubCommand[BenchCommand]
    hitmiss: CliSubCommand[HitMissCommand]
    recon: CliSubCommand[ReconCommand]

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Flags only: seeds and every other run parameter never come from the environment
        return (init_settings,)

    def cli_cmd(self) -> None:
        """Run one of the subcommands."""
        setup_logging(self.log_level, self.log_file)
        CliApp.run_subcommand(self)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """
    Entry point of the `period-scope` command.
    """
    args = list(argv) if argv is not None else sys.argv[1:]
    try:
        source = CliSettingsSource(PeriodScopeCLI, add_argument_method=_add_argument)
        CliApp.run(PeriodScopeCLI, cli_args=args, cli_settings_source=source)
    except PeriodScopeError as e:
        logging.error(f"{type(e).__name__}: {e}")
        sys.exit(e.exit_code)
    except (ValidationError, SettingsError) as e:
        logging.error(f"Invalid arguments: {e}")
        sys.exit(BadFlagsError.exit_code)


if __name__ == "__main__":
    main()
