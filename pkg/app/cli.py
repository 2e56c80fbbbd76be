import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from app.application.services.preset_catalog import PresetCatalog
from app.application.services.report_builder import ReportBuilder
from app.application.use_cases.emit_report import EmitReportUseCase
from app.application.use_cases.run_benchmark import BENCHMARK_FRAMES, RunBenchmarkUseCase
from app.application.use_cases.run_experiment import RunExperimentUseCase
from app.application.use_cases.sweep_distance import SweepDistanceUseCase
from app.application.services.montecarlo_engine import resolve_workers
from app.core.config import settings
from app.core.enums import Protocol, ReportFormat, SimulationMode
from app.core.exceptions import (
    ConfigurationException,
    DomainValueException,
    EstimationException,
    QKDBenchException,
    ReportPersistenceException,
)
from app.core.logging_config import configure_logging
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.run_report import RunReport
from app.infrastructure.config.config_loader import ConfigLoader, apply_overrides

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_ANALYSIS = 3

DEFAULT_BENCH_PRESET = "bb84-table1"


def parse_distances(text: str) -> List[float]:
    try:
        distances = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigurationException(f"Invalid distance list '{text}'") from exc
    if not distances:
        raise ConfigurationException("Distance list is empty")
    return distances


def _add_experiment_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat section.key = value config file")
    parser.add_argument("--preset", help="device preset, e.g. bb84-table1")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--frames", type=int)
    parser.add_argument("--mode", choices=[m.value for m in SimulationMode])
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=[f.value for f in ReportFormat])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdbench", description="Chip-to-chip QKD link simulator"
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one experiment")
    _add_experiment_flags(run)

    sweep = commands.add_parser("sweep", help="run one experiment per distance")
    _add_experiment_flags(sweep)
    sweep.add_argument("--distances", help='comma separated km, e.g. "0,10,20"')

    oracle = commands.add_parser("oracle", help="analytic expectations for a config")
    _add_experiment_flags(oracle)

    presets = commands.add_parser("presets", help="list presets or show one")
    presets.add_argument("name", nargs="?")

    bench = commands.add_parser("bench", help="Monte Carlo throughput on one worker")
    bench.add_argument("--preset")
    bench.add_argument("--config")
    bench.add_argument("--frames", type=int, default=BENCHMARK_FRAMES)
    bench.add_argument("--seed", type=int)
    return parser


def _load_config(args: argparse.Namespace, loader: ConfigLoader) -> ExperimentConfig:
    if not args.config and not args.preset:
        raise ConfigurationException("Give --preset and/or --config")
    config = loader.load(args.config, args.preset)
    return apply_overrides(
        config,
        seed=args.seed,
        frames=args.frames,
        mode=getattr(args, "mode", None),
        output_dir=getattr(args, "out", None),
        report_format=getattr(args, "format", None),
    )


def _run_use_case(workers: int) -> RunExperimentUseCase:
    return RunExperimentUseCase(ReportBuilder(), settings.batch_size, workers)


def _summary(report: RunReport) -> str:
    def fmt(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.4%}"

    return (
        f"{report.protocol.value} {report.distance_km:g} km: raw {report.raw_bps / 1e3:.1f} kbps, "
        f"sifted {report.sifted_bps / 1e3:.1f} kbps, secret {report.secret_bps / 1e3:.1f} kbps, "
        f"QBER time {fmt(report.qber_time)}, QBER phase {fmt(report.qber_phase)}"
    )


def cmd_run(args, loader: ConfigLoader) -> int:
    config = _load_config(args, loader)
    report = _run_use_case(resolve_workers(settings.threads)).execute(config)
    location = EmitReportUseCase().execute(config, [report])
    print(_summary(report))
    print(f"report: {location}")
    return EXIT_OK


def cmd_sweep(args, loader: ConfigLoader) -> int:
    config = _load_config(args, loader)
    if args.distances:
        distances = parse_distances(args.distances)
    else:
        config_file = loader.read(args.config) if args.config else None
        distances = config_file.experiment.distances if config_file else None
        if not distances:
            raise ConfigurationException("Give --distances or experiment.distances")

    sweep = SweepDistanceUseCase(_run_use_case(resolve_workers(settings.threads)))
    result = sweep.execute(config, distances)
    if not result.reports:
        logger.error("Every sweep point failed")
        return EXIT_ANALYSIS
    location = EmitReportUseCase().execute(config, result.reports)
    for report in result.reports:
        print(_summary(report))
    for failure in result.failures:
        print(f"{failure.distance_km:g} km failed: {failure.message}")
    print(f"report: {location}")
    return EXIT_OK


def cmd_oracle(args, loader: ConfigLoader) -> int:
    config = apply_overrides(_load_config(args, loader), mode=SimulationMode.ANALYTIC)
    report = _run_use_case(1).execute(config)
    print(_summary(report))
    for entry in report.classes:
        qber = "-" if entry.qber is None else f"{entry.qber:.4%}"
        print(f"  {entry.name}: mu={entry.mean_photons:g} gain={entry.gain:.6g} qber={qber}")
    if report.protocol == Protocol.BB84 and report.y1_lower is not None:
        print(
            f"  Y0={report.y0:.4g} Y1_lower={report.y1_lower:.6g} "
            f"e1_upper={report.e1_upper:.4g}"
        )
    return EXIT_OK


def cmd_presets(args, catalog: PresetCatalog) -> int:
    if args.name:
        print(json.dumps(catalog.get(args.name).to_dict(), indent=2, sort_keys=True))
        return EXIT_OK
    for preset in catalog.all():
        print(f"{preset.name:14s} {preset.description}")
    return EXIT_OK


def cmd_bench(args, loader: ConfigLoader) -> int:
    preset = args.preset or (None if args.config else DEFAULT_BENCH_PRESET)
    config = loader.load(args.config, preset)
    config = apply_overrides(config, seed=args.seed)
    result = RunBenchmarkUseCase(_run_use_case(1)).execute(config, args.frames)
    print(
        f"{result.protocol}: {result.frames} frames in {result.wall_time_s:.3f}s "
        f"-> {result.frames_per_second:.4g} frames/s/core"
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else settings.log_level)

    catalog = PresetCatalog()
    loader = ConfigLoader(catalog)
    try:
        if args.command == "presets":
            return cmd_presets(args, catalog)
        handler = {
            "run": cmd_run,
            "sweep": cmd_sweep,
            "oracle": cmd_oracle,
            "bench": cmd_bench,
        }[args.command]
        return handler(args, loader)
    except (ConfigurationException, DomainValueException) as exc:
        logger.error("Configuration error: %s", exc.message)
        return EXIT_CONFIG
    except EstimationException as exc:
        logger.error("Analysis failed: %s", exc.message)
        return EXIT_ANALYSIS
    except ReportPersistenceException as exc:
        logger.error("Could not write report: %s", exc.message)
        return EXIT_FAILURE
    except QKDBenchException as exc:
        logger.error("%s", exc.message)
        return EXIT_FAILURE
    except Exception as exc:
        logger.error(f"Unexpected error: {str(exc)}", exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
