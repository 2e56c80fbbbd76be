#!/usr/bin/env python3
"""
Secret key rate versus distance for the three shipped presets.

Writes one CSV per preset (same columns as the run reports) into the output directory.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from app.application.services.montecarlo_engine import resolve_workers  # noqa: E402
from app.application.services.preset_catalog import PresetCatalog  # noqa: E402
from app.application.services.report_builder import ReportBuilder  # noqa: E402
from app.application.use_cases.emit_report import EmitReportUseCase  # noqa: E402
from app.application.use_cases.run_experiment import RunExperimentUseCase  # noqa: E402
from app.application.use_cases.sweep_distance import SweepDistanceUseCase  # noqa: E402
from app.core.config import settings  # noqa: E402
from app.core.enums import ReportFormat, SimulationMode  # noqa: E402
from app.core.logging_config import configure_logging  # noqa: E402

PRESETS = ("bb84-table1", "cow-table1", "dps-table1")
DISTANCES_KM = [float(d) for d in range(0, 61, 5)]


def main():
    parser = argparse.ArgumentParser(description="Generate key rate vs distance sweeps")
    parser.add_argument("--out", default="results/sweeps", help="Output directory")
    parser.add_argument(
        "--mode",
        choices=[m.value for m in SimulationMode],
        default=SimulationMode.ANALYTIC.value,
    )
    parser.add_argument("--frames", type=int, default=None, help="Frames per point")
    args = parser.parse_args()

    configure_logging(settings.log_level)
    catalog = PresetCatalog()
    run = RunExperimentUseCase(
        ReportBuilder(), settings.batch_size, resolve_workers(settings.threads)
    )
    sweep = SweepDistanceUseCase(run)
    emit = EmitReportUseCase()

    failed = False
    for name in PRESETS:
        config = replace(
            catalog.build(name),
            mode=SimulationMode(args.mode),
            output_dir=args.out,
            report_format=ReportFormat.CSV,
        )
        if args.frames:
            config = replace(config, frames=args.frames)

        result = sweep.execute(config, DISTANCES_KM)
        location = emit.execute(config, result.reports)
        print(f"{name}: {len(result.reports)} points -> {location}")
        for failure in result.failures:
            failed = True
            print(f"  {failure.distance_km:g} km: {failure.message}")

    if failed:
        print("Some points failed (see above)")


if __name__ == "__main__":
    main()
