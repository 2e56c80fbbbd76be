from typing import Optional, Tuple

from app.core.enums import Protocol
from app.core.exceptions import DecoyEstimationException, EstimationException
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.key_rate_report import KeyRateReport
from app.domain.entities.run_report import ClassReport, RunReport
from app.domain.entities.sifted_stats import SiftedStats
from app.domain.services.decoy_analysis import decoy_estimate
from app.domain.services.key_rate import (
    eve_bound_for,
    key_rate_bb84,
    key_rate_cow,
    key_rate_dps,
)
from app.domain.services.sifting import estimate_visibility
from app.domain.value_objects.proportion import Proportion


Interval = Tuple[float, float]


class ReportBuilder:
    """Turns sifting statistics into a RunReport with rates, bounds and intervals."""

    def __init__(self, confidence: float = 0.95):
        self.confidence = confidence

    def _proportion(self, successes: float, trials: float) -> Proportion:
        return Proportion(successes, trials, self.confidence)

    def _estimate(
        self, successes: float, trials: float
    ) -> Tuple[Optional[float], Optional[Interval]]:
        if trials <= 0:
            return None, None
        p = self._proportion(successes, trials)
        return p.value, p.interval

    def build(
        self, config: ExperimentConfig, stats: SiftedStats, wall_time_s: float = 0.0
    ) -> RunReport:
        total = stats.total()
        if total.frames_sent <= 0:
            raise EstimationException("No frames were simulated")

        classes = tuple(
            self._class_report(config, stats, c.name)
            for c in config.transmitter.intensity_classes
        )
        sifted = self._proportion(total.sifted, total.detections) if total.detections > 0 else None

        values = {
            "protocol": config.protocol,
            "mode": config.mode,
            "distance_km": config.channel.length_km,
            "clock_hz": config.transmitter.clock_rate,
            "mu_signal": config.transmitter.signal_class.mean_photons,
            # excess loss is trusted device loss; only the fibre is open to Eve
            "transmission": config.channel.fibre_transmission,
            "frames": config.frames,
            "seed": config.seed,
            "sifted_fraction": sifted.value if sifted else 0.0,
            "sifted_fraction_ci": sifted.interval if sifted else (0.0, 1.0),
            "ec_efficiency": config.ec_efficiency,
            "classes": classes,
            "wall_time_s": wall_time_s,
            "frames_per_second": config.frames / wall_time_s if wall_time_s > 0 else 0.0,
            "config": config.to_dict(),
        }

        if config.protocol == Protocol.BB84:
            values.update(self._bb84(config, stats))
        elif config.protocol == Protocol.COW:
            values.update(self._cow(config, stats))
        else:
            values.update(self._dps(config, stats))
        return RunReport(**values)

    def _class_report(
        self, config: ExperimentConfig, stats: SiftedStats, name: str
    ) -> ClassReport:
        intensity = config.transmitter.class_by_name(name)
        tally = stats.tally(name)
        gain = self._proportion(tally.detections, tally.frames_sent)
        qber, qber_ci = self._estimate(tally.errors, tally.sifted)
        return ClassReport(
            name=name,
            mean_photons=intensity.mean_photons,
            probability=intensity.probability,
            frames_sent=tally.frames_sent,
            detections=tally.detections,
            gain=gain.value if tally.frames_sent > 0 else 0.0,
            gain_ci=gain.interval,
            qber=qber,
            qber_ci=qber_ci,
        )

    @staticmethod
    def _rates(key: KeyRateReport) -> dict:
        return {
            "raw_bps": key.raw_rate,
            "sifted_bps": key.sifted_rate,
            "secret_bps": key.secret_rate,
            "secret_fraction": key.secret_fraction,
            "eve_bound": key.eve_bound,
        }

    def _bb84(self, config: ExperimentConfig, stats: SiftedStats) -> dict:
        signal, decoy, vacuum = _bb84_roles(config)
        q = {c.name: _gain(stats, c.name) for c in (signal, decoy, vacuum)}
        decoy_tally = stats.tally(decoy.name)
        e_decoy = decoy_tally.errors / decoy_tally.sifted if decoy_tally.sifted > 0 else 0.0

        try:
            estimate = decoy_estimate(
                q_signal=q[signal.name],
                q_decoy=q[decoy.name],
                e_decoy=e_decoy,
                q_vacuum=q[vacuum.name],
                mu=signal.mean_photons,
                nu=decoy.mean_photons,
                omega=vacuum.mean_photons,
            )
        except DecoyEstimationException as exc:
            raise DecoyEstimationException(
                f"{exc.message} (bb84 at {config.channel.length_km:g} km)"
            ) from exc

        key = key_rate_bb84(
            stats,
            estimate,
            ec_efficiency=config.ec_efficiency,
            clock_rate=config.transmitter.clock_rate,
            signal_class=signal.name,
        )
        tally = stats.tally(signal.name)
        qber_time, qber_time_ci = self._estimate(tally.errors_z, tally.sifted_z)
        qber_phase, qber_phase_ci = self._estimate(tally.errors_x, tally.sifted_x)
        return {
            **self._rates(key),
            "qber_time": qber_time,
            "qber_time_ci": qber_time_ci,
            "qber_phase": qber_phase,
            "qber_phase_ci": qber_phase_ci,
            "y0": estimate.y0,
            "y1_lower": estimate.y1_lower,
            "e1_upper": estimate.e1_upper,
        }

    def _cow(self, config: ExperimentConfig, stats: SiftedStats) -> dict:
        total = stats.total()
        if total.sifted <= 0:
            raise EstimationException(
                f"No sifted COW bits at {config.channel.length_km:g} km"
            )
        visibility = max(0.0, estimate_visibility(stats.monitor_max, stats.monitor_min))
        lower, upper = self._proportion(
            stats.monitor_min, stats.monitor_max + stats.monitor_min
        ).interval
        qber, qber_ci = self._estimate(total.errors, total.sifted)

        key = key_rate_cow(
            sifted_rate=total.sifted / stats.duration,
            qber_time=qber,
            visibility=visibility,
            mu=config.transmitter.signal_class.mean_photons,
            transmission=config.channel.fibre_transmission,
            ec_efficiency=config.ec_efficiency,
            bound=eve_bound_for(config.eve_bound),
            raw_rate=total.detections / stats.duration,
        )
        return {
            **self._rates(key),
            "qber_time": qber,
            "qber_time_ci": qber_ci,
            "qber_phase": key.qber_phase,
            "qber_phase_ci": (lower, upper),
            "visibility": visibility,
            "visibility_ci": (max(0.0, 1.0 - 2.0 * upper), 1.0 - 2.0 * lower),
        }

    def _dps(self, config: ExperimentConfig, stats: SiftedStats) -> dict:
        total = stats.total()
        if total.sifted <= 0:
            raise EstimationException(
                f"No sifted DPS bits at {config.channel.length_km:g} km"
            )
        qber, (lower, upper) = self._estimate(total.errors, total.sifted)

        key = key_rate_dps(
            sifted_rate=total.sifted / stats.duration,
            qber=qber,
            mu=config.transmitter.signal_class.mean_photons,
            transmission=config.channel.fibre_transmission,
            ec_efficiency=config.ec_efficiency,
            bound=eve_bound_for(config.eve_bound),
            raw_rate=total.events / stats.duration,
        )
        return {
            **self._rates(key),
            "qber_phase": qber,
            "qber_phase_ci": (lower, upper),
            "visibility": key.visibility,
            "visibility_ci": (max(0.0, 1.0 - 2.0 * upper), 1.0 - 2.0 * lower),
        }


def _gain(stats: SiftedStats, name: str) -> float:
    tally = stats.tally(name)
    if tally.frames_sent <= 0:
        raise EstimationException(f"No frames sent in intensity class '{name}'")
    return tally.detections / tally.frames_sent


def _bb84_roles(config: ExperimentConfig):
    """(signal, decoy, vacuum) classes ranked by intensity."""

    ranked = config.transmitter.ranked_classes()
    return ranked[0], ranked[1], ranked[-1]
