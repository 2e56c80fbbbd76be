from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Optional

from app.core.enums import EveBoundKind, Protocol, ReportFormat, SimulationMode
from app.core.exceptions import ConfigurationException
from app.domain.entities.channel_params import ChannelParams
from app.domain.entities.receiver_params import DetectorParams, ReceiverParams
from app.domain.entities.transmitter_params import IntensityClass, TransmitterParams
from app.domain.services.receiver import resolve_delay_bins

MIN_MONTECARLO_FRAMES = 10_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs: protocol, device models, statistics and outputs.

    For DPS ``frames`` counts emitted pulses (key-bit slots); the run simulates
    enough whole trains to cover them.
    """

    protocol: Protocol
    transmitter: TransmitterParams = field(default_factory=TransmitterParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    receiver: ReceiverParams = field(default_factory=ReceiverParams)
    detector: DetectorParams = field(default_factory=DetectorParams)
    frames: int = 1_000_000
    seed: int = 1
    mode: SimulationMode = SimulationMode.ANALYTIC
    ec_efficiency: float = 1.2
    eve_bound: EveBoundKind = EveBoundKind.OPTIMISTIC_DEFAULT
    output_dir: str = "results"
    report_format: ReportFormat = ReportFormat.CSV
    preset: Optional[str] = None

    def __post_init__(self):
        """Validate cross-component consistency."""

        object.__setattr__(self, "protocol", Protocol(self.protocol))
        object.__setattr__(self, "mode", SimulationMode(self.mode))
        object.__setattr__(self, "eve_bound", EveBoundKind(self.eve_bound))
        object.__setattr__(self, "report_format", ReportFormat(self.report_format))

        if self.frames < 1:
            raise ConfigurationException("Number of frames must be positive")
        if self.mode == SimulationMode.MONTECARLO and self.frames < MIN_MONTECARLO_FRAMES:
            raise ConfigurationException(
                f"Monte Carlo runs need at least {MIN_MONTECARLO_FRAMES} frames"
            )
        if self.seed < 0:
            raise ConfigurationException("Seed cannot be negative")
        if self.ec_efficiency < 1.0:
            raise ConfigurationException("Error-correction efficiency must be >= 1")

        classes = self.transmitter.intensity_classes
        if self.protocol == Protocol.BB84:
            if len(classes) < 3:
                raise ConfigurationException(
                    "BB84 needs signal, decoy and vacuum intensity classes"
                )
            ranked = self.transmitter.ranked_classes()
            if not ranked[0].mean_photons > ranked[1].mean_photons > 0:
                raise ConfigurationException("BB84 needs signal > decoy > 0 intensities")
        elif len(classes) != 1:
            raise ConfigurationException(
                f"{self.protocol.value.upper()} uses exactly one intensity class"
            )

        if self.protocol == Protocol.COW and (
            self.transmitter.frame_period < 2 * self.transmitter.bin_separation * (1 - 1e-9)
        ):
            raise ConfigurationException("COW frame period shorter than two bins")

        if self.receiver.slot_window > self.bin_separation * (1 + 1e-9):
            raise ConfigurationException(
                f"Slot window {self.receiver.slot_window:.4g}s wider than the "
                f"{self.bin_separation:.4g}s bin separation"
            )

        if self.receiver.tbs_monitor_fraction > 0:
            # raises when the AMZI delay is off the hardware grid
            delay_bins = self.delay_bins
            if self.protocol != Protocol.COW and delay_bins != 1:
                raise ConfigurationException(
                    f"{self.protocol.value.upper()} decoding needs a one-bin AMZI delay, "
                    f"got {delay_bins} bins"
                )
            if delay_bins < 1:
                raise ConfigurationException("The COW monitor needs a nonzero AMZI delay")
        elif self.protocol != Protocol.COW:
            raise ConfigurationException(
                f"{self.protocol.value.upper()} decoding needs light routed to the AMZI"
            )

    @property
    def bin_separation(self) -> float:
        """Bin spacing; DPS pulses are spaced by the clock period."""

        if self.protocol == Protocol.DPS:
            return 1.0 / self.transmitter.clock_rate
        return self.transmitter.bin_separation

    @property
    def delay_bins(self) -> int:
        return resolve_delay_bins(
            self.receiver.amzi_delay_steps,
            self.bin_separation,
            self.receiver.delay_tolerance,
        )

    def with_distance(self, length_km: float) -> "ExperimentConfig":
        return replace(self, channel=self.channel.with_length(length_km))

    def to_dict(self) -> dict:
        """Plain JSON-ready representation."""

        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        transmitter = dict(data.get("transmitter", {}))
        if "intensity_classes" in transmitter:
            transmitter["intensity_classes"] = tuple(
                IntensityClass(**c) if isinstance(c, dict) else IntensityClass(*c)
                for c in transmitter["intensity_classes"]
            )
        top = {
            k: v
            for k, v in data.items()
            if k not in ("transmitter", "channel", "receiver", "detector")
        }
        return cls(
            transmitter=TransmitterParams(**transmitter),
            channel=ChannelParams(**data.get("channel", {})),
            receiver=ReceiverParams(**data.get("receiver", {})),
            detector=DetectorParams(**data.get("detector", {})),
            **top,
        )


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
