from dataclasses import dataclass
from typing import Callable, Dict, List

from app.core.enums import EveBoundKind, Protocol
from app.core.exceptions import ConfigurationException
from app.domain.entities.channel_params import ChannelParams
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.receiver_params import DetectorParams, ReceiverParams
from app.domain.entities.transmitter_params import IntensityClass, TransmitterParams

REFERENCE_DISTANCE_KM = 20.0


@dataclass(frozen=True)
class Preset:
    """Named device configuration with the knobs that were fitted rather than measured."""

    name: str
    description: str
    fitted: Dict[str, float]
    factory: Callable[[], ExperimentConfig]

    def build(self) -> ExperimentConfig:
        return self.factory()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "fitted": dict(self.fitted),
            "config": self.build().to_dict(),
        }


def _detector() -> DetectorParams:
    return DetectorParams(
        efficiency=0.45, dark_count_rate=100.0, jitter_sigma=50e-12, dead_time=10e-9
    )


def bb84_table1() -> ExperimentConfig:
    return ExperimentConfig(
        protocol=Protocol.BB84,
        transmitter=TransmitterParams(
            clock_rate=560e6,
            bin_separation=600e-12,
            pulse_fwhm=136e-12,
            extinction_db=30.0,
            intensity_classes=(
                IntensityClass("signal", 0.45, 0.8),
                IntensityClass("decoy", 0.1, 0.15),
                IntensityClass("vacuum", 5.0e-4, 0.05),
            ),
            phase_randomize=True,
        ),
        channel=ChannelParams(
            length_km=REFERENCE_DISTANCE_KM, atten_db_per_km=0.2, excess_loss_db=4.9
        ),
        receiver=ReceiverParams(
            tbs_monitor_fraction=1.0,
            amzi_delay_steps=2,
            amzi_phase=0.124,
            insertion_loss_db=9.0,
            slot_crosstalk_prob=0.0214,
        ),
        detector=_detector(),
        ec_efficiency=1.2,
        eve_bound=EveBoundKind.OPTIMISTIC_DEFAULT,
        preset="bb84-table1",
    )


def cow_table1() -> ExperimentConfig:
    return ExperimentConfig(
        protocol=Protocol.COW,
        transmitter=TransmitterParams(
            clock_rate=860e6,
            bin_separation=580e-12,
            pulse_fwhm=136e-12,
            extinction_db=30.0,
            intensity_classes=(IntensityClass("signal", 0.28, 1.0),),
            phase_randomize=False,
            cow_decoy_probability=0.05,
        ),
        channel=ChannelParams(
            length_km=REFERENCE_DISTANCE_KM, atten_db_per_km=0.2, excess_loss_db=7.8
        ),
        receiver=ReceiverParams(
            tbs_monitor_fraction=0.1,
            amzi_delay_steps=2,
            amzi_phase=0.234,
            insertion_loss_db=9.0,
            key_path_loss_db=4.0,
            slot_crosstalk_prob=0.0254,
        ),
        detector=_detector(),
        ec_efficiency=1.2,
        eve_bound=EveBoundKind.COLLECTIVE,
        preset="cow-table1",
    )


def dps_table1() -> ExperimentConfig:
    return ExperimentConfig(
        protocol=Protocol.DPS,
        transmitter=TransmitterParams(
            clock_rate=1.76e9,
            pulse_fwhm=136e-12,
            extinction_db=30.0,
            intensity_classes=(IntensityClass("signal", 0.28, 1.0),),
            phase_randomize=True,
            dps_train_length=1024,
        ),
        channel=ChannelParams(
            length_km=REFERENCE_DISTANCE_KM, atten_db_per_km=0.2, excess_loss_db=6.0
        ),
        receiver=ReceiverParams(
            tbs_monitor_fraction=1.0,
            amzi_delay_steps=2,
            amzi_phase=0.188,
            insertion_loss_db=9.0,
        ),
        detector=_detector(),
        ec_efficiency=1.2,
        eve_bound=EveBoundKind.COLLECTIVE,
        preset="dps-table1",
    )


_PRESETS = {
    preset.name: preset
    for preset in (
        Preset(
            name="bb84-table1",
            description="BB84 with vacuum + weak decoy, 560 MHz, 20 km",
            fitted={
                "channel.excess_loss_db": 4.9,
                "receiver.slot_crosstalk_prob": 0.0214,
                "receiver.amzi_phase": 0.124,
            },
            factory=bb84_table1,
        ),
        Preset(
            name="cow-table1",
            description="COW with 90/10 monitor tap, 860 MHz, 20 km",
            fitted={
                "channel.excess_loss_db": 7.8,
                "receiver.slot_crosstalk_prob": 0.0254,
                "receiver.amzi_phase": 0.234,
            },
            factory=cow_table1,
        ),
        Preset(
            name="dps-table1",
            description="DPS with 1024-pulse trains, 1.76 GHz, 20 km",
            fitted={
                "channel.excess_loss_db": 6.0,
                "receiver.amzi_phase": 0.188,
            },
            factory=dps_table1,
        ),
    )
}


class PresetCatalog:
    """Lookup of the shipped device presets."""

    def names(self) -> List[str]:
        return sorted(_PRESETS)

    def get(self, name: str) -> Preset:
        try:
            return _PRESETS[name]
        except KeyError:
            raise ConfigurationException(
                f"Unknown preset '{name}'; available: {', '.join(self.names())}"
            ) from None

    def build(self, name: str) -> ExperimentConfig:
        return self.get(name).build()

    def all(self) -> List[Preset]:
        return [_PRESETS[name] for name in self.names()]
