import math
from dataclasses import dataclass, field
from typing import Tuple

from app.core.exceptions import ConfigurationException


@dataclass(frozen=True)
class IntensityClass:
    """One emitted intensity level and how often it is chosen."""

    name: str
    mean_photons: float
    probability: float

    def __post_init__(self):
        if not self.name:
            raise ConfigurationException("Intensity class needs a name")
        if not math.isfinite(self.mean_photons) or self.mean_photons < 0:
            raise ConfigurationException(
                f"Intensity class '{self.name}' mean photons must be >= 0"
            )
        if not 0.0 <= self.probability <= 1.0:
            raise ConfigurationException(
                f"Intensity class '{self.name}' probability must lie in [0, 1]"
            )


def _table1_bb84_classes() -> Tuple[IntensityClass, ...]:
    return (
        IntensityClass("signal", 0.45, 0.8),
        IntensityClass("decoy", 0.1, 0.15),
        IntensityClass("vacuum", 5.0e-4, 0.05),
    )


@dataclass(frozen=True)
class TransmitterParams:
    """Transmitter chip settings.

    ``clock_rate`` is the state rate (frames per second) for BB84 and COW and the
    pulse rate for DPS. ``extinction_db`` may be ``math.inf`` for a perfect modulator.
    """

    clock_rate: float = 560e6
    bin_separation: float = 600e-12
    pulse_fwhm: float = 136e-12
    extinction_db: float = 30.0
    intensity_classes: Tuple[IntensityClass, ...] = field(
        default_factory=_table1_bb84_classes
    )
    phase_randomize: bool = True
    z_basis_probability: float = 0.5
    cow_decoy_probability: float = 0.05
    dps_train_length: int = 1024
    phase_noise_sigma: float = 0.0

    def __post_init__(self):
        """Validate transmitter settings."""

        object.__setattr__(self, "intensity_classes", tuple(self.intensity_classes))

        if self.clock_rate <= 0:
            raise ConfigurationException("Clock rate must be positive")
        if self.bin_separation <= 0:
            raise ConfigurationException("Bin separation must be positive")
        if self.pulse_fwhm < 0:
            raise ConfigurationException("Pulse FWHM cannot be negative")
        if not self.extinction_db > 0:
            raise ConfigurationException("Extinction ratio must be positive (dB)")
        if not self.intensity_classes:
            raise ConfigurationException("At least one intensity class is required")

        names = [c.name for c in self.intensity_classes]
        if len(set(names)) != len(names):
            raise ConfigurationException(f"Duplicate intensity class names: {names}")

        total = sum(c.probability for c in self.intensity_classes)
        if abs(total - 1.0) > 1e-9:
            raise ConfigurationException(
                f"Intensity class probabilities must sum to 1, got {total:.12g}"
            )
        if not 0.0 <= self.z_basis_probability <= 1.0:
            raise ConfigurationException("Z-basis probability must lie in [0, 1]")
        if not 0.0 <= self.cow_decoy_probability < 1.0:
            raise ConfigurationException("COW decoy probability must lie in [0, 1)")
        if self.dps_train_length < 1:
            raise ConfigurationException("DPS train length must be at least 1")
        if self.phase_noise_sigma < 0:
            raise ConfigurationException("Phase noise sigma cannot be negative")

    @property
    def frame_period(self) -> float:
        return 1.0 / self.clock_rate

    @property
    def class_names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.intensity_classes)

    @property
    def class_probabilities(self) -> Tuple[float, ...]:
        return tuple(c.probability for c in self.intensity_classes)

    def class_by_name(self, name: str) -> IntensityClass:
        """Look up an intensity class, raising on unknown names."""

        for intensity_class in self.intensity_classes:
            if intensity_class.name == name:
                return intensity_class
        raise ConfigurationException(f"Unknown intensity class '{name}'")

    def ranked_classes(self) -> Tuple[IntensityClass, ...]:
        """Classes ordered from strongest to weakest mean photon number."""

        return tuple(
            sorted(self.intensity_classes, key=lambda c: c.mean_photons, reverse=True)
        )

    @property
    def signal_class(self) -> IntensityClass:
        return self.ranked_classes()[0]
