from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from app.core.enums import Basis, CowSymbol
from app.core.exceptions import DomainValueException
from app.domain.value_objects.complex_amplitude import ComplexAmplitude


@dataclass(frozen=True)
class Bb84State:
    """Encoded BB84 symbol."""

    bit: int
    basis: Basis

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise DomainValueException(f"BB84 bit must be 0 or 1, got {self.bit}")


FrameTruth = Union[Bb84State, CowSymbol, Tuple[int, ...]]


@dataclass(frozen=True)
class PulseFrame:
    """Ordered time bins emitted for one protocol symbol (or one DPS train)."""

    bins: Tuple[ComplexAmplitude, ...]
    bin_separation: float
    frame_period: float
    global_phase_randomized: bool = False
    intensity_class: str = "signal"
    truth: Optional[FrameTruth] = None
    reference_phase: float = 0.0

    def __post_init__(self):
        """Validate frame timing."""

        object.__setattr__(self, "bins", tuple(self.bins))

        if len(self.bins) < 1:
            raise DomainValueException("A pulse frame needs at least one bin")
        if self.bin_separation <= 0:
            raise DomainValueException("Bin separation must be positive")
        if self.frame_period < len(self.bins) * self.bin_separation * (1 - 1e-12):
            raise DomainValueException(
                f"Frame period {self.frame_period:.4g}s shorter than "
                f"{len(self.bins)} bins of {self.bin_separation:.4g}s"
            )

    @property
    def mean_photons(self) -> Tuple[float, ...]:
        return tuple(b.mean_photons for b in self.bins)

    @property
    def total_mean_photons(self) -> float:
        return float(sum(self.mean_photons))

    def amplitudes(self) -> np.ndarray:
        """Bins as a complex numpy vector."""

        return np.array([b.to_complex() for b in self.bins], dtype=np.complex128)

    def with_amplitudes(self, values: Sequence[complex]) -> "PulseFrame":
        """Copy of the frame carrying new bin amplitudes."""

        return replace(
            self, bins=tuple(ComplexAmplitude.from_complex(complex(v)) for v in values)
        )

    def relative_phases(self) -> np.ndarray:
        """Phase difference between each bin and its predecessor, in [0, 2π)."""

        amps = self.amplitudes()
        return np.mod(np.angle(amps[1:] * np.conj(amps[:-1])), 2 * np.pi)
