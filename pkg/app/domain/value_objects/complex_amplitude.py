import cmath
import math
from dataclasses import dataclass

from app.core.exceptions import DomainValueException


@dataclass(frozen=True)
class ComplexAmplitude:
    """Coherent-state field amplitude of one time bin.

    The mean photon number of the bin is ``re**2 + im**2``.
    """

    re: float
    im: float = 0.0

    def __post_init__(self):
        """Coerce to float and reject non-finite components."""

        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))

        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainValueException(
                f"Amplitude must be finite, got ({self.re}, {self.im})"
            )

    @property
    def mean_photons(self) -> float:
        return self.re * self.re + self.im * self.im

    @property
    def phase(self) -> float:
        return math.atan2(self.im, self.re)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def scale(self, factor: float) -> "ComplexAmplitude":
        """Scale the field by a real factor."""

        return ComplexAmplitude(self.re * factor, self.im * factor)

    def rotate(self, angle: float) -> "ComplexAmplitude":
        """Apply a phase shift of ``angle`` radians."""

        return ComplexAmplitude.from_complex(self.to_complex() * cmath.exp(1j * angle))

    def __str__(self) -> str:
        return f"({self.re:.6g}{self.im:+.6g}j)"

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexAmplitude":
        return cls(value.real, value.imag)

    @classmethod
    def from_polar(cls, mean_photons: float, phase: float = 0.0) -> "ComplexAmplitude":
        """Create an amplitude carrying ``mean_photons`` at the given phase."""

        if mean_photons < 0:
            raise DomainValueException("Mean photon number cannot be negative")
        return cls.from_complex(cmath.rect(math.sqrt(mean_photons), phase))

    @classmethod
    def vacuum(cls) -> "ComplexAmplitude":
        return cls(0.0, 0.0)
