import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from app.core.exceptions import DecoyEstimationException, DomainValueException
from app.domain.entities.decoy_estimate import DecoyEstimate

logger = logging.getLogger(__name__)


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


def decoy_estimate(
    q_signal: float,
    q_decoy: float,
    e_decoy: float,
    q_vacuum: float,
    mu: float,
    nu: float,
    omega: float = 0.0,
) -> DecoyEstimate:
    """Vacuum + weak decoy bounds on single-photon yield and error rate.

    ``q_*`` are the class gains, ``e_decoy`` the decoy-class error rate, and
    ``mu > nu > omega >= 0`` the class intensities. A weak (nonzero) vacuum class
    brackets the background yield: the upper value enters the yield bound, the
    lower value the error bound.
    """

    if not mu > nu > 0:
        raise DomainValueException(f"Decoy analysis needs mu > nu > 0, got {mu}, {nu}")
    if not 0 <= omega < nu:
        raise DomainValueException(f"Vacuum intensity must lie in [0, nu), got {omega}")
    for name, gain in (("signal", q_signal), ("decoy", q_decoy), ("vacuum", q_vacuum)):
        if not 0.0 <= gain <= 1.0:
            raise DomainValueException(f"Gain of the {name} class must lie in [0, 1]")

    y0_upper = _clamp(q_vacuum * math.exp(omega))
    if omega == 0:
        y0_lower = y0_upper
    else:
        y0_lower = _clamp(
            (nu * q_vacuum * math.exp(omega) - omega * q_decoy * math.exp(nu)) / (nu - omega)
        )

    y1_lower = (mu / (mu * nu - nu * nu)) * (
        q_decoy * math.exp(nu)
        - q_signal * math.exp(mu) * (nu * nu) / (mu * mu)
        - ((mu * mu - nu * nu) / (mu * mu)) * y0_upper
    )
    if not y1_lower > 0:
        raise DecoyEstimationException(
            f"Decoy estimation failed: single-photon yield bound {y1_lower:.3e} is not positive"
        )
    y1_lower = min(y1_lower, 1.0)

    e1_upper = (e_decoy * q_decoy * math.exp(nu) - 0.5 * y0_lower) / (y1_lower * nu)
    if e1_upper < 0:
        logger.warning("Single-photon error bound %.3e clamped to 0", e1_upper)
    e1_upper = _clamp(e1_upper)

    return DecoyEstimate(
        y0=y0_lower,
        y0_upper=y0_upper,
        y1_lower=y1_lower,
        e1_upper=e1_upper,
        q1_lower=y1_lower * mu * math.exp(-mu),
        mu=mu,
    )


@dataclass(frozen=True)
class BeamsplitterChannel:
    """Closed-form gains and errors of weak coherent pulses over a lossy channel.

    ``transmittance`` folds channel, receiver and detector efficiency together;
    ``misalignment`` is the probability a signal photon lands on the wrong outcome.
    """

    transmittance: float
    background_yield: float = 0.0
    misalignment: float = 0.0

    def __post_init__(self):
        for name in ("transmittance", "background_yield", "misalignment"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainValueException(f"{name} must lie in [0, 1], got {value}")

    def gain(self, mu: float) -> float:
        return self.background_yield + 1.0 - math.exp(-self.transmittance * mu)

    def error_rate(self, mu: float) -> float:
        gain = self.gain(mu)
        if gain == 0:
            return 0.0
        signal = 1.0 - math.exp(-self.transmittance * mu)
        return (0.5 * self.background_yield + self.misalignment * signal) / gain

    @property
    def single_photon_yield(self) -> float:
        return 1.0 - (1.0 - self.background_yield) * (1.0 - self.transmittance)

    @property
    def single_photon_error(self) -> float:
        return (
            0.5 * self.background_yield + self.misalignment * self.transmittance
        ) / self.single_photon_yield


def beamsplitter_gains(
    transmittance: float,
    background_yield: float,
    misalignment: float,
    intensities: Sequence[float],
) -> List[Tuple[float, float]]:
    """``(gain, error_rate)`` per intensity for a beamsplitter channel."""

    channel = BeamsplitterChannel(transmittance, background_yield, misalignment)
    return [(channel.gain(mu), channel.error_rate(mu)) for mu in intensities]
