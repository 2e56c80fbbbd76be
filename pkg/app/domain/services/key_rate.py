import logging
import math
from abc import ABC, abstractmethod
from typing import Optional

from app.core.enums import EveBoundKind
from app.core.exceptions import DomainValueException, EstimationException
from app.domain.entities.decoy_estimate import DecoyEstimate
from app.domain.entities.key_rate_report import KeyRateReport
from app.domain.entities.sifted_stats import SiftedStats
from app.domain.services.primitives import binary_entropy

logger = logging.getLogger(__name__)


class EveBound(ABC):
    """Information leaked to an eavesdropper per sifted bit."""

    label: str = ""

    @abstractmethod
    def eve_information(self, visibility: float, mu: float, transmission: float) -> float:
        pass


class OptimisticDefaultBound(EveBound):
    """h2((1 + eps) / 2) with eps = 2V - 1.

    Full leakage at V <= 1/2, none at V = 1. Ignores beam-splitting attacks.
    """

    label = EveBoundKind.OPTIMISTIC_DEFAULT.value

    def eve_information(self, visibility: float, mu: float, transmission: float) -> float:
        _check_fraction("visibility", visibility)
        eps = 2.0 * visibility - 1.0
        if eps <= 0:
            return 1.0
        return binary_entropy((1.0 + eps) / 2.0)


class CollectiveAttackBound(EveBound):
    """Collective-attack leakage for distributed-phase-reference protocols.

    Combines the beam-splitting term mu(1 - t) with the information obtained from
    the loss of coherence between successive pulses.
    """

    label = EveBoundKind.COLLECTIVE.value

    def eve_information(self, visibility: float, mu: float, transmission: float) -> float:
        _check_fraction("visibility", visibility)
        _check_fraction("transmission", transmission)
        if mu < 0:
            raise DomainValueException(f"Mean photon number cannot be negative, got {mu}")

        survive = math.exp(-mu * transmission)
        xi = (2.0 * visibility - 1.0) * survive - 2.0 * math.sqrt(
            visibility * (1.0 - visibility)
        ) * math.sqrt(-math.expm1(-2.0 * mu * transmission))
        xi = min(1.0, max(-1.0, xi))
        leak = mu * (1.0 - transmission) + (1.0 + survive) / 2.0 * binary_entropy(
            (1.0 + xi) / 2.0
        )
        return min(1.0, max(0.0, leak))


_BOUNDS = {
    EveBoundKind.OPTIMISTIC_DEFAULT: OptimisticDefaultBound,
    EveBoundKind.COLLECTIVE: CollectiveAttackBound,
}


def eve_bound_for(kind: EveBoundKind) -> EveBound:
    return _BOUNDS[EveBoundKind(kind)]()


def _check_fraction(name: str, value: float):
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise DomainValueException(f"{name} must lie in [0, 1], got {value}")


def bb84_secret_fraction(
    e_mu: float, q_mu: float, decoy: DecoyEstimate, ec_efficiency: float = 1.2
) -> float:
    """Secret bits per sifted signal bit, clamped at zero.

    Single-photon bits carry no key once their error bound reaches 1/2.
    """

    if q_mu <= 0:
        return 0.0
    single_photon = 0.0
    if decoy.e1_upper < 0.5:
        single_photon = min(1.0, decoy.q1_lower / q_mu) * (
            1.0 - binary_entropy(decoy.e1_upper)
        )
    return max(0.0, -ec_efficiency * binary_entropy(e_mu) + single_photon)


def key_rate_bb84(
    stats: SiftedStats,
    decoy: DecoyEstimate,
    ec_efficiency: float = 1.2,
    clock_rate: float = 560e6,
    signal_class: str = "signal",
) -> KeyRateReport:
    """BB84 rates from sifting statistics.

    Rates are clock x (count / frames sent), so they depend on fractions only.
    """

    total = stats.total()
    signal = stats.tally(signal_class)
    if total.frames_sent <= 0 or signal.frames_sent <= 0:
        raise EstimationException("BB84 key rate needs frames in the signal class")

    per_frame = clock_rate / total.frames_sent
    e_mu = signal.errors / signal.sifted if signal.sifted > 0 else 0.0
    q_mu = signal.detections / signal.frames_sent
    fraction = bb84_secret_fraction(e_mu, q_mu, decoy, ec_efficiency)

    return KeyRateReport(
        raw_rate=total.detections * per_frame,
        sifted_rate=total.sifted * per_frame,
        qber_time=_ratio(signal.errors_z, signal.sifted_z),
        qber_phase=_ratio(signal.errors_x, signal.sifted_x),
        visibility=None,
        secret_rate=signal.sifted * per_frame * fraction,
        ec_efficiency=ec_efficiency,
        secret_fraction=fraction,
        eve_bound="decoy",
    )


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    if denominator <= 0:
        return None
    return numerator / denominator


def _distributed_phase_rate(
    qber: float,
    visibility: float,
    mu: float,
    transmission: float,
    ec_efficiency: float,
    bound: EveBound,
) -> float:
    _check_fraction("qber", qber)
    leak = bound.eve_information(visibility, mu, transmission)
    fraction = 1.0 - ec_efficiency * binary_entropy(qber) - leak
    return min(1.0, max(0.0, fraction))


def key_rate_cow(
    sifted_rate: float,
    qber_time: float,
    visibility: float,
    mu: float,
    transmission: float,
    ec_efficiency: float = 1.2,
    bound: Optional[EveBound] = None,
    raw_rate: Optional[float] = None,
) -> KeyRateReport:
    """COW secret rate from the data-line QBER and the monitor visibility."""

    bound = bound or OptimisticDefaultBound()
    fraction = _distributed_phase_rate(
        qber_time, visibility, mu, transmission, ec_efficiency, bound
    )
    return KeyRateReport(
        raw_rate=sifted_rate if raw_rate is None else raw_rate,
        sifted_rate=sifted_rate,
        qber_time=qber_time,
        qber_phase=(1.0 - visibility) / 2.0,
        visibility=visibility,
        secret_rate=sifted_rate * fraction,
        ec_efficiency=ec_efficiency,
        secret_fraction=fraction,
        eve_bound=bound.label,
    )


def key_rate_dps(
    sifted_rate: float,
    qber: float,
    mu: float,
    transmission: float,
    ec_efficiency: float = 1.2,
    bound: Optional[EveBound] = None,
    raw_rate: Optional[float] = None,
) -> KeyRateReport:
    """DPS secret rate; the visibility follows from the QBER as V = 1 - 2Q."""

    bound = bound or OptimisticDefaultBound()
    visibility = max(0.0, 1.0 - 2.0 * qber)
    fraction = _distributed_phase_rate(
        qber, visibility, mu, transmission, ec_efficiency, bound
    )
    return KeyRateReport(
        raw_rate=sifted_rate if raw_rate is None else raw_rate,
        sifted_rate=sifted_rate,
        qber_time=None,
        qber_phase=qber,
        visibility=visibility,
        secret_rate=sifted_rate * fraction,
        ec_efficiency=ec_efficiency,
        secret_fraction=fraction,
        eve_bound=bound.label,
    )
