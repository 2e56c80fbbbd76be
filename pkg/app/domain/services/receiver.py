import math
from typing import Tuple

import numpy as np

from app.core.exceptions import ConfigurationException, DomainValueException
from app.domain.entities.pulse_frame import PulseFrame
from app.domain.entities.receiver_params import HARDWARE_DELAY_STEP, MAX_DELAY_STEPS

DEFAULT_DELAY_TOLERANCE = 50e-12


def resolve_delay_bins(delay_steps: int, bin_separation: float, tolerance: float) -> int:
    """Number of bins the hardware delay setting spans.

    Raises when ``delay_steps`` x 300 ps is not within ``tolerance`` of a whole number
    of bins.
    """

    delay = delay_steps * HARDWARE_DELAY_STEP
    delay_bins = int(round(delay / bin_separation))
    if abs(delay_bins * bin_separation - delay) > tolerance:
        raise ConfigurationException(
            f"AMZI delay {delay * 1e12:.0f} ps does not match a whole number of "
            f"{bin_separation * 1e12:.0f} ps bins"
        )
    return delay_bins


def check_delay_grid(
    delay_bins: int, bin_separation: float, tolerance: float = DEFAULT_DELAY_TOLERANCE
) -> int:
    """Hardware step count realising ``delay_bins``, raising when off the 300 ps grid."""

    if delay_bins < 0:
        raise ConfigurationException("AMZI delay cannot be negative")
    delay = delay_bins * bin_separation
    steps = int(round(delay / HARDWARE_DELAY_STEP))
    if steps > MAX_DELAY_STEPS or abs(steps * HARDWARE_DELAY_STEP - delay) > tolerance:
        raise ConfigurationException(
            f"AMZI delay of {delay_bins} bins ({delay * 1e12:.0f} ps) is off the "
            "0-2.1 ns / 300 ps delay grid"
        )
    return steps


def route_tbs(frame: PulseFrame, monitor_fraction: float) -> Tuple[PulseFrame, PulseFrame]:
    """Split a frame at the tunable beamsplitter.

    Returns ``(key_path_frame, amzi_frame)``; ``monitor_fraction`` is the power fraction
    sent to the AMZI.
    """

    key, amzi = route_tbs_batch(frame.amplitudes(), monitor_fraction)
    return frame.with_amplitudes(key), frame.with_amplitudes(amzi)


def route_tbs_batch(amplitudes: np.ndarray, monitor_fraction: float):
    if not 0.0 <= monitor_fraction <= 1.0:
        raise DomainValueException("TBS fraction must lie in [0, 1]")
    return (
        amplitudes * math.sqrt(1.0 - monitor_fraction),
        amplitudes * math.sqrt(monitor_fraction),
    )


def path_loss(amplitudes: np.ndarray, loss_db: float) -> np.ndarray:
    """Apply a fixed insertion loss to amplitudes."""

    if loss_db == 0:
        return amplitudes
    return amplitudes * 10.0 ** (-loss_db / 20.0)


def arm_transmissions(imbalance_db: float) -> Tuple[float, float]:
    """Amplitude transmissions (short arm, long arm) for a residual loss imbalance."""

    if imbalance_db < 0:
        raise DomainValueException("Arm imbalance cannot be negative")
    return 1.0, 10.0 ** (-imbalance_db / 20.0)


def amzi_transform(
    frame: PulseFrame,
    delay_bins: int,
    phase: float,
    imbalance_db: float = 0.0,
    tolerance: float = DEFAULT_DELAY_TOLERANCE,
) -> np.ndarray:
    """Output amplitudes of the AMZI, shape ``(2 ports, n_bins + delay_bins slots)``.

    Port 0 is constructive for in-phase neighbours, port 1 for neighbours at π.
    """

    check_delay_grid(delay_bins, frame.bin_separation, tolerance)
    return amzi_transform_batch(frame.amplitudes()[None, :], delay_bins, phase, imbalance_db)[0]


def amzi_transform_batch(
    amplitudes: np.ndarray, delay_bins: int, phase: float, imbalance_db: float = 0.0
) -> np.ndarray:
    """Vectorized AMZI over ``amplitudes[frames, bins]`` -> ``[frames, 2, slots]``.

    a±(s) = (α_s·g1 ± e^{iφ}·α_{s−d}·g2) / 2 with out-of-range α = 0.
    """

    g1, g2 = arm_transmissions(imbalance_db)
    frames, bins = amplitudes.shape
    slots = bins + delay_bins

    prompt = np.zeros((frames, slots), dtype=np.complex128)
    delayed = np.zeros((frames, slots), dtype=np.complex128)
    prompt[:, :bins] = amplitudes * g1
    delayed[:, delay_bins:] = amplitudes * (g2 * np.exp(1j * phase))

    out = np.empty((frames, 2, slots), dtype=np.complex128)
    out[:, 0, :] = (prompt + delayed) / 2.0
    out[:, 1, :] = (prompt - delayed) / 2.0
    return out


def amzi_mean_photons(
    amplitudes: np.ndarray,
    delay_bins: int,
    phase: float,
    imbalance_db: float = 0.0,
    coherence: float = 1.0,
) -> np.ndarray:
    """Expected AMZI output mean photons ``[frames, 2, slots]``.

    ``coherence`` scales the interference term, e.g. exp(-σ²/2) for Gaussian
    relative phase noise of the interfering bins.
    """

    g1, g2 = arm_transmissions(imbalance_db)
    frames, bins = amplitudes.shape
    slots = bins + delay_bins

    prompt = np.zeros((frames, slots), dtype=np.complex128)
    delayed = np.zeros((frames, slots), dtype=np.complex128)
    prompt[:, :bins] = amplitudes * g1
    delayed[:, delay_bins:] = amplitudes * (g2 * np.exp(1j * phase))

    incoherent = (_power(prompt) + _power(delayed)) / 4.0
    fringe = coherence * np.real(prompt * np.conj(delayed)) / 2.0

    out = np.empty((frames, 2, slots), dtype=np.float64)
    out[:, 0, :] = incoherent + fringe
    out[:, 1, :] = np.maximum(incoherent - fringe, 0.0)
    return out


def _power(amplitudes: np.ndarray) -> np.ndarray:
    # re² + im², exact for real amplitudes
    return np.real(amplitudes * np.conj(amplitudes))
