import math
from typing import Optional, Sequence

import numpy as np

from app.core.enums import Basis, CowSymbol
from app.core.exceptions import DomainValueException
from app.domain.entities.pulse_frame import Bb84State, PulseFrame
from app.domain.entities.transmitter_params import TransmitterParams
from app.domain.value_objects.complex_amplitude import ComplexAmplitude

TWO_PI = 2.0 * math.pi
COW_SYMBOLS = (CowSymbol.BIT0, CowSymbol.BIT1, CowSymbol.DECOY)


class TransmitterService:
    """Encodes protocol symbols into pulse frames the way the transmitter chip does."""

    def __init__(self, params: TransmitterParams):
        self.params = params

    def encode_bb84_frame(
        self,
        bit: int,
        basis: Basis,
        intensity_class: str,
        rng: Optional[np.random.Generator] = None,
    ) -> PulseFrame:
        """Time-bin BB84 state; X-basis bins carry half the class intensity each."""

        state = Bb84State(bit, Basis(basis))
        mu = self.params.class_by_name(intensity_class).mean_photons

        if state.basis == Basis.Z:
            amps = [math.sqrt(mu), 0.0] if bit == 0 else [0.0, math.sqrt(mu)]
        else:
            half = math.sqrt(mu / 2.0)
            amps = [half, half] if bit == 0 else [half, -half]

        amps = np.asarray(amps, dtype=np.complex128)
        phase = self._global_phase(rng)
        if phase:
            amps = amps * np.exp(1j * phase)

        return PulseFrame(
            bins=tuple(ComplexAmplitude.from_complex(a) for a in amps),
            bin_separation=self.params.bin_separation,
            frame_period=self.params.frame_period,
            global_phase_randomized=self.params.phase_randomize,
            intensity_class=intensity_class,
            truth=state,
            reference_phase=phase,
        )

    def encode_cow_frame(
        self, symbol: CowSymbol, rng: Optional[np.random.Generator] = None
    ) -> PulseFrame:
        """COW pulse pair on the shared (phase 0) reference; never phase randomized."""

        symbol = CowSymbol(symbol)
        signal = self.params.signal_class
        root = math.sqrt(signal.mean_photons)
        amps = {
            CowSymbol.BIT0: (root, 0.0),
            CowSymbol.BIT1: (0.0, root),
            CowSymbol.DECOY: (root, root),
        }[symbol]

        return PulseFrame(
            bins=tuple(ComplexAmplitude(a) for a in amps),
            bin_separation=self.params.bin_separation,
            frame_period=self.params.frame_period,
            global_phase_randomized=False,
            intensity_class=signal.name,
            truth=symbol,
        )

    def encode_dps_train(
        self, bits: Sequence[int], rng: Optional[np.random.Generator] = None
    ) -> PulseFrame:
        """Coherent train of len(bits)+1 pulses; bit i is the phase step from pulse i to i+1."""

        bits = tuple(int(b) for b in bits)
        if not bits:
            raise DomainValueException("A DPS train needs at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise DomainValueException("DPS bits must be 0 or 1")

        signal = self.params.signal_class
        phases = np.concatenate(([0.0], np.cumsum(np.pi * np.asarray(bits, dtype=float))))
        reference = self._global_phase(rng)
        amps = math.sqrt(signal.mean_photons) * np.exp(1j * (phases + reference))
        bin_separation = 1.0 / self.params.clock_rate

        return PulseFrame(
            bins=tuple(ComplexAmplitude.from_complex(a) for a in amps),
            bin_separation=bin_separation,
            frame_period=len(amps) * bin_separation,
            global_phase_randomized=self.params.phase_randomize,
            intensity_class=signal.name,
            truth=bits,
            reference_phase=reference,
        )

    def _global_phase(self, rng: Optional[np.random.Generator]) -> float:
        if not self.params.phase_randomize:
            return 0.0
        if rng is None:
            raise DomainValueException("Phase randomization needs a random generator")
        return float(rng.uniform(0.0, TWO_PI))

    def draw_intensity_classes(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """I.i.d. intensity-class indices following the configured probabilities."""

        probabilities = np.asarray(self.params.class_probabilities, dtype=np.float64)
        edges = np.cumsum(probabilities)
        edges[-1] = 1.0
        return np.searchsorted(edges, rng.random(size), side="right").astype(np.int8)


def apply_extinction(frame: PulseFrame, extinction_db: float) -> PulseFrame:
    """Leak light into nominally empty bins at the finite extinction ratio."""

    if not extinction_db > 0:
        raise DomainValueException("Extinction ratio must be positive")
    if math.isinf(extinction_db):
        return frame

    amps = frame.amplitudes()
    means = np.abs(amps) ** 2
    peak = float(means.max())
    empty = means == 0.0
    if peak == 0.0 or not empty.any():
        return frame

    leak = math.sqrt(peak * 10.0 ** (-extinction_db / 10.0))
    amps = np.where(empty, leak * np.exp(1j * frame.reference_phase), amps)
    return frame.with_amplitudes(amps)


def extinction_leak_fraction(extinction_db: float) -> float:
    """Mean photons leaked into an empty bin per photon of the occupied bin."""

    if math.isinf(extinction_db):
        return 0.0
    return 10.0 ** (-extinction_db / 10.0)


def encode_bb84_batch(
    params: TransmitterParams, rng: np.random.Generator, size: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized BB84 emission with extinction leakage.

    Returns ``(amplitudes[size, 2], bits, bases, class_idx)``; ``bases`` is 0 for Z and
    1 for X.
    """

    service = TransmitterService(params)
    class_idx = service.draw_intensity_classes(rng, size)
    bases = (rng.random(size) >= params.z_basis_probability).astype(np.int8)
    bits = (rng.random(size) < 0.5).astype(np.int8)

    mu = np.asarray([c.mean_photons for c in params.intensity_classes])[class_idx]
    root = np.sqrt(mu)
    leak = root * math.sqrt(extinction_leak_fraction(params.extinction_db))

    amps = np.empty((size, 2), dtype=np.complex128)
    is_z = bases == 0
    amps[:, 0] = np.where(is_z, np.where(bits == 0, root, leak), root / math.sqrt(2.0))
    amps[:, 1] = np.where(
        is_z,
        np.where(bits == 0, leak, root),
        np.where(bits == 0, 1.0, -1.0) * root / math.sqrt(2.0),
    )

    if params.phase_noise_sigma > 0:
        amps[:, 1] *= np.exp(1j * rng.normal(0.0, params.phase_noise_sigma, size))
    if params.phase_randomize:
        amps *= np.exp(1j * rng.uniform(0.0, TWO_PI, size))[:, None]

    return amps, bits, bases, class_idx


def encode_cow_batch(
    params: TransmitterParams, rng: np.random.Generator, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized COW emission: ``(amplitudes[size, 2], symbols)``.

    Symbols are 0 (bit0), 1 (bit1) and 2 (decoy); bit0 and bit1 share the non-decoy
    probability equally.
    """

    decoy = rng.random(size) < params.cow_decoy_probability
    bit = (rng.random(size) < 0.5).astype(np.int8)
    symbols = np.where(decoy, 2, bit).astype(np.int8)

    root = math.sqrt(params.signal_class.mean_photons)
    leak = root * math.sqrt(extinction_leak_fraction(params.extinction_db))
    amps = np.empty((size, 2), dtype=np.complex128)
    amps[:, 0] = np.where(symbols == 1, leak, root)
    amps[:, 1] = np.where(symbols == 0, leak, root)

    if params.phase_noise_sigma > 0:
        walk = np.cumsum(rng.normal(0.0, params.phase_noise_sigma, 2 * size))
        amps *= np.exp(1j * walk.reshape(size, 2))

    return amps, symbols


def encode_dps_batch(
    params: TransmitterParams, rng: np.random.Generator, trains: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized DPS emission: ``(amplitudes[trains, L+1], bits[trains, L])``."""

    length = params.dps_train_length
    bits = (rng.random((trains, length)) < 0.5).astype(np.int8)
    phases = np.zeros((trains, length + 1))
    phases[:, 1:] = np.pi * np.cumsum(bits, axis=1)

    if params.phase_noise_sigma > 0:
        phases[:, 1:] += np.cumsum(
            rng.normal(0.0, params.phase_noise_sigma, (trains, length)), axis=1
        )
    if params.phase_randomize:
        phases += rng.uniform(0.0, TWO_PI, trains)[:, None]

    amps = math.sqrt(params.signal_class.mean_photons) * np.exp(1j * phases)
    return amps, bits
