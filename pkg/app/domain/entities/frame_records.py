from dataclasses import dataclass

import numpy as np

from app.core.exceptions import DomainValueException

COW_DECOY_CODE = 2


@dataclass(frozen=True)
class Bb84Records:
    """Alice's record of a block of BB84 frames.

    ``bases`` uses 0 for Z and 1 for X; ``classes`` indexes the transmitter's
    intensity classes. ``frame_offset`` is the global index of the first frame.
    """

    bits: np.ndarray
    bases: np.ndarray
    classes: np.ndarray
    frame_offset: int = 0

    def __post_init__(self):
        if not (self.bits.shape == self.bases.shape == self.classes.shape):
            raise DomainValueException("BB84 record columns must have equal length")

    def __len__(self) -> int:
        return int(self.bits.size)


@dataclass(frozen=True)
class CowRecords:
    """Alice's record of a block of COW frames: 0 bit0, 1 bit1, 2 decoy."""

    symbols: np.ndarray
    frame_offset: int = 0

    def __len__(self) -> int:
        return int(self.symbols.size)

    def occupied_bins(self) -> np.ndarray:
        """Bin occupancy of the block laid out as one continuous pulse train."""

        occupied = np.empty(2 * self.symbols.size, dtype=bool)
        occupied[0::2] = self.symbols != 1
        occupied[1::2] = self.symbols != 0
        return occupied


@dataclass(frozen=True)
class DpsRecords:
    """Alice's record of DPS trains; ``bits[t, k]`` is the phase step before pulse k+1."""

    bits: np.ndarray
    frame_offset: int = 0

    def __post_init__(self):
        if self.bits.ndim != 2 or self.bits.shape[1] < 1:
            raise DomainValueException("DPS records need a (trains, bits) array")

    def __len__(self) -> int:
        return int(self.bits.shape[0])

    @property
    def train_length(self) -> int:
        return int(self.bits.shape[1])
