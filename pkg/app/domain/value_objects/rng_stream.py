from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from app.core.exceptions import DomainValueException

_MASK64 = (1 << 64) - 1
_BLOCK = 4  # Philox4x64 emits four 64-bit words per counter step


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream keyed by ``(seed, stream_id)``.

    Draw ``k`` of a stream is a pure function of ``(seed, stream_id, k)``, so batches
    can be generated by any worker in any order and still reproduce bit-for-bit.
    """

    seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASK64)
        if self.counter < 0:
            raise DomainValueException("Stream counter cannot be negative")

    @property
    def key(self) -> np.ndarray:
        return np.array([self.seed, self.stream_id], dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        """Numpy generator positioned at the start of this stream."""

        return np.random.Generator(np.random.Philox(key=self.key))


def rng_next(stream: RngStream) -> Tuple[float, RngStream]:
    """Return the next uniform draw in [0, 1) and the advanced stream."""

    block, offset = divmod(stream.counter, _BLOCK)
    bit_generator = np.random.Philox(key=stream.key, counter=block)
    value = np.random.Generator(bit_generator).random(offset + 1)[-1]
    return float(value), replace(stream, counter=stream.counter + 1)
