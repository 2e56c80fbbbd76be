import math

import numpy as np

from app.domain.entities.channel_params import ChannelParams
from app.domain.entities.pulse_frame import PulseFrame


def apply_channel(frame: PulseFrame, ch: ChannelParams) -> PulseFrame:
    """Attenuate every bin by the link transmission; phases are untouched."""

    transmission = ch.transmission
    if transmission == 1.0:
        return frame
    return frame.with_amplitudes(frame.amplitudes() * math.sqrt(transmission))


def attenuate(amplitudes: np.ndarray, transmission: float) -> np.ndarray:
    """Batch form of apply_channel on raw amplitude arrays."""

    return amplitudes * math.sqrt(transmission)
