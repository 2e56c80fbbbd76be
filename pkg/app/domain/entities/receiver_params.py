import math
from dataclasses import dataclass
from typing import Optional

from app.core.exceptions import ConfigurationException

HARDWARE_DELAY_STEP = 300e-12
MAX_DELAY_STEPS = 7


@dataclass(frozen=True)
class ReceiverParams:
    """Passive decoding chip: tunable beamsplitter, L-BAL and AMZI.

    ``tbs_monitor_fraction`` is the fraction of light routed to the AMZI; the rest
    goes to the key (data-line) detector. ``slot_crosstalk_prob=None`` means the value
    is derived from detector jitter and pulse width.
    """

    tbs_monitor_fraction: float = 1.0
    amzi_delay_steps: int = 2
    amzi_phase: float = 0.0
    amzi_arm_imbalance_db: float = 0.0
    insertion_loss_db: float = 9.0
    key_path_loss_db: float = 4.0
    slot_window: float = 400e-12
    slot_crosstalk_prob: Optional[float] = None
    delay_tolerance: float = 50e-12

    def __post_init__(self):
        """Validate receiver settings."""

        if not 0.0 <= self.tbs_monitor_fraction <= 1.0:
            raise ConfigurationException("TBS monitor fraction must lie in [0, 1]")
        if not 0 <= self.amzi_delay_steps <= MAX_DELAY_STEPS:
            raise ConfigurationException(
                f"AMZI delay steps must lie in 0..{MAX_DELAY_STEPS}"
            )
        if not math.isfinite(self.amzi_phase):
            raise ConfigurationException("AMZI phase must be finite")
        if self.amzi_arm_imbalance_db < 0:
            raise ConfigurationException("Arm imbalance cannot be negative")
        if self.insertion_loss_db < 0 or self.key_path_loss_db < 0:
            raise ConfigurationException("Receiver losses cannot be negative")
        if self.slot_window <= 0:
            raise ConfigurationException("Slot window must be positive")
        if self.slot_crosstalk_prob is not None and not (
            0.0 <= self.slot_crosstalk_prob <= 1.0
        ):
            raise ConfigurationException("Slot crosstalk probability must lie in [0, 1]")
        if self.delay_tolerance < 0:
            raise ConfigurationException("Delay tolerance cannot be negative")

    @property
    def delay(self) -> float:
        return self.amzi_delay_steps * HARDWARE_DELAY_STEP


@dataclass(frozen=True)
class DetectorParams:
    """Single-photon detector (SNSPD) characteristics."""

    efficiency: float = 0.45
    dark_count_rate: float = 100.0
    jitter_sigma: float = 50e-12
    dead_time: float = 10e-9
    dark_count_prob_per_slot: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ConfigurationException("Detector efficiency must lie in [0, 1]")
        if self.dark_count_rate < 0:
            raise ConfigurationException("Dark count rate cannot be negative")
        if self.jitter_sigma < 0:
            raise ConfigurationException("Jitter cannot be negative")
        if self.dead_time < 0:
            raise ConfigurationException("Dead time cannot be negative")
        if self.dark_count_prob_per_slot is not None and not (
            0.0 <= self.dark_count_prob_per_slot <= 1.0
        ):
            raise ConfigurationException("Dark count probability must lie in [0, 1]")

    def dark_probability(self, slot_window: float) -> float:
        """Probability of a dark click inside one examined slot window."""

        if self.dark_count_prob_per_slot is not None:
            return self.dark_count_prob_per_slot
        return -math.expm1(-self.dark_count_rate * slot_window)
