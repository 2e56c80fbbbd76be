from dataclasses import dataclass, replace

from app.core.exceptions import ConfigurationException
from app.domain.services.primitives import db_to_transmission


@dataclass(frozen=True)
class ChannelParams:
    """Emulated fibre link (variable attenuator)."""

    length_km: float = 0.0
    atten_db_per_km: float = 0.2
    excess_loss_db: float = 0.0

    def __post_init__(self):
        if self.length_km < 0:
            raise ConfigurationException("Channel length cannot be negative")
        if self.atten_db_per_km < 0:
            raise ConfigurationException("Attenuation cannot be negative")
        if self.excess_loss_db < 0:
            raise ConfigurationException("Excess loss cannot be negative")

    @property
    def total_loss_db(self) -> float:
        return self.length_km * self.atten_db_per_km + self.excess_loss_db

    @property
    def transmission(self) -> float:
        return db_to_transmission(self.total_loss_db)

    @property
    def fibre_transmission(self) -> float:
        """Transmission of the fibre length alone, excluding excess loss."""

        return db_to_transmission(self.length_km * self.atten_db_per_km)

    def with_length(self, length_km: float) -> "ChannelParams":
        return replace(self, length_km=length_km)
