from typing import Dict, List

from pydantic import BaseModel


class PresetSummary(BaseModel):
    """Schema for a preset in the catalog listing."""

    name: str
    description: str


class PresetResponse(BaseModel):
    """Schema for one preset with its fitted knobs and full configuration."""

    name: str
    description: str
    fitted: Dict[str, float]
    config: dict

    class Config:
        schema_extra = {
            "example": {
                "name": "bb84-table1",
                "description": "BB84 with vacuum + weak decoy, 560 MHz, 20 km",
                "fitted": {"channel.excess_loss_db": 4.9},
                "config": {"protocol": "bb84"},
            }
        }


class PresetListResponse(BaseModel):
    presets: List[PresetSummary]
