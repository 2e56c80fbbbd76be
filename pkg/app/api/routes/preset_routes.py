from fastapi import APIRouter, HTTPException

from app.api.dependencies import PresetCatalogDep
from app.api.schemas.preset_schemas import PresetListResponse, PresetResponse
from app.core.exceptions import ConfigurationException

router = APIRouter(prefix="/presets", tags=["presets"])


@router.get("", response_model=PresetListResponse)
async def list_presets(catalog: PresetCatalogDep):
    """Lista os presets de dispositivo disponíveis."""

    return {
        "presets": [
            {"name": preset.name, "description": preset.description}
            for preset in catalog.all()
        ]
    }


@router.get("/{name}", response_model=PresetResponse)
async def get_preset(name: str, catalog: PresetCatalogDep):
    """Retorna um preset com seus parâmetros ajustados e a configuração completa."""

    try:
        return catalog.get(name).to_dict()
    except ConfigurationException as e:
        raise HTTPException(status_code=404, detail=e.message)
