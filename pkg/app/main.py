from fastapi import FastAPI

from app.api.routes import experiment_routes, preset_routes
from app.core.config import settings
from app.core.logging_config import configure_logging

app = FastAPI(
    title="QKD Bench",
    description="Simulator for chip-to-chip BB84, COW and DPS quantum key distribution links",
    version="1.0.0",
)

# Include API routes
app.include_router(preset_routes.router, prefix="/api/v1")
app.include_router(experiment_routes.router, prefix="/api/v1")


@app.on_event("startup")
def startup_event():
    """Configure logging on startup."""
    configure_logging(settings.log_level)


@app.get("/health")
def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "service": "qkdbench"}
