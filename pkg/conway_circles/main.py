import logging
import os

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from conway_circles import __version__
from conway_circles.api.config import get_settings, reload_settings
from conway_circles.api.routes import checks, figures, polygons

app = FastAPI(title="Conway Circles", version=__version__)

_settings = get_settings()
logging.basicConfig(level=os.getenv("LOG_LEVEL", _settings.logging.level))
logging.getLogger(__name__).info(
    "Startup: tolerance rel=%g abs_floor=%g bit_generator=%s",
    _settings.tolerance.rel,
    _settings.tolerance.abs_floor,
    _settings.fuzz.bit_generator,
)

# CORS: open by default for local figure viewers (restrict via CORS_ORIGINS)
env_origins = os.environ.get("CORS_ORIGINS", "").strip()
allowed_origins = [o.strip() for o in env_origins.split(",") if o.strip()] if env_origins else ["*"]

app.add_middleware(
    CORSMiddleware,
    allow_origins=allowed_origins,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(polygons.router, prefix="/api")
app.include_router(checks.router, prefix="/api")
app.include_router(figures.router, prefix="/api")


@app.get("/health", tags=["system"])
async def health_check() -> dict:
    """Simple health check endpoint."""
    return {"status": "ok"}


@app.post("/admin/reload-config", tags=["system"])
async def admin_reload_config() -> dict:
    """Reload config.yml and clear cached settings (no auth for dev)."""
    settings = reload_settings()
    return {
        "reloaded": True,
        "tolerance_rel": settings.tolerance.rel,
        "tolerance_abs": settings.tolerance.abs_floor,
    }
