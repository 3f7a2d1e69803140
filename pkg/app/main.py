import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from app.routers.designs import router as designs_router
from app.routers.experiments import router as experiments_router
from app.utils.config import LIBRARY_VERSION, RuntimeConfig

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    if not RuntimeConfig.is_testing():
        logging.basicConfig(level=RuntimeConfig.get_log_level())
    logger.info(f"Hybrid beamforming service {LIBRARY_VERSION} starting")
    yield


app = FastAPI(title="Hybrid beamforming", version=LIBRARY_VERSION, lifespan=lifespan)

# Include routers
app.include_router(designs_router, prefix="/api/v1", tags=["designs"])
app.include_router(experiments_router, prefix="/api/v1", tags=["experiments"])
