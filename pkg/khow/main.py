"""
HTTP surface of the toolkit. Routes mirror the CLI subcommands.
"""
import time

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.middleware.base import BaseHTTPMiddleware

from .config import Settings, settings
from .dependencies import get_settings
from .exceptions import KhowError
from .logging_config import get_logger
from .routers import equivalence as equivalence_router
from .routers import harness as harness_router
from .routers import logic as logic_router
from .routers import transforms as transforms_router

logger = get_logger(__name__)


class RequestLoggingMiddleware(BaseHTTPMiddleware):

    async def dispatch(self, request, call_next):
        start_time = time.time()
        response = await call_next(request)
        process_time = time.time() - start_time
        logger.info(
            f'{request.method} {request.url.path} - {response.status_code} - {process_time:.3f}s',
            extra={'command': request.url.path.lstrip('/')},
        )
        return response


app = FastAPI(
    title=settings.API_TITLE,
    description=settings.API_DESCRIPTION,
    version=settings.API_VERSION,
    docs_url=settings.DOCS_URL,
    redoc_url=settings.REDOC_URL,
    openapi_url=settings.OPENAPI_URL,
)

app.add_middleware(RequestLoggingMiddleware)


# Global exception handlers
@app.exception_handler(KhowError)
async def khow_exception_handler(request: Request, exc: KhowError):
    error = type(exc).__name__
    logger.warning(
        f'{error} ({exc.status_code}): {exc.message}',
        extra={'command': request.url.path.lstrip('/')},
    )
    return JSONResponse(
        status_code=exc.status_code,
        content={'detail': exc.message},
        headers={'X-Khow-Error': error},
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    logger.error(
        f'Unhandled {type(exc).__name__} on {request.url.path}: {exc}',
        exc_info=True,
        extra={'command': request.url.path.lstrip('/')},
    )
    return JSONResponse(
        status_code=500,
        content={'detail': 'Internal server error'}
    )


@app.on_event('startup')
def on_startup():
    logger.info(f'Starting application in {settings.ENV} mode')


@app.get('/health')
def health(cfg: Settings = Depends(get_settings)):
    return {'status': 'ok', 'env': cfg.ENV, 'version': cfg.API_VERSION}


app.include_router(logic_router.router, prefix=settings.API_PREFIX)
app.include_router(equivalence_router.router, prefix=settings.API_PREFIX)
app.include_router(transforms_router.router, prefix=settings.API_PREFIX)
app.include_router(harness_router.router, prefix=settings.API_PREFIX)
