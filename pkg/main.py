import logging

import uvicorn
from dotenv import load_dotenv
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from api.endpoints import dynamics, examples, genfun, lie, maps, sequences
from exceptions import NambuError

load_dotenv()

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Nambu Canonical Transformations API",
    description="Verification of canonical transformations, generating functions and flows in three-dimensional Nambu mechanics",
    version="0.1.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(maps.router)
app.include_router(genfun.router)
app.include_router(lie.router)
app.include_router(sequences.router)
app.include_router(dynamics.router)
app.include_router(examples.router)


@app.exception_handler(NambuError)
async def nambu_error_handler(request: Request, exc: NambuError):
    logger.warning(f"{request.url.path}: {type(exc).__name__}: {exc}")
    return JSONResponse(status_code=400, content={"detail": str(exc), "error": type(exc).__name__})


@app.exception_handler(ValueError)
async def value_error_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/")
def read_root():
    return {
        "message": "Nambu canonical transformation toolkit",
        "version": "0.1.0",
        "docs": "/docs"
    }


@app.get("/health")
def health_check():
    return {"status": "healthy"}

if __name__ == "__main__":
    PORT = 8000
    uvicorn.run("main:app", host="0.0.0.0", port=PORT, reload=True)
