"""
stt-kernel - FastAPI Main Application

An HTTP front door to the typechecker: typecheck sources, normalize
expressions, decide tope entailments, and keep checked environments in
sessions for repeated queries.
"""

import logging
import sys
from contextlib import asynccontextmanager
from typing import List, Sequence, Tuple

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from config import settings
from elaboration import GlobalEnv
from kernel.errors import KernelError
from models.schemas import (
    Diagnostic,
    NormalizeRequest,
    NormalizeResponse,
    RunReport,
    SessionState,
    SourceFile,
    TopeRequest,
    TopeResponse,
    TypecheckRequest,
)
from pipeline import TypecheckOrchestrator
from services.session_manager import session_manager
from topes import answer_query, parse_query

# Configure logging
logging.basicConfig(
    level=logging.DEBUG if settings.debug else logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler(sys.stdout)
    ]
)

logger = logging.getLogger(__name__)


# === Lifespan Events ===

@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan events for startup and shutdown."""
    logger.info(f"Starting {settings.app_name} v{settings.app_version} "
                f"(tope oracle bound: {settings.max_cube_vars} cube variables)")
    yield
    session_manager.clear()
    logger.info(f"Shutting down {settings.app_name}...")


# === FastAPI App ===

app = FastAPI(
    title=settings.app_name,
    description="""
    ## stt-kernel API

    Typechecker for simplicial type theory with shapes, topes and extension types.

    ### Workflow
    1. `POST /typecheck` - Check a list of sources (checked in order)
    2. `POST /normalize` - Normalize an expression in the context of sources
    3. `POST /tope` - Decide a tope entailment `<cube-vars> | <hyps> |- <goal>`
    4. `POST /sessions` - Check sources once, then `POST /sessions/{id}/normalize`
    """,
    version=settings.app_version,
    lifespan=lifespan
)

# CORS middleware for frontend access
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _typecheck(sources: Sequence[SourceFile]) -> Tuple[RunReport, GlobalEnv]:
    return TypecheckOrchestrator().typecheck(sources)


def _unprocessable(diagnostics: List[Diagnostic]) -> HTTPException:
    return HTTPException(status_code=422, detail=[d.model_dump(mode="json") for d in diagnostics])


def _normalize(expression: str, env: GlobalEnv) -> NormalizeResponse:
    try:
        normal_form, type_ = TypecheckOrchestrator.normalize(expression, env)
    except KernelError as e:
        raise _unprocessable([e.to_diagnostic()])
    return NormalizeResponse(normal_form=normal_form, type=type_)


# === API Endpoints ===

@app.get("/", tags=["Health"])
async def root():
    """Service name, version and the active tope bound."""
    return {
        "name": settings.app_name,
        "version": settings.app_version,
        "max_cube_vars": settings.max_cube_vars,
    }


@app.get("/health", tags=["Health"])
async def health_check():
    """Detailed health check with configuration status."""
    return {
        "status": "healthy",
        "name": settings.app_name,
        "version": settings.app_version,
        "config": {
            "max_cube_vars": settings.max_cube_vars,
            "entailment_cache_size": settings.entailment_cache_size,
            "parse_workers": settings.parse_workers,
        },
        "sessions": len(session_manager.list_sessions()),
    }


@app.post(
    "/typecheck",
    response_model=RunReport,
    tags=["Typechecking"],
    summary="Typecheck sources",
    description="Check the sources in order; failed declarations are reported, not raised."
)
def typecheck(request: TypecheckRequest):
    """
    Typecheck a list of sources.

    Always returns HTTP 200: `diagnostics` and the per-declaration statuses
    say whether the sources are well-typed.
    """
    logger.info(f"Typecheck request: {len(request.sources)} sources")
    report, _ = _typecheck(request.sources)
    return report


@app.post(
    "/normalize",
    response_model=NormalizeResponse,
    tags=["Typechecking"],
    summary="Normalize an expression",
)
def normalize(request: NormalizeRequest):
    """
    Normalize `expression` in the context of `sources`.

    HTTP 422 with the diagnostics if the sources or the expression fail to check.
    """
    report, env = _typecheck(request.sources)
    if not report.ok:
        raise _unprocessable([d for d in report.diagnostics if d.is_error])
    return _normalize(request.expression, env)


@app.post(
    "/tope",
    response_model=TopeResponse,
    tags=["Topes"],
    summary="Decide a tope entailment",
)
def tope(request: TopeRequest):
    """Decide `<cube-vars> | <hyps> |- <goal>`; malformed queries give HTTP 400."""
    try:
        query = parse_query(request.query)
    except KernelError as e:
        raise HTTPException(status_code=400, detail=e.to_diagnostic().model_dump(mode="json"))
    try:
        answer = answer_query(query, settings.max_cube_vars)
    except KernelError as e:
        raise _unprocessable([e.to_diagnostic()])
    countermodel = answer.countermodel.render() if answer.countermodel else None
    return TopeResponse(entailed=answer.entailed, countermodel=countermodel)


# === Sessions ===

@app.post("/sessions", response_model=SessionState, tags=["Sessions"], summary="Create a session")
def create_session(request: TypecheckRequest):
    """Check the sources once and keep the resulting environment."""
    report, env = _typecheck(request.sources)
    return session_manager.create_session(env, report)


@app.get("/sessions", tags=["Sessions"], include_in_schema=settings.debug)
async def list_sessions():
    """List all sessions (debug endpoint)."""
    if not settings.debug:
        raise HTTPException(status_code=404, detail="Not found")
    sessions = session_manager.list_sessions()
    return {"total": len(sessions), "sessions": [s.model_dump(mode="json") for s in sessions]}


@app.get("/sessions/{session_id}", response_model=SessionState, tags=["Sessions"])
async def get_session(session_id: str):
    """Summary of a stored session."""
    session = session_manager.get_session(session_id)
    if not session:
        raise HTTPException(status_code=404, detail=f"Session not found: {session_id}")
    return session.state


@app.post("/sessions/{session_id}/normalize", response_model=NormalizeResponse, tags=["Sessions"])
def normalize_in_session(session_id: str, request: NormalizeRequest):
    """Normalize against a stored environment; `sources` in the body are ignored."""
    session = session_manager.get_session(session_id)
    if not session:
        raise HTTPException(status_code=404, detail=f"Session not found: {session_id}")
    return _normalize(request.expression, session.env)


@app.delete("/sessions/{session_id}", tags=["Sessions"])
async def delete_session(session_id: str):
    """Drop a stored session."""
    if session_manager.delete_session(session_id):
        return {"deleted": session_id}
    raise HTTPException(status_code=404, detail=f"Session not found: {session_id}")


# === Run Server ===

if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.debug
    )
