"""API FastAPI para consultas de K_n-conjugação em Aut(T_n)."""

import logging
from contextlib import asynccontextmanager
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from src.config import Config
from src.conjugacy import property_p_check
from src.errors import WreathError
from src.formats import format_cycles, format_element, parse_element, parse_generator_list
from src.harness import PROPERTY_P, replay
from src.markov import contains_transitive as markov_contains_transitive
from src.markov import markov_group
from src.records import PairRecord, SubgroupRecord
from src.report_store import ReportStore
from src.subgroups import (
    centralizer_in_Kn,
    centralizer_space,
    closure,
    frattini,
    intersect_with_Kn,
    maximal_subgroups,
)
from src.tree_automorphisms import (
    conjugate,
    element_order,
    inverse,
    is_in_Kn,
    is_transitive,
    multiply,
    project,
)

logging.basicConfig(
    level=Config.LOG_LEVEL,
    format=Config.LOG_FORMAT,
)
logger = logging.getLogger(__name__)

ELEMENT_LIST_LIMIT = 256

report_store: Optional[ReportStore] = None


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Inicialização e shutdown da aplicação."""
    global report_store

    logger.info("Starting up K_n conjugacy API...")
    Config.ensure_directories()
    report_store = ReportStore()

    logger.info("API startup complete")
    yield

    logger.info("Shutting down API...")


app = FastAPI(
    title=Config.API_TITLE,
    description="Aritmética em W_n, subgrupos e decisores de K_n-conjugação",
    version=Config.API_VERSION,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class ElementRequest(BaseModel):
    """Request com um ou dois elementos."""
    n: int = Field(..., description="Profundidade da árvore")
    x: str = Field(..., description="Elemento em ciclos, lista de imagens ou retrato")
    y: Optional[str] = Field(None, description="Segundo elemento (produto e conjugado)")


class ElementInfo(BaseModel):
    """Representações e invariantes de um elemento."""
    cycles: str
    images: str
    portrait: str
    order: int
    transitive: bool
    in_kn: bool
    projection: str


class ElementResponse(BaseModel):
    """Response de elementos."""
    x: ElementInfo
    inverse: str
    y: Optional[ElementInfo] = None
    product: Optional[str] = None
    conjugate: Optional[str] = None


class GroupRequest(BaseModel):
    """Request com uma lista de geradores."""
    n: int
    generators: str = Field(..., description="Geradores separados por vírgula")


class GroupResponse(BaseModel):
    """Dados do subgrupo gerado."""
    group: SubgroupRecord
    elements: Optional[List[str]] = None
    frattini_order: int
    frattini_rank: int
    maximal_subgroups: List[List[str]]
    kn_intersection_order: int
    centralizer_order: int
    centralizer_space: str


class ConjugacyRequest(BaseModel):
    """Request de conjugação de H em G."""
    n: int
    H: str
    G: str


class MarkovResponse(BaseModel):
    """Grupo de Markov M_n."""
    depth: int
    generators: List[str]
    order: Optional[int] = None
    contains_transitive: bool


class ReplayResponse(BaseModel):
    matches: bool
    verdict: str
    mismatches: List[str] = []


def _element_info(x) -> ElementInfo:
    return ElementInfo(
        cycles=format_element(x, "cycles"),
        images=format_element(x, "images"),
        portrait=format_element(x, "portrait"),
        order=element_order(x),
        transitive=is_transitive(x),
        in_kn=is_in_Kn(x),
        projection=format_cycles(project(x)),
    )


def _bad_request(e: WreathError, where: str) -> HTTPException:
    logger.error(f"Invalid request in {where}: {e}")
    return HTTPException(status_code=400, detail=str(e))


@app.get("/")
async def root():
    """Informações da API."""
    return {
        "name": Config.API_TITLE,
        "version": Config.API_VERSION,
        "status": "running",
        "docs": "/docs",
    }


@app.get("/health")
async def health_check():
    """Health check."""
    return {
        "status": "healthy",
        "reports_dir": str(report_store.root) if report_store else None,
    }


@app.post("/elements", response_model=ElementResponse)
async def elements(request: ElementRequest):
    """Representações, inverso e, com y, produto xy e conjugado y x y^{-1}."""
    try:
        x = parse_element(request.x, request.n)
        response = ElementResponse(x=_element_info(x), inverse=format_cycles(inverse(x)))
        if request.y is not None:
            y = parse_element(request.y, request.n)
            response.y = _element_info(y)
            response.product = format_cycles(multiply(x, y))
            response.conjugate = format_cycles(conjugate(x, y))
        return response

    except WreathError as e:
        raise _bad_request(e, "elements endpoint")
    except Exception as e:
        logger.error(f"Error in elements endpoint: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/groups", response_model=GroupResponse)
async def groups(request: GroupRequest):
    """Fecho, Frattini, maximais, G ∩ K_n e C_{K_n}(G)."""
    try:
        G = closure(parse_generator_list(request.generators, request.n), request.n)
        data = frattini(G)
        return GroupResponse(
            group=SubgroupRecord.from_subgroup(G),
            elements=[format_cycles(g) for g in G.elements] if G.order <= ELEMENT_LIST_LIMIT else None,
            frattini_order=data.phi.order,
            frattini_rank=data.quotient_rank,
            maximal_subgroups=[
                [format_cycles(g) for g in M.generators] for M in maximal_subgroups(G, data)
            ],
            kn_intersection_order=intersect_with_Kn(G).order,
            centralizer_order=centralizer_in_Kn(G).order,
            centralizer_space=str(centralizer_space(G, G.depth)),
        )

    except WreathError as e:
        raise _bad_request(e, "groups endpoint")
    except Exception as e:
        logger.error(f"Error in groups endpoint: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/conjugacy")
async def conjugacy(request: ConjugacyRequest):
    """Decisores elemento a elemento e global, com o registro completo."""
    try:
        H = closure(parse_generator_list(request.H, request.n), request.n)
        G = closure(parse_generator_list(request.G, request.n), request.n)
        record = PairRecord.from_check(PROPERTY_P, 0, H, G, property_p_check(H, G), full=True)
        return record.model_dump(by_alias=True, exclude_none=True)

    except WreathError as e:
        raise _bad_request(e, "conjugacy endpoint")
    except Exception as e:
        logger.error(f"Error in conjugacy endpoint: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/markov/{n}", response_model=MarkovResponse)
async def markov(n: int):
    """Geradores e ordem de M_n."""
    try:
        spec = markov_group(n)
        return MarkovResponse(
            depth=n,
            generators=[format_cycles(g) for g in spec.generators],
            order=spec.order,
            contains_transitive=markov_contains_transitive(spec),
        )

    except WreathError as e:
        raise _bad_request(e, "markov endpoint")
    except Exception as e:
        logger.error(f"Error in markov endpoint: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/replay", response_model=ReplayResponse)
async def replay_record(record: PairRecord):
    """Reavalia um registro de par."""
    try:
        result = replay(record)
        return ReplayResponse(matches=result.matches, verdict=result.verdict, mismatches=result.mismatches)

    except WreathError as e:
        raise _bad_request(e, "replay endpoint")
    except Exception as e:
        logger.error(f"Error in replay endpoint: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/reports")
async def list_reports(experiment: Optional[str] = None):
    """Lista relatórios gravados."""
    try:
        store = report_store or ReportStore()
        return store.list_runs(experiment)

    except Exception as e:
        logger.error(f"Error listing reports: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/reports/{experiment}/summary")
async def report_summary(experiment: str):
    """Resumo mais recente de um experimento."""
    try:
        if not experiment.replace("_", "").replace("-", "").isalnum():
            raise HTTPException(status_code=400, detail="Invalid experiment name")
        store = report_store or ReportStore()
        summary = store.load_summary(experiment)
        if summary is None:
            raise HTTPException(status_code=404, detail="Summary not found")
        return summary.model_dump(by_alias=True, exclude_none=True)

    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Error getting summary: {e}")
        raise HTTPException(status_code=500, detail=str(e))


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
