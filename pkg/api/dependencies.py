from functools import lru_cache
from typing import Optional, Tuple

from fastapi import HTTPException

from exceptions import UnknownExampleError
from repositories.example_repo import ExampleRepository
from schemas.example import ExampleEntry
from schemas.phase import HamiltonPair, PhaseMap
from schemas.requests import ExampleOrInline, MapRequest, PairIn
from services.canonical_service import CanonicalService
from services.decompose_service import DecomposeService
from services.genfun_service import GenFunService
from services.lie_service import LieService
from services.nambu_service import NambuService
from services.selftest_service import SelftestService
from symbolic.domain import Domain


@lru_cache
def get_repo() -> ExampleRepository:
    return ExampleRepository()


def get_nambu_service() -> NambuService:
    return NambuService()


def get_canonical_service() -> CanonicalService:
    return CanonicalService()


def get_genfun_service() -> GenFunService:
    return GenFunService()


def get_lie_service() -> LieService:
    return LieService()


def get_decompose_service() -> DecomposeService:
    return DecomposeService()


def get_selftest_service() -> SelftestService:
    return SelftestService(get_repo())


def example_for(request: ExampleOrInline) -> Optional[ExampleEntry]:
    if request.example is None:
        return None
    try:
        return get_repo().get(request.example)
    except UnknownExampleError as err:
        raise HTTPException(status_code=404, detail=str(err))


def domain_for(request: ExampleOrInline, entry: Optional[ExampleEntry], m: Optional[PhaseMap] = None) -> Domain:
    base = entry.domain if entry is not None else (m.domain if m is not None else Domain())
    return request.domain.apply(base)


def resolve_map(request: MapRequest) -> Tuple[Optional[ExampleEntry], PhaseMap, Domain]:
    entry = example_for(request)
    if request.map is not None:
        d = domain_for(request, entry)
        return entry, request.map.to_map(d), d
    if entry is None or entry.map is None:
        raise HTTPException(status_code=400, detail=f"Example {request.example!r} has no map")
    return entry, entry.map, domain_for(request, entry)


def resolve_pair(given: Optional[PairIn], entry: Optional[ExampleEntry], attr: str = "pair") -> HamiltonPair:
    if given is not None:
        return given.to_pair()
    value = getattr(entry, attr) if entry is not None else None
    if value is None:
        raise HTTPException(status_code=400, detail=f"No {'K pair' if attr == 'target' else 'Hamiltonian pair'} given")
    return value
