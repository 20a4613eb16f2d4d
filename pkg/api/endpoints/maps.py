from fastapi import APIRouter, Depends

from api.dependencies import get_canonical_service, resolve_map, resolve_pair
from schemas.requests import MapRequest, TransportRequest, VerifyKRequest
from services.canonical_service import CanonicalService
from symbolic.printer import to_text

router = APIRouter(prefix="/maps", tags=["maps"])


@router.post("/classify")
def classify_map(request: MapRequest, service: CanonicalService = Depends(get_canonical_service)):
    """Canonical, canonoid with a universal constant, or neither."""
    _, m, d = resolve_map(request)
    verdict = service.classify(m, d)
    body = verdict.model_dump()
    if request.coefficients:
        body["coefficients"] = [to_text(c) for c in service.universality_coefficients(m)]
    return body


@router.post("/direct-conditions")
def direct_conditions(request: MapRequest, service: CanonicalService = Depends(get_canonical_service)):
    _, m, d = resolve_map(request)
    return service.direct_conditions(m, d).to_json()


@router.post("/transport")
def transport(request: TransportRequest, service: CanonicalService = Depends(get_canonical_service)):
    """K = H composed with the inverse map."""
    entry, m, _ = resolve_map(request)
    k = service.transport_hamiltonians(m, resolve_pair(request.pair, entry))
    return k.to_json()


@router.post("/verify-k")
def verify_k(request: VerifyKRequest, service: CanonicalService = Depends(get_canonical_service)):
    entry, m, d = resolve_map(request)
    p = resolve_pair(request.pair, entry)
    k = resolve_pair(request.kpair, entry, "target")
    return service.verify_new_hamiltonians(m, p, k, d).to_json()
