from fastapi import APIRouter, Depends, HTTPException

from api.dependencies import get_genfun_service, resolve_map
from schemas.requests import GenFunRequest, MapRequest
from services.genfun_service import GenFunService

router = APIRouter(prefix="/genfun", tags=["generating functions"])


@router.post("/abc")
def abc_coefficients(request: MapRequest, service: GenFunService = Depends(get_genfun_service)):
    _, m, d = resolve_map(request)
    return {**service.abc_coefficients(m).to_json(), "divergence": service.divergence_identity(m, d).to_json()}


@router.post("/verify")
def verify_genfun(request: GenFunRequest, service: GenFunService = Depends(get_genfun_service)):
    """Jacobian and Pfaffian identities of a generating-function pair; the time part when both pairs are known."""
    entry, m, d = resolve_map(request)
    gf = request.gf.to_genfun() if request.gf is not None else (entry.gf if entry else None)
    if gf is None:
        raise HTTPException(status_code=400, detail="No generating functions given")
    report = service.verify_genfun(m, gf, d, request.negated).merged(
        service.pfaffian_residual_X(m, gf, d, request.negated))
    pair = request.pair.to_pair() if request.pair else (entry.pair if entry else None)
    kpair = request.kpair.to_pair() if request.kpair else (entry.target if entry else None)
    if pair is not None and kpair is not None:
        report = report.merged(service.verify_time_part(m, gf, pair, kpair, d))
    return report.to_json()
