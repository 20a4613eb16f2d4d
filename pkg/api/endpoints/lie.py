from fastapi import APIRouter, Depends, HTTPException

from api.dependencies import domain_for, example_for, get_lie_service
from schemas.requests import CrossCheckRequest, LieRequest
from services.lie_service import LieService

router = APIRouter(prefix="/lie", tags=["lie"])


def _generators(request: LieRequest):
    entry = example_for(request)
    g = request.generators() or (entry.generators if entry else None)
    if g is None:
        raise HTTPException(status_code=400, detail="No generators given")
    return entry, g


@router.post("/series")
def lie_series(request: LieRequest, service: LieService = Depends(get_lie_service)):
    entry, g = _generators(request)
    series = service.lie_series(g, request.eps, request.order)
    body = {**series.to_json(), "field": list(series.field.texts().values())}
    if request.check_rotation:
        d = domain_for(request, entry)
        body["rotation"] = service.closed_form_check(series, service.rotation_about_x1(request.eps), d).to_json()
    return body


@router.post("/cross-check")
def cross_check(request: CrossCheckRequest, service: LieService = Depends(get_lie_service)):
    entry, g = _generators(request)
    d = domain_for(request, entry)
    return service.cross_check(g, request.eps, request.order, request.h, d).to_json()
