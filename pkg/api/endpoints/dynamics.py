from fastapi import APIRouter, Depends, HTTPException

from api.dependencies import domain_for, example_for, get_nambu_service, resolve_pair
from schemas.requests import EvolveRequest
from services.nambu_service import NambuService

router = APIRouter(prefix="/dynamics", tags=["dynamics"])


@router.post("/evolve")
def evolve(request: EvolveRequest, service: NambuService = Depends(get_nambu_service)):
    """RK4 trajectory of the Nambu-Hamilton equations."""
    entry = example_for(request)
    d = domain_for(request, entry)
    pair = resolve_pair(request.pair, entry)
    x0 = request.x0 or (entry.x0 if entry else None)
    if x0 is None:
        raise HTTPException(status_code=400, detail="No start point given")
    x0 = x0.model_copy(update={"params": {**d.params, **x0.params}})
    trajectory = service.integrate_flow(pair, x0, request.t_end, request.h)
    return trajectory.model_dump()
