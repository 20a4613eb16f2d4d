from fastapi import APIRouter, Depends, HTTPException

from api.dependencies import domain_for, example_for, get_decompose_service
from schemas.requests import ComposeRequest
from services.decompose_service import DecomposeService

router = APIRouter(prefix="/sequences", tags=["sequences"])


@router.post("/compose")
def compose(request: ComposeRequest, service: DecomposeService = Depends(get_decompose_service)):
    """Compose steps given in written order; the rightmost step acts first."""
    entry = example_for(request)
    d = domain_for(request, entry)
    if request.steps is not None:
        s = service.sequence(request.steps, request.leftmost_first, d)
    elif entry is not None and entry.sequence is not None:
        s = entry.sequence
    else:
        raise HTTPException(status_code=400, detail="No steps given")
    composite = service.compose(s, d)
    body = {"composite": composite.to_json(), "steps": [step.to_json() for step in s.steps]}
    target = request.target.to_map(d) if request.target else (entry.map if entry else None)
    if request.verify:
        report = service.intermediate_brackets(s, d)
        if target is not None:
            report = service.verify_equal(composite, target, d).merged(report)
        body["report"] = report.to_json()
    return body
