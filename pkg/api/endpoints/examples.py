from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Query

from api.dependencies import get_repo, get_selftest_service
from exceptions import UnknownExampleError
from repositories.example_repo import ExampleRepository
from schemas.requests import SelftestRequest
from services.selftest_service import SelftestService

router = APIRouter(prefix="/examples", tags=["examples"])


@router.get("/")
def list_examples(tag: Optional[str] = Query(None, description="Only examples for this module"),
                  repo: ExampleRepository = Depends(get_repo)):
    return [entry.summary() for entry in repo.all(tag)]


@router.post("/selftest")
def selftest(request: SelftestRequest, service: SelftestService = Depends(get_selftest_service)):
    """Every registry example through the verifications that apply to it."""
    overrides = {"samples": request.samples} if request.samples else {}
    try:
        report = service.run(request.module, request.inject, request.jobs, overrides)
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err))
    return {**report.to_json(), "verdicts": report.verdicts}


@router.get("/{example_id}")
def get_example(example_id: str, repo: ExampleRepository = Depends(get_repo)):
    try:
        return repo.get(example_id).to_json()
    except UnknownExampleError as err:
        raise HTTPException(status_code=404, detail=str(err))
