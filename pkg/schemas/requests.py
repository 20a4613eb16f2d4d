"""HTTP request bodies. Expressions travel as strings in the expression grammar."""
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

import settings
from schemas.phase import GenFunPair, GeneratorPair, HamiltonPair, PhaseMap
from schemas.sequence import StepSpec
from symbolic.domain import Domain, Point


class DomainIn(BaseModel):
    bounds: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    params: Dict[str, float] = Field(default_factory=dict)
    samples: Optional[int] = Field(default=None, ge=1)
    tol: Optional[float] = Field(default=None, gt=0)
    seed: Optional[int] = None

    def apply(self, base: Domain) -> Domain:
        changes = {"bounds": self.bounds, "params": self.params}
        changes.update({k: v for k, v in (("samples", self.samples), ("tol", self.tol), ("seed", self.seed))
                        if v is not None})
        return base.updated(**changes)


class MapIn(BaseModel):
    X1: str
    X2: str
    X3: str
    inverse: Optional[Dict[str, str]] = None
    label: str = ""

    def to_map(self, domain: Domain) -> PhaseMap:
        return PhaseMap(**self.model_dump(), domain=domain)


class PairIn(BaseModel):
    H1: str
    H2: str
    coords: Literal["x", "X"] = "x"
    label: str = ""

    def to_pair(self) -> HamiltonPair:
        return HamiltonPair(**self.model_dump())


class GenFunIn(BaseModel):
    F1: str
    F2: str

    def to_genfun(self) -> GenFunPair:
        return GenFunPair(**self.model_dump())


class ExampleOrInline(BaseModel):
    example: Optional[str] = None
    domain: DomainIn = Field(default_factory=DomainIn)


class MapRequest(ExampleOrInline):
    map: Optional[MapIn] = None
    coefficients: bool = False

    @model_validator(mode="after")
    def needs_a_map(self):
        if self.example is None and self.map is None:
            raise ValueError("Provide either an example id or a map")
        return self


class TransportRequest(MapRequest):
    pair: Optional[PairIn] = None


class VerifyKRequest(TransportRequest):
    kpair: Optional[PairIn] = None


class GenFunRequest(VerifyKRequest):
    gf: Optional[GenFunIn] = None
    negated: bool = False


class LieRequest(ExampleOrInline):
    G1: Optional[str] = None
    G2: Optional[str] = None
    eps: float = 0.5
    order: int = Field(default=settings.LIE_ORDER, ge=1)
    check_rotation: bool = False

    @model_validator(mode="after")
    def needs_generators(self):
        if self.example is None and (self.G1 is None or self.G2 is None):
            raise ValueError("Provide either an example id or both generators")
        return self

    def generators(self) -> Optional[GeneratorPair]:
        if self.G1 is None or self.G2 is None:
            return None
        return GeneratorPair(G1=self.G1, G2=self.G2)


class CrossCheckRequest(LieRequest):
    h: float = Field(default=settings.RK4_STEP, gt=0)


class ComposeRequest(ExampleOrInline):
    steps: Optional[List[StepSpec]] = None
    leftmost_first: bool = False
    target: Optional[MapIn] = None
    verify: bool = True


class EvolveRequest(ExampleOrInline):
    pair: Optional[PairIn] = None
    x0: Optional[Point] = None
    t_end: float = 1.0
    h: float = Field(default=settings.RK4_STEP, gt=0)


class SelftestRequest(BaseModel):
    module: Optional[str] = None
    inject: Optional[str] = None
    jobs: int = Field(default=1, ge=1)
    samples: Optional[int] = Field(default=None, ge=1)
