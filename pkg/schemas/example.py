from typing import Any, Dict, List, Literal, Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field

from schemas.phase import GenFunPair, GeneratorPair, HamiltonPair, PhaseMap
from schemas.sequence import CTSequence
from symbolic.domain import Domain, Point
from symbolic.printer import to_text

CanonicityKind = Literal["canonical", "canonoid_universal", "not_universal"]


class ExampleEntry(BaseModel):
    """A worked system from the registry with everything its verifications need."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    id: str
    description: str
    domain: Domain = Field(default_factory=Domain)
    map: Optional[PhaseMap] = None
    pair: Optional[HamiltonPair] = None
    target: Optional[HamiltonPair] = None
    gf: Optional[GenFunPair] = None
    sequence: Optional[CTSequence] = None
    generators: Optional[GeneratorPair] = None
    expected: Optional[CanonicityKind] = None

    # dynamics
    x0: Optional[Point] = None
    t_end: float = 1.0

    # infinitesimal transformations
    eps: float = 0.5
    order: int = 20
    closed_form: Optional[Tuple[sympy.Expr, sympy.Expr, sympy.Expr]] = None
    cross_eps: float = 0.3
    cross_order: int = 15

    tags: List[str] = Field(default_factory=list)

    @property
    def transportable(self) -> bool:
        return (self.map is not None and self.pair is not None and self.target is not None
                and not self.map.time_dependent and self.map.has_inverse)

    def summary(self) -> Dict[str, Any]:
        return {"id": self.id, "description": self.description, "tags": self.tags}

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = self.summary()
        if self.map is not None:
            data["map"] = self.map.to_json()
        if self.pair is not None:
            data["pair"] = self.pair.to_json()
        if self.target is not None:
            data["target"] = self.target.to_json()
        if self.gf is not None:
            data["gf"] = self.gf.texts()
        if self.generators is not None:
            data["generators"] = self.generators.texts()
        if self.sequence is not None:
            data["sequence"] = self.sequence.to_json()
        if self.closed_form is not None:
            data["closed_form"] = [to_text(e) for e in self.closed_form]
        if self.domain.bounds or self.domain.params:
            data["domain"] = {"bounds": {k: list(v) for k, v in self.domain.bounds.items()},
                              "params": self.domain.params}
        if self.expected:
            data["expected"] = self.expected
        return data
