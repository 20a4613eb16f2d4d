from typing import Any, Dict, List, Literal, Optional

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator

from schemas.phase import PhaseMap
from symbolic.printer import to_text

StepKind = Literal[
    "gauge1", "gauge2", "gauge3",
    "point1", "point2", "point3",
    "scaling", "interchange", "linear", "custom",
]


class StepSpec(BaseModel):
    """One entry of a sequence file: the kind plus its payload fields (f1, f2, a, plane, matrix, ...)."""

    model_config = ConfigDict(extra="allow")

    kind: StepKind
    label: str = ""

    @field_validator("kind", mode="before")
    @classmethod
    def kind_is_case_insensitive(cls, v):
        return v.strip().lower() if isinstance(v, str) else v

    @property
    def payload(self) -> Dict[str, Any]:
        return dict(self.model_extra or {})


class CTStep(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: StepKind
    payload: Dict[str, Any] = Field(default_factory=dict)
    map: PhaseMap
    bracket: sympy.Expr
    canonical: bool
    notes: List[str] = Field(default_factory=list)

    @property
    def label(self) -> str:
        return self.map.label or self.kind

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "label": self.label,
            "map": self.map.to_json(),
            "bracket": to_text(self.bracket),
            "canonical": self.canonical,
            **({"notes": self.notes} if self.notes else {}),
        }


class CTSequence(BaseModel):
    """
    Steps in written order, leftmost first: S = P G3 G2 G1 is stored as
    [P, G3, G2, G1]. The rightmost step acts on the coordinates first.
    """

    steps: List[CTStep] = Field(default_factory=list)
    order: Literal["rightmost_first"] = "rightmost_first"
    label: Optional[str] = None

    def __add__(self, other: "CTSequence") -> "CTSequence":
        return CTSequence(steps=self.steps + other.steps, label=None)

    def to_json(self) -> Dict[str, Any]:
        return {"order": self.order, "label": self.label, "steps": [s.to_json() for s in self.steps]}
