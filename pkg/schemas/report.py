from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class EquivReport(BaseModel):
    equal: bool
    residual: float
    worst_point: Dict[str, float] = Field(default_factory=dict)
    samples: int = 0


class IdentityCheck(BaseModel):
    label: str
    residual: float
    # |a - b| at the worst point, before scaling
    raw_residual: Optional[float] = None
    worst_point: Dict[str, float] = Field(default_factory=dict)
    passed: bool
    tolerance: float


class CheckReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    passed: bool = Field(alias="pass")
    identities: List[IdentityCheck] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @classmethod
    def from_checks(cls, checks: List[IdentityCheck], notes: Optional[List[str]] = None) -> "CheckReport":
        return cls(passed=all(c.passed for c in checks), identities=checks, notes=notes or [])

    def merged(self, other: "CheckReport") -> "CheckReport":
        return CheckReport.from_checks(self.identities + other.identities, self.notes + other.notes)

    @property
    def failures(self) -> List[IdentityCheck]:
        return [c for c in self.identities if not c.passed]

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.identities), default=0.0)

    def to_json(self) -> Dict[str, Any]:
        return {
            "pass": self.passed,
            "identities": [
                {"label": c.label, "residual": c.residual, "worst_point": c.worst_point,
                 **({"raw_residual": c.raw_residual} if c.raw_residual is not None else {})}
                for c in self.identities
            ],
            **({"notes": self.notes} if self.notes else {}),
        }


class CanonicityVerdict(BaseModel):
    kind: Literal["canonical", "canonoid_universal", "not_universal"]
    bracket_expr: str
    constant_value: Optional[float] = None
    residual: float = 0.0


class TrajectorySample(BaseModel):
    t: float
    x1: float
    x2: float
    x3: float


class Trajectory(BaseModel):
    samples: List[TrajectorySample] = Field(default_factory=list)
    h: float
    drift: Dict[str, float] = Field(default_factory=dict)
    aborted: bool = False

    @property
    def times(self) -> List[float]:
        return [s.t for s in self.samples]

    @property
    def states(self) -> List[tuple]:
        return [(s.x1, s.x2, s.x3) for s in self.samples]

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]


class Report(BaseModel):
    """What a CLI command or HTTP call hands back."""

    command: str
    passed: bool
    checks: List[IdentityCheck] = Field(default_factory=list)
    verdicts: Dict[str, Any] = Field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "pass": self.passed,
            "checks": [{"label": c.label, "residual": c.residual} for c in self.checks],
            **({"verdicts": self.verdicts} if self.verdicts else {}),
        }
