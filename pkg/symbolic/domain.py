import math
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

import settings

DEFAULT_BOUNDS: Dict[str, Tuple[float, float]] = {
    "x1": (-2.0, 2.0),
    "x2": (-2.0, 2.0),
    "x3": (-2.0, 2.0),
    "X1": (-2.0, 2.0),
    "X2": (-2.0, 2.0),
    "X3": (-2.0, 2.0),
    "t": (0.0, 1.0),
}


class Point(BaseModel):
    x1: float
    x2: float
    x3: float
    t: float = 0.0
    params: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def coordinates_must_be_finite(self):
        values = [self.x1, self.x2, self.x3, self.t, *self.params.values()]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("Point coordinates must be finite")
        return self

    @property
    def state(self) -> Tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)

    def bindings(self) -> Dict[str, float]:
        return {**self.params, "x1": self.x1, "x2": self.x2, "x3": self.x3, "t": self.t}


class Domain(BaseModel):
    """Sampling box for identity checks: per-symbol bounds, sample count, tolerance."""

    bounds: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    samples: int = Field(default=settings.SAMPLES, ge=1)
    tol: float = Field(default=settings.TOLERANCE, gt=0)
    params: Dict[str, float] = Field(default_factory=dict)
    seed: int = settings.SEED

    @field_validator("bounds")
    @classmethod
    def lower_must_be_below_upper(cls, v):
        for name, (lo, hi) in v.items():
            if not lo < hi:
                raise ValueError(f"Bounds for {name} must satisfy lower < upper, got [{lo}, {hi}]")
        return v

    def bounds_for(self, name: str) -> Optional[Tuple[float, float]]:
        if name in self.bounds:
            return self.bounds[name]
        return DEFAULT_BOUNDS.get(name)

    def updated(self, **changes) -> "Domain":
        data = self.model_dump()
        for key in ("bounds", "params"):
            if key in changes:
                data[key] = {**data[key], **changes.pop(key)}
        data.update(changes)
        return Domain(**data)

    @classmethod
    def from_string(cls, spec: str, **kwargs) -> "Domain":
        """Parse "x1:0.5,2;x2:0.5,2" into bounds."""
        bounds = {}
        for chunk in filter(None, (c.strip() for c in spec.split(";"))):
            try:
                name, rng = chunk.split(":")
                lo, hi = (float(v) for v in rng.split(","))
            except ValueError as err:
                raise ValueError(f"Malformed domain entry {chunk!r}; expected name:lo,hi") from err
            bounds[name.strip()] = (lo, hi)
        return cls(bounds=bounds, **kwargs)
