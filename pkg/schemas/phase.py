import logging
from typing import Any, ClassVar, Dict, Literal, Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field, model_validator

from exceptions import DomainExhaustedError, MissingInverseError, NambuError
from symbolic.calculus import bind_parameters, diff, substitute
from symbolic.domain import Domain
from symbolic.parser import parse
from symbolic.printer import to_text
from symbolic.sampling import is_zero
from symbolic.variables import COORDS, NEW_COORDS, t

logger = logging.getLogger(__name__)

Side = Literal["x", "X"]


def as_expr(value: Any, side: str = "x") -> sympy.Expr:
    if isinstance(value, str):
        return parse(value, side=side)
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, (int, float)):
        return sympy.sympify(value)
    raise ValueError(f"Cannot read an expression from {value!r}")


class ExprModel(BaseModel):
    """Base for models whose fields are expressions; strings are parsed on the way in."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    expr_fields: ClassVar[Tuple[str, ...]] = ()

    @classmethod
    def side_for(cls, data: Dict[str, Any]) -> str:
        return "x"

    @model_validator(mode="before")
    @classmethod
    def parse_expression_fields(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        side = cls.side_for(data)
        for name in cls.expr_fields:
            if name in data and data[name] is not None:
                data[name] = as_expr(data[name], side)
        return data

    def texts(self) -> Dict[str, str]:
        return {name: to_text(getattr(self, name)) for name in self.expr_fields}


class HamiltonPair(ExprModel):
    expr_fields: ClassVar[Tuple[str, ...]] = ("H1", "H2")

    H1: sympy.Expr
    H2: sympy.Expr
    label: str = ""
    coords: Side = "x"

    @classmethod
    def side_for(cls, data):
        return data.get("coords", "x")

    @property
    def components(self) -> Tuple[sympy.Expr, sympy.Expr]:
        return (self.H1, self.H2)

    def in_x(self, m: "PhaseMap") -> "HamiltonPair":
        """The pair as functions of x (composing X-form functions with the map)."""
        if self.coords == "x":
            return self
        return HamiltonPair(H1=m.pull_back(self.H1), H2=m.pull_back(self.H2), label=self.label, coords="x")

    def in_X(self, m: "PhaseMap") -> "HamiltonPair":
        if self.coords == "X":
            return self
        return HamiltonPair(H1=m.push_forward(self.H1), H2=m.push_forward(self.H2), label=self.label, coords="X")

    def bind(self, params: Dict[str, float]) -> "HamiltonPair":
        return self.model_copy(update={"H1": bind_parameters(self.H1, params), "H2": bind_parameters(self.H2, params)})

    def to_json(self) -> Dict[str, Any]:
        return {**self.texts(), "label": self.label, "coords": self.coords}


class VectorField(ExprModel):
    expr_fields: ClassVar[Tuple[str, ...]] = ("v1", "v2", "v3")

    v1: sympy.Expr
    v2: sympy.Expr
    v3: sympy.Expr

    @property
    def components(self) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        return (self.v1, self.v2, self.v3)


class GenFunPair(ExprModel):
    expr_fields: ClassVar[Tuple[str, ...]] = ("F1", "F2")

    F1: sympy.Expr
    F2: sympy.Expr

    @property
    def components(self) -> Tuple[sympy.Expr, sympy.Expr]:
        return (self.F1, self.F2)

    def swapped(self) -> "GenFunPair":
        return GenFunPair(F1=self.F2, F2=self.F1)

    def bind(self, params: Dict[str, float]) -> "GenFunPair":
        return GenFunPair(F1=bind_parameters(self.F1, params), F2=bind_parameters(self.F2, params))


class GeneratorPair(ExprModel):
    expr_fields: ClassVar[Tuple[str, ...]] = ("G1", "G2")

    G1: sympy.Expr
    G2: sympy.Expr


class PhaseMap(ExprModel):
    """(x, t) -> (X(x, t), t) with an optional inverse written in X1, X2, X3, t."""

    expr_fields: ClassVar[Tuple[str, ...]] = ("X1", "X2", "X3")

    X1: sympy.Expr
    X2: sympy.Expr
    X3: sympy.Expr
    inverse: Optional[Tuple[sympy.Expr, sympy.Expr, sympy.Expr]] = None
    domain: Domain = Field(default_factory=Domain)
    time_dependent: Optional[bool] = None
    label: str = ""

    @model_validator(mode="before")
    @classmethod
    def parse_inverse_and_domain(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        inverse = data.get("inverse")
        if isinstance(inverse, dict):
            try:
                inverse = [inverse[name] for name in ("x1", "x2", "x3")]
            except KeyError as err:
                raise ValueError(f"Inverse is missing component {err}") from err
        if inverse is not None:
            data["inverse"] = tuple(as_expr(v, "X") for v in inverse)
        domain = data.get("domain")
        if isinstance(domain, str):
            data["domain"] = Domain.from_string(domain)
        elif isinstance(domain, dict) and not set(domain) & set(Domain.model_fields):
            data["domain"] = Domain(bounds={k: tuple(v) for k, v in domain.items()})
        return data

    @model_validator(mode="after")
    def detect_time_dependence(self):
        detected = self._detect_time_dependence()
        if self.time_dependent is not None and self.time_dependent != detected:
            raise ValueError(
                f"time_dependent={self.time_dependent} contradicts the components (detected {detected})"
            )
        self.time_dependent = detected
        return self

    def _detect_time_dependence(self) -> bool:
        rates = [diff(c, t) for c in self.components]
        if all(r == 0 for r in rates):
            return False
        try:
            return not all(is_zero(r, self.domain) for r in rates)
        except (DomainExhaustedError, NambuError) as err:
            logger.debug(f"Falling back to structural time dependence for {self.label or 'map'}: {err}")
            return True

    @property
    def components(self) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        return (self.X1, self.X2, self.X3)

    @property
    def has_inverse(self) -> bool:
        return self.inverse is not None

    def require_inverse(self) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        if self.inverse is None:
            raise MissingInverseError(f"Map {self.label or self.texts()} has no symbolic inverse")
        return self.inverse

    def pull_back(self, expr_X: sympy.Expr) -> sympy.Expr:
        """Express an X-side function in x: f(X) -> f(X(x, t))."""
        return substitute(expr_X, dict(zip(NEW_COORDS, self.components)))

    def push_forward(self, expr_x: sympy.Expr) -> sympy.Expr:
        """Express an x-side function in X via the inverse: f(x) -> f(x(X, t))."""
        return substitute(expr_x, dict(zip(COORDS, self.require_inverse())))

    def bind(self, params: Dict[str, float]) -> "PhaseMap":
        inverse = None
        if self.inverse is not None:
            inverse = tuple(bind_parameters(e, params) for e in self.inverse)
        return PhaseMap(
            X1=bind_parameters(self.X1, params),
            X2=bind_parameters(self.X2, params),
            X3=bind_parameters(self.X3, params),
            inverse=inverse,
            domain=self.domain,
            label=self.label,
        )

    @classmethod
    def identity(cls, domain: Optional[Domain] = None) -> "PhaseMap":
        X1, X2, X3 = NEW_COORDS
        return cls(X1="x1", X2="x2", X3="x3", inverse=(X1, X2, X3), domain=domain or Domain(), label="identity")

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = self.texts()
        if self.inverse is not None:
            data["inverse"] = {name: to_text(e) for name, e in zip(("x1", "x2", "x3"), self.inverse)}
        if self.domain.bounds:
            data["domain"] = {name: list(b) for name, b in self.domain.bounds.items()}
        return data
