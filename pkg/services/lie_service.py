"""Infinitesimal canonical transformations and their exponentiation."""
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict

import settings
from exceptions import ExpressionBlowupError, TimeDependentGeneratorError
from schemas.phase import GeneratorPair, PhaseMap, VectorField
from schemas.report import CheckReport, IdentityCheck
from services.integrator import compile_field, endpoint
from services.nambu_service import NambuService
from symbolic.calculus import divergence as field_divergence, evaluate, is_time_independent, node_count, simplify
from symbolic.domain import Domain
from symbolic.printer import to_text
from symbolic.sampling import check_identities, check_identity, free_names, sample_points
from symbolic.variables import COORDS

logger = logging.getLogger(__name__)

PointMap = Callable[[Sequence[float]], np.ndarray]


class LieSeriesMap(BaseModel):
    """Truncated Lie series X_i = Σ_{k≤N} ε^k/k! b_k(x_i), with b_{k+1} = {b_k, G1, G2}."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    field: VectorField
    eps: float
    order: int
    terms: List[List[sympy.Expr]]

    def partial_sums(self) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        eps = sympy.Float(self.eps)
        return tuple(
            sympy.Add(*(eps ** k / sympy.factorial(k) * b for k, b in enumerate(brackets)))
            for brackets in self.terms
        )

    def as_phase_map(self, domain: Optional[Domain] = None) -> PhaseMap:
        X1, X2, X3 = self.partial_sums()
        return PhaseMap(X1=X1, X2=X2, X3=X3, domain=domain or Domain(), label=f"lie series N={self.order}")

    def evaluate_at(self, point: Dict[str, float]) -> np.ndarray:
        return np.array([evaluate(X, point) for X in self.partial_sums()])

    def remainder_bound(self) -> float:
        return abs(self.eps) ** (self.order + 1) / math.factorial(self.order + 1)

    def to_json(self):
        return {
            "eps": self.eps,
            "order": self.order,
            "X": [to_text(X) for X in self.partial_sums()],
            "terms": [[to_text(b) for b in brackets] for brackets in self.terms],
        }


class LieService:
    def __init__(self, nambu: Optional[NambuService] = None):
        self.nambu = nambu or NambuService()

    def _require_static(self, g: GeneratorPair):
        if not (is_time_independent(g.G1) and is_time_independent(g.G2)):
            raise TimeDependentGeneratorError("Generators of infinitesimal transformations must not depend on t")

    def field_from_generators(self, g: GeneratorPair) -> VectorField:
        self._require_static(g)
        v = [self.nambu.bracket(x, g.G1, g.G2) for x in COORDS]
        return VectorField(v1=v[0], v2=v[1], v3=v[2])

    def divergence(self, v: VectorField) -> sympy.Expr:
        return simplify(field_divergence(v.components))

    def lie_series(self, g: GeneratorPair, eps: float, order: int = settings.LIE_ORDER) -> LieSeriesMap:
        if order < 1:
            raise ValueError("Lie series order must be at least 1")
        field = self.field_from_generators(g)
        terms = []
        for x in COORDS:
            brackets = [x]
            for k in range(order):
                b = brackets[-1]
                if b == 0:
                    brackets.append(sympy.Integer(0))
                    continue
                b = self.nambu.bracket(b, g.G1, g.G2)
                size = node_count(b)
                if size > settings.NODE_LIMIT:
                    raise ExpressionBlowupError(
                        f"Bracket level {k + 1} for {x.name} has {size} nodes (limit {settings.NODE_LIMIT})"
                    )
                brackets.append(b)
            terms.append(brackets)
        logger.debug(f"lie_series: order {order}, eps {eps}")
        return LieSeriesMap(field=field, eps=eps, order=order, terms=terms)

    def flow_map(self, g: GeneratorPair, eps: float, h: float = settings.RK4_STEP,
                 params: Optional[Dict[str, float]] = None) -> PointMap:
        """Endpoint of dx/ds = f(x) from s = 0 to s = eps, as a function of the start point."""
        if h <= 0:
            raise ValueError("Step size h must be positive")
        field = self.field_from_generators(g)
        rhs = compile_field(field.components, COORDS, params)

        def apply(x: Sequence[float]) -> np.ndarray:
            return endpoint(rhs, x, 0.0, eps, h)

        return apply

    def cross_check(self, g: GeneratorPair, eps: float, order: int = settings.LIE_ORDER,
                    h: float = settings.RK4_STEP, d: Optional[Domain] = None) -> CheckReport:
        d = d or Domain()
        series = self.lie_series(g, eps, order)
        flow = self.flow_map(g, eps, h, d.params)
        exprs = series.partial_sums()
        names = sorted(set(free_names(exprs)) | {x.name for x in COORDS})
        tolerance = max(series.remainder_bound(), 10 * h ** 4)

        def deviation(point):
            flowed = flow([point["x1"], point["x2"], point["x3"]])
            return float(np.max(np.abs(series.evaluate_at(point) - flowed)))

        worst, worst_point = 0.0, {}
        for point, value in sample_points(names, d, deviation):
            if value >= worst:
                worst, worst_point = value, point
        check = IdentityCheck(label="lie_series vs flow", residual=worst, worst_point=worst_point,
                              passed=worst <= tolerance, tolerance=tolerance)
        logger.info(f"cross_check: deviation {worst:.3e} against {tolerance:.3e}")
        return CheckReport.from_checks([check])

    def divergence_check(self, g: GeneratorPair, d: Optional[Domain] = None) -> CheckReport:
        div = self.divergence(self.field_from_generators(g))
        return CheckReport.from_checks([check_identity("generator_divergence", div, sympy.Integer(0), d or Domain())])

    def closed_form_check(self, series: LieSeriesMap, closed: Sequence[sympy.Expr],
                          d: Optional[Domain] = None) -> CheckReport:
        """Componentwise comparison of the truncated series with a known finite map."""
        d = d or Domain()
        items = [(f"series[X{i + 1}]", X, target) for i, (X, target) in enumerate(zip(series.partial_sums(), closed))]
        return check_identities(items, d)

    @staticmethod
    def rotation_about_x1(eps: float) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        x1, x2, x3 = COORDS
        c, s = sympy.Float(math.cos(eps)), sympy.Float(math.sin(eps))
        return (x1, x2 * c + x3 * s, -x2 * s + x3 * c)
