import logging
from typing import Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict

from schemas.phase import GenFunPair, HamiltonPair, PhaseMap
from schemas.report import CheckReport
from symbolic.calculus import diff, jacobian2, simplify
from symbolic.domain import Domain
from symbolic.printer import to_text
from symbolic.sampling import check_identities
from symbolic.variables import COORDS, t

logger = logging.getLogger(__name__)

x1, x2, x3 = COORDS
# (xi, xj) planes in the order the A, B, C coefficients are attached to
PLANES = ((x2, x3), (x3, x1), (x1, x2))


class ABCTriple(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    A: sympy.Expr
    B: sympy.Expr
    C: sympy.Expr

    @property
    def components(self) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        return (self.A, self.B, self.C)

    def divergence(self) -> sympy.Expr:
        return simplify(diff(self.A, x1) + diff(self.B, x2) + diff(self.C, x3))

    def to_json(self):
        return {"A": to_text(self.A), "B": to_text(self.B), "C": to_text(self.C)}


class GenFunService:
    """Generating functions checked against the two-form identities of a map."""

    def abc_coefficients(self, m: PhaseMap) -> ABCTriple:
        X1, X2, X3 = m.components
        A, B, C = (-X1 * jacobian2(X2, X3, u, v) for u, v in PLANES)
        return ABCTriple(A=simplify(x1 + A), B=simplify(B), C=simplify(C))

    def divergence_identity(self, m: PhaseMap, d: Optional[Domain] = None) -> CheckReport:
        d = d or m.domain
        return check_identities([("abc_divergence", self.abc_coefficients(m).divergence(), sympy.Integer(0))], d)

    def gf_coefficients(self, gf: GenFunPair) -> ABCTriple:
        """A, B, C as the generating functions produce them: ∂(F1, F2) over each plane."""
        A, B, C = (jacobian2(gf.F1, gf.F2, u, v) for u, v in PLANES)
        return ABCTriple(A=A, B=B, C=C)

    def verify_genfun(self, m: PhaseMap, gf: GenFunPair, d: Optional[Domain] = None,
                      negated: bool = False) -> CheckReport:
        """
        ∂(F1, F2) over each plane against A, B, C, or against -A, -B, -C when
        `negated` (the pair written in the other order).
        """
        d = d or m.domain
        abc = self.abc_coefficients(m)
        produced = self.gf_coefficients(gf)
        sign = -1 if negated else 1
        items = [
            (f"dF1^dF2[{name}]", lhs, sign * rhs)
            for name, lhs, rhs in zip(("A", "B", "C"), produced.components, abc.components)
        ]
        for name, F in (("F1", gf.F1), ("F2", gf.F2)):
            pfaffian = abc.A * diff(F, x1) + abc.B * diff(F, x2) + abc.C * diff(F, x3)
            items.append((f"gf_pfaffian[{name}]", pfaffian, sympy.Integer(0)))
        report = check_identities(items, d)
        logger.info(f"verify_genfun[{m.label or 'map'}]: {'pass' if report.passed else 'FAIL'}")
        return report

    def pfaffian_residual_X(self, m: PhaseMap, gf: GenFunPair, d: Optional[Domain] = None,
                            negated: bool = False) -> CheckReport:
        d = d or m.domain
        sign = -1 if negated else 1
        A, B, C = (sign * c for c in self.gf_coefficients(gf).components)
        items = []
        for index in (1, 2):
            X = m.components[index]
            residual = (A - x1) * diff(X, x1) + B * diff(X, x2) + C * diff(X, x3)
            items.append((f"new_coordinate_pfaffian[X{index + 1}]", residual, sympy.Integer(0)))
        return check_identities(items, d)

    def verify_time_part(self, m: PhaseMap, gf: GenFunPair, p: HamiltonPair, k: HamiltonPair,
                         d: Optional[Domain] = None) -> CheckReport:
        """
        ∂(F1, F2)/∂(xi, t) against -H1 ∂H2/∂xi + K1 ∂K2/∂xi - X1 ∂(X2, X3)/∂(xi, t).
        The K pair is expected as functions of x; an X-form pair is pulled back here.
        """
        d = d or m.domain
        p = p.in_x(m)
        k = k.in_x(m)
        X1, X2, X3 = m.components
        items = []
        for xi in COORDS:
            lhs = jacobian2(gf.F1, gf.F2, xi, t)
            rhs = -p.H1 * diff(p.H2, xi) + k.H1 * diff(k.H2, xi) - X1 * jacobian2(X2, X3, xi, t)
            items.append((f"time_part[{xi.name}]", lhs, rhs))
        return check_identities(items, d)

    def nambu_two_form_check(self, m: PhaseMap, HG: Optional[Tuple[sympy.Expr, sympy.Expr]] = None,
                             d: Optional[Domain] = None) -> CheckReport:
        """Representability of the map through a closed two-form dH ∧ dG."""
        d = d or m.domain
        items = [("two_form_restriction", sum((diff(X, x) for X, x in zip(m.components, COORDS)), sympy.Integer(0)),
                  sympy.Integer(0))]
        if HG is not None:
            H, G = HG
            for (u, v), X, name in zip(PLANES, m.components, ("X1", "X2", "X3")):
                items.append((f"two_form[{name}]", jacobian2(H, G, u, v), X))
        report = check_identities(items, d)
        restriction = report.identities[0]
        if not restriction.passed:
            report.notes.append(f"map is not eligible for the closed two-form representation "
                                f"(divergence of X is {restriction.raw_residual:.6g} at the worst point)")
        return report
