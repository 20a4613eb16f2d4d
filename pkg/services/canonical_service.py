import logging
from typing import List, Optional, Tuple

import numpy as np
import sympy

import settings
from exceptions import MissingInverseError, TimeDependentMapError
from schemas.phase import HamiltonPair, PhaseMap
from schemas.report import CanonicityVerdict, CheckReport, IdentityCheck
from services.inversion import NewtonInverter
from services.nambu_service import NambuService
from symbolic.calculus import diff, evaluate, jacobian2, jacobian3, simplify
from symbolic.domain import Domain, Point
from symbolic.printer import to_text
from symbolic.sampling import check_identities, check_identity, equiv, free_names, sample_points, sample_residuals
from symbolic.variables import COORDS, NEW_COORDS, t

logger = logging.getLogger(__name__)

CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
PAIR_LABELS = ("23", "31", "12")


def _image_names(exprs) -> List[str]:
    """Sampled names for a check drawn in X-space: X1..X3 plus time and parameters."""
    return sorted((set(free_names(exprs)) - {"x1", "x2", "x3"}) | {"X1", "X2", "X3"})


class CanonicalService:
    """Canonicity of phase maps and the behaviour of Hamiltonian pairs under them."""

    def __init__(self, nambu: Optional[NambuService] = None):
        self.nambu = nambu or NambuService()

    def map_bracket(self, m: PhaseMap) -> sympy.Expr:
        return self.nambu.bracket(*m.components)

    def classify(self, m: PhaseMap, d: Optional[Domain] = None) -> CanonicityVerdict:
        d = d or m.domain
        bracket = self.map_bracket(m)
        names = free_names([bracket])
        if names:
            (_, value), = sample_points(names, d, lambda p: evaluate(bracket, p), n=1)
        else:
            value = evaluate(bracket, d.params)
        constant = sympy.Float(value)
        report = equiv(bracket, constant, d)
        if not report.equal:
            verdict = CanonicityVerdict(kind="not_universal", bracket_expr=to_text(bracket), residual=report.residual)
        elif equiv(bracket, sympy.Integer(1), d).equal:
            verdict = CanonicityVerdict(kind="canonical", bracket_expr=to_text(bracket), constant_value=1.0,
                                        residual=report.residual)
        else:
            verdict = CanonicityVerdict(kind="canonoid_universal", bracket_expr=to_text(bracket),
                                        constant_value=value, residual=report.residual)
        logger.info(f"classify[{m.label or 'map'}]: {verdict.kind} (bracket {verdict.bracket_expr})")
        return verdict

    def universality_coefficients(self, m: PhaseMap) -> List[sympy.Expr]:
        """Σi ∂/∂Xi (∂Xi/∂xj) for j = 1, 2, 3, with ∂/∂Xi = (J⁻¹)ki ∂/∂xk."""
        J = sympy.Matrix(jacobian3(*m.components))
        J_inv = J.adjugate() / self.map_bracket(m)
        coefficients = []
        for j, xj in enumerate(COORDS):
            total = sympy.Integer(0)
            for i in range(3):
                for k, xk in enumerate(COORDS):
                    total += J_inv[k, i] * diff(J[i, j], xk)
            coefficients.append(simplify(total))
        return coefficients

    def coefficient_report(self, m: PhaseMap, d: Optional[Domain] = None) -> CheckReport:
        d = d or m.domain
        items = [(f"universality[{j + 1}]", c, sympy.Integer(0))
                 for j, c in enumerate(self.universality_coefficients(m))]
        return check_identities(items, d)

    def x_velocity(self, m: PhaseMap, p: HamiltonPair) -> Tuple[sympy.Expr, ...]:
        """Ẋi(x, t) = ∂Xi/∂xj ẋj + ∂Xi/∂t along the flow of p."""
        xdot = self.nambu.nh_rhs(p.in_x(m)).components
        return tuple(
            sum((diff(Xi, xj) * vj for xj, vj in zip(COORDS, xdot)), sympy.Integer(0)) + diff(Xi, t)
            for Xi in m.components
        )

    def canonoid_divergence(self, m: PhaseMap, p: HamiltonPair, d: Optional[Domain] = None) -> CheckReport:
        d = d or m.domain
        Xdot = self.x_velocity(m, p)
        if m.has_inverse:
            in_X = [m.push_forward(v) for v in Xdot]
            divergence = sum((diff(v, Xi) for v, Xi in zip(in_X, NEW_COORDS)), sympy.Integer(0))
            check = check_identity("div_X(Xdot)", m.pull_back(divergence), sympy.Integer(0), d)
            return CheckReport.from_checks([check])
        logger.info(f"canonoid_divergence[{m.label or 'map'}]: no symbolic inverse, using Newton fallback")
        return CheckReport.from_checks([self._numeric_divergence(m, Xdot, d)],
                                       notes=["evaluated with numeric Newton inversion"])

    def _numeric_divergence(self, m: PhaseMap, Xdot, d: Domain) -> IdentityCheck:
        inverter = NewtonInverter(m)
        D = jacobian3(*Xdot)
        names = _image_names([*m.components, *Xdot])

        def at(point):
            x = inverter.preimage(point, d)
            J = inverter.jacobian_at([x["x1"], x["x2"], x["x3"]], x)
            Dv = np.array([[evaluate(D[i, j], x) for j in range(3)] for i in range(3)])
            return float(np.trace(Dv @ np.linalg.inv(J))), 0.0

        return sample_residuals("div_X(Xdot)", names, at, inverter.image_domain(d))

    def direct_conditions(self, m: PhaseMap, d: Optional[Domain] = None) -> CheckReport:
        d = d or m.domain
        inverse = m.require_inverse()
        items = []
        for i, j, k in CYCLIC:
            for l, mm, n in CYCLIC:
                lhs = diff(m.components[i], COORDS[l])
                rhs = m.pull_back(jacobian2(inverse[mm], inverse[n], NEW_COORDS[j], NEW_COORDS[k]))
                items.append((f"dX{i + 1}/dx{l + 1}", lhs, rhs))
        for i, j, k in CYCLIC:
            for l, mm, n in CYCLIC:
                lhs = m.pull_back(diff(inverse[i], NEW_COORDS[l]))
                rhs = jacobian2(m.components[mm], m.components[n], COORDS[j], COORDS[k])
                items.append((f"dx{i + 1}/dX{l + 1}", lhs, rhs))
        return check_identities(items, d)

    def transport_hamiltonians(self, m: PhaseMap, p: HamiltonPair) -> HamiltonPair:
        if m.time_dependent:
            raise TimeDependentMapError("Transport by substitution only applies to time-independent maps")
        m.require_inverse()
        source = p.in_x(m)
        return HamiltonPair(
            H1=simplify(m.push_forward(source.H1)),
            H2=simplify(m.push_forward(source.H2)),
            label=f"{p.label or 'pair'} transported",
            coords="X",
        )

    def interior_product(self, m: PhaseMap, p: HamiltonPair) -> Tuple[sympy.Expr, ...]:
        """
        f_ij for (i, j) = (2, 3), (3, 1), (1, 2): the bracket-weighted source
        Jacobian plus the cyclic ∂(Xk, Xl)/∂(xi, xj)·∂Xm/∂t sum.
        """
        p = p.in_x(m)
        bracket = self.map_bracket(m)
        X = m.components
        rates = [diff(Xi, t) for Xi in X]
        f = []
        for _, a, b in CYCLIC:
            xa, xb = COORDS[a], COORDS[b]
            total = bracket * jacobian2(p.H1, p.H2, xa, xb)
            for k, l, mm in ((1, 2, 0), (2, 0, 1), (0, 1, 2)):
                total += jacobian2(X[k], X[l], xa, xb) * rates[mm]
            f.append(simplify(total))
        return tuple(f)

    def verify_new_hamiltonians(self, m: PhaseMap, p: HamiltonPair, k: HamiltonPair,
                                d: Optional[Domain] = None, check_x_form: Optional[bool] = None) -> CheckReport:
        """
        (a) ∂(K1∘m, K2∘m)/∂(xi, xj) ≡ f_ij, (b) Ẋi ∂Kα/∂Xi ≡ 0 in X-coordinates,
        (c) f_[ij ∂(Kα∘m)/∂x_k] ≡ 0.
        """
        d = d or m.domain
        notes = []
        k_x = k.in_x(m)
        f = self.interior_product(m, p)
        items = []
        for (_, a, b), label, fij in zip(CYCLIC, PAIR_LABELS, f):
            items.append((f"interior[{label}]", jacobian2(k_x.H1, k_x.H2, COORDS[a], COORDS[b]), fij))
        for name, K in (("K1", k_x.H1), ("K2", k_x.H2)):
            total = sum((fi * diff(K, xi) for fi, xi in zip(f, COORDS)), sympy.Integer(0))
            items.append((f"interior_pfaffian[{name}]", total, sympy.Integer(0)))

        want_x_form = m.has_inverse if check_x_form is None else check_x_form
        if want_x_form:
            if not m.has_inverse and k.coords == "x":
                raise MissingInverseError("Checking Ẋ·∇K = 0 in X-coordinates needs the inverse map")
            k_X = k.in_X(m)
            Xdot = [m.push_forward(v) for v in self.x_velocity(m, p)] if m.has_inverse else None
            for name, K in (("K1", k_X.H1), ("K2", k_X.H2)):
                if Xdot is not None:
                    total = sum((v * diff(K, Xi) for v, Xi in zip(Xdot, NEW_COORDS)), sympy.Integer(0))
                    items.append((f"transport_pfaffian[{name}]", m.pull_back(total), sympy.Integer(0)))
                else:
                    # Ẋ stays in x; ∂K/∂Xi is pulled back through the map
                    Xdot_x = self.x_velocity(m, p)
                    total = sum((v * m.pull_back(diff(K, Xi)) for v, Xi in zip(Xdot_x, NEW_COORDS)),
                                sympy.Integer(0))
                    items.append((f"transport_pfaffian[{name}]", total, sympy.Integer(0)))
        else:
            notes.append("X-coordinate Pfaffian skipped: no inverse")
        report = check_identities(items, d, notes)
        logger.info(f"verify_new_hamiltonians[{m.label or 'map'}]: {'pass' if report.passed else 'FAIL'}")
        return report

    def bracket_preservation(self, m: PhaseMap, f, g, h, d: Optional[Domain] = None) -> CheckReport:
        d = d or m.domain
        notes = []
        if self.classify(m, d).kind != "canonical":
            logger.warning(f"bracket_preservation on non-canonical map {m.label or m.texts()}: not expected to hold")
            notes.append("map is not canonical; preservation is not expected")
        lhs = self.nambu.bracket(f, g, h)
        if m.has_inverse:
            pushed = [m.push_forward(e) for e in (f, g, h)]
            rhs = m.pull_back(self.nambu.bracket(*pushed, variables=NEW_COORDS))
            return CheckReport.from_checks([check_identity("{f,g,h}_x = {f,g,h}_X", lhs, rhs, d)], notes)
        notes.append("evaluated with numeric Newton inversion")
        return CheckReport.from_checks([self._numeric_preservation(m, (f, g, h), lhs, d)], notes)

    def _numeric_preservation(self, m: PhaseMap, fgh, lhs, d: Domain) -> IdentityCheck:
        inverter = NewtonInverter(m)
        G = jacobian3(*fgh)
        names = _image_names([*m.components, *fgh])

        def at(point):
            x = inverter.preimage(point, d)
            Gv = np.array([[evaluate(G[i, j], x) for j in range(3)] for i in range(3)])
            J = inverter.jacobian_at([x["x1"], x["x2"], x["x3"]], x)
            return evaluate(lhs, x), float(np.linalg.det(Gv @ np.linalg.inv(J)))

        return sample_residuals("{f,g,h}_x = {f,g,h}_X", names, at, inverter.image_domain(d))

    def covariance_check(self, m: PhaseMap, p: HamiltonPair, k: HamiltonPair, x0: Point, t_end: float,
                         h: float = settings.RK4_STEP, tol: float = 1e-6, drift_tol: float = 1e-8) -> CheckReport:
        source = self.nambu.integrate_flow(p.in_x(m), x0, t_end, h)
        mapped = []
        for sample in source.samples:
            point = {**x0.params, "x1": sample.x1, "x2": sample.x2, "x3": sample.x3, "t": sample.t}
            mapped.append([evaluate(c, point) for c in m.components])
        X0 = mapped[0]
        start = Point(x1=X0[0], x2=X0[1], x3=X0[2], t=x0.t, params=x0.params)
        target = self.nambu.integrate_flow(k.in_X(m), start, t_end, h)
        deviation = float(np.max(np.abs(np.array(mapped) - np.array(target.states))))
        checks = [IdentityCheck(label="trajectory deviation", residual=deviation, passed=deviation <= tol,
                                tolerance=tol)]
        for prefix, trajectory in (("source", source), ("target", target)):
            for name, value in trajectory.drift.items():
                checks.append(IdentityCheck(label=f"{prefix} drift[{name}]", residual=value,
                                            passed=value <= drift_tol, tolerance=drift_tol))
        logger.info(f"covariance_check[{m.label or 'map'}]: max deviation {deviation:.3e}")
        return CheckReport.from_checks(checks)
