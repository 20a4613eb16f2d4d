import logging
from typing import Iterable, Optional

import numpy as np
import sympy

import settings
from exceptions import IntegrationError
from schemas.phase import HamiltonPair, VectorField
from schemas.report import Trajectory, TrajectorySample
from services.integrator import compile_field, integrate
from symbolic.calculus import (
    bind_parameters,
    det3,
    diff,
    is_time_independent,
    jacobian2,
    jacobian3,
    simplify,
)
from symbolic.domain import Domain, Point
from symbolic.sampling import is_zero
from symbolic.variables import COORDS, coords_for, t
from utils import timer

logger = logging.getLogger(__name__)


class NambuService:
    """Nambu bracket, Nambu-Hamilton equations and their numeric flow."""

    def bracket(self, f, g, h, variables: Iterable = COORDS) -> sympy.Expr:
        """{f, g, h} = ∂(f, g, h)/∂(x1, x2, x3)."""
        return simplify(det3(jacobian3(f, g, h, variables)))

    def nh_rhs(self, pair: HamiltonPair) -> VectorField:
        coords = coords_for(pair.coords)
        v = [self.bracket(c, pair.H1, pair.H2, coords) for c in coords]
        return VectorField(v1=v[0], v2=v[1], v3=v[2])

    def total_derivative(self, f: sympy.Expr, pair: HamiltonPair) -> sympy.Expr:
        coords = coords_for(pair.coords)
        return simplify(self.bracket(f, pair.H1, pair.H2, coords) + diff(f, t))

    def is_independent(self, pair: HamiltonPair, domain: Optional[Domain] = None) -> bool:
        """dH1 ∧ dH2 ≠ 0: not all three 2×2 Jacobians vanish."""
        c1, c2, c3 = coords_for(pair.coords)
        minors = [
            jacobian2(pair.H1, pair.H2, c2, c3),
            jacobian2(pair.H1, pair.H2, c3, c1),
            jacobian2(pair.H1, pair.H2, c1, c2),
        ]
        return not all(is_zero(m, domain) for m in minors)

    def integrate_flow(self, pair: HamiltonPair, x0: Point, t_end: float,
                       h: float = settings.RK4_STEP) -> Trajectory:
        if h <= 0:
            raise ValueError("Step size h must be positive")
        if t_end <= x0.t:
            raise ValueError(f"t_end={t_end} must exceed the start time {x0.t}")
        coords = coords_for(pair.coords)
        field = self.nh_rhs(pair)
        rhs = compile_field(field.components, coords, x0.params)
        with timer(f"integrate_flow[{pair.label or 'pair'}]"):
            times, states, aborted = integrate(rhs, x0.state, x0.t, t_end, h)
        samples = [TrajectorySample(t=s, x1=y[0], x2=y[1], x3=y[2]) for s, y in zip(times, states)]
        h_eff = (times[-1] - times[0]) / max(1, len(times) - 1) if len(times) > 1 else h
        trajectory = Trajectory(samples=samples, h=h_eff, drift=self._drift(pair, times, states, x0),
                                aborted=aborted)
        if aborted:
            raise IntegrationError(f"Non-finite state at t={times[-1]:.6g}", trajectory)
        return trajectory

    def _drift(self, pair: HamiltonPair, times, states, x0: Point) -> dict:
        coords = coords_for(pair.coords)
        drift = {}
        for name, H in (("H1", pair.H1), ("H2", pair.H2)):
            if not is_time_independent(H):
                continue
            H = bind_parameters(H, x0.params)
            if H.free_symbols - set(coords):
                logger.debug(f"no drift for {name}: unbound symbols remain")
                continue
            fn = sympy.lambdify(coords, H, modules="math")
            try:
                values = np.array([fn(*y) for y in states], dtype=float)
            except (OverflowError, ValueError, ZeroDivisionError):
                drift[name] = float("inf")
                continue
            drift[name] = float(np.max(np.abs(values - values[0])))
        return drift
