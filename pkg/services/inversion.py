"""Numeric inversion of a phase map by Newton iteration, for maps without a symbolic inverse."""
import logging
from typing import Dict, Optional, Sequence

import numpy as np

import settings
from exceptions import EvaluationDomainError, InversionError
from schemas.phase import PhaseMap
from symbolic.calculus import evaluate, jacobian3
from symbolic.domain import Domain

logger = logging.getLogger(__name__)

SOURCE = ("x1", "x2", "x3")
TARGET = ("X1", "X2", "X3")


class NewtonInverter:
    def __init__(self, m: PhaseMap, tol: float = settings.NEWTON_TOL, max_iter: int = settings.NEWTON_MAXITER):
        self.m = m
        self.tol = tol
        self.max_iter = max_iter
        self.jacobian = jacobian3(*m.components)

    def forward(self, x: Sequence[float], bindings: Dict[str, float]) -> np.ndarray:
        point = {**bindings, **dict(zip(SOURCE, x))}
        return np.array([evaluate(c, point) for c in self.m.components])

    def jacobian_at(self, x: Sequence[float], bindings: Dict[str, float]) -> np.ndarray:
        point = {**bindings, **dict(zip(SOURCE, x))}
        return np.array([[evaluate(self.jacobian[i, j], point) for j in range(3)] for i in range(3)])

    def solve(self, X: Sequence[float], bindings: Dict[str, float], seed: Optional[Sequence[float]] = None) -> np.ndarray:
        """Find x with m(x, t) = X. `bindings` carries t and parameters; the seed defaults to X itself."""
        target = np.asarray(X, dtype=float)
        x = np.array(seed if seed is not None else target, dtype=float)
        scale = max(1.0, float(np.linalg.norm(target)))
        for _ in range(self.max_iter):
            try:
                residual = self.forward(x, bindings) - target
                if np.linalg.norm(residual) <= self.tol * scale:
                    return x
                x = x - np.linalg.solve(self.jacobian_at(x, bindings), residual)
            except (np.linalg.LinAlgError, EvaluationDomainError) as err:
                raise InversionError(f"Newton step failed: {err}") from err
        logger.debug(f"Newton stalled at {x} for target {target}")
        raise InversionError(f"Newton did not converge in {self.max_iter} iterations")

    def image_domain(self, d: Domain) -> Domain:
        """Sampling box in X: explicit X bounds, else the bounds of the matching x coordinate."""
        bounds = {X: d.bounds[x] for x, X in zip(SOURCE, TARGET) if x in d.bounds and X not in d.bounds}
        return d.updated(bounds=bounds)

    def preimage(self, point: Dict[str, float], d: Domain) -> Dict[str, float]:
        """
        Bindings at the x with m(x, t) = X for a point drawn in X-space. A preimage
        outside the x box raises EvaluationDomainError so the sampler draws again.
        """
        bindings = {k: v for k, v in point.items() if k not in TARGET}
        x = self.solve([point[X] for X in TARGET], bindings)
        for name, value in zip(SOURCE, x):
            lo, hi = d.bounds_for(name)
            if not lo <= value <= hi:
                raise EvaluationDomainError(f"Preimage {name}={value:.3g} lies outside [{lo}, {hi}]")
        return {**bindings, **dict(zip(SOURCE, (float(v) for v in x)))}
