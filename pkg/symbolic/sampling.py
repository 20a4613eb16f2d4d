"""Probabilistic identity testing: two expressions are equal when they agree at
randomly drawn safe points of a Domain."""
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

import settings
from exceptions import DomainExhaustedError, EvaluationDomainError, InversionError, UnboundParameterError
from schemas.report import CheckReport, EquivReport, IdentityCheck
from symbolic.calculus import evaluate
from symbolic.domain import Domain

logger = logging.getLogger(__name__)

PointFn = Callable[[Dict[str, float]], Tuple[float, float]]


def free_names(exprs: Iterable[sympy.Expr]) -> List[str]:
    names = set()
    for e in exprs:
        names |= {s.name for s in sympy.sympify(e).free_symbols}
    return sorted(names)


def scaled_residual(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _draw(names: Sequence[str], domain: Domain, rng: np.random.Generator) -> Dict[str, float]:
    point = dict(domain.params)
    for name in names:
        if name in domain.params:
            continue
        lo, hi = domain.bounds_for(name)
        point[name] = float(rng.uniform(lo, hi))
    return point


def _require_bindings(names: Sequence[str], domain: Domain):
    unbound = [n for n in names if n not in domain.params and domain.bounds_for(n) is None]
    if unbound:
        raise UnboundParameterError(unbound)


def sample_points(names: Sequence[str], domain: Domain, accept: Callable[[Dict[str, float]], object],
                  n: Optional[int] = None) -> List[Tuple[Dict[str, float], object]]:
    """Draw `n` points on which `accept` succeeds; rejected points are resampled."""
    _require_bindings(names, domain)
    n = n or domain.samples
    rng = np.random.default_rng(domain.seed)
    limit = n * settings.OVERSAMPLE
    found: List[Tuple[Dict[str, float], object]] = []
    attempts = 0
    while len(found) < n and attempts < limit:
        attempts += 1
        point = _draw(names, domain, rng)
        try:
            found.append((point, accept(point)))
        except (EvaluationDomainError, InversionError):
            continue
    if len(found) < n:
        raise DomainExhaustedError(n, len(found), attempts)
    if attempts > n:
        logger.debug(f"Rejected {attempts - n} sample points outside the function domains")
    return found


def sample_residuals(label: str, names: Sequence[str], fn: PointFn, domain: Domain,
                     tol: Optional[float] = None) -> IdentityCheck:
    tol = domain.tol if tol is None else tol
    worst, worst_raw, worst_point = 0.0, 0.0, {}
    count = domain.samples if any(name not in domain.params for name in names) else 1
    for point, (a, b) in sample_points(names, domain, fn, count):
        r = scaled_residual(a, b)
        if r >= worst:
            worst, worst_raw, worst_point = r, abs(a - b), point
    check = IdentityCheck(label=label, residual=worst, raw_residual=worst_raw, worst_point=worst_point,
                          passed=worst <= tol, tolerance=tol)
    logger.debug(f"{label}: residual {worst:.3e} ({'pass' if check.passed else 'FAIL'})")
    return check


def check_identity(label: str, lhs: sympy.Expr, rhs: sympy.Expr, domain: Domain,
                   tol: Optional[float] = None) -> IdentityCheck:
    names = free_names([lhs, rhs])
    return sample_residuals(label, names, lambda p: (evaluate(lhs, p), evaluate(rhs, p)), domain, tol)


def check_identities(items: Iterable[Tuple[str, sympy.Expr, sympy.Expr]], domain: Domain,
                     notes: Optional[List[str]] = None) -> CheckReport:
    return CheckReport.from_checks([check_identity(label, a, b, domain) for label, a, b in items], notes)


def equiv(a: sympy.Expr, b: sympy.Expr, domain: Optional[Domain] = None) -> EquivReport:
    domain = domain or Domain()
    check = check_identity("equiv", a, b, domain)
    samples = domain.samples if free_names([a, b]) else 1
    return EquivReport(equal=check.passed, residual=check.residual, worst_point=check.worst_point, samples=samples)


def is_zero(expr: sympy.Expr, domain: Optional[Domain] = None) -> bool:
    return equiv(expr, sympy.Integer(0), domain).equal
