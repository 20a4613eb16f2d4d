"""Classic fixed-step fourth-order Runge-Kutta."""
import logging
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np
import sympy

from exceptions import IntegrationError, UnboundParameterError
from symbolic.calculus import bind_parameters
from symbolic.variables import t as time_symbol

logger = logging.getLogger(__name__)

RHS = Callable[[float, np.ndarray], np.ndarray]


def compile_field(components: Sequence[sympy.Expr], state_symbols: Sequence[sympy.Symbol],
                  params=None) -> RHS:
    """Turn three component expressions into f(t, y) -> ndarray."""
    bound = [bind_parameters(c, params or {}) for c in components]
    allowed = set(state_symbols) | {time_symbol}
    leftover = {s.name for c in bound for s in c.free_symbols if s not in allowed}
    if leftover:
        raise UnboundParameterError(leftover)
    fn = sympy.lambdify((*state_symbols, time_symbol), list(bound), modules="math")

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        return np.asarray(fn(y[0], y[1], y[2], s), dtype=float)

    return rhs


def rk4_step(f: RHS, s: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(s, y)
    k2 = f(s + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(s + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(s + h, y + h * k3)
    return y + h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0


def step_count(t0: float, t_end: float, h: float) -> int:
    return max(1, math.ceil((t_end - t0) / h - 1e-9))


def integrate(f: RHS, y0: Sequence[float], t0: float, t_end: float, h: float) -> Tuple[List[float], List[np.ndarray], bool]:
    """
    Step from t0 to t_end. The step is shrunk uniformly so that the last step
    lands on t_end. Returns (times, states, aborted); integration stops at the
    first non-finite state.
    """
    if h <= 0:
        raise ValueError("Step size must be positive")
    if t_end < t0:
        raise ValueError("t_end must not precede the start time")
    if t_end == t0:
        return [t0], [np.asarray(y0, dtype=float)], False
    n = step_count(t0, t_end, h)
    h_eff = (t_end - t0) / n
    times = [t0]
    states = [np.asarray(y0, dtype=float)]
    for i in range(n):
        try:
            y = rk4_step(f, times[-1], states[-1], h_eff)
        except (ZeroDivisionError, ValueError, OverflowError) as err:
            logger.error(f"Integration aborted at t={times[-1]:.6g}: {err}")
            return times, states, True
        if not np.all(np.isfinite(y)):
            logger.error(f"Integration aborted at t={times[-1]:.6g}: non-finite state")
            return times, states, True
        times.append(t0 + (i + 1) * h_eff)
        states.append(y)
    return times, states, False


def endpoint(f: RHS, y0: Sequence[float], t0: float, t_end: float, h: float) -> np.ndarray:
    """Integrate and return only the final state; negative spans integrate backwards."""
    if t_end == t0:
        return np.asarray(y0, dtype=float)
    direction = 1.0 if t_end > t0 else -1.0
    span = abs(t_end - t0)

    def g(s, y):
        return direction * f(t0 + direction * (s - t0), y)

    times, states, aborted = integrate(g, y0, t0, t0 + span, h)
    if aborted:
        raise IntegrationError(f"Non-finite state while integrating to s={t_end}")
    return states[-1]
