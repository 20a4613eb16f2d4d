import math
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import sympy

import settings
from exceptions import EvaluationDomainError, UnboundParameterError
from symbolic.variables import COORDS, SIDES, t

Variable = Union[str, sympy.Symbol]

_ALL_VARIABLES = {**SIDES["x"], **SIDES["X"]}
_NON_FINITE = (sympy.zoo, sympy.oo, -sympy.oo, sympy.nan)


def as_symbol(v: Variable) -> sympy.Symbol:
    if isinstance(v, sympy.Symbol):
        return v
    if v in _ALL_VARIABLES:
        return _ALL_VARIABLES[v]
    raise ValueError(f"Not a phase-space variable: {v!r}")


@lru_cache(maxsize=4096)
def compile_expr(expr: sympy.Expr) -> Tuple[Tuple[str, ...], object]:
    symbols = tuple(sorted(expr.free_symbols, key=lambda s: s.name))
    fn = sympy.lambdify(symbols, expr, modules="math")
    return tuple(s.name for s in symbols), fn


def _check_value(value) -> float:
    if isinstance(value, complex):
        if value.imag != 0:
            raise EvaluationDomainError("Expression is not real at this point (non-integer power of a negative base?)")
        value = value.real
    value = float(value)
    if not math.isfinite(value):
        raise EvaluationDomainError("Non-finite value")
    if abs(value) > settings.MAX_MAGNITUDE:
        raise EvaluationDomainError(f"Value {value:.3e} exceeds {settings.MAX_MAGNITUDE:.0e} (near a singularity?)")
    return value


def evaluate(expr: sympy.Expr, bindings: Mapping[Variable, float]) -> float:
    """Evaluate `expr` at the point given by `bindings` (names or symbols -> floats)."""
    expr = sympy.sympify(expr)
    if expr.has(*_NON_FINITE):
        raise EvaluationDomainError(f"Expression {expr} is not finite")
    names, fn = compile_expr(expr)
    values = {(k.name if isinstance(k, sympy.Symbol) else k): v for k, v in bindings.items()}
    missing = [n for n in names if n not in values]
    if missing:
        raise UnboundParameterError(missing)
    try:
        raw = fn(*(float(values[n]) for n in names))
    except (ZeroDivisionError, ValueError, OverflowError) as err:
        raise EvaluationDomainError(f"Cannot evaluate {expr}: {err}") from err
    except TypeError as err:
        # math.* functions reject complex intermediates
        raise EvaluationDomainError(f"Cannot evaluate {expr}: {err}") from err
    return _check_value(raw)


def evaluate_many(exprs: Sequence[sympy.Expr], bindings: Mapping[Variable, float]) -> Tuple[float, ...]:
    return tuple(evaluate(e, bindings) for e in exprs)


def diff(expr: sympy.Expr, v: Variable) -> sympy.Expr:
    return sympy.diff(expr, as_symbol(v))


def simplify(expr: sympy.Expr) -> sympy.Expr:
    """
    Light normalization: sympy's constructors already fold constants and apply
    the 0/1 identities; polynomials are additionally expanded and rational
    functions cancelled. Transcendental trees are left as they are.
    """
    expr = sympy.sympify(expr)
    symbols = sorted(expr.free_symbols, key=lambda s: s.name)
    if not symbols:
        return expr
    if expr.is_polynomial(*symbols):
        return sympy.expand(expr)
    if expr.is_rational_function(*symbols):
        return sympy.cancel(expr)
    return expr


def jacobian2(f: sympy.Expr, g: sympy.Expr, u: Variable, v: Variable) -> sympy.Expr:
    """∂(f,g)/∂(u,v)."""
    u, v = as_symbol(u), as_symbol(v)
    return sympy.diff(f, u) * sympy.diff(g, v) - sympy.diff(f, v) * sympy.diff(g, u)


def jacobian3(f1, f2, f3, variables: Iterable[Variable] = COORDS) -> sympy.ImmutableMatrix:
    variables = [as_symbol(v) for v in variables]
    if len(variables) != 3:
        raise ValueError("jacobian3 needs exactly three variables")
    return sympy.ImmutableMatrix([[sympy.diff(f, v) for v in variables] for f in (f1, f2, f3)])


def det3(m: sympy.MatrixBase) -> sympy.Expr:
    """Cofactor expansion along the first row."""
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def divergence(components: Sequence[sympy.Expr], variables: Iterable[Variable] = COORDS) -> sympy.Expr:
    return sympy.Add(*(sympy.diff(c, as_symbol(v)) for c, v in zip(components, variables)))


def substitute(expr: sympy.Expr, mapping: Mapping[sympy.Symbol, sympy.Expr]) -> sympy.Expr:
    """Simultaneous substitution of symbols."""
    return sympy.sympify(expr).xreplace(dict(mapping))


def node_count(expr: sympy.Expr) -> int:
    return sum(1 for _ in sympy.preorder_traversal(expr))


def is_time_independent(expr: sympy.Expr) -> bool:
    return t not in sympy.sympify(expr).free_symbols


def bind_parameters(expr: sympy.Expr, params: Mapping[str, float]) -> sympy.Expr:
    mapping: Dict[sympy.Symbol, sympy.Expr] = {
        s: sympy.Float(params[s.name]) if not float(params[s.name]).is_integer() else sympy.Integer(int(params[s.name]))
        for s in sympy.sympify(expr).free_symbols
        if s.name in params
    }
    return substitute(expr, mapping) if mapping else expr
