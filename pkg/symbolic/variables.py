"""Coordinate symbols shared by every module."""
import sympy

x1, x2, x3, t = sympy.symbols("x1 x2 x3 t")
X1, X2, X3 = sympy.symbols("X1 X2 X3")

COORDS = (x1, x2, x3)
NEW_COORDS = (X1, X2, X3)

# Per coordinate side: the names the parser accepts as variables.
SIDES = {
    "x": {"x1": x1, "x2": x2, "x3": x3, "t": t},
    "X": {"X1": X1, "X2": X2, "X3": X3, "t": t},
}

COORDINATE_NAMES = {"x1", "x2", "x3", "X1", "X2", "X3", "t"}


def coords_for(side: str):
    return COORDS if side == "x" else NEW_COORDS


def is_parameter(symbol: sympy.Symbol) -> bool:
    return symbol.name not in COORDINATE_NAMES


def parameters_of(expr: sympy.Expr) -> set:
    return {s for s in expr.free_symbols if is_parameter(s)}
