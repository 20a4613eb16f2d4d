import math

import numpy as np
import pytest
import sympy

from exceptions import EvaluationDomainError, UnboundParameterError
from symbolic.calculus import (
    bind_parameters,
    det3,
    diff,
    divergence,
    evaluate,
    is_time_independent,
    jacobian2,
    jacobian3,
    node_count,
    simplify,
    substitute,
)
from symbolic.domain import Domain
from symbolic.parser import FUNCTIONS, parse
from symbolic.sampling import equiv, sample_points
from symbolic.variables import COORDS, t, x1, x2, x3


def test_evaluate_with_parameter():
    assert evaluate(parse("x1^2 + a"), {"x1": 3, "a": 1}) == pytest.approx(10.0)


def test_evaluate_accepts_symbol_keys():
    assert evaluate(x1 * x2, {x1: 2.0, x2: 4.0}) == pytest.approx(8.0)


@pytest.mark.parametrize("text,point", [
    ("1/x1", {"x1": 0.0}),
    ("ln(x1)", {"x1": -1.0}),
    ("sqrt(x1)", {"x1": -1.0}),
])
def test_evaluate_outside_function_domain(text, point):
    with pytest.raises(EvaluationDomainError):
        evaluate(parse(text), point)


def test_evaluate_unbound_parameter():
    with pytest.raises(UnboundParameterError) as info:
        evaluate(parse("a*x1 + b"), {"x1": 1.0})
    assert info.value.names == ["a", "b"]


def test_diff_by_name_and_symbol():
    expr = parse("x1^2*x2 + sin(t)")
    assert diff(expr, "x1") == 2 * x1 * x2
    assert diff(expr, t) == sympy.cos(t)


def test_diff_rejects_unknown_variable():
    with pytest.raises(ValueError):
        diff(x1, "y")


def test_jacobian2():
    assert jacobian2(x1 * x2, x3, "x1", "x3") == x2
    assert jacobian2(x1, x2, "x1", "x2") == 1


def test_identity_map_has_unit_determinant():
    assert det3(jacobian3(x1, x2, x3)) == 1


def test_det3_matches_sympy():
    m = jacobian3(parse("x1*x2"), parse("x2 + x3^2"), parse("sin(x1)"))
    assert sympy.simplify(det3(m) - m.det()) == 0


def test_divergence():
    assert divergence((x1, x2, x3)) == 3
    assert divergence((x2 * x3, x1 * x3, x1 * x2)) == 0


def test_simplify_expands_polynomials_and_cancels_rationals():
    assert simplify(parse("(x1 + x2)^2 - x1^2")) == x2 ** 2 + 2 * x1 * x2
    assert simplify(parse("(x1^2 - x2^2)/(x1 - x2)")) == x1 + x2


def test_substitute_is_simultaneous():
    assert substitute(x1 * x2 ** 2, {x1: x2, x2: x1}) == x2 * x1 ** 2


def test_bind_parameters():
    assert bind_parameters(parse("a*x1 + b"), {"a": 2, "b": 0.5}) == 2 * x1 + sympy.Float(0.5)


def test_node_count_grows_with_tree():
    assert node_count(x1) == 1
    assert node_count(parse("x1*x2 + x3")) > node_count(parse("x1*x2"))


def test_time_independence():
    assert is_time_independent(parse("x1 + a"))
    assert not is_time_independent(parse("x1*cos(t)"))


def test_evaluate_rejects_huge_values():
    with pytest.raises(EvaluationDomainError):
        evaluate(parse("tan(x1)"), {"x1": math.pi / 2})
    with pytest.raises(EvaluationDomainError):
        evaluate(parse("1e13*x1"), {"x1": 1.0})


def random_expression(rng, depth):
    if depth == 0 or rng.random() < 0.2:
        return [x1, x2, x3, sympy.Rational(1, 2), sympy.Integer(2)][rng.integers(5)]
    op = ["add", "sub", "mul", "sin", "cos", "atan"][rng.integers(6)]
    if op in ("sin", "cos", "atan"):
        return getattr(sympy, op)(random_expression(rng, depth - 1))
    a, b = random_expression(rng, depth - 1), random_expression(rng, depth - 1)
    return {"add": a + b, "sub": a - b, "mul": a * b}[op]


RANDOM_DOMAIN = Domain(bounds={name: (-1.0, 1.0) for name in ("x1", "x2", "x3")}, samples=16, tol=1e-8, seed=11)


def test_diff_is_linear_on_random_expressions():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        f, g = random_expression(rng, 5), random_expression(rng, 5)
        for v in COORDS:
            assert equiv(diff(3 * f - 2 * g, v), 3 * diff(f, v) - 2 * diff(g, v), RANDOM_DOMAIN).equal


def test_diff_product_rule_on_random_expressions():
    rng = np.random.default_rng(7)
    for _ in range(20):
        f, g = random_expression(rng, 5), random_expression(rng, 5)
        for v in COORDS:
            assert equiv(diff(f * g, v), diff(f, v) * g + f * diff(g, v), RANDOM_DOMAIN).equal


# inner argument stays in [0.25, 1.25] on the default box
INNER = "(1/2 + x1^2/8 + x2*x3/16)"


def central_difference(expr, point, name, h=1e-5):
    up = {**point, name: point[name] + h}
    down = {**point, name: point[name] - h}
    return (evaluate(expr, up) - evaluate(expr, down)) / (2 * h)


@pytest.mark.parametrize("text", [f"{name}({INNER})" for name in FUNCTIONS] + [f"{INNER}^3", f"{INNER}^(3/2)",
                                                                              f"1/{INNER}"])
def test_diff_matches_central_differences(text):
    expr = parse(text)
    derivatives = {v.name: diff(expr, v) for v in COORDS}

    def pairs(point):
        return [(central_difference(expr, point, name), evaluate(d, point)) for name, d in derivatives.items()]

    for _, found in sample_points(["x1", "x2", "x3"], Domain(samples=32, seed=3), pairs, 32):
        for fd, exact in found:
            assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact))


def test_diff_of_atan_ratio():
    expr = parse("atan(x2/x1)")
    derivative = diff(expr, "x2")
    d = Domain(bounds={"x1": (0.5, 2.0)}, samples=10)
    assert equiv(derivative, parse("x1/(x1^2 + x2^2)"), d).equal
    for _, (fd, exact) in sample_points(["x1", "x2"], d,
                                        lambda p: (central_difference(expr, p, "x2"), evaluate(derivative, p))):
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


def test_jacobian_of_scaling_is_diagonal():
    a, b, c = parse("a"), parse("b"), parse("c")
    J = jacobian3(a * x1, b * x2, c * x3)
    assert J.tolist() == [[a, 0, 0], [0, b, 0], [0, 0, c]]
    assert det3(J) == a * b * c


def test_jacobian_of_x3_squared():
    J = jacobian3(x1, x2, x3 ** 2)
    assert J.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 2 * x3]]
    assert det3(J) == 2 * x3
