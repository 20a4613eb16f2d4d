import pytest
import sympy

from exceptions import ExprSyntaxError, UnknownFunctionError, UnknownVariableError
from symbolic.domain import Domain
from symbolic.parser import parse
from symbolic.printer import to_text
from symbolic.sampling import equiv
from symbolic.variables import X1, t, x1, x2, x3


def test_parse_sum_of_products_and_functions():
    assert parse("x1*x2 + sin(x3)") == x1 * x2 + sympy.sin(x3)


def test_unary_minus_binds_looser_than_power():
    assert parse("-x1^2") == -(x1 ** 2)


def test_power_is_right_associative():
    assert parse("2^3^2") == 512


def test_all_functions_and_pi():
    expr = parse("sin(x1) + cos(x1) + tan(x1) + atan(x1) + exp(x1) + ln(x1) + sqrt(x1) + pi")
    assert expr == (sympy.sin(x1) + sympy.cos(x1) + sympy.tan(x1) + sympy.atan(x1)
                    + sympy.exp(x1) + sympy.log(x1) + sympy.sqrt(x1) + sympy.pi)


def test_decimal_and_exponent_numbers():
    assert parse("1.5e2*x1") == sympy.Float(150.0) * x1
    assert parse("3") == sympy.Integer(3)


def test_time_and_parameters():
    expr = parse("a*x1 + t")
    assert t in expr.free_symbols
    assert sympy.Symbol("a") in expr.free_symbols


def test_new_coordinates_need_the_X_side():
    assert parse("X1^2", side="X") == X1 ** 2
    with pytest.raises(UnknownVariableError):
        parse("X1 + x1", side="X")
    with pytest.raises(UnknownVariableError):
        parse("X1")


@pytest.mark.parametrize("text", ["", "x1 +", "(x1", "x1 x2", "sin", "*x1", "x1 $ x2"])
def test_malformed_input(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_error_reports_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("x1 $ x2")
    assert info.value.position == 3


def test_unknown_function():
    with pytest.raises(UnknownFunctionError):
        parse("foo(x1)")


@pytest.mark.parametrize("text", [
    "x1^2/2 - x2*x3",
    "sqrt(2*x1)",
    "1/x1 + x2^(-2)",
    "exp(x3)*x2 - ln(x1)",
    "atan(x1)*(1 + x1^2)",
    "-(x1 - x2)^3",
])
def test_printer_output_parses_back(text):
    expr = parse(text)
    again = parse(to_text(expr))
    d = Domain(bounds={"x1": (0.5, 2.0), "x2": (0.5, 2.0)}, samples=16)
    assert equiv(expr, again, d).equal


def test_printer_uses_grammar_operators():
    assert "^" in to_text(x1 ** 3)
    assert to_text(sympy.log(x2)) == "ln(x2)"
    assert "**" not in to_text(x3 ** 2 * x1)


@pytest.mark.parametrize("value", [1e20, 0.1, 0.30000000000000004, 2.5e-7, -1234.5678])
def test_floats_print_back_exactly(value):
    expr = sympy.Float(value) * x1
    assert parse(to_text(expr)) == expr


def test_large_float_prints_in_exponent_form():
    assert to_text(parse("1e20*x1")) == "1e+20*x1"
