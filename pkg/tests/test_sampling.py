import pytest
import sympy

from exceptions import DomainExhaustedError, UnboundParameterError
from symbolic.domain import Domain
from symbolic.parser import parse
from symbolic.sampling import check_identity, equiv, is_zero, scaled_residual


def test_pythagorean_identity():
    report = equiv(parse("sin(x1)^2 + cos(x1)^2"), sympy.Integer(1))
    assert report.equal
    assert report.residual < 1e-12


def test_detects_difference():
    report = equiv(parse("x1"), parse("x1 + 0.001"))
    assert not report.equal
    assert report.residual > 1e-4
    assert set(report.worst_point) == {"x1"}


def test_is_zero():
    assert is_zero(parse("(x1 + x2)^2 - x1^2 - 2*x1*x2 - x2^2"))
    assert not is_zero(parse("x1*x2"))


def test_constant_identity_uses_a_single_point():
    assert equiv(sympy.Integer(2), sympy.Integer(2)).samples == 1


def test_points_outside_function_domain_are_resampled():
    check = check_identity("sqrt", parse("sqrt(x1)*x1"), parse("x1^(3/2)"), Domain(samples=20))
    assert check.passed


def test_domain_exhausted():
    with pytest.raises(DomainExhaustedError):
        check_identity("ln", parse("ln(x1 - 5)"), parse("x1"), Domain(samples=5))


def test_parameter_without_value_or_bounds():
    with pytest.raises(UnboundParameterError):
        check_identity("param", parse("a*x1"), parse("x1"), Domain())


def test_parameters_from_domain():
    d = Domain(params={"a": 1.0})
    assert check_identity("param", parse("a*x1"), parse("x1"), d).passed


def test_same_seed_same_worst_point():
    a = equiv(parse("x1*x2"), parse("x1*x2 + x3"), Domain(seed=7))
    b = equiv(parse("x1*x2"), parse("x1*x2 + x3"), Domain(seed=7))
    assert a.worst_point == b.worst_point


def test_scaled_residual():
    assert scaled_residual(1e6, 1e6 + 1) == pytest.approx(1e-6, rel=1e-3)
    assert scaled_residual(0.0, 1e-10) == pytest.approx(1e-10)


def test_domain_from_string():
    d = Domain.from_string("x1:0.5,2; x2:0,1")
    assert d.bounds == {"x1": (0.5, 2.0), "x2": (0.0, 1.0)}
    assert d.bounds_for("x3") == (-2.0, 2.0)


@pytest.mark.parametrize("text", ["x1:2", "x1=0,1", "x1:a,b"])
def test_domain_from_string_malformed(text):
    with pytest.raises(ValueError):
        Domain.from_string(text)


def test_domain_bounds_must_be_ordered():
    with pytest.raises(ValueError):
        Domain(bounds={"x1": (1.0, 0.0)})


def test_domain_updated_merges_params():
    d = Domain(params={"a": 1.0}).updated(params={"b": 2.0}, samples=3)
    assert d.params == {"a": 1.0, "b": 2.0}
    assert d.samples == 3
