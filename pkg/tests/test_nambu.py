import numpy as np
import pytest
import sympy

from exceptions import IntegrationError, UnboundParameterError
from schemas.phase import HamiltonPair
from services.integrator import compile_field, endpoint, integrate, step_count
from symbolic.calculus import divergence, evaluate
from symbolic.domain import Domain, Point
from symbolic.parser import parse
from symbolic.sampling import equiv, is_zero
from symbolic.variables import COORDS, X1, X2, X3, x1, x2, x3

TAKHTAJAN = HamiltonPair(H1="(x1^2 + x2^2 + x3^2)/2", H2="x1 + x2 + x3")


def test_fundamental_bracket(nambu):
    assert nambu.bracket(x1, x2, x3) == 1
    assert nambu.bracket(X1, X2, X3, variables=(X1, X2, X3)) == 1


def test_bracket_antisymmetry_and_leibniz(nambu):
    f, g, h, k = (parse(s) for s in ("x1*x2 + sin(x3)", "x2^2 - x1*x3", "exp(x1/4) + x3", "x1 + x2*x3^2"))
    assert equiv(nambu.bracket(f, g, h), -nambu.bracket(g, f, h)).equal
    assert equiv(nambu.bracket(f, g, h), nambu.bracket(g, h, f)).equal
    assert equiv(nambu.bracket(f * k, g, h), f * nambu.bracket(k, g, h) + k * nambu.bracket(f, g, h)).equal


def test_takhtajan_equations_of_motion(nambu):
    v = nambu.nh_rhs(TAKHTAJAN)
    assert v.components == (x2 - x3, x3 - x1, x1 - x2)


def test_hamiltonians_are_conserved(nambu):
    assert is_zero(nambu.total_derivative(TAKHTAJAN.H1, TAKHTAJAN))
    assert is_zero(nambu.total_derivative(TAKHTAJAN.H2, TAKHTAJAN))


def test_total_derivative_includes_explicit_time(nambu):
    assert is_zero(nambu.total_derivative(parse("t"), TAKHTAJAN) - 1)


def test_x_side_pair(nambu):
    pair = HamiltonPair(H1="(X1^2 + X2^2)/2", H2="X3", coords="X")
    assert nambu.nh_rhs(pair).components == (X2, -X1, 0)


def test_independence(nambu):
    assert nambu.is_independent(TAKHTAJAN)
    assert not nambu.is_independent(HamiltonPair(H1="x1 + x2", H2="2*x1 + 2*x2"))


def test_flow_conserves_hamiltonians(nambu):
    trajectory = nambu.integrate_flow(TAKHTAJAN, Point(x1=1.0, x2=0.0, x3=0.0), 1.0, 1e-3)
    assert len(trajectory.samples) == 1001
    assert trajectory.final.t == pytest.approx(1.0)
    assert trajectory.drift["H1"] < 1e-8
    assert trajectory.drift["H2"] < 1e-8
    assert not trajectory.aborted


def test_rk4_drift_is_fourth_order(nambu):
    x0 = Point(x1=1.0, x2=0.0, x3=0.0)
    coarse = nambu.integrate_flow(TAKHTAJAN, x0, 10.0, 0.1).drift["H1"]
    fine = nambu.integrate_flow(TAKHTAJAN, x0, 10.0, 0.05).drift["H1"]
    # per-step energy loss of RK4 on a rotation is O(h^6), so the total is O(h^5)
    assert 20 < coarse / fine < 45


def test_flow_matches_exact_rotation(nambu):
    pair = HamiltonPair(H1="(x1^2 + x2^2)/2", H2="x3")
    trajectory = nambu.integrate_flow(pair, Point(x1=1.0, x2=0.0, x3=0.3), 2.0, 1e-3)
    final = trajectory.final
    # x1' = x2, x2' = -x1
    assert final.x1 == pytest.approx(np.cos(2.0), abs=1e-9)
    assert final.x2 == pytest.approx(-np.sin(2.0), abs=1e-9)
    assert final.x3 == pytest.approx(0.3)


def test_parameters_come_from_the_start_point(nambu):
    pair = HamiltonPair(H1="w*(x1^2 + x2^2)/2", H2="x3")
    trajectory = nambu.integrate_flow(pair, Point(x1=1.0, x2=0.0, x3=0.0, params={"w": 2.0}), 1.0, 1e-3)
    assert trajectory.final.x1 == pytest.approx(np.cos(2.0), abs=1e-9)
    with pytest.raises(UnboundParameterError):
        nambu.integrate_flow(pair, Point(x1=1.0, x2=0.0, x3=0.0), 1.0, 1e-3)


def test_blowup_aborts_with_partial_trajectory(nambu):
    # x1' = x1^2 leaves every bounded set at t = 1
    pair = HamiltonPair(H1="x1^2*x2", H2="x3")
    with pytest.raises(IntegrationError) as info:
        nambu.integrate_flow(pair, Point(x1=1.0, x2=0.0, x3=0.0), 2.0, 0.01)
    trajectory = info.value.trajectory
    assert trajectory.aborted
    assert trajectory.final.t < 2.0


@pytest.mark.parametrize("h,t_end", [(0.0, 1.0), (-0.1, 1.0), (0.1, -1.0)])
def test_invalid_integration_arguments(nambu, h, t_end):
    with pytest.raises(ValueError):
        nambu.integrate_flow(TAKHTAJAN, Point(x1=1.0, x2=0.0, x3=0.0), t_end, h)


def test_step_count_lands_on_the_end():
    assert step_count(0.0, 1.0, 0.3) == 4
    assert step_count(0.0, 1.0, 0.25) == 4
    times, _, aborted = integrate(lambda s, y: np.zeros(3), [0, 0, 0], 0.0, 1.0, 0.3)
    assert times[-1] == pytest.approx(1.0)
    assert not aborted


def test_endpoint_integrates_backwards():
    rhs = compile_field((x2, -x1, sympy.Integer(0)), COORDS)
    forward = endpoint(rhs, [1.0, 0.0, 0.0], 0.0, 0.7, 1e-3)
    back = endpoint(rhs, forward, 0.0, -0.7, 1e-3)
    assert np.allclose(back, [1.0, 0.0, 0.0], atol=1e-10)


def random_polynomial(rng, degree=2):
    monomials = [sympy.Integer(1), *COORDS]
    if degree >= 2:
        monomials += [a * b for i, a in enumerate(COORDS) for b in COORDS[i:]]
    if degree >= 3:
        monomials += [a * b * c for i, a in enumerate(COORDS) for j, b in enumerate(COORDS[i:], i) for c in COORDS[j:]]
    coefficients = rng.integers(-3, 4, size=len(monomials))
    return sympy.Add(*(int(c) * m for c, m in zip(coefficients, monomials)))


def test_bracket_identities_on_random_triples(nambu):
    rng = np.random.default_rng(11)
    d = Domain(samples=4)
    for _ in range(100):
        f, g, h, k = (random_polynomial(rng) for _ in range(4))
        assert equiv(nambu.bracket(f, g, h), -nambu.bracket(g, f, h), d).equal
        assert equiv(nambu.bracket(f * k, g, h), f * nambu.bracket(k, g, h) + k * nambu.bracket(f, g, h), d).equal


def test_nambu_flows_of_registry_pairs_are_divergence_free(nambu, repo):
    entries = [e for e in repo.all() if e.pair is not None]
    assert entries
    for entry in entries:
        v = nambu.nh_rhs(entry.pair.in_x(entry.map))
        assert is_zero(divergence(v.components, COORDS), entry.domain), entry.id


def test_takhtajan_flow_keeps_the_rotated_x3_fixed(nambu, repo):
    entry = repo.get("takhtajan-rotation")
    trajectory = nambu.integrate_flow(entry.pair, entry.x0, 1.0, 1e-2)
    # X3 = (x1 + x2 + x3)/sqrt(3) is H2/sqrt(3)
    values = [evaluate(entry.map.X3, {"x1": s.x1, "x2": s.x2, "x3": s.x3, "t": s.t}) for s in trajectory.samples]
    assert len(values) == 101
    assert max(values) - min(values) <= 1e-10
