import numpy as np
import pytest

from exceptions import InvalidStepError, NonCanonicalStepError, SingularMatrixError
from repositories.example_repo import sl_target
from schemas.phase import PhaseMap
from schemas.sequence import CTSequence, StepSpec
from symbolic.domain import Domain
from symbolic.parser import parse
from symbolic.printer import to_text
from symbolic.sampling import equiv
from symbolic.variables import x1, x2, x3
from tests.test_nambu import random_polynomial


def test_gauge_step(decompose):
    step = decompose.make_gauge(1, "x1^2", "sin(x1)")
    assert step.canonical
    assert step.map.components == (x1, parse("x2 + x1^2"), parse("x3 + sin(x1)"))
    assert step.payload == {"f1": "x1^2", "f2": "sin(x1)"}


def test_gauge_functions_must_depend_on_the_base_only(decompose):
    with pytest.raises(InvalidStepError):
        decompose.make_gauge(2, "x1*x2", "x2")
    with pytest.raises(InvalidStepError):
        decompose.make_gauge(4, "x1", "x1")


def test_scaling_step(decompose):
    step = decompose.make_scaling(2, 3, "1/6")
    assert step.canonical
    assert step.map.inverse == (parse("X1/2", "X"), parse("X2/3", "X"), parse("6*X3", "X"))
    assert not decompose.make_scaling(2, 1, 1).canonical


def test_scaling_rejects_zero_and_coordinates(decompose):
    with pytest.raises(InvalidStepError):
        decompose.make_scaling(0, 1, 1)
    with pytest.raises(InvalidStepError):
        decompose.make_scaling("x1", 1, 1)


def test_point_step_constraint(decompose):
    d = Domain(bounds={"x1": (0.5, 2.0)})
    step = decompose.make_point1("x1^2/2", "1/x1", "1", f1_inverse="sqrt(2*X1)", domain=d)
    assert step.canonical
    assert step.map.has_inverse
    with pytest.raises(NonCanonicalStepError):
        decompose.make_point1("x1^2", "1/x1", "1", strict=True, domain=d)


def test_point_step_without_inverse_is_noted(decompose):
    step = decompose.make_point(3, "1", "1", "x3")
    assert step.canonical
    assert not step.map.has_inverse
    assert step.notes


def test_non_strict_point_step_is_marked_non_canonical(decompose):
    step = decompose.make_point1("x1^2", "1", "1", domain=Domain(bounds={"x1": (0.5, 2.0)}))
    assert not step.canonical


@pytest.mark.parametrize("plane,sign,expected", [
    ("12", "+", ("-x2", "x1", "x3")),
    ("12", "-", ("x2", "-x1", "x3")),
    ("23", "+", ("x1", "-x3", "x2")),
    ("31", "+", ("x3", "x2", "-x1")),
    ("31", "-", ("-x3", "x2", "x1")),
])
def test_interchange(decompose, plane, sign, expected):
    step = decompose.make_interchange(plane, sign)
    assert step.canonical
    assert step.map.components == tuple(parse(e) for e in expected)


def test_interchange_rejects_bad_plane(decompose):
    with pytest.raises(InvalidStepError):
        decompose.make_interchange("13")
    with pytest.raises(InvalidStepError):
        decompose.make_interchange("12", "*")


def test_linear_step(decompose):
    step = decompose.make_linear([[2, 1, 1], [1, 1, 1], [0, 1, 2]])
    assert step.canonical
    assert "a.alpha = 1" in step.notes
    assert "alpha = (1, -2, 1)" in step.notes


def test_linear_step_singular(decompose):
    with pytest.raises(SingularMatrixError):
        decompose.make_linear([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    with pytest.raises(InvalidStepError):
        decompose.make_linear([[1, 0], [0, 1]])


def test_sl_composition_matches_linear_formula(decompose, repo):
    entry = repo.get("SL")
    composite = decompose.compose(entry.sequence, entry.domain)
    assert decompose.verify_equal(composite, sl_target(entry.domain), entry.domain).passed


def test_sc_composition_is_cylindrical(decompose, repo):
    entry = repo.get("SC")
    composite = decompose.compose(entry.sequence, entry.domain)
    report = decompose.verify_equal(composite, entry.map, entry.domain)
    assert report.passed
    assert [c.label for c in report.identities] == ["X1", "X2", "X3"]


def test_sc_intermediate_brackets(decompose, repo):
    entry = repo.get("SC")
    report = decompose.intermediate_brackets(entry.sequence, entry.domain)
    assert report.passed
    labels = [c.label for c in report.identities]
    assert labels[:4] == ["step[0:point1]", "step[1:interchange12-]", "step[2:point1]", "step[3:interchange12+]"]
    assert "partial[1:]" in labels


def test_composite_inverse_round_trip(decompose, repo):
    entry = repo.get("SL")
    composite = decompose.compose(entry.sequence, entry.domain)
    for x, back in zip((x1, x2, x3), (composite.pull_back(c) for c in composite.require_inverse())):
        assert equiv(back, x, entry.domain).equal


def test_order_matters(decompose, repo):
    entry = repo.get("SC")
    reversed_sequence = CTSequence(steps=list(reversed(entry.sequence.steps)))
    composite = decompose.compose(reversed_sequence, entry.domain)
    assert not decompose.verify_equal(composite, entry.map, entry.domain).passed


def test_sequence_from_specs(decompose):
    specs = [
        StepSpec(kind="scaling", a=2, b=3, c="1/6"),
        StepSpec(kind="Gauge1", f1="x1", f2="x1^2", label="shear"),
    ]
    s = decompose.sequence(specs)
    assert [step.kind for step in s.steps] == ["scaling", "gauge1"]
    assert s.steps[1].label == "shear"
    flipped = decompose.sequence(specs, leftmost_first=True)
    assert [step.kind for step in flipped.steps] == ["gauge1", "scaling"]


def test_step_spec_missing_field(decompose):
    with pytest.raises(InvalidStepError):
        decompose.build_step(StepSpec(kind="linear"))


def test_custom_step(decompose):
    step = decompose.build_step(StepSpec(kind="custom", X1="x1", X2="x2 + x3", X3="x3"))
    assert step.kind == "custom"
    assert step.canonical


def test_composition_is_associative(decompose):
    d = Domain()

    def compose(*steps):
        return decompose.compose(CTSequence(steps=list(steps)), d)

    a = decompose.make_gauge(1, "x1^2", "sin(x1)")
    b = decompose.make_interchange("12", "+")
    c = decompose.make_scaling("2", "3", "1/6")
    flat = compose(a, b, c)
    assert decompose.verify_equal(compose(decompose.make_custom(compose(a, b)), c), flat, d).passed
    assert decompose.verify_equal(compose(a, decompose.make_custom(compose(b, c))), flat, d).passed


STEPS = [
    ("gauge", (1, "x1^2", "sin(x1)")),
    ("gauge", (2, "x2^3", "cos(x2)")),
    ("gauge", (3, "exp(x3/2)", "x3")),
    ("interchange", ("12", "+")),
    ("interchange", ("23", "-")),
    ("interchange", ("31", "+")),
]


@pytest.mark.parametrize("kind, args", STEPS)
def test_gauge_and_interchange_preserve_random_cubic_brackets(decompose, canonical, kind, args):
    step = getattr(decompose, f"make_{kind}")(*args)
    rng = np.random.default_rng(17)
    d = Domain(samples=16)
    for _ in range(5):
        f, g, h = (random_polynomial(rng, degree=3) for _ in range(3))
        report = canonical.bracket_preservation(step.map, f, g, h, d)
        assert report.passed, (to_text(f), to_text(g), to_text(h))


@pytest.mark.parametrize("example_id", ["canonoid-x3sq", "linear", "scaling"])
def test_classification_survives_composition_with_the_identity(decompose, canonical, repo, example_id):
    entry = repo.get(example_id)
    m, identity = decompose.make_custom(entry.map), decompose.make_custom(PhaseMap.identity())
    expected = canonical.classify(entry.map, entry.domain).kind
    for steps in ([m, identity], [identity, m]):
        composite = decompose.compose(CTSequence(steps=steps), entry.domain)
        assert canonical.classify(composite, entry.domain).kind == expected
