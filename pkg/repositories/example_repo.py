import logging
from typing import Callable, Dict, List, Optional

from exceptions import UnknownExampleError
from schemas.example import ExampleEntry
from schemas.phase import GenFunPair, GeneratorPair, HamiltonPair, PhaseMap
from schemas.sequence import CTSequence
from services.decompose_service import DecomposeService
from services.lie_service import LieService
from symbolic.domain import Domain, Point

logger = logging.getLogger(__name__)

TAKHTAJAN = {"H1": "(x1^2 + x2^2 + x3^2)/2", "H2": "x1 + x2 + x3", "label": "takhtajan"}

TAKHTAJAN_MATRIX = [
    ["1/sqrt(6)", "1/sqrt(6)", "-2/sqrt(6)"],
    ["-1/sqrt(2)", "1/sqrt(2)", "0"],
    ["1/sqrt(3)", "1/sqrt(3)", "1/sqrt(3)"],
]


def canonoid_x3sq() -> ExampleEntry:
    domain = Domain(bounds={"x3": (0.5, 2.0)})
    return ExampleEntry(
        id="canonoid-x3sq",
        description="X3 = x3^2: canonoid for the rotating pair, bracket 2*x3",
        domain=domain,
        map=PhaseMap(X1="x1", X2="x2", X3="x3^2", inverse={"x1": "X1", "x2": "X2", "x3": "sqrt(X3)"},
                     domain=domain, label="canonoid-x3sq"),
        pair=HamiltonPair(H1="(x1^2 + x2^2)/2", H2="x3^2/2", label="planar rotation"),
        target=HamiltonPair(H1="(X1^2 + X2^2)/2", H2="2/3*X3^(3/2)", coords="X"),
        expected="not_universal",
        x0=Point(x1=1.0, x2=0.5, x3=1.0),
        tags=["canonical", "nambu"],
    )


def scaling() -> ExampleEntry:
    domain = Domain(params={"a": 2.0, "b": 3.0, "c": 1 / 6})
    step = DecomposeService(domain=domain).make_scaling("a", "b", "c", domain)
    return ExampleEntry(
        id="scaling",
        description="X = (a x1, b x2, c x3), canonical iff a*b*c = 1, constant generating functions",
        domain=domain,
        map=step.map,
        pair=HamiltonPair(**TAKHTAJAN),
        target=HamiltonPair(H1="(X1^2/a^2 + X2^2/b^2 + X3^2/c^2)/2", H2="X1/a + X2/b + X3/c", coords="X"),
        gf=GenFunPair(F1="1", F2="2"),
        expected="canonical",
        tags=["canonical", "genfun"],
    )


def euler_nahm() -> ExampleEntry:
    domain = Domain(params={"g1": 1.0, "g2": 2.0, "g3": 0.5})
    return ExampleEntry(
        id="euler-nahm",
        description="Rigid body Euler equations scaled into the Nahm system (g1*g2*g3 = 1)",
        domain=domain,
        map=PhaseMap(X1="x1/g1", X2="x2/g2", X3="x3/g3",
                     inverse={"x1": "g1*X1", "x2": "g2*X2", "x3": "g3*X3"}, domain=domain, label="euler-nahm"),
        pair=HamiltonPair(H1="(x1^2/g1^2 - x2^2/g2^2)/2", H2="(x1^2/g1^2 - x3^2/g3^2)/2", label="euler"),
        target=HamiltonPair(H1="(X1^2 - X2^2)/2", H2="(X1^2 - X3^2)/2", coords="X", label="nahm"),
        expected="canonical",
        x0=Point(x1=0.3, x2=0.2, x3=0.1),
        tags=["canonical", "nambu"],
    )


def linear() -> ExampleEntry:
    step = DecomposeService().make_linear([[2, 1, 1], [1, 1, 1], [0, 1, 2]])
    return ExampleEntry(
        id="linear",
        description="General linear transformation with a.alpha = 1 and its quadratic generating functions",
        map=step.map,
        pair=HamiltonPair(**TAKHTAJAN),
        gf=GenFunPair(F1="-2*x3 - x2", F2="-x1^2 - x2^2/4 + x3^2/2 - x1*x2 - x1*x3"),
        expected="canonical",
        x0=Point(x1=1.0, x2=-0.5, x3=0.25),
        tags=["canonical", "genfun", "decompose"],
    )


def takhtajan_rotation() -> ExampleEntry:
    step = DecomposeService().make_linear(TAKHTAJAN_MATRIX)
    step.map.label = "takhtajan-rotation"
    return ExampleEntry(
        id="takhtajan-rotation",
        description="Rotation taking (1,1,1) to the X3 axis: Takhtajan system to a harmonic oscillator",
        map=step.map,
        pair=HamiltonPair(**TAKHTAJAN),
        target=HamiltonPair(H1="(X1^2 + X2^2 + X3^2)/2", H2="sqrt(3)*X3", coords="X", label="oscillator"),
        gf=GenFunPair(F1="(x3 + 2*x2)/sqrt(6)", F2="(-x1^2/2 + x2^2/2 + x3^2/2 - x1*x2 + 2*x1*x3)/sqrt(6)"),
        expected="canonical",
        x0=Point(x1=1.0, x2=0.0, x3=0.0),
        tags=["canonical", "genfun", "nambu"],
    )


def gauge1() -> ExampleEntry:
    step = DecomposeService().make_gauge(1, "x1^2", "sin(x1)")
    return ExampleEntry(
        id="gauge1",
        description="X = (x1, x2 + f1(x1), x3 + f2(x1))",
        map=step.map,
        gf=GenFunPair(F1="x2*cos(x1) - 2*x1*x3", F2="-x1^2/2"),
        expected="canonical",
        tags=["canonical", "genfun", "decompose"],
    )


def gauge2() -> ExampleEntry:
    step = DecomposeService().make_gauge(2, "x2^3", "cos(x2)")
    return ExampleEntry(
        id="gauge2",
        description="X = (x1 + g1(x2), x2, x3 + g2(x2))",
        map=step.map,
        gf=GenFunPair(F1="x2^3*x3", F2="x2"),
        expected="canonical",
        tags=["canonical", "genfun", "decompose"],
    )


def gauge3() -> ExampleEntry:
    step = DecomposeService().make_gauge(3, "exp(x3)", "x3^2")
    return ExampleEntry(
        id="gauge3",
        description="X = (x1 + h1(x3), x2 + h2(x3), x3)",
        map=step.map,
        gf=GenFunPair(F1="exp(x3)*x2", F2="-x3"),
        expected="canonical",
        tags=["canonical", "genfun", "decompose"],
    )


def point1() -> ExampleEntry:
    domain = Domain(bounds={"x1": (0.5, 2.0)})
    step = DecomposeService(domain=domain).make_point1("x1^2/2", "1/x1", "1", f1_inverse="sqrt(2*X1)",
                                                       strict=True)
    return ExampleEntry(
        id="point1",
        description="X = (x1^2/2, x2/x1, x3), the point step of the cylindrical decomposition",
        domain=domain,
        map=step.map,
        gf=GenFunPair(F1="x1*x2", F2="x3/2"),
        expected="canonical",
        tags=["canonical", "genfun", "decompose"],
    )


def point2() -> ExampleEntry:
    domain = Domain(bounds={"x2": (0.5, 2.0), "X2": (0.5, 2.0)})
    step = DecomposeService(domain=domain).make_point(2, "1/x2", "x2^2/2", "1", base_inverse="sqrt(2*X2)",
                                                      strict=True)
    return ExampleEntry(
        id="point2",
        description="X = (x1/x2, x2^2/2, x3): A = B = C = 0, so any constant pair generates it",
        domain=domain,
        map=step.map,
        gf=GenFunPair(F1="1", F2="2"),
        expected="canonical",
        tags=["canonical", "genfun"],
    )


def point3() -> ExampleEntry:
    domain = Domain(bounds={"x3": (-1.0, 1.0), "X3": (0.5, 2.0)})
    step = DecomposeService(domain=domain).make_point(3, "exp(-x3)", "1", "exp(x3)", base_inverse="ln(X3)",
                                                      strict=True)
    return ExampleEntry(
        id="point3",
        description="X = (x1 exp(-x3), x2, exp(x3)): A = B = C = 0, so any constant pair generates it",
        domain=domain,
        map=step.map,
        gf=GenFunPair(F1="1", F2="2"),
        expected="canonical",
        tags=["canonical", "genfun"],
    )


def rotation_x1_timedep() -> ExampleEntry:
    return ExampleEntry(
        id="rotation-x1-timedep",
        description="Time-dependent rotation about the x1 axis applied to the Takhtajan system",
        map=PhaseMap(
            X1="x1", X2="x2*cos(t) + x3*sin(t)", X3="-x2*sin(t) + x3*cos(t)",
            inverse={"x1": "X1", "x2": "X2*cos(t) - X3*sin(t)", "x3": "X2*sin(t) + X3*cos(t)"},
            label="rotation-x1-timedep",
        ),
        pair=HamiltonPair(**TAKHTAJAN),
        target=HamiltonPair(H1="(X1^2 + X2^2 + X3^2)/2", H2="2*X1 + (cos(t) + sin(t))*X2 + (cos(t) - sin(t))*X3",
                            coords="X"),
        gf=GenFunPair(F1="x1/2*(x1^2/3 + x2^2 + x3^2)", F2="t"),
        expected="canonical",
        x0=Point(x1=1.0, x2=0.5, x3=-0.3),
        tags=["canonical", "genfun", "nambu"],
    )


def ict_rotation() -> ExampleEntry:
    return ExampleEntry(
        id="ict-rotation",
        description="Generators (x2^2 + x3^2)/2 and x1: rotation about the x1 axis by eps",
        generators=GeneratorPair(G1="(x2^2 + x3^2)/2", G2="x1"),
        closed_form=LieService.rotation_about_x1(0.5),
        eps=0.5,
        order=20,
        tags=["lie"],
    )


def sl_target(domain: Optional[Domain] = None, c: str = "(1/(a*b))") -> PhaseMap:
    return PhaseMap(
        X1=f"a*x1 + b*m1*x2 + {c}*(n1 + m1*n2)*x3",
        X2=f"a*l1*x1 + b*(1 + l1*m1)*x2 + {c}*(l1*n1 + (1 + l1*m1)*n2)*x3",
        X3=f"a*l2*x1 + b*(m2 + m1*l2)*x2 + {c}*(1 + l2*n1 + (m2 + m1*l2)*n2)*x3",
        domain=domain or Domain(),
        label="linear target",
    )


def sl() -> ExampleEntry:
    bounds = {name: (-1.0, 1.0) for name in ("l1", "l2", "m1", "m2", "n1", "n2")}
    bounds.update({"a": (0.5, 2.0), "b": (0.5, 2.0)})
    domain = Domain(bounds=bounds, samples=20)
    service = DecomposeService(domain=domain)
    steps = [
        service.make_scaling("a", "b", "1/(a*b)"),
        service.make_gauge(3, "n1*x3", "n2*x3"),
        service.make_gauge(2, "m1*x2", "m2*x2"),
        service.make_gauge(1, "l1*x1", "l2*x1"),
    ]
    target = sl_target(domain)
    return ExampleEntry(
        id="SL",
        description="Linear transformation as scaling after three gauges, S = P G3 G2 G1",
        domain=domain,
        map=target,
        sequence=CTSequence(steps=steps, label="SL"),
        expected="canonical",
        tags=["decompose"],
    )


def sc() -> ExampleEntry:
    domain = Domain(bounds={"x1": (0.5, 2.0), "x2": (0.5, 2.0)})
    service = DecomposeService(domain=domain)
    steps = [
        service.make_point1("x1^2/2", "1/x1", "1", f1_inverse="sqrt(2*X1)"),
        service.make_interchange("12", "-"),
        service.make_point1("atan(x1)", "1 + x1^2", "1", f1_inverse="tan(X1)"),
        service.make_interchange("12", "+"),
    ]
    return ExampleEntry(
        id="SC",
        description="Cylindrical coordinates as point and interchange steps, S = P2 I2 P1 I1",
        domain=domain,
        map=PhaseMap(X1="(x1^2 + x2^2)/2", X2="atan(x2/x1)", X3="x3",
                     inverse={"x1": "sqrt(2*X1)*cos(X2)", "x2": "sqrt(2*X1)*sin(X2)", "x3": "X3"},
                     domain=domain, label="cylindrical"),
        sequence=CTSequence(steps=steps, label="SC"),
        expected="canonical",
        tags=["decompose", "canonical"],
    )


BUILDERS: Dict[str, Callable[[], ExampleEntry]] = {
    "canonoid-x3sq": canonoid_x3sq,
    "scaling": scaling,
    "euler-nahm": euler_nahm,
    "linear": linear,
    "takhtajan-rotation": takhtajan_rotation,
    "gauge1": gauge1,
    "gauge2": gauge2,
    "gauge3": gauge3,
    "point1": point1,
    "point2": point2,
    "point3": point3,
    "rotation-x1-timedep": rotation_x1_timedep,
    "ict-rotation": ict_rotation,
    "SL": sl,
    "SC": sc,
}


class ExampleRepository:
    """Registry of the worked systems, built on demand."""

    def __init__(self):
        self._cache: Dict[str, ExampleEntry] = {}

    def ids(self) -> List[str]:
        return list(BUILDERS)

    def get(self, example_id: str) -> ExampleEntry:
        if example_id not in BUILDERS:
            raise UnknownExampleError(example_id, BUILDERS)
        if example_id not in self._cache:
            logger.debug(f"Building example {example_id}")
            self._cache[example_id] = BUILDERS[example_id]()
        return self._cache[example_id]

    def all(self, tag: Optional[str] = None) -> List[ExampleEntry]:
        entries = [self.get(i) for i in self.ids()]
        return [e for e in entries if tag is None or tag in e.tags]
