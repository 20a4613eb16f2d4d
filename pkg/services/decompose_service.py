import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from exceptions import InvalidStepError, NambuError, NonCanonicalStepError, SingularMatrixError
from schemas.phase import PhaseMap, as_expr
from schemas.report import CheckReport
from schemas.sequence import CTSequence, CTStep, StepSpec
from services.nambu_service import NambuService
from symbolic.calculus import diff, simplify, substitute
from symbolic.domain import Domain
from symbolic.printer import to_text
from symbolic.sampling import check_identities, check_identity, equiv
from symbolic.variables import COORDS, NEW_COORDS, t

logger = logging.getLogger(__name__)

ExprLike = Union[str, float, int, sympy.Expr]

PLANES = {"12": (0, 1), "23": (1, 2), "31": (2, 0)}


def _coordinate_symbols(expr: sympy.Expr) -> set:
    return {s for s in expr.free_symbols if s in (*COORDS, t)}


class DecomposeService:
    """Primitive canonical transformations and their composition."""

    def __init__(self, nambu: Optional[NambuService] = None, domain: Optional[Domain] = None):
        self.nambu = nambu or NambuService()
        self.domain = domain or Domain()

    def _is_one(self, expr: sympy.Expr, d: Domain) -> bool:
        if simplify(expr - 1) == 0:
            return True
        try:
            return equiv(expr, sympy.Integer(1), d).equal
        except NambuError as err:
            logger.debug(f"Cannot decide {to_text(expr)} = 1 on the domain: {err}")
            return False

    def _step(self, kind: str, payload: Dict[str, Any], m: PhaseMap, notes: Optional[List[str]] = None) -> CTStep:
        bracket = self.nambu.bracket(*m.components)
        canonical = self._is_one(bracket, m.domain)
        if not canonical:
            logger.info(f"{kind} step {m.label} is not canonical (bracket {to_text(bracket)})")
        return CTStep(kind=kind, payload=payload, map=m, bracket=bracket, canonical=canonical, notes=notes or [])

    def _base_function(self, value: ExprLike, base: sympy.Symbol, kind: str) -> sympy.Expr:
        expr = as_expr(value)
        stray = _coordinate_symbols(expr) - {base}
        if stray:
            names = ", ".join(sorted(s.name for s in stray))
            raise InvalidStepError(f"{kind} functions may only depend on {base.name}, found {names}")
        return expr

    def make_gauge(self, kind: int, u: ExprLike, v: ExprLike, domain: Optional[Domain] = None) -> CTStep:
        """Shift the two coordinates other than x_kind by functions of x_kind."""
        if kind not in (1, 2, 3):
            raise InvalidStepError(f"Gauge kind must be 1, 2 or 3, got {kind}")
        base = COORDS[kind - 1]
        shifts = [self._base_function(u, base, f"gauge{kind}"), self._base_function(v, base, f"gauge{kind}")]
        others = [i for i in range(3) if i != kind - 1]
        forward = list(COORDS)
        inverse = list(NEW_COORDS)
        new_base = NEW_COORDS[kind - 1]
        for i, shift in zip(others, shifts):
            forward[i] = COORDS[i] + shift
            inverse[i] = NEW_COORDS[i] - substitute(shift, {base: new_base})
        m = PhaseMap(X1=forward[0], X2=forward[1], X3=forward[2], inverse=tuple(inverse),
                     domain=domain or self.domain, label=f"gauge{kind}")
        return self._step(f"gauge{kind}", {"f1": to_text(shifts[0]), "f2": to_text(shifts[1])}, m)

    def make_scaling(self, a: ExprLike, b: ExprLike, c: ExprLike, domain: Optional[Domain] = None) -> CTStep:
        factors = [as_expr(f) for f in (a, b, c)]
        for name, f in zip("abc", factors):
            if _coordinate_symbols(f):
                raise InvalidStepError(f"Scale factor {name} must be a constant or parameter, got {to_text(f)}")
            if f == 0:
                raise InvalidStepError(f"Scale factor {name} is zero")
        forward = [f * x for f, x in zip(factors, COORDS)]
        inverse = tuple(X / f for f, X in zip(factors, NEW_COORDS))
        m = PhaseMap(X1=forward[0], X2=forward[1], X3=forward[2], inverse=inverse,
                     domain=domain or self.domain, label="scaling")
        return self._step("scaling", dict(zip("abc", (to_text(f) for f in factors))), m)

    def make_point(self, kind: int, f1: ExprLike, f2: ExprLike, f3: ExprLike,
                   base_inverse: Optional[ExprLike] = None, strict: bool = False,
                   domain: Optional[Domain] = None) -> CTStep:
        """
        Point transformation on base variable x_kind: the base coordinate goes
        to f_kind(x_kind), the other two are multiplied by their f. The
        optional `base_inverse` writes x_kind in terms of X_kind.
        """
        if kind not in (1, 2, 3):
            raise InvalidStepError(f"Point kind must be 1, 2 or 3, got {kind}")
        name = f"point{kind}"
        base, new_base = COORDS[kind - 1], NEW_COORDS[kind - 1]
        fs = [self._base_function(f, base, name) for f in (f1, f2, f3)]
        forward = [fs[i] if i == kind - 1 else fs[i] * COORDS[i] for i in range(3)]
        constraint = sympy.Mul(*(diff(fs[i], base) if i == kind - 1 else fs[i] for i in range(3)))
        d = domain or self.domain
        if not self._is_one(constraint, d):
            message = f"{name} constraint fails: {to_text(constraint)} is not identically 1"
            if strict:
                raise NonCanonicalStepError(message)
            logger.warning(message)
        inverse = None
        if base_inverse is not None:
            recovered = as_expr(base_inverse, "X")
            stray = {s for s in recovered.free_symbols if s in (*NEW_COORDS, t)} - {new_base}
            if stray:
                raise InvalidStepError(f"The {name} base inverse may only depend on {new_base.name}")
            inverse = tuple(
                recovered if i == kind - 1 else NEW_COORDS[i] / substitute(fs[i], {base: recovered})
                for i in range(3)
            )
        m = PhaseMap(X1=forward[0], X2=forward[1], X3=forward[2], inverse=inverse, domain=d, label=name)
        payload = {f"f{i + 1}": to_text(f) for i, f in enumerate(fs)}
        notes = [] if inverse is not None else ["no symbolic inverse; numeric inversion is used where needed"]
        return self._step(name, payload, m, notes)

    def make_point1(self, f1: ExprLike, f2: ExprLike, f3: ExprLike, f1_inverse: Optional[ExprLike] = None,
                    strict: bool = False, domain: Optional[Domain] = None) -> CTStep:
        return self.make_point(1, f1, f2, f3, f1_inverse, strict, domain)

    def make_interchange(self, plane: str, sign: Union[int, str] = 1, domain: Optional[Domain] = None) -> CTStep:
        """
        Signed swap in a coordinate plane (i, j), third axis fixed:
        "+" sends (x_i, x_j) to (-x_j, x_i), "-" sends it to (x_j, -x_i).
        """
        plane = str(plane)
        if plane not in PLANES:
            raise InvalidStepError(f"Interchange plane must be one of {sorted(PLANES)}, got {plane!r}")
        positive = sign in (1, "+", "+1", "1")
        if not positive and sign not in (-1, "-", "-1"):
            raise InvalidStepError(f"Interchange sign must be + or -, got {sign!r}")
        i, j = PLANES[plane]
        forward = list(COORDS)
        inverse = list(NEW_COORDS)
        if positive:
            forward[i], forward[j] = -COORDS[j], COORDS[i]
            inverse[i], inverse[j] = NEW_COORDS[j], -NEW_COORDS[i]
        else:
            forward[i], forward[j] = COORDS[j], -COORDS[i]
            inverse[i], inverse[j] = -NEW_COORDS[j], NEW_COORDS[i]
        m = PhaseMap(X1=forward[0], X2=forward[1], X3=forward[2], inverse=tuple(inverse),
                     domain=domain or self.domain, label=f"interchange{plane}{'+' if positive else '-'}")
        return self._step("interchange", {"plane": plane, "sign": "+" if positive else "-"}, m)

    def make_linear(self, matrix: Sequence[Sequence[ExprLike]], domain: Optional[Domain] = None) -> CTStep:
        rows = [[as_expr(v) for v in row] for row in matrix]
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise InvalidStepError("A linear step needs a 3x3 matrix")
        M = sympy.Matrix(rows)
        det = simplify(M.det())
        if det == 0 or (not det.free_symbols and abs(float(det)) < 1e-12):
            raise SingularMatrixError("Linear step matrix is singular")
        inv = M.inv()
        forward = M * sympy.Matrix(COORDS)
        inverse = inv * sympy.Matrix(NEW_COORDS)
        m = PhaseMap(X1=forward[0], X2=forward[1], X3=forward[2], inverse=tuple(inverse),
                     domain=domain or self.domain, label="linear")
        # a·α with α the cofactors of the first row: the determinant, expanded
        alpha = self.cofactors(M)
        a_dot_alpha = simplify(sum((M[0, k] * alpha[k] for k in range(3)), sympy.Integer(0)))
        notes = [f"a.alpha = {to_text(a_dot_alpha)}", "alpha = (" + ", ".join(to_text(a) for a in alpha) + ")"]
        return self._step("linear", {"matrix": [[to_text(v) for v in row] for row in rows]}, m, notes)

    @staticmethod
    def cofactors(M: sympy.Matrix) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        """α1 = b2c3 - b3c2, α2 = b3c1 - b1c3, α3 = b1c2 - b2c1 for rows a, b, c."""
        b, c = M.row(1), M.row(2)
        return (
            simplify(b[1] * c[2] - b[2] * c[1]),
            simplify(b[2] * c[0] - b[0] * c[2]),
            simplify(b[0] * c[1] - b[1] * c[0]),
        )

    def make_custom(self, m: PhaseMap) -> CTStep:
        return self._step("custom", m.to_json(), m)

    def build_step(self, spec: StepSpec, domain: Optional[Domain] = None) -> CTStep:
        payload = spec.payload
        kind = spec.kind
        try:
            if kind.startswith("gauge"):
                step = self.make_gauge(int(kind[-1]), payload.get("f1", 0), payload.get("f2", 0), domain)
            elif kind.startswith("point"):
                step = self.make_point(int(kind[-1]), payload["f1"], payload["f2"], payload["f3"],
                                       payload.get("inverse"), bool(payload.get("strict", False)), domain)
            elif kind == "scaling":
                step = self.make_scaling(payload.get("a", 1), payload.get("b", 1), payload.get("c", 1), domain)
            elif kind == "interchange":
                step = self.make_interchange(payload["plane"], payload.get("sign", "+"), domain)
            elif kind == "linear":
                step = self.make_linear(payload["matrix"], domain)
            else:
                data = {k: payload[k] for k in ("X1", "X2", "X3", "inverse") if k in payload}
                step = self.make_custom(PhaseMap(**data, domain=domain or self.domain))
        except KeyError as err:
            raise InvalidStepError(f"{kind} step is missing field {err}") from err
        if spec.label:
            step.map.label = spec.label
        return step

    def sequence(self, specs: Iterable[StepSpec], leftmost_first: bool = False,
                 domain: Optional[Domain] = None, label: Optional[str] = None) -> CTSequence:
        """
        Build a sequence from file entries. Entries are in written order
        (rightmost acts first); `leftmost_first` flips lists written in
        application order.
        """
        specs = list(specs)
        if leftmost_first:
            specs.reverse()
        return CTSequence(steps=[self.build_step(s, domain) for s in specs], label=label)

    def compose(self, s: CTSequence, domain: Optional[Domain] = None) -> PhaseMap:
        """Substitution composition, rightmost step first."""
        forward: Tuple[sympy.Expr, ...] = tuple(COORDS)
        for step in reversed(s.steps):
            mapping = dict(zip(COORDS, step.map.components))
            forward = tuple(substitute(c, mapping) for c in forward)
        inverse = None
        if all(step.map.has_inverse for step in s.steps):
            inverse = tuple(NEW_COORDS)
            for step in s.steps:
                mapping = dict(zip(NEW_COORDS, step.map.inverse))
                inverse = tuple(substitute(c, mapping) for c in inverse)
            inverse = tuple(simplify(c) for c in inverse)
        d = domain or (s.steps[0].map.domain if s.steps else self.domain)
        X1, X2, X3 = (simplify(c) for c in forward)
        return PhaseMap(X1=X1, X2=X2, X3=X3, inverse=inverse, domain=d, label=s.label or "composite")

    def intermediate_brackets(self, s: CTSequence, d: Optional[Domain] = None) -> CheckReport:
        """Bracket of every step and of every partial composite (rightmost steps first) against 1."""
        d = d or self.domain
        items = [(f"step[{i}:{step.label}]", step.bracket, sympy.Integer(1)) for i, step in enumerate(s.steps)]
        for start in range(len(s.steps) - 1, 0, -1):
            partial = self.compose(CTSequence(steps=s.steps[start:]), d)
            items.append((f"partial[{start}:]", self.nambu.bracket(*partial.components), sympy.Integer(1)))
        return check_identities(items, d)

    def verify_equal(self, a: PhaseMap, b: PhaseMap, d: Optional[Domain] = None) -> CheckReport:
        d = d or a.domain
        return CheckReport.from_checks([
            check_identity(f"X{i + 1}", ca, cb, d) for i, (ca, cb) in enumerate(zip(a.components, b.components))
        ])
