import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import sympy

import settings
from exceptions import NambuError
from repositories.example_repo import ExampleRepository
from schemas.example import ExampleEntry
from schemas.report import CheckReport, IdentityCheck, Report
from services.canonical_service import CanonicalService
from services.decompose_service import DecomposeService
from services.genfun_service import GenFunService
from services.lie_service import LieService
from services.nambu_service import NambuService
from symbolic.domain import Domain
from symbolic.parser import parse
from symbolic.sampling import check_identities
from symbolic.variables import COORDS
from utils import timer

logger = logging.getLogger(__name__)

MODULES = ("expr", "nambu", "canonical", "genfun", "lie", "decompose")
INJECTIONS = ("wrong-k", "bad-scaling")

Section = Tuple[str, str, CheckReport]


class SelftestService:
    """Runs every registry entry through the verifications that apply to it."""

    def __init__(self, repo: Optional[ExampleRepository] = None):
        self.repo = repo or ExampleRepository()
        self.nambu = NambuService()
        self.canonical = CanonicalService(self.nambu)
        self.genfun = GenFunService()
        self.lie = LieService(self.nambu)
        self.decompose = DecomposeService(self.nambu)

    def run(self, module: Optional[str] = None, inject: Optional[str] = None, jobs: int = 1,
            overrides: Optional[Dict] = None) -> Report:
        if module is not None and module not in MODULES:
            raise ValueError(f"Unknown module {module!r}; choose from {', '.join(MODULES)}")
        if inject is not None and inject not in INJECTIONS:
            raise ValueError(f"Unknown injection {inject!r}; choose from {', '.join(INJECTIONS)}")
        overrides = overrides or {}
        entries = [self._inject(e, inject) for e in self.repo.all()]
        sections: List[Section] = []
        if module in (None, "expr", "nambu"):
            sections.extend(self.core_checks(Domain().updated(**overrides)))
        with timer("selftest"):
            if jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    results = list(pool.map(lambda e: self.run_entry(e, module, overrides), entries))
            else:
                results = [self.run_entry(e, module, overrides) for e in entries]
        for found in results:
            sections.extend(found)

        checks = []
        verdicts: Dict[str, Dict[str, bool]] = {}
        for entry_id, name, report in sections:
            verdicts.setdefault(entry_id, {})[name] = report.passed
            for c in report.identities:
                checks.append(c.model_copy(update={"label": f"{entry_id}:{name}:{c.label}"}))
        report = Report(command="selftest", passed=all(c.passed for c in checks), checks=checks, verdicts=verdicts)
        for failure in (c for c in checks if not c.passed):
            logger.warning(f"selftest failure: {failure.label} (residual {failure.residual:.3e})")
        return report

    def _inject(self, entry: ExampleEntry, inject: Optional[str]) -> ExampleEntry:
        if inject == "wrong-k" and entry.target is not None:
            target = entry.target.model_copy(update={"H2": 2 * entry.target.H2})
            return entry.model_copy(update={"target": target})
        if inject == "bad-scaling" and entry.id == "scaling":
            return entry.model_copy(update={"domain": entry.domain.updated(params={"a": 2.0, "b": 1.0, "c": 1.0})})
        return entry

    def core_checks(self, d: Domain) -> List[Section]:
        f, g, h = (parse(s) for s in ("x1*x2 + sin(x3)", "x2^2 - x1*x3", "exp(x1/4) + x3"))
        k = parse("x1 + x2*x3^2")
        bracket = self.nambu.bracket
        items = [
            ("fundamental", bracket(*(parse(v) for v in ("x1", "x2", "x3"))), sympy.Integer(1)),
            ("antisymmetry", bracket(f, g, h), -bracket(g, f, h)),
            ("leibniz", bracket(f * k, g, h), f * bracket(k, g, h) + k * bracket(f, g, h)),
        ]
        return [("core", "expr", check_identities(items, d))]

    def run_entry(self, entry: ExampleEntry, module: Optional[str], overrides: Dict) -> List[Section]:
        d = entry.domain.updated(**overrides) if overrides else entry.domain
        wanted = [m for m in MODULES[1:] if m in entry.tags or (m == "genfun" and entry.gf is not None)]
        if module is not None:
            wanted = [m for m in wanted if m == module]
        sections: List[Section] = []
        for name in wanted:
            runner = getattr(self, f"_{name}_checks")
            try:
                sections.extend((entry.id, label, report) for label, report in runner(entry, d))
            except NambuError as err:
                logger.error(f"{entry.id}: {name} checks raised {err}")
                failed = IdentityCheck(label=type(err).__name__, residual=float("inf"), passed=False,
                                       tolerance=d.tol)
                sections.append((entry.id, name, CheckReport.from_checks([failed], [str(err)])))
        return sections

    def _canonical_checks(self, entry: ExampleEntry, d: Domain):
        m = entry.map
        if m is None:
            return
        verdict = self.canonical.classify(m, d)
        expected = entry.expected or "canonical"
        yield "classify", CheckReport.from_checks([IdentityCheck(
            label=f"verdict {verdict.kind} (expected {expected})", residual=verdict.residual,
            passed=verdict.kind == expected, tolerance=d.tol)])
        if verdict.kind == "canonical" and m.has_inverse:
            yield "direct_conditions", self.canonical.direct_conditions(m, d)
        if entry.pair is not None and entry.expected == "not_universal":
            yield "canonoid_divergence", self.canonical.canonoid_divergence(m, entry.pair, d)
        if entry.pair is not None and entry.target is not None:
            yield "verify_k", self.canonical.verify_new_hamiltonians(m, entry.pair, entry.target, d)
        if entry.transportable and entry.expected == "canonical":
            k = self.canonical.transport_hamiltonians(m, entry.pair)
            target = entry.target
            yield "transport", check_identities([
                ("K1", m.pull_back(k.H1), m.pull_back(target.H1)),
                ("K2", m.pull_back(k.H2), m.pull_back(target.H2)),
            ], d)

    def _nambu_checks(self, entry: ExampleEntry, d: Domain):
        if entry.map is None or entry.pair is None or entry.target is None or entry.x0 is None:
            return
        x0 = entry.x0.model_copy(update={"params": {**d.params, **entry.x0.params}})
        yield "covariance", self.canonical.covariance_check(entry.map, entry.pair, entry.target, x0,
                                                            x0.t + entry.t_end, settings.RK4_STEP)

    def _genfun_checks(self, entry: ExampleEntry, d: Domain):
        if entry.map is None:
            return
        yield "abc_divergence", self.genfun.divergence_identity(entry.map, d)
        if entry.gf is None:
            return
        yield "verify_gf", self.genfun.verify_genfun(entry.map, entry.gf, d)
        yield "pfaffian_X", self.genfun.pfaffian_residual_X(entry.map, entry.gf, d)
        if entry.pair is not None and entry.target is not None and entry.map.has_inverse:
            yield "time_part", self.genfun.verify_time_part(entry.map, entry.gf, entry.pair, entry.target, d)

    def _lie_checks(self, entry: ExampleEntry, d: Domain):
        g = entry.generators
        if g is None:
            return
        yield "divergence", self.lie.divergence_check(g, d)
        if entry.closed_form is not None:
            series = self.lie.lie_series(g, entry.eps, entry.order)
            yield "closed_form", self.lie.closed_form_check(series, entry.closed_form, d.updated(tol=1e-12))
        yield "cross_check", self.lie.cross_check(g, entry.cross_eps, entry.cross_order, settings.RK4_STEP, d)

    def _decompose_checks(self, entry: ExampleEntry, d: Domain):
        s = entry.sequence
        if s is None:
            return
        composite = self.decompose.compose(s, d)
        yield "compose", self.decompose.verify_equal(composite, entry.map, d)
        yield "intermediate", self.decompose.intermediate_brackets(s, d)
        if composite.has_inverse:
            roundtrip = [composite.pull_back(c) for c in composite.require_inverse()]
            yield "inverse", check_identities([(x.name, e, x) for x, e in zip(COORDS, roundtrip)], d)
