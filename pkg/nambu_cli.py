#!/usr/bin/env python3
"""
Command line for checking canonical transformations of Nambu systems.

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage
or input errors.
"""
import functools
import json
import logging
import sys
from typing import Dict, List, Optional, Tuple

import click

import settings
from exceptions import (
    ExprSyntaxError,
    NambuError,
    UnboundParameterError,
    UnknownExampleError,
)
from repositories import file_repo
from repositories.example_repo import ExampleRepository
from schemas.example import ExampleEntry
from schemas.phase import GeneratorPair, HamiltonPair, PhaseMap
from schemas.report import CheckReport, IdentityCheck, Report
from services.canonical_service import CanonicalService
from services.decompose_service import DecomposeService
from services.genfun_service import GenFunService
from services.lie_service import LieService
from services.nambu_service import NambuService
from services.selftest_service import INJECTIONS, MODULES, SelftestService
from symbolic.domain import Domain, Point
from symbolic.printer import to_text
from symbolic.sampling import check_identities, free_names, sample_points

logger = logging.getLogger(__name__)

repo = ExampleRepository()


class Options:
    """Shared flags of every command."""

    def __init__(self, as_json: bool, tol: Optional[float], samples: Optional[int], domain: Optional[str],
                 params: Tuple[str, ...], seed: Optional[int]):
        self.as_json = as_json
        self.tol = tol
        self.samples = samples
        self.domain = domain
        self.params = parse_params(params)
        self.seed = seed

    def domain_for(self, base: Optional[Domain] = None) -> Domain:
        changes: Dict = {"params": self.params}
        if self.domain:
            changes["bounds"] = Domain.from_string(self.domain).bounds
        if self.tol is not None:
            changes["tol"] = self.tol
        if self.samples is not None:
            changes["samples"] = self.samples
        if self.seed is not None:
            changes["seed"] = self.seed
        return (base or Domain()).updated(**changes)

    def overrides(self) -> Dict:
        return {k: v for k, v in (("tol", self.tol), ("samples", self.samples), ("seed", self.seed)) if v is not None}


def parse_params(values: Tuple[str, ...]) -> Dict[str, float]:
    params = {}
    for value in values:
        for item in value.replace(",", " ").split():
            name, sep, number = item.partition("=")
            if not sep:
                raise click.BadParameter(f"expected name=value, got {item!r}", param_hint="--param")
            try:
                params[name.strip()] = float(number)
            except ValueError:
                raise click.BadParameter(f"{number!r} is not a number", param_hint="--param")
    return params


def parse_point(text: str) -> Tuple[float, float, float]:
    try:
        values = tuple(float(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise click.BadParameter(f"expected x1,x2,x3, got {text!r}")
    if len(values) != 3:
        raise click.BadParameter(f"expected three coordinates, got {text!r}")
    return values


def common_options(fn):
    @click.option("--json", "as_json", is_flag=True, help="Machine-readable report on stdout.")
    @click.option("--tol", type=float, default=None, help="Residual tolerance for identity checks.")
    @click.option("--samples", type=click.IntRange(min=1), default=None, help="Sample points per identity.")
    @click.option("--domain", default=None, help='Sampling box, e.g. "x1:0.5,2;x2:0.5,2".')
    @click.option("--param", "params", multiple=True,
                  help='Parameter bindings name=value. Repeat the flag (--param a=1 --param b=1) or give '
                       'several at once as "a=1,b=1" or, quoted, "a=1 b=1".')
    @click.option("--seed", type=int, default=None, help="Seed for sample point generation.")
    @functools.wraps(fn)
    def wrapper(*args, as_json, tol, samples, domain, params, seed, **kwargs):
        try:
            opts = Options(as_json, tol, samples, domain, params, seed)
        except ValueError as err:
            raise click.BadParameter(str(err), param_hint="--domain")
        return fn(*args, opts=opts, **kwargs)

    return wrapper


def handles_errors(fn):
    """Input errors exit with 2, verification errors with 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ExprSyntaxError, UnknownExampleError, UnboundParameterError, ValueError) as err:
            raise click.UsageError(str(err))
        except NambuError as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(1)

    return wrapper


def emit(opts: Options, report: Report, lines: Optional[List[str]] = None):
    if opts.as_json:
        click.echo(json.dumps(report.to_json(), indent=2))
    else:
        for line in lines or []:
            click.echo(line)
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            click.echo(f"{status}  {c.label:<40} residual={c.residual:.3e}")
        click.echo(f"{report.command}: {'pass' if report.passed else 'FAIL'}")
    sys.exit(report.exit_code)


def build_report(command: str, reports: List[CheckReport], verdicts: Optional[Dict] = None,
                 passed: Optional[bool] = None) -> Report:
    checks = [c for r in reports for c in r.identities]
    ok = all(c.passed for c in checks) if passed is None else passed and all(c.passed for c in checks)
    return Report(command=command, passed=ok, checks=checks, verdicts=verdicts or {})


def load_example(example_id: Optional[str]) -> Optional[ExampleEntry]:
    return repo.get(example_id) if example_id else None


def require(value, what: str, entry: Optional[ExampleEntry]):
    if value is None:
        source = f"example {entry.id!r}" if entry else "the command line"
        raise click.UsageError(f"No {what} given (neither a file nor {source} provides one)")
    return value


def resolve_map(map_file: Optional[str], entry: Optional[ExampleEntry]) -> PhaseMap:
    if map_file:
        return file_repo.load_map(map_file)
    return require(entry.map if entry else None, "map", entry)


def resolve_pair(pair_file: Optional[str], entry: Optional[ExampleEntry], attr: str = "pair") -> HamiltonPair:
    if pair_file:
        return file_repo.load_pair(pair_file)
    return require(getattr(entry, attr) if entry else None, "Hamiltonian pair" if attr == "pair" else "K pair", entry)


def base_domain(entry: Optional[ExampleEntry], m: Optional[PhaseMap] = None) -> Domain:
    if entry is not None:
        return entry.domain
    return m.domain if m is not None else Domain()


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging.")
def cli(verbose: int):
    """Verify canonical transformations, generating functions and flows of Nambu systems."""
    level = {0: settings.LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")


@cli.command()
@click.argument("map_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id", help="Registry example id instead of a map file.")
@click.option("--coefficients", is_flag=True, help="Also report the universality coefficients.")
@common_options
@handles_errors
def classify(map_file, example_id, coefficients, opts: Options):
    """Canonical, canonoid with a universal constant, or neither."""
    entry = load_example(example_id)
    m = resolve_map(map_file, entry)
    d = opts.domain_for(base_domain(entry, m))
    verdict = CanonicalService().classify(m, d)
    reports = []
    if coefficients:
        reports.append(CanonicalService().coefficient_report(m, d))
    verdicts = {"kind": verdict.kind, "bracket": verdict.bracket_expr}
    if verdict.constant_value is not None:
        verdicts["constant"] = verdict.constant_value
    lines = [f"verdict: {verdict.kind}", f"bracket: {verdict.bracket_expr}"]
    emit(opts, build_report("classify", reports, verdicts), lines)


@cli.command("verify-gf")
@click.argument("map_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.argument("gf_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id")
@click.option("--pair", "pair_file", type=click.Path(exists=True, dir_okay=False),
              help="Source pair for the time-part identity.")
@click.option("--kpair", "kpair_file", type=click.Path(exists=True, dir_okay=False),
              help="Transformed pair for the time-part identity.")
@click.option("--negated", is_flag=True, help="Compare with -A, -B, -C (the pair in the other order).")
@common_options
@handles_errors
def verify_gf(map_file, gf_file, example_id, pair_file, kpair_file, negated, opts: Options):
    """Check generating functions against the map's A, B, C coefficients."""
    entry = load_example(example_id)
    m = resolve_map(map_file, entry)
    gf = file_repo.load_genfun(gf_file) if gf_file else require(entry.gf if entry else None, "generating functions",
                                                                   entry)
    d = opts.domain_for(base_domain(entry, m))
    service = GenFunService()
    reports = [service.divergence_identity(m, d), service.verify_genfun(m, gf, d, negated),
               service.pfaffian_residual_X(m, gf, d, negated)]
    pair = file_repo.load_pair(pair_file) if pair_file else (entry.pair if entry else None)
    kpair = file_repo.load_pair(kpair_file) if kpair_file else (entry.target if entry else None)
    if pair is not None and kpair is not None:
        reports.append(service.verify_time_part(m, gf, pair, kpair, d))
    emit(opts, build_report("verify-gf", reports, {"abc": service.abc_coefficients(m).to_json()}))


@cli.command()
@click.argument("map_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.argument("pair_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id")
@common_options
@handles_errors
def transport(map_file, pair_file, example_id, opts: Options):
    """New Hamiltonians K = H composed with the inverse map."""
    entry = load_example(example_id)
    m = resolve_map(map_file, entry)
    p = resolve_pair(pair_file, entry)
    d = opts.domain_for(base_domain(entry, m))
    k = CanonicalService().transport_hamiltonians(m, p)
    reports = []
    if entry is not None and entry.target is not None and not pair_file:
        reports.append(check_identities([
            ("K1", m.pull_back(k.H1), m.pull_back(entry.target.H1)),
            ("K2", m.pull_back(k.H2), m.pull_back(entry.target.H2)),
        ], d))
    lines = [f"K1 = {to_text(k.H1)}", f"K2 = {to_text(k.H2)}"]
    emit(opts, build_report("transport", reports, {"K1": to_text(k.H1), "K2": to_text(k.H2)}), lines)


@cli.command("verify-k")
@click.argument("map_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.argument("pair_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.argument("kpair_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id")
@common_options
@handles_errors
def verify_k(map_file, pair_file, kpair_file, example_id, opts: Options):
    """Check that a K pair generates the transformed motion."""
    entry = load_example(example_id)
    m = resolve_map(map_file, entry)
    p = resolve_pair(pair_file, entry)
    k = resolve_pair(kpair_file, entry, "target")
    d = opts.domain_for(base_domain(entry, m))
    emit(opts, build_report("verify-k", [CanonicalService().verify_new_hamiltonians(m, p, k, d)]))


@cli.command()
@click.argument("map_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.argument("pair_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.argument("kpair_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id")
@click.option("--x0", "x0_text", help="Start point x1,x2,x3.")
@click.option("--t0", type=float, default=0.0, show_default=True)
@click.option("--t", "t_span", type=float, default=1.0, show_default=True, help="Integration time.")
@click.option("--h", "h", type=float, default=settings.RK4_STEP, show_default=True)
@click.option("--max-deviation", type=float, default=1e-6, show_default=True)
@common_options
@handles_errors
def covariance(map_file, pair_file, kpair_file, example_id, x0_text, t0, t_span, h, max_deviation, opts: Options):
    """Integrate both systems and compare the mapped trajectories."""
    entry = load_example(example_id)
    m = resolve_map(map_file, entry)
    p = resolve_pair(pair_file, entry)
    k = resolve_pair(kpair_file, entry, "target")
    d = opts.domain_for(base_domain(entry, m))
    x0 = start_point(x0_text, entry, t0, d)
    report = CanonicalService().covariance_check(m, p, k, x0, x0.t + t_span, h, tol=max_deviation)
    emit(opts, build_report("covariance", [report]))


def start_point(x0_text: Optional[str], entry: Optional[ExampleEntry], t0: float, d: Domain) -> Point:
    if x0_text:
        x1, x2, x3 = parse_point(x0_text)
        return Point(x1=x1, x2=x2, x3=x3, t=t0, params=d.params)
    x0 = require(entry.x0 if entry else None, "start point (--x0)", entry)
    return x0.model_copy(update={"params": {**d.params, **x0.params}})


def resolve_generators(g1: Optional[str], g2: Optional[str], entry: Optional[ExampleEntry]) -> GeneratorPair:
    if g1 is not None and g2 is not None:
        return GeneratorPair(G1=g1, G2=g2)
    return require(entry.generators if entry else None, "generators", entry)


@cli.command()
@click.argument("g1", required=False)
@click.argument("g2", required=False)
@click.option("--example", "example_id")
@click.option("--eps", type=float, default=None, help="Transformation parameter.")
@click.option("--order", type=click.IntRange(min=1), default=None, help="Truncation order of the series.")
@click.option("--points", type=click.IntRange(min=1), default=None, help="Evaluate at this many sample points.")
@click.option("--check-rotation", is_flag=True, help="Compare with the rotation about the x1 axis by eps.")
@click.option("--cross-check", "cross", is_flag=True, help="Compare the series with the integrated flow.")
@click.option("--h", "h", type=float, default=settings.RK4_STEP, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), help="CSV file for --points.")
@common_options
@handles_errors
def lie(g1, g2, example_id, eps, order, points, check_rotation, cross, h, output, opts: Options):
    """Lie series of the transformation generated by G1, G2."""
    entry = load_example(example_id)
    g = resolve_generators(g1, g2, entry)
    eps = eps if eps is not None else (entry.eps if entry else 0.5)
    order = order or (entry.order if entry else settings.LIE_ORDER)
    d = opts.domain_for(base_domain(entry))
    service = LieService()
    series = service.lie_series(g, eps, order)
    reports = [service.divergence_check(g, d)]
    if check_rotation:
        reports.append(service.closed_form_check(series, service.rotation_about_x1(eps), d))
    if cross:
        reports.append(service.cross_check(g, eps, order, h, d))
    lines = [f"X{i + 1} = {to_text(X)}" for i, X in enumerate(series.partial_sums())]
    if points:
        exprs = series.partial_sums()
        names = sorted(set(free_names(exprs)) | {"x1", "x2", "x3"})
        rows = [[p["x1"], p["x2"], p["x3"], *values]
                for p, values in sample_points(names, d.updated(samples=points), series.evaluate_at, points)]
        header = ["x1", "x2", "x3", "X1", "X2", "X3"]
        if output:
            file_repo.write_points(rows, header, output)
            lines.append(f"wrote {len(rows)} points to {output}")
        elif not opts.as_json:
            lines = [",".join(header)] + [",".join(f"{v:.12g}" for v in row) for row in rows]
    verdicts = {"series": series.to_json()["X"], "eps": eps, "order": order}
    emit(opts, build_report("lie", reports, verdicts), lines)


@cli.command()
@click.argument("g1", required=False)
@click.argument("g2", required=False)
@click.option("--example", "example_id")
@click.option("--eps", type=float, required=True)
@click.option("--h", "h", type=float, default=settings.RK4_STEP, show_default=True)
@click.option("--point", "point_texts", multiple=True, required=True, help="Start point x1,x2,x3 (repeatable).")
@common_options
@handles_errors
def flow(g1, g2, example_id, eps, h, point_texts, opts: Options):
    """Endpoints of the generator flow after parameter eps."""
    entry = load_example(example_id)
    g = resolve_generators(g1, g2, entry)
    d = opts.domain_for(base_domain(entry))
    apply = LieService().flow_map(g, eps, h, d.params)
    mapped = []
    lines = []
    for text in point_texts:
        x = parse_point(text)
        X = [float(v) for v in apply(x)]
        mapped.append({"x": list(x), "X": X})
        lines.append(f"{x} -> ({X[0]:.12g}, {X[1]:.12g}, {X[2]:.12g})")
    emit(opts, build_report("flow", [], {"points": mapped}), lines)


@cli.command()
@click.argument("sequence_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id")
@click.option("--target", "target_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--leftmost-first", is_flag=True,
              help="The file lists steps in the order they act, not in written order.")
@click.option("--verify", is_flag=True, help="Compare with the target map and check intermediate brackets.")
@common_options
@handles_errors
def compose(sequence_file, example_id, target_file, leftmost_first, verify, opts: Options):
    """Compose a step sequence; the rightmost step acts first."""
    entry = load_example(example_id)
    d = opts.domain_for(base_domain(entry))
    service = DecomposeService(domain=d)
    if sequence_file:
        s = service.sequence(file_repo.load_step_specs(sequence_file), leftmost_first, d)
    else:
        s = require(entry.sequence if entry else None, "sequence", entry)
    composite = service.compose(s, d)
    target = file_repo.load_map(target_file) if target_file else (entry.map if entry else None)
    reports = []
    if verify or target_file:
        if target is not None:
            reports.append(service.verify_equal(composite, target, d))
        reports.append(service.intermediate_brackets(s, d))
    lines = [f"X{i + 1} = {to_text(X)}" for i, X in enumerate(composite.components)]
    emit(opts, build_report("compose", reports, {"composite": composite.to_json(),
                                                 "steps": [step.to_json() for step in s.steps]}), lines)


@cli.command()
@click.argument("pair_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--example", "example_id")
@click.option("--x0", "x0_text", help="Start point x1,x2,x3.")
@click.option("--t0", type=float, default=0.0, show_default=True)
@click.option("--t", "t_span", type=float, default=1.0, show_default=True)
@click.option("--h", "h", type=float, default=settings.RK4_STEP, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), help="CSV trajectory file (JSON sidecar next to it).")
@click.option("--max-drift", type=float, default=1e-8, show_default=True)
@common_options
@handles_errors
def evolve(pair_file, example_id, x0_text, t0, t_span, h, output, max_drift, opts: Options):
    """Integrate the Nambu-Hamilton equations with fixed-step RK4."""
    entry = load_example(example_id)
    p = resolve_pair(pair_file, entry)
    d = opts.domain_for(base_domain(entry))
    x0 = start_point(x0_text, entry, t0, d)
    trajectory = NambuService().integrate_flow(p, x0, x0.t + t_span, h)
    checks = [IdentityCheck(label=f"drift[{name}]", residual=value, passed=value <= max_drift, tolerance=max_drift)
              for name, value in trajectory.drift.items()]
    final = trajectory.final
    lines = [f"final t={final.t:.6g}: ({final.x1:.12g}, {final.x2:.12g}, {final.x3:.12g})"]
    if output:
        file_repo.write_trajectory(trajectory, output)
        lines.append(f"wrote {len(trajectory.samples)} samples to {output}")
    verdicts = {"final": final.model_dump(), "h": trajectory.h, "drift": trajectory.drift}
    emit(opts, build_report("evolve", [CheckReport.from_checks(checks)], verdicts), lines)


@cli.command()
@click.option("--filter", "module", type=click.Choice(MODULES), default=None, help="Run one module's checks.")
@click.option("--inject", type=click.Choice(INJECTIONS), default=None, help="Negative control.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@common_options
@handles_errors
def selftest(module, inject, jobs, opts: Options):
    """Run every registry example through its verifications."""
    report = SelftestService(repo).run(module, inject, jobs, opts.overrides())
    lines = [f"{entry_id}: " + ", ".join(f"{name}={'pass' if ok else 'FAIL'}" for name, ok in results.items())
             for entry_id, results in report.verdicts.items()]
    emit(opts, report, lines)


@cli.command("examples")
@click.argument("example_id", required=False)
@handles_errors
def list_examples(example_id):
    """List registry ids, or show one example."""
    if example_id:
        click.echo(json.dumps(repo.get(example_id).to_json(), indent=2))
        return
    for entry in repo.all():
        click.echo(f"{entry.id:<22} {entry.description}")


if __name__ == "__main__":
    cli()
