#!/usr/bin/env python3
"""
Task registry: named checks that can be run on a geometry declaration.

Each task knows which declarations it applies to and how to turn one into a
VerdictReport. Raw identities (residuals that must vanish whatever the
geometry) are kept in a second registry used by the ``identity`` command.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from .config import RunSettings
from .connection import (
    compatibility_residual,
    declared,
    shifted_trace_residual,
    hermitian_weyl_connection,
    lee_formula_residual,
    minimal_weyl_connection,
    minimal_weyl_faraday,
    minimality_residual,
    torsion_residual,
)
from .curvature import asd_check, einstein_weyl_check, gauduchon_tod_check, gt_connection_curvature
from .declarations import GeometryDeclaration
from .errors import ConfigError
from .geometry import SampleSet, distribution_filter, map_filter, metric_filter, sample_points
from .hermitian import (
    dj_trace,
    holomorphy_report,
    lemma34_residual,
    nijenhuis_check,
    prop35_report,
    prop311_report,
    remark33_report,
)
from .morphism import (
    chain_rule_residual,
    fuglede_ishihara_check,
    fundamental_equation_residual,
    harmonic_morphism_verdict,
    harmonic_polynomials,
    identity_report,
    is_flat_gauge,
    required_codomain_lee,
    theorem23_report,
)
from .reporting import Measurement, VerdictReport, aggregate, build_report, detail_rows, map_points
from .twistor import (
    extract_k,
    geodesic_fibres_report,
    horizontal_connection_residual,
    k_section,
    lemma55_report,
    lemma55_residual,
    prop56_report,
    ricci_horizontal_tracefree,
    thm44a_report,
    twistorial_3to2,
    twistorial_4to2,
    twistorial_4to3,
    umbilic_fibres_report,
)


logger = logging.getLogger(__name__)

Runner = Callable[[GeometryDeclaration, SampleSet, float, int, bool], VerdictReport]
Applies = Callable[[GeometryDeclaration], Optional[str]]


@dataclass(frozen=True)
class Task:
    """
    A registered check.

    Attributes:
        name (str): Registry name, also the ``task`` field of its report.
        description (str): One line for ``weyl_check.py tasks``.
        applies (Applies): Returns None when the task applies, else the reason it does not.
        runner (Runner): Produces the report from a declaration and sample points.
    """

    name: str
    description: str
    applies: Applies
    runner: Runner


# ---------------------------------------------------------------------------
# Applicability
# ---------------------------------------------------------------------------

def _requires(*needs: str, dims: Tuple[int, ...] = (), maps: Tuple[Tuple[int, int], ...] = ()) -> Applies:
    """
    Build an applicability predicate.

    ``needs`` names declaration parts: map, J, JN (codomain J), k, fibration,
    line_field (a rank-one fibration) and flat_codomain.
    """
    def check(decl: GeometryDeclaration) -> Optional[str]:
        if dims and decl.dim not in dims:
            return f"needs dimension {' or '.join(map(str, dims))}, got {decl.dim}"
        for need in needs:
            if need == "map" and decl.phi is None:
                return "needs a [map]"
            if need == "J" and decl.complex_structure is None:
                return "needs a [complex_structure]"
            if need == "JN" and decl.codomain_complex_structure is None:
                return "needs a complex_structure in [weyl.codomain]"
            if need == "k" and decl.k is None:
                return "needs a [gauduchon_tod] k"
            if need in ("fibration", "line_field"):
                fibration = decl.fibration
                if fibration is None:
                    return "needs a [distribution] or a [map]"
                rank = fibration.rank(decl.dim)
                if not 0 < rank < decl.dim:
                    return f"distribution rank {rank} must lie strictly between 0 and {decl.dim}"
                if need == "line_field" and rank != 1:
                    return f"needs a rank-one distribution, got rank {rank}"
            if need == "flat_codomain" and not is_flat_gauge(decl.codomain):
                return "needs a codomain presented as flat R^n with zero Lee form"
        if maps and (decl.phi.m, decl.phi.n) not in maps:
            allowed = ", ".join(f"{m} -> {n}" for m, n in maps)
            return f"needs a map {allowed}, got {decl.phi.m} -> {decl.phi.n}"
        return None
    return check


def _even_dimension(decl: GeometryDeclaration) -> Optional[str]:
    if decl.complex_structure is None:
        return "needs a [complex_structure]"
    if decl.dim < 4 or decl.dim % 2:
        return f"needs an even dimension >= 4, got {decl.dim}"
    return None


# ---------------------------------------------------------------------------
# Runners for checks without a report function of their own
# ---------------------------------------------------------------------------

def _weyl_connection(decl: GeometryDeclaration, points, tol: float, workers: int, details: bool) -> VerdictReport:
    """Defining properties of the declared Weyl connection: Dg = -2 alpha g, torsion-free, Lee formula."""
    w = decl.domain
    conn = declared(w)

    def measure(x):
        coeffs = conn.at(x)
        scale = float(np.abs(coeffs.gamma).max())
        lee = lee_formula_residual(coeffs, w, x) if w.dim != 2 else 0.0
        return (Measurement(compatibility_residual(coeffs, w, x), scale),
                Measurement(torsion_residual(coeffs), scale),
                Measurement(lee, scale + float(np.abs(coeffs.lee).max())))

    results = map_points(measure, points, workers)
    compatible = aggregate("compatible", [r[0] for r in results], tol)
    checks = [compatible, aggregate("torsion_free", [r[1] for r in results], tol)]
    if w.dim != 2:
        checks.append(aggregate("lee_formula", [r[2] for r in results], tol))
    primary = max(checks, key=lambda c: (not c.passed, c.max_residual))
    return build_report("weyl_connection", points, primary, checks,
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


def _minimal_weyl(decl: GeometryDeclaration, points, tol: float, workers: int, details: bool) -> VerdictReport:
    """The minimal Weyl connection of the fibration leaves both it and its complement minimal."""
    w, dist = decl.domain, decl.fibration
    conn = minimal_weyl_connection(w, dist)
    measurements = map_points(lambda x: minimality_residual(w, dist, conn, x), points, workers)
    check = aggregate("minimal", measurements, tol)
    return build_report("minimal_weyl", points, check, [check],
                        details=detail_rows(points, measurements) if details else None)


def _hermitian_weyl(decl: GeometryDeclaration, points, tol: float, workers: int, details: bool) -> VerdictReport:
    """trace_c(DJ) vanishes for the Weyl connection of J."""
    w, J_field = decl.domain, decl.complex_structure
    conn = hermitian_weyl_connection(w, J_field)

    def measure(x):
        _, dJ = J_field.jets(x)
        scale = float(np.abs(conn.at(x).gamma).max() + np.abs(dJ).max())
        return Measurement(float(np.abs(dj_trace(conn, J_field, x)).max()), scale)

    measurements = map_points(measure, points, workers)
    check = aggregate("trace_dj", measurements, tol)
    values = {"lee_form": [conn.lee_form(x).tolist() for x in points.points]} if details else {}
    return build_report("hermitian_weyl", points, check, [check], values=values,
                        details=detail_rows(points, measurements) if details else None)


def _fibration_source(decl: GeometryDeclaration):
    """The explicit distribution when declared, else the map (whose report adds the 3 -> 2 flag)."""
    return decl.distribution if decl.distribution is not None else decl.phi


def _connections(decl: GeometryDeclaration):
    return declared(decl.domain), declared(decl.codomain)


def _map_task(report_fn) -> Runner:
    """Adapt a report function taking (phi, D^M, D^N, points, ...) to a runner."""
    def run(decl, points, tol, workers, details):
        conn_m, conn_n = _connections(decl)
        return report_fn(decl.phi, conn_m, conn_n, points, tol, workers, details)
    return run


def _domain_task(report_fn) -> Runner:
    """Adapt a report function taking (phi, D^M, points, ...) to a runner."""
    def run(decl, points, tol, workers, details):
        return report_fn(decl.phi, declared(decl.domain), points, tol, workers, details)
    return run


TASKS: Dict[str, Task] = {t.name: t for t in (
    Task("weyl_connection", "declared Weyl connection is compatible, torsion-free and satisfies the Lee formula",
         _requires(), _weyl_connection),
    Task("einstein_weyl", "trace-free symmetric Ricci tensor of D vanishes",
         _requires(dims=(3, 4, 5, 6)),
         lambda d, p, tol, wk, det: einstein_weyl_check(declared(d.domain), p, tol, wk, det)),
    Task("asd", "self-dual Weyl tensor vanishes for the chart orientation",
         _requires(dims=(4,)),
         lambda d, p, tol, wk, det: asd_check(d.domain, p, tol, wk, det)),
    Task("gauduchon_tod", "Einstein-Weyl with s = (3/2) k^2 and *Dk = F",
         _requires("k", dims=(3,)),
         lambda d, p, tol, wk, det: gauduchon_tod_check(declared(d.domain), d.k, p, tol, wk, det)),
    Task("gt_connection_flat", "the auxiliary Gauduchon-Tod connection is flat",
         _requires("k", dims=(3,)),
         lambda d, p, tol, wk, det: gt_connection_curvature(declared(d.domain), d.k, p, tol, wk, det)),
    Task("minimal_weyl", "minimal Weyl connection makes the fibration and its complement minimal",
         _requires("fibration"), _minimal_weyl),
    Task("minimal_weyl_faraday", "minimal Weyl connection of a line field has zero Faraday form",
         _requires("line_field"),
         lambda d, p, tol, wk, det: minimal_weyl_faraday(d.domain, d.fibration, p, tol, wk, det)),
    Task("hermitian_weyl", "Weyl connection of J has trace_c(DJ) = 0",
         _even_dimension, _hermitian_weyl),
    Task("remark33", "dimension 4: D_JX J + J D_X J = 0 and the commutator is connection-free",
         _requires("J", dims=(4,)),
         lambda d, p, tol, wk, det: remark33_report(d.complex_structure, d.domain, p, tol, wk, det)),
    Task("nijenhuis", "declared almost complex structure is integrable",
         _requires("J"),
         lambda d, p, tol, wk, det: nijenhuis_check(d.complex_structure, p, tol, wk, det)),
    Task("morphism", "map is harmonic and horizontally weakly conformal",
         _requires("map"), _map_task(harmonic_morphism_verdict)),
    Task("theorem23", "harmonic morphism, minimal fibres, horizontal connection: two imply the third",
         _requires("map"), _map_task(theorem23_report)),
    Task("fuglede_ishihara", "pullbacks of harmonic polynomials are harmonic",
         _requires("map", "flat_codomain"), _domain_task(fuglede_ishihara_check)),
    Task("required_codomain_lee", "codomain Lee form forced by the fundamental equation",
         _requires("map"), _domain_task(required_codomain_lee)),
    Task("holomorphic", "map intertwines the complex structures",
         _requires("map", "J", "JN"),
         lambda d, p, tol, wk, det: holomorphy_report(d.phi, d.complex_structure, d.codomain_complex_structure,
                                                      p, tol, wk, det)),
    Task("prop35", "holomorphic and horizontally conformal implies harmonic for the Hermitian Weyl connections",
         _requires("map", "J", "JN"),
         lambda d, p, tol, wk, det: prop35_report(d.phi, d.complex_structure, d.codomain_complex_structure,
                                                  p, tol, wk, det)),
    Task("prop311", "4 -> 2: harmonic morphism with integrable J iff J parallel along fibres",
         _requires("map", maps=((4, 2),)),
         lambda d, p, tol, wk, det: prop311_report(d.phi, declared(d.domain), p, tol, wk, det)),
    Task("twistorial_3to2", "3 -> 2: fibres are geodesics",
         _requires("map", maps=((3, 2),)), _domain_task(twistorial_3to2)),
    Task("twistorial_4to2", "4 -> 2: induced positive J is integrable",
         _requires("map", maps=((4, 2),)),
         lambda d, p, tol, wk, det: twistorial_4to2(d.phi, p, tol, wk, det)),
    Task("umbilic_fibres", "4 -> 2: umbilical fibres iff twistorial for both orientations",
         _requires("map", maps=((4, 2),)),
         lambda d, p, tol, wk, det: umbilic_fibres_report(d.phi, p, tol, wk, det)),
    Task("twistorial_4to3", "4 -> 3: pullback of D^N equals D+",
         _requires("map", maps=((4, 3),)),
         lambda d, p, tol, wk, det: twistorial_4to3(d.phi, declared(d.codomain), p, tol, wk, det)),
    Task("thm44a", "4 -> 3: harmonic morphism, twistorial, H D^M = H D + (1/2) *I: two imply the third",
         _requires("map", maps=((4, 3),)), _map_task(thm44a_report)),
    Task("extract_k", "4 -> 3: the section k of D^M = D + (1/2)(k + *I)",
         _requires("map", maps=((4, 3),)), _domain_task(extract_k)),
    Task("geodesic_fibres", "4 -> 3: geodesic fibres iff integrable horizontal distribution",
         _requires("map", maps=((4, 3),)), _map_task(geodesic_fibres_report)),
    Task("ricci_horizontal", "trace-free symmetric Ricci tensor vanishes on the horizontal space",
         _requires("fibration", dims=(3, 4)),
         lambda d, p, tol, wk, det: ricci_horizontal_tracefree(declared(d.domain), _fibration_source(d),
                                                               p, tol, wk, det)),
    Task("prop56", "harmonic morphism 4 -> 2, 3: Ricci condition iff twistorial",
         _requires("map", maps=((4, 2), (4, 3))), _map_task(prop56_report)),
    Task("lemma55", "harmonic morphism 4 -> 3: null-direction Ricci identity",
         _requires("map", maps=((4, 3),)), _map_task(lemma55_report)),
)}


# ---------------------------------------------------------------------------
# Raw identities
# ---------------------------------------------------------------------------

def _chain(decl: GeometryDeclaration):
    conn_m, conn_n = _connections(decl)
    functions = decl.identity_functions or tuple(harmonic_polynomials(decl.phi.n, decl.codomain.coords))

    def measure(x):
        parts = [chain_rule_residual(decl.phi, conn_m, conn_n, f, x) for f in functions]
        return Measurement(max(p.residual for p in parts), max(p.scale for p in parts))
    return measure


def _trace_b(decl: GeometryDeclaration):
    conn = declared(decl.domain)
    return lambda x: shifted_trace_residual(decl.domain, decl.fibration, conn, x)


def _fundamental(decl: GeometryDeclaration):
    conn_m, conn_n = _connections(decl)
    return lambda x: fundamental_equation_residual(decl.phi, conn_m, conn_n, x)


def _lemma34(decl: GeometryDeclaration):
    conn_m, conn_n = _connections(decl)
    return lambda x: lemma34_residual(decl.phi, decl.complex_structure, decl.codomain_complex_structure,
                                      conn_m, conn_n, x)


def _lemma55(decl: GeometryDeclaration):
    conn_m, conn_n = _connections(decl)
    return lambda x: lemma55_residual(decl.phi, conn_m, conn_n, x)


def _eq13(decl: GeometryDeclaration):
    w = decl.domain
    conn = declared(w)

    def measure(x):
        coeffs = conn.at(x)
        residual = max(lee_formula_residual(coeffs, w, x), compatibility_residual(coeffs, w, x))
        return Measurement(residual, float(np.abs(coeffs.gamma).max() + np.abs(coeffs.lee).max()))
    return measure


def _eq41(decl: GeometryDeclaration):
    conn = declared(decl.domain)
    return lambda x: horizontal_connection_residual(decl.phi, conn, x)


def _eq42(decl: GeometryDeclaration):
    conn = declared(decl.domain)

    def measure(x):
        section = k_section(decl.phi, conn, x)
        return Measurement(section.horizontal_residual, abs(section.k) + float(np.abs(conn.lee_form(x)).max()))
    return measure


@dataclass(frozen=True)
class Identity:
    name: str
    description: str
    applies: Applies
    measure: Callable[[GeometryDeclaration], Callable]


IDENTITIES: Dict[str, Identity] = {i.name: i for i in (
    Identity("chain", "trace Dd(f o phi) = df(tension) + <Ddf, pushed co-metric>",
             _requires("map"), _chain),
    Identity("trace-b", "trace of B for D versus Levi-Civita, shifted by the horizontal Lee form",
             _requires("fibration"), _trace_b),
    Identity("fundamental", "fundamental equation of a horizontally conformal map",
             _requires("map"), _fundamental),
    Identity("lemma34", "tension of a holomorphic map in terms of the traces of DJ",
             _requires("map", "J", "JN"), _lemma34),
    Identity("lemma55", "4 -> 3 null-direction Ricci identity",
             _requires("map", maps=((4, 3),)), _lemma55),
    Identity("eq13", "Lee form from the trace difference with Levi-Civita, dimension != 2",
             _requires(dims=(3, 4, 5, 6)), _eq13),
    Identity("eq41", "4 -> 3: H D^M = H D + (1/2) *_H I^H",
             _requires("map", maps=((4, 3),)), _eq41),
    Identity("eq42", "4 -> 3: horizontal part of 2(alpha_M - alpha_D) equals *_H I^H",
             _requires("map", maps=((4, 3),)), _eq42),
)}


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

def get_task(name: str) -> Task:
    """
    Raises:
        ConfigError: For an unregistered name; the message lists the registry.
    """
    try:
        return TASKS[name]
    except KeyError:
        raise ConfigError(f"unknown task '{name}'; registered tasks: {', '.join(TASKS)}") from None


def get_identity(name: str) -> Identity:
    try:
        return IDENTITIES[name]
    except KeyError:
        raise ConfigError(f"unknown identity '{name}'; available: {', '.join(IDENTITIES)}") from None


def applicable_tasks(decl: GeometryDeclaration) -> List[str]:
    return [name for name, task in TASKS.items() if task.applies(decl) is None]


def sample_for(decl: GeometryDeclaration, settings: RunSettings) -> SampleSet:
    """Sample the domain chart, keeping points where every declared object is regular."""
    filters = [metric_filter(decl.domain)]
    if decl.phi is not None:
        filters.append(map_filter(decl.phi))
    if decl.distribution is not None:
        filters.append(distribution_filter(decl.domain, decl.distribution))
    return sample_points(decl.domain.chart, settings.points, settings.seed, filters)


def _stamp(report: VerdictReport, name: str, settings: RunSettings) -> VerdictReport:
    report.task = name
    report.engine_version = __version__
    report.config = settings.echo()
    return report


def run_task(decl: GeometryDeclaration, name: str, settings: RunSettings, details: bool = False,
             points: Optional[SampleSet] = None) -> VerdictReport:
    """
    Run one registered task.

    Raises:
        ConfigError: If the task is unknown or does not apply to the declaration.
        GeometryError: If a precondition fails or too few sample points survive.
    """
    task = get_task(name)
    reason = task.applies(decl)
    if reason:
        raise ConfigError(f"task '{name}' does not apply to {decl.name}: {reason}")
    if points is None:
        points = sample_for(decl, settings)
    logger.info("running %s on %s (%d points)", name, decl.name, points.accepted)
    report = task.runner(decl, points, settings.tol, settings.workers, details)
    logger.info("%s: %s (max residual %.3e)", name, report.verdict, report.max_residual)
    return _stamp(report, name, settings)


def run_tasks(decl: GeometryDeclaration, names: List[str], settings: RunSettings,
              details: bool = False) -> List[VerdictReport]:
    """Run several tasks on one shared sample."""
    for name in names:
        get_task(name)
    points = sample_for(decl, settings)
    return [run_task(decl, name, settings, details, points) for name in names]


def run_identity(decl: GeometryDeclaration, name: str, settings: RunSettings,
                 details: bool = False) -> VerdictReport:
    """
    Evaluate a raw identity residual over the sample.

    Raises:
        ConfigError: If the identity is unknown or does not apply.
    """
    identity = get_identity(name)
    reason = identity.applies(decl)
    if reason:
        raise ConfigError(f"identity '{name}' does not apply to {decl.name}: {reason}")
    points = sample_for(decl, settings)
    report = identity_report(name, identity.measure(decl), points, settings.tol, settings.workers, details)
    return _stamp(report, name, settings)
