#!/usr/bin/env python3
"""
Harmonic morphisms between Weyl spaces.

A map phi: (M, c_M, D^M) -> (N, c_N, D^N) is a harmonic morphism exactly when
it is harmonic (trace_c(D dphi) = 0) and horizontally weakly conformal. This
module evaluates both conditions, the identities that tie them to the
geometry of the fibres (chain rule, trace of the second fundamental form, the
fundamental equation) and the two-of-three criterion relating harmonicity,
minimal fibres and the induced partial connection on the horizontal space.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL
from .connection import (
    InducedPartial,
    PullbackPartial,
    WeylConnection,
    christoffel,
    hwc_residual,
    levi_civita,
    partial_lee_difference,
    second_fundamental_vertical,
    trace_hessian,
    trace_vertical,
)
from .errors import ConfigError, PreconditionError
from .expr import Expr, as_expression, constant_value, eval_jet2, is_constant
from .geometry import (
    RICHARDSON_TOL,
    DistributionSpec,
    MapSpec,
    SplitAtPoint,
    WeylStructure,
    image_point,
    map_jets,
    metric_at,
    richardson_directional,
    split_at,
)
from .reporting import (
    CheckResult,
    Measurement,
    VerdictReport,
    aggregate,
    build_report,
    detail_rows,
    map_points,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SquareDilation:
    """Lambda in the (g_M, g_N) gauge, with the conformality residual."""

    value: float
    residual: float
    conformal: bool

    @property
    def dilation(self) -> float:
        return float(np.sqrt(self.value)) if self.value > 0 else 0.0


def _split(phi: MapSpec, x) -> SplitAtPoint:
    return split_at(DistributionSpec.from_map(phi), phi.domain, x)


def tension_terms(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, x) -> Tuple[np.ndarray, float]:
    """Tension field and the largest magnitude among its three contributions."""
    y = image_point(phi, x)
    jets = map_jets(phi, x)
    G = metric_at(phi.domain, x).inverse
    gamma_m = conn_m.at(x).gamma
    gamma_n = conn_n.at(y).gamma
    second = np.einsum("ij,cij->c", G, jets.dd)
    domain_part = np.einsum("ij,kij,ck->c", G, gamma_m, jets.d)
    codomain_part = np.einsum("ij,cab,ai,bj->c", G, gamma_n, jets.d, jets.d)
    scale = max(np.abs(second).max(), np.abs(domain_part).max(), np.abs(codomain_part).max())
    return second - domain_part + codomain_part, float(scale)


def tension_field(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, x) -> np.ndarray:
    """
    trace_c(D dphi) in the gauge (g_M, g_N).

    tau^c = g^ij (d_i d_j phi^c - Gamma^{M,k}_ij d_k phi^c + Gamma^{N,c}_ab d_i phi^a d_j phi^b)

    Raises:
        PreconditionError: If phi(x) leaves the codomain sample box.
    """
    return tension_terms(phi, conn_m, conn_n, x)[0]


def hwc_check(phi: MapSpec, x, tol: float = DEFAULT_TOL) -> SquareDilation:
    """Horizontal weak conformality at x: P = Lambda g_N^-1 with Lambda = trace(P g_N)/n."""
    residual, value = hwc_residual(phi, x)
    return SquareDilation(value, residual, residual < tol * (1.0 + abs(value)))


def dilation_jets(phi: MapSpec, x) -> Tuple[float, np.ndarray]:
    """Lambda and its partials, from the pushed co-metric P and its derivatives."""
    S = _split(phi, x)
    jets = map_jets(phi, x)
    gN = metric_at(phi.codomain, jets.value)
    n = phi.n
    value = float(np.trace(S.pushed @ gN.g)) / n
    dgN = np.einsum("aij,ap->pij", gN.dg, jets.d)
    gradient = (np.einsum("pab,ba->p", S.dpushed, gN.g) + np.einsum("ab,pba->p", S.pushed, dgN)) / n
    return value, gradient


def _map_measurements(phi, conn_m, conn_n, x, tol):
    tau, scale = tension_terms(phi, conn_m, conn_n, x)
    hwc = hwc_check(phi, x, tol)
    return Measurement(float(np.abs(tau).max()), scale), Measurement(hwc.residual, abs(hwc.value))


def harmonic_morphism_verdict(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                              tol: float = DEFAULT_TOL, workers: int = 1, details: bool = False) -> VerdictReport:
    """Harmonic morphism verdict: harmonic and horizontally weakly conformal at every point."""
    results = map_points(lambda x: _map_measurements(phi, conn_m, conn_n, x, tol), points, workers)
    harmonic = aggregate("harmonic", [r[0] for r in results], tol)
    conformal = aggregate("hwc", [r[1] for r in results], tol)
    worst = harmonic if harmonic.max_residual >= conformal.max_residual else conformal
    primary = CheckResult("harmonic_morphism", worst.max_residual, worst.scale, tol,
                          harmonic.passed and conformal.passed)
    return build_report("harmonic_morphism", points, primary, [harmonic, conformal],
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------

def composite_jets(phi: MapSpec, f: Expr, x) -> Tuple[float, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Value, gradient and Hessian of f o phi, plus df and the Hessian of f at phi(x)."""
    jets = map_jets(phi, x)
    fj = eval_jet2(f, jets.value)
    grad_f, hess_f = np.array(fj.gradient), np.array(fj.hessian)
    gradient = jets.d.T @ grad_f
    hessian = jets.d.T @ hess_f @ jets.d + np.einsum("c,cij->ij", grad_f, jets.dd)
    return fj.value, gradient, hessian, grad_f, hess_f


def chain_rule_residual(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, f: Expr, x) -> Measurement:
    """
    |trace(D d(f o phi)) - df(tau) - <D df, P>| with P the pushed co-metric.

    This is an identity for every map; it does not assume harmonicity.
    """
    y = image_point(phi, x)
    jets = map_jets(phi, x)
    G = metric_at(phi.domain, x).inverse
    _, gradient, hessian, grad_f, hess_f = composite_jets(phi, f, x)
    left = trace_hessian(conn_m.at(x), G, gradient, hessian)
    tau = tension_field(phi, conn_m, conn_n, x)
    P = jets.d @ G @ jets.d.T
    gamma_n = conn_n.at(y).gamma
    second = float(np.einsum("ab,ab->", P, hess_f) - np.einsum("ab,cab,c->", P, gamma_n, grad_f))
    first = float(grad_f @ tau)
    return Measurement(abs(left - first - second), max(abs(left), abs(first), abs(second)))


def pullback_harmonic_residual(phi: MapSpec, conn_m: WeylConnection, f: Expr, x) -> Measurement:
    """|trace_c(D d(f o phi))| for a codomain function f."""
    G = metric_at(phi.domain, x).inverse
    _, gradient, hessian, _, _ = composite_jets(phi, f, x)
    value = trace_hessian(conn_m.at(x), G, gradient, hessian)
    scale = float(max(np.abs(np.einsum("ij,ij->", G, hessian)), np.abs(gradient).max(initial=0.0)))
    return Measurement(abs(value), scale)


def harmonic_polynomials(n: int, coords: Sequence[str]) -> List[Expr]:
    """Harmonic polynomials of flat R^n used as Fuglede-Ishihara probes."""
    if n == 1:
        texts = [coords[0], f"2*{coords[0]} + 1"]
    else:
        y1, y2 = coords[0], coords[1]
        texts = [y1, y2, f"{y1}^2 - {y2}^2", f"{y1}*{y2}", f"{y1}^3 - 3*{y1}*{y2}^2"]
    return [as_expression(t, coords) for t in texts]


def is_flat_gauge(w: WeylStructure) -> bool:
    """Whether w is presented literally as flat R^n (identity metric) with zero Lee form."""
    m = w.dim
    for i in range(m):
        for j in range(m):
            e = w.metric[i][j]
            if not is_constant(e) or constant_value(e) != (1.0 if i == j else 0.0):
                return False
    return all(is_constant(a) and constant_value(a) == 0.0 for a in w.lee_form)


def fuglede_ishihara_check(phi: MapSpec, conn_m: WeylConnection, points, tol: float = DEFAULT_TOL,
                           workers: int = 1, details: bool = False) -> VerdictReport:
    """
    Pullbacks of harmonic polynomials through phi are harmonic on (M, c, D^M).

    Raises:
        ConfigError: If the codomain is not presented as flat R^n with zero Lee form.
    """
    if not is_flat_gauge(phi.codomain):
        raise ConfigError("fuglede_ishihara needs a flat codomain gauge with zero Lee form")
    probes = harmonic_polynomials(phi.n, phi.codomain.coords)

    def measure(x):
        parts = [pullback_harmonic_residual(phi, conn_m, f, x) for f in probes]
        return Measurement(max(p.residual for p in parts), max(p.scale for p in parts))

    measurements = map_points(measure, points, workers)
    check = aggregate("pullbacks_harmonic", measurements, tol)
    return build_report("fuglede_ishihara", points, check, [check], values={"probes": [str(p) for p in probes]},
                        details=detail_rows(points, measurements) if details else None)


# ---------------------------------------------------------------------------
# Fibre geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SecondFundamentalForm:
    """B^{V,D}(U_a, U_b) on an orthonormal vertical frame, and its trace."""

    values: np.ndarray
    trace: np.ndarray

    @property
    def trace_free(self) -> np.ndarray:
        k = self.values.shape[0]
        return self.values - np.einsum("ab,i->abi", np.eye(k), self.trace / k)


def second_fundamental_form(dist: DistributionSpec, conn: WeylConnection, x) -> SecondFundamentalForm:
    """B^{V,D} with the horizontal projection, on an orthonormal vertical frame."""
    w = conn.structure
    S = split_at(dist, w, x)
    coeffs = conn.at(x)
    V = S.vertical
    k = V.shape[1]
    values = np.array([[second_fundamental_vertical(S, coeffs, V[:, a], V[:, b]) for b in range(k)]
                       for a in range(k)])
    return SecondFundamentalForm(values, trace_vertical(S, coeffs))


def integrability_tensor(dist: DistributionSpec, w: WeylStructure, x) -> np.ndarray:
    """
    I^H(E_a, E_b) = -V[E_a, E_b] on an orthonormal horizontal frame.

    Extending horizontal vectors X, Y as P_H X, P_H Y gives
    [X, Y] = (d_X P_H) Y - (d_Y P_H) X at the point.
    """
    S = split_at(dist, w, x)
    H = S.horizontal
    h = H.shape[1]
    out = np.zeros((h, h, w.dim))
    for a in range(h):
        for b in range(h):
            X, Y = H[:, a], H[:, b]
            bracket = np.einsum("p,pij,j->i", X, S.dPH, Y) - np.einsum("p,pij,j->i", Y, S.dPH, X)
            out[a, b] = -S.PV @ bracket
    return out


def codomain_lee_tilde(phi: MapSpec, conn_n: WeylConnection, x) -> np.ndarray:
    """Lee-form difference of the pulled-back D^N against the horizontal Levi-Civita connection of g_M."""
    return partial_lee_difference(PullbackPartial(phi, conn_n), InducedPartial(phi, levi_civita(phi.domain)), x).values


def fundamental_equation_residual(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, x,
                                  tol: float = DEFAULT_TOL) -> Measurement:
    """
    Two-sided check of the fundamental equation on an orthonormal horizontal frame:
    Lambda^-1 h(tau, dphi E_a) = (m-2) alpha_M(E_a) - (n-2) alpha~_N(E_a) - g(trace B^V, E_a),
    where alpha~_N is the Lee form of the pulled-back codomain connection relative to g_M.

    Raises:
        PreconditionError: If phi is not horizontally conformal at x.
    """
    hwc = hwc_check(phi, x, tol)
    if not hwc.conformal or hwc.value <= 0.0:
        raise PreconditionError("fundamental equation needs a horizontally conformal submersion", x)
    m, n = phi.m, phi.n
    S = _split(phi, x)
    metric = metric_at(phi.domain, x)
    jets = map_jets(phi, x)
    h = metric_at(phi.codomain, jets.value).g
    tau = tension_field(phi, conn_m, conn_n, x)
    H = S.horizontal
    left = (tau @ h @ jets.d @ H) / hwc.value
    alpha_m = conn_m.lee_form(x)
    alpha_n = codomain_lee_tilde(phi, conn_n, x)
    bott = metric.g @ trace_vertical(S, christoffel(phi.domain, x))
    terms = np.stack([(m - 2) * alpha_m @ H, (n - 2) * alpha_n @ H, bott @ H])
    right = terms[0] - terms[1] - terms[2]
    return Measurement(float(np.abs(left - right).max()), float(max(np.abs(left).max(), np.abs(terms).max())))


def _theorem23_measurements(phi, conn_m, conn_n, x, tol):
    harmonic, conformal = _map_measurements(phi, conn_m, conn_n, x, tol)
    S = _split(phi, x)
    minimal = trace_vertical(S, conn_m.at(x))
    bott_scale = float(np.abs(trace_vertical(S, christoffel(phi.domain, x))).max())
    difference = partial_lee_difference(PullbackPartial(phi, conn_n), InducedPartial(phi, conn_m), x).values
    return (harmonic, conformal, Measurement(float(np.abs(minimal).max()), bott_scale),
            Measurement(float(np.abs(difference).max()), bott_scale + float(np.abs(conn_m.lee_form(x)).max())))


def theorem23_report(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                     tol: float = DEFAULT_TOL, workers: int = 1, details: bool = False) -> VerdictReport:
    """
    Harmonic morphism, minimal fibres, and H D^M = D^N, with the two-of-three consistency flag.

    For n = 2 only the first two enter: a horizontally conformal submersion onto a
    surface is a harmonic morphism exactly when its fibres are minimal.
    """
    results = map_points(lambda x: _theorem23_measurements(phi, conn_m, conn_n, x, tol), points, workers)
    harmonic = aggregate("harmonic", [r[0] for r in results], tol)
    conformal = aggregate("hwc", [r[1] for r in results], tol)
    hm = CheckResult("harmonic_morphism", max(harmonic.max_residual, conformal.max_residual),
                     max(harmonic.scale, conformal.scale), tol, harmonic.passed and conformal.passed)
    minimal = aggregate("minimal_fibres", [r[2] for r in results], tol)
    horizontal = aggregate("horizontal_connection", [r[3] for r in results], tol)
    if not conformal.passed:
        flag = True
    elif phi.n == 2:
        flag = hm.passed == minimal.passed
    else:
        flag = sum((hm.passed, minimal.passed, horizontal.passed)) != 2
    checks = [hm, minimal] if phi.n == 2 else [hm, minimal, horizontal]
    return build_report("theorem23", points, None, checks, flags={"two_of_three": flag},
                        values={"hwc": conformal.passed},
                        details=detail_rows(points, [r[2] for r in results]) if details else None)


def required_codomain_lee(phi: MapSpec, conn_m: WeylConnection, points, tol: float = DEFAULT_TOL,
                          workers: int = 1, details: bool = False) -> VerdictReport:
    """
    The codomain Lee form forced by harmonicity, and whether it is basic.

    alpha_N(e_c) = [(m-2) alpha_M(X_c) - trace_g(B^V)^flat(X_c)] / (n-2) - (1/2) dln Lambda(X_c)
    on the basic lifts X_c of the codomain coordinate fields. For n = 2 the
    verdict is whether the fibres are minimal with respect to D^M.
    """
    w = phi.domain
    if phi.n == 2:
        def minimal(x):
            form = second_fundamental_form(DistributionSpec.from_map(phi), conn_m, x)
            scale = np.abs(trace_vertical(_split(phi, x), christoffel(w, x))).max()
            return Measurement(float(np.abs(form.trace).max()), float(scale))

        measurements = map_points(minimal, points, workers)
        check = aggregate("minimal_fibres", measurements, tol)
        return build_report("required_codomain_lee", points, check, [check],
                            details=detail_rows(points, measurements) if details else None)

    def candidate(x) -> np.ndarray:
        S = _split(phi, x)
        metric = metric_at(w, x)
        bott = metric.g @ trace_vertical(S, christoffel(w, x))
        value, gradient = dilation_jets(phi, x)
        lifts = S.lift
        return (((phi.m - 2) * conn_m.lee_form(x) - bott) @ lifts / (phi.n - 2)
                - 0.5 * (gradient @ lifts) / value)

    declared_lee = phi.codomain.lee_form

    def measure(x):
        S = _split(phi, x)
        here = candidate(x)
        drift = max(float(np.abs(richardson_directional(candidate, x, S.vertical[:, a])).max())
                    for a in range(S.vertical.shape[1]))
        target = np.array([eval_jet2(e, map_jets(phi, x).value).value for e in declared_lee])
        return (Measurement(drift, float(np.abs(here).max())),
                Measurement(float(np.abs(here - target).max()), float(np.abs(here).max())), here)

    results = map_points(measure, points, workers)
    basic = aggregate("basic", [r[0] for r in results], max(tol, RICHARDSON_TOL))
    matches = aggregate("matches_declared", [r[1] for r in results], tol)
    values = {"candidate": [r[2] for r in results]} if details else {}
    return build_report("required_codomain_lee", points, basic, [basic, matches], values=values,
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


def identity_report(name: str, measure, points, tol: float, workers: int = 1,
                    details: bool = False) -> VerdictReport:
    """Aggregate a raw identity residual (it should vanish for every input)."""
    measurements = map_points(measure, points, workers)
    check = aggregate(name, measurements, tol)
    return build_report(name, points, check, [check],
                        details=detail_rows(points, measurements) if details else None)
