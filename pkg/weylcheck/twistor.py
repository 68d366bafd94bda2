#!/usr/bin/env python3
"""
Twistorial maps and the Ricci conditions that go with them.

Covers submersions 3 -> 2 (geodesic fibres), 4 -> 2 (integrability of the
induced positive almost complex structure) and 4 -> 3 (the partial
connection pulled back from the codomain equals D+ = H D + *_H I^H), the
two-of-three criterion tying twistoriality to harmonic morphisms, the
extraction of the section k, and the horizontal Ricci identities.

Partial connections are compared through their Lee forms, so D+ and D- are
carried as horizontal 1-forms relative to the representative g of c_M.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .config import DEFAULT_TOL
from .connection import (
    InducedPartial,
    PartialConnection,
    PullbackPartial,
    ShiftedPartial,
    WeylConnection,
    declared,
    levi_civita,
    minimal_weyl,
    minimal_weyl_connection,
    partial_lee_difference,
)
from .curvature import EPSILON4, curvature_at
from .errors import ConfigError, PreconditionError
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
from .hermitian import InducedComplexStructure, nijenhuis_check
from .morphism import harmonic_morphism_verdict, hwc_check, integrability_tensor, second_fundamental_form
from .reporting import (
    CheckResult,
    Measurement,
    VerdictReport,
    aggregate,
    build_report,
    detail_rows,
    map_points,
    point_list,
)


logger = logging.getLogger(__name__)

EPSILON3 = EPSILON4[0][1:, 1:, 1:]

# Coefficient of *_H I^H in the horizontal part of D^M for twistorial harmonic morphisms 4 -> 3.
STAR_COEFFICIENT = 0.5


@dataclass(frozen=True)
class DPlusMinus:
    """
    Lee forms (relative to g) of the partial connections D+- = H D +- *_H I^H.

    Attributes:
        minimal: Horizontal part of the Lee form of the minimal Weyl connection D.
        star: The horizontal 1-form *_H I^H.
    """

    point: np.ndarray
    minimal: np.ndarray
    star: np.ndarray

    @property
    def plus(self) -> np.ndarray:
        return self.minimal + self.star

    @property
    def minus(self) -> np.ndarray:
        return self.minimal - self.star

    @property
    def difference_residual(self) -> float:
        return float(np.abs(self.plus - self.minus - 2.0 * self.star).max())


@dataclass(frozen=True)
class KSection:
    """
    k read off D^M = D + (1/2)(k + *_H I^H), as a function in the gauge g.

    Attributes:
        k: 2 (alpha_M - alpha_D)(U) for the oriented unit vertical U.
        horizontal_residual: |2 (alpha_M - alpha_D)|_H - *_H I^H|.
        dilation: Lambda at the point, used to move k into the codomain gauge.
    """

    point: np.ndarray
    k: float
    horizontal_residual: float
    dilation: float

    @property
    def codomain_gauge(self) -> float:
        return self.k / np.sqrt(self.dilation)


Source = Union[MapSpec, DistributionSpec]


def _as_distribution(source: Source) -> DistributionSpec:
    return DistributionSpec.from_map(source) if isinstance(source, MapSpec) else source


def _require_dims(phi: MapSpec, dims: Tuple[int, int], what: str) -> None:
    if (phi.m, phi.n) != dims:
        raise ConfigError(f"{what} needs a map from dimension {dims[0]} to {dims[1]}, got {phi.m} -> {phi.n}")


def _require_hwc(phi: MapSpec, points, tol: float) -> None:
    for x in point_list(points):
        hwc = hwc_check(phi, x, tol)
        if not hwc.conformal or hwc.value <= 0.0:
            raise PreconditionError(f"map is not horizontally conformal (residual {hwc.residual:.2e})", x)


def _reversed(phi: MapSpec) -> MapSpec:
    return phi.with_domain(phi.domain.reoriented(-phi.domain.chart.orientation))


# ---------------------------------------------------------------------------
# Dimension 3 -> 2
# ---------------------------------------------------------------------------

def twistorial_3to2(phi: MapSpec, conn_m: WeylConnection, points, tol: float = DEFAULT_TOL, workers: int = 1,
                    details: bool = False) -> VerdictReport:
    """
    Twistoriality of a horizontally conformal submersion 3 -> 2: its fibres are D^M-geodesics.

    The flag asserts agreement with the harmonic-morphism verdict.
    """
    _require_dims(phi, (3, 2), "twistorial_3to2")
    _require_hwc(phi, points, tol)
    dist = DistributionSpec.from_map(phi)

    def measure(x):
        form = second_fundamental_form(dist, conn_m, x)
        return Measurement(float(np.abs(form.values).max()), float(np.abs(conn_m.at(x).gamma).max()))

    measurements = map_points(measure, points, workers)
    geodesic = aggregate("geodesic_fibres", measurements, tol)
    hm = harmonic_morphism_verdict(phi, conn_m, declared(phi.codomain), points, tol, workers)
    return build_report("twistorial_3to2", points, geodesic,
                        [geodesic, CheckResult("harmonic_morphism", hm.max_residual, hm.scale, tol, hm.passed)],
                        flags={"agrees_with_harmonic_morphism": geodesic.passed == hm.passed},
                        details=detail_rows(points, measurements) if details else None)


# ---------------------------------------------------------------------------
# Dimension 4 -> 2
# ---------------------------------------------------------------------------

def _induced_integrability(phi: MapSpec, points, tol: float, workers: int, details: bool = False) -> VerdictReport:
    J_field = InducedComplexStructure(DistributionSpec.from_map(phi), phi.domain)
    return nijenhuis_check(J_field, points, tol, workers, details)


def twistorial_4to2(phi: MapSpec, points, tol: float = DEFAULT_TOL, workers: int = 1,
                    details: bool = False) -> VerdictReport:
    """
    Twistoriality of a horizontally conformal submersion 4 -> 2: the induced
    positive almost complex structure is integrable.

    The verdict is for the declared orientation; the reversed orientation is
    reported as a separate check.
    """
    _require_dims(phi, (4, 2), "twistorial_4to2")
    _require_hwc(phi, points, tol)
    derived_tol = max(tol, RICHARDSON_TOL)
    declared_run = _induced_integrability(phi, points, derived_tol, workers, details)
    reversed_run = _induced_integrability(_reversed(phi), points, derived_tol, workers)
    positive = CheckResult("integrable", declared_run.max_residual, declared_run.scale, derived_tol,
                           declared_run.passed)
    negative = CheckResult("integrable_reversed", reversed_run.max_residual, reversed_run.scale, derived_tol,
                           reversed_run.passed)
    return build_report("twistorial_4to2", points, positive, [positive, negative],
                        values={"orientation": phi.domain.chart.orientation}, details=declared_run.details)


def umbilic_fibres_report(phi: MapSpec, points, tol: float = DEFAULT_TOL, workers: int = 1,
                          details: bool = False) -> VerdictReport:
    """
    Fibres of a horizontally conformal submersion 4 -> 2 are totally umbilical
    exactly when it is twistorial for both orientations.
    """
    _require_dims(phi, (4, 2), "umbilic_fibres")
    dist = DistributionSpec.from_map(phi)
    lc = levi_civita(phi.domain)

    def measure(x):
        form = second_fundamental_form(dist, lc, x)
        return Measurement(float(np.abs(form.trace_free).max()), float(np.abs(form.values).max()))

    measurements = map_points(measure, points, workers)
    umbilic = aggregate("umbilic", measurements, tol)
    twistorial = twistorial_4to2(phi, points, tol, workers)
    both = twistorial.check("integrable") and twistorial.check("integrable_reversed")
    checks = [umbilic,
              CheckResult("twistorial_both_orientations", twistorial.max_residual, twistorial.scale,
                          twistorial.tolerance, both)]
    return build_report("umbilic_fibres", points, None, checks, flags={"umbilic_iff_both": umbilic.passed == both},
                        details=detail_rows(points, measurements) if details else None)


# ---------------------------------------------------------------------------
# Dimension 4 -> 3
# ---------------------------------------------------------------------------

def _star_form(S: SplitAtPoint, dist: DistributionSpec, w: WeylStructure, x) -> np.ndarray:
    """
    *_H I^H as a horizontal covector.

    iota(E_a, E_b) = g(I^H(E_a, E_b), U) with (U, E_1, E_2, E_3) the positive
    adapted frame of the split, and (*iota)(E_a) = (1/2) eps_abc iota(E_b, E_c).
    """
    g = metric_at(w, x).g
    U = S.vertical[:, 0]
    H = S.horizontal
    iota = np.einsum("abk,kl,l->ab", integrability_tensor(dist, w, x), g, U)
    values = 0.5 * np.einsum("abc,bc->a", EPSILON3, iota)
    return g @ H @ values


def dpm_forms(source: Source, w: WeylStructure, x) -> DPlusMinus:
    """
    Lee forms of D+- for a rank-one distribution (explicit, or ker dphi) on an oriented 4-manifold.

    Raises:
        ConfigError: If the dimension is not 4 or the distribution is not of rank one.
        DegenerateDistributionError: If the split degenerates at x.
    """
    dist = _as_distribution(source)
    if w.dim != 4 or dist.rank(w.dim) != 1:
        raise ConfigError("D+- need a rank-one distribution on a four-manifold")
    S = split_at(dist, w, x)
    minimal = S.PH.T @ minimal_weyl(w, dist, x)
    return DPlusMinus(S.point, minimal, _star_form(S, dist, w, x))


def _dpm_partials(phi: MapSpec) -> Tuple[PartialConnection, PartialConnection]:
    dist = DistributionSpec.from_map(phi)
    w = phi.domain
    base = InducedPartial(phi, minimal_weyl_connection(w, dist))
    plus = ShiftedPartial(base, lambda x: dpm_forms(dist, w, x).star)
    minus = ShiftedPartial(base, lambda x: -dpm_forms(dist, w, x).star)
    return plus, minus


def _twistorial_measurements(phi: MapSpec, conn_n: WeylConnection, plus, minus, pull, x):
    forms = dpm_forms(phi, phi.domain, x)
    scale = float(max(np.abs(forms.minimal).max(), np.abs(forms.star).max())
                  + np.abs(conn_n.lee_form(image_point(phi, x))).max())
    return tuple(Measurement(float(np.abs(partial_lee_difference(p, pull, x).values).max()), scale)
                 for p in (plus, minus))


def twistorial_4to3(phi: MapSpec, conn_n: WeylConnection, points, tol: float = DEFAULT_TOL, workers: int = 1,
                    details: bool = False) -> VerdictReport:
    """
    Twistoriality of a horizontally conformal submersion 4 -> 3: the pull-back
    of D^N over H equals D+ for the domain orientation.

    The check ``twistorial_reversed`` compares against D-, which is D+ for the
    reversed orientation.
    """
    _require_dims(phi, (4, 3), "twistorial_4to3")
    _require_hwc(phi, points, tol)
    plus, minus = _dpm_partials(phi)
    pull = PullbackPartial(phi, conn_n)
    results = map_points(lambda x: _twistorial_measurements(phi, conn_n, plus, minus, pull, x), points, workers)
    positive = aggregate("twistorial", [r[0] for r in results], tol)
    negative = aggregate("twistorial_reversed", [r[1] for r in results], tol)
    return build_report("twistorial_4to3", points, positive, [positive, negative],
                        values={"orientation": phi.domain.chart.orientation},
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


def horizontal_connection_residual(phi: MapSpec, conn_m: WeylConnection, x,
                                   coefficient: float = STAR_COEFFICIENT) -> Measurement:
    """|H D^M - (H D + c *_H I^H)| as Lee forms on H, c = 1/2 unless overridden."""
    S = split_at(DistributionSpec.from_map(phi), phi.domain, x)
    forms = dpm_forms(phi, phi.domain, x)
    alpha = S.PH.T @ conn_m.lee_form(x)
    residual = alpha - forms.minimal - coefficient * forms.star
    scale = max(np.abs(alpha).max(), np.abs(forms.minimal).max(), np.abs(forms.star).max())
    return Measurement(float(np.abs(residual).max()), float(scale))


def thm44a_report(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                  tol: float = DEFAULT_TOL, workers: int = 1, details: bool = False,
                  star_coefficient: float = STAR_COEFFICIENT) -> VerdictReport:
    """
    Harmonic morphism (a1), twistorial (a2) and H D^M = H D + (1/2) *_H I^H (a3):
    any two imply the third.
    """
    _require_dims(phi, (4, 3), "thm44a")
    hm = harmonic_morphism_verdict(phi, conn_m, conn_n, points, tol, workers)
    twistorial = twistorial_4to3(phi, conn_n, points, tol, workers)
    measurements = map_points(lambda x: horizontal_connection_residual(phi, conn_m, x, star_coefficient), points, workers)
    a3 = aggregate("horizontal_connection", measurements, tol)
    a1 = CheckResult("harmonic_morphism", hm.max_residual, hm.scale, tol, hm.passed)
    a2 = CheckResult("twistorial", twistorial.max_residual, twistorial.scale, tol, twistorial.passed)
    passing = sum((a1.passed, a2.passed, a3.passed))
    logger.debug("thm44a: %d of 3 assertions hold", passing)
    return build_report("thm44a", points, None, [a1, a2, a3], flags={"two_of_three": passing != 2},
                        details=detail_rows(points, measurements) if details else None)


def k_section(phi: MapSpec, conn_m: WeylConnection, x) -> KSection:
    """k and the horizontal part of D^M = D + (1/2)(k + *_H I^H) at x."""
    dist = DistributionSpec.from_map(phi)
    w = phi.domain
    S = split_at(dist, w, x)
    U = S.vertical[:, 0]
    if np.linalg.det(np.column_stack([U, S.lift])) * w.chart.orientation < 0:
        U = -U
    difference = 2.0 * (conn_m.lee_form(x) - minimal_weyl(w, dist, x))
    star = _star_form(S, dist, w, x)
    residual = float(np.abs(S.PH.T @ difference - star).max())
    return KSection(S.point, float(difference @ U), residual, hwc_check(phi, x).value)


def extract_k(phi: MapSpec, conn_m: WeylConnection, points, tol: float = DEFAULT_TOL, workers: int = 1,
              details: bool = False) -> VerdictReport:
    """
    The section k of a candidate twistorial harmonic morphism 4 -> 3.

    The verdict is the horizontal consistency; ``basic`` records whether k,
    moved into the codomain gauge, is constant along the fibres.
    """
    _require_dims(phi, (4, 3), "extract_k")

    def measure(x):
        section = k_section(phi, conn_m, x)
        U = split_at(DistributionSpec.from_map(phi), phi.domain, x).vertical[:, 0]
        drift = richardson_directional(lambda y: k_section(phi, conn_m, y).codomain_gauge, x, U)
        scale = abs(section.k) + float(np.abs(conn_m.lee_form(x)).max())
        return (Measurement(section.horizontal_residual, scale),
                Measurement(float(np.abs(drift)), abs(section.codomain_gauge)), section.k)

    results = map_points(measure, points, workers)
    horizontal = aggregate("horizontal", [r[0] for r in results], tol)
    basic = aggregate("basic", [r[1] for r in results], max(tol, RICHARDSON_TOL))
    ks = [r[2] for r in results]
    values = {"k_min": min(ks), "k_max": max(ks)} if ks else {}
    if details:
        values["k"] = ks
    return build_report("extract_k", points, horizontal, [horizontal, basic], values=values,
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


def geodesic_fibres_report(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                           tol: float = DEFAULT_TOL, workers: int = 1, details: bool = False) -> VerdictReport:
    """
    For a twistorial harmonic morphism 4 -> 3 the fibres are D^M-geodesics
    exactly when H is integrable. The flag is vacuous off that locus.
    """
    _require_dims(phi, (4, 3), "geodesic_fibres")
    dist = DistributionSpec.from_map(phi)

    def measure(x):
        form = second_fundamental_form(dist, conn_m, x)
        tensor = integrability_tensor(dist, phi.domain, x)
        scale = float(np.abs(conn_m.at(x).gamma).max())
        return Measurement(float(np.abs(form.values).max()), scale), Measurement(float(np.abs(tensor).max()), scale)

    results = map_points(measure, points, workers)
    geodesic = aggregate("geodesic_fibres", [r[0] for r in results], tol)
    integrable = aggregate("integrable_horizontal", [r[1] for r in results], tol)
    hm = harmonic_morphism_verdict(phi, conn_m, conn_n, points, tol, workers)
    twistorial = twistorial_4to3(phi, conn_n, points, tol, workers)
    applies = hm.passed and twistorial.passed
    return build_report("geodesic_fibres", points, None, [geodesic, integrable],
                        flags={"geodesic_iff_integrable": not applies or geodesic.passed == integrable.passed},
                        values={"harmonic_morphism": hm.passed, "twistorial": twistorial.passed},
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


# ---------------------------------------------------------------------------
# Ricci conditions
# ---------------------------------------------------------------------------

def _trace_free(A: np.ndarray) -> np.ndarray:
    return A - np.trace(A) / A.shape[0] * np.eye(A.shape[0])


def _horizontal_ricci(conn: WeylConnection, S: SplitAtPoint, x) -> np.ndarray:
    ricci = curvature_at(conn, x).ricci
    H = S.horizontal
    return H.T @ (0.5 * (ricci + ricci.T)) @ H


def ricci_horizontal_tracefree(conn: WeylConnection, source: Source, points, tol: float = DEFAULT_TOL,
                               workers: int = 1, details: bool = False) -> VerdictReport:
    """
    The trace-free part of Sym(Ric^D) restricted to H.

    For a horizontally conformal map 3 -> 2 that is a harmonic morphism,
    geodesic fibres, twistoriality and this condition hold together, and the
    flags assert it. Only that direction is checked: a map with trace-free
    horizontal Ricci is a harmonic morphism only if its tension also vanishes
    along a hypersurface transversal to the fibres, which a sample cannot see.
    A map that is not horizontally conformal is no harmonic morphism, so its
    flags hold trivially.
    """
    w = conn.structure
    if w.dim not in (3, 4):
        raise ConfigError(f"ricci_horizontal_tracefree needs dimension 3 or 4, got {w.dim}")
    dist = _as_distribution(source)

    def measure(x):
        S = split_at(dist, w, x)
        block = _horizontal_ricci(conn, S, x)
        return Measurement(float(np.abs(_trace_free(block)).max()), float(np.abs(block).max()))

    measurements = map_points(measure, points, workers)
    check = aggregate("ricci_horizontal_tracefree", measurements, tol)
    flags, values = {}, {}
    if isinstance(source, MapSpec) and (source.m, source.n) == (3, 2):
        try:
            twistorial = twistorial_3to2(source, conn, points, tol, workers)
        except PreconditionError as e:
            logger.debug("no harmonic morphism to compare with: %s", e)
            hm, geodesic, twistorial_passed = False, False, False
        else:
            hm = twistorial.check("harmonic_morphism")
            geodesic = twistorial.check("geodesic_fibres")
            twistorial_passed = twistorial.passed and all(twistorial.flags.values())
        flags["harmonic_morphism_implies_tracefree"] = not hm or check.passed
        flags["geodesic_twistorial_tracefree_agree"] = not hm or (geodesic and twistorial_passed and check.passed)
        values = {"harmonic_morphism": hm, "geodesic_fibres": geodesic, "twistorial": twistorial_passed}
    return build_report("ricci_horizontal", points, check, [check], flags=flags, values=values,
                        details=detail_rows(points, measurements) if details else None)


def _require_harmonic_morphism(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                               tol: float, workers: int, what: str) -> VerdictReport:
    hm = harmonic_morphism_verdict(phi, conn_m, conn_n, points, tol, workers)
    if not hm.passed:
        raise PreconditionError(f"{what} needs a harmonic morphism (max residual {hm.max_residual:.2e})")
    return hm


def _relative_ricci_measurement(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, x) -> Measurement:
    S = split_at(DistributionSpec.from_map(phi), phi.domain, x)
    domain_block = _horizontal_ricci(conn_m, S, x)
    pushed = map_jets(phi, x).d @ S.horizontal
    ricci_n = curvature_at(conn_n, image_point(phi, x)).ricci
    codomain_block = pushed.T @ (0.5 * (ricci_n + ricci_n.T)) @ pushed
    difference = _trace_free(domain_block - codomain_block)
    return Measurement(float(np.abs(difference).max()),
                       float(max(np.abs(domain_block).max(), np.abs(codomain_block).max())))


def prop56_report(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                  tol: float = DEFAULT_TOL, workers: int = 1, details: bool = False) -> VerdictReport:
    """
    For a harmonic morphism 4 -> 2 or 4 -> 3: the trace-free part of
    Sym(Ric^M - phi* Ric^N) on H vanishes exactly when phi is twistorial (for
    some orientation).

    Raises:
        PreconditionError: If phi is not a harmonic morphism.
    """
    if phi.m != 4 or phi.n not in (2, 3):
        raise ConfigError(f"prop56 needs a map from dimension 4 to 2 or 3, got {phi.m} -> {phi.n}")
    _require_harmonic_morphism(phi, conn_m, conn_n, points, tol, workers, "prop56")
    measurements = map_points(lambda x: _relative_ricci_measurement(phi, conn_m, conn_n, x), points, workers)
    ricci = aggregate("ricci_tracefree", measurements, tol)
    if phi.n == 3:
        run = twistorial_4to3(phi, conn_n, points, tol, workers)
        twistorial = run.check("twistorial") or run.check("twistorial_reversed")
    else:
        run = twistorial_4to2(phi, points, tol, workers)
        twistorial = run.check("integrable") or run.check("integrable_reversed")
    checks = [ricci, CheckResult("twistorial", run.max_residual, run.scale, run.tolerance, twistorial)]
    return build_report("prop56", points, None, checks, flags={"agrees_with_twistorial": ricci.passed == twistorial},
                        details=detail_rows(points, measurements) if details else None)


def _null_horizontal(S: SplitAtPoint) -> np.ndarray:
    H = S.horizontal
    return (H[:, 0] + 1j * H[:, 1]) / np.sqrt(2.0)


def lemma55_residual(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, x) -> Measurement:
    """
    |Ric^M(Y, Y) - Ric^N(dphi Y, dphi Y) + (1/2) A+(Y) A-(Y)| for the horizontal
    null vector Y = (E_1 + i E_2)/sqrt(2), with A+- = D+- - D^N as Lee forms.
    All tensors extend complex-bilinearly.
    """
    S = split_at(DistributionSpec.from_map(phi), phi.domain, x)
    Y = _null_horizontal(S)
    pushed = map_jets(phi, x).d @ Y
    ricci_m = curvature_at(conn_m, x).ricci
    ricci_n = curvature_at(conn_n, image_point(phi, x)).ricci
    plus, minus = _dpm_partials(phi)
    pull = PullbackPartial(phi, conn_n)
    a_plus = partial_lee_difference(plus, pull, x).values @ Y
    a_minus = partial_lee_difference(minus, pull, x).values @ Y
    terms = (Y @ ricci_m @ Y, pushed @ ricci_n @ pushed, 0.5 * a_plus * a_minus)
    residual = terms[0] - terms[1] + terms[2]
    return Measurement(float(abs(residual)), float(max(abs(t) for t in terms)))


def lemma55_report(phi: MapSpec, conn_m: WeylConnection, conn_n: WeylConnection, points,
                   tol: float = DEFAULT_TOL, workers: int = 1, details: bool = False) -> VerdictReport:
    """
    Raises:
        PreconditionError: If phi is not a harmonic morphism.
    """
    _require_dims(phi, (4, 3), "lemma55")
    _require_harmonic_morphism(phi, conn_m, conn_n, points, tol, workers, "lemma55")
    measurements = map_points(lambda x: lemma55_residual(phi, conn_m, conn_n, x), points, workers)
    check = aggregate("null_ricci_identity", measurements, tol)
    return build_report("lemma55", points, check, [check],
                        details=detail_rows(points, measurements) if details else None)
