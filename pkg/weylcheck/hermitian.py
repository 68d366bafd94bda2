#!/usr/bin/env python3
"""
Almost Hermitian data on Weyl spaces.

Declared almost complex structures, the Kähler form, the Nijenhuis tensor,
traces of DJ, holomorphic maps and the identity they satisfy, and the
positive almost complex structure induced by a two-dimensional distribution
on an oriented four-manifold.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOL
from .connection import (
    WeylConnection,
    anticommutator_residual,
    christoffel,
    declared,
    dj_trace as _trace_dj,
    hermitian_weyl_connection,
    trace_hessian,
)
from .curvature import conformal_frame, hodge_star_pairs, two_form_vector
from .errors import ConfigError, PreconditionError
from .expr import Expr, as_expression, eval_jet2
from .geometry import (
    RICHARDSON_TOL,
    DistributionSpec,
    MapSpec,
    WeylStructure,
    _complement,
    _explicit_fields,
    _key,
    _on_domain,
    gram_schmidt,
    image_point,
    map_jets,
    metric_at,
    orthonormal_frame,
    richardson_jacobian,
    split_at,
    vertical_horizontal_split,
)
from .morphism import harmonic_morphism_verdict, tension_field
from .reporting import CheckResult, Measurement, VerdictReport, aggregate, build_report, detail_rows, map_points


logger = logging.getLogger(__name__)

# J^2 = -1 and g(JX, JY) = g(X, Y) are required to this accuracy at accepted points.
STRUCTURE_TOL = 1e-10


# ---------------------------------------------------------------------------
# Almost complex structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlmostComplexField:
    """
    An almost complex structure declared by expressions J^i_j on a structure's chart.

    ``jets(x)`` returns J and its partials dJ[p] = d_p J, both exact.
    """

    structure: WeylStructure
    rows: Tuple[Tuple[Expr, ...], ...]

    def __post_init__(self):
        m = self.structure.dim
        if m % 2:
            raise ConfigError(f"an almost complex structure needs an even dimension, got {m}")
        if len(self.rows) != m or any(len(row) != m for row in self.rows):
            raise ConfigError(f"complex structure must be {m} rows of {m} expressions")

    @classmethod
    def from_rows(cls, w: WeylStructure, rows) -> "AlmostComplexField":
        return cls(w, tuple(tuple(as_expression(v, w.coords) for v in row) for row in rows))

    @classmethod
    def standard(cls, w: WeylStructure) -> "AlmostComplexField":
        """
        e_1 -> e_2, e_3 -> e_4, ... in coordinates.

        With orientation -1 the last block is reversed so that the structure
        stays positive for the chart orientation.
        """
        m = w.dim
        J = np.zeros((m, m))
        for a in range(0, m, 2):
            sign = -1.0 if (w.chart.orientation < 0 and a == m - 2) else 1.0
            J[a + 1, a] = sign
            J[a, a + 1] = -sign
        return cls.from_rows(w, [[float(v) for v in row] for row in J])

    @property
    def dim(self) -> int:
        return self.structure.dim

    def at(self, x) -> np.ndarray:
        return self.jets(x)[0]

    def jets(self, x) -> Tuple[np.ndarray, np.ndarray]:
        return _field_jets(self, _key(x))


@lru_cache(maxsize=4096)
def _field_jets(field: AlmostComplexField, key: Tuple[float, ...]) -> Tuple[np.ndarray, np.ndarray]:
    m = field.dim
    J = np.empty((m, m))
    dJ = np.empty((m, m, m))
    for i, row in enumerate(field.rows):
        for j, e in enumerate(row):
            jet = eval_jet2(e, key)
            J[i, j] = jet.value
            dJ[:, i, j] = jet.gradient
    J.flags.writeable = False
    dJ.flags.writeable = False
    return J, dJ


@dataclass(frozen=True, eq=False)
class InducedComplexStructure:
    """
    The positive almost complex structure preserving a rank-two distribution
    on an oriented four-manifold. Its partials come from Richardson differences.
    """

    distribution: DistributionSpec
    structure: WeylStructure

    @property
    def dim(self) -> int:
        return self.structure.dim

    def at(self, x) -> np.ndarray:
        return induced_positive_J(self.distribution, self.structure, x)

    def jets(self, x) -> Tuple[np.ndarray, np.ndarray]:
        return _induced_jets(self, _key(x))


@lru_cache(maxsize=4096)
def _induced_jets(field: InducedComplexStructure, key: Tuple[float, ...]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.array(key)
    return field.at(x), richardson_jacobian(field.at, x)


def clear_caches() -> None:
    _field_jets.cache_clear()
    _induced_jets.cache_clear()


def structure_residuals(J: np.ndarray, g: np.ndarray) -> Tuple[float, float]:
    """(|J^2 + 1|, |J^T g J - g|)."""
    m = J.shape[0]
    return float(np.abs(J @ J + np.eye(m)).max()), float(np.abs(J.T @ g @ J - g).max())


def _require_compatible(J: np.ndarray, g: np.ndarray, x) -> None:
    square, compatibility = structure_residuals(J, g)
    scale = 1.0 + float(np.abs(g).max())
    if square >= STRUCTURE_TOL * (1.0 + float(np.abs(J).max()) ** 2) or compatibility >= STRUCTURE_TOL * scale:
        raise PreconditionError(f"J is not a compatible almost complex structure "
                                f"(|J^2+1|={square:.2e}, |J^T g J - g|={compatibility:.2e})", x)


def kahler_form(J_field, w: WeylStructure, x) -> np.ndarray:
    """
    omega(X, Y) = g(JX, Y), as the matrix omega_ij.

    Raises:
        PreconditionError: If J is not compatible with g at x.
    """
    J = J_field.at(x)
    g = metric_at(w, x).g
    _require_compatible(J, g, x)
    return J.T @ g


def positivity_residual(J_field, w: WeylStructure, x) -> float:
    """|*omega - omega| in an orthonormal frame; zero iff J is positive for the chart orientation (m = 4)."""
    if w.dim != 4:
        raise ConfigError("positivity is defined here for dimension 4 only")
    E = conformal_frame(w, x)
    orientation = int(np.sign(np.linalg.det(E))) * w.chart.orientation
    vector = two_form_vector(E.T @ kahler_form(J_field, w, x) @ E)
    return float(np.abs(hodge_star_pairs(orientation) @ vector - vector).max())


def nijenhuis(J_field, x) -> np.ndarray:
    """
    N[i, j] = N_J(e_i, e_j) = [Je_i, Je_j] - J[Je_i, e_j] - J[e_i, Je_j] - [e_i, e_j].

    For constant coordinate fields this is
    (d_{JX} J) Y - (d_{JY} J) X + J (d_Y J) X - J (d_X J) Y.
    """
    J, dJ = J_field.jets(x)
    along_J = np.einsum("pi,pkl->ikl", J, dJ)
    J_dJ = np.einsum("kl,plm->pkm", J, dJ)
    return (np.einsum("ikj->ijk", along_J) - np.einsum("jki->ijk", along_J)
            + np.einsum("jki->ijk", J_dJ) - np.einsum("ikj->ijk", J_dJ))


def _nijenhuis_measurement(J_field, x) -> Measurement:
    J, dJ = J_field.jets(x)
    return Measurement(float(np.abs(nijenhuis(J_field, x)).max()), float(np.abs(J).max() * np.abs(dJ).max()))


def nijenhuis_check(J_field, points, tol: float = DEFAULT_TOL, workers: int = 1,
                    details: bool = False) -> VerdictReport:
    """Integrability verdict: N_J vanishes at every point."""
    if isinstance(J_field, InducedComplexStructure):
        tol = max(tol, RICHARDSON_TOL)
    measurements = map_points(lambda x: _nijenhuis_measurement(J_field, x), points, workers)
    check = aggregate("integrable", measurements, tol)
    return build_report("nijenhuis", points, check, [check],
                        details=detail_rows(points, measurements) if details else None)


def dj_trace(conn: WeylConnection, J_field, x) -> np.ndarray:
    """
    trace_g(DJ) = sum_i (D_{E_i} J)(E_i) over a g-orthonormal frame.

    Raises:
        ConfigError: If the dimension is odd or below 4.
    """
    m = conn.dim
    if m < 4 or m % 2:
        raise ConfigError(f"trace of DJ needs an even dimension >= 4, got {m}")
    J, dJ = J_field.jets(x)
    return _trace_dj(conn.at(x), J, dJ, metric_at(conn.structure, x).inverse)


# ---------------------------------------------------------------------------
# Holomorphic maps
# ---------------------------------------------------------------------------

def holomorphy_check(phi: MapSpec, JM, JN, x) -> Measurement:
    """|dphi J^M - J^N dphi| at x."""
    d = map_jets(phi, x).d
    JM_x = JM.at(x)
    JN_y = JN.at(image_point(phi, x))
    residual = d @ JM_x - JN_y @ d
    return Measurement(float(np.abs(residual).max()), float(np.abs(d).max()))


def _is_holomorphic(measurement: Measurement, tol: float) -> bool:
    return measurement.residual < tol * (1.0 + measurement.scale)


def lemma34_residual(phi: MapSpec, JM, JN, conn_m: WeylConnection, conn_n: WeylConnection, x,
                     tol: float = DEFAULT_TOL) -> Measurement:
    """
    |trace_c phi*(D^N J^N) - dphi(trace_c(D^M J^M)) + J^N(trace_c(D dphi))| at x.

    This vanishes for every holomorphic map and every pair of torsion-free
    connections.

    Raises:
        PreconditionError: If phi is not holomorphic at x.
    """
    holomorphy = holomorphy_check(phi, JM, JN, x)
    if not _is_holomorphic(holomorphy, tol):
        raise PreconditionError(f"map is not holomorphic (residual {holomorphy.residual:.2e})", x)
    y = image_point(phi, x)
    d = map_jets(phi, x).d
    G = metric_at(phi.domain, x).inverse
    JM_x, dJM = JM.jets(x)
    JN_y, dJN = JN.jets(y)
    coeffs_n = conn_n.at(y)
    along = [coeffs_n.covariant_endomorphism(d[:, i], JN_y, dJN) for i in range(phi.m)]
    pulled = sum(G[i, j] * (along[i] @ d[:, j]) for i in range(phi.m) for j in range(phi.m))
    pushed = d @ _trace_dj(conn_m.at(x), JM_x, dJM, G)
    tension = JN_y @ tension_field(phi, conn_m, conn_n, x)
    residual = pulled - pushed + tension
    scale = max(np.abs(pulled).max(), np.abs(pushed).max(), np.abs(tension).max())
    return Measurement(float(np.abs(residual).max()), float(scale))


def holomorphy_report(phi: MapSpec, JM, JN, points, tol: float = DEFAULT_TOL, workers: int = 1,
                      details: bool = False) -> VerdictReport:
    measurements = map_points(lambda x: holomorphy_check(phi, JM, JN, x), points, workers)
    check = aggregate("holomorphic", measurements, tol)
    return build_report("holomorphic", points, check, [check],
                        details=detail_rows(points, measurements) if details else None)


def _weyl_connection_of(w: WeylStructure, J_field) -> WeylConnection:
    """The Weyl connection of (w, J) in dimension >= 4, else the declared Weyl connection."""
    return hermitian_weyl_connection(w, J_field) if w.dim >= 4 else declared(w)


def prop35_report(phi: MapSpec, JM, JN, points, tol: float = DEFAULT_TOL, workers: int = 1,
                  details: bool = False) -> VerdictReport:
    """
    A holomorphic, horizontally weakly conformal map between almost Hermitian
    manifolds, each with the Weyl connection of its J (any Weyl connection in
    dimension 2), is harmonic.

    The flag records that holomorphic + HWC implies harmonic at every sample.
    """
    conn_m = _weyl_connection_of(phi.domain, JM)
    conn_n = _weyl_connection_of(phi.codomain, JN)
    holo = aggregate("holomorphic", map_points(lambda x: holomorphy_check(phi, JM, JN, x), points, workers), tol)
    hm = harmonic_morphism_verdict(phi, conn_m, conn_n, points, tol, workers, details)
    harmonic = hm.check("harmonic")
    conformal = hm.check("hwc")
    logger.debug("prop35: holomorphic=%s hwc=%s harmonic=%s", holo.passed, conformal, harmonic)
    flag = not (holo.passed and conformal) or harmonic
    return build_report("prop35", points, None,
                        [holo,
                         CheckResult("hwc", 0.0, 0.0, tol, conformal),
                         CheckResult("harmonic", hm.max_residual, hm.scale, tol, harmonic)],
                        flags={"holomorphic_hwc_implies_harmonic": flag},
                        values={"domain_connection": conn_m.label, "codomain_connection": conn_n.label},
                        details=hm.details)


def holomorphic_function_harmonic(f: Sequence, J_field, w: WeylStructure, x,
                                  tol: float = DEFAULT_TOL) -> Measurement:
    """
    |trace_c(D du)| and |trace_c(D dv)| for a holomorphic function u + iv, with D
    the Weyl connection of (w, J).

    Raises:
        PreconditionError: If du o J + dv does not vanish at x.
    """
    u, v = (as_expression(e, w.coords) for e in f)
    ju, jv = eval_jet2(u, x), eval_jet2(v, x)
    du, dv = np.array(ju.gradient), np.array(jv.gradient)
    J = J_field.at(x)
    cauchy_riemann = J.T @ du + dv
    if np.abs(cauchy_riemann).max() >= tol * (1.0 + np.abs(du).max()):
        raise PreconditionError("function is not holomorphic", x)
    coeffs = _weyl_connection_of(w, J_field).at(x)
    G = metric_at(w, x).inverse
    laplacians = [trace_hessian(coeffs, G, np.array(j.gradient), np.array(j.hessian)) for j in (ju, jv)]
    scale = max(float(np.abs(np.array(j.hessian)).max()) for j in (ju, jv)) + float(np.abs(du).max())
    return Measurement(float(max(abs(value) for value in laplacians)), scale)


def remark33_report(J_field, w: WeylStructure, points, tol: float = DEFAULT_TOL, workers: int = 1,
                    details: bool = False) -> VerdictReport:
    """
    Two identities for the Weyl connection D^J of (w, J) in dimension 4:
    D_{JX} J + J D_X J = 0, and D_{JX} J - J D_X J equals its Levi-Civita value.
    """
    if w.dim != 4:
        raise ConfigError("remark33 needs dimension 4")
    conn = hermitian_weyl_connection(w, J_field)

    def measure(x):
        J, dJ = J_field.jets(x)
        frame = orthonormal_frame(w, x)
        coeffs, lc = conn.at(x), christoffel(w, x)
        anti = anticommutator_residual(coeffs, J, dJ, frame)
        difference = 0.0
        for a in range(4):
            X = frame.vectors[:, a]
            weyl = coeffs.covariant_endomorphism(J @ X, J, dJ) - J @ coeffs.covariant_endomorphism(X, J, dJ)
            levi = lc.covariant_endomorphism(J @ X, J, dJ) - J @ lc.covariant_endomorphism(X, J, dJ)
            difference = max(difference, float(np.abs(weyl - levi).max()))
        scale = float(np.abs(coeffs.gamma).max() + np.abs(dJ).max())
        return Measurement(anti, scale), Measurement(difference, scale)

    results = map_points(measure, points, workers)
    anti = aggregate("anticommutator", [r[0] for r in results], tol)
    commutator = aggregate("commutator_connection_free", [r[1] for r in results], tol)
    return build_report("remark33", points, None, [anti, commutator],
                        flags={"anticommutator": anti.passed, "commutator_connection_free": commutator.passed},
                        details=detail_rows(points, [r[0] for r in results]) if details else None)


# ---------------------------------------------------------------------------
# The positive almost complex structure of a two-plane field in dimension 4
# ---------------------------------------------------------------------------

def _oriented_pair_frames(dist: DistributionSpec, w: WeylStructure, x) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal (V, H) bases; H follows the codomain orientation when V = ker dphi."""
    metric = metric_at(w, x)
    if dist.source is not None:
        phi = _on_domain(dist.source, w)
        vertical, horizontal = vertical_horizontal_split(phi, x)
        horizontal = horizontal.copy()
        horizontal[:, -1] *= phi.codomain.chart.orientation
    else:
        K, _ = _explicit_fields(dist, x)
        vertical = gram_schmidt(K, metric.g, w.floor, x)
        horizontal = _complement(vertical, metric.g, w.floor, x)
    return vertical.copy(), horizontal


def induced_positive_J(dist: DistributionSpec, w: WeylStructure, x) -> np.ndarray:
    """
    J = rotation by a right angle in V plus rotation by a right angle in H.

    H is oriented first (by the lifts of the codomain coordinate fields for a
    map, by the coordinate sweep otherwise); V then takes the orientation that
    makes (v1, v2, h1, h2) positive, so (X1, JX1, X2, JX2) is positive.

    Raises:
        ConfigError: If the dimension is not 4 or V is not of rank 2.
        DegenerateDistributionError: If V is degenerate at x.
    """
    if w.dim != 4 or dist.rank(w.dim) != 2:
        raise ConfigError("the induced almost complex structure needs a rank-two distribution in dimension 4")
    g = metric_at(w, x).g
    vertical, horizontal = _oriented_pair_frames(dist, w, x)
    if np.linalg.det(np.column_stack([vertical, horizontal])) * w.chart.orientation < 0:
        vertical[:, 1] *= -1.0
    v1, v2 = vertical.T
    h1, h2 = horizontal.T
    return (np.outer(v2, g @ v1) - np.outer(v1, g @ v2)
            + np.outer(h2, g @ h1) - np.outer(h1, g @ h2))


def _fibre_parallel_measurement(phi: MapSpec, conn: WeylConnection, J_field, x) -> Measurement:
    J, dJ = J_field.jets(x)
    coeffs = conn.at(x)
    V = split_at(DistributionSpec.from_map(phi), phi.domain, x).vertical
    values = [coeffs.covariant_endomorphism(V[:, a], J, dJ) for a in range(V.shape[1])]
    scale = float(np.abs(dJ).max() + np.abs(coeffs.gamma).max())
    return Measurement(float(max(np.abs(v).max() for v in values)), scale)


def prop311_report(phi: MapSpec, conn: WeylConnection, points, tol: float = DEFAULT_TOL, workers: int = 1,
                   details: bool = False) -> VerdictReport:
    """
    For a horizontally conformal submersion from an oriented 4-manifold to an
    oriented surface, with J^M its induced positive structure:
    (A) harmonic morphism with J^M integrable, and (B) J^M parallel along the
    fibres, always agree.

    Raises:
        ConfigError: If the dimensions are not (4, 2).
    """
    if (phi.m, phi.n) != (4, 2):
        raise ConfigError("prop311 needs a map from dimension 4 to dimension 2")
    J_field = InducedComplexStructure(DistributionSpec.from_map(phi), phi.domain)
    derived_tol = max(tol, RICHARDSON_TOL)
    hm = harmonic_morphism_verdict(phi, conn, declared(phi.codomain), points, tol, workers, details)
    integrability = nijenhuis_check(J_field, points, derived_tol, workers)
    parallel = aggregate("parallel_along_fibres",
                         map_points(lambda x: _fibre_parallel_measurement(phi, conn, J_field, x), points, workers),
                         derived_tol)
    verdict_a = hm.passed and integrability.passed
    logger.debug("prop311: harmonic morphism %s, integrable %s, parallel %s",
                 hm.verdict, integrability.verdict, parallel.verdict)
    checks = [
        CheckResult("hm_and_integrable", max(hm.max_residual, integrability.max_residual),
                    max(hm.scale, integrability.scale), tol, verdict_a),
        parallel,
    ]
    return build_report("prop311", points, None, checks, flags={"equivalence": verdict_a == parallel.passed},
                        values={"harmonic_morphism": hm.passed, "integrable": integrability.passed},
                        details=hm.details)
