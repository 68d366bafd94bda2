#!/usr/bin/env python3
"""
Connections: Levi-Civita, Weyl connections from Lee forms, the equal-trace
Weyl connection, Bott and minimal Weyl connections of a distribution, the
Hermitian Weyl connection, and partial connections over a horizontal space.

Conventions:
    gamma[k, i, j] = Gamma^k_ij, so D_X Y = dY(X) + gamma(X, Y) with
    gamma(X, Y)^k = Gamma^k_ij X^i Y^j. dgamma[p, k, i, j] = d_p Gamma^k_ij.

    A Weyl connection with Lee form alpha relative to g is
    D_X Y = nabla_X Y + alpha(X) Y + alpha(Y) X - g(X, Y) alpha^#, which gives
    Dg = -2 alpha (x) g and trace_g(nabla - D) = (m - 2) alpha^#.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_TOL
from .errors import ConfigError, PreconditionError
from .geometry import (
    DistributionSpec,
    MapSpec,
    PointFrame,
    SplitAtPoint,
    WeylStructure,
    _key,
    lee_at,
    map_jets,
    metric_at,
    richardson_jacobian,
    split_at,
)
from .reporting import Measurement, VerdictReport, aggregate, build_report, detail_rows, map_points


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Christoffel symbols of a torsion-free connection at one point."""

    point: np.ndarray
    gamma: np.ndarray
    dgamma: Optional[np.ndarray] = None
    lee: Optional[np.ndarray] = None
    dlee: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def apply(self, X, Y) -> np.ndarray:
        """gamma(X, Y); complex arguments extend bilinearly."""
        return np.einsum("kij,i,j->k", self.gamma, X, Y)

    def matrix(self, X) -> np.ndarray:
        """The endomorphism Y -> gamma(X, Y)."""
        return np.einsum("kij,i->kj", self.gamma, X)

    def covariant_endomorphism(self, X, T: np.ndarray, dT: np.ndarray) -> np.ndarray:
        """(D_X T) for an endomorphism field T with partials dT[p] = d_p T."""
        A = self.matrix(X)
        return np.einsum("p,pij->ij", X, dT) + A @ T - T @ A


@dataclass(frozen=True)
class PartialConnectionForm:
    """A horizontal 1-form: values on the coordinate frame, vanishing on the vertical space."""

    point: np.ndarray
    values: np.ndarray

    def on(self, X) -> float:
        return self.values @ X


# ---------------------------------------------------------------------------
# Levi-Civita and Weyl coefficients
# ---------------------------------------------------------------------------

def christoffel(w: WeylStructure, x, with_derivatives: bool = False) -> ConnectionCoeffs:
    """
    Levi-Civita connection of the representative g at x.

    First partials of Gamma come from the second-order metric jets
    (d Ginv = -Ginv dg Ginv), so no difference quotients are involved.

    Raises:
        DegenerateMetricError: If g is degenerate at x.
    """
    metric = metric_at(w, x)
    G, dg = metric.inverse, metric.dg
    lowered = 0.5 * (np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg)
    gamma = np.einsum("kl,lij->kij", G, lowered)
    dgamma = None
    if with_derivatives:
        ddg = metric.ddg
        dlowered = 0.5 * (np.einsum("pilj->plij", ddg) + np.einsum("pjli->plij", ddg) - ddg)
        dG = -np.einsum("ka,pab,bl->pkl", G, dg, G)
        dgamma = np.einsum("pkl,lij->pkij", dG, lowered) + np.einsum("kl,plij->pkij", G, dlowered)
    m = w.dim
    return ConnectionCoeffs(np.asarray(x, float), gamma, dgamma, np.zeros(m), np.zeros((m, m)))


def weyl_shift(alpha, g: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Coefficients of alpha (x) Id + Id (x) alpha - g alpha^#."""
    m = g.shape[0]
    eye = np.eye(m)
    raised = G @ alpha
    return (np.einsum("ki,j->kij", eye, alpha) + np.einsum("kj,i->kij", eye, alpha)
            - np.einsum("ij,k->kij", g, raised))


def weyl_shift_derivative(alpha, dalpha, g, dg, G) -> np.ndarray:
    m = g.shape[0]
    eye = np.eye(m)
    dG = -np.einsum("ka,pab,bl->pkl", G, dg, G)
    raised = G @ alpha
    draised = np.einsum("pkl,l->pk", dG, alpha) + np.einsum("kl,pl->pk", G, dalpha)
    return (np.einsum("ki,pj->pkij", eye, dalpha) + np.einsum("kj,pi->pkij", eye, dalpha)
            - np.einsum("pij,k->pkij", dg, raised) - np.einsum("ij,pk->pkij", g, draised))


def weyl_from_lee(w: WeylStructure, x, alpha, dalpha=None) -> ConnectionCoeffs:
    """Weyl connection with an explicitly given Lee form (and optionally its partials)."""
    metric = metric_at(w, x)
    base = christoffel(w, x, with_derivatives=dalpha is not None)
    alpha = np.asarray(alpha, dtype=float)
    gamma = base.gamma + weyl_shift(alpha, metric.g, metric.inverse)
    dgamma = None
    if dalpha is not None:
        dgamma = base.dgamma + weyl_shift_derivative(alpha, np.asarray(dalpha), metric.g, metric.dg, metric.inverse)
    dlee = None if dalpha is None else np.asarray(dalpha, dtype=float)
    return ConnectionCoeffs(base.point, gamma, dgamma, alpha, dlee)


def weyl_connection(w: WeylStructure, x, with_derivatives: bool = False) -> ConnectionCoeffs:
    """Weyl connection D of the structure, from its declared Lee form."""
    lee = lee_at(w, x)
    return weyl_from_lee(w, x, lee.alpha, lee.dalpha if with_derivatives else None)


LeeFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class WeylConnection:
    """
    A Weyl connection field on a structure.

    With ``lee`` omitted the declared Lee form of the structure is used (exact
    jets). A callable ``lee`` supplies a derived Lee form pointwise; its partials,
    needed only for curvature, come from Richardson differences.
    """

    structure: WeylStructure
    lee: Optional[LeeFunction] = None
    label: str = "D"

    @property
    def dim(self) -> int:
        return self.structure.dim

    def lee_form(self, x) -> np.ndarray:
        if self.lee is None:
            return np.array(lee_at(self.structure, x).alpha)
        return np.asarray(self.lee(np.asarray(x, float)), dtype=float)

    def at(self, x, with_derivatives: bool = False) -> ConnectionCoeffs:
        return _connection_at(self, _key(x), with_derivatives)

    __call__ = at


@lru_cache(maxsize=8192)
def _connection_at(conn: WeylConnection, key: Tuple[float, ...], with_derivatives: bool) -> ConnectionCoeffs:
    x = np.array(key)
    if conn.lee is _zero_lee:
        return christoffel(conn.structure, x, with_derivatives)
    if conn.lee is None:
        return weyl_connection(conn.structure, x, with_derivatives)
    alpha = conn.lee_form(x)
    dalpha = richardson_jacobian(conn.lee_form, x) if with_derivatives else None
    return weyl_from_lee(conn.structure, x, alpha, dalpha)


def _zero_lee(x):
    return np.zeros(len(x))


def levi_civita(w: WeylStructure) -> WeylConnection:
    """The Levi-Civita connection of the representative g, as a connection field."""
    return WeylConnection(w, _zero_lee, "nabla^g")


def declared(w: WeylStructure) -> WeylConnection:
    return WeylConnection(w, None, "D")


def clear_caches() -> None:
    _connection_at.cache_clear()


# ---------------------------------------------------------------------------
# Residuals of the defining properties
# ---------------------------------------------------------------------------

def covariant_metric(coeffs: ConnectionCoeffs, w: WeylStructure, x) -> np.ndarray:
    """(Dg)[p, i, j] = d_p g_ij - Gamma^k_pi g_kj - Gamma^k_pj g_ik."""
    metric = metric_at(w, x)
    g = metric.g
    return metric.dg - np.einsum("kpi,kj->pij", coeffs.gamma, g) - np.einsum("kpj,ik->pij", coeffs.gamma, g)


def compatibility_residual(coeffs: ConnectionCoeffs, w: WeylStructure, x) -> float:
    """max |Dg + 2 alpha (x) g|."""
    g = metric_at(w, x).g
    alpha = coeffs.lee if coeffs.lee is not None else np.zeros(w.dim)
    return float(np.abs(covariant_metric(coeffs, w, x) + 2.0 * np.einsum("p,ij->pij", alpha, g)).max())


def torsion_residual(coeffs: ConnectionCoeffs) -> float:
    return float(np.abs(coeffs.gamma - np.transpose(coeffs.gamma, (0, 2, 1))).max())


def trace_difference(coeffs: ConnectionCoeffs, w: WeylStructure, x) -> np.ndarray:
    """trace_g(nabla^g - D) as a vector."""
    metric = metric_at(w, x)
    lc = christoffel(w, x)
    return np.einsum("ij,kij->k", metric.inverse, lc.gamma - coeffs.gamma)


def equal_trace_weyl(coeffs: ConnectionCoeffs, w: WeylStructure, x) -> np.ndarray:
    """
    Lee form of the Weyl connection with the same trace_c(D d.) as a torsion-free connection.

    alpha_1 = g(trace_g(nabla^g - D), .) / (m - 2).

    Raises:
        ConfigError: In dimension 2, where no such Weyl connection is determined.
    """
    m = w.dim
    if m == 2:
        raise ConfigError("the equal-trace Weyl connection needs dimension != 2")
    return metric_at(w, x).g @ trace_difference(coeffs, w, x) / (m - 2)


def lee_formula_residual(coeffs: ConnectionCoeffs, w: WeylStructure, x) -> float:
    """|alpha - g(trace_g(nabla^g - D), .)/(m-2)| for a Weyl connection built from alpha."""
    return float(np.abs(coeffs.lee - equal_trace_weyl(coeffs, w, x)).max())


def trace_hessian(coeffs: ConnectionCoeffs, G: np.ndarray, gradient, hessian) -> float:
    """trace_g(D df) = g^ij (d_i d_j f - Gamma^k_ij d_k f)."""
    return float(np.einsum("ij,ij->", G, hessian) - np.einsum("ij,kij,k->", G, coeffs.gamma, gradient))


# ---------------------------------------------------------------------------
# Second fundamental forms and the connections they determine
# ---------------------------------------------------------------------------

def _vertical_part(S: SplitAtPoint, coeffs: ConnectionCoeffs, U, W) -> np.ndarray:
    return S.PH @ (np.einsum("p,pij,j->i", U, S.dPV, W) + coeffs.apply(U, W))


def _horizontal_part(S: SplitAtPoint, coeffs: ConnectionCoeffs, X, Y) -> np.ndarray:
    return S.PV @ (np.einsum("p,pij,j->i", X, S.dPH, Y) + coeffs.apply(X, Y))


def second_fundamental_vertical(S: SplitAtPoint, coeffs: ConnectionCoeffs, U, W) -> np.ndarray:
    """B^V(U, W) = (1/2) H(D_U W + D_W U) for vertical U, W (horizontal vector)."""
    return 0.5 * (_vertical_part(S, coeffs, U, W) + _vertical_part(S, coeffs, W, U))


def second_fundamental_horizontal(S: SplitAtPoint, coeffs: ConnectionCoeffs, X, Y) -> np.ndarray:
    """B^H(X, Y) = (1/2) V(D_X Y + D_Y X) for horizontal X, Y (vertical vector)."""
    return 0.5 * (_horizontal_part(S, coeffs, X, Y) + _horizontal_part(S, coeffs, Y, X))


def trace_vertical(S: SplitAtPoint, coeffs: ConnectionCoeffs) -> np.ndarray:
    V = S.vertical
    return sum((second_fundamental_vertical(S, coeffs, V[:, a], V[:, a]) for a in range(V.shape[1])),
               np.zeros(len(S.point)))


def trace_horizontal(S: SplitAtPoint, coeffs: ConnectionCoeffs) -> np.ndarray:
    H = S.horizontal
    return sum((second_fundamental_horizontal(S, coeffs, H[:, a], H[:, a]) for a in range(H.shape[1])),
               np.zeros(len(S.point)))


def _rank_check(dist: DistributionSpec, w: WeylStructure) -> Tuple[int, int]:
    k = dist.rank(w.dim)
    if not 0 < k < w.dim:
        raise ConfigError(f"distribution rank {k} must lie strictly between 0 and {w.dim}")
    return k, w.dim - k


def bott_lee_form(w: WeylStructure, dist: DistributionSpec, x) -> PartialConnectionForm:
    """Lee form (1/(m-n)) trace_g(B^V)^flat of the Bott partial connection, on the horizontal space."""
    k, _ = _rank_check(dist, w)
    S = split_at(dist, w, x)
    tr = trace_vertical(S, christoffel(w, x))
    return PartialConnectionForm(S.point, metric_at(w, x).g @ tr / k)


def minimal_weyl(w: WeylStructure, dist: DistributionSpec, x) -> np.ndarray:
    """
    Lee form of the unique Weyl connection for which V and its orthogonal complement are both minimal.

    alpha = trace_g(B^V)^flat / (m - n) + trace_g(B^H)^flat / n, with n the rank of H.
    """
    k, n = _rank_check(dist, w)
    S = split_at(dist, w, x)
    lc = christoffel(w, x)
    g = metric_at(w, x).g
    return g @ (trace_vertical(S, lc) / k + trace_horizontal(S, lc) / n)


def minimal_weyl_connection(w: WeylStructure, dist: DistributionSpec) -> WeylConnection:
    return WeylConnection(w, lambda x: minimal_weyl(w, dist, x), "D^min")


def shifted_trace_residual(w: WeylStructure, dist: DistributionSpec, conn: WeylConnection, x) -> Measurement:
    """trace_g(B^{V,D})^flat - [trace_g(B^V)^flat - (m-n) alpha|_H]."""
    k, _ = _rank_check(dist, w)
    S = split_at(dist, w, x)
    metric = metric_at(w, x)
    coeffs = conn.at(x)
    alpha_h = S.PH.T @ coeffs.lee
    left = metric.g @ trace_vertical(S, coeffs)
    right = metric.g @ trace_vertical(S, christoffel(w, x)) - k * alpha_h
    return Measurement(float(np.abs(left - right).max()), float(max(np.abs(left).max(), np.abs(right).max())))


def minimality_residual(w: WeylStructure, dist: DistributionSpec, conn: WeylConnection, x) -> Measurement:
    """max(|trace B^{V,D}|, |trace B^{H,D}|)."""
    S = split_at(dist, w, x)
    coeffs = conn.at(x)
    vertical = trace_vertical(S, coeffs)
    horizontal = trace_horizontal(S, coeffs)
    lc = christoffel(w, x)
    scale = max(np.abs(trace_vertical(S, lc)).max(), np.abs(trace_horizontal(S, lc)).max())
    return Measurement(float(max(np.abs(vertical).max(), np.abs(horizontal).max())), float(scale))


def minimal_weyl_faraday(w: WeylStructure, dist: DistributionSpec, points, tol: float = DEFAULT_TOL,
                         workers: int = 1, details: bool = False) -> VerdictReport:
    """
    Flatness of the weight-bundle connection of the minimal Weyl connection.

    For a one-dimensional foliation this holds exactly when the leaves are
    locally generated by conformal vector fields.
    """
    if dist.rank(w.dim) != 1:
        raise ConfigError("minimal_weyl_faraday needs a rank-one distribution")

    def measure(x):
        jac = richardson_jacobian(lambda y: minimal_weyl(w, dist, y), x)
        faraday = jac - jac.T
        return Measurement(float(np.abs(faraday).max()), float(np.abs(jac).max()))

    measurements = map_points(measure, points, workers)
    check = aggregate("faraday_flat", measurements, tol)
    return build_report("minimal_weyl_faraday", points, check, [check],
                        details=detail_rows(points, measurements) if details else None)


# ---------------------------------------------------------------------------
# Hermitian Weyl connection
# ---------------------------------------------------------------------------

def dj_trace(coeffs: ConnectionCoeffs, J: np.ndarray, dJ: np.ndarray, G: np.ndarray) -> np.ndarray:
    """trace_g(DJ)^k = g^ij ((D_i J)(e_j))^k, with D_i J = d_i J + [Gamma_i, J]."""
    commutator = np.einsum("kil,lj->ikj", coeffs.gamma, J) - np.einsum("kl,lij->ikj", J, coeffs.gamma)
    return np.einsum("ij,ikj->k", G, dJ + commutator)


def _check_hermitian_dimension(m: int) -> None:
    if m < 4 or m % 2:
        raise ConfigError(f"Hermitian data need an even dimension >= 4, got {m}")


def hermitian_weyl(w: WeylStructure, J_field, x) -> np.ndarray:
    """
    Lee form of the Weyl connection D with trace_g(DJ) = 0.

    trace_g(DJ) is affine in alpha, so the m x m linear system is assembled
    column by column and solved directly.

    Args:
        w (WeylStructure): Conformal structure (its own Lee form is ignored).
        J_field: Object with ``jets(x) -> (J, dJ)``.
        x: Point.

    Raises:
        ConfigError: If m is odd or below 4.
        PreconditionError: If J is not compatible at x.
    """
    m = w.dim
    _check_hermitian_dimension(m)
    metric = metric_at(w, x)
    J, dJ = J_field.jets(x)
    if np.abs(J @ J + np.eye(m)).max() > 1e-8 or np.abs(J.T @ metric.g @ J - metric.g).max() > 1e-8:
        raise PreconditionError("J must square to -1 and preserve g", x)
    lc = christoffel(w, x)
    base = dj_trace(lc, J, dJ, metric.inverse)
    system = np.empty((m, m))
    for l in range(m):
        shift = ConnectionCoeffs(lc.point, weyl_shift(np.eye(m)[l], metric.g, metric.inverse))
        system[:, l] = dj_trace(shift, J, np.zeros_like(dJ), metric.inverse)
    alpha = np.linalg.solve(system, -base)
    logger.debug("hermitian Weyl system condition number %.3g", np.linalg.cond(system))
    return alpha


def hermitian_weyl_connection(w: WeylStructure, J_field) -> WeylConnection:
    return WeylConnection(w, lambda x: hermitian_weyl(w, J_field, x), "D^J")


def _frame_derivatives(coeffs: ConnectionCoeffs, J, dJ, frame: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
    out = []
    for a in range(frame.shape[1]):
        X = frame[:, a]
        out.append((coeffs.covariant_endomorphism(J @ X, J, dJ), J @ coeffs.covariant_endomorphism(X, J, dJ)))
    return out


def anticommutator_residual(coeffs: ConnectionCoeffs, J: np.ndarray, dJ: np.ndarray, frame: PointFrame) -> float:
    """max over frame X of |D_{JX} J + J D_X J|; zero in dimension 4 iff D is the Weyl connection of J."""
    return float(max(np.abs(a + b).max() for a, b in _frame_derivatives(coeffs, J, dJ, frame.vectors)))


def commutator_residual(coeffs: ConnectionCoeffs, J: np.ndarray, dJ: np.ndarray, frame: PointFrame) -> float:
    """max over frame X of |D_{JX} J - J D_X J|; independent of the Weyl connection, zero iff J is integrable."""
    return float(max(np.abs(a - b).max() for a, b in _frame_derivatives(coeffs, J, dJ, frame.vectors)))


# ---------------------------------------------------------------------------
# Partial connections over the horizontal space of a submersion
# ---------------------------------------------------------------------------

class PartialConnection:
    """
    A connection on H differentiating only along H.

    ``columns(x, X)`` returns the m x n matrix whose columns are D_X Y_b for
    the basic lifts Y_b = L e_b of the codomain coordinate fields.
    """

    phi: MapSpec

    def columns(self, x, X) -> np.ndarray:
        raise NotImplementedError


class InducedPartial(PartialConnection):
    """H D: the horizontal projection of a connection on M, restricted to H."""

    def __init__(self, phi: MapSpec, connection: WeylConnection):
        self.phi = phi
        self.connection = connection

    def columns(self, x, X) -> np.ndarray:
        S = split_at(DistributionSpec.from_map(self.phi), self.phi.domain, x)
        gamma = self.connection.at(x).gamma
        raw = np.einsum("p,pib->ib", X, S.dlift) + np.einsum("kij,i,jb->kb", gamma, X, S.lift)
        return S.PH @ raw


class PullbackPartial(PartialConnection):
    """The codomain connection acting on basic lifts: D_X Y_b = L Gamma^N(dphi X, e_b)."""

    def __init__(self, phi: MapSpec, connection: WeylConnection):
        self.phi = phi
        self.connection = connection

    def columns(self, x, X) -> np.ndarray:
        jets = map_jets(self.phi, x)
        S = split_at(DistributionSpec.from_map(self.phi), self.phi.domain, x)
        gamma = self.connection.at(jets.value).gamma
        return S.lift @ np.einsum("cab,a->cb", gamma, jets.d @ X)


class ShiftedPartial(PartialConnection):
    """A partial Weyl connection shifted by a 1-form beta: adds H[beta(X) Y + beta(Y) X - g(X, Y) beta^#]."""

    def __init__(self, base: PartialConnection, beta: LeeFunction):
        self.phi = base.phi
        self.base = base
        self.beta = beta

    def columns(self, x, X) -> np.ndarray:
        w = self.phi.domain
        S = split_at(DistributionSpec.from_map(self.phi), w, x)
        metric = metric_at(w, x)
        beta = np.asarray(self.beta(np.asarray(x, float)))
        raised = metric.inverse @ beta
        Y = S.lift
        shift = ((beta @ X) * Y + np.outer(X, beta @ Y) - np.outer(raised, X @ metric.g @ Y))
        return self.base.columns(x, X) + S.PH @ shift


def hwc_residual(phi: MapSpec, x) -> Tuple[float, float]:
    """(|P - Lambda g_N^-1|, Lambda) with P = dphi g_M^-1 dphi^T and Lambda = trace(P g_N)/n."""
    jets = map_jets(phi, x)
    P = jets.d @ metric_at(phi.domain, x).inverse @ jets.d.T
    gN = metric_at(phi.codomain, jets.value)
    dilation = float(np.trace(P @ gN.g)) / phi.n
    return float(np.abs(P - dilation * gN.inverse).max()), dilation


def pullback_partial_connection(phi: MapSpec, codomain_connection: WeylConnection, x,
                                tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Lifts of D^N_{dphi X} dphi Y_b for X ranging over an orthonormal horizontal frame.

    Returns an array out[a] = columns for X = E_a.

    Raises:
        PreconditionError: If phi is not horizontally conformal at x.
    """
    residual, dilation = hwc_residual(phi, x)
    if residual >= tol * (1.0 + dilation) or dilation <= 0.0:
        raise PreconditionError("map is not horizontally conformal", x)
    pull = PullbackPartial(phi, codomain_connection)
    H = split_at(DistributionSpec.from_map(phi), phi.domain, x).horizontal
    return np.stack([pull.columns(x, H[:, a]) for a in range(H.shape[1])])


def partial_lee_difference(first: PartialConnection, second: PartialConnection, x,
                           frame: Optional[np.ndarray] = None) -> PartialConnectionForm:
    """
    Lee-form difference of two partial Weyl connections on H.

    lambda(X) = (1/n) sum_a g((D1 - D2)_X E_a, E_a), returned as a covector that
    vanishes on the vertical space.

    Raises:
        PreconditionError: If a supplied horizontal frame is not orthonormal.
    """
    phi = first.phi
    w = phi.domain
    S = split_at(DistributionSpec.from_map(phi), w, x)
    metric = metric_at(w, x)
    H = S.horizontal if frame is None else np.asarray(frame)
    if np.abs(H.T @ metric.g @ H - np.eye(H.shape[1])).max() > 1e-10:
        raise PreconditionError("horizontal frame must be orthonormal", x)
    d = map_jets(phi, x).d
    n = phi.n
    values = np.array([np.trace(d @ (first.columns(x, H[:, a]) - second.columns(x, H[:, a]))) / n
                       for a in range(H.shape[1])])
    covector = metric.g @ H @ values
    return PartialConnectionForm(S.point, covector)
