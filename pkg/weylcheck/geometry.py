#!/usr/bin/env python3
"""
Charts, Weyl structures, maps, distributions and point sampling.

A Weyl structure is always presented in a gauge: a representative metric g
of the conformal class together with the Lee form alpha of the Weyl
connection D relative to g (Dg = -2 alpha (x) g). Sections of the weight
bundle L^w are functions in gauge g with covariant derivative d + w alpha;
the bundle itself is never built. Changing the gauge by lambda presents the
same structure as (g lambda^-2, alpha + dlambda/lambda), see :func:`regauge`.

All per-point quantities are pure functions of immutable inputs and are
memoised per (object, point).

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space
from scipy.stats import qmc

from .errors import (
    ConfigError,
    DegenerateDistributionError,
    DegenerateMetricError,
    PreconditionError,
    RankError,
    SamplingError,
    UnknownIdentifierError,
    WeylCheckError,
)
from .expr import RESERVED, BinOp, Expr, Num, Pow, as_expression, derivative, eval_jet2, variables


logger = logging.getLogger(__name__)

ORTHONORMAL_TOL = 1e-10
MAX_DIM = 6


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _key(x: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.ravel(x))


# ---------------------------------------------------------------------------
# Charts and Weyl structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Chart:
    """
    A single coordinate chart with a sampling box and an orientation.

    Attributes:
        coords (Tuple[str, ...]): Coordinate names, 1 to 6 of them. Domain
            charts need at least two; a one-dimensional chart is only used
            as the codomain of a map.
        box (Tuple[Tuple[float, float], ...]): Sampling interval per coordinate.
        orientation (int): +1 if the coordinate frame is positively oriented.
    """

    coords: Tuple[str, ...]
    box: Tuple[Tuple[float, float], ...]
    orientation: int = 1

    def __post_init__(self):
        coords = tuple(str(c) for c in self.coords)
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "box", box)
        if not 1 <= len(coords) <= MAX_DIM:
            raise ConfigError(f"chart dimension must be between 1 and {MAX_DIM}, got {len(coords)}")
        if len(set(coords)) != len(coords):
            raise ConfigError(f"duplicate coordinate names in {coords}")
        clashes = [c for c in coords if c in RESERVED]
        if clashes:
            raise ConfigError(f"coordinate names clash with reserved names: {', '.join(clashes)}")
        if len(box) != len(coords):
            raise ConfigError(f"box has {len(box)} intervals for {len(coords)} coordinates")
        for lo, hi in box:
            if not hi > lo:
                raise ConfigError(f"degenerate sampling interval [{lo}, {hi}]")
        if self.orientation not in (1, -1):
            raise ConfigError(f"orientation must be +1 or -1, got {self.orientation}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def contains(self, y: Sequence[float], slack: float = 1e-9) -> bool:
        for value, (lo, hi) in zip(np.ravel(y), self.box):
            pad = slack * max(1.0, hi - lo)
            if value < lo - pad or value > hi + pad:
                return False
        return True

    def reoriented(self, orientation: int) -> "Chart":
        return Chart(self.coords, self.box, orientation)


@dataclass(frozen=True)
class MetricJets:
    """g, first and second partials, inverse and determinant at one point.

    Layout: dg[p, i, j] = d_p g_ij and ddg[p, q, i, j] = d_p d_q g_ij.
    """

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    inverse: np.ndarray
    det: float


@dataclass(frozen=True)
class LeeJets:
    """Lee form components and their partials, dalpha[p, i] = d_p alpha_i."""

    alpha: np.ndarray
    dalpha: np.ndarray


@dataclass(frozen=True, eq=False)
class WeylStructure:
    """
    A gauge-fixed Weyl structure (M, c, D): chart, metric representative g and Lee form.

    Attributes:
        chart (Chart): The chart.
        metric (Tuple[Tuple[Expr, ...], ...]): Symmetric m x m array of expressions.
        lee_form (Tuple[Expr, ...]): The m components of alpha.
        floor (float): Nondegeneracy floor for |det g|.
    """

    chart: Chart
    metric: Tuple[Tuple[Expr, ...], ...]
    lee_form: Tuple[Expr, ...]
    floor: float = 1e-10

    def __post_init__(self):
        m = self.chart.dim
        if len(self.metric) != m or any(len(row) != m for row in self.metric):
            raise ConfigError(f"metric must be {m}x{m}")
        for i in range(m):
            for j in range(i + 1, m):
                if self.metric[i][j] != self.metric[j][i]:
                    raise ConfigError(f"metric not symmetric in entries ({i}, {j})")
        if len(self.lee_form) != m:
            raise ConfigError(f"Lee form needs {m} components, got {len(self.lee_form)}")
        allowed = set(self.chart.coords)
        for e in [entry for row in self.metric for entry in row] + list(self.lee_form):
            stray = variables(e) - allowed
            if stray:
                raise ConfigError(f"expression {e} uses names outside the chart: {sorted(stray)}")

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def coords(self) -> Tuple[str, ...]:
        return self.chart.coords

    @classmethod
    def build(cls, chart: Chart, metric, lee_form=None, floor: float = 1e-10) -> "WeylStructure":
        """
        Build from text, numbers or ASTs.

        ``metric`` is either a full m x m nested sequence or the row-major upper
        triangle (m(m+1)/2 entries). ``lee_form`` defaults to zero.
        """
        m = chart.dim
        coords = chart.coords
        flat = list(metric)
        if flat and not isinstance(flat[0], (list, tuple)):
            if len(flat) != m * (m + 1) // 2:
                raise ConfigError(f"upper-triangle metric needs {m * (m + 1) // 2} entries, got {len(flat)}")
            entries = iter(flat)
            rows = [[None] * m for _ in range(m)]
            for i in range(m):
                for j in range(i, m):
                    rows[i][j] = rows[j][i] = as_expression(next(entries), coords)
        else:
            rows = [[as_expression(v, coords) for v in row] for row in flat]
        lee = [as_expression(v, coords) for v in (lee_form if lee_form is not None else [0] * m)]
        return cls(chart, tuple(tuple(r) for r in rows), tuple(lee), floor)

    @classmethod
    def euclidean(cls, chart: Chart, lee_form=None) -> "WeylStructure":
        m = chart.dim
        return cls.build(chart, [[1 if i == j else 0 for j in range(m)] for i in range(m)], lee_form)

    def with_lee_form(self, lee_form) -> "WeylStructure":
        lee = tuple(as_expression(v, self.coords) for v in lee_form)
        return WeylStructure(self.chart, self.metric, lee, self.floor)

    def reoriented(self, orientation: int) -> "WeylStructure":
        return WeylStructure(self.chart.reoriented(orientation), self.metric, self.lee_form, self.floor)


@lru_cache(maxsize=8192)
def _metric_jets(w: WeylStructure, key: Tuple[float, ...]) -> MetricJets:
    m = w.dim
    g = np.empty((m, m))
    dg = np.empty((m, m, m))
    ddg = np.empty((m, m, m, m))
    for i in range(m):
        for j in range(i, m):
            jet = eval_jet2(w.metric[i][j], key)
            g[i, j] = g[j, i] = jet.value
            dg[:, i, j] = dg[:, j, i] = jet.gradient
            ddg[:, :, i, j] = ddg[:, :, j, i] = jet.hessian
    det = float(np.linalg.det(g))
    if not abs(det) > w.floor:
        raise DegenerateMetricError(key, det)
    eigenvalues = np.linalg.eigvalsh(g)
    if eigenvalues[0] <= 0.0:
        raise DegenerateMetricError(key, det)
    inverse = np.linalg.inv(g)
    inverse = 0.5 * (inverse + inverse.T)
    return MetricJets(_frozen(g), _frozen(dg), _frozen(ddg), _frozen(inverse), det)


def metric_at(w: WeylStructure, x: Sequence[float]) -> MetricJets:
    """
    Metric jets (g, dg, ddg) and inverse at a point.

    Raises:
        DegenerateMetricError: If |det g| is below the floor or g is not positive definite.
    """
    return _metric_jets(w, _key(x))


@lru_cache(maxsize=8192)
def _lee_jets(w: WeylStructure, key: Tuple[float, ...]) -> LeeJets:
    m = w.dim
    alpha = np.empty(m)
    dalpha = np.empty((m, m))
    for i, e in enumerate(w.lee_form):
        jet = eval_jet2(e, key)
        alpha[i] = jet.value
        dalpha[:, i] = jet.gradient
    return LeeJets(_frozen(alpha), _frozen(dalpha))


def lee_at(w: WeylStructure, x: Sequence[float]) -> LeeJets:
    return _lee_jets(w, _key(x))


def regauge(w: WeylStructure, lam) -> WeylStructure:
    """
    Present the same Weyl structure in the gauge g lambda^-2.

    The Lee form becomes alpha + dlambda / lambda. Both are built as ASTs so
    jets stay exact.

    Args:
        w (WeylStructure): Original presentation.
        lam: Positive scaling function (text or AST) of the chart coordinates.
    """
    lam = as_expression(lam, w.coords)
    factor = Pow(lam, Num(-2.0))
    metric = tuple(tuple(BinOp("*", entry, factor) for entry in row) for row in w.metric)
    lee = tuple(
        BinOp("+", a, BinOp("/", derivative(lam, name), lam))
        for a, name in zip(w.lee_form, w.coords)
    )
    return WeylStructure(w.chart, metric, lee, w.floor)


def weight_derivative(w: WeylStructure, value: float, gradient: np.ndarray, weight: int, x) -> np.ndarray:
    """Covariant derivative d s + w alpha s of a weight-w section presented in gauge g."""
    return np.asarray(gradient) + weight * lee_at(w, x).alpha * value


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapJets:
    """phi(x), dphi (n x m) and second partials ddphi[g, i, j]."""

    value: np.ndarray
    d: np.ndarray
    dd: np.ndarray


@dataclass(frozen=True, eq=False)
class MapSpec:
    """A smooth map between two charts, given componentwise."""

    domain: WeylStructure
    codomain: WeylStructure
    components: Tuple[Expr, ...]

    def __post_init__(self):
        if len(self.components) != self.codomain.dim:
            raise ConfigError(
                f"map has {len(self.components)} components, codomain dimension is {self.codomain.dim}"
            )
        allowed = set(self.domain.coords)
        for e in self.components:
            stray = variables(e) - allowed
            if stray:
                raise ConfigError(f"map component {e} uses names outside the domain chart: {sorted(stray)}")

    @classmethod
    def build(cls, domain: WeylStructure, codomain: WeylStructure, components) -> "MapSpec":
        """
        Raises:
            ConfigError: If a component has the wrong count or names a coordinate
                outside the domain chart.
        """
        parsed = []
        for i, c in enumerate(components):
            try:
                parsed.append(as_expression(c, domain.coords))
            except UnknownIdentifierError as e:
                raise ConfigError(f"map component {i} uses names outside the domain chart: {e}") from e
        return cls(domain, codomain, tuple(parsed))

    @property
    def m(self) -> int:
        return self.domain.dim

    @property
    def n(self) -> int:
        return self.codomain.dim

    def with_domain(self, domain: WeylStructure) -> "MapSpec":
        return MapSpec(domain, self.codomain, self.components)

    def with_codomain(self, codomain: WeylStructure) -> "MapSpec":
        return MapSpec(self.domain, codomain, self.components)


@lru_cache(maxsize=8192)
def _map_jets(phi: MapSpec, key: Tuple[float, ...]) -> MapJets:
    n, m = phi.n, phi.m
    value = np.empty(n)
    d = np.empty((n, m))
    dd = np.empty((n, m, m))
    for a, e in enumerate(phi.components):
        jet = eval_jet2(e, key)
        value[a] = jet.value
        d[a] = jet.gradient
        dd[a] = jet.hessian
    return MapJets(_frozen(value), _frozen(d), _frozen(dd))


def map_jets(phi: MapSpec, x: Sequence[float]) -> MapJets:
    return _map_jets(phi, _key(x))


def image_point(phi: MapSpec, x: Sequence[float]) -> np.ndarray:
    """phi(x), required to lie in the codomain sample box."""
    y = map_jets(phi, x).value
    if not phi.codomain.chart.contains(y):
        raise PreconditionError("phi(x) outside the codomain sample box", x)
    return y


# ---------------------------------------------------------------------------
# Distributions, frames and splits
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DistributionSpec:
    """
    A nondegenerate distribution V, either spanned by explicit vector fields
    or derived from a map as ker dphi.
    """

    fields: Tuple[Tuple[Expr, ...], ...] = ()
    source: Optional[MapSpec] = None

    @classmethod
    def explicit(cls, w: WeylStructure, fields) -> "DistributionSpec":
        rows = tuple(tuple(as_expression(v, w.coords) for v in row) for row in fields)
        if not rows or any(len(row) != w.dim for row in rows):
            raise ConfigError(f"distribution fields must be non-empty rows of {w.dim} expressions")
        return cls(fields=rows)

    @classmethod
    def from_map(cls, phi: MapSpec) -> "DistributionSpec":
        return cls(source=phi)

    @property
    def from_map_flag(self) -> bool:
        return self.source is not None

    def rank(self, m: int) -> int:
        return m - self.source.n if self.source is not None else len(self.fields)


@dataclass(frozen=True)
class PointFrame:
    """
    An m x m frame at a point; columns are tangent vectors.

    Attributes:
        vertical (int): The first ``vertical`` columns span V, the rest span H.
        orthonormal (bool): Whether the frame is g-orthonormal.
    """

    point: np.ndarray
    vectors: np.ndarray
    vertical: int = 0
    orthonormal: bool = True

    @property
    def vertical_vectors(self) -> np.ndarray:
        return self.vectors[:, :self.vertical]

    @property
    def horizontal_vectors(self) -> np.ndarray:
        return self.vectors[:, self.vertical:]


def gram_schmidt(vectors: np.ndarray, g: np.ndarray, floor: float = 1e-10, point=None,
                 what: str = "distribution") -> np.ndarray:
    """
    g-orthonormalise the columns of ``vectors`` (modified Gram-Schmidt).

    Raises:
        DegenerateDistributionError: If the columns are (numerically) dependent.
    """
    basis = np.array(vectors, dtype=float)
    k = basis.shape[1]
    norms = np.sqrt(np.einsum("ia,ij,ja->a", basis, g, basis))
    gram = np.einsum("ia,ij,jb->ab", basis, g, basis) / np.outer(norms, norms)
    gram_det = float(np.linalg.det(gram)) if k else 1.0
    if not gram_det > floor:
        raise DegenerateDistributionError(point, gram_det, what)
    for a in range(k):
        for b in range(a):
            basis[:, a] -= (basis[:, b] @ g @ basis[:, a]) * basis[:, b]
        basis[:, a] /= np.sqrt(basis[:, a] @ g @ basis[:, a])
    return basis


def _complement(basis: np.ndarray, g: np.ndarray, floor: float, point) -> np.ndarray:
    """Orthonormal basis of the g-orthogonal complement, swept in coordinate order."""
    m, k = basis.shape
    chosen: List[np.ndarray] = [basis[:, a] for a in range(k)]
    for i in range(m):
        if len(chosen) == m:
            break
        v = np.eye(m)[:, i]
        reference = v @ g @ v
        for _ in range(2):
            for b in chosen:
                v = v - (b @ g @ v) * b
        norm2 = v @ g @ v
        if norm2 > 1e-6 * reference:
            chosen.append(v / np.sqrt(norm2))
    if len(chosen) < m:
        raise DegenerateDistributionError(point, 0.0, "horizontal space")
    return np.column_stack(chosen[k:])


def _on_domain(phi: MapSpec, w: WeylStructure) -> MapSpec:
    return phi if phi.domain is w else phi.with_domain(w)


def _orient(vectors: np.ndarray, orientation: int) -> np.ndarray:
    if np.sign(np.linalg.det(vectors)) != orientation:
        vectors = vectors.copy()
        vectors[:, -1] *= -1.0
    return vectors


def _explicit_fields(dist: DistributionSpec, x) -> Tuple[np.ndarray, np.ndarray]:
    """Spanning fields K (m x k) and their partials dK[p, :, a]."""
    k = len(dist.fields)
    m = len(dist.fields[0])
    K = np.empty((m, k))
    dK = np.empty((m, m, k))
    for a, row in enumerate(dist.fields):
        for i, e in enumerate(row):
            jet = eval_jet2(e, x)
            K[i, a] = jet.value
            dK[:, i, a] = jet.gradient
    return K, dK


def vertical_horizontal_split(phi: MapSpec, x) -> Tuple[np.ndarray, np.ndarray]:
    """
    Orthonormal bases of V = ker dphi and H = V-perp at x.

    Raises:
        RankError: If dphi(x) does not have full rank n.
        DegenerateDistributionError: If the fibre is degenerate.
    """
    w = phi.domain
    metric = metric_at(w, x)
    d = map_jets(phi, x).d
    rank = int(np.linalg.matrix_rank(d, tol=1e-9 * max(1.0, float(np.abs(d).max(initial=0.0)))))
    if rank < phi.n:
        raise RankError(x, rank, phi.n)
    kernel = null_space(d)
    vertical = gram_schmidt(kernel, metric.g, w.floor, x, "fibre") if kernel.shape[1] else kernel
    gradients = metric.inverse @ d.T
    horizontal = gram_schmidt(gradients, metric.g, w.floor, x, "horizontal space")
    return vertical, horizontal


def orthonormal_frame(w: WeylStructure, x, adapted_to: Optional[DistributionSpec] = None) -> PointFrame:
    """
    g-orthonormal frame at x, positively oriented for the chart orientation.

    With ``adapted_to``, the first k columns span V(x) and the rest span H(x);
    the orientation is fixed on the last horizontal column.

    Raises:
        DegenerateDistributionError: If the spanning fields are dependent.
    """
    point = np.asarray(x, dtype=float)
    metric = metric_at(w, point)
    if adapted_to is None:
        vectors = gram_schmidt(np.eye(w.dim), metric.g, w.floor, point, "coordinate frame")
        return PointFrame(point, _orient(vectors, w.chart.orientation), 0)
    if adapted_to.source is not None:
        vertical, horizontal = vertical_horizontal_split(_on_domain(adapted_to.source, w), point)
    else:
        K, _ = _explicit_fields(adapted_to, point)
        vertical = gram_schmidt(K, metric.g, w.floor, point)
        horizontal = _complement(vertical, metric.g, w.floor, point)
    vectors = np.column_stack([vertical, horizontal])
    return PointFrame(point, _orient(vectors, w.chart.orientation), vertical.shape[1])


def gram_residual(frame: PointFrame, g: np.ndarray) -> float:
    vectors = frame.vectors
    return float(np.abs(vectors.T @ g @ vectors - np.eye(vectors.shape[1])).max())


def null_pair(frame: PointFrame, plane: Tuple[int, int], g: Optional[np.ndarray] = None):
    """
    Complex null vectors U = (F1 + i F2)/sqrt(2) and its conjugate.

    Raises:
        PreconditionError: If the two columns are not g-orthonormal.
    """
    i, j = plane
    f1, f2 = frame.vectors[:, i], frame.vectors[:, j]
    if g is not None:
        gram = np.array([[f1 @ g @ f1, f1 @ g @ f2], [f2 @ g @ f1, f2 @ g @ f2]])
        if np.abs(gram - np.eye(2)).max() > ORTHONORMAL_TOL:
            raise PreconditionError("null pair needs an orthonormal pair of columns", frame.point)
    u = (f1 + 1j * f2) / np.sqrt(2.0)
    return u, np.conj(u)


@dataclass(frozen=True)
class SplitAtPoint:
    """
    V + H split at a point with g-orthogonal projectors and their partials.

    dPV[p] = d_p PV. Horizontal and vertical orthonormal bases are columns of
    ``frame``. For map-derived splits ``lift`` is L = G dphi^T P^-1 (basic lifts,
    dphi L = I) and ``dlift[p] = d_p L``.
    """

    point: np.ndarray
    PV: np.ndarray
    PH: np.ndarray
    dPV: np.ndarray
    dPH: np.ndarray
    frame: PointFrame
    lift: Optional[np.ndarray] = None
    dlift: Optional[np.ndarray] = None
    pushed: Optional[np.ndarray] = None
    dpushed: Optional[np.ndarray] = None

    @property
    def vertical(self) -> np.ndarray:
        return self.frame.vertical_vectors

    @property
    def horizontal(self) -> np.ndarray:
        return self.frame.horizontal_vectors


def _map_split(phi: MapSpec, w: WeylStructure, x) -> SplitAtPoint:
    metric = metric_at(w, x)
    jets = map_jets(phi, x)
    G, d = metric.inverse, jets.d
    m = w.dim
    dG = -np.einsum("ab,pbc,cd->pad", G, metric.dg, G)
    dd = np.transpose(jets.dd, (1, 0, 2))  # dd[p] = d_p(dphi), n x m
    P = d @ G @ d.T
    Pinv = np.linalg.inv(P)
    dP = (np.einsum("pai,ij,bj->pab", dd, G, d) + np.einsum("ai,pij,bj->pab", d, dG, d)
          + np.einsum("ai,ij,pbj->pab", d, G, dd))
    L = G @ d.T @ Pinv
    dL = (np.einsum("pij,aj,ab->pib", dG, d, Pinv) + np.einsum("ij,paj,ab->pib", G, dd, Pinv)
          - np.einsum("ij,aj,ab,pbc,cd->pid", G, d, Pinv, dP, Pinv))
    PH = L @ d
    dPH = np.einsum("pia,aj->pij", dL, d) + np.einsum("ia,paj->pij", L, dd)
    PV = np.eye(m) - PH
    frame = orthonormal_frame(w, x, DistributionSpec.from_map(phi))
    return SplitAtPoint(np.asarray(x, float), PV, PH, -dPH, dPH, frame, L, dL, P, dP)


def _explicit_split(dist: DistributionSpec, w: WeylStructure, x) -> SplitAtPoint:
    metric = metric_at(w, x)
    g, dg = metric.g, metric.dg
    K, dK = _explicit_fields(dist, x)
    S = K.T @ g @ K
    Sinv = np.linalg.inv(S)
    dS = (np.einsum("pia,ij,jb->pab", dK, g, K) + np.einsum("ia,pij,jb->pab", K, dg, K)
          + np.einsum("ia,ij,pjb->pab", K, g, dK))
    dSinv = -np.einsum("ab,pbc,cd->pad", Sinv, dS, Sinv)
    PV = K @ Sinv @ K.T @ g
    dPV = (np.einsum("pia,ab,jb,jk->pik", dK, Sinv, K, g) + np.einsum("ia,pab,jb,jk->pik", K, dSinv, K, g)
           + np.einsum("ia,ab,pjb,jk->pik", K, Sinv, dK, g) + np.einsum("ia,ab,jb,pjk->pik", K, Sinv, K, dg))
    frame = orthonormal_frame(w, x, dist)
    return SplitAtPoint(np.asarray(x, float), PV, np.eye(w.dim) - PV, dPV, -dPV, frame)


def split_at(dist: DistributionSpec, w: WeylStructure, x) -> SplitAtPoint:
    """Projectors of V and H and their first partials at x (analytic, from jets)."""
    if dist.source is not None:
        return _map_split(_on_domain(dist.source, w), w, x)
    return _explicit_split(dist, w, x)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

PointFilter = Callable[[np.ndarray], object]


@dataclass(frozen=True)
class SampleSet:
    """Accepted sample points (in Halton order) and the rejection count."""

    points: Tuple[np.ndarray, ...]
    requested: int
    rejected: int
    reasons: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def accepted(self) -> int:
        return len(self.points)


def halton_points(chart: Chart, count: int, seed: int = 0) -> np.ndarray:
    """The first ``count`` unscrambled Halton points after skipping ``1 + seed``, mapped into the box."""
    if count < 1:
        raise ConfigError(f"sample count must be >= 1, got {count}")
    engine = qmc.Halton(d=chart.dim, scramble=False)
    engine.fast_forward(1 + seed)
    unit = engine.random(count)
    lower = np.array([lo for lo, _ in chart.box])
    upper = np.array([hi for _, hi in chart.box])
    return qmc.scale(unit, lower, upper) if chart.dim > 0 else unit


def sample_points(chart: Chart, count: int, seed: int = 0, filters: Iterable[PointFilter] = ()) -> SampleSet:
    """
    Deterministic Halton sample of the chart box.

    Points for which any filter raises a geometry error are skipped and
    logged.

    Raises:
        SamplingError: If fewer than count/2 points survive the filters.
    """
    filters = tuple(filters)
    accepted: List[np.ndarray] = []
    reasons: List[str] = []
    for x in halton_points(chart, count, seed):
        try:
            for check in filters:
                check(x)
        except WeylCheckError as exc:
            logger.debug("rejected sample point: %s", exc)
            reasons.append(str(exc))
            continue
        x.flags.writeable = False
        accepted.append(x)
    if len(accepted) < count / 2:
        raise SamplingError(len(accepted), count)
    if reasons:
        logger.info("%d of %d sample points rejected", len(reasons), count)
    return SampleSet(tuple(accepted), count, len(reasons), tuple(reasons))


def metric_filter(w: WeylStructure) -> PointFilter:
    def check(x):
        metric_at(w, x)
        lee_at(w, x)
    return check


def map_filter(phi: MapSpec) -> PointFilter:
    """Regularity filter: nondegenerate metrics on both sides, full rank, image in the codomain box."""
    def check(x):
        metric_at(phi.domain, x)
        lee_at(phi.domain, x)
        y = image_point(phi, x)
        metric_at(phi.codomain, y)
        lee_at(phi.codomain, y)
        vertical_horizontal_split(phi, x)
    return check


def distribution_filter(w: WeylStructure, dist: DistributionSpec) -> PointFilter:
    def check(x):
        metric_at(w, x)
        lee_at(w, x)
        orthonormal_frame(w, x, dist)
    return check


def clear_caches() -> None:
    """Drop all memoised per-point jets."""
    _metric_jets.cache_clear()
    _lee_jets.cache_clear()
    _map_jets.cache_clear()


# ---------------------------------------------------------------------------
# Numerical differentiation of derived point functions
# ---------------------------------------------------------------------------

RICHARDSON_STEP = 1e-4
# Residuals built from Richardson differences are judged no tighter than this.
RICHARDSON_TOL = 1e-6


def _central(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, direction: np.ndarray, h: float) -> np.ndarray:
    return (np.asarray(fn(x + h * direction)) - np.asarray(fn(x - h * direction))) / (2.0 * h)


def richardson_directional(fn: Callable[[np.ndarray], np.ndarray], x, direction,
                           h: float = RICHARDSON_STEP) -> np.ndarray:
    """
    Directional derivative of a derived point function, (4 D(h/2) - D(h)) / 3.

    Used only where no closed-form jet exists (Lee forms of derived Weyl
    connections, induced complex structures, basic-ness tests).
    """
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    return (4.0 * _central(fn, x, direction, h / 2.0) - _central(fn, x, direction, h)) / 3.0


def richardson_jacobian(fn: Callable[[np.ndarray], np.ndarray], x, h: float = RICHARDSON_STEP) -> np.ndarray:
    """All coordinate partials, stacked on a leading axis: out[p] = d_p fn(x)."""
    m = len(np.ravel(x))
    eye = np.eye(m)
    return np.stack([richardson_directional(fn, x, eye[p], h) for p in range(m)])
