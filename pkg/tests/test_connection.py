#!/usr/bin/env python3
"""
Tests for weylcheck.connection - Levi-Civita, Weyl, minimal and Hermitian
Weyl connections, and partial connections on horizontal spaces.
"""

import numpy as np
import pytest

from weylcheck.connection import (
    ConnectionCoeffs,
    InducedPartial,
    PullbackPartial,
    ShiftedPartial,
    anticommutator_residual,
    bott_lee_form,
    christoffel,
    commutator_residual,
    compatibility_residual,
    declared,
    equal_trace_weyl,
    hermitian_weyl,
    hwc_residual,
    lee_formula_residual,
    levi_civita,
    minimal_weyl,
    minimal_weyl_connection,
    minimal_weyl_faraday,
    minimality_residual,
    partial_lee_difference,
    pullback_partial_connection,
    shifted_trace_residual,
    torsion_residual,
    trace_hessian,
    weyl_connection,
    weyl_from_lee,
)
from weylcheck.errors import ConfigError, PreconditionError
from weylcheck.expr import eval_jet2, parse
from weylcheck.geometry import (
    Chart,
    DistributionSpec,
    MapSpec,
    WeylStructure,
    metric_at,
    orthonormal_frame,
    richardson_jacobian,
)
from weylcheck.hermitian import AlmostComplexField

SPHERE = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2"
LEE = np.array([0.3, -0.1, 0.2, 0.5])


@pytest.fixture
def sphere_r4(flat_chart):
    return WeylStructure.build(flat_chart, [SPHERE, 0, 0, 0, SPHERE, 0, 0, SPHERE, 0, SPHERE])


@pytest.fixture
def bent_line(flat_r4):
    """A line field whose integral curves are not geodesics."""
    return DistributionSpec.explicit(flat_r4, [[1, "x1", 0, "0.5*x2"]])


@pytest.mark.unit
class TestLeviCivita:
    """Test Christoffel symbols of the representative metric."""

    def test_flat(self, flat_r4, sample_point):
        coeffs = christoffel(flat_r4, sample_point, with_derivatives=True)
        assert np.abs(coeffs.gamma).max() == 0.0
        assert np.abs(coeffs.dgamma).max() == 0.0

    def test_polar_type_metric(self):
        """Test g = dx^2 + x^2 dy^2: Gamma^x_yy = -x and Gamma^y_xy = 1/x."""
        chart = Chart(("x", "y"), ((0.5, 2.0), (-1.0, 1.0)))
        w = WeylStructure.build(chart, [1, 0, "x^2"])
        gamma = christoffel(w, [2.0, 0.3]).gamma
        assert gamma[0, 1, 1] == pytest.approx(-2.0)
        assert gamma[1, 0, 1] == pytest.approx(0.5)
        assert gamma[1, 1, 0] == pytest.approx(0.5)
        assert gamma[0, 0, 0] == 0.0

    def test_analytic_derivatives_match_differences(self, sphere_r4, sample_point):
        """Test dgamma from second metric jets against Richardson differences."""
        coeffs = christoffel(sphere_r4, sample_point, with_derivatives=True)
        numeric = richardson_jacobian(lambda y: christoffel(sphere_r4, y).gamma, sample_point)
        np.testing.assert_allclose(coeffs.dgamma, numeric, atol=1e-8)

    def test_metric_compatible_and_torsion_free(self, sphere_r4, sample_point):
        coeffs = christoffel(sphere_r4, sample_point)
        assert compatibility_residual(coeffs, sphere_r4, sample_point) < 1e-12
        assert torsion_residual(coeffs) == 0.0

    def test_trace_hessian_is_laplacian(self, flat_r4, sample_point):
        """Test trace_g(D df) of |x|^2 on flat R^4."""
        jet = eval_jet2(parse("x1^2 + x2^2 + x3^2 + x4^2", flat_r4.coords), sample_point)
        coeffs = christoffel(flat_r4, sample_point)
        assert trace_hessian(coeffs, np.eye(4), jet.gradient, jet.hessian) == pytest.approx(8.0)


@pytest.mark.unit
class TestWeylConnection:
    """Test Weyl connections built from Lee forms."""

    def test_flat_with_dx1(self, flat_r4, sample_point):
        """Test Gamma^k_ij = d_i1 d^k_j + d_j1 d^k_i - d_ij d^k_1 for alpha = dx1."""
        coeffs = weyl_connection(flat_r4.with_lee_form([1, 0, 0, 0]), sample_point)
        expected = np.zeros((4, 4, 4))
        for k in range(4):
            for i in range(4):
                for j in range(4):
                    expected[k, i, j] = ((i == 0) * (k == j) + (j == 0) * (k == i) - (i == j) * (k == 0))
        np.testing.assert_allclose(coeffs.gamma, expected)

    def test_compatibility_with_lee_form(self, sphere_r4, sample_point):
        """Test Dg = -2 alpha (x) g."""
        coeffs = weyl_from_lee(sphere_r4, sample_point, LEE)
        assert compatibility_residual(coeffs, sphere_r4, sample_point) < 1e-12
        assert torsion_residual(coeffs) < 1e-15

    def test_equal_trace_recovers_lee_form(self, sphere_r4, sample_point):
        coeffs = weyl_from_lee(sphere_r4, sample_point, LEE)
        np.testing.assert_allclose(equal_trace_weyl(coeffs, sphere_r4, sample_point), LEE, atol=1e-12)
        assert lee_formula_residual(coeffs, sphere_r4, sample_point) < 1e-12

    def test_equal_trace_needs_dimension_other_than_two(self):
        chart = Chart(("x", "y"), ((-1, 1), (-1, 1)))
        w = WeylStructure.euclidean(chart)
        with pytest.raises(ConfigError):
            equal_trace_weyl(christoffel(w, [0.0, 0.0]), w, [0.0, 0.0])

    def test_declared_connection_uses_structure_lee_form(self, flat_r4, sample_point):
        w = flat_r4.with_lee_form(["x2", 0, 0, 1])
        coeffs = declared(w).at(sample_point, with_derivatives=True)
        np.testing.assert_allclose(coeffs.lee, [sample_point[1], 0, 0, 1])
        assert coeffs.dlee[1, 0] == 1.0

    def test_levi_civita_ignores_lee_form(self, flat_r4, sample_point):
        w = flat_r4.with_lee_form([1, 1, 1, 1])
        coeffs = levi_civita(w).at(sample_point)
        assert np.abs(coeffs.gamma).max() == 0.0
        np.testing.assert_allclose(coeffs.lee, 0.0)

    def test_connection_is_memoised(self, flat_r4, sample_point):
        conn = declared(flat_r4)
        assert conn.at(sample_point) is conn(sample_point)

    def test_derived_lee_form_derivatives(self, flat_r4, sample_point):
        """Test that a callable Lee form gets Richardson partials."""
        conn = declared(flat_r4)
        derived = type(conn)(flat_r4, lambda x: np.array([x[1] ** 2, 0.0, 0.0, 0.0]), "test")
        coeffs = derived.at(sample_point, with_derivatives=True)
        assert coeffs.dlee[1, 0] == pytest.approx(2 * sample_point[1], abs=1e-9)


def _random_cubic(rng, m):
    """Gradient and Hessian of a random cubic polynomial, as functions of the point."""
    C = rng.normal(size=(m, m, m))
    C = sum(np.transpose(C, p) for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))) / 6
    Q = rng.normal(size=(m, m))
    Q = Q + Q.T
    b = rng.normal(size=m)

    def gradient(x):
        return 3 * np.einsum("pjk,j,k->p", C, x, x) + 2 * Q @ x + b

    def hessian(x):
        return 6 * np.einsum("pqk,k->pq", C, x) + 2 * Q

    return gradient, hessian


def _warped_r3():
    chart = Chart(("x1", "x2", "x3"), ((-0.5, 0.5),) * 3)
    return WeylStructure.build(chart, ["1 + x1^2", "0.2*x2", 0, 1, 0, "exp(x3)"])


@pytest.mark.unit
class TestEqualTraceWeyl:
    """Test that the equal-trace Weyl connection has the Laplacian of the connection it is built from."""

    @pytest.mark.parametrize("geometry", ["flat_r4", "sphere_r4", "warped_r3"])
    def test_same_trace_of_hessian(self, geometry, request):
        w = _warped_r3() if geometry == "warped_r3" else request.getfixturevalue(geometry)
        m = w.dim
        rng = np.random.default_rng(7)
        cubics = [_random_cubic(rng, m) for _ in range(10)]
        for _ in range(20):
            x = rng.uniform(-0.5, 0.5, size=m)
            S = rng.uniform(-1.0, 1.0, size=(m, m, m))
            S = S + np.transpose(S, (0, 2, 1))
            base = christoffel(w, x)
            D = ConnectionCoeffs(base.point, base.gamma + S)
            D1 = weyl_from_lee(w, x, equal_trace_weyl(D, w, x))
            assert torsion_residual(D1) < 1e-12
            G = metric_at(w, x).inverse
            for gradient, hessian in cubics:
                expected = trace_hessian(D, G, gradient(x), hessian(x))
                assert abs(trace_hessian(D1, G, gradient(x), hessian(x)) - expected) < 1e-8

    def test_levi_civita_gives_zero_lee_form(self, sphere_r4, sample_point):
        lc = christoffel(sphere_r4, sample_point)
        np.testing.assert_allclose(equal_trace_weyl(lc, sphere_r4, sample_point), 0.0, atol=1e-12)


@pytest.mark.unit
class TestMinimalWeyl:
    """Test the connections determined by a distribution."""

    def test_totally_geodesic_fibres(self, projection_r4_r3, flat_r4, sample_point):
        dist = DistributionSpec.from_map(projection_r4_r3)
        np.testing.assert_allclose(minimal_weyl(flat_r4, dist, sample_point), 0.0, atol=1e-12)
        np.testing.assert_allclose(bott_lee_form(flat_r4, dist, sample_point).values, 0.0, atol=1e-12)

    def test_minimal_connection_makes_both_sides_minimal(self, sphere_r4, sample_point):
        """Test that V and its complement are minimal for the minimal Weyl connection."""
        dist = DistributionSpec.explicit(sphere_r4, [[1, "x1", 0, "0.5*x2"]])
        conn = minimal_weyl_connection(sphere_r4, dist)
        measurement = minimality_residual(sphere_r4, dist, conn, sample_point)
        assert measurement.scale > 1e-3
        assert measurement.residual < 1e-10 * (1 + measurement.scale)

    def test_levi_civita_is_not_minimal(self, flat_r4, bent_line, sample_point):
        measurement = minimality_residual(flat_r4, bent_line, levi_civita(flat_r4), sample_point)
        assert measurement.residual > 1e-3

    def test_shifted_trace(self, flat_r4, bent_line, sample_point):
        """Test how the vertical mean curvature changes under a Weyl shift."""
        w = flat_r4.with_lee_form(["x3", 1, "x1*x2", -0.5])
        measurement = shifted_trace_residual(w, bent_line, declared(w), sample_point)
        assert measurement.residual < 1e-12 * (1 + measurement.scale)

    def test_bott_lee_form_is_horizontal(self, flat_r4, bent_line, sample_point):
        form = bott_lee_form(flat_r4, bent_line, sample_point)
        vertical = orthonormal_frame(flat_r4, sample_point, bent_line).vertical_vectors[:, 0]
        assert abs(form.on(vertical)) < 1e-12

    def test_rank_must_be_proper(self, flat_r4, sample_point):
        dist = DistributionSpec.explicit(flat_r4, np.eye(4).tolist())
        with pytest.raises(ConfigError):
            bott_lee_form(flat_r4, dist, sample_point)

    def test_faraday_of_isometric_fibres(self, projection_r4_r3, flat_r4, sample_point):
        dist = DistributionSpec.from_map(projection_r4_r3)
        report = minimal_weyl_faraday(flat_r4, dist, [sample_point, -sample_point])
        assert report.passed
        assert report.accepted == 2
        assert "faraday_flat" in report.checks

    def test_faraday_needs_rank_one(self, flat_r4, sample_point):
        dist = DistributionSpec.explicit(flat_r4, [[1, 0, 0, 0], [0, 1, 0, 0]])
        with pytest.raises(ConfigError):
            minimal_weyl_faraday(flat_r4, dist, [sample_point])


@pytest.mark.unit
class TestHermitianWeyl:
    """Test the Weyl connection determined by an almost Hermitian structure."""

    def test_flat_standard_structure(self, flat_r4, sample_point):
        J = AlmostComplexField.standard(flat_r4)
        np.testing.assert_allclose(hermitian_weyl(flat_r4, J, sample_point), 0.0, atol=1e-12)

    def test_conformally_flat_kahler(self, flat_chart, sample_point):
        """Test that for g = exp(2f) times flat the Lee form is -df."""
        conformal = "exp(0.2*x1 + 0.2*x2^2)"
        w = WeylStructure.build(flat_chart, [conformal, 0, 0, 0, conformal, 0, 0, conformal, 0, conformal])
        J = AlmostComplexField.standard(w)
        expected = -np.array([0.1, 0.2 * sample_point[1], 0.0, 0.0])
        np.testing.assert_allclose(hermitian_weyl(w, J, sample_point), expected, atol=1e-10)

    def test_incompatible_structure(self, flat_chart, sample_point):
        w = WeylStructure.build(flat_chart, [2, 0, 0, 0, 1, 0, 0, 1, 0, 1])
        with pytest.raises(PreconditionError):
            hermitian_weyl(w, AlmostComplexField.standard(w), sample_point)

    def test_needs_even_dimension_four_or_more(self):
        chart = Chart(("x", "y"), ((-1, 1), (-1, 1)))
        w = WeylStructure.euclidean(chart)
        with pytest.raises(ConfigError):
            hermitian_weyl(w, AlmostComplexField.standard(w), [0.0, 0.0])

    def test_parallel_structure_residuals(self, flat_r4, sample_point):
        J = AlmostComplexField.standard(flat_r4)
        J0, dJ = J.jets(sample_point)
        coeffs = christoffel(flat_r4, sample_point)
        frame = orthonormal_frame(flat_r4, sample_point)
        assert anticommutator_residual(coeffs, J0, dJ, frame) == 0.0
        assert commutator_residual(coeffs, J0, dJ, frame) == 0.0


@pytest.mark.unit
class TestPartialConnections:
    """Test partial connections over the horizontal space of a submersion."""

    def test_projection_is_conformal(self, projection_r4_r3, sample_point):
        residual, dilation = hwc_residual(projection_r4_r3, sample_point)
        assert residual == pytest.approx(0.0, abs=1e-14)
        assert dilation == pytest.approx(1.0)

    def test_pullback_of_flat_connection(self, projection_r4_r3, flat_r3, sample_point):
        columns = pullback_partial_connection(projection_r4_r3, levi_civita(flat_r3), sample_point)
        assert columns.shape == (3, 4, 3)
        np.testing.assert_allclose(columns, 0.0, atol=1e-14)

    def test_pullback_needs_conformal_map(self):
        chart = Chart(("x", "y"), ((-1, 1), (-1, 1)))
        target = WeylStructure.euclidean(Chart(("u", "v"), ((-3, 3), (-3, 3))))
        phi = MapSpec.build(WeylStructure.euclidean(chart), target, ["x", "2*y"])
        with pytest.raises(PreconditionError):
            pullback_partial_connection(phi, levi_civita(target), [0.1, 0.2])

    def test_induced_matches_pullback_for_projection(self, projection_r4_r3, flat_r4, flat_r3, sample_point):
        induced = InducedPartial(projection_r4_r3, levi_civita(flat_r4))
        pulled = PullbackPartial(projection_r4_r3, levi_civita(flat_r3))
        form = partial_lee_difference(induced, pulled, sample_point)
        np.testing.assert_allclose(form.values, 0.0, atol=1e-12)

    def test_shift_by_one_form(self, projection_r4_r3, flat_r4, sample_point):
        """Test that shifting by beta changes the Lee form by the horizontal part of beta."""
        base = InducedPartial(projection_r4_r3, levi_civita(flat_r4))
        beta = np.array([1.0, 2.0, 3.0, 4.0])
        shifted = ShiftedPartial(base, lambda x: beta)
        form = partial_lee_difference(shifted, base, sample_point)
        np.testing.assert_allclose(form.values, [1.0, 2.0, 3.0, 0.0], atol=1e-12)

    def test_frame_must_be_orthonormal(self, projection_r4_r3, flat_r4, sample_point):
        base = InducedPartial(projection_r4_r3, levi_civita(flat_r4))
        with pytest.raises(PreconditionError):
            partial_lee_difference(base, base, sample_point, frame=2 * np.eye(4)[:, :3])
