#!/usr/bin/env python3
"""
Tests for weylcheck.hermitian - almost complex structures, holomorphic maps
and the induced positive structure of a two-plane field.
"""

import numpy as np
import pytest

from weylcheck.connection import declared, levi_civita
from weylcheck.errors import ConfigError, PreconditionError
from weylcheck.geometry import Chart, DistributionSpec, MapSpec, WeylStructure
from weylcheck.hermitian import (
    AlmostComplexField,
    InducedComplexStructure,
    dj_trace,
    holomorphic_function_harmonic,
    holomorphy_check,
    holomorphy_report,
    induced_positive_J,
    kahler_form,
    lemma34_residual,
    nijenhuis,
    nijenhuis_check,
    positivity_residual,
    prop311_report,
    prop35_report,
    remark33_report,
    structure_residuals,
)

POINTS = [np.array(p) for p in ([0.3, -0.2, 0.5, 0.1], [-0.4, 0.6, -0.1, 0.7], [0.8, 0.1, -0.6, -0.3])]


@pytest.fixture
def plane():
    return WeylStructure.euclidean(Chart(("y1", "y2"), ((-2.0, 2.0),) * 2))


@pytest.fixture
def complex_projection(flat_r4, plane):
    """(x1, x2): holomorphic for the standard structures."""
    return MapSpec.build(flat_r4, plane, ["x1", "x2"])


@pytest.fixture
def conjugate_projection(flat_r4, plane):
    return MapSpec.build(flat_r4, plane, ["x1", "-x2"])


@pytest.mark.unit
class TestAlmostComplexField:
    """Test declaration and validation of almost complex structures."""

    def test_odd_dimension_rejected(self, flat_r3):
        with pytest.raises(ConfigError) as exc_info:
            AlmostComplexField.from_rows(flat_r3, [[0, 0, 0]] * 3)
        assert "even dimension" in str(exc_info.value)

    def test_wrong_shape_rejected(self, flat_r4):
        with pytest.raises(ConfigError):
            AlmostComplexField.from_rows(flat_r4, [[0, -1], [1, 0]])

    def test_standard_structure(self, flat_r4, sample_point):
        J_field = AlmostComplexField.standard(flat_r4)
        J, dJ = J_field.jets(sample_point)
        assert J[1, 0] == 1.0
        assert J[0, 1] == -1.0
        assert J[3, 2] == 1.0
        assert np.abs(dJ).max() == 0.0
        assert structure_residuals(J, np.eye(4)) == (0.0, 0.0)

    def test_standard_structure_reversed_orientation(self, flat_r4, sample_point):
        """Test that the last block flips so the structure stays positive."""
        w = flat_r4.reoriented(-1)
        J = AlmostComplexField.standard(w).at(sample_point)
        assert J[3, 2] == -1.0
        assert positivity_residual(AlmostComplexField.standard(w), w, sample_point) < 1e-12

    def test_kahler_form(self, flat_r4, sample_point):
        omega = kahler_form(AlmostComplexField.standard(flat_r4), flat_r4, sample_point)
        assert omega[0, 1] == 1.0
        np.testing.assert_allclose(omega, -omega.T)

    def test_incompatible_structure_rejected(self, flat_r4, sample_point):
        """Test that J^2 = -1 without g-compatibility is a precondition failure."""
        J_field = AlmostComplexField.from_rows(flat_r4, [
            [0, -2, 0, 0], [0.5, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
        with pytest.raises(PreconditionError):
            kahler_form(J_field, flat_r4, sample_point)

    def test_positivity(self, flat_r4, sample_point):
        standard = AlmostComplexField.standard(flat_r4)
        negative = AlmostComplexField.from_rows(flat_r4, [
            [0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
        assert positivity_residual(standard, flat_r4, sample_point) < 1e-12
        assert positivity_residual(negative, flat_r4, sample_point) > 0.5

    def test_positivity_needs_dimension_four(self, plane):
        J_field = AlmostComplexField.standard(plane)
        with pytest.raises(ConfigError):
            positivity_residual(J_field, plane, np.zeros(2))


@pytest.mark.unit
class TestNijenhuis:
    """Test the integrability verdict."""

    def test_constant_structure_is_integrable(self, flat_r4, sample_point):
        J_field = AlmostComplexField.standard(flat_r4)
        assert np.abs(nijenhuis(J_field, sample_point)).max() == 0.0
        assert nijenhuis_check(J_field, POINTS).passed

    def test_twisted_structure_is_not_integrable(self, catalog_declaration):
        decl = catalog_declaration("twisted_J")
        report = nijenhuis_check(decl.complex_structure, POINTS)
        assert report.failed
        assert report.task == "nijenhuis"

    def test_nijenhuis_is_antisymmetric(self, catalog_declaration, sample_point):
        N = nijenhuis(catalog_declaration("twisted_J").complex_structure, sample_point)
        np.testing.assert_allclose(N, -np.transpose(N, (1, 0, 2)), atol=1e-12)

    def test_dj_trace_of_parallel_structure(self, flat_r4, sample_point):
        J_field = AlmostComplexField.standard(flat_r4)
        assert np.abs(dj_trace(levi_civita(flat_r4), J_field, sample_point)).max() == 0.0

    def test_dj_trace_needs_dimension_four(self, plane):
        with pytest.raises(ConfigError):
            dj_trace(levi_civita(plane), AlmostComplexField.standard(plane), np.zeros(2))


@pytest.mark.unit
class TestHolomorphicMaps:
    """Test holomorphy, its identity for DJ, and holomorphic + HWC implying harmonic."""

    def test_projection_is_holomorphic(self, complex_projection, flat_r4, plane, sample_point):
        JM, JN = AlmostComplexField.standard(flat_r4), AlmostComplexField.standard(plane)
        assert holomorphy_check(complex_projection, JM, JN, sample_point).residual == 0.0
        assert holomorphy_report(complex_projection, JM, JN, POINTS).passed

    def test_conjugate_is_not_holomorphic(self, conjugate_projection, flat_r4, plane, sample_point):
        JM, JN = AlmostComplexField.standard(flat_r4), AlmostComplexField.standard(plane)
        assert holomorphy_check(conjugate_projection, JM, JN, sample_point).residual == pytest.approx(2.0)
        assert holomorphy_report(conjugate_projection, JM, JN, POINTS).failed

    def test_lemma34_vanishes(self, complex_projection, flat_r4, plane, sample_point):
        JM, JN = AlmostComplexField.standard(flat_r4), AlmostComplexField.standard(plane)
        measurement = lemma34_residual(complex_projection, JM, JN, levi_civita(flat_r4), declared(plane),
                                       sample_point)
        assert measurement.residual < 1e-12

    def test_lemma34_needs_holomorphic_map(self, conjugate_projection, flat_r4, plane, sample_point):
        JM, JN = AlmostComplexField.standard(flat_r4), AlmostComplexField.standard(plane)
        with pytest.raises(PreconditionError) as exc_info:
            lemma34_residual(conjugate_projection, JM, JN, levi_civita(flat_r4), declared(plane), sample_point)
        assert "not holomorphic" in str(exc_info.value)

    def test_prop35(self, complex_projection, flat_r4, plane):
        JM, JN = AlmostComplexField.standard(flat_r4), AlmostComplexField.standard(plane)
        report = prop35_report(complex_projection, JM, JN, POINTS)
        assert report.passed
        assert report.flags == {"holomorphic_hwc_implies_harmonic": True}
        assert set(report.checks) == {"holomorphic", "hwc", "harmonic"}

    def test_prop35_vacuous_for_conjugate(self, conjugate_projection, flat_r4, plane):
        """Test that the implication holds trivially when the map is not holomorphic."""
        JM, JN = AlmostComplexField.standard(flat_r4), AlmostComplexField.standard(plane)
        report = prop35_report(conjugate_projection, JM, JN, POINTS)
        assert not report.check("holomorphic")
        assert report.flags["holomorphic_hwc_implies_harmonic"] is True

    def test_holomorphic_function_is_harmonic(self, flat_r4, sample_point):
        """Test z^2 = (x1^2 - x2^2) + i (2 x1 x2)."""
        J_field = AlmostComplexField.standard(flat_r4)
        measurement = holomorphic_function_harmonic(["x1^2 - x2^2", "2*x1*x2"], J_field, flat_r4, sample_point)
        assert measurement.residual < 1e-12
        assert measurement.scale > 1.0

    def test_non_holomorphic_function(self, flat_r4, sample_point):
        J_field = AlmostComplexField.standard(flat_r4)
        with pytest.raises(PreconditionError):
            holomorphic_function_harmonic(["x1", "-x2"], J_field, flat_r4, sample_point)

    def test_remark33_on_flat_space(self, flat_r4):
        report = remark33_report(AlmostComplexField.standard(flat_r4), flat_r4, POINTS)
        assert report.passed
        assert report.flags == {"anticommutator": True, "commutator_connection_free": True}

    def test_remark33_needs_dimension_four(self, plane):
        with pytest.raises(ConfigError):
            remark33_report(AlmostComplexField.standard(plane), plane, [np.zeros(2)])


@pytest.mark.unit
class TestInducedStructure:
    """Test the positive structure of a two-plane field in dimension 4."""

    def test_induced_structure_is_compatible_and_positive(self, complex_projection, flat_r4, sample_point):
        dist = DistributionSpec.from_map(complex_projection)
        J = induced_positive_J(dist, flat_r4, sample_point)
        assert structure_residuals(J, np.eye(4)) == pytest.approx((0.0, 0.0), abs=1e-12)
        field = InducedComplexStructure(dist, flat_r4)
        assert positivity_residual(field, flat_r4, sample_point) < 1e-12

    def test_induced_structure_preserves_the_fibres(self, complex_projection, flat_r4, sample_point):
        J = induced_positive_J(DistributionSpec.from_map(complex_projection), flat_r4, sample_point)
        np.testing.assert_allclose(J[:2, 2:], 0.0, atol=1e-12)
        np.testing.assert_allclose(J[2:, :2], 0.0, atol=1e-12)

    def test_induced_structure_of_linear_projection_is_integrable(self, complex_projection, flat_r4):
        field = InducedComplexStructure(DistributionSpec.from_map(complex_projection), flat_r4)
        assert nijenhuis_check(field, POINTS).passed

    def test_needs_rank_two(self, flat_r4, sample_point):
        dist = DistributionSpec.explicit(flat_r4, [["1", "0", "0", "0"]])
        with pytest.raises(ConfigError):
            induced_positive_J(dist, flat_r4, sample_point)

    def test_prop311_on_projection(self, complex_projection, flat_r4):
        report = prop311_report(complex_projection, levi_civita(flat_r4), POINTS)
        assert report.passed
        assert report.flags == {"equivalence": True}
        assert report.values == {"harmonic_morphism": True, "integrable": True}

    def test_prop311_with_shifted_domain(self, flat_r4, plane):
        """Test that neither side holds once the domain Lee form is x1 dx1."""
        w = flat_r4.with_lee_form(["x1", 0, 0, 0])
        phi = MapSpec.build(w, plane, ["x1", "x2"])
        report = prop311_report(phi, declared(w), POINTS)
        assert report.values["harmonic_morphism"] is False
        assert not report.check("hm_and_integrable")
        assert report.flags["equivalence"] is True

    def test_prop311_needs_four_to_two(self, projection_r4_r3, flat_r4):
        with pytest.raises(ConfigError):
            prop311_report(projection_r4_r3, levi_civita(flat_r4), POINTS)
