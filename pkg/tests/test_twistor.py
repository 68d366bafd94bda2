#!/usr/bin/env python3
"""
Tests for weylcheck.twistor - twistorial maps in dimensions 3 -> 2, 4 -> 2
and 4 -> 3, the section k, and the horizontal Ricci conditions.
"""

import numpy as np
import pytest

from weylcheck.config import RunSettings
from weylcheck.connection import declared, levi_civita
from weylcheck.errors import ConfigError, PreconditionError
from weylcheck.geometry import Chart, DistributionSpec, MapSpec, WeylStructure, halton_points
from weylcheck.tasks import run_task
from weylcheck.twistor import (
    dpm_forms,
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

POINTS = [np.array(p) for p in ([0.3, -0.2, 0.5, 0.1], [-0.4, 0.6, -0.1, 0.7], [0.8, 0.1, -0.6, -0.3])]
POINTS_3D = [p[:3] for p in POINTS]


@pytest.fixture
def plane():
    return WeylStructure.euclidean(Chart(("y1", "y2"), ((-2.0, 2.0),) * 2))


@pytest.fixture
def projection_r4_r2(flat_r4, plane):
    return MapSpec.build(flat_r4, plane, ["x1", "x2"])


@pytest.fixture
def projection_r3_r2(plane):
    r3 = WeylStructure.euclidean(Chart(("x1", "x2", "x3"), ((-1.0, 1.0),) * 3))
    return MapSpec.build(r3, plane, ["x1", "x2"])


@pytest.fixture
def gh_points(gibbons_hawking):
    return list(halton_points(gibbons_hawking.domain.chart, 6, 0))


@pytest.mark.unit
class TestThreeAndFourToTwo:
    """Test twistoriality of submersions onto surfaces."""

    def test_projection_3to2(self, projection_r3_r2):
        report = twistorial_3to2(projection_r3_r2, levi_civita(projection_r3_r2.domain), POINTS_3D)
        assert report.passed
        assert report.flags == {"agrees_with_harmonic_morphism": True}

    def test_3to2_with_non_geodesic_fibres(self, projection_r3_r2):
        """Test that a horizontal Lee form bends the fibres and breaks harmonicity together."""
        w = projection_r3_r2.domain.with_lee_form(["1", 0, 0])
        report = twistorial_3to2(projection_r3_r2.with_domain(w), declared(w), POINTS_3D)
        assert not report.check("geodesic_fibres")
        assert not report.check("harmonic_morphism")
        assert report.flags["agrees_with_harmonic_morphism"] is True

    def test_3to2_rejects_other_dimensions(self, projection_r4_r2, flat_r4):
        with pytest.raises(ConfigError):
            twistorial_3to2(projection_r4_r2, levi_civita(flat_r4), POINTS)

    def test_3to2_needs_horizontally_conformal_map(self, plane):
        r3 = WeylStructure.euclidean(Chart(("x1", "x2", "x3"), ((-1.0, 1.0),) * 3))
        phi = MapSpec.build(r3, plane, ["x1", "2*x2"])
        with pytest.raises(PreconditionError) as exc_info:
            twistorial_3to2(phi, levi_civita(r3), POINTS_3D)
        assert "horizontally conformal" in str(exc_info.value)

    def test_projection_4to2_both_orientations(self, projection_r4_r2):
        report = twistorial_4to2(projection_r4_r2, POINTS)
        assert report.passed
        assert report.check("integrable_reversed")
        assert report.values == {"orientation": 1}

    def test_umbilic_fibres(self, projection_r4_r2):
        report = umbilic_fibres_report(projection_r4_r2, POINTS)
        assert report.passed
        assert report.flags == {"umbilic_iff_both": True}


@pytest.mark.unit
class TestFourToThree:
    """Test D+-, twistoriality 4 -> 3 and the two-of-three criterion."""

    def test_dpm_forms_of_projection(self, projection_r4_r3, flat_r4, sample_point):
        forms = dpm_forms(projection_r4_r3, flat_r4, sample_point)
        assert np.abs(forms.minimal).max() < 1e-12
        assert np.abs(forms.star).max() < 1e-12
        assert forms.difference_residual == 0.0

    def test_dpm_forms_need_rank_one(self, projection_r4_r2, flat_r4, sample_point):
        with pytest.raises(ConfigError):
            dpm_forms(DistributionSpec.from_map(projection_r4_r2), flat_r4, sample_point)

    def test_dpm_forms_of_gibbons_hawking(self, gibbons_hawking, gh_points):
        """Test that D+ and D- differ by twice the curvature form of the circle bundle."""
        forms = dpm_forms(gibbons_hawking.phi, gibbons_hawking.domain, gh_points[0])
        assert np.abs(forms.star).max() > 1e-3
        assert forms.difference_residual < 1e-12

    def test_projection_4to3(self, projection_r4_r3, flat_r3):
        report = twistorial_4to3(projection_r4_r3, declared(flat_r3), POINTS)
        assert report.passed
        assert report.check("twistorial_reversed")

    def test_horizontal_connection_of_projection(self, projection_r4_r3, flat_r4, sample_point):
        measurement = horizontal_connection_residual(projection_r4_r3, levi_civita(flat_r4), sample_point)
        assert measurement.residual < 1e-12

    def test_thm44a_on_projection(self, projection_r4_r3, flat_r4, flat_r3):
        report = thm44a_report(projection_r4_r3, levi_civita(flat_r4), declared(flat_r3), POINTS)
        assert report.passed
        assert report.checks == {"harmonic_morphism": "pass", "twistorial": "pass", "horizontal_connection": "pass"}

    @pytest.mark.slow
    def test_thm44a_gibbons_hawking(self, gibbons_hawking, gh_points):
        phi = gibbons_hawking.phi
        report = thm44a_report(phi, declared(phi.domain), declared(phi.codomain), gh_points)
        assert report.passed
        assert report.flags == {"two_of_three": True}

    @pytest.mark.slow
    def test_thm44a_detects_wrong_star_coefficient(self, gibbons_hawking, gh_points):
        """Test that replacing 1/2 by 1 leaves exactly two assertions true."""
        phi = gibbons_hawking.phi
        report = thm44a_report(phi, declared(phi.domain), declared(phi.codomain), gh_points, star_coefficient=1.0)
        assert report.check("harmonic_morphism")
        assert report.check("twistorial")
        assert not report.check("horizontal_connection")
        assert report.flags == {"two_of_three": False}
        assert report.failed

    def test_4to3_rejects_other_dimensions(self, projection_r4_r2, plane):
        with pytest.raises(ConfigError):
            twistorial_4to3(projection_r4_r2, declared(plane), POINTS)


@pytest.mark.unit
class TestKSection:
    """Test extraction of k from D^M = D + (1/2)(k + *_H I^H)."""

    def test_zero_for_levi_civita(self, projection_r4_r3, flat_r4, sample_point):
        section = k_section(projection_r4_r3, levi_civita(flat_r4), sample_point)
        assert section.k == pytest.approx(0.0, abs=1e-12)
        assert section.horizontal_residual < 1e-12
        assert section.dilation == pytest.approx(1.0)

    def test_vertical_lee_form(self, projection_r4_r3, flat_r4, sample_point):
        """Test that alpha = dx4 gives k = -2 for the unit vertical with (U, e1, e2, e3) positive."""
        w = flat_r4.with_lee_form([0, 0, 0, "1"])
        phi = projection_r4_r3.with_domain(w)
        section = k_section(phi, declared(w), sample_point)
        assert section.k == pytest.approx(-2.0)
        assert section.codomain_gauge == pytest.approx(-2.0)
        assert section.horizontal_residual < 1e-12

    def test_extract_k(self, projection_r4_r3, flat_r4):
        w = flat_r4.with_lee_form([0, 0, 0, "1"])
        report = extract_k(projection_r4_r3.with_domain(w), declared(w), POINTS, details=True)
        assert report.passed
        assert report.check("basic")
        assert report.values["k_min"] == pytest.approx(-2.0)
        assert report.values["k_max"] == pytest.approx(-2.0)
        assert len(report.values["k"]) == len(POINTS)

    def test_horizontal_lee_form_is_inconsistent(self, projection_r4_r3, flat_r4):
        """Test that a horizontal Lee form cannot be written as D + (1/2)(k + *_H I^H)."""
        w = flat_r4.with_lee_form(["1", 0, 0, 0])
        report = extract_k(projection_r4_r3.with_domain(w), declared(w), POINTS)
        assert report.failed
        assert not report.check("horizontal")


@pytest.mark.unit
class TestRicciConditions:
    """Test horizontal Ricci identities of harmonic morphisms."""

    def test_geodesic_fibres_of_projection(self, projection_r4_r3, flat_r4, flat_r3):
        report = geodesic_fibres_report(projection_r4_r3, levi_civita(flat_r4), declared(flat_r3), POINTS)
        assert report.passed
        assert report.values == {"harmonic_morphism": True, "twistorial": True}

    def test_ricci_horizontal_tracefree_flat(self, projection_r3_r2):
        report = ricci_horizontal_tracefree(levi_civita(projection_r3_r2.domain), projection_r3_r2, POINTS_3D)
        assert report.passed
        assert report.task == "ricci_horizontal"
        assert report.flags == {"harmonic_morphism_implies_tracefree": True,
                                "geodesic_twistorial_tracefree_agree": True}
        assert report.values == {"harmonic_morphism": True, "geodesic_fibres": True, "twistorial": True}

    def test_ricci_horizontal_without_harmonic_morphism(self, projection_r3_r2):
        """Test that bent fibres leave the agreement flags holding trivially."""
        w = projection_r3_r2.domain.with_lee_form(["1", 0, 0])
        report = ricci_horizontal_tracefree(declared(w), projection_r3_r2.with_domain(w), POINTS_3D)
        assert report.values["harmonic_morphism"] is False
        assert report.values["geodesic_fibres"] is False
        assert all(report.flags.values())

    def test_ricci_horizontal_not_horizontally_conformal(self, projection_r3_r2, plane):
        phi = MapSpec.build(projection_r3_r2.domain, plane, ["2*x1", "x2"])
        report = ricci_horizontal_tracefree(levi_civita(phi.domain), phi, POINTS_3D)
        assert report.passed
        assert report.values == {"harmonic_morphism": False, "geodesic_fibres": False, "twistorial": False}
        assert all(report.flags.values())

    def test_ricci_horizontal_has_no_agreement_flag_in_dimension_four(self, projection_r4_r3, flat_r4):
        report = ricci_horizontal_tracefree(levi_civita(flat_r4), projection_r4_r3, POINTS)
        assert report.passed
        assert report.flags == {}

    @pytest.mark.parametrize("name,harmonic", [
        ("product_r3_r2", True),
        ("sphere_line_product", True),
        ("warped_line_3d", False),
    ])
    def test_ricci_horizontal_agrees_on_catalog_maps(self, name, harmonic, catalog_declaration):
        decl = catalog_declaration(name)
        settings = RunSettings(points=16, seed=0)
        report = run_task(decl, "ricci_horizontal", settings)
        twistorial = run_task(decl, "twistorial_3to2", settings)
        assert report.values["harmonic_morphism"] is harmonic
        assert report.values["twistorial"] is twistorial.passed
        assert report.flags["geodesic_twistorial_tracefree_agree"] is True
        if harmonic:
            assert report.passed and twistorial.passed

    def test_ricci_horizontal_tracefree_dimension(self, plane):
        dist = DistributionSpec.explicit(plane, [["1", "0"]])
        with pytest.raises(ConfigError):
            ricci_horizontal_tracefree(levi_civita(plane), dist, [np.zeros(2)])

    def test_prop56_on_projections(self, projection_r4_r3, projection_r4_r2, flat_r4, flat_r3, plane):
        for phi, codomain in ((projection_r4_r3, flat_r3), (projection_r4_r2, plane)):
            report = prop56_report(phi, levi_civita(flat_r4), declared(codomain), POINTS)
            assert report.passed
            assert report.flags == {"agrees_with_twistorial": True}

    def test_prop56_needs_harmonic_morphism(self, projection_r4_r3, flat_r4, flat_r3):
        w = flat_r4.with_lee_form(["x1", 0, 0, 0])
        with pytest.raises(PreconditionError) as exc_info:
            prop56_report(projection_r4_r3.with_domain(w), declared(w), declared(flat_r3), POINTS)
        assert "harmonic morphism" in str(exc_info.value)

    def test_lemma55_on_projection(self, projection_r4_r3, flat_r4, flat_r3, sample_point):
        measurement = lemma55_residual(projection_r4_r3, levi_civita(flat_r4), declared(flat_r3), sample_point)
        assert measurement.residual < 1e-12
        assert lemma55_report(projection_r4_r3, levi_civita(flat_r4), declared(flat_r3), POINTS).passed

    @pytest.mark.slow
    def test_lemma55_gibbons_hawking(self, gibbons_hawking, gh_points):
        phi = gibbons_hawking.phi
        report = lemma55_report(phi, declared(phi.domain), declared(phi.codomain), gh_points)
        assert report.passed
        assert report.task == "lemma55"
