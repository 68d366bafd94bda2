#!/usr/bin/env python3
"""
Tests for weylcheck.tasks - the task and identity registries and running
tasks on declarations.
"""

import pytest

from weylcheck import __version__
from weylcheck.config import RunSettings
from weylcheck.errors import ConfigError, SamplingError
from weylcheck.declarations import parse_declaration
from weylcheck.tasks import (
    IDENTITIES,
    TASKS,
    applicable_tasks,
    get_identity,
    get_task,
    run_identity,
    run_task,
    run_tasks,
    sample_for,
)

SPEC_TASKS = {
    "weyl_connection", "einstein_weyl", "asd", "gauduchon_tod", "gt_connection_flat", "minimal_weyl",
    "minimal_weyl_faraday", "hermitian_weyl", "remark33", "nijenhuis", "morphism", "theorem23",
    "fuglede_ishihara", "required_codomain_lee", "holomorphic", "prop35", "prop311", "twistorial_3to2",
    "twistorial_4to2", "umbilic_fibres", "twistorial_4to3", "thm44a", "extract_k", "geodesic_fibres",
    "ricci_horizontal", "prop56", "lemma55",
}

DEGENERATE_STRIP = """\
[chart]
coords = ["x", "y"]
box = [[-1.0, -0.5], [-1.0, 1.0]]

[metric]
upper = ["x", "0", "1"]
"""


@pytest.mark.unit
class TestRegistry:
    """Test task and identity lookup."""

    def test_registered_tasks(self):
        assert set(TASKS) == SPEC_TASKS
        assert all(task.name == name for name, task in TASKS.items())

    def test_identities(self):
        assert set(IDENTITIES) == {"chain", "trace-b", "fundamental", "lemma34", "lemma55", "eq13", "eq41",
                                   "eq42"}

    def test_unknown_task_lists_registry(self):
        with pytest.raises(ConfigError) as exc_info:
            get_task("theorem99")
        assert "unknown task 'theorem99'" in str(exc_info.value)
        assert "weyl_connection" in str(exc_info.value)

    def test_unknown_identity(self):
        with pytest.raises(ConfigError):
            get_identity("eq99")

    def test_applicable_tasks_for_flat_three_space(self, catalog_declaration):
        names = applicable_tasks(catalog_declaration("euclidean_r3"))
        assert set(names) == {"weyl_connection", "einstein_weyl", "gauduchon_tod", "gt_connection_flat",
                              "minimal_weyl", "minimal_weyl_faraday", "ricci_horizontal"}

    def test_applicable_tasks_for_projection(self, catalog_declaration):
        names = applicable_tasks(catalog_declaration("product_r3_r2"))
        assert "twistorial_3to2" in names
        assert "twistorial_4to3" not in names
        assert "asd" not in names

    def test_reason_for_inapplicable_task(self, catalog_declaration):
        decl = catalog_declaration("euclidean_r2")
        assert TASKS["morphism"].applies(decl) == "needs a [map]"
        assert TASKS["einstein_weyl"].applies(decl) == "needs dimension 3 or 4 or 5 or 6, got 2"
        assert TASKS["hermitian_weyl"].applies(decl) == "needs a [complex_structure]"


@pytest.mark.unit
class TestRunTask:
    """Test running tasks on small samples."""

    def test_run_task_stamps_report(self, catalog_declaration, settings):
        report = run_task(catalog_declaration("euclidean_r3"), "weyl_connection", settings)
        assert report.passed
        assert report.task == "weyl_connection"
        assert report.engine_version == __version__
        assert report.config["points"] == settings.points
        assert report.accepted == settings.points
        assert set(report.checks) == {"compatible", "torsion_free", "lee_formula"}

    def test_dimension_two_skips_lee_formula(self, catalog_declaration, settings):
        report = run_task(catalog_declaration("euclidean_r2"), "weyl_connection", settings)
        assert report.passed
        assert set(report.checks) == {"compatible", "torsion_free"}

    def test_task_that_does_not_apply(self, catalog_declaration, settings):
        with pytest.raises(ConfigError) as exc_info:
            run_task(catalog_declaration("euclidean_r3"), "morphism", settings)
        assert "does not apply to euclidean_r3" in str(exc_info.value)

    def test_run_tasks_shares_the_sample(self, catalog_declaration, settings):
        reports = run_tasks(catalog_declaration("euclidean_r3"), ["weyl_connection", "einstein_weyl"], settings)
        assert [r.task for r in reports] == ["weyl_connection", "einstein_weyl"]
        assert all(r.passed for r in reports)
        assert reports[0].accepted == reports[1].accepted

    def test_run_tasks_checks_names_first(self, catalog_declaration, settings):
        with pytest.raises(ConfigError):
            run_tasks(catalog_declaration("euclidean_r3"), ["weyl_connection", "bogus"], settings)

    def test_details_add_point_rows(self, catalog_declaration):
        report = run_task(catalog_declaration("euclidean_r3"), "einstein_weyl", RunSettings(points=4), details=True)
        assert len(report.details) == 4
        assert len(report.details[0]["point"]) == 3

    def test_projection_tasks(self, catalog_declaration, settings):
        decl = catalog_declaration("product_r3_r2")
        for name in ("morphism", "theorem23", "twistorial_3to2"):
            assert run_task(decl, name, settings).passed

    def test_sampling_rejects_degenerate_points(self):
        """Test that a metric degenerate on the whole box leaves no usable sample."""
        decl = parse_declaration(DEGENERATE_STRIP, "strip")
        with pytest.raises(SamplingError) as exc_info:
            sample_for(decl, RunSettings(points=8))
        assert exc_info.value.accepted == 0
        assert exc_info.value.requested == 8


@pytest.mark.unit
class TestRunIdentity:
    """Test the raw identity residuals."""

    def test_chain_rule_on_projection(self, catalog_declaration, settings):
        report = run_identity(catalog_declaration("product_r3_r2"), "chain", settings)
        assert report.passed
        assert report.task == "chain"

    def test_eq13_on_sphere(self, catalog_declaration, settings):
        assert run_identity(catalog_declaration("sphere_rep_r3"), "eq13", settings).passed

    def test_identity_that_does_not_apply(self, catalog_declaration, settings):
        with pytest.raises(ConfigError) as exc_info:
            run_identity(catalog_declaration("euclidean_r2"), "eq13", settings)
        assert "identity 'eq13' does not apply" in str(exc_info.value)
