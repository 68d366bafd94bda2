#!/usr/bin/env python3
"""
Golden runs over the built-in catalog: every expected verdict and every
listed identity on a small deterministic sample, and the same verdicts with
the domain presented in another gauge.
"""

import numpy as np
import pytest

from weylcheck.catalog import catalog, entry, names
from weylcheck.config import RunSettings
from weylcheck.connection import declared
from weylcheck.curvature import curvature_at
from weylcheck.errors import ConfigError
from weylcheck.expr import eval_jet2
from weylcheck.tasks import IDENTITIES, TASKS, run_identity, run_tasks, sample_for

GOLDEN_POINTS = 16


def _settings():
    return RunSettings(points=GOLDEN_POINTS, seed=0)


@pytest.mark.unit
class TestCatalogContents:
    """Test the catalog table itself."""

    def test_names_are_unique(self):
        assert len(names()) == len(catalog()) == len(set(names()))

    def test_expected_tasks_are_registered(self):
        for e in catalog():
            assert set(e.expected) <= set(TASKS), e.name
            assert set(e.identities) <= set(IDENTITIES), e.name
            assert set(e.expected.values()) <= {"pass", "fail"}, e.name

    def test_file_tasks_match_expectations(self, catalog_declaration):
        """Test that each file's [run] tasks are exactly the tasks with an expected verdict."""
        for e in catalog():
            assert set(catalog_declaration(e.name).tasks) == set(e.expected), e.name

    def test_unknown_entry(self):
        with pytest.raises(ConfigError) as exc_info:
            entry("klein_bottle")
        assert "euclidean_r2" in str(exc_info.value)

    def test_filename(self):
        assert entry("gibbons_hawking").filename == "gibbons_hawking.toml"


@pytest.mark.slow
@pytest.mark.integration
class TestGoldenVerdicts:
    """Run every catalog entry and compare with its expected verdicts."""

    @pytest.mark.parametrize("name", names())
    def test_expected_verdicts(self, name, catalog_declaration):
        e = entry(name)
        decl = catalog_declaration(name)
        reports = run_tasks(decl, list(e.expected), _settings())
        observed = {r.task: r.verdict for r in reports}
        assert observed == e.expected
        for r in reports:
            assert all(r.flags.values()), f"{name}: {r.task} violated {r.flags}"

    @pytest.mark.parametrize("name", [n for n in names() if entry(n).identities])
    def test_identities_vanish(self, name, catalog_declaration):
        decl = catalog_declaration(name)
        for identity in entry(name).identities:
            report = run_identity(decl, identity, _settings())
            assert report.passed, f"{name}: {identity} residual {report.max_residual:.3e}"


GAUGE_TASKS = ("weyl_connection", "einstein_weyl", "asd", "gauduchon_tod", "hermitian_weyl", "nijenhuis",
               "morphism", "theorem23", "twistorial_3to2", "twistorial_4to2", "twistorial_4to3", "thm44a",
               "umbilic_fibres", "prop311", "geodesic_fibres", "ricci_horizontal")
GAUGE_ENTRIES = ("euclidean_r4", "gauduchon_tod_sphere", "product_r3_r2", "product_r4_r2", "gibbons_hawking",
                 "killing_rotation", "complex_product", "twisted_J", "twisted_fibration", "warped_line_3d",
                 "flat_with_faraday")


def _scaling(decl):
    """1 + 0.3 x_1 stays positive on every box used here."""
    return f"1 + 0.3*{decl.domain.coords[0]}"


@pytest.mark.slow
@pytest.mark.integration
class TestGaugeInvariance:
    """Test that presenting the domain in another gauge changes no verdict and no Faraday form."""

    @pytest.mark.parametrize("name", GAUGE_ENTRIES)
    def test_verdicts_survive_regauging(self, name, catalog_declaration):
        e = entry(name)
        decl = catalog_declaration(name)
        tasks = [t for t in GAUGE_TASKS if t in e.expected]
        assert tasks, name
        original = {r.task: r.verdict for r in run_tasks(decl, tasks, _settings())}
        regauged = {r.task: r.verdict for r in run_tasks(decl.regauged(_scaling(decl)), tasks, _settings())}
        assert regauged == original == {t: e.expected[t] for t in tasks}

    @pytest.mark.parametrize("name", ["flat_with_faraday", "gibbons_hawking", "killing_rotation"])
    def test_faraday_form_is_unchanged(self, name, catalog_declaration):
        decl = catalog_declaration(name)
        moved = decl.regauged(_scaling(decl))
        for x in sample_for(decl, _settings()).points:
            before = curvature_at(declared(decl.domain), x).faraday
            after = curvature_at(declared(moved.domain), x).faraday
            assert np.abs(before - after).max() < 1e-9

    def test_gauduchon_tod_function_scales(self, catalog_declaration):
        decl = catalog_declaration("gauduchon_tod_sphere")
        moved = decl.regauged("1 + 0.3*x1")
        assert eval_jet2(moved.k, (0.5, 0.0, 0.0)).value == pytest.approx(2.0 * 1.15)

    def test_regauged_declaration_keeps_gauge_when_reoriented(self, catalog_declaration):
        decl = catalog_declaration("gibbons_hawking").regauged("1 + 0.3*x1")
        flipped = decl.reoriented(-1)
        assert flipped.domain.chart.orientation == -1
        assert flipped.domain.metric == decl.domain.metric
        assert flipped.phi.domain is flipped.domain
