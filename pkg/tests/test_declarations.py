#!/usr/bin/env python3
"""
Tests for weylcheck.declarations - reading geometry files.
"""

import pytest

from weylcheck.declarations import load_declaration, parse_declaration
from weylcheck.errors import ConfigError, EXIT_CONFIG_ERROR, ExpressionSyntaxError, UnknownIdentifierError

PLANE = """\
[chart]
coords = ["x", "y"]
box = [[-1.0, 1.0], [-1.0, 1.0]]

[metric]
upper = ["1", "0", "1"]
"""

PROJECTION = """\
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = -1

[metric]
upper = ["1", "0", "0", "1", "0", "1"]

[lee_form]
components = ["x1", "0", 0]

[weyl.codomain]
coords = ["u", "v"]
box = [[-2.0, 2.0], [-2.0, 2.0]]
metric = ["1", "0", "1"]
lee_form = ["0", "0"]

[map]
components = ["x1", "x2"]

[identity]
functions = ["u*v"]

[run]
points = 8
seed = 2
tol = 1
tasks = ["morphism", "theorem23"]
"""


@pytest.mark.unit
class TestParseDeclaration:
    """Test building engine objects from TOML text."""

    def test_minimal_file(self):
        decl = parse_declaration(PLANE, "plane")
        assert decl.name == "plane"
        assert decl.dim == 2
        assert decl.phi is None
        assert decl.fibration is None
        assert decl.tasks == []
        assert decl.run == {}

    def test_map_and_run_table(self):
        decl = parse_declaration(PROJECTION, "projection")
        assert decl.domain.chart.orientation == -1
        assert decl.codomain.coords == ("u", "v")
        assert (decl.phi.m, decl.phi.n) == (3, 2)
        assert decl.fibration.rank(3) == 1
        assert len(decl.identity_functions) == 1
        assert decl.run == {"points": 8, "seed": 2, "tol": 1.0, "tasks": ["morphism", "theorem23"]}
        assert decl.tasks == ["morphism", "theorem23"]

    def test_orientation_override(self):
        decl = parse_declaration(PROJECTION, "projection", orientation=1)
        assert decl.domain.chart.orientation == 1

    def test_reoriented_rebuilds(self):
        decl = parse_declaration(PROJECTION, "projection")
        assert decl.reoriented(-1) is decl
        flipped = decl.reoriented(1)
        assert flipped.domain.chart.orientation == 1
        assert flipped.name == "projection"

    def test_catalog_entries_parse(self, catalog_declaration):
        decl = catalog_declaration("gauduchon_tod_sphere")
        assert decl.k is not None
        assert decl.dim == 3
        assert catalog_declaration("twisted_J").complex_structure is not None

    def test_regauged_moves_domain_bound_objects(self, catalog_declaration):
        decl = catalog_declaration("gibbons_hawking_quotient")
        moved = decl.regauged("1 + 0.3*x1")
        assert moved.domain.lee_form != decl.domain.lee_form
        assert moved.phi.domain is moved.domain
        assert moved.complex_structure.structure is moved.domain
        assert moved.complex_structure.rows == decl.complex_structure.rows
        assert moved.codomain is decl.codomain
        assert moved.name == decl.name

    def test_regauged_rejects_outside_names(self):
        decl = parse_declaration(PROJECTION, "projection")
        with pytest.raises(UnknownIdentifierError):
            decl.regauged("1 + y1")


@pytest.mark.unit
class TestDeclarationErrors:
    """Test that malformed files are configuration errors naming the problem."""

    @pytest.mark.parametrize("text,fragment", [
        ("[chart", "invalid TOML"),
        (PLANE + "\n[extras]\nx = 1\n", "unknown sections"),
        ('[metric]\nupper = ["1"]\n', "missing the [chart] section"),
        (PLANE.replace('upper = ["1", "0", "1"]', 'lower = ["1"]'), "needs a 'upper' entry"),
        (PLANE + '\n[map]\ncomponents = ["x"]\n', "needs a [weyl.codomain]"),
        (PROJECTION.replace('components = ["x1", "x2"]', 'components = ["x1", "u"]'), "map component 1"),
        (PLANE + '\n[identity]\nfunctions = ["u"]\n', "live on the codomain"),
        (PLANE + "\n[run]\nrepeat = 3\n", "unknown [run] keys"),
        (PLANE + '\n[run]\npoints = "many"\n', "[run] points must be of type int"),
        (PLANE + "\n[run]\nseed = true\n", "[run] seed must be of type int"),
        (PLANE.replace('box = [[-1.0, 1.0], [-1.0, 1.0]]', 'box = [-1.0, 1.0]'), "box must be a list"),
        (PLANE.replace('coords = ["x", "y"]', 'coords = ["x", "y"]\ndim = 3'), "dim = 3"),
    ])
    def test_config_errors(self, text, fragment):
        with pytest.raises(ConfigError) as exc_info:
            parse_declaration(text, "broken")
        assert fragment in str(exc_info.value)
        assert exc_info.value.exit_code == EXIT_CONFIG_ERROR

    def test_expression_syntax_error(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_declaration(PLANE.replace('upper = ["1", "0", "1"]', 'upper = ["1 +", "0", "1"]'))

    def test_unknown_identifier(self):
        """Test that a metric entry naming a codomain coordinate is rejected."""
        with pytest.raises(UnknownIdentifierError) as exc_info:
            parse_declaration(PLANE.replace('upper = ["1", "0", "1"]', 'upper = ["1 + u", "0", "1"]'))
        assert exc_info.value.name == "u"


@pytest.mark.unit
class TestLoadDeclaration:
    """Test reading geometry files from disk."""

    def test_name_is_file_stem(self, temp_directory):
        path = temp_directory / "my_plane.toml"
        path.write_text(PLANE, encoding="utf-8")
        decl = load_declaration(path)
        assert decl.name == "my_plane"
        assert decl.source_text == PLANE

    def test_missing_file(self, temp_directory):
        with pytest.raises(ConfigError) as exc_info:
            load_declaration(temp_directory / "absent.toml")
        assert "cannot read geometry file" in str(exc_info.value)
