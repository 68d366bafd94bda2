#!/usr/bin/env python3
"""
Built-in catalog of geometries and maps with their expected verdicts.

Every entry is a complete geometry file (the text ``examples emit`` writes)
together with the verdict each listed task must reproduce under the default
seed and tolerance, and the raw identities that must vanish on it. The test
suite replays every entry as a golden test.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

from .errors import ConfigError


@dataclass(frozen=True)
class CatalogEntry:
    """
    One catalog geometry.

    Attributes:
        name (str): Entry name, also the file stem used by ``examples emit``.
        text (str): Geometry file contents (TOML).
        expected (Dict[str, str]): Task name -> expected verdict.
        identities (Tuple[str, ...]): Identity residuals expected to vanish.
        note (str): Where the geometry comes from and what it exercises.
    """

    name: str
    text: str
    expected: Dict[str, str] = field(default_factory=dict)
    identities: Tuple[str, ...] = ()
    note: str = ""

    @property
    def filename(self) -> str:
        return f"{self.name}.toml"


_EUCLIDEAN_R2 = """\
# Flat plane.
[chart]
coords = ["x1", "x2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "1"]

[run]
tasks = ["weyl_connection"]
"""

_EUCLIDEAN_R3 = """\
# Flat 3-space with the coordinate line field x1 and the trivial Gauduchon-Tod section.
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "1", "0", "1"]

[distribution]
fields = [["1", "0", "0"]]

[gauduchon_tod]
k = "0"

[run]
tasks = ["weyl_connection", "einstein_weyl", "minimal_weyl", "minimal_weyl_faraday",
         "gauduchon_tod", "gt_connection_flat", "ricci_horizontal"]
"""

_EUCLIDEAN_R4 = """\
# Flat 4-space with its standard complex structure and the coordinate line field x4.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[distribution]
fields = [["0", "0", "0", "1"]]

[complex_structure]
rows = [["0", "-1", "0", "0"],
        ["1", "0", "0", "0"],
        ["0", "0", "0", "-1"],
        ["0", "0", "1", "0"]]

[run]
tasks = ["weyl_connection", "einstein_weyl", "asd", "nijenhuis", "hermitian_weyl", "remark33",
         "minimal_weyl", "minimal_weyl_faraday"]
"""

_SPHERE_REP_R3 = """\
# Round unit 3-sphere in stereographic coordinates.
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["4/(1 + x1^2 + x2^2 + x3^2)^2", "0", "0",
         "4/(1 + x1^2 + x2^2 + x3^2)^2", "0",
         "4/(1 + x1^2 + x2^2 + x3^2)^2"]

[run]
tasks = ["weyl_connection", "einstein_weyl"]
"""

_SPHERE_REP_R4 = """\
# Round unit 4-sphere in stereographic coordinates, with the standard complex structure.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2", "0", "0", "0",
         "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2", "0", "0",
         "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2", "0",
         "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2"]

[complex_structure]
rows = [["0", "-1", "0", "0"],
        ["1", "0", "0", "0"],
        ["0", "0", "0", "-1"],
        ["0", "0", "1", "0"]]

[run]
tasks = ["weyl_connection", "einstein_weyl", "asd", "nijenhuis", "hermitian_weyl", "remark33"]
"""

_PRODUCT_R3_R2 = """\
# Orthogonal projection of flat 3-space onto a plane.
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "1", "0", "1"]

[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "1"]

[map]
components = ["x1", "x2"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2 + sin(y1)"]

[run]
tasks = ["morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee", "twistorial_3to2",
         "ricci_horizontal"]
"""

_PRODUCT_R4_R3 = """\
# Orthogonal projection of flat 4-space onto 3-space.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[weyl.codomain]
coords = ["y1", "y2", "y3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "0", "1", "0", "1"]

[map]
components = ["x1", "x2", "x3"]

[identity]
functions = ["y1^2 - y3^2", "y1*y2*y3", "exp(y2)"]

[run]
tasks = ["asd", "morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee", "twistorial_4to3",
         "thm44a", "extract_k", "geodesic_fibres", "prop56", "lemma55", "ricci_horizontal"]
"""

_PRODUCT_R4_R2 = """\
# Orthogonal projection of flat 4-space onto a plane.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "1"]

[map]
components = ["x1", "x2"]

[identity]
functions = ["y1^2 - y2^2", "cos(y1)*y2"]

[run]
tasks = ["morphism", "theorem23", "fuglede_ishihara", "twistorial_4to2", "umbilic_fibres", "prop311",
         "prop56"]
"""

_SPHERE_LINE_PRODUCT = """\
# Round 2-sphere times a line, projected onto the sphere factor.
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["4/(1 + x1^2 + x2^2)^2", "0", "0", "4/(1 + x1^2 + x2^2)^2", "0", "1"]

[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["4/(1 + y1^2 + y2^2)^2", "0", "4/(1 + y1^2 + y2^2)^2"]

[map]
components = ["x1", "x2"]

[identity]
functions = ["y1*y2", "y1^3"]

[run]
tasks = ["einstein_weyl", "morphism", "theorem23", "required_codomain_lee", "twistorial_3to2",
         "ricci_horizontal"]
"""

_GH_CHART = """\
[chart]
coords = ["x1", "x2", "x3", "t"]
box = [[0.5, 1.5], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

# h (dx1^2 + dx2^2 + dx3^2) + (dt + x2 dx3)^2 / h with h = 1 + x1
[metric]
upper = ["1 + x1", "0", "0", "0",
         "1 + x1", "0", "0",
         "(1 + x1) + x2^2/(1 + x1)", "x2/(1 + x1)",
         "1/(1 + x1)"]
"""

_GIBBONS_HAWKING = """\
# Gibbons-Hawking space over the harmonic function h = 1 + x1, projected along the circle direction t.
""" + _GH_CHART + """
[weyl.codomain]
coords = ["y1", "y2", "y3"]
box = [[0.5, 1.5], [-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "0", "1", "0", "1"]

[map]
components = ["x1", "x2", "x3"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2*y3", "sin(y3)*y1"]

[run]
tasks = ["weyl_connection", "einstein_weyl", "asd", "morphism", "theorem23", "fuglede_ishihara",
         "required_codomain_lee", "twistorial_4to3", "thm44a", "extract_k", "geodesic_fibres", "prop56",
         "lemma55", "ricci_horizontal", "minimal_weyl_faraday"]
"""

_GIBBONS_HAWKING_QUOTIENT = """\
# Gibbons-Hawking space (h = 1 + x1) mapped holomorphically onto the (x2, x3)-plane.
""" + _GH_CHART + """
# Kähler structure with form dx1 ^ (dt + x2 dx3) + h dx2 ^ dx3
[complex_structure]
rows = [["0", "0", "-x2/(1 + x1)", "-1/(1 + x1)"],
        ["0", "0", "-1", "0"],
        ["0", "1", "0", "0"],
        ["1 + x1", "-x2", "0", "0"]]

[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "1"]
complex_structure = [["0", "-1"], ["1", "0"]]

[map]
components = ["x2", "x3"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2"]

[run]
tasks = ["morphism", "theorem23", "fuglede_ishihara", "holomorphic", "nijenhuis", "hermitian_weyl",
         "prop35", "prop311", "twistorial_4to2"]
"""

_KILLING_DOMAIN = """\
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[0.2, 1.0], [0.2, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[map]
components = ["sqrt(x1^2 + x2^2)", "x3", "x4"]

[identity]
functions = ["y1^2 + y2", "y2*y3"]
"""

_KILLING_ROTATION = """\
# Orbit map of the rotation field x1 d/dx2 - x2 d/dx1 on flat 4-space; the codomain
# carries the Weyl structure with Lee form dr/r that makes it a harmonic morphism.
""" + _KILLING_DOMAIN + """
[weyl.codomain]
coords = ["y1", "y2", "y3"]
box = [[0.2, 1.5], [-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "0", "1", "0", "1"]
lee_form = ["1/y1", "0", "0"]

[run]
tasks = ["asd", "morphism", "theorem23", "required_codomain_lee", "twistorial_4to3", "thm44a", "extract_k",
         "geodesic_fibres", "prop56", "lemma55", "ricci_horizontal", "minimal_weyl_faraday"]
"""

_KILLING_ROTATION_FLAT = """\
# The rotation orbit map with a flat codomain: harmonic only once the codomain Lee form is dr/r.
""" + _KILLING_DOMAIN + """
[weyl.codomain]
coords = ["y1", "y2", "y3"]
box = [[0.2, 1.5], [-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "0", "1", "0", "1"]

[run]
tasks = ["asd", "morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee", "twistorial_4to3",
         "thm44a"]
"""

_HOPF_TYPE = """\
# Hopf-type quadratic map (|z1|^2 - |z2|^2, 2 z1 conj(z2)) from flat 4-space, with square dilation 4|x|^2.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[0.5, 1.0], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[weyl.codomain]
coords = ["y1", "y2", "y3"]
box = [[-2.0, 2.0], [-2.0, 2.0], [-2.0, 2.0]]
metric = ["1", "0", "0", "1", "0", "1"]

[map]
components = ["x1^2 + x2^2 - x3^2 - x4^2", "2*(x1*x3 + x2*x4)", "2*(x2*x3 - x1*x4)"]

[identity]
functions = ["y1^2 - y2^2", "y1*y3 + y2"]

[run]
tasks = ["asd", "morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee", "thm44a",
         "geodesic_fibres", "prop56", "lemma55"]
"""

_FLAT_R4_HERMITIAN = """\
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [{box}]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[complex_structure]
rows = [["0", "-1", "0", "0"],
        ["1", "0", "0", "0"],
        ["0", "0", "0", "-1"],
        ["0", "0", "1", "0"]]
"""

_HOPF_QUOTIENT = """\
# The quotient z1/z2 from flat 4-space to the plane; fibres are complex lines through the origin.
""" + _FLAT_R4_HERMITIAN.format(box="[-0.5, 0.5], [-0.5, 0.5], [0.5, 1.0], [0.5, 1.0]") + """
[weyl.codomain]
coords = ["y1", "y2"]
box = [[-2.0, 2.0], [-2.0, 2.0]]
metric = ["1", "0", "1"]
complex_structure = [["0", "-1"], ["1", "0"]]

[map]
components = ["(x1*x3 + x2*x4)/(x3^2 + x4^2)", "(x2*x3 - x1*x4)/(x3^2 + x4^2)"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2"]

[run]
tasks = ["morphism", "theorem23", "fuglede_ishihara", "holomorphic", "nijenhuis", "hermitian_weyl",
         "prop35", "twistorial_4to2", "umbilic_fibres", "prop311", "prop56"]
"""

_COMPLEX_PRODUCT = """\
# The product z1 z2 from flat 4-space to the plane; fibres are minimal but not umbilical.
""" + _FLAT_R4_HERMITIAN.format(box="[0.5, 1.0], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]") + """
[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "1"]
complex_structure = [["0", "-1"], ["1", "0"]]

[map]
components = ["x1*x3 - x2*x4", "x1*x4 + x2*x3"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2"]

[run]
tasks = ["morphism", "theorem23", "fuglede_ishihara", "holomorphic", "nijenhuis", "prop35",
         "twistorial_4to2", "umbilic_fibres", "prop311", "prop56"]
"""

_TWISTED_J = """\
# Flat 4-space with the non-integrable structure cos(x1) I + sin(x1) K.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[complex_structure]
rows = [["0", "-cos(x1)", "-sin(x1)", "0"],
        ["cos(x1)", "0", "0", "sin(x1)"],
        ["sin(x1)", "0", "0", "-cos(x1)"],
        ["0", "-sin(x1)", "cos(x1)", "0"]]

[run]
tasks = ["weyl_connection", "asd", "nijenhuis", "hermitian_weyl", "remark33"]
"""

_TWISTED_FIBRATION = """\
# dx1^2 + (dx3 - x4 dx1)^2 + dx2^2 + dx4^2 projected to (x1, x2): a Riemannian submersion
# with minimal, non-umbilical fibres whose induced structure is not integrable.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1 + x4^2", "0", "-x4", "0", "1", "0", "0", "1", "0", "1"]

[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "1"]

[map]
components = ["x1", "x2"]

[identity]
functions = ["y1*y2", "y1^2 + y2"]

[run]
tasks = ["morphism", "theorem23", "fuglede_ishihara", "twistorial_4to2", "umbilic_fibres", "prop311"]
"""

_WARPED_LINE_3D = """\
# dx1^2 + dx2^2 + exp(2 x1) dx3^2 projected to (x1, x2): fibres are not geodesics.
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "1", "0", "exp(2*x1)"]

[weyl.codomain]
coords = ["y1", "y2"]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "1"]

[map]
components = ["x1", "x2"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2"]

[run]
tasks = ["einstein_weyl", "morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee",
         "twistorial_3to2", "ricci_horizontal"]
"""

_FLAT_WITH_PARALLEL_LEE = """\
# Flat metric with the parallel Lee form dx1 / 2, projected along x1.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[lee_form]
components = ["0.5", "0", "0", "0"]

[complex_structure]
rows = [["0", "-1", "0", "0"],
        ["1", "0", "0", "0"],
        ["0", "0", "0", "-1"],
        ["0", "0", "1", "0"]]

[weyl.codomain]
coords = ["y1", "y2", "y3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
metric = ["1", "0", "0", "1", "0", "1"]

[map]
components = ["x2", "x3", "x4"]

[identity]
functions = ["y1^2 - y2^2", "y1*y2*y3"]

[run]
tasks = ["weyl_connection", "einstein_weyl", "asd", "nijenhuis", "hermitian_weyl", "morphism", "theorem23",
         "twistorial_4to3", "thm44a"]
"""

_FLAT_WITH_FARADAY = """\
# Flat metric with the Lee form x2 dx1, whose Faraday form -dx1 ^ dx2 does not vanish.
[chart]
coords = ["x1", "x2", "x3", "x4"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["1", "0", "0", "0", "1", "0", "0", "1", "0", "1"]

[lee_form]
components = ["x2", "0", "0", "0"]

[run]
tasks = ["weyl_connection", "einstein_weyl", "asd"]
"""

_GAUDUCHON_TOD_SPHERE = """\
# Round unit 3-sphere with k = 2: scalar curvature 6 = (3/2) k^2.
[chart]
coords = ["x1", "x2", "x3"]
box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
orientation = 1

[metric]
upper = ["4/(1 + x1^2 + x2^2 + x3^2)^2", "0", "0",
         "4/(1 + x1^2 + x2^2 + x3^2)^2", "0",
         "4/(1 + x1^2 + x2^2 + x3^2)^2"]

[gauduchon_tod]
k = "2"

[run]
tasks = ["weyl_connection", "einstein_weyl", "gauduchon_tod", "gt_connection_flat"]
"""


PASS = "pass"
FAIL = "fail"

_MAP_IDENTITIES = ("chain", "fundamental", "trace-b")


def _all_pass(*tasks: str) -> Dict[str, str]:
    return {task: PASS for task in tasks}


_ENTRIES: Tuple[CatalogEntry, ...] = (
    CatalogEntry(
        "euclidean_r2", _EUCLIDEAN_R2, _all_pass("weyl_connection"), (),
        "flat plane; trivially passes",
    ),
    CatalogEntry(
        "euclidean_r3", _EUCLIDEAN_R3,
        _all_pass("weyl_connection", "einstein_weyl", "minimal_weyl", "minimal_weyl_faraday",
                  "gauduchon_tod", "gt_connection_flat", "ricci_horizontal"),
        ("eq13",),
        "flat 3-space; k = 0 is a Gauduchon-Tod section",
    ),
    CatalogEntry(
        "euclidean_r4", _EUCLIDEAN_R4,
        _all_pass("weyl_connection", "einstein_weyl", "asd", "nijenhuis", "hermitian_weyl", "remark33",
                  "minimal_weyl", "minimal_weyl_faraday"),
        ("eq13",),
        "flat 4-space with the standard Kähler structure",
    ),
    CatalogEntry(
        "sphere_rep_r3", _SPHERE_REP_R3, _all_pass("weyl_connection", "einstein_weyl"), ("eq13",),
        "constant curvature 1 in dimension 3",
    ),
    CatalogEntry(
        "sphere_rep_r4", _SPHERE_REP_R4,
        _all_pass("weyl_connection", "einstein_weyl", "asd", "nijenhuis", "hermitian_weyl", "remark33"),
        ("eq13",),
        "constant curvature 1 in dimension 4; conformally flat, so both halves of W vanish",
    ),
    CatalogEntry(
        "product_r3_r2", _PRODUCT_R3_R2,
        _all_pass("morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee", "twistorial_3to2",
                  "ricci_horizontal"),
        _MAP_IDENTITIES,
        "product projection with geodesic fibres",
    ),
    CatalogEntry(
        "product_r4_r3", _PRODUCT_R4_R3,
        _all_pass("asd", "morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee",
                  "twistorial_4to3", "thm44a", "extract_k", "geodesic_fibres", "prop56", "lemma55",
                  "ricci_horizontal"),
        _MAP_IDENTITIES + ("lemma55", "eq41", "eq42"),
        "product projection 4 -> 3; k = 0",
    ),
    CatalogEntry(
        "product_r4_r2", _PRODUCT_R4_R2,
        _all_pass("morphism", "theorem23", "fuglede_ishihara", "twistorial_4to2", "umbilic_fibres", "prop311",
                  "prop56"),
        _MAP_IDENTITIES,
        "product projection 4 -> 2 with totally geodesic fibres",
    ),
    CatalogEntry(
        "sphere_line_product", _SPHERE_LINE_PRODUCT,
        {"einstein_weyl": FAIL, **_all_pass("morphism", "theorem23", "required_codomain_lee", "twistorial_3to2",
                                            "ricci_horizontal")},
        _MAP_IDENTITIES,
        "S^2 x R is not Einstein, but its Ricci tensor is pure trace on the sphere factor",
    ),
    CatalogEntry(
        "gibbons_hawking", _GIBBONS_HAWKING,
        _all_pass("weyl_connection", "einstein_weyl", "asd", "morphism", "theorem23", "fuglede_ishihara",
                  "required_codomain_lee", "twistorial_4to3", "thm44a", "extract_k", "geodesic_fibres",
                  "prop56", "lemma55", "ricci_horizontal", "minimal_weyl_faraday"),
        _MAP_IDENTITIES + ("lemma55", "eq13", "eq41", "eq42"),
        "hyperkähler Gibbons-Hawking space; the projection is a twistorial harmonic morphism",
    ),
    CatalogEntry(
        "gibbons_hawking_quotient", _GIBBONS_HAWKING_QUOTIENT,
        _all_pass("morphism", "theorem23", "fuglede_ishihara", "holomorphic", "nijenhuis", "hermitian_weyl",
                  "prop35", "prop311", "twistorial_4to2"),
        _MAP_IDENTITIES + ("lemma34",),
        "holomorphic quotient of Gibbons-Hawking space with a parallel complex structure",
    ),
    CatalogEntry(
        "killing_rotation", _KILLING_ROTATION,
        {**_all_pass("asd", "morphism", "theorem23", "required_codomain_lee", "thm44a", "geodesic_fibres",
                     "prop56", "lemma55", "ricci_horizontal", "minimal_weyl_faraday"),
         "twistorial_4to3": FAIL, "extract_k": FAIL},
        _MAP_IDENTITIES + ("lemma55", "eq13"),
        "orbits of a Killing field; harmonic morphism only for the codomain Lee form dr/r",
    ),
    CatalogEntry(
        "killing_rotation_flat", _KILLING_ROTATION_FLAT,
        {**_all_pass("asd", "theorem23", "required_codomain_lee", "thm44a"),
         "morphism": FAIL, "fuglede_ishihara": FAIL, "twistorial_4to3": FAIL},
        _MAP_IDENTITIES,
        "negative case: the orbit map into flat 3-space is not harmonic",
    ),
    CatalogEntry(
        "hopf_type", _HOPF_TYPE,
        _all_pass("asd", "morphism", "theorem23", "fuglede_ishihara", "required_codomain_lee", "thm44a",
                  "geodesic_fibres", "prop56", "lemma55"),
        _MAP_IDENTITIES + ("lemma55",),
        "flat 4-space as the Gibbons-Hawking space of 1/(2|y|)",
    ),
    CatalogEntry(
        "hopf_quotient", _HOPF_QUOTIENT,
        _all_pass("morphism", "theorem23", "fuglede_ishihara", "holomorphic", "nijenhuis", "hermitian_weyl",
                  "prop35", "twistorial_4to2", "umbilic_fibres", "prop311", "prop56"),
        _MAP_IDENTITIES + ("lemma34",),
        "holomorphic with totally geodesic fibres: twistorial for both orientations",
    ),
    CatalogEntry(
        "complex_product", _COMPLEX_PRODUCT,
        _all_pass("morphism", "theorem23", "fuglede_ishihara", "holomorphic", "nijenhuis", "prop35",
                  "twistorial_4to2", "umbilic_fibres", "prop311", "prop56"),
        _MAP_IDENTITIES + ("lemma34",),
        "holomorphic with minimal, non-umbilical fibres: twistorial for one orientation only",
    ),
    CatalogEntry(
        "twisted_J", _TWISTED_J,
        {**_all_pass("weyl_connection", "asd", "hermitian_weyl", "remark33"), "nijenhuis": FAIL},
        ("eq13",),
        "non-integrable orthogonal almost complex structure on flat 4-space",
    ),
    CatalogEntry(
        "twisted_fibration", _TWISTED_FIBRATION,
        {**_all_pass("morphism", "theorem23", "fuglede_ishihara", "umbilic_fibres", "prop311"),
         "twistorial_4to2": FAIL},
        _MAP_IDENTITIES,
        "harmonic morphism 4 -> 2 that is twistorial for neither orientation",
    ),
    CatalogEntry(
        "warped_line_3d", _WARPED_LINE_3D,
        {"theorem23": PASS, "einstein_weyl": FAIL, "morphism": FAIL, "fuglede_ishihara": FAIL,
         "required_codomain_lee": FAIL, "twistorial_3to2": FAIL, "ricci_horizontal": FAIL},
        _MAP_IDENTITIES,
        "hyperbolic plane times a line; a Riemannian submersion that is not harmonic",
    ),
    CatalogEntry(
        "flat_with_parallel_lee", _FLAT_WITH_PARALLEL_LEE,
        {**_all_pass("weyl_connection", "asd", "nijenhuis", "hermitian_weyl", "morphism", "theorem23",
                     "twistorial_4to3", "thm44a"),
         "einstein_weyl": FAIL},
        _MAP_IDENTITIES + ("eq13",),
        "exact Lee form dx1/2, vertical for the projection; the metric is not Einstein-Weyl for it",
    ),
    CatalogEntry(
        "flat_with_faraday", _FLAT_WITH_FARADAY,
        {**_all_pass("weyl_connection", "asd"), "einstein_weyl": FAIL},
        ("eq13",),
        "non-closed Lee form; exercises the antisymmetric Ricci part",
    ),
    CatalogEntry(
        "gauduchon_tod_sphere", _GAUDUCHON_TOD_SPHERE,
        _all_pass("weyl_connection", "einstein_weyl", "gauduchon_tod", "gt_connection_flat"),
        ("eq13",),
        "round 3-sphere with k = 2; the auxiliary connection is flat",
    ),
)

_BY_NAME = {e.name: e for e in _ENTRIES}


def catalog() -> Tuple[CatalogEntry, ...]:
    """All catalog entries, in a fixed order."""
    return _ENTRIES


def entry(name: str) -> CatalogEntry:
    """
    Look up one entry by name.

    Raises:
        ConfigError: If no entry has that name.
    """
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ConfigError(f"unknown catalog entry '{name}'; available: {', '.join(_BY_NAME)}") from None


def names() -> Tuple[str, ...]:
    return tuple(_BY_NAME)
