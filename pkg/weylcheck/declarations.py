#!/usr/bin/env python3
"""
Geometry files: TOML declarations of a Weyl space, optionally a map into a
second Weyl space, and the auxiliary data some checks need.

Sections:
    [chart]             coords, box, orientation (optional dim for a cross-check)
    [metric]            upper: row-major upper triangle of expression strings
    [lee_form]          components (default zero)
    [weyl.codomain]     coords, box, orientation, metric, lee_form, complex_structure
    [map]               components, expressions in the domain coordinates
    [distribution]      fields: spanning vector fields of an explicit distribution
    [complex_structure] rows: J^i_j on the domain
    [gauduchon_tod]     k: the weight -1 function of a Gauduchon-Tod structure
    [identity]          functions: test functions on the codomain for the chain rule
    [run]               points, seed, tol, workers, tasks

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .config import DEFAULT_FLOOR
from .errors import ConfigError
from .expr import BinOp, Expr, as_expression
from .geometry import Chart, DistributionSpec, MapSpec, WeylStructure, regauge
from .hermitian import AlmostComplexField


logger = logging.getLogger(__name__)

SECTIONS = (
    "chart", "metric", "lee_form", "weyl", "map", "distribution", "complex_structure",
    "gauduchon_tod", "identity", "run",
)
RUN_KEYS = {"points": int, "seed": int, "tol": float, "workers": int, "tasks": list}


@dataclass(frozen=True, eq=False)
class GeometryDeclaration:
    """
    Everything a geometry file declares, built into engine objects.

    Attributes:
        name (str): Declaration name (the file stem for files on disk).
        domain (WeylStructure): The Weyl space M.
        codomain (Optional[WeylStructure]): The Weyl space N, if declared.
        phi (Optional[MapSpec]): The map M -> N, if declared.
        distribution (Optional[DistributionSpec]): An explicit distribution on M.
        complex_structure (Optional[AlmostComplexField]): J on M.
        codomain_complex_structure (Optional[AlmostComplexField]): J on N.
        k (Optional[Expr]): Gauduchon-Tod function.
        identity_functions (Tuple[Expr, ...]): Codomain test functions.
        run (Dict[str, Any]): The validated ``[run]`` table.
        source_text (str): The file contents.
    """

    name: str
    domain: WeylStructure
    codomain: Optional[WeylStructure] = None
    phi: Optional[MapSpec] = None
    distribution: Optional[DistributionSpec] = None
    complex_structure: Optional[AlmostComplexField] = None
    codomain_complex_structure: Optional[AlmostComplexField] = None
    k: Optional[Expr] = None
    identity_functions: Tuple[Expr, ...] = ()
    run: Dict[str, Any] = field(default_factory=dict)
    source_text: str = ""

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def fibration(self) -> Optional[DistributionSpec]:
        """The explicit distribution if one is declared, otherwise the fibres of the map."""
        if self.distribution is not None:
            return self.distribution
        if self.phi is not None:
            return DistributionSpec.from_map(self.phi)
        return None

    @property
    def tasks(self) -> List[str]:
        return list(self.run.get("tasks", []))

    def reoriented(self, orientation: int) -> "GeometryDeclaration":
        """Rebuild with the domain chart orientation replaced."""
        if orientation == self.domain.chart.orientation:
            return self
        return self._on_domain(self.domain.reoriented(orientation), self.k)

    def _on_domain(self, domain: WeylStructure, k: Optional[Expr]) -> "GeometryDeclaration":
        """Move every domain-bound object onto ``domain`` (same chart coordinates)."""
        phi = self.phi.with_domain(domain) if self.phi is not None else None
        J = self.complex_structure
        if J is not None:
            J = AlmostComplexField(domain, J.rows)
        return replace(self, domain=domain, phi=phi, complex_structure=J, k=k)

    def regauged(self, lam) -> "GeometryDeclaration":
        """
        Rebuild on the domain presented in the gauge g lambda^-2.

        The Weyl connection of the domain is unchanged. The map, the complex
        structure and the distribution fields carry over as they are, and k,
        of weight -1, becomes k lambda.

        Args:
            lam: Positive scaling function (text or AST) of the domain coordinates.

        Returns:
            GeometryDeclaration: The same geometry in the new gauge.
        """
        lam = as_expression(lam, self.domain.coords)
        k = BinOp("*", self.k, lam) if self.k is not None else None
        return self._on_domain(regauge(self.domain, lam), k)


def _table(data: Dict[str, Any], name: str, required: bool = False) -> Dict[str, Any]:
    value = data.get(name)
    if value is None:
        if required:
            raise ConfigError(f"geometry file is missing the [{name}] section")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"[{name}] must be a table")
    return value


def _require(table: Dict[str, Any], key: str, where: str) -> Any:
    if key not in table:
        raise ConfigError(f"[{where}] needs a '{key}' entry")
    return table[key]


def _string_list(value: Any, where: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(v, (str, int, float)) for v in value):
        raise ConfigError(f"{where} must be a list of expression strings")
    return [str(v) for v in value]


def _rows(value: Any, where: str) -> List[List[str]]:
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise ConfigError(f"{where} must be a list of rows")
    return [_string_list(row, where) for row in value]


def _chart(table: Dict[str, Any], where: str, orientation: Optional[int] = None) -> Chart:
    coords = _string_list(_require(table, "coords", where), f"[{where}] coords")
    box = _require(table, "box", where)
    if not isinstance(box, list) or not all(isinstance(b, list) and len(b) == 2 for b in box):
        raise ConfigError(f"[{where}] box must be a list of [low, high] pairs")
    if "dim" in table and table["dim"] != len(coords):
        raise ConfigError(f"[{where}] dim = {table['dim']} but {len(coords)} coordinates are named")
    declared = table.get("orientation", 1)
    return Chart(tuple(coords), tuple(tuple(b) for b in box), orientation if orientation is not None else declared)


def _structure(chart: Chart, metric: Any, lee: Any, where: str, floor: float) -> WeylStructure:
    upper = _string_list(metric, f"{where} metric")
    lee_form = _string_list(lee, f"{where} lee_form") if lee is not None else None
    return WeylStructure.build(chart, upper, lee_form, floor)


def _run_table(table: Dict[str, Any]) -> Dict[str, Any]:
    unknown = sorted(set(table) - set(RUN_KEYS))
    if unknown:
        raise ConfigError(f"unknown [run] keys: {', '.join(unknown)}")
    run = {}
    for key, kind in RUN_KEYS.items():
        if key not in table:
            continue
        value = table[key]
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind) or isinstance(value, bool):
            raise ConfigError(f"[run] {key} must be of type {kind.__name__}")
        run[key] = value
    if "tasks" in run:
        run["tasks"] = [str(t) for t in run["tasks"]]
    return run


def parse_declaration(text: str, name: str = "geometry", floor: float = DEFAULT_FLOOR,
                      orientation: Optional[int] = None) -> GeometryDeclaration:
    """
    Parse geometry-file text.

    Args:
        text (str): TOML contents.
        name (str): Name for reports.
        floor (float): Nondegeneracy floor for the metrics.
        orientation (Optional[int]): Override of the domain chart orientation.

    Returns:
        GeometryDeclaration: The built declaration.

    Raises:
        ConfigError: Malformed TOML, missing sections or inconsistent data.
        ExpressionSyntaxError: An expression string does not parse.
        UnknownIdentifierError: An expression uses a name outside its chart.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{name}: invalid TOML: {e}") from e

    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ConfigError(f"{name}: unknown sections {', '.join(unknown)}; expected {', '.join(SECTIONS)}")

    chart = _chart(_table(data, "chart", required=True), "chart", orientation)
    metric = _require(_table(data, "metric", required=True), "upper", "metric")
    lee = _table(data, "lee_form").get("components")
    domain = _structure(chart, metric, lee, "[metric]", floor)

    codomain = None
    codomain_J = None
    codomain_table = _table(_table(data, "weyl"), "codomain")
    if codomain_table:
        cochart = _chart(codomain_table, "weyl.codomain")
        codomain = _structure(cochart, _require(codomain_table, "metric", "weyl.codomain"),
                              codomain_table.get("lee_form"), "[weyl.codomain]", floor)
        if "complex_structure" in codomain_table:
            codomain_J = AlmostComplexField.from_rows(
                codomain, _rows(codomain_table["complex_structure"], "[weyl.codomain] complex_structure"))

    phi = None
    map_table = _table(data, "map")
    if map_table:
        if codomain is None:
            raise ConfigError(f"{name}: [map] needs a [weyl.codomain] section")
        phi = MapSpec.build(domain, codomain, _string_list(_require(map_table, "components", "map"),
                                                           "[map] components"))

    distribution = None
    dist_table = _table(data, "distribution")
    if dist_table:
        distribution = DistributionSpec.explicit(domain, _rows(_require(dist_table, "fields", "distribution"),
                                                               "[distribution] fields"))

    J = None
    j_table = _table(data, "complex_structure")
    if j_table:
        J = AlmostComplexField.from_rows(domain, _rows(_require(j_table, "rows", "complex_structure"),
                                                       "[complex_structure] rows"))

    k = None
    gt_table = _table(data, "gauduchon_tod")
    if gt_table:
        k = as_expression(str(_require(gt_table, "k", "gauduchon_tod")), domain.coords)

    functions: Tuple[Expr, ...] = ()
    identity_table = _table(data, "identity")
    if identity_table:
        if codomain is None:
            raise ConfigError(f"{name}: [identity] functions live on the codomain; declare [weyl.codomain]")
        raw = _string_list(_require(identity_table, "functions", "identity"), "[identity] functions")
        functions = tuple(as_expression(f, codomain.coords) for f in raw)

    run = _run_table(_table(data, "run"))
    logger.debug("parsed %s: dim %d, map %s, tasks %s", name, domain.dim, phi is not None, run.get("tasks"))
    return GeometryDeclaration(
        name=name,
        domain=domain,
        codomain=codomain,
        phi=phi,
        distribution=distribution,
        complex_structure=J,
        codomain_complex_structure=codomain_J,
        k=k,
        identity_functions=functions,
        run=run,
        source_text=text,
    )


def load_declaration(path, floor: float = DEFAULT_FLOOR, orientation: Optional[int] = None) -> GeometryDeclaration:
    """
    Read and parse a geometry file.

    Raises:
        ConfigError: If the file cannot be read, or as in :func:`parse_declaration`.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read geometry file {path}: {e}") from e
    return parse_declaration(text, path.stem, floor, orientation)

