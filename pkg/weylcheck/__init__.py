"""
weylcheck: numerical verification of harmonic morphisms and twistorial maps
between Weyl spaces.

Geometries are declared in TOML (a chart, a metric representative and a Lee
form, optionally a map into a second Weyl space, an almost complex structure
or a distribution); named tasks sample the chart and evaluate the relevant
tensor identities, returning verdict reports under a relative tolerance.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

__version__ = "1.0.0"

from .config import RunSettings, load_config
from .declarations import GeometryDeclaration, load_declaration, parse_declaration
from .errors import ConfigError, GeometryError, PreconditionError, WeylCheckError
from .reporting import VerdictReport
from .tasks import IDENTITIES, TASKS, applicable_tasks, run_identity, run_task, run_tasks

__all__ = [
    "__version__",
    "RunSettings",
    "load_config",
    "GeometryDeclaration",
    "load_declaration",
    "parse_declaration",
    "ConfigError",
    "GeometryError",
    "PreconditionError",
    "WeylCheckError",
    "VerdictReport",
    "IDENTITIES",
    "TASKS",
    "applicable_tasks",
    "run_identity",
    "run_task",
    "run_tasks",
]
