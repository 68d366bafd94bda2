#!/usr/bin/env python3
"""
Error hierarchy for the Weyl-space verification engine.

Every error carries the process exit code the command line front end uses
when the error escapes a run: 2 for configuration and expression problems,
3 for geometry problems found while evaluating at sample points.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

from typing import Any, Optional, Sequence

import numpy as np


EXIT_TASK_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_GEOMETRY_ERROR = 3


def _format_point(point: Optional[Sequence[float]]) -> str:
    if point is None:
        return "?"
    return "(" + ", ".join(f"{float(v):.6g}" for v in np.ravel(point)) + ")"


class WeylCheckError(Exception):
    """Base class for all engine errors."""

    exit_code = EXIT_CONFIG_ERROR


class ConfigError(WeylCheckError):
    """Malformed settings, geometry files, or an unknown task name."""


class ExpressionSyntaxError(WeylCheckError):
    """Expression text that the grammar rejects."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownIdentifierError(WeylCheckError):
    """A name that is neither a chart coordinate nor a reserved constant."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}' at offset {position}")
        self.name = name
        self.position = position


class ArityError(WeylCheckError):
    """A reserved function called with the wrong number of arguments."""

    def __init__(self, function: str, count: int, position: int = 0):
        super().__init__(f"function '{function}' takes 1 argument, got {count} (offset {position})")
        self.function = function
        self.count = count
        self.position = position


class GeometryError(WeylCheckError):
    """Base class for failures detected while evaluating at a point."""

    exit_code = EXIT_GEOMETRY_ERROR

    def __init__(self, message: str, point: Any = None):
        super().__init__(f"{message} at x = {_format_point(point)}")
        self.point = point


class DomainError(GeometryError):
    """Expression evaluated outside its domain (log/sqrt of non-positive, division by zero)."""

    def __init__(self, node: str, point: Any = None):
        super().__init__(f"domain error in '{node}'", point)
        self.node = node


class DegenerateMetricError(GeometryError):
    def __init__(self, point: Any, det: float):
        super().__init__(f"degenerate metric (det g = {det:.3e})", point)
        self.det = det


class DegenerateDistributionError(GeometryError):
    def __init__(self, point: Any, gram_det: float, what: str = "distribution"):
        super().__init__(f"degenerate {what} (Gram determinant {gram_det:.3e})", point)
        self.gram_det = gram_det


class RankError(GeometryError):
    def __init__(self, point: Any, rank: int, expected: int):
        super().__init__(f"differential has rank {rank}, expected {expected}", point)
        self.rank = rank
        self.expected = expected


class PreconditionError(GeometryError):
    """An operation was handed data violating its stated precondition."""

    def __init__(self, check: str, point: Any = None):
        super().__init__(f"precondition failed: {check}", point)
        self.check = check


class SamplingError(WeylCheckError):
    """Too few sample points survived the nondegeneracy and regularity filters."""

    exit_code = EXIT_GEOMETRY_ERROR

    def __init__(self, accepted: int, requested: int):
        super().__init__(
            f"only {accepted} of {requested} sample points accepted (need at least {requested / 2:g})"
        )
        self.accepted = accepted
        self.requested = requested
