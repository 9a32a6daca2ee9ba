"""Intersection of three quadrics in six variables.

Thin wrapper over the compiled extension: smoothness checks, explicit
complex lines, realness certificates, parameter scans.
"""

from ._qline import (
    ComplexLine,
    QuadricParams,
    certify,
    check,
    construct_lines,
    evaluate,
    integrability_indicator,
    intersect,
    min_imaginary_norm,
    residuals,
    scan,
    __version__,
)

__all__ = [
    "ComplexLine",
    "QuadricParams",
    "certify",
    "check",
    "construct_lines",
    "evaluate",
    "integrability_indicator",
    "intersect",
    "min_imaginary_norm",
    "residuals",
    "scan",
    "__version__",
]
