"""Affine isometric actions of discrete groups, at desk scale.

The package builds finite, exactly computable models of several actions
on trees, hyperbolic discs, R-trees, and Fock space, together with the
scalar cocycles they induce, and ships a registry of verification
suites (:mod:`isoact.suites`) that check the defining identities of
each construction.  ``isoact run --suite <name>`` drives the suites
from the command line with deterministic, byte-stable reports.

Exact arithmetic (``fractions.Fraction``, :class:`isoact.exact.QComplex`)
is used wherever an identity holds on the nose; floating point appears
only where a construction is genuinely analytic, always with an
explicit tolerance.
"""

from .errors import (
    BranchGuard,
    ConfigError,
    ConstraintViolation,
    IllConditionedPhi,
    IoError,
    IsoactError,
    VertexNotFound,
    WindowTooSmall,
)
from .exact import QComplex
from .groups import FiniteMeasure, FreeWord, SpMatrix, SuMatrix
from .report import Report, SuiteConfig
from .suites import resolve_config, run_suite, suite_names
from .treeball import TreeBall

__version__ = "0.1.0"

__all__ = [
    "BranchGuard",
    "ConfigError",
    "ConstraintViolation",
    "FiniteMeasure",
    "FreeWord",
    "IllConditionedPhi",
    "IoError",
    "IsoactError",
    "QComplex",
    "Report",
    "SpMatrix",
    "SuMatrix",
    "SuiteConfig",
    "TreeBall",
    "VertexNotFound",
    "WindowTooSmall",
    "resolve_config",
    "run_suite",
    "suite_names",
    "__version__",
]
