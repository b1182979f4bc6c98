"""Equilibrium shapes of inelastic and elastic hanging cables."""

from .errors import (
    CatenaryError,
    DegenerateSpan,
    DerivativeVanished,
    HeightMismatch,
    InelasticNotSupported,
    InelasticShapeHasNoStretch,
    MaxIterationsExceeded,
    NoSignChange,
    NotSagging,
    OutOfRange,
    Overflow,
    SingularJacobian,
    SolverError,
    TooFewSegments,
    ZeroLengthSegment,
)
from .model import (
    AnchorSpan,
    CableSpec,
    ElasticShape,
    InelasticShape,
    SolveTrace,
    feasible_length,
    make_span,
)
from .rootfind import SolverOptions
from .inelastic import solve_general
from .elastic import solve as solve_elastic
from .sample import CurveSample, Summary, sample_curve, summarize

__all__ = [
    "AnchorSpan", "CableSpec", "ElasticShape", "InelasticShape", "SolveTrace", "SolverOptions",
    "CurveSample", "Summary",
    "make_span", "feasible_length", "solve_general", "solve_elastic", "sample_curve", "summarize",
    "CatenaryError", "DegenerateSpan", "DerivativeVanished", "HeightMismatch",
    "InelasticNotSupported", "InelasticShapeHasNoStretch", "MaxIterationsExceeded",
    "NoSignChange", "NotSagging", "OutOfRange", "Overflow", "SingularJacobian", "SolverError",
    "TooFewSegments", "ZeroLengthSegment",
]
