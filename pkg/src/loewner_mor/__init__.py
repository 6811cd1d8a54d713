"""Loewner-framework model reduction from frequency-response data."""

__version__ = "0.1.0"

from .beam import BeamParams, BeamSpectrum, eval_H_modal, eval_H_orig, spectrum  # noqa: E402
from .estimator import LoewnerInterpolant  # noqa: E402
from .loewner import (  # noqa: E402
    FrequencySample,
    LoewnerPencil,
    ReducedModel,
    TangentialData,
    build_pencil,
    close_under_conjugation,
    eval_reduced,
    partition_samples,
    realify,
    reduce,
    sv_analysis,
)

__all__ = [
    "BeamParams",
    "BeamSpectrum",
    "FrequencySample",
    "LoewnerInterpolant",
    "LoewnerPencil",
    "ReducedModel",
    "TangentialData",
    "build_pencil",
    "close_under_conjugation",
    "eval_H_modal",
    "eval_H_orig",
    "eval_reduced",
    "partition_samples",
    "realify",
    "reduce",
    "spectrum",
    "sv_analysis",
]
