"""Frequency grids, sampling, error profiles and spectral comparisons."""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .exceptions import DegeneracyError, DomainError, EvaluationError
from .loewner import FrequencySample

__all__ = [
    "FrequencyGrid",
    "ErrorProfile",
    "InterlaceReport",
    "PoleMatch",
    "log_grid",
    "sample",
    "sample_values",
    "error_profile",
    "ratio_summary",
    "reduced_poles",
    "reduced_zeros",
    "interlace_report",
    "match_poles",
    "matched_pole_pairs",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Logarithmically spaced points ``j * 10**e`` on the imaginary axis."""

    points: np.ndarray
    lo_exp: float
    hi_exp: float
    count: int
    spacing: str = "logarithmic"

    @property
    def omega(self):
        return self.points.imag

    def to_dict(self):
        return {"lo_exp": self.lo_exp, "hi_exp": self.hi_exp, "count": self.count, "spacing": self.spacing}


@dataclass(frozen=True)
class ErrorProfile:
    """Pointwise error of ``b`` against the reference ``a``.

    Where the reference vanishes the relative error falls back to the
    absolute error and ``zero_reference`` is set.
    """

    grid: FrequencyGrid
    abs_err: np.ndarray
    rel_err: np.ndarray
    max_rel: float
    median_rel: float
    zero_reference: np.ndarray


class InterlaceReport(NamedTuple):
    ok: bool
    first_violation: Optional[int]


class PoleMatch(NamedTuple):
    reference: int
    candidate: int
    rel_distance: float


def log_grid(lo_exp, hi_exp, count):
    """``count`` points ``j * 10**(lo + k (hi - lo) / (count - 1))``."""
    if not (np.isfinite(lo_exp) and np.isfinite(hi_exp)) or not lo_exp < hi_exp:
        raise DomainError(f"need lo_exp < hi_exp, got {lo_exp}, {hi_exp}")
    if int(count) != count or count < 2:
        raise DomainError(f"count must be an integer >= 2, got {count!r}")
    count = int(count)
    exps = lo_exp + np.arange(count) * ((hi_exp - lo_exp) / (count - 1))
    return FrequencyGrid(points=1j * 10.0**exps, lo_exp=float(lo_exp), hi_exp=float(hi_exp), count=count)


def _points(grid):
    return grid.points if isinstance(grid, FrequencyGrid) else np.asarray(grid, dtype=complex).reshape(-1)


def _evaluate(evaluator, points):
    try:
        values = np.asarray(evaluator(points), dtype=complex).reshape(-1)
    except Exception as exc:
        if isinstance(exc, EvaluationError) and exc.point is not None:
            raise
        for z in points:
            try:
                evaluator(np.array([z]))
            except Exception as inner:
                raise EvaluationError(f"evaluation failed at s = {z}: {inner}", point=z) from inner
        raise
    if values.shape != points.shape:
        raise EvaluationError(f"evaluator returned {values.shape[0]} values for {points.shape[0]} points")
    return values


def sample_values(evaluator, grid, n_jobs=1):
    """Evaluate a vectorized transfer function on a grid, as an array.

    With ``n_jobs > 1`` the grid is split into contiguous chunks evaluated
    on a thread pool; the evaluator must be thread safe.
    """
    points = _points(grid)
    if n_jobs is None or n_jobs <= 1 or len(points) < 2 * n_jobs:
        return _evaluate(evaluator, points)
    chunks = np.array_split(points, n_jobs)
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        parts = list(pool.map(lambda c: _evaluate(evaluator, c), chunks))
    return np.concatenate(parts)


def sample(evaluator, grid, n_jobs=1):
    """Evaluate on a grid and return a list of :class:`FrequencySample`."""
    points = _points(grid)
    values = sample_values(evaluator, points, n_jobs=n_jobs)
    return [FrequencySample(complex(z), complex(h)) for z, h in zip(points, values)]


def error_profile(eval_a, eval_b, grid):
    """Absolute and relative error of ``eval_b`` against the reference ``eval_a``."""
    points = _points(grid)
    if not isinstance(grid, FrequencyGrid):
        grid = FrequencyGrid(points, np.nan, np.nan, len(points), spacing="explicit")
    a = sample_values(eval_a, points)
    b = sample_values(eval_b, points)
    abs_err = np.abs(a - b)
    mag = np.abs(a)
    zero = mag == 0
    rel = np.where(zero, abs_err, abs_err / np.where(zero, 1.0, mag))
    return ErrorProfile(
        grid=grid,
        abs_err=abs_err,
        rel_err=rel,
        max_rel=float(np.max(rel)),
        median_rel=float(np.median(rel)),
        zero_reference=zero,
    )


def ratio_summary(numerator, denominator):
    """Min, median and max of the pointwise ratio of two relative-error profiles."""
    ratio = numerator.rel_err / denominator.rel_err
    return {"min": float(np.min(ratio)), "median": float(np.median(ratio)), "max": float(np.max(ratio))}


def _sort_spectrum(values):
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.real, values.imag, np.abs(values.imag)))
    return values[order]


def reduced_poles(model, cond_limit=1e12):
    """Finite eigenvalues of the pencil ``(A, E)``, sorted by ``|Im|``.

    ``E^{-1} A`` is used when ``E`` is well conditioned; otherwise the
    generalized eigenproblem is solved and infinite eigenvalues dropped.
    """
    E, A = model.Ehat, model.Ahat
    if np.linalg.cond(E) < cond_limit:
        poles = np.linalg.eigvals(np.linalg.solve(E, A))
    else:
        alpha, beta = scipy.linalg.eigvals(A, E, homogeneous_eigvals=True)
        poles = _finite_ratio(alpha, beta, np.linalg.norm(A), np.linalg.norm(E))
    if not np.all(np.isfinite(poles)):
        raise DegeneracyError("pole computation produced non-finite values")
    return _sort_spectrum(poles)


def _finite_ratio(alpha, beta, norm_s, norm_t, rtol=1e-10):
    eps = np.finfo(float).eps
    indeterminate = (np.abs(alpha) <= 100 * eps * norm_s) & (np.abs(beta) <= 100 * eps * norm_t)
    if np.any(indeterminate):
        warnings.warn(f"{int(indeterminate.sum())} indeterminate generalized eigenvalue(s) discarded", stacklevel=3)
    finite = ~indeterminate & (np.abs(beta) * norm_s > rtol * np.abs(alpha) * norm_t)
    return alpha[finite] / beta[finite]


def reduced_zeros(model):
    """Finite transmission zeros from the bordered pencil.

    Solves ``[[A, B], [C, D]] x = z [[E, 0], [0, 0]] x``; infinite
    eigenvalues are discarded and indeterminate ones (``0/0``) reported
    through a warning.
    """
    E, A = model.Ehat, model.Ahat
    r = E.shape[0]
    dtype = np.result_type(E, A, model.Bhat, model.Chat, model.Dhat)
    S = np.zeros((r + 1, r + 1), dtype=dtype)
    S[:r, :r] = A
    S[:r, r] = model.Bhat
    S[r, :r] = model.Chat
    S[r, r] = model.Dhat
    T = np.zeros_like(S)
    T[:r, :r] = E
    alpha, beta = scipy.linalg.eigvals(S, T, homogeneous_eigvals=True)
    zeros = _finite_ratio(alpha, beta, np.linalg.norm(S), np.linalg.norm(T))
    return _sort_spectrum(zeros)


def interlace_report(spectrum):
    """Check ``a_k < g_k < a_{k+1}`` over every available index.

    ``first_violation`` is the 1-based mode index of the first failure.
    """
    alphas = np.asarray(spectrum.alphas)
    gammas = np.asarray(spectrum.gammas)
    if len(alphas) < 2:
        raise DomainError("interlacing needs at least two alpha roots")
    for k in range(min(len(gammas), len(alphas))):
        if not alphas[k] < gammas[k]:
            return InterlaceReport(False, k + 1)
        if k + 1 < len(alphas) and not gammas[k] < alphas[k + 1]:
            return InterlaceReport(False, k + 1)
    return InterlaceReport(True, None)


def match_poles(reference, candidates):
    """Greedy nearest-neighbour pairing by relative distance.

    Repeatedly pairs the globally closest unpaired ``(reference,
    candidate)`` couple, with distance ``|c - r| / |r|``.  Returns one
    :class:`PoleMatch` per paired reference pole, ordered by reference index.
    """
    ref = np.asarray(reference, dtype=complex)
    cand = np.asarray(candidates, dtype=complex)
    scale = np.where(np.abs(ref) == 0, 1.0, np.abs(ref))
    dist = np.abs(cand[None, :] - ref[:, None]) / scale[:, None]
    matches = []
    flat = np.argsort(dist, axis=None, kind="stable")
    used_r = np.zeros(len(ref), dtype=bool)
    used_c = np.zeros(len(cand), dtype=bool)
    for idx in flat:
        i, j = divmod(int(idx), len(cand))
        if used_r[i] or used_c[j]:
            continue
        used_r[i] = used_c[j] = True
        matches.append(PoleMatch(i, j, float(dist[i, j])))
        if used_r.all() or used_c.all():
            break
    return sorted(matches)


def matched_pole_pairs(pairs, candidates, rtol):
    """Which conjugate pairs have both members matched within ``rtol``.

    ``pairs`` has shape (n, 2).  Returns a boolean array of length n and
    the underlying :class:`PoleMatch` list.
    """
    pairs = np.asarray(pairs, dtype=complex)
    matches = match_poles(pairs.reshape(-1), candidates)
    ok = np.zeros(pairs.size, dtype=bool)
    for m in matches:
        ok[m.reference] = m.rel_distance <= rtol
    return ok.reshape(pairs.shape).all(axis=1), matches
