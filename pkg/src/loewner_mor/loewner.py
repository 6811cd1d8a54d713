"""Loewner-matrix construction and SVD-based reduction.

Data are split into right points ``lambda_j`` with values ``w_j`` and left
points ``mu_i`` with values ``v_i``.  The Loewner pencil

    L[i, j]  = (v_i - w_j) / (mu_i - lambda_j)
    Ls[i, j] = (mu_i v_i - lambda_j w_j) / (mu_i - lambda_j)

together with ``V = (v_i)`` and ``W = (w_j)`` is a (possibly singular)
descriptor model of the data.  Projecting onto the dominant singular
subspaces of ``[L, Ls]`` and ``[L; Ls]`` gives a reduced realization
``E = -U* L Z``, ``A = -U* Ls Z``, ``B = U* V``, ``C = W Z``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import DataError, DegeneracyError, DomainError

__all__ = [
    "FrequencySample",
    "TangentialData",
    "LoewnerPencil",
    "SingularValues",
    "ReducedModel",
    "RankWarning",
    "partition_samples",
    "partition_arrays",
    "close_under_conjugation",
    "build_pencil",
    "realify",
    "sv_analysis",
    "select_order",
    "numerical_rank",
    "rank_condition",
    "reduce",
    "eval_reduced",
    "eval_pencil",
]

PARTITION_SCHEMES = ("alternating", "half-split")


class RankWarning(UserWarning):
    """Requested order exceeds the numerical rank of the data."""


class FrequencySample(NamedTuple):
    point: complex
    value: complex


def _check_distinct(points, what):
    if len(np.unique(points)) != len(points):
        seen = set()
        for z in points:
            if z in seen:
                raise DataError(f"duplicate {what} point {z}")
            seen.add(z)


@dataclass(frozen=True)
class TangentialData:
    """Right and left interpolation data of a SISO system.

    Directions are kept for a later MIMO extension and are all ones here.
    """

    right_points: np.ndarray
    right_values: np.ndarray
    left_points: np.ndarray
    left_values: np.ndarray
    right_dirs: np.ndarray = field(default=None)
    left_dirs: np.ndarray = field(default=None)

    def __post_init__(self):
        for name in ("right_points", "right_values", "left_points", "left_values"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex).reshape(-1))
        if len(self.right_points) != len(self.right_values):
            raise DataError("right_points and right_values differ in length")
        if len(self.left_points) != len(self.left_values):
            raise DataError("left_points and left_values differ in length")
        if len(self.right_points) == 0 or len(self.left_points) == 0:
            raise DataError("both partitions need at least one point")
        _check_distinct(self.right_points, "right")
        _check_distinct(self.left_points, "left")
        common = np.intersect1d(self.right_points, self.left_points)
        if common.size:
            raise DataError(f"point {common[0]} appears in both partitions")
        if self.right_dirs is None:
            object.__setattr__(self, "right_dirs", np.ones(len(self.right_points)))
        if self.left_dirs is None:
            object.__setattr__(self, "left_dirs", np.ones(len(self.left_points)))

    @property
    def shape(self):
        """``(nu, rho)``: number of left and right points."""
        return len(self.left_points), len(self.right_points)

    def is_conjugate_closed(self):
        try:
            _pair_blocks(self.right_points, self.right_values)
            _pair_blocks(self.left_points, self.left_values)
        except DataError:
            return False
        return True


@dataclass(frozen=True)
class LoewnerPencil:
    loewner_L: np.ndarray
    shifted_Ls: np.ndarray
    vec_V: np.ndarray
    vec_W: np.ndarray
    source: TangentialData
    is_real: bool = False

    @property
    def shape(self):
        return self.loewner_L.shape


@dataclass(frozen=True)
class SingularValues:
    """Singular values of ``[L, Ls]`` (row) and ``[L; Ls]`` (col), descending."""

    sv_row: np.ndarray
    sv_col: np.ndarray

    @property
    def normalized_row(self):
        return self.sv_row / self.sv_row[0]

    @property
    def normalized_col(self):
        return self.sv_col / self.sv_col[0]


@dataclass(frozen=True)
class ReducedModel:
    """Descriptor realization ``C (sE - A)^{-1} B + D``."""

    Ehat: np.ndarray
    Ahat: np.ndarray
    Bhat: np.ndarray
    Chat: np.ndarray
    Dhat: complex = 0.0
    singular_values: Optional[SingularValues] = None

    @property
    def order(self):
        return self.Ehat.shape[0]

    @property
    def is_real(self):
        return not any(np.iscomplexobj(m) for m in (self.Ehat, self.Ahat, self.Bhat, self.Chat, self.Dhat))

    def __call__(self, s):
        return eval_reduced(self, s)


def partition_samples(samples, scheme="alternating"):
    """Split a sequence of :class:`FrequencySample` into right and left data.

    Samples are ordered by ``|Im s|`` (ties broken by ``Im s`` then ``Re s``).
    ``"alternating"`` sends even positions to the right and odd positions to
    the left; ``"half-split"`` sends the lower half of the band to the right.
    """
    points = [smp.point for smp in samples]
    values = [smp.value for smp in samples]
    return partition_arrays(points, values, scheme)


def partition_arrays(points, values, scheme="alternating"):
    """Array form of :func:`partition_samples`."""
    points = np.asarray(points, dtype=complex).reshape(-1)
    values = np.asarray(values, dtype=complex).reshape(-1)
    if len(points) != len(values):
        raise DataError("points and values differ in length")
    if len(points) < 2:
        raise DataError("at least two samples are required")
    _check_distinct(points, "sample")
    order = np.lexsort((points.real, points.imag, np.abs(points.imag)))
    points, values = points[order], values[order]
    if scheme == "alternating":
        right, left = slice(0, None, 2), slice(1, None, 2)
    elif scheme == "half-split":
        cut = (len(points) + 1) // 2
        right, left = slice(0, cut), slice(cut, None)
    else:
        raise DomainError(f"unknown partition scheme {scheme!r}; expected one of {PARTITION_SCHEMES}")
    return TangentialData(points[right], values[right], points[left], values[left])


def _close(points, values):
    out_p, out_v = [], []
    used = np.zeros(len(points), dtype=bool)
    for i, (z, val) in enumerate(zip(points, values)):
        if used[i]:
            continue
        used[i] = True
        if z.imag == 0:
            if val.imag != 0:
                raise DataError(f"real point {z} carries non-real value {val}")
            out_p.append(z)
            out_v.append(val)
            continue
        partner = np.flatnonzero((points == np.conj(z)) & ~used)
        if partner.size:
            used[partner[0]] = True
        out_p.extend((z, np.conj(z)))
        out_v.extend((val, np.conj(val)))
    return np.array(out_p), np.array(out_v)


def close_under_conjugation(data):
    """Add the conjugate of every complex point to its own partition.

    Conjugate pairs come out adjacent, which :func:`realify` relies on.
    Points whose conjugate is already present are paired, not duplicated.
    """
    rp, rv = _close(data.right_points, data.right_values)
    lp, lv = _close(data.left_points, data.left_values)
    return TangentialData(rp, rv, lp, lv)


def build_pencil(data):
    """Loewner and shifted Loewner matrices of SISO data (unit directions)."""
    lam, w = data.right_points, data.right_values
    mu, v = data.left_points, data.left_values
    den = mu[:, None] - lam[None, :]
    if np.any(den == 0):
        i, j = np.argwhere(den == 0)[0]
        raise DataError(f"left point mu[{i}] = {mu[i]} coincides with right point lambda[{j}] = {lam[j]}")
    L = (v[:, None] - w[None, :]) / den
    Ls = (mu[:, None] * v[:, None] - lam[None, :] * w[None, :]) / den
    return LoewnerPencil(loewner_L=L, shifted_Ls=Ls, vec_V=v.copy(), vec_W=w.copy(), source=data)


def _pair_blocks(points, values):
    """Block sizes (1 for real points, 2 for adjacent conjugate pairs)."""
    blocks = []
    i = 0
    while i < len(points):
        z = points[i]
        if z.imag == 0:
            blocks.append(1)
            i += 1
        elif i + 1 < len(points) and points[i + 1] == np.conj(z) and values[i + 1] == np.conj(values[i]):
            blocks.append(2)
            i += 2
        else:
            raise DataError(f"point {z} is not followed by its conjugate with a conjugate value")
    return blocks


def _unitary_transform(blocks):
    n = sum(blocks)
    T = np.zeros((n, n), dtype=complex)
    pair = np.array([[1, -1j], [1, 1j]]) / np.sqrt(2)
    i = 0
    for size in blocks:
        if size == 1:
            T[i, i] = 1
        else:
            T[i:i + 2, i:i + 2] = pair
        i += size
    return T


def realify(pencil, atol=1e-9):
    """Transform a pencil of conjugate-closed data to real arithmetic.

    Each adjacent conjugate pair is mapped through ``[[1, -j], [1, j]] / sqrt(2)``
    on both sides.  The map is unitary, so transfer values and singular
    values are unchanged.
    """
    if pencil.is_real:
        return pencil
    src = pencil.source
    T_r = _unitary_transform(_pair_blocks(src.right_points, src.right_values))
    T_l = _unitary_transform(_pair_blocks(src.left_points, src.left_values))
    T_lh = T_l.conj().T
    mats = {
        "loewner_L": T_lh @ pencil.loewner_L @ T_r,
        "shifted_Ls": T_lh @ pencil.shifted_Ls @ T_r,
        "vec_V": T_lh @ pencil.vec_V,
        "vec_W": pencil.vec_W @ T_r,
    }
    for name, m in mats.items():
        scale = max(1.0, np.max(np.abs(m)))
        if np.max(np.abs(m.imag)) > atol * scale:
            raise DataError(f"{name} keeps an imaginary part after the real transform")
        mats[name] = np.ascontiguousarray(m.real)
    return LoewnerPencil(source=src, is_real=True, **mats)


def sv_analysis(pencil):
    """Singular values of the horizontal and vertical pencil concatenations."""
    L, Ls = pencil.loewner_L, pencil.shifted_Ls
    return SingularValues(
        sv_row=np.linalg.svd(np.hstack([L, Ls]), compute_uv=False),
        sv_col=np.linalg.svd(np.vstack([L, Ls]), compute_uv=False),
    )


def numerical_rank(sv, tol):
    """Number of singular values with ``sigma_k / sigma_1 >= tol``."""
    sv = np.asarray(sv)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv / sv[0] >= tol))


def select_order(svs, tol=1e-10):
    """Smallest ``r`` with ``sigma_{r+1} / sigma_1 < tol`` in both concatenations."""
    return max(numerical_rank(svs.sv_row, tol), numerical_rank(svs.sv_col, tol), 1)


def rank_condition(pencil, tol=1e-10, points=None):
    """Numerical ranks of ``[L, Ls]``, ``[L; Ls]`` and ``z L - Ls``.

    ``points`` defaults to every interpolation point.  The data admit a
    minimal interpolant of order ``k`` when all ranks equal ``k``.
    """
    svs = sv_analysis(pencil)
    if points is None:
        src = pencil.source
        points = np.concatenate([src.right_points, src.left_points])
    L, Ls = pencil.loewner_L, pencil.shifted_Ls
    pencil_ranks = [numerical_rank(np.linalg.svd(z * L - Ls, compute_uv=False), tol) for z in points]
    return {
        "rank_row": numerical_rank(svs.sv_row, tol),
        "rank_col": numerical_rank(svs.sv_col, tol),
        "rank_pencil": pencil_ranks,
    }


def _default_probe(pencil):
    src = pencil.source
    scale = np.median(np.abs(np.concatenate([src.right_points, src.left_points])))
    if scale == 0:
        scale = 1.0
    # off both axes and off the unit circle, away from typical poles
    return scale * 1.37 * np.exp(2.1j)


def reduce(pencil, order=None, tol=1e-10, rank_tol=None, rank_slack=4, probe=None):
    """Project the Loewner pencil onto its dominant singular subspaces.

    Parameters
    ----------
    pencil : LoewnerPencil
        Usually the output of :func:`realify`; a complex pencil gives a
        complex model.
    order : int, optional
        Reduced order ``r``.  When omitted it is chosen by
        :func:`select_order` with ``tol``.
    tol : float
        Normalized singular value threshold for automatic order selection.
    rank_tol, rank_slack
        A :class:`RankWarning` is issued when ``order`` exceeds the numerical
        rank at ``rank_tol`` (default ``max(shape) * eps``) by more than
        ``rank_slack``.
    probe : complex, optional
        Point at which regularity of the reduced pencil is checked.

    Raises
    ------
    DomainError
        If ``order`` is not in ``1 .. min(nu, rho)``.
    DegeneracyError
        If ``probe * E - A`` is exactly singular or not finite.
    """
    L, Ls = pencil.loewner_L, pencil.shifted_Ls
    nu, rho = L.shape
    U, sv_row, _ = np.linalg.svd(np.hstack([L, Ls]), full_matrices=False)
    _, sv_col, Zh = np.linalg.svd(np.vstack([L, Ls]), full_matrices=False)
    svs = SingularValues(sv_row=sv_row, sv_col=sv_col)
    if order is None:
        order = select_order(svs, tol)
    if int(order) != order or not 1 <= order <= min(nu, rho):
        raise DomainError(f"order must be an integer in [1, {min(nu, rho)}], got {order!r}")
    order = int(order)
    if rank_tol is None:
        rank_tol = max(nu, rho) * np.finfo(float).eps
    rank = min(numerical_rank(sv_row, rank_tol), numerical_rank(sv_col, rank_tol))
    if order > rank + rank_slack:
        warnings.warn(
            f"order {order} exceeds the numerical rank {rank} of the data by more than {rank_slack}",
            RankWarning,
            stacklevel=2,
        )
    Ur = U[:, :order]
    Zr = Zh[:order].conj().T
    Urh = Ur.conj().T
    model = ReducedModel(
        Ehat=-Urh @ L @ Zr,
        Ahat=-Urh @ Ls @ Zr,
        Bhat=Urh @ pencil.vec_V,
        Chat=pencil.vec_W @ Zr,
        Dhat=0.0,
        singular_values=svs,
    )
    zeta = _default_probe(pencil) if probe is None else probe
    # noise directions kept beyond the numerical rank make the pencil
    # ill-conditioned but still usable; only exact singularity is an error
    smin = np.linalg.svd(zeta * model.Ehat - model.Ahat, compute_uv=False)[-1]
    if not np.isfinite(smin) or smin == 0:
        raise DegeneracyError(
            f"reduced pencil of order {order} is singular at probe {zeta:.6g}; try a smaller order"
        )
    return model


def _batched_transfer(E, A, B, C, D, s):
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.reshape(-1)
    dtype = np.result_type(E, A, B, C, complex)
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, 2**22 // max(1, E.shape[0] ** 2))
    for start in range(0, flat.size, step):
        z = flat[start:start + step, None, None]
        M = (z * E - A).astype(dtype)
        rhs = np.broadcast_to(B.astype(dtype)[None, :, None], (M.shape[0], B.shape[0], 1))
        try:
            x = np.linalg.solve(M, rhs)[..., 0]
        except np.linalg.LinAlgError as exc:
            raise DegeneracyError(f"sE - A is singular at one of the points {flat[start:start + step]}") from exc
        out[start:start + step] = x @ C + D
    out = out.reshape(s_arr.shape)
    return out[()] if out.ndim == 0 else out


def eval_reduced(model, s):
    """Transfer function ``C (sE - A)^{-1} B + D`` at one or many points."""
    return _batched_transfer(model.Ehat, model.Ahat, model.Bhat, model.Chat, model.Dhat, s)


def eval_pencil(pencil, z):
    """Full-order interpolant ``W (Ls - z L)^{-1} V`` of a regular pencil."""
    return _batched_transfer(
        -pencil.loewner_L, -pencil.shifted_Ls, pencil.vec_V, pencil.vec_W, 0.0, z
    )
