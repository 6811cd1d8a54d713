"""Finite-difference semi-discretization of the damped beam.

The beam is split into ``N + 2`` intervals of width ``h = L / (N + 2)``.
The clamped end removes ``w_0`` and ``w_1``; the free-end conditions are
used to eliminate ``w_{N+1}`` and ``w_{N+2}``, which leaves the state
``v = (w_2, ..., w_N)`` of length ``N - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import splu

from .exceptions import DegeneracyError, DomainError

__all__ = [
    "SecondOrderSystem",
    "FirstOrderSystem",
    "stencil_matrix",
    "assemble_second_order",
    "to_first_order",
    "eval_H_fem",
    "eval_H_second_order",
]

_INTERIOR = (1.0, -4.0, 6.0, -4.0, 1.0)


@dataclass(frozen=True)
class SecondOrderSystem:
    """``M v'' + J v' + K v = f u`` with output pieces ``c1``, ``c2``, ``d``."""

    mass_M: np.ndarray
    damping_J: np.ndarray
    stiffness_K: np.ndarray
    input_f: np.ndarray
    out_c1: np.ndarray
    out_c2: np.ndarray
    feedthrough_d: float
    mesh_h: float
    n_intervals: int

    @property
    def size(self):
        return self.mass_M.shape[0]


@dataclass(frozen=True)
class FirstOrderSystem:
    """Descriptor form ``G x' = A x + B u`` of a :class:`SecondOrderSystem`.

    ``desc_G`` and ``state_A`` are stored as CSR matrices; only four bands
    are populated and the dense form at ``N = 2000`` would need 250 MB.
    """

    desc_G: sparse.csr_matrix
    state_A: sparse.csr_matrix
    input_B: np.ndarray
    output_C: np.ndarray
    feedthrough_D: float

    @property
    def size(self):
        return self.desc_G.shape[0]


def stencil_matrix(n_intervals):
    """Integer coefficient pattern shared by ``K`` and ``J``.

    Interior rows carry ``(1, -4, 6, -4, 1)`` truncated by the clamped end;
    the last two rows carry the free-end patterns ``(1, -4, 5, -2)`` and
    ``(1, -2, 1)``.
    """
    if int(n_intervals) != n_intervals or n_intervals < 6:
        raise DomainError(f"N must be an integer >= 6, got {n_intervals!r}")
    n = int(n_intervals) - 1
    S = np.zeros((n, n))
    for i in range(n - 2):
        for offset, coef in zip(range(-2, 3), _INTERIOR):
            j = i + offset
            if 0 <= j < n:
                S[i, j] = coef
    S[n - 2, n - 4:] = (1.0, -4.0, 5.0, -2.0)
    S[n - 1, n - 3:] = (1.0, -2.0, 1.0)
    return S


def assemble_second_order(N, p):
    """Assemble the second-order matrices for ``N`` interior intervals.

    Parameters
    ----------
    N : int
        Discretization parameter, at least 6 so that every row type occurs.
    p : BeamParams

    Returns
    -------
    SecondOrderSystem
    """
    S = stencil_matrix(N)
    n = S.shape[0]
    h = p.length / (N + 2)
    K = p.stiffness / h**4 * S
    J = p.damping_inertia / h**4 * S
    f = np.zeros(n)
    f[-2] = -1 / h
    f[-1] = 2 / h
    pattern = np.zeros(n)
    pattern[-2:] = (-2.0, 3.0)
    return SecondOrderSystem(
        mass_M=np.eye(n),
        damping_J=J,
        stiffness_K=K,
        input_f=f,
        out_c1=p.stiffness * pattern,
        out_c2=p.damping_inertia * pattern,
        feedthrough_d=2 * h**3,
        mesh_h=h,
        n_intervals=int(N),
    )


def to_first_order(sys):
    """Stack ``x = (v, v')`` to get ``G = diag(I, M)``, ``A = [[0, I], [-K, -J]]``."""
    n = sys.size
    eye = sparse.identity(n, format="csr")
    G = sparse.block_diag([eye, sparse.csr_matrix(sys.mass_M)], format="csr")
    A = sparse.bmat(
        [[None, eye], [-sparse.csr_matrix(sys.stiffness_K), -sparse.csr_matrix(sys.damping_J)]],
        format="csr",
    )
    B = np.concatenate([np.zeros(n), sys.input_f])
    C = np.concatenate([sys.out_c1, sys.out_c2])
    return FirstOrderSystem(desc_G=G, state_A=A, input_B=B, output_C=C, feedthrough_D=sys.feedthrough_d)


def _solve_one(z, G, A, B):
    try:
        lu = splu((z * G - A).tocsc())
    except RuntimeError as exc:
        raise DegeneracyError(f"sG - A is singular at s = {z}") from exc
    return lu.solve(B)


def eval_H_fem(s, sys, p):
    """``s / (EI + s c_d I) * (C (sG - A)^{-1} B + D)`` at one or many points.

    One sparse LU of size ``2(N-1)`` per frequency.
    """
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.reshape(-1)
    G = sys.desc_G.astype(complex)
    A = sys.state_A.astype(complex)
    B = sys.input_B.astype(complex)
    out = np.empty_like(flat)
    for i, z in enumerate(flat):
        if z == 0:
            out[i] = 0
            continue
        x = _solve_one(z, G, A, B)
        out[i] = z / (p.stiffness + z * p.damping_inertia) * (sys.output_C @ x + sys.feedthrough_D)
    out = out.reshape(s_arr.shape)
    return out[()] if out.ndim == 0 else out


def eval_H_second_order(s, sys, p):
    """Same transfer function from the second-order matrices (dense solve)."""
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.reshape(-1)
    out = np.empty_like(flat)
    for i, z in enumerate(flat):
        P = z * z * sys.mass_M + z * sys.damping_J + sys.stiffness_K
        try:
            v = np.linalg.solve(P, sys.input_f.astype(complex))
        except np.linalg.LinAlgError as exc:
            raise DegeneracyError(f"s^2 M + s J + K is singular at s = {z}") from exc
        inner = (sys.out_c1 + z * sys.out_c2) @ v + sys.feedthrough_d
        out[i] = z / (p.stiffness + z * p.damping_inertia) * inner
    out = out.reshape(s_arr.shape)
    return out[()] if out.ndim == 0 else out
