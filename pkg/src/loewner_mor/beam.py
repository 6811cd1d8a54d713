"""Clamped-free Euler-Bernoulli beam with Kelvin-Voigt damping.

The plant is driven by a shear force at the free tip and observed through
the tip velocity.  Its transfer function is irrational; this module
evaluates it in closed form, computes the analytic poles, zeros and
residues, and provides the truncated modal series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError, EvaluationError, SingularityError

__all__ = [
    "BeamParams",
    "BeamSpectrum",
    "inertia_from_cross_section",
    "eval_m",
    "eval_H_orig",
    "alpha_roots",
    "gamma_roots",
    "spectrum",
    "eval_H_modal",
]

# |L m| below this uses the power series of N(x)/x^3 and D(x)
_SERIES_RADIUS = 0.5


def inertia_from_cross_section(base, height):
    """Second moment of area ``b h^3 / 12`` of a rectangular cross-section."""
    if not (base > 0 and height > 0):
        raise DomainError(f"cross-section dimensions must be positive, got b={base}, h={height}")
    return base * height**3 / 12


@dataclass(frozen=True)
class BeamParams:
    """Physical constants of the beam (SI units, unit mass per length).

    Attributes
    ----------
    length : float
        Beam length ``L`` in m.
    youngs_modulus : float
        ``E`` in N/m^2.
    inertia : float
        Second moment of area ``I`` in m^4.
    damping : float
        Kelvin-Voigt coefficient ``c_d`` in N s/m^2.
    stiffness : float
        Derived ``E I``.
    damping_inertia : float
        Derived ``c_d I``.
    """

    length: float
    youngs_modulus: float
    inertia: float
    damping: float
    stiffness: float = field(init=False)
    damping_inertia: float = field(init=False)

    def __post_init__(self):
        for name in ("length", "youngs_modulus", "inertia", "damping"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "stiffness", self.youngs_modulus * self.inertia)
        object.__setattr__(self, "damping_inertia", self.damping * self.inertia)

    @classmethod
    def from_cross_section(cls, length, youngs_modulus, base, height, damping):
        return cls(length, youngs_modulus, inertia_from_cross_section(base, height), damping)

    @classmethod
    def default(cls):
        """Aluminium beam, 0.7 m long with a 70 mm x 8.5 mm section."""
        return cls.from_cross_section(0.7, 6.9e10, 0.07, 0.0085, 5e-4)

    @property
    def real_pole(self):
        return -self.youngs_modulus / self.damping

    def to_dict(self):
        return {
            "length": self.length,
            "youngs_modulus": self.youngs_modulus,
            "inertia": self.inertia,
            "damping": self.damping,
        }


@dataclass(frozen=True)
class BeamSpectrum:
    """Analytic poles, zeros and residues of the first few modes.

    ``pole_pairs[k]`` is ``(mu_k, mu_-k)`` with ``mu_k`` in the upper half
    plane when the mode is underdamped; ``residue_pairs`` follows the same
    ordering.  ``alphas`` and ``gammas`` are wavenumbers in 1/m.
    """

    alphas: np.ndarray
    gammas: np.ndarray
    pole_pairs: np.ndarray
    zero_pairs: np.ndarray
    residue_pairs: np.ndarray
    real_pole: float

    def poles(self, include_real=False):
        out = self.pole_pairs.reshape(-1)
        if include_real:
            out = np.append(out, self.real_pole)
        return out

    def zeros(self):
        return self.zero_pairs.reshape(-1)


def _as_complex(s):
    return np.asarray(s, dtype=complex)


def _unwrap(arr):
    return arr[()] if arr.ndim == 0 else arr


def _check_not_real_pole(s, p):
    denom = p.stiffness + s * p.damping_inertia
    if np.any(denom == 0):
        bad = np.asarray(s)[denom == 0].ravel()[0]
        raise SingularityError(f"m(s) is singular at s = {bad} (s = -E/c_d)")
    return denom


def eval_m(s, p):
    """Principal fourth root of ``-s^2 / (EI + s c_d I)``.

    The principal branch has argument in ``(-pi/4, pi/4]``.  Accepts a scalar
    or an array of complex frequencies.
    """
    s = _as_complex(s)
    denom = _check_not_real_pole(s, p)
    return _unwrap(np.power(-(s * s) / denom, 0.25))


def _scaled_ratio(x):
    """Return ``(N(x)/x^3, D(x))`` up to a common positive factor.

    Both hyperbolic and trigonometric parts are divided by ``exp(|Re x| +
    |Im x|)`` so nothing overflows; the constant term of ``D`` is scaled to
    match.
    """
    a = np.abs(x.real)
    b = np.abs(x.imag)
    ep, em = np.exp(x - a), np.exp(-x - a)
    ch, sh = 0.5 * (ep + em), 0.5 * (ep - em)
    eip, eim = np.exp(1j * x - b), np.exp(-1j * x - b)
    sn, cs = (eip - eim) / 2j, 0.5 * (eip + eim)
    num = (ch * sn - sh * cs) / x**3
    den = np.exp(-a - b) + ch * cs
    return num, den


def _naive_ratio(x):
    num = (np.cosh(x) * np.sin(x) - np.sinh(x) * np.cos(x)) / x**3
    den = 1 + np.cosh(x) * np.cos(x)
    return num, den


def _series_ratio(x):
    y = x**4
    num = 2 / 3 + y * (-1 / 315 + y * (1 / 623700 - y / 5108103000))
    den = 2 + y * (-1 / 6 + y * (1 / 2520 - y / 7484400))
    return num, den


def eval_H_orig(s, p, scaled=True):
    """Exact transfer function from tip force to tip velocity.

    ``H(s) = s N(s) / ((EI + s c_d I) m(s)^3 D(s))`` with
    ``N = cosh(Lm) sin(Lm) - sinh(Lm) cos(Lm)`` and ``D = 1 + cosh(Lm) cos(Lm)``.

    Parameters
    ----------
    s : complex or array_like of complex
        Laplace variable(s) in rad/s.
    p : BeamParams
    scaled : bool, default True
        Factor the exponential growth out of ``N`` and ``D`` before forming
        the ratio.  ``scaled=False`` evaluates the textbook formula and
        overflows for ``|s|`` beyond roughly ``1e5``.

    Raises
    ------
    SingularityError
        At ``s = -E/c_d``.
    EvaluationError
        If the result is not finite despite scaling.
    """
    s = _as_complex(s)
    denom = _check_not_real_pole(s, p)
    m = np.power(-(s * s) / denom, 0.25)
    x = p.length * m
    small = np.abs(x) < _SERIES_RADIUS
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore", invalid="ignore"):
        num, den = _scaled_ratio(xs) if scaled else _naive_ratio(xs)
        snum, sden = _series_ratio(x)
        num = np.where(small, snum, num)
        den = np.where(small, sden, den)
        out = s * p.length**3 * num / (denom * den)
    bad = ~np.isfinite(out)
    if np.any(bad):
        point = s[bad].ravel()[0] if s.ndim else complex(s)
        raise EvaluationError(f"H_orig is not finite at s = {point}", point=point)
    return _unwrap(out)


def _sech(x):
    e = math.exp(-x)
    return 2 * e / (1 + e * e)


def _alpha_residual(x):
    return math.cos(x) + _sech(x)


def _gamma_residual(x):
    # tan(x) - tanh(x) multiplied through by cos(x); bounded everywhere
    return math.sin(x) - math.tanh(x) * math.cos(x)


@lru_cache(maxsize=32)
def _unit_alpha_roots(count):
    # k-th root of cos x = -sech x lies in ((k-1) pi, k pi)
    return tuple(
        brentq(_alpha_residual, (k - 1) * math.pi, k * math.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        for k in range(1, count + 1)
    )


@lru_cache(maxsize=32)
def _unit_gamma_roots(count):
    # k-th positive root of tan x = tanh x lies in (k pi, k pi + pi/2)
    return tuple(
        brentq(_gamma_residual, k * math.pi, (k + 0.5) * math.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        for k in range(1, count + 1)
    )


def _check_count(count):
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    return int(count)


def alpha_roots(count, length):
    """First ``count`` positive roots of ``1 + cosh(L a) cos(L a) = 0``, ascending.

    Returned as wavenumbers ``a`` (1/m).  Solved through ``cos x = -sech x``
    with ``x = L a`` so that no hyperbolic function overflows.
    """
    count = _check_count(count)
    if not length > 0:
        raise DomainError(f"length must be positive, got {length}")
    return np.array(_unit_alpha_roots(count)) / length


def gamma_roots(count, length):
    """First ``count`` positive roots of ``cosh(L g) sin(L g) = sinh(L g) cos(L g)``."""
    count = _check_count(count)
    if not length > 0:
        raise DomainError(f"length must be positive, got {length}")
    return np.array(_unit_gamma_roots(count)) / length


def _quadratic_pairs(damp, stiff):
    """Roots of ``s^2 + damp s + stiff = 0`` for arrays of coefficients.

    Returns an array of shape (n, 2): upper root first for complex pairs,
    the less negative root first for real pairs.
    """
    disc = damp * damp - 4 * stiff
    out = np.empty((len(damp), 2), dtype=complex)
    under = disc < 0
    half_im = 0.5 * np.sqrt(np.where(under, -disc, 0.0))
    out[:, 0] = np.where(under, -0.5 * damp + 1j * half_im, 0)
    out[:, 1] = np.where(under, -0.5 * damp - 1j * half_im, 0)
    if np.any(~under):
        # cancellation-free form for the overdamped modes
        far = -0.5 * (damp[~under] + np.sqrt(disc[~under]))
        out[~under, 0] = stiff[~under] / far
        out[~under, 1] = far
    return out


def spectrum(count_pairs, p):
    """Poles, zeros and residues of the first ``count_pairs`` modes.

    Poles solve ``s^2 + c_d I a_k^4 s + EI a_k^4 = 0``, zeros the same
    quadratic with ``g_k``.  Residues are those of the modal term
    ``(4/L) s / ((s - mu_k)(s - mu_-k))``, so ``r_k + r_-k = 4/L``.
    """
    count_pairs = _check_count(count_pairs)
    alphas = alpha_roots(count_pairs, p.length)
    gammas = gamma_roots(count_pairs, p.length)
    a4, g4 = alphas**4, gammas**4
    poles = _quadratic_pairs(p.damping_inertia * a4, p.stiffness * a4)
    zeros = _quadratic_pairs(p.damping_inertia * g4, p.stiffness * g4)
    gain = 4 / p.length
    gap = poles[:, 0] - poles[:, 1]
    residues = np.column_stack([gain * poles[:, 0] / gap, -gain * poles[:, 1] / gap])
    return BeamSpectrum(
        alphas=alphas,
        gammas=gammas,
        pole_pairs=poles,
        zero_pairs=zeros,
        residue_pairs=residues,
        real_pole=p.real_pole,
    )


def eval_H_modal(s, p, terms_N):
    """Modal truncation keeping the first ``terms_N`` pole pairs.

    Each term is ``(4/L) s / (s^2 + c_d I a_k^4 s + EI a_k^4)``.
    """
    terms_N = _check_count(terms_N)
    s = _as_complex(s)
    a4 = alpha_roots(terms_N, p.length) ** 4
    damp, stiff = p.damping_inertia * a4, p.stiffness * a4
    flat = s.reshape(-1)
    out = np.empty_like(flat)
    step = max(1, 2**20 // terms_N)
    for start in range(0, flat.size, step):
        z = flat[start:start + step, None]
        out[start:start + step] = (z / (z * z + damp * z + stiff)).sum(axis=1)
    return _unwrap((4 / p.length) * out.reshape(s.shape))
