import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner_mor.beam import (
    BeamParams,
    alpha_roots,
    eval_H_modal,
    eval_H_orig,
    eval_m,
    gamma_roots,
    inertia_from_cross_section,
    spectrum,
)
from loewner_mor.exceptions import DomainError, EvaluationError, SingularityError


@pytest.fixture(scope="module")
def params():
    return BeamParams.default()


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fourth_root_half_angle(z):
    """Principal fourth root by halving the polar angle twice."""
    r, theta = abs(z), math.atan2(z.imag, z.real)
    for _ in range(2):
        r, theta = math.sqrt(r), theta / 2
    return complex(r * math.cos(theta), r * math.sin(theta))


# --- parameters -------------------------------------------------------------

def test_inertia_matches_reported_value():
    assert inertia_from_cross_section(0.07, 0.0085) == pytest.approx(3.58e-9, rel=5e-3)


def test_inertia_trivial_and_cubic_scaling():
    assert inertia_from_cross_section(12, 1) == 1.0
    base = inertia_from_cross_section(0.07, 0.0085)
    assert inertia_from_cross_section(0.07, 0.017) == pytest.approx(8 * base, rel=1e-15)


@pytest.mark.parametrize("b,h", [(0, 1), (1, -1), (-2, 3)])
def test_inertia_rejects_nonpositive(b, h):
    with pytest.raises(DomainError):
        inertia_from_cross_section(b, h)


def test_params_derived_fields(params):
    assert params.stiffness == params.youngs_modulus * params.inertia
    assert params.damping_inertia == params.damping * params.inertia
    assert params.inertia == 0.07 * 0.0085**3 / 12


@pytest.mark.parametrize("field", ["length", "youngs_modulus", "inertia", "damping"])
def test_params_must_be_positive(field):
    kwargs = dict(length=1.0, youngs_modulus=1.0, inertia=1.0, damping=1.0)
    kwargs[field] = 0.0
    with pytest.raises(DomainError):
        BeamParams(**kwargs)


# --- m(s) ----------------------------------------------------------------------

def test_m_at_zero(params):
    assert eval_m(0, params) == 0


def test_m_defining_identity(params):
    m = eval_m(1j, params)
    lhs = abs(m) ** 4 * abs(params.stiffness + 1j * params.damping_inertia)
    assert lhs == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("s", [1e3j, -5 + 2e2j, 3.0, 1e5 * (1 - 1j)])
def test_m_against_half_angle_oracle(params, s):
    z = -(s * s) / (params.stiffness + s * params.damping_inertia)
    assert eval_m(s, params) == pytest.approx(fourth_root_half_angle(z), rel=1e-13)


def test_m_principal_branch(params):
    rng = np.random.default_rng(1)
    s = rng.normal(size=50) * 1e3 + 1j * rng.normal(size=50) * 1e3
    arg = np.angle(eval_m(s, params))
    assert np.all(arg > -np.pi / 4) and np.all(arg <= np.pi / 4)


def test_m_singular_at_real_pole(params):
    with pytest.raises(SingularityError):
        eval_m(params.real_pole, params)
    with pytest.raises(SingularityError):
        eval_H_orig(params.real_pole, params)


# --- H_orig ---------------------------------------------------------------------

def test_static_compliance_limit(params):
    s = 1e-3j
    expected = params.length**3 / (3 * params.stiffness)
    assert expected == pytest.approx(4.63e-4, rel=1e-3)
    assert eval_H_orig(s, params) / s == pytest.approx(expected, rel=1e-3)


def test_h_orig_at_zero_is_zero(params):
    assert eval_H_orig(0, params) == 0


def test_conjugate_symmetry_example(params):
    s = 1e2 * (1 + 1j)
    assert eval_H_orig(np.conj(s), params) == pytest.approx(np.conj(eval_H_orig(s, params)), rel=1e-12)


def test_h_orig_matches_partial_fraction_sum(params):
    # residue form of the modal series, K = 1e4 terms, summed directly
    s = 1e2j
    spec = spectrum(10_000, params)
    mu = spec.pole_pairs
    res = spec.residue_pairs
    series = np.sum(res[:, 0] / (s - mu[:, 0]) + res[:, 1] / (s - mu[:, 1]))
    assert abs(eval_H_orig(s, params) - series) / abs(series) < 1e-3


def test_scaled_matches_naive_where_naive_is_finite(params):
    # points offset from resonances, where D(s) does not suffer cancellation
    s = 1j * np.logspace(0, 3, 23) * (1 + 1e-3j)
    scaled = eval_H_orig(s, params)
    naive = eval_H_orig(s, params, scaled=False)
    np.testing.assert_allclose(scaled, naive, rtol=1e-12)


def test_naive_overflows_but_scaled_does_not(params):
    s = np.array([1e7j, 1e9j, 1e6 * (1 + 1j)])
    out = eval_H_orig(s, params)
    assert np.all(np.isfinite(out))
    with pytest.raises(EvaluationError):
        eval_H_orig(1e9j, params, scaled=False)


def test_series_branch_continuity(params):
    # |L m| crosses the series radius near |s| ~ 4; both sides must agree
    s = 1j * np.linspace(3.0, 6.0, 301)
    h = eval_H_orig(s, params) / s
    assert np.max(np.abs(np.diff(h)) / np.abs(h[:-1])) < 1e-4


def _h_with_branch(s, p, rotation):
    m = rotation * eval_m(s, p)
    x = p.length * m
    N = np.cosh(x) * np.sin(x) - np.sinh(x) * np.cos(x)
    D = 1 + np.cosh(x) * np.cos(x)
    return s * N / ((p.stiffness + s * p.damping_inertia) * m**3 * D)


def test_branch_independence(params):
    rng = np.random.default_rng(7)
    s = (rng.uniform(-50, 50, 10) + 1j * rng.uniform(10, 1000, 10))
    ref = _h_with_branch(s, params, 1)
    for rot in (-1, 1j, -1j):
        np.testing.assert_allclose(_h_with_branch(s, params, rot), ref, rtol=1e-9)
    np.testing.assert_allclose(eval_H_orig(s, params), ref, rtol=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    re=st.floats(-1e4, 1e4, allow_nan=False),
    im=st.floats(1e-2, 1e6, allow_nan=False),
)
def test_conjugate_symmetry_property(re, im):
    p = BeamParams.default()
    s = complex(re, im)
    h = eval_H_orig(s, p)
    hc = eval_H_orig(s.conjugate(), p)
    assert abs(hc - h.conjugate()) <= 1e-12 * abs(h)
    hm = eval_H_modal(s, p, 50)
    assert abs(eval_H_modal(s.conjugate(), p, 50) - hm.conjugate()) <= 1e-12 * abs(hm)


# --- roots ----------------------------------------------------------------------

def test_first_alpha_root_against_bisection():
    oracle = bisect(lambda x: math.cos(x) + 1 / math.cosh(x), math.pi / 2, math.pi)
    assert oracle == pytest.approx(1.8751040687, abs=1e-9)
    assert alpha_roots(1, 1.0)[0] == pytest.approx(oracle, rel=1e-12)


def test_first_gamma_root_against_bisection():
    oracle = bisect(lambda x: math.tan(x) - math.tanh(x), math.pi + 1e-9, 1.5 * math.pi - 1e-9)
    assert oracle == pytest.approx(3.9266023120, abs=1e-9)
    assert gamma_roots(1, 1.0)[0] == pytest.approx(oracle, rel=1e-12)


def test_many_roots_against_bisection():
    alphas = alpha_roots(40, 1.0)
    gammas = gamma_roots(40, 1.0)
    for k in range(40):
        a = bisect(lambda x: math.cos(x) + 2 * math.exp(-x) / (1 + math.exp(-2 * x)), k * math.pi, (k + 1) * math.pi)
        g = bisect(lambda x: math.sin(x) - math.tanh(x) * math.cos(x), (k + 1) * math.pi, (k + 1.5) * math.pi)
        assert alphas[k] == pytest.approx(a, rel=1e-12)
        assert gammas[k] == pytest.approx(g, rel=1e-12)


def test_root_asymptotes():
    L = 0.7
    x_alpha = alpha_roots(21, L) * L
    x_gamma = gamma_roots(20, L) * L
    # 0-based list index k tends to (2k+1) pi / 2
    assert abs(x_alpha[20] - 41 * math.pi / 2) < 1e-9
    assert abs(x_gamma[19] - 81 * math.pi / 4) < 1e-9


def test_root_spacing_tends_to_pi():
    gaps = np.diff(alpha_roots(60, 1.0))
    assert np.all(gaps > 0)
    assert abs(gaps[-1] - math.pi) < 1e-12
    assert np.all(np.diff(gamma_roots(60, 1.0)) > 0)


def test_root_residuals():
    x = alpha_roots(200, 1.0)
    assert np.max(np.abs(np.cos(x) + 1 / np.cosh(x))) <= 1e-10
    y = gamma_roots(200, 1.0)
    # sin cosh - cos sinh, divided by cosh so it stays bounded
    assert np.max(np.abs(np.sin(y) - np.tanh(y) * np.cos(y))) <= 1e-10


def test_roots_scale_with_length():
    np.testing.assert_allclose(alpha_roots(10, 0.7) * 0.7, alpha_roots(10, 1.0), rtol=1e-14)


def test_interlacing_31():
    a = alpha_roots(32, 0.7)
    g = gamma_roots(31, 0.7)
    assert np.all(a[:31] < g) and np.all(g < a[1:32])


@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_root_count_validation(bad):
    with pytest.raises(DomainError):
        alpha_roots(bad, 1.0)


# --- spectrum -------------------------------------------------------------------

def test_real_pole(params):
    assert spectrum(1, params).real_pole == pytest.approx(-1.38e14, rel=1e-12)


def test_dominant_pole_real_part(params):
    mu = spectrum(1, params).pole_pairs[0]
    assert mu[0].real == pytest.approx(-4.611e-11, rel=1e-3)
    assert mu[0] == np.conj(mu[1])


def test_pole_and_zero_residuals(params):
    spec = spectrum(40, params)
    for roots, wav in ((spec.pole_pairs, spec.alphas), (spec.zero_pairs, spec.gammas)):
        k4 = wav[:, None] ** 4
        res = roots**2 + params.damping_inertia * k4 * roots + params.stiffness * k4
        scale = np.abs(roots) ** 2
        assert np.max(np.abs(res) / scale) <= 1e-8


def test_residue_sum_identity(params):
    spec = spectrum(30, params)
    np.testing.assert_allclose(spec.residue_pairs.sum(axis=1), 4 / params.length, rtol=1e-12)


def test_residue_form_equals_monomial_form_per_term(params):
    spec = spectrum(12, params)
    s = np.array([37j, 2e3j, 5 + 1e4j])
    for k in range(12):
        (mp, mm), (rp, rm) = spec.pole_pairs[k], spec.residue_pairs[k]
        a4 = spec.alphas[k] ** 4
        mono = (4 / params.length) * s / (s**2 + params.damping_inertia * a4 * s + params.stiffness * a4)
        np.testing.assert_allclose(rp / (s - mp) + rm / (s - mm), mono, rtol=1e-9)


def test_overdamped_mode_roots_are_accurate():
    p = BeamParams(length=1.0, youngs_modulus=1.0, inertia=1.0, damping=1.0)
    spec = spectrum(5, p)
    # c_dI^2 a^8 > 4 EI a^4 here: two real roots per mode
    assert np.all(spec.pole_pairs.imag == 0)
    a4 = spec.alphas**4
    np.testing.assert_allclose(spec.pole_pairs.prod(axis=1).real, a4, rtol=1e-12)
    np.testing.assert_allclose(-spec.pole_pairs.sum(axis=1).real, a4, rtol=1e-12)


# --- modal truncation -----------------------------------------------------------

def test_modal_zero(params):
    assert eval_H_modal(0, params, 10) == 0


def test_modal_single_term_at_resonance(params):
    a1 = alpha_roots(1, params.length)[0]
    s = 1j * math.sqrt(params.stiffness) * a1**2
    val = eval_H_modal(s, params, 1)
    expected = 4 / (params.length * params.damping_inertia * a1**4)
    assert val.real == pytest.approx(expected, rel=1e-9)
    assert abs(val.imag) < 1e-9 * abs(val)


def test_modal_tail_decay(params):
    s = 1e2j
    h = {n: eval_H_modal(s, params, n) for n in (50, 100, 200, 400)}
    assert abs(h[200] - h[400]) < abs(h[50] - h[100])


def test_modal_matches_exact_on_low_band(params):
    s = 1j * np.logspace(1, 3, 50)
    exact = eval_H_orig(s, params)
    modal = eval_H_modal(s, params, 10_000)
    assert np.max(np.abs(exact - modal) / np.abs(exact)) < 1e-3
