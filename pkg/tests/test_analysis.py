import json
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner_mor.analysis import (
    error_profile,
    interlace_report,
    log_grid,
    match_poles,
    matched_pole_pairs,
    ratio_summary,
    reduced_poles,
    reduced_zeros,
    sample,
    sample_values,
)
from loewner_mor.beam import BeamParams, eval_H_modal, eval_H_orig, spectrum
from loewner_mor.exceptions import DomainError, EvaluationError
from loewner_mor.loewner import ReducedModel, TangentialData, build_pencil, close_under_conjugation, realify, reduce


def fit_exact(h, right, left, order=None):
    right = np.asarray(right, dtype=complex)
    left = np.asarray(left, dtype=complex)
    data = close_under_conjugation(TangentialData(right, h(right), left, h(left)))
    return reduce(realify(build_pencil(data)), order=order)


# --- grids and sampling -----------------------------------------------------------

def test_log_grid_trivial():
    grid = log_grid(0, 1, 2)
    np.testing.assert_array_equal(grid.points, [1j, 10j])
    np.testing.assert_array_equal(grid.omega, [1.0, 10.0])


def test_log_grid_interest_band():
    grid = log_grid(1, 4.5, 400)
    assert grid.count == 400
    assert grid.points[0] == 10j
    assert grid.omega[-1] == pytest.approx(10**4.5, rel=1e-14)
    assert np.all(np.diff(grid.omega) > 0)
    assert np.all(grid.points.real == 0)


def test_log_grid_display_band():
    grid = log_grid(0, 7, 500)
    assert grid.omega[0] == 1 and grid.omega[-1] == pytest.approx(1e7, rel=1e-14)


@pytest.mark.parametrize("args", [(1, 1, 10), (2, 1, 10), (0, 1, 1), (0, 1, 2.5), (np.nan, 1, 4)])
def test_log_grid_rejects_bad_bounds(args):
    with pytest.raises(DomainError):
        log_grid(*args)


def test_log_grid_round_trip_bit_identical():
    grid = log_grid(1, 4.5, 400)
    again = log_grid(**{k: grid.to_dict()[k] for k in ("lo_exp", "hi_exp", "count")})
    np.testing.assert_array_equal(grid.points, again.points)
    text = json.dumps([repr(float(w)) for w in grid.omega])
    back = np.array([float(x) for x in json.loads(text)])
    np.testing.assert_array_equal(back, grid.omega)


def test_sample_constant_plant():
    grid = log_grid(0, 2, 11)
    smp = sample(lambda s: np.ones_like(s), grid)
    assert len(smp) == 11
    assert all(x.value == 1 for x in smp)


def test_sample_exact_vs_modal():
    p = BeamParams.default()
    grid = log_grid(1, 3, 50)
    a = sample_values(lambda s: eval_H_orig(s, p), grid)
    b = sample_values(lambda s: eval_H_modal(s, p, 10_000), grid)
    assert np.max(np.abs(a - b) / np.abs(a)) < 1e-3


def test_parallel_sampling_matches_serial():
    p = BeamParams.default()
    grid = log_grid(1, 4.5, 101)
    f = lambda s: eval_H_orig(s, p)  # noqa: E731
    np.testing.assert_array_equal(sample_values(f, grid, n_jobs=4), sample_values(f, grid))


def test_sampling_failure_names_point():
    def bad(s):
        s = np.asarray(s)
        if np.any(np.abs(s) > 50):
            raise ZeroDivisionError("boom")
        return s

    with pytest.raises(EvaluationError) as info:
        sample_values(bad, log_grid(0, 2, 5))
    assert info.value.point == 100j


# --- error profiles -----------------------------------------------------------------

def test_error_profile_self_is_zero():
    p = BeamParams.default()
    f = lambda s: eval_H_orig(s, p)  # noqa: E731
    prof = error_profile(f, f, log_grid(1, 4.5, 40))
    assert np.all(prof.abs_err == 0) and np.all(prof.rel_err == 0)
    assert prof.max_rel == 0


def test_error_profile_zero_reference_flagged():
    pts = np.array([0j, 1j])
    prof = error_profile(lambda s: s, lambda s: s + 0.5, pts)
    np.testing.assert_array_equal(prof.zero_reference, [True, False])
    np.testing.assert_allclose(prof.rel_err, [0.5, 0.5])


def test_ratio_summary():
    pts = 1j * np.arange(1, 4)
    a = error_profile(lambda s: s, lambda s: 1.1 * s, pts)
    b = error_profile(lambda s: s, lambda s: 1.001 * s, pts)
    summary = ratio_summary(a, b)
    assert summary["median"] == pytest.approx(100, rel=1e-9)


# --- poles and zeros -----------------------------------------------------------------

def test_trivial_pole():
    model = ReducedModel(np.eye(1), -np.eye(1), np.ones(1), np.ones(1))
    np.testing.assert_allclose(reduced_poles(model), [-1])


def test_order_two_poles():
    h = lambda s: 1 / ((s + 1) * (s + 2))  # noqa: E731
    model = fit_exact(h, 1j * np.array([0.3, 1.0, 3.0]), 1j * np.array([0.5, 2.0, 5.0]), order=2)
    np.testing.assert_allclose(np.sort(reduced_poles(model).real), [-2, -1], rtol=1e-8)


def test_zero_of_first_order_ratio():
    h = lambda s: (s + 3) / (s + 1)  # noqa: E731
    model = fit_exact(h, 1j * np.array([0.3, 1.0, 3.0]), 1j * np.array([0.5, 2.0, 5.0]))
    zeros = reduced_zeros(model)
    assert zeros.size == 1
    assert zeros[0] == pytest.approx(-3, rel=1e-8)


def test_no_finite_zeros():
    h = lambda s: 1 / (s + 1)  # noqa: E731
    model = fit_exact(h, 1j * np.array([0.3, 3.0]), 1j * np.array([1.0, 5.0]))
    assert reduced_zeros(model).size == 0


def random_stable_system(rng, n):
    """Poles in the open left half-plane (real and complex pairs) and residues."""
    poles = []
    while len(poles) < n:
        if n - len(poles) >= 2 and rng.random() < 0.6:
            z = complex(-rng.uniform(0.1, 3), rng.uniform(0.5, 10))
            poles += [z, z.conjugate()]
        else:
            poles.append(complex(-rng.uniform(0.1, 5), 0))
    poles = np.array(poles)
    res = np.empty(n, dtype=complex)
    i = 0
    while i < n:
        if poles[i].imag == 0:
            res[i] = rng.normal()
            i += 1
        else:
            res[i] = rng.normal() + 1j * rng.normal()
            res[i + 1] = np.conj(res[i])
            i += 2
    return poles, res


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 6))
def test_pole_recovery_property(seed, n):
    rng = np.random.default_rng(seed)
    poles, res = random_stable_system(rng, n)
    if np.min(np.abs(np.subtract.outer(poles, poles)) + np.eye(n) * 10) < 0.05:
        return

    def h(s):
        s = np.asarray(s, dtype=complex)
        return np.sum(res / (s[..., None] - poles), axis=-1)

    grid = 1j * np.logspace(-1.5, 1.5, 2 * n + 6)
    model = fit_exact(h, grid[::2], grid[1::2], order=n)
    found = reduced_poles(model)
    matches = match_poles(poles, found)
    assert len(matches) == n
    assert max(m.rel_distance for m in matches) < 1e-7


def test_pole_sorting_deterministic():
    model = ReducedModel(np.eye(3), np.diag([-1.0, -2.0, -3.0]), np.ones(3), np.ones(3))
    a = reduced_poles(model)
    np.testing.assert_array_equal(a, reduced_poles(model))
    np.testing.assert_array_equal(a, [-3, -2, -1])


def test_singular_E_uses_pencil_route():
    E = np.diag([1.0, 0.0])
    A = np.diag([-2.0, 1.0])
    model = ReducedModel(E, A, np.ones(2), np.ones(2))
    np.testing.assert_allclose(reduced_poles(model), [-2])


# --- interlacing and matching ----------------------------------------------------------

def test_interlacing_beam():
    assert interlace_report(spectrum(32, BeamParams.default())) == (True, None)
    p = BeamParams(length=1.0, youngs_modulus=6.9e10, inertia=3.58e-9, damping=5e-4)
    assert interlace_report(spectrum(32, p)).ok


def test_interlacing_swapped_lists():
    spec = spectrum(5, BeamParams.default())
    swapped = spec.__class__(**{**spec.__dict__, "alphas": spec.gammas, "gammas": spec.alphas})
    report = interlace_report(swapped)
    assert not report.ok
    assert report.first_violation == 1


def test_match_poles_greedy():
    ref = np.array([1 + 1j, 2 + 2j])
    cand = np.array([2.0 + 2.1j, 1.0 + 1.0001j, 50.0])
    matches = match_poles(ref, cand)
    assert [(m.reference, m.candidate) for m in matches] == [(0, 1), (1, 0)]
    ok, _ = matched_pole_pairs(np.array([[1 + 1j, 1 - 1j]]), np.array([1 + 1j, 1 - 1j]), 1e-12)
    assert ok.tolist() == [True]
    ok, _ = matched_pole_pairs(np.array([[1 + 1j, 1 - 1j]]), np.array([1 + 1j]), 1e-3)
    assert ok.tolist() == [False]


def test_reduced_model_thread_safe():
    model = fit_exact(lambda s: 1 / (s**2 + s + 4), 1j * np.array([0.3, 1.0, 3.0]), 1j * np.array([0.5, 2.0, 5.0]), order=2)
    pts = 1j * np.linspace(0.1, 10, 200)
    expected = model(pts)
    results = [None] * 8

    def work(i):
        results[i] = model(pts)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for r in results:
        np.testing.assert_array_equal(r, expected)
