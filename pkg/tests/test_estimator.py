import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from loewner_mor import LoewnerInterpolant
from loewner_mor.exceptions import DataError, DomainError


def h(s):
    return (s + 4) / ((s + 1) * (s**2 + 4 * s + 13))


@pytest.fixture
def data():
    X = 1j * np.logspace(-1, 1.5, 12)
    return X, h(X)


def test_params_and_clone():
    est = LoewnerInterpolant(order=3, tol=1e-8)
    params = est.get_params()
    assert params["order"] == 3 and params["tol"] == 1e-8
    twin = clone(est)
    assert twin.get_params() == params and twin is not est


def test_fit_predict_recovers_rational(data):
    X, y = data
    est = LoewnerInterpolant().fit(X, y)
    assert est.order_ == 3
    probes = np.array([0.5 + 2j, -1 + 7j, 3.0])
    np.testing.assert_allclose(est.predict(probes), h(probes), rtol=1e-8)
    np.testing.assert_allclose(np.sort_complex(est.poles()), np.sort_complex([-1, -2 - 3j, -2 + 3j]), rtol=1e-7)
    np.testing.assert_allclose(est.zeros(), [-4], rtol=1e-7)
    assert est.model_.is_real


def test_column_input_accepted(data):
    X, y = data
    est = LoewnerInterpolant(order=3).fit(X[:, None], y)
    np.testing.assert_allclose(est.predict(X[:, None]), y, rtol=1e-8)


def test_complex_realization(data):
    X, y = data
    est = LoewnerInterpolant(real_realization=False).fit(X, y)
    assert not est.model_.is_real
    np.testing.assert_allclose(est.predict(X), y, rtol=1e-8)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        LoewnerInterpolant().predict([1j])


@pytest.mark.parametrize(
    "X,y",
    [
        (np.ones((3, 2)), np.ones(3)),
        (np.array([1j, 2j]), np.ones(3)),
        (np.array([1j, np.nan]), np.ones(2)),
        (np.array([1j]), np.ones(1)),
        (np.array(["a", "b"]), np.ones(2)),
    ],
)
def test_input_validation(X, y):
    with pytest.raises(DataError):
        LoewnerInterpolant().fit(X, y)


def test_invalid_options(data):
    X, y = data
    with pytest.raises(DomainError):
        LoewnerInterpolant(partition="zigzag").fit(X, y)
    with pytest.raises(DomainError):
        LoewnerInterpolant(conjugate_closure=False, real_realization=True).fit(X, y)
