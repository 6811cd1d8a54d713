"""Scikit-learn style front end to the Loewner pipeline."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_frequency_data, check_points
from .analysis import reduced_poles, reduced_zeros
from .exceptions import DomainError
from .loewner import (
    PARTITION_SCHEMES,
    build_pencil,
    close_under_conjugation,
    eval_reduced,
    partition_arrays,
    realify,
    reduce,
)

__all__ = ["LoewnerInterpolant"]


class LoewnerInterpolant(BaseEstimator):
    """Reduced rational model fitted to frequency-response samples.

    ``fit`` takes complex Laplace points ``X`` (typically ``j * omega``) and
    transfer values ``y``, builds the Loewner pencil and projects it to
    order ``order`` (or the order picked by ``tol``).  ``predict`` evaluates
    the reduced model.

    Parameters
    ----------
    order : int or None
        Reduced order; ``None`` selects the smallest ``r`` with
        ``sigma_{r+1} / sigma_1 < tol``.
    tol : float
        Threshold for automatic order selection.
    partition : {"alternating", "half-split"}
    conjugate_closure : bool
        Append complex conjugates to both partitions.
    real_realization : bool
        Transform the pencil to real arithmetic; requires
        ``conjugate_closure``.
    rank_slack : int
        Tolerated excess of ``order`` over the numerical rank before a
        :class:`~loewner_mor.loewner.RankWarning` is issued.

    Attributes
    ----------
    model_ : ReducedModel
    pencil_ : LoewnerPencil
    singular_values_ : SingularValues
    order_ : int
    """

    def __init__(
        self,
        order=None,
        tol=1e-10,
        partition="alternating",
        conjugate_closure=True,
        real_realization=True,
        rank_slack=4,
    ):
        self.order = order
        self.tol = tol
        self.partition = partition
        self.conjugate_closure = conjugate_closure
        self.real_realization = real_realization
        self.rank_slack = rank_slack

    def fit(self, X, y):
        if self.partition not in PARTITION_SCHEMES:
            raise DomainError(f"partition must be one of {PARTITION_SCHEMES}, got {self.partition!r}")
        if self.real_realization and not self.conjugate_closure:
            raise DomainError("real_realization requires conjugate_closure")
        points, values = check_frequency_data(X, y)
        data = partition_arrays(points, values, self.partition)
        if self.conjugate_closure:
            data = close_under_conjugation(data)
        pencil = build_pencil(data)
        if self.real_realization:
            pencil = realify(pencil)
        self.model_ = reduce(pencil, order=self.order, tol=self.tol, rank_slack=self.rank_slack)
        self.pencil_ = pencil
        self.singular_values_ = self.model_.singular_values
        self.order_ = self.model_.order
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        return eval_reduced(self.model_, check_points(X))

    def poles(self):
        check_is_fitted(self, "model_")
        return reduced_poles(self.model_)

    def zeros(self):
        check_is_fitted(self, "model_")
        return reduced_zeros(self.model_)
