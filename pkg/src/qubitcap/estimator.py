"""scikit-learn compatible wrappers.

Rows of ``X`` are channels ``(lambda1, lambda2, lambda3, t)``. Both estimators
are stateless: ``fit`` only validates the input shape, so they drop into a
``Pipeline`` or ``FunctionTransformer``-style workflow.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .classifier import Tag, classify
from .entropy_bloch import ChannelParams, is_cptp
from .exceptions import NotCPTPError
from .solver import GRID_N, holevo_capacity

__all__ = ["HolevoCapacityTransformer", "RegimeClassifier", "check_channels"]

FEATURES = ("capacity", "q_z", "phi0", "A")


def check_channels(X, *, require_cptp: bool = True) -> np.ndarray:
    """Validate an ``(n_samples, 4)`` array of channel parameters."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 4:
        raise ValueError(
            f"expected 4 columns (lambda1, lambda2, lambda3, t), got {X.shape[1]}"
        )
    if require_cptp:
        for i, row in enumerate(X):
            report = is_cptp(ChannelParams.unchecked(*row))
            if not report.ok:
                raise NotCPTPError(f"row {i}: {report.diagnostic}")
    return X


class HolevoCapacityTransformer(TransformerMixin, BaseEstimator):
    """Map channel parameters to ``[capacity, q_z, phi0, A]``.

    ``phi0`` and ``A`` are NaN when undefined for a channel (on-axis optimal
    ensembles and ``lambda_m == |lambda3|`` respectively).

    Parameters
    ----------
    grid_n : int, default=512
        Angle grid used to certify each solution.
    """

    def __init__(self, grid_n: int = GRID_N):
        self.grid_n = grid_n

    def fit(self, X, y=None):
        X = check_channels(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_channels(X)
        out = np.empty((X.shape[0], len(FEATURES)))
        for i, row in enumerate(X):
            sol = holevo_capacity(ChannelParams(*row), grid_n=self.grid_n)
            A = sol.classification.A if sol.classification is not None else None
            out[i] = (
                sol.capacity,
                sol.q_z,
                np.nan if sol.phi0 is None else sol.phi0,
                np.nan if A is None else A,
            )
        return out

    def solve(self, X) -> list:
        """Full :class:`~qubitcap.solver.CapacitySolution` objects, one per row."""
        check_is_fitted(self, "n_features_in_")
        X = check_channels(X)
        return [holevo_capacity(ChannelParams(*row), grid_n=self.grid_n) for row in X]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURES, dtype=object)


class RegimeClassifier(ClassifierMixin, BaseEstimator):
    """Predict the regime tag of each channel from its parameters alone.

    No learning happens; ``fit`` records the tag vocabulary in ``classes_``
    so that ``score`` and other classifier utilities work.
    """

    def fit(self, X, y=None):
        X = check_channels(X)
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([t.value for t in Tag], dtype=object)
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_channels(X)
        return np.array([classify(ChannelParams(*row)).tag.value for row in X], dtype=object)
