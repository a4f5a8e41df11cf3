import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from qubitcap.estimator import HolevoCapacityTransformer, RegimeClassifier
from qubitcap.exceptions import NotCPTPError

X = np.array(
    [
        [0.5, 0.5, 0.5, 0.5],
        [np.sqrt(0.5), np.sqrt(0.5), 0.5, 0.5],
        [0.6, 0.6, 0.5, 0.5],
        [0.8, 0.5, 0.3, 0.0],
    ]
)


def test_get_params_and_clone():
    est = HolevoCapacityTransformer(grid_n=256)
    assert est.get_params() == {"grid_n": 256}
    assert clone(est).grid_n == 256
    assert RegimeClassifier().get_params() == {}


def test_transform_columns():
    out = HolevoCapacityTransformer().fit_transform(X)
    assert out.shape == (4, 4)
    assert out[0, 0] == pytest.approx(0.3219280948873623, abs=1e-12)
    assert out[0, 1] == pytest.approx(0.6, abs=1e-12)
    assert np.isnan(out[0, 2]) and np.isnan(out[0, 3])
    assert out[1, 3] == pytest.approx(0.0, abs=1e-12)
    assert out[2, 3] == pytest.approx(0.178, abs=1e-3)
    assert list(HolevoCapacityTransformer().get_feature_names_out()) == [
        "capacity", "q_z", "phi0", "A"
    ]


def test_solve_returns_solutions():
    sols = HolevoCapacityTransformer().fit(X).solve(X)
    assert [s.regime.value for s in sols] == [
        "Cond1TwoOnAxis", "Cond2TwoOffAxis", "ThreeState", "Cond2TwoOffAxis"
    ]


def test_predict():
    clf = RegimeClassifier().fit(X)
    assert list(clf.predict(X)) == ["Condition1", "Condition2", "Indeterminate", "UnitalZeroShift"]
    assert "Indeterminate" in clf.classes_
    assert clf.score(X, clf.predict(X)) == 1.0


def test_pipeline():
    pipe = make_pipeline(HolevoCapacityTransformer())
    assert pipe.fit_transform(X).shape == (4, 4)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        HolevoCapacityTransformer().transform(X)
    with pytest.raises(NotFittedError):
        RegimeClassifier().predict(X)


@pytest.mark.parametrize(
    "bad, exc",
    [
        (np.zeros((2, 3)), ValueError),
        (np.array([[np.nan, 0, 0, 0]]), ValueError),
        (np.array([[0.8, 0.1, 0.1, 0.7]]), NotCPTPError),
    ],
)
def test_input_validation(bad, exc):
    with pytest.raises(exc):
        HolevoCapacityTransformer().fit(bad)
    with pytest.raises(exc):
        RegimeClassifier().fit(bad)
