import numpy as np
import pytest

from discourse_signal.econometrics.regression import ols, ols_fit, prefix_rss
from discourse_signal.errors import NumericError


def _random_problem(rng, m=40, n=5):
    X = rng.normal(size=(m, n))
    X[:, 0] = 1.0
    beta = rng.normal(size=n)
    y = X @ beta + rng.normal(scale=0.3, size=m)
    return X, y


def test_ols_matches_lstsq():
    rng = np.random.default_rng(2)
    for _ in range(20):
        X, y = _random_problem(rng)
        coef, rss = ols(X, y)
        ref, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
        assert np.max(np.abs(coef - ref)) < 1e-10
        resid = y - X @ ref
        assert rss == pytest.approx(float(resid @ resid), rel=1e-10)


def test_ols_exact_fit_has_zero_rss():
    X = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
    y = np.array([3.0, 5.0, 7.0])
    coef, rss = ols(X, y)
    assert coef == pytest.approx([3.0, 2.0], abs=1e-12)
    assert rss == pytest.approx(0.0, abs=1e-20)


def test_ols_fit_standard_errors_match_normal_equations():
    rng = np.random.default_rng(3)
    for _ in range(10):
        X, y = _random_problem(rng, m=60, n=4)
        coef, rss, se = ols_fit(X, y)
        m, n = X.shape
        sigma2 = rss / (m - n)
        cov = sigma2 * np.linalg.inv(X.T @ X)
        assert np.max(np.abs(se - np.sqrt(np.diag(cov)))) < 1e-8


def test_ols_fit_saturated_design_gives_nan_se():
    X = np.array([[1.0, 0.0], [1.0, 1.0]])
    y = np.array([1.0, 2.0])
    coef, rss, se = ols_fit(X, y)
    assert np.all(np.isnan(se))
    assert coef == pytest.approx([1.0, 1.0])


def test_rank_deficient_design_is_refused():
    X = np.ones((10, 2))
    y = np.arange(10.0)
    with pytest.raises(NumericError):
        ols(X, y)


def test_shape_and_finiteness_validation():
    X = np.ones((5, 1))
    with pytest.raises(ValueError):
        ols(np.ones(5), np.ones(5))
    with pytest.raises(ValueError):
        ols(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        ols(X, np.ones(4))
    with pytest.raises(NumericError):
        ols(X * np.nan, np.ones(5))
    with pytest.raises(NumericError):
        ols(X, np.array([1.0, 2.0, np.inf, 4.0, 5.0]))


def test_prefix_rss_matches_per_prefix_fits():
    rng = np.random.default_rng(5)
    for _ in range(10):
        X, y = _random_problem(rng, m=50, n=6)
        prefixes = prefix_rss(X, y)
        assert len(prefixes) == 6
        for k in range(1, 7):
            _, rss_k = ols(X[:, :k], y)
            assert prefixes[k - 1] == pytest.approx(rss_k, rel=1e-9, abs=1e-9)


def test_prefix_rss_is_monotone_nonincreasing():
    rng = np.random.default_rng(6)
    X, y = _random_problem(rng, m=30, n=5)
    prefixes = prefix_rss(X, y)
    assert np.all(np.diff(prefixes) <= 1e-12)
    assert np.all(prefixes >= 0.0)
