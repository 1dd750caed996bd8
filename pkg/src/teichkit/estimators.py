"""scikit-learn style transformers over tables of disk-map coefficients.

Each row of ``X`` holds ``a_1, ..., a_N`` of one map (complex, zero padded).
The transformers are stateless; ``fit`` only validates and records the
input width.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import series
from .disk_maps import DiskMap
from .operators import ChiPoint, OneDifferential, chi, chi_inverse, schwarzian


def check_complex_array(X, ndim=2, name="X"):
    """Finite complex array of the given rank (``check_array`` rejects complex input)."""
    X = np.asarray(X)
    if X.dtype == object or not np.issubdtype(X.dtype, np.number):
        raise ValueError(f"{name} must be numeric")
    X = X.astype(complex)
    if X.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {X.shape}")
    if X.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or inf")
    return X


class _MapTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, n_terms=32, rho=1.25):
        self.n_terms = n_terms
        self.rho = rho

    def fit(self, X, y=None):
        X = check_complex_array(X)
        if X.shape[1] > self.n_terms:
            raise ValueError(f"maps of degree {X.shape[1]} exceed n_terms={self.n_terms}")
        self.n_features_in_ = X.shape[1]
        return self

    def _maps(self, X):
        check_is_fitted(self)
        X = check_complex_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        return [DiskMap(series.as_series(row, self.n_terms - 1), rho=self.rho) for row in X]


class ChiEmbedding(_MapTransformer):
    """Rows ``a_1..a_N`` to ``[coefficients of f''/f' (degrees 0..n_terms-1), f'(0)]``.

    ``inverse_transform`` rebuilds the maps (``n_terms`` columns).
    """

    def transform(self, X):
        out = []
        for f in self._maps(X):
            p = chi(f, n=self.n_terms - 1)
            out.append(np.concatenate([p.one.coeffs, [p.c]]))
        return np.array(out)

    def inverse_transform(self, Z):
        Z = check_complex_array(Z, name="Z")
        if Z.shape[1] != self.n_terms + 1:
            raise ValueError(f"expected {self.n_terms + 1} columns, got {Z.shape[1]}")
        return np.array([chi_inverse(ChiPoint(OneDifferential(z[:-1]), z[-1]), rho=self.rho,
                                     n=self.n_terms).coeffs for z in Z])


class SchwarzianEmbedding(_MapTransformer):
    """Rows ``a_1..a_N`` to Schwarzian coefficients of degrees ``0..n_terms-2``."""

    def transform(self, X):
        return np.array([schwarzian(f, n=self.n_terms - 2).coeffs for f in self._maps(X)])
