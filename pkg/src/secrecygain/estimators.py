"""Scikit-learn style front end for secrecy-gain analysis."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_codewords, check_taus
from .codes import ExplicitCode, WeightEnumerator, is_formally_self_dual
from .secrecy import (
    secrecy_function,
    strong_secrecy_gain,
    weak_secrecy_gain,
)


class SecrecyGainEstimator(TransformerMixin, BaseEstimator):
    """Fit on the codewords of a binary code, transform tau values into Xi(tau).

    Parameters
    ----------
    grid_size : int
        Number of grid points used to locate basins before refinement.
    tol : float
        Width at which golden-section refinement stops.

    After fitting, ``strong_gain_`` and ``weak_gain_`` hold the secrecy gains
    of the unit-volume Construction A lattice built from the code.
    """

    def __init__(self, grid_size: int = 1024, tol: float = 1e-14):
        self.grid_size = grid_size
        self.tol = tol

    def fit(self, X, y=None):
        X = check_codewords(X)
        code = ExplicitCode.from_array(X)
        return self.fit_enumerator(code.weight_enumerator())

    def fit_enumerator(self, W: WeightEnumerator):
        """Fit directly from a weight enumerator (no codeword list needed)."""
        if self.grid_size < 3:
            raise ValueError("grid_size must be at least 3")
        gain = strong_secrecy_gain(W, grid=self.grid_size, tol=self.tol)
        self.weight_enumerator_ = W
        self.n_features_in_ = W.n
        self.is_fsd_ = is_formally_self_dual(W).is_fsd
        self.strong_gain_ = float(gain.xi)
        self.weak_gain_ = float(weak_secrecy_gain(W))
        self.t_star_ = float(gain.t_star)
        self.tau_star_ = float(gain.tau_star)
        self.conjecture_verified_ = gain.conjecture_verified
        return self

    def transform(self, X):
        """Secrecy function values, one row per tau."""
        check_is_fitted(self, "weight_enumerator_")
        taus = check_taus(X)
        W = self.weight_enumerator_
        return np.array([[float(secrecy_function(W, t))] for t in taus])

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "weight_enumerator_")
        return self.strong_gain_
