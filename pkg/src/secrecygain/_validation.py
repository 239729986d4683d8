"""Input checks shared by the estimator layer."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .codes import MAX_LENGTH
from .exceptions import CodeValidationError, DomainError


def check_codewords(X) -> np.ndarray:
    """Validate a (n_codewords, n) matrix of bits and return it as uint8.

    Rows must be distinct and every entry must be 0 or 1.
    """
    X = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=1)
    if not np.isin(X, (0, 1)).all():
        raise CodeValidationError("codeword matrix must contain only 0 and 1")
    X = X.astype(np.uint8)
    if X.shape[1] > MAX_LENGTH:
        raise CodeValidationError(f"code length {X.shape[1]} exceeds {MAX_LENGTH}")
    uniq = np.unique(X, axis=0)
    if len(uniq) != len(X):
        raise CodeValidationError("codeword matrix has repeated rows")
    return X


def check_taus(X) -> np.ndarray:
    """Flatten a column (or 1-D array) of tau values, all strictly positive."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    X = check_array(X.reshape(-1, 1), dtype=np.float64)[:, 0]
    if not (X > 0).all():
        raise DomainError("tau values must be positive")
    return X
