"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import numpy as np

UNIT_TOL = 1e-12


def check_polydisc(X, n_features: int | None = None, name: str = "X") -> np.ndarray:
    """Return ``X`` as a finite 2-D complex array with every entry in the closed unit disc."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[:, None] if n_features in (None, 1) else X[None, :]
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or infinity")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"{name} has {X.shape[1]} features, expected {n_features}")
    if np.any(np.abs(X) > 1 + UNIT_TOL):
        raise ValueError(f"{name} has entries outside the closed unit disc")
    return X


def check_values(y, n_samples: int) -> np.ndarray:
    y = np.asarray(y, dtype=complex).ravel()
    if y.size != n_samples:
        raise ValueError(f"y has {y.size} values, expected {n_samples}")
    if not np.all(np.isfinite(y)):
        raise ValueError("y contains NaN or infinity")
    return y


def _unique_rows(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct rows in order of first appearance, and the row -> distinct index map."""
    seen: dict[tuple, int] = {}
    inverse = np.empty(block.shape[0], dtype=int)
    for i, row in enumerate(block):
        inverse[i] = seen.setdefault(tuple(row.tolist()), len(seen))
    uniq = np.empty((len(seen), block.shape[1]), dtype=complex)
    for key, j in seen.items():
        uniq[j] = key
    return uniq, inverse


def check_product_set(X, width: int = 1) -> tuple[list[np.ndarray], np.ndarray]:
    """Split ``X`` into units of ``width`` columns and check it is their full product.

    Returns the per-unit point lists, each of shape ``(size, width)``, and for
    every row of ``X`` its flat C-order index in the product.
    """
    X = check_polydisc(X)
    n = X.shape[1]
    if n % width:
        raise ValueError(f"{n} features cannot be split into units of width {width}")
    units, codes = [], []
    for u in range(n // width):
        pts, inv = _unique_rows(X[:, u * width:(u + 1) * width])
        units.append(pts)
        codes.append(inv)
    sizes = [p.shape[0] for p in units]
    total = int(np.prod(sizes, dtype=float))
    flat = np.ravel_multi_index(tuple(codes), sizes)
    if X.shape[0] != total or np.unique(flat).size != total:
        raise ValueError(f"X is not a full product set: {X.shape[0]} rows, "
                         f"{np.unique(flat).size} distinct, product of unit sizes is {total}")
    return units, flat
