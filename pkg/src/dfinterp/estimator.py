"""Estimator-style wrappers: fit on sampled values, predict anywhere in the polydisc."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_polydisc, check_product_set, check_values
from .interp import block_plan, build_plan, coefficients
from .scheme import NodeScheme
from .smallset import lambda_set


class _GridInterpolatorBase(BaseEstimator):
    def _schemes(self, units):
        raise NotImplementedError

    def _plan(self, z):
        raise NotImplementedError

    def fit(self, X, y):
        units, flat = check_product_set(X, self._width())
        self.schemes_ = self._schemes(units)
        self.n_features_in_ = sum(s.k for s in self.schemes_)
        self.X_ = check_polydisc(X)
        self.y_ = check_values(y, self.X_.shape[0])
        self.order_ = flat
        return self

    def transform(self, X):
        """Coefficient matrix: row ``i`` holds ``c_xi`` for target ``X[i]``, columns in training order."""
        check_is_fitted(self, "schemes_")
        Z = check_polydisc(X, self.n_features_in_)
        out = np.empty((Z.shape[0], self.X_.shape[0]), dtype=complex)
        for i, z in enumerate(Z):
            table = coefficients(self._plan(z), method=self.method)
            out[i] = table.values.ravel()[self.order_]
        return out

    def fit_transform(self, X, y):
        return self.fit(X, y).transform(X)

    def predict(self, X):
        return self.transform(X) @ self.y_

    def bound(self, X) -> np.ndarray:
        """Per-target constant ``sum_j |a_j| D**m_j`` of the plans used by :meth:`transform`."""
        check_is_fitted(self, "schemes_")
        Z = check_polydisc(X, self.n_features_in_)
        return np.array([self._plan(z).bound() for z in Z])


class ProductGridInterpolator(_GridInterpolatorBase):
    """Interpolate degree-``degree`` polynomials from their values on a product grid.

    ``fit`` takes every point of ``Z_1 x ... x Z_n`` (in any row order) and the
    sampled values; the node set of each coordinate is read off ``X``.

    Parameters
    ----------
    degree : int
        Total-degree bound ``d``.
    l_policy : {"per-run", "global-bound", "log-k"} or float
        Choice of ``L`` for each target.
    headroom : float
        Relative margin added by the ``"per-run"`` policy.
    method : {"maps", "partitions"}
        Coefficient extraction route.
    """

    def __init__(self, degree=1, l_policy="per-run", headroom=0.1, method="maps"):
        self.degree = degree
        self.l_policy = l_policy
        self.headroom = headroom
        self.method = method

    def _width(self):
        return 1

    def _schemes(self, units):
        sizes = {u.shape[0] for u in units}
        if len(sizes) != 1:
            raise ValueError(f"every coordinate needs the same number of nodes, got {sorted(sizes)}")
        return [NodeScheme.from_nodes(u[:, 0]) for u in units]

    def _plan(self, z):
        return build_plan(self.schemes_, self.degree, z, self.l_policy, self.headroom)


class BlockInterpolator(_GridInterpolatorBase):
    """Interpolation on a product of per-block point lists.

    Coordinates are grouped into consecutive blocks of ``block_size``; each
    block's point list must be unisolvent for the exponents ``alpha`` with
    ``|alpha| <= degree`` and ``alpha_i <= K - 1``. ``K`` defaults to
    ``degree + 1``.
    """

    def __init__(self, degree=1, block_size=2, K=None, l_policy="per-run", headroom=0.1, method="maps"):
        self.degree = degree
        self.block_size = block_size
        self.K = K
        self.l_policy = l_policy
        self.headroom = headroom
        self.method = method

    def _width(self):
        return self.block_size

    def _schemes(self, units):
        K = self.degree + 1 if self.K is None else self.K
        lam = lambda_set(self.block_size, self.degree, K)
        for u in units:
            if u.shape[0] != lam.M:
                raise ValueError(f"each block needs {lam.M} points, got {u.shape[0]}")
        return [NodeScheme.block(u, lam.elements) for u in units]

    def _plan(self, z):
        return block_plan(self.schemes_, self.degree, z, self.l_policy, self.headroom)
