"""Vandermonde systems behind the interpolation scheme.

Solving ``sum_k c_k y_k**j = x**j`` (``0 <= j < K``, with ``0**0 = 1``) gives
the moment coefficients used to realize a target point as a signed mixture of
nodes. The inverse Vandermonde matrix is formed from elementary symmetric
polynomials, which works unchanged over floats, complex numbers and
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

UNIT_TOL = 1e-12
ROOTS_TOL = 1e-14


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NodeVector:
    """Ordered, pairwise distinct nodes in the closed unit disc.

    ``eta`` is always recomputed from the nodes.
    """

    nodes: np.ndarray
    eta: float

    def __init__(self, nodes):
        nodes = np.asarray(nodes, dtype=complex).ravel()
        if nodes.size < 1:
            raise ValueError("need at least one node")
        if np.any(np.abs(nodes) > 1 + UNIT_TOL):
            raise ValueError(f"nodes must lie in the closed unit disc, max modulus {np.abs(nodes).max()}")
        eta = min_separation(nodes)
        if nodes.size > 1 and eta <= 0:
            raise ValueError("nodes must be pairwise distinct (singular Vandermonde system)")
        object.__setattr__(self, "nodes", _readonly(nodes))
        object.__setattr__(self, "eta", eta)

    @classmethod
    def roots_of_unity(cls, K: int) -> "NodeVector":
        return cls(np.exp(2j * np.pi * np.arange(K) / K))

    @property
    def K(self) -> int:
        return self.nodes.size

    @property
    def is_roots_of_unity(self) -> bool:
        """True when the nodes are exactly ``Omega_K`` in natural order."""
        ref = np.exp(2j * np.pi * np.arange(self.K) / self.K)
        return bool(np.all(np.abs(self.nodes - ref) <= ROOTS_TOL))

    def l1_bound(self) -> float:
        """Uniform bound ``K (2 / eta)**(K - 1)`` on ``sum_k |c_k(x)|``."""
        if self.K == 1:
            return 1.0
        return self.K * (2.0 / self.eta) ** (self.K - 1)

    def __repr__(self) -> str:
        return f"NodeVector(K={self.K}, eta={self.eta:.6g})"


def min_separation(nodes) -> float:
    nodes = np.asarray(nodes, dtype=complex).ravel()
    if nodes.size < 2:
        return math.inf
    diff = np.abs(nodes[:, None] - nodes[None, :])
    diff[np.diag_indices_from(diff)] = np.inf
    return float(diff.min())


@dataclass(frozen=True, eq=False)
class MomentCoefficients:
    c: np.ndarray
    x: complex
    l1: float

    def residual(self, nodes: NodeVector) -> float:
        """``max_j |sum_k c_k y_k**j - x**j|``."""
        K = nodes.K
        powers = nodes.nodes[None, :] ** np.arange(K)[:, None]
        target = np.array([self.x**j if j else 1.0 for j in range(K)], dtype=complex)
        return float(np.max(np.abs(powers @ self.c - target)))


def elementary_symmetric(values: Sequence) -> list:
    """``[e_0, e_1, ..., e_r]`` of the given values (``e_0 = 1``)."""
    one = values[0] ** 0 if len(values) else 1
    e = [one]
    for v in values:
        e.append(0 * one)
        for k in range(len(e) - 1, 0, -1):
            e[k] = e[k] + v * e[k - 1]
    return e


def inverse_vandermonde(nodes: Sequence) -> list[list]:
    """Inverse of ``V = [x_k**j]`` via elementary symmetric polynomials.

    Entry ``b[j][k]`` multiplies ``x**k`` in the Lagrange basis polynomial of
    node ``j``. Generic over the number type of ``nodes``: pass
    :class:`~fractions.Fraction` values for an exact result.
    """
    nodes = list(nodes)
    d = len(nodes)
    B = []
    for j in range(d):
        others = nodes[:j] + nodes[j + 1:]
        e = elementary_symmetric(others)
        denom = nodes[j] ** 0
        for m in others:
            denom = denom * (nodes[j] - m)
        row = [(-1) ** (d - 1 - k) * e[d - 1 - k] / denom for k in range(d)]
        B.append(row)
    return B


def inverse_vandermonde_array(nodes) -> np.ndarray:
    nodes = [complex(v) for v in np.asarray(nodes, dtype=complex).ravel()]
    return np.array(inverse_vandermonde(nodes), dtype=complex)


def inverse_vandermonde_exact(nodes: Sequence) -> list[list[Fraction]]:
    """Exact inverse for real rational nodes."""
    return inverse_vandermonde([Fraction(v) for v in nodes])


def _roots_closed_form(K: int, xs: np.ndarray) -> np.ndarray:
    """Moment coefficients for ``Omega_K``; rows are targets.

    ``c_j = (1 - x**K) / (K (1 - w**-j x))``. Near the removable singularity the
    equivalent geometric sum ``(1/K) sum_k (w**-j x)**k`` is used instead.
    """
    omega_conj = np.exp(-2j * np.pi * np.arange(K) / K)
    u = xs[:, None] * omega_conj[None, :]
    denom = 1 - u
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (1 - xs[:, None] ** K) / (K * denom)
    near = np.abs(denom) < 1e-3
    if np.any(near):
        un = u[near]
        acc = np.ones_like(un)
        term = np.ones_like(un)
        for _ in range(K - 1):
            term = term * un
            acc = acc + term
        closed[near] = acc / K
    return closed


def moment_matrix(nodes: NodeVector, xs) -> np.ndarray:
    """Moment coefficients for many targets at once, shape ``(len(xs), K)``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=complex))
    if np.any(np.abs(xs) > 1 + UNIT_TOL):
        raise ValueError("targets must lie in the closed unit disc")
    if nodes.is_roots_of_unity:
        return _roots_closed_form(nodes.K, xs)
    B = inverse_vandermonde_array(nodes.nodes)
    powers = xs[:, None] ** np.arange(nodes.K)[None, :]
    powers[:, 0] = 1.0
    return powers @ B.T


def solve_moments(nodes: NodeVector, x: complex) -> MomentCoefficients:
    """Solve ``sum_k c_k y_k**j = x**j`` for ``0 <= j < K``.

    Uses the closed form when the nodes are the K-th roots of unity in natural
    order, and the explicit inverse otherwise.
    """
    x = complex(x)
    c = moment_matrix(nodes, [x])[0]
    c.setflags(write=False)
    return MomentCoefficients(c=c, x=x, l1=float(np.abs(c).sum()))


def generic_solve(nodes, x) -> np.ndarray:
    """Reference solve by LU; independent of :func:`solve_moments`."""
    nodes = np.asarray(nodes, dtype=complex).ravel()
    K = nodes.size
    V = nodes[None, :] ** np.arange(K)[:, None]
    rhs = np.array([complex(x) ** j if j else 1.0 for j in range(K)], dtype=complex)
    return np.linalg.solve(V, rhs)


def inverse_entry_bound(d: int, M: float, eta: float) -> np.ndarray:
    """Entrywise bound ``M**(d-1-k) binom(d-1, k) / eta**(d-1)`` on a ``d x d`` inverse.

    Applies to the Vandermonde matrix of ``d`` points with modulus at most
    ``M`` and pairwise distance at least ``eta``. Rows are identical.
    """
    if M <= 0 or eta <= 0:
        raise ValueError("M and eta must be positive")
    row = np.array([M ** (d - 1 - k) * math.comb(d - 1, k) / eta ** (d - 1) for k in range(d)])
    return np.tile(row, (d, 1))


def roots_l1_bound(K: int) -> float:
    """Upper bound ``2 + sum_{j=2}^{ceil((K-1)/2)} 1/j`` on ``sum_j |c_j(x)|`` for ``Omega_K``."""
    top = math.ceil((K - 1) / 2)
    return 2.0 + math.fsum(1.0 / j for j in range(2, top + 1))


def elimination_weights(d: int, m: Sequence[int] | None = None, exact: bool = False):
    """Weights ``a_j`` with ``sum a_j = 1`` and ``sum a_j / m_j**k = 0`` for ``1 <= k < d``.

    The weights are the Lagrange basis at nodes ``1/m_j`` evaluated at 0,
    computed with fractions. ``m`` defaults to ``m_j = d + j``.

    Returns a list of :class:`~fractions.Fraction` if ``exact`` else floats.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    m = [d + j for j in range(d)] if m is None else [int(v) for v in m]
    if len(m) != d or len(set(m)) != d or min(m) < 1:
        raise ValueError(f"need {d} distinct positive integers, got {m}")
    weights = []
    for j in range(d):
        a = Fraction(1)
        for k in range(d):
            if k != j:
                a *= Fraction(m[j], m[j] - m[k])
        weights.append(a)
    return weights if exact else [float(a) for a in weights]


def weights_via_inverse(d: int, m: Sequence[int] | None = None) -> list[Fraction]:
    """Same weights as :func:`elimination_weights`, read off column 0 of an exact inverse."""
    m = [d + j for j in range(d)] if m is None else list(m)
    B = inverse_vandermonde_exact([Fraction(1, v) for v in m])
    return [B[j][0] for j in range(d)]


def factorial_form_magnitudes(d: int) -> list[int]:
    """The closed form ``(d+j)! / (j! (d-1-j)!)`` printed next to the product formula.

    It does not agree with the exact weights (already at ``d = 2``, ``j = 1``
    it gives 6 instead of 3) and is kept only so the mismatch can be reported.
    """
    return [math.factorial(d + j) // (math.factorial(j) * math.factorial(d - 1 - j)) for j in range(d)]


def factorial_form_mismatches(d: int) -> list[int]:
    """Indices ``j`` where ``|a_j|`` differs from the factorial expression."""
    exact = elimination_weights(d, exact=True)
    return [j for j, (a, f) in enumerate(zip(exact, factorial_form_magnitudes(d))) if abs(a) != f]
