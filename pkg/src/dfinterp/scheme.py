"""Signed node mixtures on ``[0, D]``.

For a target ``x`` the moment coefficients ``c_k(x)`` are split into four
non-negative parts (real positive/negative, imaginary positive/negative) and
padded with slacks to common masses ``L + 1, L, L, L``. Laying those masses out
on ``[0, D]``, ``D = 4L + 1``, gives two piecewise-constant maps:

* ``r`` takes the sign values ``+1, -1, +i, -i`` on consecutive sections;
* ``w`` takes node values, section by section, with piece lengths ``c_k^(s)``
  and ``t^(s) / size``.

Then ``E[r(U) w(U)**alpha] = x**alpha / D`` for every exponent in the scheme's
exponent set. All integrals here are computed exactly as finite sums over the
common refinement of piece lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .vander import NodeVector, moment_matrix, roots_l1_bound

SIGNS = np.array([1, -1, 1j, -1j], dtype=complex)
ADMISSIBLE_TOL = 1e-9


class InadmissibleError(ValueError):
    """Raised when a coefficient vector or an ``L`` value cannot be split."""


# ---------------------------------------------------------------------------
# node schemes


class NodeScheme:
    """Nodes plus the exponent set whose moments they must reproduce.

    In coordinate mode the nodes are ``K`` points of the unit disc and the
    exponents are ``0, ..., K - 1``. In block mode the nodes are ``M`` points of
    the ``k``-polydisc and the exponents are an arbitrary set of ``M``
    multi-indices with a nonsingular generalized Vandermonde matrix.
    """

    def __init__(self, points, exponents, nodes: NodeVector | None = None):
        points = np.asarray(points, dtype=complex)
        if points.ndim == 1:
            points = points[:, None]
        self.points = points
        self.points.setflags(write=False)
        self.exponents = [tuple(int(a) for a in e) for e in exponents]
        self.nodes = nodes
        if len(self.exponents) != self.size:
            raise ValueError(f"{self.size} nodes but {len(self.exponents)} exponents")
        if any(len(e) != self.k for e in self.exponents):
            raise ValueError("exponent length does not match node dimension")
        if nodes is None:
            A = self.design_matrix()
            self.det = complex(np.linalg.det(A))
            if abs(self.det) == 0:
                raise ValueError("singular block system (determinant is zero)")
            self._lu = scipy.linalg.lu_factor(A)
        else:
            self.det = None
            self._lu = None

    @classmethod
    def from_nodes(cls, nodes) -> "NodeScheme":
        if not isinstance(nodes, NodeVector):
            nodes = NodeVector(nodes)
        return cls(nodes.nodes, [(j,) for j in range(nodes.K)], nodes=nodes)

    @classmethod
    def roots_of_unity(cls, K: int) -> "NodeScheme":
        return cls.from_nodes(NodeVector.roots_of_unity(K))

    @classmethod
    def block(cls, points, exponents) -> "NodeScheme":
        return cls(points, exponents, nodes=None)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def k(self) -> int:
        return self.points.shape[1]

    @property
    def is_block(self) -> bool:
        return self.nodes is None

    @property
    def is_roots_of_unity(self) -> bool:
        return self.nodes is not None and self.nodes.is_roots_of_unity

    @property
    def eta(self) -> float:
        if self.nodes is not None:
            return self.nodes.eta
        seps = []
        for r in range(self.k):
            vals = np.unique(np.round(self.points[:, r], 15))
            if vals.size > 1:
                seps.append(np.min(np.abs(vals[:, None] - vals[None, :]) + np.eye(vals.size) * np.inf))
        return float(min(seps)) if seps else math.inf

    def design_matrix(self) -> np.ndarray:
        """``A[i, j] = y_j ** beta_i``."""
        return np.array([self.power(beta) for beta in self.exponents])

    def power(self, alpha) -> np.ndarray:
        """``y_j ** alpha`` for every node ``j`` (``0**0 = 1``)."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=int))
        return np.prod(self.points ** alpha[None, :], axis=1)

    def coefficients_many(self, xs) -> np.ndarray:
        """Moment coefficients for each target, shape ``(len(xs), size)``."""
        if self.nodes is not None:
            return moment_matrix(self.nodes, np.asarray(xs, dtype=complex).ravel())
        xs = np.asarray(xs, dtype=complex).reshape(-1, self.k)
        rhs = np.array([[np.prod(x ** np.array(beta)) for beta in self.exponents] for x in xs])
        return scipy.linalg.lu_solve(self._lu, rhs.T).T

    def coefficients(self, x) -> np.ndarray:
        return self.coefficients_many([x] if self.k == 1 else [np.asarray(x, dtype=complex)])[0]

    def l1_bound(self) -> float:
        """A bound on ``sum_j |c_j(x)|`` valid on the whole closed (poly)disc."""
        if self.nodes is not None:
            return self.nodes.l1_bound()
        M = self.size
        return M * M ** (M / 2) / abs(self.det)

    def label(self, j: int):
        return complex(self.points[j, 0]) if self.k == 1 else tuple(complex(v) for v in self.points[j])

    def __repr__(self) -> str:
        if self.is_block:
            return f"NodeScheme(block, M={self.size}, k={self.k}, |det|={abs(self.det):.4g})"
        return f"NodeScheme(K={self.size}, eta={self.eta:.4g})"


# ---------------------------------------------------------------------------
# splits


@dataclass(frozen=True, eq=False)
class CoefficientSplit:
    """Non-negative parts of ``c`` and the slacks that fill each section.

    Row order of ``cs`` and ``ts`` is ``+1, -1, +i, -i``.
    """

    cs: np.ndarray
    ts: np.ndarray
    L: float

    @property
    def c_re(self) -> float:
        return math.fsum(self.cs[0])

    @property
    def c_im(self) -> float:
        return math.fsum(self.cs[2])

    def recombine(self) -> np.ndarray:
        return (self.cs[0] - self.cs[1]) + 1j * (self.cs[2] - self.cs[3])

    def section_lengths(self) -> np.ndarray:
        return np.array([math.fsum(self.cs[s]) + self.ts[s] for s in range(4)])


def required_L(c) -> float:
    """Smallest admissible ``L`` for one coefficient vector: ``max(c_Re, c_Im)``."""
    c = np.asarray(c, dtype=complex)
    return max(math.fsum(np.maximum(c.real, 0)), math.fsum(np.maximum(c.imag, 0)))


def split(c, L: float) -> CoefficientSplit:
    """Decompose ``c`` into positive/negative real and imaginary parts with slacks.

    Requires ``sum_k c_k = 1`` (true for any genuine moment solution) and
    ``L >= max(c_Re, c_Im)``. The slack pairs are set equal by construction.
    """
    c = np.asarray(getattr(c, "c", c), dtype=complex)
    total = complex(np.sum(c))
    if abs(total - 1) > ADMISSIBLE_TOL:
        raise InadmissibleError(f"coefficients sum to {total}, need 1")
    need = required_L(c)
    if L < need - ADMISSIBLE_TOL:
        raise InadmissibleError(f"L={L} is too small, need at least {need}")
    cs = np.array([
        np.maximum(c.real, 0),
        np.maximum(-c.real, 0),
        np.maximum(c.imag, 0),
        np.maximum(-c.imag, 0),
    ])
    # t(+1) = L + 1 - sum c(+1) and t(-1) = L - sum c(-1) agree exactly in theory;
    # one value is used for both so the signed slack sum cancels exactly.
    t_re = max(L - math.fsum(cs[1]), 0.0)
    t_im = max(L - max(math.fsum(cs[2]), math.fsum(cs[3])), 0.0)
    ts = np.array([t_re, t_re, t_im, t_im])
    cs.setflags(write=False)
    ts.setflags(write=False)
    return CoefficientSplit(cs=cs, ts=ts, L=float(L))


# ---------------------------------------------------------------------------
# piecewise maps


def _running_sum(values: Iterable[float]) -> np.ndarray:
    """Prefix sums with Neumaier compensation."""
    out = []
    s = 0.0
    comp = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        out.append(s + comp)
    return np.array(out)


class PiecewiseMap:
    """A piecewise-constant function on ``[0, D]``.

    ``lengths[p]`` and ``labels[p]`` describe piece ``p``; ``alphabet[labels[p]]``
    is the value (a row of length ``k``). Zero-length pieces are kept.
    """

    def __init__(self, D: float, lengths, labels, alphabet):
        self.D = float(D)
        self.lengths = np.asarray(lengths, dtype=float)
        self.labels = np.asarray(labels, dtype=int)
        alphabet = np.asarray(alphabet, dtype=complex)
        self.alphabet = alphabet[:, None] if alphabet.ndim == 1 else alphabet
        if np.any(self.lengths < 0):
            raise ValueError("piece lengths must be non-negative")
        self.ends = _running_sum(self.lengths)
        for arr in (self.lengths, self.labels, self.alphabet, self.ends):
            arr.setflags(write=False)

    @property
    def pieces(self) -> list[tuple[float, object]]:
        vals = [complex(a[0]) if self.alphabet.shape[1] == 1 else tuple(a) for a in self.alphabet]
        return [(float(l), vals[b]) for l, b in zip(self.lengths, self.labels)]

    @property
    def total_length(self) -> float:
        return float(self.ends[-1]) if self.ends.size else 0.0

    def values(self) -> np.ndarray:
        """Scalar value of each piece (coordinate maps only)."""
        return self.alphabet[self.labels, 0]

    def piece_powers(self, alpha) -> np.ndarray:
        alpha = np.atleast_1d(np.asarray(alpha, dtype=int))
        return np.prod(self.alphabet[self.labels] ** alpha[None, :], axis=1)

    def locate(self, t) -> np.ndarray:
        """Index of the piece containing each ``t`` (right-continuous)."""
        idx = np.searchsorted(self.ends, t, side="right")
        return np.minimum(idx, len(self.lengths) - 1)

    def permuted(self, order) -> "PiecewiseMap":
        order = np.asarray(order)
        return PiecewiseMap(self.D, self.lengths[order], self.labels[order], self.alphabet)

    def __repr__(self) -> str:
        return f"PiecewiseMap(D={self.D:.6g}, pieces={len(self.lengths)})"


def build_r(D: float, L: float) -> PiecewiseMap:
    """Sections of lengths ``L + 1, L, L, L`` labelled ``+1, -1, +i, -i``."""
    if abs(D - (4 * L + 1)) > 1e-12 * max(1.0, D):
        raise ValueError(f"D must equal 4L+1, got D={D}, L={L}")
    return PiecewiseMap(D, [L + 1, L, L, L], [0, 1, 2, 3], SIGNS)


def build_w(sp: CoefficientSplit, scheme) -> PiecewiseMap:
    """Node-valued map laid out as ``I_0, J_0, I_1, J_1, ...`` inside each section.

    ``|I_k^(s)| = c_k^(s)`` and ``|J_k^(s)| = t^(s) / size``.
    """
    if isinstance(scheme, NodeVector):
        scheme = NodeScheme.from_nodes(scheme)
    size = scheme.size
    if sp.cs.shape[1] != size:
        raise ValueError(f"split has {sp.cs.shape[1]} entries, scheme has {size} nodes")
    lengths = np.empty(4 * 2 * size)
    labels = np.empty(4 * 2 * size, dtype=int)
    for s in range(4):
        base = s * 2 * size
        lengths[base:base + 2 * size:2] = sp.cs[s]
        lengths[base + 1:base + 2 * size:2] = sp.ts[s] / size
        labels[base:base + 2 * size:2] = np.arange(size)
        labels[base + 1:base + 2 * size:2] = np.arange(size)
    return PiecewiseMap(4 * sp.L + 1, lengths, labels, scheme.points)


# ---------------------------------------------------------------------------
# exact integrals


def refine(maps: Sequence[PiecewiseMap]) -> tuple[np.ndarray, list[np.ndarray]]:
    """Common refinement of several maps.

    Returns the cell lengths and, per map, the piece index on each cell.
    """
    D = maps[0].D
    for mp in maps[1:]:
        if abs(mp.D - D) > 1e-12 * max(1.0, D):
            raise ValueError(f"maps have different D: {D} vs {mp.D}")
    cuts = np.unique(np.concatenate([[0.0]] + [mp.ends for mp in maps]))
    widths = np.diff(cuts)
    keep = widths > 0
    mids = 0.5 * (cuts[:-1] + cuts[1:])[keep]
    widths = widths[keep]
    return widths, [mp.locate(mids) for mp in maps]


def integrate(r: PiecewiseMap, factors: Sequence[tuple[PiecewiseMap, object]]) -> complex:
    """``integral_0^D r(t) prod_i w_i(t)**alpha_i dt`` computed exactly.

    ``factors`` holds ``(w_i, alpha_i)`` pairs; ``alpha_i`` is an int or a
    multi-index for block maps. Dividing by ``D`` gives the expectation over a
    uniform ``U``.
    """
    maps = [r] + [w for w, _ in factors]
    widths, idx = refine(maps)
    vals = r.alphabet[r.labels[idx[0]], 0] * widths
    for (w, alpha), ix in zip(factors, idx[1:]):
        vals = vals * w.piece_powers(alpha)[ix]
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def moment(r: PiecewiseMap, w: PiecewiseMap, alpha) -> complex:
    """``E[r(U) w(U)**alpha]`` for ``U`` uniform on ``[0, D]``."""
    if abs(r.D - w.D) > 1e-12 * max(1.0, r.D):
        raise ValueError(f"mismatched D: {r.D} vs {w.D}")
    return integrate(r, [(w, alpha)]) / r.D


def indicator_table(r: PiecewiseMap, ws: Sequence[PiecewiseMap]) -> np.ndarray:
    """``T[k_1, ..., k_a] = integral r(t) prod_i 1{w_i(t) = node k_i} dt``.

    The result has one axis per map in ``ws`` with length equal to that map's
    alphabet size. With no maps it is the scalar ``integral r``.
    """
    widths, idx = refine([r] + list(ws))
    vals = r.alphabet[r.labels[idx[0]], 0] * widths
    shape = tuple(w.alphabet.shape[0] for w in ws)
    if not ws:
        return np.array(complex(math.fsum(vals.real), math.fsum(vals.imag)))
    flat = np.ravel_multi_index(tuple(w.labels[ix] for w, ix in zip(ws, idx[1:])), shape)
    out = np.zeros(int(np.prod(shape)), dtype=complex)
    np.add.at(out, flat, vals)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# choosing L


def compute_L(scheme, targets) -> float:
    """``max(c_Re(x), c_Im(x))`` over the given targets.

    This is the smallest ``L`` for which every target can be split. It never
    exceeds the scheme's uniform bound (``K (2/eta)**(K-1)`` in coordinate mode).
    """
    if isinstance(scheme, NodeVector):
        scheme = NodeScheme.from_nodes(scheme)
    C = scheme.coefficients_many(targets)
    re = np.maximum(C.real, 0).sum(axis=1)
    im = np.maximum(C.imag, 0).sum(axis=1)
    return float(max(re.max(), im.max()))


def log_k_L(K: int) -> float:
    """``L`` for ``Omega_K`` from the logarithmic bound on ``sum |c_j|``."""
    return roots_l1_bound(K)


def circle_targets(count: int = 4096) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)
