"""Sparse analytic polynomials on the polydisc.

A :class:`Polynomial` stores a finite map from exponent tuples to complex
coefficients together with the total-degree bound ``d`` and the
individual-degree parameter ``K`` (every exponent is at most ``K - 1``).
Instances are immutable.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

Monomial = tuple[int, ...]


def graded_lex_key(alpha: Iterable[int]) -> tuple:
    """Sort key: total degree first, then lexicographically decreasing.

    With this key ``(1, 0)`` sorts before ``(0, 1)``.
    """
    alpha = tuple(alpha)
    return (sum(alpha), tuple(-a for a in alpha))


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial ``sum_alpha coef[alpha] * z**alpha``."""

    n: int
    d: int
    K: int
    terms: Mapping[Monomial, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        clean = {}
        for alpha, coef in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n:
                raise ValueError(f"monomial {alpha} has length {len(alpha)}, expected {self.n}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            if any(a > self.K - 1 for a in alpha):
                raise ValueError(f"monomial {alpha} exceeds individual degree {self.K - 1}")
            if sum(alpha) > self.d:
                raise ValueError(f"monomial {alpha} exceeds total degree {self.d}")
            coef = complex(coef)
            if coef != 0:
                clean[alpha] = clean.get(alpha, 0j) + coef
        clean = {a: c for a, c in clean.items() if c != 0}
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda t: graded_lex_key(t[0]))))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, value: complex, n: int, d: int = 0, K: int = 1) -> "Polynomial":
        return cls(n, d, K, {(0,) * n: value})

    @classmethod
    def monomial(cls, alpha: Iterable[int], K: int, coef: complex = 1.0, d: int | None = None) -> "Polynomial":
        alpha = tuple(alpha)
        return cls(len(alpha), sum(alpha) if d is None else d, K, {alpha: coef})

    # -- arithmetic used for linearity checks --------------------------------

    def _compatible(self, other: "Polynomial") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._compatible(other)
        terms = dict(self.terms)
        for alpha, coef in other.terms.items():
            terms[alpha] = terms.get(alpha, 0j) + coef
        return Polynomial(self.n, max(self.d, other.d), max(self.K, other.K), terms)

    def __mul__(self, scalar: complex) -> "Polynomial":
        return Polynomial(self.n, self.d, self.K, {a: scalar * c for a, c in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return self * -1

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Actual total degree (0 for the zero polynomial)."""
        return max((sum(a) for a in self.terms), default=0)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z) -> complex:
        return eval_poly(self, z)

    def eval_many(self, Z) -> np.ndarray:
        """Evaluate at every row of ``Z`` (shape ``(N, n)``)."""
        Z = np.asarray(Z, dtype=complex)
        if Z.ndim != 2 or Z.shape[1] != self.n:
            raise ValueError(f"expected points of shape (N, {self.n}), got {Z.shape}")
        if not self.terms:
            return np.zeros(len(Z), dtype=complex)
        top = max(max(a) for a in self.terms)
        # powers[p, i, j] = Z[i, j] ** p
        powers = np.ones((top + 1,) + Z.shape, dtype=complex)
        for p in range(1, top + 1):
            powers[p] = powers[p - 1] * Z
        out = np.zeros(len(Z), dtype=complex)
        cols = np.arange(self.n)
        for alpha, coef in self.terms.items():
            out += coef * np.prod(powers[list(alpha), :, cols].T, axis=1)
        return out

    def coefficient_array(self, K: int | None = None) -> np.ndarray:
        """Dense coefficient tensor of shape ``(K,) * n``."""
        K = self.K if K is None else K
        arr = np.zeros((K,) * self.n, dtype=complex)
        for alpha, coef in self.terms.items():
            arr[alpha] = coef
        return arr

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "K": self.K,
            "terms": [
                {"alpha": list(alpha), "re": coef.real, "im": coef.imag}
                for alpha, coef in self.terms.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "Polynomial":
        terms = {tuple(t["alpha"]): complex(t["re"], t["im"]) for t in data["terms"]}
        return cls(int(data["n"]), int(data["d"]), int(data["K"]), terms)

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        return cls.from_dict(json.loads(text))


def eval_poly(f: Polynomial, z) -> complex:
    """Evaluate ``f`` at a single point ``z`` in ``C^n``.

    Powers are accumulated per coordinate by repeated multiplication; the
    exponents never exceed ``K - 1`` so no squaring is needed.
    """
    z = np.asarray(z, dtype=complex).ravel()
    if z.shape[0] != f.n:
        raise ValueError(f"point has length {z.shape[0]}, polynomial has n={f.n}")
    if not f.terms:
        return 0j
    top = max(max(a) for a in f.terms)
    powers = [[1 + 0j] for _ in range(f.n)]
    for j in range(f.n):
        for _ in range(top):
            powers[j].append(powers[j][-1] * z[j])
    total = 0j
    for alpha, coef in f.terms.items():
        term = coef
        for j, a in enumerate(alpha):
            if a:
                term *= powers[j][a]
        total += term
    return complex(total)


def roots_of_unity(K: int) -> np.ndarray:
    """The K-th roots of unity ``exp(2 pi i k / K)`` in natural order."""
    return np.exp(2j * np.pi * np.arange(K) / K)


def grid_points(node_sets) -> np.ndarray:
    """All points of the product of ``node_sets``, C-order (last coordinate fastest)."""
    node_sets = [np.asarray(z, dtype=complex).ravel() for z in node_sets]
    mesh = np.meshgrid(*node_sets, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def eval_on_roots_grid(f: Polynomial, M: int) -> np.ndarray:
    """Values of ``f`` on ``Omega_M^n`` as an array of shape ``(M,) * n``.

    Entry ``[k_1, ..., k_n]`` is ``f(w^k_1, ..., w^k_n)`` with ``w = exp(2 pi i / M)``.
    Uses an inverse FFT of the zero-padded coefficient tensor.
    """
    top = max((max(a) for a in f.terms), default=0)
    if M <= top:
        raise ValueError(f"grid size {M} must exceed the largest exponent {top}")
    coefs = f.coefficient_array(M)
    return np.fft.ifftn(coefs) * M ** f.n


def fourier_from_grid(samples, K: int, n: int, d: int | None = None, tol: float = 0.0) -> Polynomial:
    """Recover the polynomial of individual degree ``<= K - 1`` from its values on ``Omega_K^n``.

    Parameters
    ----------
    samples : ndarray or mapping
        Either an array of shape ``(K,) * n`` indexed by root exponents, or a
        mapping from index tuples ``(k_1, ..., k_n)`` to values (the point is
        ``(w^k_1, ..., w^k_n)``).
    K, n : int
        Grid parameters.
    d : int, optional
        Total-degree bound; defaults to ``n * (K - 1)``. Monomials above ``d``
        are dropped.
    tol : float
        Coefficients with modulus ``<= tol`` are pruned. The default keeps
        everything that is not exactly zero.
    """
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    if isinstance(samples, Mapping):
        arr = np.empty((K,) * n, dtype=complex)
        for idx in itertools.product(range(K), repeat=n):
            try:
                arr[idx] = samples[idx]
            except KeyError:
                raise KeyError(f"missing grid point {idx}") from None
    else:
        arr = np.asarray(samples, dtype=complex)
        if arr.shape != (K,) * n:
            raise ValueError(f"samples have shape {arr.shape}, expected {(K,) * n}")
    coefs = np.fft.fftn(arr) / K**n
    d = n * (K - 1) if d is None else d
    terms = {}
    for idx in zip(*np.nonzero(np.abs(coefs) > tol)):
        alpha = tuple(int(i) for i in idx)
        if sum(alpha) <= d:
            terms[alpha] = coefs[idx]
    return Polynomial(n, d, K, terms)


def homogeneous_part(f: Polynomial, ell: int) -> Polynomial:
    """Restriction of ``f`` to monomials of total degree exactly ``ell``."""
    if not 0 <= ell <= f.d:
        raise ValueError(f"degree {ell} outside [0, {f.d}]")
    return Polynomial(f.n, f.d, f.K, {a: c for a, c in f.terms.items() if sum(a) == ell})


def admissible_monomials(n: int, d: int, K: int) -> list[Monomial]:
    """All exponents with ``|alpha| <= d`` and ``alpha_j <= K - 1``, graded-lex."""
    out = []

    def rec(prefix, remaining, j):
        if j == n:
            out.append(tuple(prefix))
            return
        for a in range(min(K - 1, remaining) + 1):
            prefix.append(a)
            rec(prefix, remaining - a, j + 1)
            prefix.pop()

    rec([], d, 0)
    return sorted(out, key=graded_lex_key)


def random_polynomial(n: int, d: int, K: int, n_terms: int | None = None, rng=None) -> Polynomial:
    """Random polynomial with coefficients uniform in the complex unit disc.

    The support is a uniformly random subset of size ``n_terms`` (all admissible
    monomials when ``None``) of the admissible exponents.
    """
    rng = np.random.default_rng(rng)
    basis = admissible_monomials(n, d, K)
    if n_terms is None or n_terms >= len(basis):
        support = basis
    else:
        picks = rng.choice(len(basis), size=n_terms, replace=False)
        support = [basis[i] for i in sorted(picks)]
    radius = np.sqrt(rng.uniform(size=len(support)))
    angle = rng.uniform(0, 2 * np.pi, size=len(support))
    coefs = radius * np.exp(1j * angle)
    return Polynomial(n, d, K, dict(zip(support, coefs)))
