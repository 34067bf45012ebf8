"""Sub-product sampling sets built from blocks of ``k`` coordinates.

Each block of ``k`` coordinates gets ``M = |Lambda|`` node vectors chosen from
the product of its coordinate node sets, where ``Lambda`` is the set of
exponents of ``k``-variable monomials with total degree ``<= d`` and individual
degree ``<= K - 1``. The generalized Vandermonde determinant ``P(Y)`` must not
vanish; the sampling set is the product of the per-block point lists.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .poly import admissible_monomials
from .scheme import NodeScheme
from .vander import elimination_weights


@dataclass(frozen=True)
class ExponentSet:
    k: int
    d: int
    K: int
    elements: tuple[tuple[int, ...], ...]

    @property
    def M(self) -> int:
        return len(self.elements)

    def size_bound(self) -> int:
        """``(d + 1) k**d``."""
        return (self.d + 1) * self.k**self.d


def lambda_set(k: int, d: int, K: int) -> ExponentSet:
    """All ``alpha`` in ``N^k`` with ``|alpha| <= d`` and ``alpha_i <= K - 1``, graded-lex."""
    if k < 1 or d < 1 or K < 2:
        raise ValueError(f"need k, d >= 1 and K >= 2, got k={k}, d={d}, K={K}")
    return ExponentSet(k, d, K, tuple(admissible_monomials(k, d, K)))


def _elements(lam) -> list[tuple[int, ...]]:
    return list(lam.elements) if isinstance(lam, ExponentSet) else [tuple(a) for a in lam]


def design_matrix(Y, lam) -> np.ndarray:
    """``A[i, j] = y_j ** beta_i``."""
    Y = np.asarray(Y, dtype=complex)
    if Y.ndim == 1:
        Y = Y[:, None]
    betas = np.array(_elements(lam))
    return np.prod(Y[None, :, :] ** betas[:, None, :], axis=2)


def det_P(Y, lam) -> complex:
    """Determinant of ``[y_j ** beta_i]`` (LU with partial pivoting)."""
    A = design_matrix(Y, lam)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"need {A.shape[0]} node vectors, got {A.shape[1]}")
    return complex(np.linalg.det(A))


def hadamard_bound(M: int) -> float:
    """``M**(M/2)``: largest possible ``|det|`` for entries in the unit disc."""
    return float(M) ** (M / 2)


def cramer_coefficients(Y, lam, z) -> np.ndarray:
    """Solve ``sum_j c_j y_j**alpha = z**alpha`` by Cramer's rule."""
    A = design_matrix(Y, lam)
    rhs = design_matrix(np.atleast_2d(np.asarray(z, dtype=complex)), lam)[:, 0]
    det = np.linalg.det(A)
    out = np.empty(A.shape[1], dtype=complex)
    for j in range(A.shape[1]):
        Aj = A.copy()
        Aj[:, j] = rhs
        out[j] = np.linalg.det(Aj) / det
    return out


def monte_carlo_det_moment(lam, samples: int = 100_000, rng=None, batch: int = 20_000) -> tuple[float, float]:
    """Mean of ``|P(Y)|**2`` for ``Y`` uniform on the torus ``T^{kM}``, with its standard error."""
    rng = np.random.default_rng(rng)
    betas = np.array(_elements(lam))
    M, k = betas.shape
    vals = []
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        Y = np.exp(2j * np.pi * rng.uniform(size=(b, M, k)))
        A = np.prod(Y[:, None, :, :] ** betas[None, :, None, :], axis=3)
        vals.append(np.abs(np.linalg.det(A)) ** 2)
        done += b
    vals = np.concatenate(vals)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))


def degree_constant(d: int, D: float) -> float:
    """``sum_j |a_j| D**m_j`` for degree ``d``."""
    a = elimination_weights(d)
    return math.fsum(abs(aj) * D ** (d + j) for j, aj in enumerate(a))


@dataclass(eq=False)
class BlockDesign:
    Y: np.ndarray
    lam: ExponentSet
    detP: complex
    threshold: float
    evaluations: int = 0

    @property
    def M(self) -> int:
        return self.lam.M

    @property
    def k(self) -> int:
        return self.lam.k

    @property
    def meets_threshold(self) -> bool:
        return abs(self.detP) >= self.threshold

    @property
    def flag(self) -> str:
        if abs(self.detP) == 0:
            return "singular"
        return "ok" if self.meets_threshold else "below-threshold"

    def scheme(self) -> NodeScheme:
        return NodeScheme.block(self.Y, self.lam.elements)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "M": self.M,
            "lambda": [list(a) for a in self.lam.elements],
            "nodes": [[[v.real, v.imag] for v in row] for row in self.Y],
            "detP": {"re": self.detP.real, "im": self.detP.imag},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data, K: int | None = None, d: int | None = None, threshold: float = 0.0) -> "BlockDesign":
        elements = tuple(tuple(a) for a in data["lambda"])
        K = K if K is not None else 1 + max(max(a) for a in elements)
        d = d if d is not None else max(sum(a) for a in elements)
        lam = ExponentSet(int(data["k"]), d, K, elements)
        Y = np.array([[complex(re, im) for re, im in row] for row in data["nodes"]])
        det = complex(data["detP"]["re"], data["detP"]["im"])
        return cls(Y, lam, det, threshold)


def search_block(Z_blocks, lam: ExponentSet, budget: int = 200_000, rng_seed=0, restarts: int = 32,
                 threshold: float | None = None, D: float | None = None) -> BlockDesign:
    """Pick ``M`` node vectors from ``Z_1 x ... x Z_k`` maximizing ``|P(Y)|``.

    Random restarts followed by greedy best single-slot swaps until a local
    optimum. Ties are broken by the candidate index tuple, so a fixed seed
    gives a fixed design. ``budget`` caps the number of determinant
    evaluations. If ``threshold`` is not given it is ``sqrt(M!) / C`` with
    ``C = sum_j |a_j| D**m_j`` at degree ``d M``; ``D`` defaults to 5 (the value
    for ``L = 1``).
    """
    Z_blocks = [np.asarray(z, dtype=complex).ravel() for z in Z_blocks]
    if len(Z_blocks) != lam.k:
        raise ValueError(f"need {lam.k} coordinate node sets, got {len(Z_blocks)}")
    M = lam.M
    index_pool = list(itertools.product(*[range(z.size) for z in Z_blocks]))
    pool = np.array([[Z_blocks[r][i[r]] for r in range(lam.k)] for i in index_pool])
    if len(pool) < M:
        raise ValueError(f"pool has {len(pool)} candidates, need {M}")
    if threshold is None:
        C = degree_constant(lam.d * M, 5.0 if D is None else D)
        threshold = math.sqrt(math.factorial(M)) / C
    betas = np.array(lam.elements)
    pool_cols = np.prod(pool[None, :, :] ** betas[:, None, :], axis=2)  # (M, |pool|)
    rng = np.random.default_rng(rng_seed)
    evals = 0

    def score(sel) -> float:
        nonlocal evals
        evals += 1
        return abs(np.linalg.det(pool_cols[:, list(sel)]))

    def better(v, sel, ref_v, ref_sel) -> bool:
        # larger |det| wins; near-ties go to the smaller index tuple
        if v > ref_v * (1 + 1e-12):
            return True
        return ref_sel is not None and v >= ref_v * (1 - 1e-12) and tuple(sel) < tuple(ref_sel)

    best_sel, best_val = None, -1.0
    for _ in range(restarts):
        if evals >= budget:
            break
        sel = sorted(rng.choice(len(pool), size=M, replace=False).tolist())
        val = score(sel)
        while evals < budget:
            step_val, step_sel = val, None
            chosen = set(sel)
            for slot, c in itertools.product(range(M), range(len(pool))):
                if c in chosen or evals >= budget:
                    continue
                trial = sorted(sel[:slot] + [c] + sel[slot + 1:])
                v = score(trial)
                if v > val * (1 + 1e-12) and better(v, trial, step_val, step_sel):
                    step_val, step_sel = v, trial
            if step_sel is None:
                break
            val, sel = step_val, step_sel
        if best_sel is None or better(val, sel, best_val, best_sel):
            best_val, best_sel = val, sel
    Y = pool[best_sel]
    return BlockDesign(Y, lam, det_P(Y, lam), float(threshold), evals)


def choose_k(d: int, eps: float) -> tuple[int, int]:
    """Smallest ``k`` with ``((d+1) k**d)**(1/k) <= 1 + eps``, and the closed-form sufficient value.

    The second value is the largest integer strictly below ``100 (d/eps) log(d/eps)``.
    """
    if d < 1 or not 0 < eps <= 0.5:
        raise ValueError(f"need d >= 1 and 0 < eps <= 1/2, got d={d}, eps={eps}")
    k = 1
    while ((d + 1) * k**d) ** (1 / k) > 1 + eps:
        k += 1
    x = 100 * (d / eps) * math.log(d / eps)
    closed = math.ceil(x) - 1
    return k, closed


def k_condition(d: int, k: int, eps: float) -> bool:
    return ((d + 1) * k**d) ** (1 / k) <= 1 + eps


def assemble(designs, n: int, k: int) -> np.ndarray:
    """Product of the per-block point lists, projected to the first ``n`` coordinates.

    Needs ``ceil(n / k)`` designs; trailing coordinates of the last block are
    dropped when ``k`` does not divide ``n``. Rows are in C-order over blocks.
    """
    n_blocks = math.ceil(n / k)
    if len(designs) != n_blocks:
        raise ValueError(f"need {n_blocks} designs for n={n}, k={k}, got {len(designs)}")
    Ys = [np.asarray(getattr(dsg, "Y", dsg), dtype=complex).reshape(-1, k) for dsg in designs]
    idx = np.indices([Y.shape[0] for Y in Ys]).reshape(n_blocks, -1).T
    pts = np.concatenate([Ys[s][idx[:, s]] for s in range(n_blocks)], axis=1)
    return pts[:, :n]


def cardinality_bound(M: int, n: int, k: int) -> int:
    """``M ** ceil(n / k)``."""
    return M ** math.ceil(n / k)
