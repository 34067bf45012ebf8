"""Dimension-free interpolation on product (and product-of-block) sets.

For a target ``z`` the value ``f(z)`` is recovered as

    f(z) = sum_j a_j D**m_j E_{U,P}[ prod_{l <= m_j} r(U_l) f(W(U_P)) ]

where ``P`` maps each coordinate (or block) uniformly to one of ``m_j`` slots,
the ``U_l`` are independent uniforms on ``[0, D]`` and ``W`` evaluates the
node-valued map of each coordinate at its slot's uniform. Every expectation is
over a finite signed measure, so the formula is a linear combination of grid
values; :func:`coefficients` extracts it.

Two independent expectation engines are provided. Mode ``"A"`` enumerates all
maps ``P`` and integrates each slot over the joint refinement of its maps.
Mode ``"B"`` works monomial by monomial, summing over partitions of the
monomial's support weighted by the probability that ``P`` induces them.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .poly import Polynomial, admissible_monomials
from .scheme import (
    NodeScheme,
    PiecewiseMap,
    build_r,
    build_w,
    circle_targets,
    compute_L,
    indicator_table,
    integrate,
    log_k_L,
    required_L,
    split,
)
from .vander import NodeVector, elimination_weights

MAP_BUDGET = 10**8
GRID_BUDGET = 10**5
L_POLICIES = ("per-run", "global-bound", "log-k")


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""

    def __init__(self, what: str, cost: float, budget: float):
        super().__init__(f"{what}: estimated cost {cost:.3g} exceeds budget {budget:.3g}")
        self.cost = cost
        self.budget = budget


# ---------------------------------------------------------------------------
# partitions


def set_partitions(items: Sequence) -> Iterator[list[tuple]]:
    """All set partitions of ``items`` via restricted growth strings."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n
    while True:
        nblocks = max(rgs) + 1
        blocks = [[] for _ in range(nblocks)]
        for item, b in zip(items, rgs):
            blocks[b].append(item)
        yield [tuple(b) for b in blocks]
        # next restricted growth string
        i = n - 1
        while i > 0:
            if rgs[i] <= max(rgs[:i]):
                rgs[i] += 1
                for j in range(i + 1, n):
                    rgs[j] = 0
                break
            i -= 1
        else:
            return


def induced_partition(P: Sequence[int], support: Sequence[int]) -> frozenset:
    """Partition of ``support`` into fibres of ``P``."""
    cells: dict[int, list] = {}
    for i in support:
        cells.setdefault(P[i], []).append(i)
    return frozenset(tuple(c) for c in cells.values())


def falling_factorial(m: int, b: int) -> int:
    out = 1
    for i in range(b):
        out *= m - i
    return out


def partition_probability(n_cells: int, support_size: int, m: int) -> Fraction:
    """Probability that a uniform ``P: [n] -> [m]`` induces a given partition.

    ``m (m-1) ... (m - n_cells + 1) / m**support_size``.
    """
    return Fraction(falling_factorial(m, n_cells), m**support_size)


def _canonical(blocks) -> tuple:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def map_partition_counts(n_units: int, m: int) -> Counter:
    """Count maps ``P: [n_units] -> [m]`` by the partition of units they induce."""
    counts: Counter = Counter()
    units = range(n_units)
    for P in itertools.product(range(m), repeat=n_units):
        counts[_canonical(induced_partition(P, units))] += 1
    return counts


# ---------------------------------------------------------------------------
# plans


@dataclass(eq=False)
class InterpolationPlan:
    """Everything that fixes the coefficients ``c_xi^(z)`` for one target.

    ``schemes`` holds one node scheme per unit (a coordinate, or a block of
    ``k`` coordinates). ``z`` is the target in ``C^n`` with ``n`` the number of
    units times the unit width.
    """

    d: int
    schemes: list[NodeScheme]
    z: np.ndarray
    L: float
    l_policy: str
    m_list: list[int] = field(default_factory=list)
    a_exact: list[Fraction] = field(default_factory=list)

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=complex).ravel()
        if not self.m_list:
            self.m_list = [self.d + j for j in range(self.d)]
        if not self.a_exact:
            self.a_exact = elimination_weights(self.d, self.m_list, exact=True)
        widths = {s.k for s in self.schemes}
        if len(widths) != 1:
            raise ValueError("all units must have the same width")
        if self.z.size != self.n:
            raise ValueError(f"target has {self.z.size} coordinates, plan has {self.n}")
        self.r = build_r(self.D, self.L)
        self.splits = []
        self.w_maps = []
        for u, scheme in enumerate(self.schemes):
            c = scheme.coefficients(self.unit_target(u))
            sp = split(c, self.L)
            self.splits.append(sp)
            self.w_maps.append(build_w(sp, scheme))
        self._r_mass = integrate(self.r, [])
        self._cache: dict = {}

    # -- shape ---------------------------------------------------------------

    @property
    def a_list(self) -> list[float]:
        return [float(a) for a in self.a_exact]

    @property
    def D(self) -> float:
        return 4 * self.L + 1

    @property
    def k(self) -> int:
        return self.schemes[0].k

    @property
    def n_units(self) -> int:
        return len(self.schemes)

    @property
    def n(self) -> int:
        return self.n_units * self.k

    @property
    def grid_size(self) -> int:
        return int(np.prod([s.size for s in self.schemes], dtype=float))

    def unit_target(self, u: int):
        part = self.z[u * self.k:(u + 1) * self.k]
        return complex(part[0]) if self.k == 1 else part

    def unit_exponents(self, alpha) -> list[tuple]:
        alpha = tuple(alpha) + (0,) * (self.n - len(alpha))
        return [alpha[u * self.k:(u + 1) * self.k] for u in range(self.n_units)]

    def bound(self) -> float:
        """``sum_j |a_j| D**m_j``, the plan's discretization constant."""
        return math.fsum(abs(a) * self.D**m for a, m in zip(self.a_list, self.m_list))

    def lp_bound(self, p: float) -> float:
        """``d**((p-1)/p) (sum_j |a_j D**m_j|**p)**(1/p)``."""
        terms = math.fsum(abs(a * self.D**m) ** p for a, m in zip(self.a_list, self.m_list))
        return self.d ** ((p - 1) / p) * terms ** (1 / p)

    def basis(self) -> list[tuple]:
        """Monomials the plan must reproduce: ``|alpha| <= d`` and exponents in each unit set."""
        if self.k == 1:
            K = min(s.size for s in self.schemes)
            return admissible_monomials(self.n, self.d, K)
        allowed = [set(s.exponents) for s in self.schemes]
        K = 1 + max(max(e) for s in self.schemes for e in s.exponents)
        return [a for a in admissible_monomials(self.n, self.d, K)
                if all(ua in allowed[u] for u, ua in enumerate(self.unit_exponents(a)))]

    def grid_points(self) -> np.ndarray:
        """All sampling points, shape ``(grid_size, n)`` in C-order over units."""
        idx = np.indices([s.size for s in self.schemes]).reshape(self.n_units, -1).T
        return np.concatenate([self.schemes[u].points[idx[:, u]] for u in range(self.n_units)], axis=1)

    # -- slot integrals --------------------------------------------------------

    def slot_integral(self, cell: Sequence[tuple[int, tuple]]) -> complex:
        """``integral r(t) prod_{(u, alpha_u) in cell} w_u(t)**alpha_u dt``."""
        key = ("int", tuple(cell))
        if key not in self._cache:
            self._cache[key] = integrate(self.r, [(self.w_maps[u], a) for u, a in cell])
        return self._cache[key]

    def slot_table(self, units: Sequence[int]) -> np.ndarray:
        key = ("tab", tuple(units))
        if key not in self._cache:
            self._cache[key] = indicator_table(self.r, [self.w_maps[u] for u in units])
        return self._cache[key]

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        schemes = []
        for s in self.schemes:
            schemes.append({
                "points": [[[v.real, v.imag] for v in row] for row in s.points],
                "exponents": [list(e) for e in s.exponents],
                "block": s.is_block,
            })
        return {
            "d": self.d,
            "m": list(self.m_list),
            "a": [f"{a.numerator}/{a.denominator}" for a in self.a_exact],
            "L": self.L,
            "D": self.D,
            "l_policy": self.l_policy,
            "z": [[v.real, v.imag] for v in self.z],
            "schemes": schemes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "InterpolationPlan":
        schemes = []
        for s in data["schemes"]:
            pts = np.array([[complex(re, im) for re, im in row] for row in s["points"]])
            if s["block"]:
                schemes.append(NodeScheme.block(pts, s["exponents"]))
            else:
                schemes.append(NodeScheme.from_nodes(pts[:, 0]))
        return cls(
            d=int(data["d"]),
            schemes=schemes,
            z=np.array([complex(re, im) for re, im in data["z"]]),
            L=float(data["L"]),
            l_policy=data["l_policy"],
            m_list=[int(m) for m in data["m"]],
            a_exact=[Fraction(a) for a in data["a"]],
        )

    @classmethod
    def from_json(cls, text: str) -> "InterpolationPlan":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return (f"InterpolationPlan(n={self.n}, units={self.n_units}, d={self.d}, "
                f"m={self.m_list}, L={self.L:.6g}, D={self.D:.6g}, policy={self.l_policy!r})")


def resolve_L(schemes: Sequence[NodeScheme], z, l_policy="per-run", headroom: float = 0.1) -> tuple[float, str]:
    """Pick ``L`` for a plan and return it with the policy name recorded in reports."""
    z = np.asarray(z, dtype=complex).ravel()
    k = schemes[0].k
    needs = []
    for u, s in enumerate(schemes):
        x = z[u * k:(u + 1) * k]
        needs.append(required_L(s.coefficients(complex(x[0]) if k == 1 else x)))
    need = max(needs)
    if isinstance(l_policy, (int, float)) and not isinstance(l_policy, bool):
        L = float(l_policy)
        if L < need:
            raise ValueError(f"L={L} is below the required {need}")
        return L, "fixed"
    if l_policy == "per-run":
        return need * (1 + headroom), "per-run"
    if l_policy == "global-bound":
        return max(s.l1_bound() for s in schemes), "global-bound"
    if l_policy == "log-k":
        sizes = {s.size for s in schemes}
        if any(not s.is_roots_of_unity for s in schemes) or len(sizes) != 1:
            raise ValueError("the log-k policy needs Omega_K (roots of unity) on every coordinate")
        return log_k_L(sizes.pop()), "log-k"
    raise ValueError(f"unknown L policy {l_policy!r}; expected one of {L_POLICIES} or a number")


def _check_target(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    if z.size != n:
        raise ValueError(f"target has {z.size} coordinates, expected {n}")
    if np.any(np.abs(z) > 1 + 1e-12):
        raise ValueError("target lies outside the closed polydisc")
    return z


def build_plan(grid, d: int, z, l_policy="per-run", headroom: float = 0.1, m: Sequence[int] | None = None) -> InterpolationPlan:
    """Plan for one target ``z`` on a product grid.

    Parameters
    ----------
    grid : sequence
        One node set per coordinate: :class:`NodeScheme`, :class:`NodeVector`
        or an array of points. All must have the same size ``K``.
    d : int
        Total-degree bound.
    z : array_like
        Target in the closed polydisc.
    l_policy : {"per-run", "global-bound", "log-k"} or float
        How ``L`` is chosen. ``"per-run"`` uses the smallest admissible value
        for this target times ``1 + headroom``.
    m : sequence of int, optional
        Slot counts; defaults to ``d, ..., 2d - 1``.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    schemes = [g if isinstance(g, NodeScheme) else NodeScheme.from_nodes(g) for g in grid]
    if any(s.is_block for s in schemes):
        raise ValueError("use block_plan for block schemes")
    sizes = {s.size for s in schemes}
    if len(sizes) != 1:
        raise ValueError(f"all coordinate node sets must have the same size, got {sorted(sizes)}")
    for s in schemes:
        if s.size > 1 and not s.eta > 0:
            raise ValueError("degenerate node set (eta = 0)")
    z = _check_target(z, len(schemes))
    L, policy = resolve_L(schemes, z, l_policy, headroom)
    return InterpolationPlan(d=d, schemes=schemes, z=z, L=L, l_policy=policy,
                             m_list=list(m) if m is not None else [])


def block_plan(blocks: Sequence[NodeScheme], d: int, z, l_policy="per-run", headroom: float = 0.1,
               det_threshold: float = 0.0) -> InterpolationPlan:
    """Plan whose units are blocks of ``k`` coordinates with ``M`` node vectors each."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    blocks = list(blocks)
    for b in blocks:
        if b.is_block and abs(b.det) <= det_threshold:
            raise ValueError(f"singular block system: |det| = {abs(b.det):.3g} <= {det_threshold:.3g}")
    z = _check_target(z, len(blocks) * blocks[0].k)
    L, policy = resolve_L(blocks, z, l_policy, headroom)
    return InterpolationPlan(d=d, schemes=blocks, z=z, L=L, l_policy=policy)


# ---------------------------------------------------------------------------
# expectations


def _check_budget(plan: InterpolationPlan, m: int, budget: float) -> None:
    pieces = 8 * sum(s.size for s in plan.schemes) + 4
    cost = float(m) ** plan.n_units * pieces
    if cost > budget:
        raise BudgetExceeded(f"enumerating {m}**{plan.n_units} maps", cost, budget)


def scaled_expectation(plan: InterpolationPlan, f: Polynomial, m: int, mode: str = "A",
                       budget: float = MAP_BUDGET) -> complex:
    """``D**m E_{U,P}[prod_l r(U_l) f(W(U_P))]``, computed without forming ``D**m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m < plan.d:
        warnings.warn(f"m={m} < d={plan.d}: the error polynomial identity is not guaranteed", stacklevel=2)
    if f.n > plan.n:
        raise ValueError(f"polynomial has {f.n} variables, plan has {plan.n}")
    if mode == "A":
        return _expectation_maps(plan, f, m, budget)
    if mode == "B":
        return _expectation_partitions(plan, f, m)
    raise ValueError(f"unknown mode {mode!r}")


def expectation(plan: InterpolationPlan, f: Polynomial, m: int, mode: str = "A",
                budget: float = MAP_BUDGET) -> complex:
    """``E_{U,P}[prod_{l=1}^m r(U_l) f(W(U_P))]`` exactly.

    Mode ``"A"`` enumerates every map ``P``; mode ``"B"`` sums over partitions
    of each monomial's support.
    """
    return scaled_expectation(plan, f, m, mode, budget) / plan.D**m


def _expectation_maps(plan, f, m, budget) -> complex:
    _check_budget(plan, m, budget)
    counts = map_partition_counts(plan.n_units, m)
    total_maps = m**plan.n_units
    unit_exps = {alpha: plan.unit_exponents(alpha) for alpha in f.terms}
    acc = 0j
    for blocks, count in sorted(counts.items()):
        value = 0j
        tables = [plan.slot_table(b) for b in blocks]
        for alpha, coef in f.terms.items():
            ue = unit_exps[alpha]
            term = coef
            for b, tab in zip(blocks, tables):
                # contract the joint node distribution of this slot with node powers
                t = tab
                for u in reversed(b):
                    t = t @ plan.schemes[u].power(ue[u])
                term *= complex(t)
            value += term
        value *= plan._r_mass ** (m - len(blocks))
        acc += count / total_maps * value
    return acc


def _expectation_partitions(plan, f, m) -> complex:
    acc = 0j
    for alpha, coef in f.terms.items():
        ue = plan.unit_exponents(alpha)
        support = [u for u, a in enumerate(ue) if any(a)]
        mono = 0j
        for cells in set_partitions(support):
            if len(cells) > m:
                continue
            prob = float(partition_probability(len(cells), len(support), m))
            value = plan._r_mass ** (m - len(cells))
            for cell in cells:
                value *= plan.slot_integral(tuple((u, ue[u]) for u in cell))
            mono += prob * value
        acc += coef * mono
    return acc


# ---------------------------------------------------------------------------
# coefficient tables


@dataclass(eq=False)
class CoefficientTable:
    """Coefficients ``c_xi`` over the sampling grid of a plan.

    ``values`` has one axis per unit, indexed by node; ``points`` lists the grid
    points in the same (C-order) flattening.
    """

    z: np.ndarray
    values: np.ndarray
    points: np.ndarray

    @property
    def l1(self) -> float:
        return math.fsum(np.abs(self.values).ravel())

    @property
    def entries(self) -> dict[tuple, complex]:
        flat = self.values.ravel()
        return {tuple(complex(v) for v in p): complex(c) for p, c in zip(self.points, flat)}

    def apply(self, values) -> complex:
        """``sum_xi c_xi v_xi`` for values listed in ``points`` order."""
        return complex(np.dot(self.values.ravel(), np.asarray(values, dtype=complex).ravel()))

    def project(self, n: int) -> "CoefficientTable":
        """Merge points that agree on the first ``n`` coordinates (summing coefficients)."""
        proj = self.points[:, :n]
        keys = [tuple(np.round(p, 14)) for p in proj]
        order: dict[tuple, int] = {}
        for key in keys:
            order.setdefault(key, len(order))
        vals = np.zeros(len(order), dtype=complex)
        pts = np.zeros((len(order), n), dtype=complex)
        for key, p, c in zip(keys, proj, self.values.ravel()):
            i = order[key]
            vals[i] += c
            pts[i] = p
        return CoefficientTable(self.z[:n], vals, pts)

    def to_dict(self) -> dict:
        return {
            "z": [[v.real, v.imag] for v in self.z],
            "l1": self.l1,
            "entries": [
                {"xi": [[v.real, v.imag] for v in p], "re": c.real, "im": c.imag}
                for p, c in zip(self.points, self.values.ravel())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "CoefficientTable":
        pts = np.array([[complex(re, im) for re, im in e["xi"]] for e in data["entries"]])
        vals = np.array([complex(e["re"], e["im"]) for e in data["entries"]])
        return cls(np.array([complex(re, im) for re, im in data["z"]]), vals, pts)


def _partition_tensor(plan: InterpolationPlan, blocks) -> np.ndarray:
    tensor = np.array(1.0 + 0j)
    axes: list[int] = []
    for b in blocks:
        tensor = np.multiply.outer(tensor, plan.slot_table(b))
        axes.extend(b)
    return np.transpose(tensor, np.argsort(axes))


def coefficients(plan: InterpolationPlan, method: str = "maps", budget: float = MAP_BUDGET,
                 grid_budget: float = GRID_BUDGET) -> CoefficientTable:
    """Extract ``c_xi = sum_j a_j D**m_j E[prod r(U_l) 1{W(U_P) = xi}]``.

    ``method="maps"`` counts every map ``P`` by the partition it induces;
    ``method="partitions"`` weights each partition of the units by the number
    of injective slot assignments instead. Both give the same table.
    """
    if plan.grid_size > grid_budget:
        raise BudgetExceeded("coefficient table", plan.grid_size, grid_budget)
    weights: dict[tuple, float] = {}
    for a, m in zip(plan.a_list, plan.m_list):
        if method == "maps":
            _check_budget(plan, m, budget)
            counts = map_partition_counts(plan.n_units, m)
        elif method == "partitions":
            counts = {_canonical(p): falling_factorial(m, len(p))
                      for p in set_partitions(range(plan.n_units)) if len(p) <= m}
        else:
            raise ValueError(f"unknown method {method!r}")
        total = m**plan.n_units
        for blocks, count in counts.items():
            w = a * count / total * plan._r_mass ** (m - len(blocks))
            weights[blocks] = weights.get(blocks, 0.0) + w
    shape = tuple(s.size for s in plan.schemes)
    values = np.zeros(shape, dtype=complex)
    for blocks in sorted(weights):
        values += weights[blocks] * _partition_tensor(plan, blocks)
    return CoefficientTable(plan.z.copy(), values, plan.grid_points())


def reproduction_residuals(plan: InterpolationPlan, table: CoefficientTable, basis=None) -> dict[tuple, float]:
    """``|sum_xi c_xi xi**alpha - z**alpha|`` for each basis monomial."""
    basis = plan.basis() if basis is None else basis
    out = {}
    for alpha in basis:
        ue = plan.unit_exponents(alpha)
        t = table.values
        for u in reversed(range(plan.n_units)):
            t = t @ plan.schemes[u].power(ue[u])
        target = np.prod([plan.z[i] ** a for i, a in enumerate(alpha) if a]) if any(alpha) else 1.0
        out[tuple(alpha)] = abs(complex(t) - target)
    return out


# ---------------------------------------------------------------------------
# error polynomial


@dataclass
class ResidualCurve:
    ms: list[int]
    residuals: list[complex]
    fit: list[complex]
    extrapolation_error: float
    affine_residual: float

    def to_dict(self) -> dict:
        return {
            "m": self.ms,
            "residuals": [[r.real, r.imag] for r in self.residuals],
            "fit": [[c.real, c.imag] for c in self.fit],
            "extrapolation_error": self.extrapolation_error,
            "affine_residual": self.affine_residual,
        }


def residual_curve(plan: InterpolationPlan, f: Polynomial, m_range: Sequence[int] | None = None,
                   mode: str = "B") -> ResidualCurve:
    """Residuals ``f(z) - D**m E(m)`` and their fit by a polynomial in ``1/m``.

    The fit has degree at most ``d - 1`` and vanishes at 0; it is least-squares
    through the first ``d`` residuals and the reported extrapolation error is
    the largest misfit over the remaining ``m``. ``affine_residual`` is
    ``|sum_j a_j residual(m_j)|`` over the plan's own slot counts.
    """
    d = plan.d
    ms = list(range(d, 2 * d + 4)) if m_range is None else [int(m) for m in m_range]
    if min(ms) < d or max(ms) > d + 8:
        raise ValueError(f"m_range must lie within [{d}, {d + 8}]")
    fz = f(plan.z[:f.n])
    res = {m: fz - scaled_expectation(plan, f, m, mode) for m in sorted(set(ms) | set(plan.m_list))}
    ordered = [res[m] for m in ms]
    if d == 1:
        fit = []
        pred = np.zeros(len(ms), dtype=complex)
    else:
        first = ms[:d]
        A = np.array([[(1 / m) ** p for p in range(1, d)] for m in first], dtype=complex)
        fit, *_ = np.linalg.lstsq(A, np.array([res[m] for m in first]), rcond=None)
        fit = [complex(c) for c in fit]
        pred = np.array([sum(c * (1 / m) ** (p + 1) for p, c in enumerate(fit)) for m in ms])
    rest = np.abs(np.array(ordered) - pred)[d:]
    extrap = float(rest.max()) if rest.size else 0.0
    affine = abs(sum(a * res[m] for a, m in zip(plan.a_list, plan.m_list)))
    return ResidualCurve(ms, ordered, fit, extrap, float(affine))


def interpolate(plan: InterpolationPlan, f: Polynomial) -> complex:
    """``sum_j a_j D**m_j E(m_j)``; equals ``f(z)`` for admissible ``f``."""
    return sum(a * scaled_expectation(plan, f, m, "B") for a, m in zip(plan.a_list, plan.m_list))


def dense_circle_L(grid, count: int = 4096) -> float:
    """``max(c_Re, c_Im)`` over ``count`` equispaced points of the unit circle, max over coordinates.

    Both functions are subharmonic in the target, so the circle carries the
    maximum over the disc; the sample gives it up to discretization error.
    """
    targets = circle_targets(count)
    return max(compute_L(g if isinstance(g, NodeScheme) else NodeScheme.from_nodes(g), targets) for g in grid)


__all__ = [
    "BudgetExceeded",
    "CoefficientTable",
    "InterpolationPlan",
    "NodeVector",
    "PiecewiseMap",
    "ResidualCurve",
    "block_plan",
    "build_plan",
    "coefficients",
    "dense_circle_L",
    "expectation",
    "induced_partition",
    "interpolate",
    "map_partition_counts",
    "partition_probability",
    "reproduction_residuals",
    "residual_curve",
    "scaled_expectation",
    "set_partitions",
]
