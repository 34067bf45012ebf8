"""Norm measurements and the experiments built on them.

Torus sup norms are only ever certified from below (maximum over nested
roots-of-unity grids), so every asserted inequality compares a lower bound of
its left side with a computable right side.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .interp import build_plan, resolve_L
from .poly import Polynomial, eval_on_roots_grid, grid_points, homogeneous_part, random_polynomial, roots_of_unity
from .scheme import NodeScheme, circle_targets, compute_L, log_k_L
from .smallset import degree_constant
from .vander import elimination_weights

GRID_BUDGET = 2 * 10**6


class BudgetError(RuntimeError):
    def __init__(self, what: str, cost: float, budget: float):
        super().__init__(f"{what}: {cost:.3g} points exceeds budget {budget:.3g}")
        self.cost = cost
        self.budget = budget


@dataclass
class NormEstimate:
    value: float
    kind: str
    trace: list[tuple[int, float]] = field(default_factory=list)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isfinite(obj):
            return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


@dataclass
class ExperimentReport:
    experiment: str
    inputs: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    measurements: dict = field(default_factory=dict)
    assertions: list[dict] = field(default_factory=list)
    seed: int | None = None
    runtime_ms: float = 0.0
    version: str = __version__

    def check(self, name: str, lhs: float, rhs: float, op: str = "<=", tol: float = 0.0) -> bool:
        """Record ``lhs op rhs`` (with absolute slack ``tol``)."""
        if op == "<=":
            ok = lhs <= rhs + tol
        elif op == ">=":
            ok = lhs >= rhs - tol
        elif op == ">":
            ok = lhs > rhs
        elif op == "==":
            ok = abs(lhs - rhs) <= tol
        else:
            raise ValueError(f"unknown comparison {op!r}")
        self.assertions.append({"name": name, "pass": bool(ok), "lhs": lhs, "rhs": rhs, "op": op})
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(a["pass"] for a in self.assertions)

    def first_failure(self) -> str | None:
        for a in self.assertions:
            if not a["pass"]:
                return a["name"]
        return None

    def to_dict(self) -> dict:
        return _jsonable({
            "experiment": self.experiment,
            "inputs": self.inputs,
            "constants": self.constants,
            "measurements": self.measurements,
            "assertions": self.assertions,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "version": self.version,
        })

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def write_csv(self, path, column: str) -> None:
        """Write one measurement series (e.g. a ratio distribution) as CSV."""
        values = self.measurements[column]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", column])
            for i, v in enumerate(values):
                writer.writerow([i, v])


class _Timer:
    def __init__(self, report: ExperimentReport):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.runtime_ms = (time.perf_counter() - self.t0) * 1e3
        return False


# ---------------------------------------------------------------------------
# norms


def _as_points(f: Polynomial, grid) -> np.ndarray:
    if isinstance(grid, np.ndarray) and grid.ndim == 2 and grid.shape[1] == f.n and grid.dtype != object:
        return grid
    return None


def sup_grid(f: Polynomial, grid, budget: float = GRID_BUDGET) -> NormEstimate:
    """Exact ``max |f|`` over a finite set.

    ``grid`` is either a list of per-coordinate node sets (product set) or an
    explicit ``(N, n)`` array of points.
    """
    pts = _as_points(f, grid)
    if pts is None:
        sets = [np.asarray(getattr(g, "nodes", getattr(g, "points", g)), dtype=complex).ravel() for g in grid]
        if len(sets) != f.n:
            raise ValueError(f"grid has {len(sets)} coordinates, polynomial has {f.n}")
        size = float(np.prod([s.size for s in sets], dtype=float))
        if size > budget:
            raise BudgetError("sup_grid", size, budget)
        pts = grid_points(sets)
    elif len(pts) > budget:
        raise BudgetError("sup_grid", len(pts), budget)
    vals = np.abs(f.eval_many(pts))
    return NormEstimate(float(vals.max()), "exact-grid", [(len(pts), float(vals.max()))])


def default_levels(f: Polynomial, budget: float = GRID_BUDGET, count: int = 4) -> list[int]:
    top = max((max(a) for a in f.terms), default=0)
    M = 1 << max(2, math.ceil(math.log2(2 * (top + 1))))
    levels = []
    while len(levels) < count and float(M) ** f.n <= budget:
        levels.append(M)
        M *= 2
    if not levels:
        levels = [max(top + 1, 2)]
    return levels


def sup_torus(f: Polynomial, levels: Sequence[int] | None = None, budget: float = GRID_BUDGET) -> NormEstimate:
    """Lower bound of ``||f||_{T^n}`` from roots-of-unity grids ``Omega_M^n``.

    With doubling ``M`` the grids are nested, so the trace is non-decreasing.
    """
    levels = default_levels(f, budget) if levels is None else list(levels)
    best = 0.0
    trace = []
    for M in levels:
        if float(M) ** f.n > budget:
            raise BudgetError("sup_torus", float(M) ** f.n, budget)
        vals = np.abs(eval_on_roots_grid(f, M)) if f.terms else np.zeros(1)
        best = max(best, float(vals.max()))
        trace.append((M, best))
    return NormEstimate(best, "refined-lower-bound", trace)


def lp_norm(f: Polynomial, p, domain="torus", M: int | None = None, budget: float = GRID_BUDGET) -> NormEstimate:
    """``L^p`` norm under the uniform probability measure.

    ``domain="torus"`` uses the trapezoid rule on ``Omega_M^n``, exact for even
    ``p`` once ``M >= p (K - 1) / 2 + 1``; the default ``M = p (K - 1) + 1``
    leaves a margin. A list of node sets means the finite product grid.
    ``p = inf`` delegates to the sup-norm routines.
    """
    if p == math.inf or p == "inf":
        return sup_torus(f, budget=budget) if domain == "torus" else sup_grid(f, domain, budget)
    p = int(p)
    if p < 2 or p % 2:
        raise ValueError(f"only even p (and inf) are supported, got {p}")
    if isinstance(domain, str):
        if domain != "torus":
            raise ValueError(f"unknown domain {domain!r}")
        top = max((max(a) for a in f.terms), default=0)
        need = p * top // 2 + 1
        M = p * top + 1 if M is None else M
        M = max(M, 2)
        if M < need:
            raise ValueError(f"M={M} is too small for exact quadrature, need {need}")
        if float(M) ** f.n > budget:
            raise BudgetError("lp_norm", float(M) ** f.n, budget)
        vals = np.abs(eval_on_roots_grid(f, M)) ** p if f.terms else np.zeros(1)
        return NormEstimate(float(np.mean(vals)) ** (1 / p), "quadrature", [(M, float(np.mean(vals)) ** (1 / p))])
    sets = [np.asarray(getattr(g, "nodes", g), dtype=complex).ravel() for g in domain]
    pts = grid_points(sets)
    if len(pts) > budget:
        raise BudgetError("lp_norm", len(pts), budget)
    vals = np.abs(f.eval_many(pts)) ** p
    value = float(np.mean(vals)) ** (1 / p)
    return NormEstimate(value, "exact-grid", [(len(pts), value)])


# ---------------------------------------------------------------------------
# plan constants for whole-domain statements


def domain_constants(grid, d: int, l_policy="per-run", headroom: float = 0.1, extra_targets=None) -> dict:
    """``L``, ``D``, weights and ``sum_j |a_j| D**m_j`` valid on the whole torus.

    ``"per-run"`` takes the maximum of ``max(c_Re, c_Im)`` over a dense sample
    of the unit circle (plus ``extra_targets``) times ``1 + headroom``.
    """
    schemes = [g if isinstance(g, NodeScheme) else NodeScheme.from_nodes(g) for g in grid]
    targets = circle_targets()
    if extra_targets is not None:
        targets = np.concatenate([targets, np.asarray(extra_targets, dtype=complex).ravel()])
    if l_policy == "per-run":
        L = max(compute_L(s, targets) for s in schemes) * (1 + headroom)
        policy = "per-run"
    else:
        L, policy = resolve_L(schemes, np.zeros(len(schemes)), l_policy, headroom)
    D = 4 * L + 1
    a = elimination_weights(d)
    m = [d + j for j in range(d)]
    bound = math.fsum(abs(aj) * D**mj for aj, mj in zip(a, m))
    return {"L": L, "D": D, "l_policy": policy, "a": a, "m": m, "bound": bound}


def lp_constant(const: dict, p: int) -> float:
    d = len(const["a"])
    s = math.fsum(abs(a * const["D"] ** m) ** p for a, m in zip(const["a"], const["m"]))
    return d ** ((p - 1) / p) * s ** (1 / p)


def make_grid(spec, K: int, n: int) -> list[np.ndarray]:
    """Per-coordinate node sets from ``"omega"``, ``"equispaced"`` or explicit lists."""
    if isinstance(spec, str):
        if spec == "omega":
            return [roots_of_unity(K)] * n
        if spec == "equispaced":
            return [np.linspace(-1, 1, K).astype(complex)] * n
        raise ValueError(f"unknown grid {spec!r}")
    sets = [np.asarray(s, dtype=complex).ravel() for s in spec]
    if len(sets) == 1 and n > 1:
        sets = sets * n
    return sets


# ---------------------------------------------------------------------------
# experiments


def empirical_constant(d: int, K: int, n: int, grid="omega", ensemble: int = 100, seed: int = 0,
                       l_policy="per-run", n_terms: int | None = None) -> ExperimentReport:
    """Distribution of ``||f||_torus / ||f||_grid`` over random ``f``; each ratio is checked against the bound."""
    report = ExperimentReport("constant", seed=seed,
                              inputs={"d": d, "K": K, "n": n, "grid": grid if isinstance(grid, str) else "custom",
                                      "ensemble": ensemble, "n_terms": n_terms})
    with _Timer(report):
        rng = np.random.default_rng(seed)
        sets = make_grid(grid, K, n)
        report.inputs["eta"] = min(NodeScheme.from_nodes(s).eta for s in sets)
        const = domain_constants(sets, d, l_policy)
        report.constants = const
        ratios = []
        for _ in range(ensemble):
            f = random_polynomial(n, d, K, n_terms, rng)
            top = sup_torus(f).value
            bottom = sup_grid(f, sets).value
            ratios.append(top / bottom)
        report.measurements = {"ratios": ratios, "max_ratio": max(ratios), "mean_ratio": float(np.mean(ratios))}
        report.check("max torus/grid ratio <= sum |a_j| D^m_j", max(ratios), const["bound"])
    return report


def constant_envelope(Ks: Sequence[int] = tuple(range(2, 33)), ds: Sequence[int] = (1, 2)) -> ExperimentReport:
    """Fit ``bound(K)**(1/(2d)) ~ c1 log K + c2`` for the logarithmic ``L`` policy on ``Omega_K``.

    Reports the least-squares fit, its ``R**2`` and the smallest ``c2`` for
    which ``(c1 log K + c2)**(2d)`` dominates every bound.
    """
    report = ExperimentReport("envelope", inputs={"K": list(Ks), "d": list(ds)})
    with _Timer(report):
        logK = np.log(np.asarray(Ks, dtype=float))
        for d in ds:
            bounds = np.array([degree_constant(d, 4 * log_k_L(K) + 1) for K in Ks])
            y = bounds ** (1 / (2 * d))
            X = np.column_stack([logK, np.ones_like(logK)])
            (c1, c2), *_ = np.linalg.lstsq(X, y, rcond=None)
            resid = y - X @ np.array([c1, c2])
            r2 = 1 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
            c2_env = c2 + max(0.0, float(resid.max()))
            report.measurements[f"d={d}"] = {"bounds": bounds.tolist(), "c1": float(c1), "c2": float(c2),
                                             "r2": r2, "c2_envelope": c2_env}
            report.check(f"d={d}: R^2 of log-K fit >= 0.95", r2, 0.95, ">=")
            env = (c1 * logK + c2_env) ** (2 * d)
            report.check(f"d={d}: bound within (c1 log K + c2)^(2d)", float(np.max(bounds - env)), 1e-9 * bounds.max())
    return report


def figiel_check(f: Polynomial, ell: int, grid, bound: float | None = None, l_policy="per-run") -> ExperimentReport:
    """``||f_ell||_grid <= (sum_j |a_j| D**m_j) ||f||_grid`` for the degree-``ell`` part."""
    report = ExperimentReport("figiel", inputs={"n": f.n, "d": f.d, "K": f.K, "ell": ell})
    with _Timer(report):
        if bound is None:
            bound = domain_constants(grid, f.d, l_policy)["bound"]
        part = homogeneous_part(f, ell)
        lhs = sup_grid(part, grid).value
        full = sup_grid(f, grid).value
        report.constants = {"bound": bound}
        report.measurements = {"part_grid_norm": lhs, "grid_norm": full,
                               "ratio": lhs / full if full > 0 else math.inf}
        report.check("||f_ell||_grid <= bound * ||f||_grid", lhs, bound * full, tol=1e-12 * max(1.0, bound * full))
    return report


def bh_quotient(f: Polynomial, grid, d: int | None = None, bound: float | None = None, l_policy="per-run") -> ExperimentReport:
    """Bohnenblust-Hille quotient ``||f_hat||_{2d/(d+1)} / ||f||_grid`` and its factorization."""
    d = f.d if d is None else d
    report = ExperimentReport("bh", inputs={"n": f.n, "d": d, "K": f.K})
    with _Timer(report):
        if bound is None:
            bound = domain_constants(grid, d, l_policy)["bound"]
        q = 2 * d / (d + 1)
        coefs = np.abs(np.array(list(f.terms.values())))
        bh = float(np.sum(coefs**q) ** (1 / q)) if coefs.size else 0.0
        g = sup_grid(f, grid).value
        t = sup_torus(f).value
        quotient = bh / g if g > 0 else math.inf
        torus_quotient = bh / t if t > 0 else math.inf
        transfer = t / g if g > 0 else math.inf
        report.constants = {"bound": bound}
        report.measurements = {"coef_norm": bh, "grid_norm": g, "torus_norm_lower": t, "quotient": quotient,
                               "torus_quotient": torus_quotient, "transfer": transfer}
        report.check("quotient <= torus quotient * transfer", quotient, torus_quotient * transfer,
                     tol=1e-12 * max(1.0, quotient))
        report.check("transfer <= bound", transfer, bound)
    return report


def real_grid_check(f: Polynomial, K: int, samples: int | None = None, l_policy="per-run") -> ExperimentReport:
    """Box ``[-1, 1]^n`` versus the equispaced grid ``G_K^n`` for a real-coefficient ``f``."""
    if any(abs(c.imag) > 0 for c in f.terms.values()):
        raise ValueError("real_grid_check needs real coefficients")
    report = ExperimentReport("real-grid", inputs={"n": f.n, "d": f.d, "K": K})
    with _Timer(report):
        G = np.linspace(-1, 1, K)
        if samples is None:
            samples = max(K, int(GRID_BUDGET ** (1 / f.n)) if f.n > 1 else 100_001)
            samples = min(samples, 100_001)
        dense = np.linspace(-1, 1, samples)
        const = domain_constants([G] * f.n, f.d, "per-run", extra_targets=dense) if l_policy == "per-run" \
            else domain_constants([G] * f.n, f.d, l_policy)
        box = sup_grid(f, [dense] * f.n).value
        grid = sup_grid(f, [G] * f.n).value
        report.constants = const
        report.inputs["eta"] = 2 / (K - 1)
        report.measurements = {"box_norm_lower": box, "grid_norm": grid,
                               "ratio": box / grid if grid > 0 else math.inf, "samples": samples}
        report.check("||f||_box <= bound * ||f||_grid", box, const["bound"] * grid,
                     tol=1e-12 * max(1.0, const["bound"] * grid))
    return report


def degeneracy_demo(K: int, eps_list: Sequence[float]) -> ExperimentReport:
    """Nearly colliding nodes break any uniform constant.

    ``Z`` is ``Omega_K`` with ``w`` moved to angle ``eps`` next to 1; ``f(z) =
    prod_{zeta in A}(z_1 - zeta)`` over ``A = Z`` minus the moved node. On the
    grid ``|f| <= eps 2**(K-2)``, while the unit leading coefficient gives
    ``||f||_torus >= 1``.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    report = ExperimentReport("degeneracy", inputs={"K": K, "eps": list(eps_list)})
    with _Timer(report):
        rows = []
        for eps in eps_list:
            Z = roots_of_unity(K)
            Z[1] = np.exp(1j * eps)
            A = np.delete(Z, 1)
            coefs = np.poly(A)[::-1]  # ascending powers, leading coefficient 1
            f = Polynomial(1, K - 1, K, {(j,): c for j, c in enumerate(coefs)})
            grid_max = sup_grid(f, [Z]).value
            torus_lower = max(1.0, sup_torus(f).value)
            floor = 1 / (eps * 2 ** (K - 2))
            rows.append({"eps": eps, "grid_max": grid_max, "grid_bound": eps * 2 ** (K - 2),
                         "torus_lower": torus_lower, "certified_ratio": torus_lower / grid_max,
                         "ratio_floor": floor})
            report.check(f"eps={eps:g}: grid max <= eps 2^(K-2)", grid_max, eps * 2 ** (K - 2))
            report.check(f"eps={eps:g}: certified ratio >= floor", torus_lower / grid_max, floor, ">=")
        report.measurements = {"rows": rows}
    return report


def _sign_matrix(codes: np.ndarray, n: int) -> np.ndarray:
    bits = (codes[:, None] >> np.arange(n)[None, :]) & 1
    return 1.0 - 2.0 * bits


def _probe_values(V: np.ndarray, E: np.ndarray) -> np.ndarray:
    """``max_v |sum_j v_j e_j|`` for each sign row ``e``; summation order is fixed by ``j``."""
    acc = np.zeros((E.shape[0], V.shape[0]), dtype=complex)
    for j in range(V.shape[1]):
        acc += E[:, j][:, None] * V[:, j][None, :]
    return np.abs(acc).max(axis=1)


def probe_min(V: np.ndarray, order: str = "binary", chunk: int = 4096) -> tuple[float, int]:
    """Exhaustive ``min_eps max_v |<v, eps>|`` with the first sign fixed to +1."""
    n = V.shape[1]
    total = 1 << (n - 1)
    best, best_code = math.inf, -1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        if order == "gray":
            idx = idx ^ (idx >> 1)
        elif order == "reverse":
            idx = total - 1 - idx
        elif order != "binary":
            raise ValueError(f"unknown order {order!r}")
        codes = idx << 1  # bit 0 (first coordinate) stays +1
        vals = _probe_values(V, _sign_matrix(codes, n))
        i = int(np.argmin(vals))
        if vals[i] < best or (vals[i] == best and codes[i] < best_code):
            best, best_code = float(vals[i]), int(codes[i])
    return best, best_code


def lower_bound_probe(V, mode: str = "exhaustive", seed: int = 0, samples: int = 1 << 16) -> ExperimentReport:
    """Degree-one probe of a candidate sampling set ``V``.

    ``2 delta = min_eps max_v |sum_j v_j eps_j| / n`` over sign vectors. The
    implied constant is ``1 / (2 delta)`` and a sampling set with that constant
    needs at least ``exp(delta**2 n / 2) / 4`` points.
    """
    V = np.atleast_2d(np.asarray(V, dtype=complex))
    N, n = V.shape
    if mode == "exhaustive" and n > 20:
        raise ValueError("exhaustive mode is limited to n <= 20")
    report = ExperimentReport("probe", seed=seed, inputs={"n": n, "size": N, "mode": mode})
    with _Timer(report):
        if mode == "exhaustive":
            raw, code = probe_min(V, "binary")
            raw_gray, code_gray = probe_min(V, "gray")
            report.measurements["second_enumeration"] = raw_gray / (2 * n)
            report.check("gray-code enumeration agrees", raw_gray, raw, "==")
        elif mode == "random":
            rng = np.random.default_rng(seed)
            codes = rng.integers(0, 1 << min(n, 62), size=samples, dtype=np.int64) if n <= 62 else None
            E = _sign_matrix(codes, n) if codes is not None else rng.choice([-1.0, 1.0], size=(samples, n))
            vals = _probe_values(V, E)
            raw = float(vals.min())
        else:
            raise ValueError(f"unknown mode {mode!r}")
        delta = raw / (2 * n)
        C_hat = math.inf if delta == 0 else 1 / (2 * delta)
        report.measurements.update({"delta": delta, "C_hat": C_hat,
                                    "size_floor": 0.25 * math.exp(delta**2 * n / 2)})
        report.check("|V| >= floor", N, report.measurements["size_floor"], ">=")
    return report


def lp_transfer(d: int, K: int, n: int, p: int, ensemble: int = 200, seed: int = 0, l_policy="per-run") -> ExperimentReport:
    """``||f||_{L^p(T^n)} / ||f||_{L^p(Omega_K^n)}`` against ``d**((p-1)/p) (sum_j |a_j D**m_j|**p)**(1/p)``."""
    report = ExperimentReport("lp", seed=seed, inputs={"d": d, "K": K, "n": n, "p": p, "ensemble": ensemble})
    with _Timer(report):
        rng = np.random.default_rng(seed)
        sets = make_grid("omega", K, n)
        M = p * (K - 1) + 1
        const = domain_constants(sets, d, l_policy, extra_targets=roots_of_unity(M))
        bound = lp_constant(const, p)
        report.constants = dict(const, lp_bound=bound)
        ratios, parseval = [], []
        for _ in range(ensemble):
            f = random_polynomial(n, d, K, None, rng)
            top = lp_norm(f, p, "torus").value
            bottom = lp_norm(f, p, sets).value
            ratios.append(top / bottom)
            if p == 2:
                exact = math.sqrt(math.fsum(abs(c) ** 2 for c in f.terms.values()))
                parseval.append(abs(top - exact))
        report.measurements = {"ratios": ratios, "max_ratio": max(ratios)}
        report.check("max L^p ratio <= transfer bound", max(ratios), bound)
        if parseval:
            report.measurements["parseval_error"] = max(parseval)
            report.check("p=2 torus norm matches Parseval", max(parseval), 1e-10)
    return report
