import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfinterp import normlab as nl
from dfinterp.poly import Polynomial, grid_points, random_polynomial, roots_of_unity


def test_sup_grid_examples(rng):
    f = Polynomial(2, 1, 2, {(1, 0): 1})
    assert nl.sup_grid(f, [roots_of_unity(2)] * 2).value == pytest.approx(1)
    Z = np.array([0.3, -0.7j, 0.9])
    coefs = np.poly(Z)[::-1]
    kill = Polynomial(1, 3, 4, {(j,): c for j, c in enumerate(coefs)})
    assert nl.sup_grid(kill, [Z]).value <= 1e-15
    g = random_polynomial(2, 3, 3, None, rng)
    sets = [rng.normal(size=4) * 0.2 + 0j, roots_of_unity(3)]
    brute = max(abs(g(p)) for p in grid_points(sets))
    assert nl.sup_grid(g, sets).value == pytest.approx(brute, rel=1e-14)


def test_sup_grid_budget():
    f = Polynomial(3, 1, 2, {(1, 0, 0): 1})
    with pytest.raises(nl.BudgetError):
        nl.sup_grid(f, [roots_of_unity(10)] * 3, budget=100)


@pytest.mark.parametrize("K", [2, 4, 7])
def test_sup_torus_unimodular_monomial(K):
    f = Polynomial(2, K - 1, K, {(K - 1, 0): 1})
    est = nl.sup_torus(f)
    assert all(v == pytest.approx(1) for _, v in est.trace)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3), K=st.integers(2, 5))
def test_sup_torus_trace_non_decreasing(seed, n, K):
    f = random_polynomial(n, n * (K - 1), K, None, np.random.default_rng(seed))
    est = nl.sup_torus(f)
    vals = [v for _, v in est.trace]
    assert vals == sorted(vals)
    assert est.kind == "refined-lower-bound"


def test_sup_torus_against_dense_scan(rng):
    for _ in range(5):
        f = random_polynomial(1, 5, 6, None, rng)
        est = nl.sup_torus(f, levels=[16, 32, 64, 128, 256, 512])
        dense = np.abs(f.eval_many(np.exp(2j * np.pi * np.arange(100_000) / 100_000)[:, None])).max()
        assert est.value <= dense + 1e-12
        assert dense - est.value <= 1e-3


def test_lp_parseval_and_constant(rng):
    for _ in range(10):
        f = random_polynomial(2, 3, 3, None, rng)
        parseval = math.sqrt(sum(abs(c) ** 2 for c in f.terms.values()))
        assert abs(nl.lp_norm(f, 2).value - parseval) <= 1e-10
    c = Polynomial.constant(2 - 1j, 2)
    for p in (2, 4, 6):
        assert nl.lp_norm(c, p).value == pytest.approx(abs(2 - 1j))
        assert nl.lp_norm(c, p, [roots_of_unity(3)] * 2).value == pytest.approx(abs(2 - 1j))
    assert nl.lp_norm(c, math.inf).value == pytest.approx(abs(2 - 1j))


def test_lp_two_exact_levels_agree(rng):
    for p in (2, 4, 6):
        f = random_polynomial(2, 4, 3, None, rng)
        a = nl.lp_norm(f, p, M=p + 1).value
        b = nl.lp_norm(f, p, M=2 * p + 1).value
        assert abs(a - b) <= 1e-12 * max(1.0, a)
    f = random_polynomial(2, 4, 3, None, rng)
    assert abs(nl.lp_norm(f, 4, M=5).value - nl.lp_norm(f, 4, M=9).value) <= 1e-12


def test_lp_errors():
    f = Polynomial(1, 2, 3, {(2,): 1})
    with pytest.raises(ValueError):
        nl.lp_norm(f, 3)
    with pytest.raises(ValueError):
        nl.lp_norm(f, 4, M=2)


def test_domain_constants_structure():
    const = nl.domain_constants([roots_of_unity(3)] * 2, 2)
    assert const["D"] == pytest.approx(4 * const["L"] + 1)
    assert const["bound"] == pytest.approx(2 * const["D"] ** 2 + 3 * const["D"] ** 3)
    const1 = nl.domain_constants([roots_of_unity(3)] * 2, 1)
    assert const1["bound"] == pytest.approx(const1["D"])


@pytest.mark.parametrize("n,K,d", [(1, 4, 3), (2, 3, 2), (3, 2, 3), (2, 4, 3), (4, 2, 2)])
def test_torus_over_grid_ratio_within_bound(n, K, d):
    report = nl.empirical_constant(d, K, n, ensemble=25, seed=n * 100 + K * 10 + d)
    assert report.passed, report.assertions


def test_empirical_constant_other_policies():
    for policy in ("global-bound", "log-k"):
        report = nl.empirical_constant(2, 3, 2, ensemble=10, seed=1, l_policy=policy)
        assert report.passed and report.constants["l_policy"] == policy


def test_constant_envelope():
    report = nl.constant_envelope()
    assert report.passed
    for d in (1, 2):
        assert report.measurements[f"d={d}"]["r2"] >= 0.95


def test_figiel(rng):
    grid = [roots_of_unity(3)] * 2
    f = Polynomial(2, 2, 3, {(0, 0): 1, (1, 1): 1})
    assert nl.figiel_check(f, 2, grid).passed
    h = Polynomial(2, 2, 3, {(1, 1): 1, (2, 0): 0.5})
    assert nl.figiel_check(h, 2, grid).measurements["ratio"] == pytest.approx(1)
    empty = nl.figiel_check(f, 1, grid)
    assert empty.measurements["part_grid_norm"] == 0 and empty.passed
    for _ in range(10):
        g = random_polynomial(2, 2, 3, None, rng)
        for ell in range(3):
            assert nl.figiel_check(g, ell, grid).passed


def test_bh_quotient(rng):
    grid2 = [roots_of_unity(2)] * 2
    single = Polynomial(2, 1, 2, {(1, 0): 1j})
    assert nl.bh_quotient(single, grid2).measurements["quotient"] == pytest.approx(1)
    lin = Polynomial(2, 1, 2, {(1, 0): 1, (0, 1): 1})
    rep = nl.bh_quotient(lin, grid2, d=1)
    assert rep.measurements["quotient"] == pytest.approx(1.0)
    grid = [roots_of_unity(3)] * 2
    bound = nl.domain_constants(grid, 2)["bound"]
    for _ in range(200):
        f = random_polynomial(2, 2, 3, None, rng)
        assert nl.bh_quotient(f, grid, bound=bound).passed


def test_real_grid(rng):
    f = Polynomial(2, 2, 2, {(0, 0): 0.3, (1, 0): -1, (1, 1): 2})
    rep = nl.real_grid_check(f, 2, samples=201)
    assert rep.measurements["box_norm_lower"] == pytest.approx(rep.measurements["grid_norm"])
    assert rep.passed
    T3 = Polynomial(1, 3, 4, {(3,): 4, (1,): -3})
    rep = nl.real_grid_check(T3, 4)
    assert rep.passed and math.isfinite(rep.measurements["ratio"])
    rep = nl.real_grid_check(Polynomial.constant(-2, 2, 2, 3), 3)
    assert rep.measurements["ratio"] == pytest.approx(1)
    with pytest.raises(ValueError):
        nl.real_grid_check(Polynomial(1, 1, 2, {(1,): 1j}), 2)


def test_degeneracy_demo():
    eps = [1e-1, 1e-2, 1e-3, 1e-4]
    rep = nl.degeneracy_demo(3, eps)
    assert rep.passed
    rows = rep.measurements["rows"]
    r3 = next(r for r in rows if r["eps"] == 1e-3)
    assert r3["ratio_floor"] == pytest.approx(500)
    assert r3["certified_ratio"] >= 500
    for a, b in zip(rows, rows[1:]):
        assert b["certified_ratio"] >= 10 * a["certified_ratio"] * (1 - 1e-6)
    halves = nl.degeneracy_demo(3, [1e-3, 5e-4]).measurements["rows"]
    assert halves[1]["ratio_floor"] == pytest.approx(2 * halves[0]["ratio_floor"])


def test_probe_zero_set():
    rep = nl.lower_bound_probe(np.zeros((1, 6)))
    assert rep.measurements["C_hat"] == math.inf


def test_probe_full_cube():
    V = np.array(list(itertools.product([1, -1], repeat=8)), dtype=complex)
    rep = nl.lower_bound_probe(V)
    assert rep.measurements["delta"] == 0.5 and rep.measurements["C_hat"] == 1.0


def test_probe_orders_agree(rng):
    V = rng.normal(size=(30, 10)) + 1j * rng.normal(size=(30, 10))
    V /= np.maximum(1, np.abs(V))
    values = {nl.probe_min(V, order)[0] for order in ("binary", "gray", "reverse")}
    assert len(values) == 1
    rep = nl.lower_bound_probe(V, "random", seed=3, samples=4096)
    assert rep.measurements["delta"] >= nl.probe_min(V)[0] / 20


def test_probe_brute_force_small(rng):
    V = rng.uniform(-1, 1, size=(5, 6)).astype(complex)
    brute = min(max(abs(np.dot(v, e)) for v in V) for e in itertools.product([1, -1], repeat=6))
    assert nl.probe_min(V)[0] == pytest.approx(brute, abs=1e-12)


def test_lp_transfer_small():
    for p in (2, 4):
        rep = nl.lp_transfer(2, 3, 2, p, ensemble=30, seed=p)
        assert rep.passed, rep.assertions


def test_report_serialization(tmp_path):
    rep = nl.ExperimentReport("x", inputs={"eps": 0.1}, seed=3)
    rep.measurements = {"r": [1.0, 2.0], "inf": math.inf, "z": 1 + 2j}
    rep.check("a", 1, 2)
    rep.check("b", 3, 2)
    assert not rep.passed and rep.first_failure() == "b"
    data = json.loads(rep.to_json())
    assert data["measurements"]["inf"] == "inf" and data["measurements"]["z"] == {"re": 1.0, "im": 2.0}
    assert {"experiment", "inputs", "constants", "measurements", "assertions", "seed", "runtime_ms"} <= set(data)
    assert set(data["assertions"][0]) >= {"name", "pass", "lhs", "rhs"}
    rep.write_csv(tmp_path / "r.csv", "r")
    assert (tmp_path / "r.csv").read_text().splitlines()[1:] == ["0,1.0", "1,2.0"]
