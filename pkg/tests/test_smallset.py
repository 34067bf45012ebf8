import math

import numpy as np
import pytest

from conftest import random_disc
from dfinterp.interp import block_plan, coefficients, reproduction_residuals
from dfinterp.poly import grid_points, roots_of_unity
from dfinterp.smallset import (
    BlockDesign,
    assemble,
    cardinality_bound,
    choose_k,
    cramer_coefficients,
    det_P,
    hadamard_bound,
    k_condition,
    lambda_set,
    monte_carlo_det_moment,
    search_block,
)

OMEGA3 = roots_of_unity(3)


def test_lambda_examples():
    lam = lambda_set(2, 2, 2)
    assert lam.elements == ((0, 0), (1, 0), (0, 1), (1, 1)) and lam.M == 4
    lam = lambda_set(2, 2, 3)
    assert lam.M == 6 and {(2, 0), (0, 2)} <= set(lam.elements)
    with pytest.raises(ValueError):
        lambda_set(0, 1, 2)


@pytest.mark.parametrize("k", range(1, 6))
@pytest.mark.parametrize("d", range(1, 6))
@pytest.mark.parametrize("K", [2, 3, 6])
def test_lambda_cardinality_bound(k, d, K):
    lam = lambda_set(k, d, K)
    assert lam.M <= lam.size_bound() == (d + 1) * k**d
    key = [(sum(a), tuple(-x for x in a)) for a in lam.elements]
    assert key == sorted(key)


def test_det_two_by_two():
    lam = lambda_set(1, 1, 2)
    y1, y2 = 0.3 + 0.1j, -0.5j
    assert det_P([[y1], [y2]], lam) == pytest.approx(y2 - y1)


def test_hadamard_on_random_unimodular(rng):
    for k, d, K in [(1, 3, 4), (2, 2, 3), (2, 2, 2), (3, 1, 2)]:
        lam = lambda_set(k, d, K)
        for _ in range(200):
            Y = np.exp(2j * np.pi * rng.uniform(size=(lam.M, k)))
            assert abs(det_P(Y, lam)) <= hadamard_bound(lam.M) * (1 + 1e-12)


@pytest.mark.parametrize("k,d,K", [(1, 2, 3), (2, 1, 2), (2, 2, 2), (2, 2, 3)])
def test_monte_carlo_det_moment(k, d, K):
    lam = lambda_set(k, d, K)
    assert lam.M <= 6
    mean, se = monte_carlo_det_moment(lam, 100_000, rng=k * 100 + d * 10 + K)
    assert abs(mean - math.factorial(lam.M)) <= 3 * se


def test_search_two_point_block():
    design = search_block([np.array([1, -1])], lambda_set(1, 1, 2), rng_seed=0)
    assert abs(design.detP) == pytest.approx(2)
    assert sorted(design.Y[:, 0].real) == [-1, 1]


def test_search_omega3_block_and_reproducibility():
    lam = lambda_set(2, 2, 3)
    a = search_block([OMEGA3, OMEGA3], lam, rng_seed=5)
    b = search_block([OMEGA3, OMEGA3], lam, rng_seed=5)
    assert abs(a.detP) > 0 and a.flag in ("ok", "below-threshold")
    assert abs(a.detP) <= hadamard_bound(lam.M)
    np.testing.assert_array_equal(a.Y, b.Y)
    assert a.to_json() == b.to_json()
    again = BlockDesign.from_dict(a.to_dict())
    np.testing.assert_array_equal(again.Y, a.Y)
    assert again.detP == a.detP and again.lam.elements == lam.elements


def test_search_reports_singular_pool():
    # every candidate shares its second coordinate, so no design is unisolvent
    design = search_block([np.array([1, -1]), np.array([0.5, 0.5])], lambda_set(2, 1, 2), budget=50)
    assert design.flag == "singular" and design.detP == 0


def test_cramer_solution_bound(rng):
    lam = lambda_set(2, 2, 3)
    design = search_block([OMEGA3, OMEGA3], lam, rng_seed=2)
    tau = abs(design.detP)
    for _ in range(100):
        z = random_disc(rng, 2)
        c = cramer_coefficients(design.Y, lam, z)
        assert np.max(np.abs(c)) <= hadamard_bound(lam.M) / tau + 1e-9
        np.testing.assert_allclose(c, design.scheme().coefficients(z), atol=1e-10)


def test_choose_k():
    k, closed = choose_k(1, 0.5)
    assert k == 7
    assert k_condition(1, 8, 0.5) and k_condition(1, 9, 0.5) and not k_condition(1, 6, 0.5)
    for d in range(1, 6):
        for eps in (0.1, 0.25, 0.5):
            k, closed = choose_k(d, eps)
            assert k_condition(d, k, eps)
            assert k == 1 or not k_condition(d, k - 1, eps)
            assert closed >= k
    with pytest.raises(ValueError):
        choose_k(1, 0.75)


def test_assemble_36_points():
    lam = lambda_set(2, 2, 3)
    designs = [search_block([OMEGA3, OMEGA3], lam, rng_seed=s) for s in (0, 1)]
    Y = assemble(designs, 4, 2)
    assert Y.shape == (36, 4) and len(Y) < 3**4
    assert len({tuple(p) for p in np.round(Y, 12)}) == 36
    assert cardinality_bound(lam.M, 4, 2) == 36


def test_assemble_width_one_is_full_grid():
    lam = lambda_set(1, 2, 3)
    design = search_block([OMEGA3], lam)
    Y = assemble([design] * 3, 3, 1)
    full = grid_points([OMEGA3] * 3)
    assert {tuple(p) for p in np.round(Y, 12)} == {tuple(p) for p in np.round(full, 12)}


def test_assemble_projects_trailing_coordinates():
    lam = lambda_set(2, 2, 3)
    design = search_block([OMEGA3, OMEGA3], lam)
    Y = assemble([design, design], 3, 2)
    assert Y.shape == (36, 3)
    with pytest.raises(ValueError):
        assemble([design], 3, 2)


def test_cardinality_bound_vs_eps():
    for d, eps in [(1, 0.5), (2, 0.5), (1, 0.25)]:
        k, _ = choose_k(d, eps)
        M = lambda_set(k, d, d + 1).M
        assert M ** (1 / k) <= 1 + eps + 1e-12
        for n in range(1, 30):
            assert cardinality_bound(M, n, k) <= (1 + eps) ** (n + k - 1) * (1 + 1e-9)


def test_end_to_end_block_reproduction(rng):
    for n, k, K, d in [(4, 2, 3, 2), (2, 2, 3, 2), (4, 2, 2, 2), (3, 1, 3, 2), (4, 2, 3, 1)]:
        lam = lambda_set(k, d, K)
        nodes = roots_of_unity(K)
        designs = [search_block([nodes] * k, lam, rng_seed=b) for b in range(n // k)]
        schemes = [dsg.scheme() for dsg in designs]
        for _ in range(2):
            plan = block_plan(schemes, d, random_disc(rng, n))
            table = coefficients(plan)
            assert max(reproduction_residuals(plan, table).values()) <= 1e-8
            assert table.l1 <= plan.bound() * (1 + 1e-6)
            assert len(table.points) == lam.M ** (n // k)
