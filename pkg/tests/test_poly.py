import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfinterp.poly import (
    Polynomial,
    admissible_monomials,
    eval_on_roots_grid,
    eval_poly,
    fourier_from_grid,
    grid_points,
    homogeneous_part,
    random_polynomial,
    roots_of_unity,
)


def naive_eval(f, z):
    total = 0j
    for alpha, coef in f.terms.items():
        term = coef
        for zj, a in zip(z, alpha):
            for _ in range(a):
                term *= zj
        total += term
    return total


def test_constant_eval():
    f = Polynomial.constant(5, n=3)
    assert f([0.3, -1j, 0.2]) == 5


def test_product_of_coordinates_at_i():
    f = Polynomial(2, 2, 2, {(1, 1): 1})
    assert f([1j, 1j]) == pytest.approx(-1)


def test_eval_matches_naive_expansion(rng):
    f = random_polynomial(4, 6, 4, 50, rng)
    assert len(f) == 50
    for _ in range(20):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        ref = naive_eval(f, z)
        assert abs(f(z) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_eval_many_matches_pointwise(rng):
    f = random_polynomial(3, 4, 3, None, rng)
    Z = rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3))
    np.testing.assert_allclose(f.eval_many(Z), [eval_poly(f, z) for z in Z], rtol=1e-12)


def test_eval_dimension_mismatch():
    f = Polynomial(2, 1, 2, {(1, 0): 1})
    with pytest.raises(ValueError):
        f([1, 2, 3])
    with pytest.raises(ValueError):
        f.eval_many(np.ones((2, 3)))


def test_zero_coefficients_pruned_and_bounds_checked():
    f = Polynomial(2, 2, 3, {(1, 0): 0, (0, 1): 2})
    assert list(f.terms) == [(0, 1)]
    with pytest.raises(ValueError):
        Polynomial(1, 5, 2, {(2,): 1})
    with pytest.raises(ValueError):
        Polynomial(2, 1, 3, {(1, 1): 1})


def test_terms_sorted_graded_lex():
    f = Polynomial(2, 2, 3, {(0, 2): 1, (1, 0): 2, (0, 0): 3, (1, 1): 4, (2, 0): 5})
    assert list(f.terms) == [(0, 0), (1, 0), (2, 0), (1, 1), (0, 2)]


def test_json_round_trip(rng):
    f = random_polynomial(3, 3, 3, 8, rng)
    g = Polynomial.from_json(f.to_json())
    assert g.terms == f.terms and (g.n, g.d, g.K) == (f.n, f.d, f.K)


def test_fourier_odd_function():
    f = fourier_from_grid({(0,): 1, (1,): -1}, K=2, n=1)
    assert set(f.terms) == {(1,)}
    assert f.terms[(1,)] == pytest.approx(1)


def test_fourier_constant():
    f = fourier_from_grid(np.full((3, 3), 2.5 - 1j), K=3, n=2, tol=1e-13)
    assert set(f.terms) == {(0, 0)}
    assert f.terms[(0, 0)] == pytest.approx(2.5 - 1j)


def test_fourier_errors():
    with pytest.raises(KeyError, match="missing grid point"):
        fourier_from_grid({(0,): 1}, K=2, n=1)
    with pytest.raises(ValueError):
        fourier_from_grid(np.ones(1), K=1, n=1)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 3), K=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_fourier_round_trip(n, K, seed):
    f = random_polynomial(n, n * (K - 1), K, None, np.random.default_rng(seed))
    pts = grid_points([roots_of_unity(K)] * n)
    samples = f.eval_many(pts).reshape((K,) * n)
    g = fourier_from_grid(samples, K, n)
    for alpha in itertools.product(range(K), repeat=n):
        assert abs(g.terms.get(alpha, 0) - f.terms.get(alpha, 0)) <= 1e-10


def test_roots_grid_evaluation_matches_direct(rng):
    f = random_polynomial(2, 3, 3, None, rng)
    M = 5
    direct = f.eval_many(grid_points([roots_of_unity(M)] * 2)).reshape(M, M)
    np.testing.assert_allclose(eval_on_roots_grid(f, M), direct, atol=1e-12)


def test_homogeneous_examples():
    f = Polynomial(2, 2, 2, {(0, 0): 1, (1, 0): 1, (1, 1): 1})
    assert homogeneous_part(f, 2).terms == {(1, 1): 1}
    assert homogeneous_part(f, 0).terms == {(0, 0): 1}
    with pytest.raises(ValueError):
        homogeneous_part(f, 3)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 4), d=st.integers(0, 4), K=st.integers(2, 4), seed=st.integers(0, 2**32 - 1))
def test_homogeneous_parts_partition_f(n, d, K, seed):
    f = random_polynomial(n, d, K, None, np.random.default_rng(seed))
    parts = [homogeneous_part(f, ell) for ell in range(d + 1)]
    supports = [set(p.terms) for p in parts]
    for a, b in itertools.combinations(supports, 2):
        assert not a & b
    total = Polynomial(n, d, K, {})
    for p in parts:
        total = total + p
    assert total.terms == f.terms


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), a=st.complex_numbers(max_magnitude=3), b=st.complex_numbers(max_magnitude=3))
def test_eval_is_linear(seed, a, b):
    rng = np.random.default_rng(seed)
    f = random_polynomial(3, 3, 3, 6, rng)
    g = random_polynomial(3, 3, 3, 6, rng)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    lhs = (a * f + b * g)(z)
    rhs = a * f(z) + b * g(z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(a * f(z)) + abs(b * g(z)))


def test_admissible_monomials_bounds():
    basis = admissible_monomials(3, 2, 2)
    assert all(sum(a) <= 2 and max(a) <= 1 for a in basis)
    assert len(basis) == 1 + 3 + 3


def test_random_polynomial_coefficients_in_disc(rng):
    f = random_polynomial(2, 3, 3, None, rng)
    assert all(abs(c) <= 1 for c in f.terms.values())
    assert random_polynomial(2, 3, 3, 4, 7).terms == random_polynomial(2, 3, 3, 4, 7).terms
