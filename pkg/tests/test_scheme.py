import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_disc, separated_nodes
from dfinterp.scheme import (
    InadmissibleError,
    NodeScheme,
    build_r,
    build_w,
    compute_L,
    indicator_table,
    integrate,
    moment,
    required_L,
    split,
)
from dfinterp.vander import NodeVector, solve_moments


def plan_maps(nodes, x, L=None):
    scheme = NodeScheme.from_nodes(nodes)
    c = scheme.coefficients(x)
    L = required_L(c) * 1.1 if L is None else L
    sp = split(c, L)
    return scheme, sp, build_r(4 * L + 1, L), build_w(sp, scheme)


def test_split_real_positive():
    sp = split(np.array([0.4, 0.6]), 1.0)
    np.testing.assert_array_equal(sp.cs[0], [0.4, 0.6])
    np.testing.assert_array_equal(sp.cs[1:], 0)
    np.testing.assert_allclose(sp.ts, [1, 1, 1, 1])
    np.testing.assert_allclose(sp.section_lengths(), [2, 1, 1, 1])


def test_split_rejects_inadmissible_coefficients():
    with pytest.raises(InadmissibleError, match="sum to"):
        split(np.array([0.5j, -0.5j]), 1.0)
    with pytest.raises(InadmissibleError, match="too small"):
        split(np.array([2.0, -1.0]), 1.0)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), K=st.integers(1, 8))
def test_split_recombines_exactly(seed, K):
    rng = np.random.default_rng(seed)
    nodes = separated_nodes(rng, K, 0.2) if K > 1 else random_disc(rng, 1)
    c = solve_moments(NodeVector(nodes), complex(random_disc(rng, 1)[0])).c
    L = required_L(c) + rng.uniform(0, 2)
    sp = split(c, L)
    back = sp.recombine()
    np.testing.assert_array_equal(back.real, c.real)
    np.testing.assert_array_equal(back.imag, c.imag)
    assert np.all(sp.cs >= 0) and np.all(sp.ts >= 0)
    assert not np.any((sp.cs[0] > 0) & (sp.cs[1] > 0))
    assert not np.any((sp.cs[2] > 0) & (sp.cs[3] > 0))
    assert sp.ts[0] == sp.ts[1] and sp.ts[2] == sp.ts[3]
    np.testing.assert_allclose(sp.section_lengths(), [L + 1, L, L, L], atol=1e-12)


def test_compute_L_examples():
    assert compute_L(NodeScheme.roots_of_unity(2), [1, -1]) == pytest.approx(1)
    rng = np.random.default_rng(3)
    for _ in range(20):
        K = int(rng.integers(2, 7))
        nv = NodeVector(separated_nodes(rng, K, 0.3))
        assert compute_L(nv, random_disc(rng, 50)) <= nv.l1_bound()


def test_build_r_layout():
    r = build_r(5, 1)
    assert r.pieces == [(2, 1), (1, -1), (1, 1j), (1, -1j)]
    assert r.total_length == 5
    assert integrate(r, []) / r.D == pytest.approx(1 / 5)
    with pytest.raises(ValueError):
        build_r(6, 1)


@pytest.mark.parametrize("L", [0.0, 0.3, 1.0, 7.25, 1e3])
def test_build_r_total_length(L):
    assert build_r(4 * L + 1, L).total_length == pytest.approx(4 * L + 1, abs=1e-12)


def test_build_w_hand_layout():
    scheme, sp, r, w = plan_maps([1, -1], 1.0, L=1.0)
    assert w.pieces[:4] == [(1.0, 1), (0.5, 1), (0.0, -1), (0.5, -1)]
    for alpha in range(2):
        assert abs(moment(r, w, alpha) - 1 / r.D) <= 1e-15


def test_moment_example_omega3():
    x = 0.5 + 0.2j
    _, _, r, w = plan_maps(np.exp(2j * np.pi * np.arange(3) / 3), x)
    assert abs(moment(r, w, 0) - 1 / r.D) <= 1e-12
    assert abs(moment(r, w, 2) - x**2 / r.D) <= 1e-12


def test_moment_beyond_exponent_set_not_claimed():
    x = 0.5 + 0.2j
    _, _, r, w = plan_maps(np.exp(2j * np.pi * np.arange(3) / 3), x)
    assert abs(moment(r, w, 3) - x**3 / r.D) > 1e-6


def test_moment_mismatched_D():
    _, _, r, w = plan_maps([1, -1], 0.3)
    with pytest.raises(ValueError):
        moment(build_r(9, 2), w, 1)


def test_moment_identity_random(rng):
    for _ in range(500):
        K = int(rng.integers(1, 9))
        nodes = separated_nodes(rng, K, 0.2) if K > 1 else random_disc(rng, 1)
        x = complex(random_disc(rng, 1)[0])
        alpha = int(rng.integers(0, K))
        _, _, r, w = plan_maps(nodes, x)
        assert abs(moment(r, w, alpha) - x**alpha / r.D) <= 1e-10
        assert abs(w.total_length - r.D) <= 1e-12


def test_layout_invariance(rng):
    nodes = separated_nodes(rng, 5, 0.3)
    x = complex(random_disc(rng, 1)[0])
    _, _, r, w = plan_maps(nodes, x)
    base = [moment(r, w, a) for a in range(5)]
    n_sub = len(w.lengths) // 4
    for _ in range(10):
        order = np.concatenate([s * n_sub + rng.permutation(n_sub) for s in range(4)])
        shuffled = w.permuted(order)
        for a in range(5):
            assert abs(moment(r, shuffled, a) - base[a]) <= 1e-12


def test_L_flexibility(rng):
    nodes = separated_nodes(rng, 4, 0.3)
    x = complex(random_disc(rng, 1)[0])
    L0 = required_L(NodeScheme.from_nodes(nodes).coefficients(x))
    for L in (L0, L0 + 1):
        _, _, r, w = plan_maps(nodes, x, L)
        assert r.D == pytest.approx(4 * L + 1)
        for a in range(4):
            assert abs(moment(r, w, a) - x**a / r.D) <= 1e-10


def test_indicator_table_sums_to_moments(rng):
    nodes = separated_nodes(rng, 4, 0.3)
    x = complex(random_disc(rng, 1)[0])
    scheme, _, r, w = plan_maps(nodes, x)
    T = indicator_table(r, [w])
    for a in range(4):
        assert abs(T @ scheme.power([a]) - x**a) <= 1e-12


def test_block_mode_moment_identity(rng):
    from dfinterp.smallset import lambda_set, search_block

    lam = lambda_set(2, 2, 3)
    omega = np.exp(2j * np.pi * np.arange(3) / 3)
    design = search_block([omega, omega], lam, rng_seed=1)
    scheme = design.scheme()
    for _ in range(20):
        z = random_disc(rng, 2)
        c = scheme.coefficients(z)
        L = required_L(c) * 1.1
        sp = split(c, L)
        r, w = build_r(4 * L + 1, L), build_w(sp, scheme)
        for beta in lam.elements:
            assert abs(moment(r, w, beta) - np.prod(z ** np.array(beta)) / r.D) <= 1e-10
    with pytest.raises(ValueError):
        NodeScheme.block(np.ones((6, 2)), lam.elements)
