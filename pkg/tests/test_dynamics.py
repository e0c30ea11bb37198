import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, path, star
from oracles import routh_hurwitz_stable, simpson_gramian
from herd.dynamics import (SystemMatrices, default_horizon, finite_gramian_quadrature,
                           finite_horizon_gramian, is_hurwitz, lyapunov_gramian, spectral_abscissa,
                           taylor_consensus)
from herd.errors import NotHurwitzError
from herd.graph import Graph
from herd.synthetic import strongly_connected


def _rel_fro(X, Y):
    return np.linalg.norm(X - Y) / np.linalg.norm(Y)


def test_taylor_consensus_examples():
    s = taylor_consensus(Graph(1, []), 0)
    np.testing.assert_array_equal(s.A, [[-1.0]])
    np.testing.assert_array_equal(s.B, [[1.0]])
    s = taylor_consensus(path(2, directed=False), 1)
    np.testing.assert_array_equal(s.A, [[-1.0, 1.0], [1.0, -2.0]])
    # directed 0 -> 1: node 1 listens to node 0, node 0 listens to nobody
    s = taylor_consensus(path(2), 0)
    np.testing.assert_array_equal(s.A, [[-1.0, 0.0], [1.0, -1.0]])
    with pytest.raises(ValueError):
        taylor_consensus(path(2), 2)


def test_taylor_consensus_rows_sum_to_grounding():
    g = Graph(3, [(0, 1, 2.0), (1, 2, 0.5), (2, 0, 1.5)])
    A = taylor_consensus(g, 2).A
    np.testing.assert_allclose(A.sum(axis=1), [0, 0, -1])
    assert A[1, 0] == 2.0 and A[2, 1] == 0.5 and A[0, 2] == 1.5


def test_system_shape_checks():
    with pytest.raises(ValueError):
        SystemMatrices(np.zeros((2, 3)), np.zeros(2))
    with pytest.raises(ValueError):
        SystemMatrices(np.zeros((2, 2)), np.zeros(3))


def test_hurwitz_examples():
    assert is_hurwitz(np.array([[-1.0]])) == (True, -1.0)
    assert not is_hurwitz(np.array([[0.0]]))[0]
    ok, a = is_hurwitz(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert not ok and abs(a) < 1e-12
    with pytest.raises(NotHurwitzError):
        default_horizon(np.zeros((2, 2)))
    assert default_horizon(np.array([[-2.0]])) == pytest.approx(20.0)


@pytest.mark.parametrize("g", [star(4), path(4, directed=False), cycle(5), complete(4)],
                         ids=["star", "path", "cycle", "complete"])
def test_grounded_consensus_is_hurwitz_exactly(g):
    for i in range(g.n):
        A = taylor_consensus(g, i).A
        assert routh_hurwitz_stable(A)
        assert is_hurwitz(A)[0]


def test_hurwitz_on_random_strongly_connected(rng):
    for seed in range(40):
        n = int(rng.integers(1, 51))
        g = strongly_connected(n, 0.1, seed, weighted=bool(seed % 2))
        i = int(rng.integers(n))
        assert spectral_abscissa(taylor_consensus(g, i).A) < 0


def test_not_herdable_node_is_not_hurwitz():
    # node 1 is not reached from node 0 in 1 -> 0, so the pair has a zero mode
    with pytest.raises(NotHurwitzError):
        lyapunov_gramian(taylor_consensus(Graph(2, [(1, 0)]), 0))


def test_lyapunov_scalar_and_zero_input():
    W = lyapunov_gramian(SystemMatrices(np.array([[-1.0]]), np.array([1.0])))
    assert W.W[0, 0] == pytest.approx(0.5, abs=1e-15)
    assert math.isinf(W.horizon)
    W = lyapunov_gramian(SystemMatrices(-np.eye(3), np.zeros(3)))
    np.testing.assert_array_equal(W.W, 0)


def test_lyapunov_matches_quadrature_on_path():
    sys = taylor_consensus(path(2, directed=False), 0)
    W = lyapunov_gramian(sys).W
    Q = finite_gramian_quadrature(sys, 60.0).W
    assert np.abs(W - Q).max() < 1e-6


def test_quadrature_scalar():
    sys = SystemMatrices(np.array([[-1.0]]), np.array([1.0]))
    assert finite_gramian_quadrature(sys, 20.0).W[0, 0] == pytest.approx(0.5 * (1 - math.exp(-40)), abs=1e-12)
    assert finite_gramian_quadrature(sys, 1.0).W[0, 0] == pytest.approx(0.5 * (1 - math.exp(-2)), rel=1e-12)
    np.testing.assert_array_equal(finite_gramian_quadrature(sys, 0.0).W, 0)
    with pytest.raises(ValueError):
        finite_gramian_quadrature(sys, 1.0, steps=10)
    with pytest.raises(ValueError):
        finite_gramian_quadrature(sys, -1.0)


def test_quadrature_matches_independent_simpson(rng):
    for seed in range(5):
        g = strongly_connected(int(rng.integers(2, 7)), 0.3, seed, weighted=True)
        sys = taylor_consensus(g, 0)
        Q = finite_gramian_quadrature(sys, 3.0).W
        S = simpson_gramian(sys.A, sys.B, 3.0, 400)
        assert _rel_fro(Q, S) < 1e-8


def test_finite_horizon_closed_form_matches_quadrature(rng):
    for seed in range(8):
        g = strongly_connected(int(rng.integers(2, 12)), 0.2, seed, weighted=True)
        sys = taylor_consensus(g, int(rng.integers(g.n)))
        for t_f in (0.5, 5.0):
            F = finite_horizon_gramian(sys, t_f).W
            Q = finite_gramian_quadrature(sys, t_f).W
            assert _rel_fro(F, Q) < 1e-8


def test_gramian_monotone_in_horizon():
    sys = taylor_consensus(cycle(5), 2)
    W_inf = lyapunov_gramian(sys)
    prev = np.zeros((5, 5))
    for t_f in (0.5, 1.0, 4.0, 16.0):
        W = finite_horizon_gramian(sys, t_f, W_inf).W
        assert np.linalg.eigvalsh(W - prev).min() > -1e-12
        prev = W
    assert np.linalg.eigvalsh(W_inf.W - prev).min() > -1e-12


def test_lyapunov_vs_quadrature_random_systems(rng):
    for seed in range(15):
        n = int(rng.integers(1, 21))
        g = strongly_connected(n, 0.15, 1000 + seed, weighted=bool(seed % 2))
        sys = taylor_consensus(g, int(rng.integers(n)))
        W = lyapunov_gramian(sys)
        assert W.lyapunov_residual(sys) <= 1e-8 * np.linalg.norm(sys.B @ sys.B.T)
        Q = finite_gramian_quadrature(sys, default_horizon(sys.A)).W
        assert _rel_fro(Q, W.W) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.floats(0.0, 0.6), st.integers(0, 10_000))
def test_gramian_symmetric_psd(n, p, seed):
    g = strongly_connected(n, p, seed, weighted=True)
    sys = taylor_consensus(g, seed % n)
    W = lyapunov_gramian(sys).W
    np.testing.assert_array_equal(W, W.T)
    assert np.linalg.eigvalsh(W).min() > -1e-10 * np.abs(W).max()
    assert W[seed % n, seed % n] > 0
