"""Compiled kernels agree with their uncompiled Python bodies."""

import numpy as np
import pytest
import scipy.linalg

from conftest import random_digraph
from herd import _accel, _kernels
from herd.graph import Graph


def _graphs(rng, count=8):
    for k in range(count):
        n = int(rng.integers(1, 40))
        g = random_digraph(rng, n, float(rng.uniform(0.0, 0.15)))
        yield g if k % 2 == 0 else Graph(n, [(u, v) for u, v, _ in g.edges() if u < v], directed=False)


def _both(kernel, *args):
    return kernel(*args), kernel.py_func(*args)


def test_backend_flag():
    assert _accel.backend() in ("numba", "python")
    assert hasattr(_kernels.tarjan_scc, "py_func")


def test_graph_kernels_match(rng):
    for g in _graphs(rng):
        indptr, indices = g.csr
        src = np.array([0], dtype=np.int64)
        a, b = _both(_kernels.reach_mask, indptr, indices, g.n, src)
        np.testing.assert_array_equal(a, b)
        (ca, na), (cb, nb) = _both(_kernels.tarjan_scc, indptr, indices, g.n)
        assert na == nb
        np.testing.assert_array_equal(ca, cb)
        a, b = _both(_kernels.union_find_components, g.n, g.src, g.dst)
        np.testing.assert_array_equal(a, b)
        (la, ra), (lb, rb) = _both(_kernels.hopcroft_karp, g.n, g.n, indptr, indices)
        np.testing.assert_array_equal(la, lb)
        np.testing.assert_array_equal(ra, rb)
        a, b = _both(_kernels.bfs_all_pairs, indptr, indices, g.n)
        np.testing.assert_array_equal(a, b)
        a, b = _both(_kernels.brandes_betweenness, indptr, indices, g.n)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


def test_linear_kernels_match(rng):
    n = 6
    A = rng.normal(size=(n, n)) - 3 * np.eye(n)
    B = rng.normal(size=(n, 2))
    U = rng.normal(size=(201, 2))
    x0 = rng.normal(size=n)
    (Xa, ka), (Xb, kb) = _both(_kernels.rk4_linear, A, B, U, 0.01, x0)
    assert ka == kb == -1
    np.testing.assert_allclose(Xa, Xb, rtol=1e-12, atol=1e-14)

    x, w = np.polynomial.legendre.leggauss(5)
    E_nodes = np.stack([scipy.linalg.expm(A * s) for s in 0.05 * (x + 1)])
    E_panel = scipy.linalg.expm(A * 0.1)
    a, b = _both(_kernels.gl_gramian_accumulate, E_panel, E_nodes, 0.05 * w, B, 20)
    np.testing.assert_allclose(a, b, rtol=1e-12)

    p = rng.normal(size=n)
    a, b = _both(_kernels.backward_propagate, E_panel.T, p, 30)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)
    np.testing.assert_array_equal(a[-1], p)


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
def test_rk4_reports_blowup():
    A = np.array([[1e3]])
    U = np.zeros((2001, 1))
    X, bad = _kernels.rk4_linear(A, np.ones((1, 1)), U, 1.0, np.ones(1))
    assert bad > 0 and X.shape[0] == bad
    assert np.all(np.isfinite(X))


@pytest.mark.parametrize("n", [0, 1])
def test_degenerate_sizes(n):
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.zeros(0, dtype=np.int64)
    comp, k = _kernels.tarjan_scc(indptr, indices, n)
    assert k == n and comp.size == n
    assert _kernels.bfs_all_pairs(indptr, indices, n).shape == (n, n)
