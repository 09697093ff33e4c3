import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.optimize
import scipy.sparse
import scipy.sparse.csgraph

from gnlab import _accel
from gnlab import _kernels_np as knp
from gnlab.space import build_builtin

try:
    from gnlab import _kernels_numba as knb

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba genuinely absent
    HAVE_NUMBA = False


def _random_connected(rng, n):
    rows, cols = [], []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        rows += [i, j]
        cols += [j, i]
    for _ in range(n // 2):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            rows += [int(i), int(j)]
            cols += [int(j), int(i)]
    data = np.ones(len(rows))
    adj = scipy.sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
    adj.data[:] = 1.0
    adj.sum_duplicates()
    adj.data[:] = 1.0
    return adj


def test_bfs_matches_scipy():
    rng = np.random.default_rng(0)
    for n in (2, 5, 17, 40):
        adj = _random_connected(rng, n)
        mine = knp.bfs_all_sources(adj.indptr, adj.indices, n)
        ref = scipy.sparse.csgraph.shortest_path(adj, method="BF", unweighted=True)
        assert np.array_equal(mine, ref.astype(np.int32))


def test_bfs_single_vertex():
    assert knp.bfs_all_sources(np.array([0, 0]), np.array([], dtype=np.int64), 1)[
        0, 0
    ] == 0


def _groups(rng, n_groups):
    lengths = rng.integers(1, 6, size=n_groups)
    indptr = np.concatenate([[0], np.cumsum(lengths)])
    v = rng.normal(size=indptr[-1]) * 3.0
    return indptr.astype(np.int64), v


def _scalarized_prox(v, penalty):
    """Solve min_z 0.5||z-v||^2 + penalty(max|z|) by scalar reduction:
    at a fixed cap M the best z is clip(v, -M, M)."""
    a = np.abs(v)

    def obj(M):
        return 0.5 * ((np.maximum(a - M, 0.0)) ** 2).sum() + penalty(M)

    res = scipy.optimize.minimize_scalar(
        obj, bounds=(0.0, a.max() + 1e-12), method="bounded",
        options={"xatol": 1e-12},
    )
    M = res.x
    for cand in np.unique(np.concatenate([[0.0, M], a])):
        if obj(cand) < obj(M):
            M = cand
    return np.sign(v) * np.minimum(a, M), obj(M)


@pytest.mark.parametrize("impl", ["np"] + (["numba"] if HAVE_NUMBA else []))
def test_group_prox_linf_matches_scalarized(impl):
    mod = knp if impl == "np" else knb
    rng = np.random.default_rng(8)
    for trial in range(30):
        indptr, v = _groups(rng, int(rng.integers(1, 7)))
        sigma = rng.uniform(0.05, 4.0, size=len(indptr) - 1)
        got = mod.group_prox_linf(v.copy(), indptr, sigma)
        for g in range(len(indptr) - 1):
            seg = slice(indptr[g], indptr[g + 1])
            want, wobj = _scalarized_prox(v[seg], lambda M, s=sigma[g]: s * M)
            gobj = 0.5 * ((got[seg] - v[seg]) ** 2).sum() + sigma[g] * np.abs(
                got[seg]
            ).max()
            assert gobj <= wobj + 1e-9
            assert np.allclose(got[seg], want, atol=1e-7)


@pytest.mark.parametrize("impl", ["np"] + (["numba"] if HAVE_NUMBA else []))
def test_group_prox_sqmax_matches_scalarized(impl):
    mod = knp if impl == "np" else knb
    rng = np.random.default_rng(9)
    for trial in range(30):
        indptr, v = _groups(rng, int(rng.integers(1, 7)))
        coef = rng.uniform(0.05, 4.0, size=len(indptr) - 1)
        got = mod.group_prox_sqmax(v.copy(), indptr, coef)
        for g in range(len(indptr) - 1):
            seg = slice(indptr[g], indptr[g + 1])
            want, wobj = _scalarized_prox(
                v[seg], lambda M, c=coef[g]: c * M * M
            )
            gobj = 0.5 * ((got[seg] - v[seg]) ** 2).sum() + coef[g] * np.abs(
                got[seg]
            ).max() ** 2
            assert gobj <= wobj + 1e-9
            assert np.allclose(got[seg], want, atol=1e-7)


def test_prox_zero_input():
    indptr = np.array([0, 3], dtype=np.int64)
    z = np.zeros(3)
    assert np.array_equal(knp.group_prox_linf(z, indptr, np.array([1.0])), z)
    assert np.array_equal(knp.group_prox_sqmax(z, indptr, np.array([1.0])), z)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_numba_twin_agrees_with_numpy():
    rng = np.random.default_rng(12)
    adj = _random_connected(rng, 30)
    d1 = knp.bfs_all_sources(adj.indptr, adj.indices, 30)
    d2 = knb.bfs_all_sources(adj.indptr, adj.indices, 30)
    assert np.array_equal(d1, d2)
    for _ in range(10):
        indptr, v = _groups(rng, 5)
        sigma = rng.uniform(0.1, 2.0, size=5)
        assert np.allclose(
            knp.group_prox_linf(v.copy(), indptr, sigma),
            knb.group_prox_linf(v.copy(), indptr, sigma),
            atol=1e-12,
        )
        assert np.allclose(
            knp.group_prox_sqmax(v.copy(), indptr, sigma),
            knb.group_prox_sqmax(v.copy(), indptr, sigma),
            atol=1e-12,
        )


def test_disable_flag_selects_numpy_backend():
    env = dict(os.environ, GNLAB_DISABLE_NUMBA="1")
    code = (
        "from gnlab import _accel; "
        "assert not _accel.HAS_NUMBA, 'flag should force the numpy backend'"
    )
    subprocess.run([sys.executable, "-c", code], check=True, env=env)


def test_accel_exports_the_three_kernels():
    for name in ("bfs_all_sources", "group_prox_linf", "group_prox_sqmax"):
        assert callable(getattr(_accel, name))


def test_space_distances_use_same_bfs():
    s = build_builtin("tree:4")
    adj = scipy.sparse.csr_matrix(
        (np.ones(len(s.adj_indices)), s.adj_indices, s.adj_indptr), shape=(s.n, s.n)
    )
    ref = scipy.sparse.csgraph.shortest_path(adj, unweighted=True)
    assert np.array_equal(s.dist, ref.astype(np.int32))
