import numpy as np
import pytest

from gnlab.funcnorms import (
    besov_norm,
    gradient_modulus,
    hessian_modulus,
    is_mean_zero,
    lp_norm,
    maximal_function,
    morrey_norm,
    sobolev_norm,
    triebel_sup,
)
from gnlab.heat import Semigroup
from gnlab.space import Space, build_builtin


@pytest.fixture(scope="module")
def p3():
    return build_builtin("grid:3")


def test_lp_norm_weighted():
    s = Space(["a", "b"], np.array([1.0, 3.0]), [(0, 1, 1.0)], name="w")
    f = np.array([2.0, -1.0])
    assert lp_norm(s, f, 1.0) == pytest.approx(5.0)
    assert lp_norm(s, f, 2.0) == pytest.approx(np.sqrt(7.0))
    assert lp_norm(s, f, np.inf) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        lp_norm(s, f, 0.5)


def test_gradient_modulus_p3(p3):
    f = np.array([3.0, 1.0, 2.0])
    assert np.allclose(gradient_modulus(p3, f), [2.0, np.sqrt(5.0), 1.0])
    assert np.allclose(gradient_modulus(p3, f, mode="max"), [2.0, 2.0, 1.0])
    # max-mode <= l2-mode <= sqrt(deg) * max-mode
    g2 = gradient_modulus(p3, f)
    gm = gradient_modulus(p3, f, mode="max")
    assert (gm <= g2 + 1e-15).all()
    assert (g2 <= np.sqrt(2.0) * gm + 1e-15).all()


def test_gradient_respects_edge_weights():
    s = Space(["a", "b"], np.ones(2), [(0, 1, 4.0)], name="w4")
    g = gradient_modulus(s, np.array([0.0, 1.0]))
    assert np.allclose(g, [2.0, 2.0])  # sqrt(w) scales the difference


def test_sobolev_norm(p3):
    f = np.array([3.0, 1.0, 2.0])
    assert sobolev_norm(p3, f, 1.0) == pytest.approx(
        6.0 + 2.0 + np.sqrt(5.0) + 1.0
    )


def test_is_mean_zero(p3):
    assert is_mean_zero(p3, np.array([1.0, -2.0, 1.0]))
    assert not is_mean_zero(p3, np.array([1.0, 1.0, 1.0]))
    # tolerance scales with the sup, so tiny relative noise still counts
    f = np.array([1.0, -2.0, 1.0]) + 1e-14
    assert is_mean_zero(p3, f)


def test_besov_k2_closed_form():
    k2 = build_builtin("grid:2")
    sg = Semigroup(k2)
    f = np.array([1.0, -1.0])
    # P_t f = exp(-2t) f, so the dyadic difference has sup norm
    # exp(-2t) - exp(-4t) and the raw size is just exp(-2t)
    alpha = -1.0
    expect_semi = max(
        np.sqrt(t) * (np.exp(-2 * t) - np.exp(-4 * t)) for t in sg.t_grid
    )
    assert besov_norm(k2, f, alpha, sg) == pytest.approx(expect_semi, rel=1e-12)
    grid_ext = list(sg.t_grid) + [2.0 * sg.t_grid[-1]]
    expect_raw = max(np.sqrt(t) * np.exp(-2 * t) for t in grid_ext)
    assert besov_norm(k2, f, alpha, sg, mode="raw") == pytest.approx(
        expect_raw, rel=1e-12
    )


def test_besov_requirements():
    k2 = build_builtin("grid:2")
    sg = Semigroup(k2)
    with pytest.raises(ValueError):
        besov_norm(k2, np.array([1.0, -1.0]), 0.5, sg)
    with pytest.raises(ValueError):
        besov_norm(k2, np.array([1.0, 0.0]), -1.0, sg, mode="raw")


def test_morrey_and_maximal(p3):
    f = np.array([3.0, 1.0, 2.0])
    assert morrey_norm(p3, f, -1.0, r_max=2) == pytest.approx(4.0)
    assert np.allclose(maximal_function(p3, np.array([3.0, 0.0, 0.0])), [3.0, 1.0, 1.0])
    spike = np.array([3.0, 0.0, 0.0])
    assert (maximal_function(p3, spike) >= np.abs(spike) - 1e-15).all()


def test_triebel_sup_k2():
    k2 = build_builtin("grid:2")
    sg = Semigroup(k2)
    f = np.array([1.0, -1.0])
    prof = triebel_sup(k2, f, -1.0, sg)
    expect = max(np.sqrt(t) * np.exp(-2 * t) for t in sg.t_grid)
    assert np.allclose(prof, expect)
    with pytest.raises(ValueError):
        triebel_sup(k2, np.array([1.0, 0.0]), -1.0, sg)
    ok = triebel_sup(k2, np.array([1.0, 0.0]), -1.0, sg, mean_zero="allow")
    assert ok.shape == (2,)


def test_hessian_grid_quadratic():
    g5 = build_builtin("grid:5")
    f = np.arange(5.0) ** 2
    assert np.allclose(hessian_modulus(g5, f), [0.0, 2.0, 2.0, 2.0, 0.0])


def test_hessian_mixed_term():
    g33 = build_builtin("grid:3x3")
    x = np.array([c[0] for c in g33.coords], dtype=float)
    y = np.array([c[1] for c in g33.coords], dtype=float)
    f = x * y
    got = hessian_modulus(g33, f).reshape(3, 3)
    # forward mixed difference is 1 wherever the stencil fits, and the
    # Frobenius norm doubles the off-diagonal square
    expect = np.array(
        [
            [np.sqrt(2.0), np.sqrt(2.0), 0.0],
            [np.sqrt(2.0), np.sqrt(2.0), 0.0],
            [0.0, 0.0, 0.0],
        ]
    )
    assert np.allclose(got, expect)


def test_hessian_torus_wraps():
    t4 = build_builtin("torus:4")
    f = np.cos(2 * np.pi * np.arange(4) / 4)
    got = hessian_modulus(t4, f)
    # second difference of cos on the 4-cycle: f(k+1) + f(k-1) - 2 f(k)
    expect = np.abs(np.roll(f, 1) + np.roll(f, -1) - 2 * f)
    assert np.allclose(got, expect)


def test_hessian_length_two_torus_axis():
    t24 = build_builtin("torus:2x4")
    base = np.cos(2 * np.pi * np.arange(4) / 4)
    f = np.concatenate([base, base])  # constant along the length-2 axis
    got = hessian_modulus(t24, f).reshape(2, 4)
    expect = np.abs(np.roll(base, 1) + np.roll(base, -1) - 2 * base)
    assert np.allclose(got, np.vstack([expect, expect]))


def test_hessian_needs_lattice():
    tree = build_builtin("tree:3")
    with pytest.raises(ValueError):
        hessian_modulus(tree, np.zeros(tree.n))
