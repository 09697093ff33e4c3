import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnlab.rearrange import (
    StepFunction,
    adaptive_integral,
    decreasing_rearrangement,
    distribution,
    double_star,
    k_functional_Lq_Linf,
    lorentz_norm,
    qstar_powers,
    step_product_integral,
)
from gnlab.space import build_builtin

from reference import (
    brute_lower_average,
    brute_rearrangement,
    brute_star_at,
    random_function,
    random_weighted_space,
)


@pytest.fixture(scope="module")
def p3():
    return build_builtin("grid:3")


def test_step_function_validation():
    with pytest.raises(ValueError):
        StepFunction(np.array([2.0, 1.0]), np.array([3.0, 1.0]), 2.0)
    with pytest.raises(ValueError):
        StepFunction(np.array([1.0, 2.0]), np.array([1.0, 3.0]), 2.0)
    with pytest.raises(ValueError):
        StepFunction(np.array([1.0, 2.0]), np.array([3.0, -1.0]), 2.0)


def test_p3_oracle(p3):
    f = np.array([3.0, 1.0, 2.0])
    sf = decreasing_rearrangement(p3, f)
    assert sf.to_rows() == [(0.0, 1.0, 3.0), (1.0, 2.0, 2.0), (2.0, 3.0, 1.0)]
    # right-continuous: value at a break belongs to the next piece
    assert sf.evaluate(1.0) == 2.0
    assert sf.evaluate(0.5) == 3.0
    assert sf.evaluate(3.0) == 0.0  # vanishes at total mass
    assert sf.double_star(2.0) == pytest.approx(2.5)
    assert sf.double_star(3.0) == pytest.approx(2.0)
    assert sf.double_star(4.0) == pytest.approx(6.0 / 4.0)  # average keeps growing past mu(M)
    assert double_star(p3, f, 2.0) == pytest.approx(2.5)


def test_signs_and_zeros_dropped(p3):
    sf = decreasing_rearrangement(p3, np.array([0.0, -2.0, 0.0]))
    # signs are dropped; the zero remainder shows up as one closing row
    assert sf.to_rows() == [(0.0, 1.0, 2.0), (1.0, 3.0, 0.0)]
    assert sf.breaks.tolist() == [1.0] and sf.values.tolist() == [2.0]


def test_distribution(p3):
    f = np.array([3.0, 1.0, 2.0])
    assert distribution(p3, f, 2.0) == pytest.approx(1.0)
    assert distribution(p3, f, 1.5) == pytest.approx(2.0)
    assert distribution(p3, f, 0.5) == pytest.approx(3.0)
    assert distribution(p3, f, 3.0) == pytest.approx(0.0)


def test_power_matches_rearranged_power(p3):
    f = np.array([3.0, 1.0, 2.0])
    sq = decreasing_rearrangement(p3, f).power(2.0)
    direct = decreasing_rearrangement(p3, f**2)
    assert np.allclose(sq.breaks, direct.breaks)
    assert np.allclose(sq.values, direct.values)


def test_qstar_and_k_functional(p3):
    f = np.array([3.0, 1.0, 2.0])
    star_q, avg_q = qstar_powers(p3, f, 2.0, 2.0)
    assert star_q == pytest.approx(1.0)  # right-continuous: piece [2, 3) is active
    assert avg_q == pytest.approx(np.sqrt(13.0 / 2.0))
    assert qstar_powers(p3, f, 2.0, 1.5)[0] == pytest.approx(4.0)
    assert k_functional_Lq_Linf(p3, f, 1.0, 2.0) == pytest.approx(5.0)
    assert k_functional_Lq_Linf(p3, f, 2.0, 1.0) == pytest.approx(3.0)
    # cut-at-s convention: K_q(s)^q equals s times the running q-average
    s = 2.3
    k = k_functional_Lq_Linf(p3, f, 2.0, s)
    assert k == pytest.approx((s * qstar_powers(p3, f, 2.0, s)[1] ** 2.0) ** 0.5)
    with pytest.raises(ValueError):
        k_functional_Lq_Linf(p3, f, 1.0, 0.0)


def test_lorentz_oracles(p3):
    ones = np.ones(3)
    assert lorentz_norm(p3, ones, 2.0, np.inf, variant="star") == pytest.approx(np.sqrt(3.0))
    assert lorentz_norm(p3, ones, 2.0, np.inf) == pytest.approx(np.sqrt(3.0))
    ind = np.array([1.0, 0.0, 0.0])
    assert lorentz_norm(p3, ind, 2.0, 2.0, variant="star") == pytest.approx(1.0)
    # L(p, p) of the star variant is the plain L_p norm
    f = np.array([3.0, 1.0, 2.0])
    lp3 = (27.0 + 1.0 + 8.0) ** (1.0 / 3.0)
    assert lorentz_norm(p3, f, 3.0, 3.0, variant="star") == pytest.approx(lp3)
    assert lorentz_norm(p3, f, np.inf, np.inf) == pytest.approx(3.0)


def test_lorentz_double_star_exceeds_star(p3):
    f = np.array([3.0, 1.0, 2.0])
    for p, r in [(1.5, 1.0), (2.0, 2.0), (2.0, np.inf), (3.0, 1.5)]:
        assert lorentz_norm(p3, f, p, r) >= lorentz_norm(p3, f, p, r, variant="star") - 1e-12


def test_lorentz_errors(p3):
    f = np.array([3.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        lorentz_norm(p3, f, 1.0, 2.0)  # running average needs p > 1
    with pytest.raises(ValueError):
        lorentz_norm(p3, f, np.inf, 2.0)
    with pytest.raises(ValueError):
        lorentz_norm(p3, f, 2.0, 0.5)


def test_step_product_integral(p3):
    f = np.array([3.0, 1.0, 2.0])
    sf = decreasing_rearrangement(p3, f)
    assert step_product_integral([sf, sf]) == pytest.approx(14.0)
    ind = decreasing_rearrangement(p3, np.array([1.0, 0.0, 0.0]))
    assert step_product_integral([sf, sf, ind]) == pytest.approx(9.0)
    assert step_product_integral([sf], upto=2.0) == pytest.approx(5.0)


def test_adaptive_integral_polynomial():
    val = adaptive_integral(lambda x: 3.0 * x**2, 0.0, 2.0)
    assert val == pytest.approx(8.0, rel=1e-12)
    nodes = []
    val2 = adaptive_integral(np.exp, -1.0, 1.0, collect=nodes)
    assert val2 == pytest.approx(np.e - 1.0 / np.e, rel=1e-10)
    num = sum(w @ np.exp(x) for x, w in nodes)
    assert num == pytest.approx(val2, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_rearrangement_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    space = random_weighted_space(rng, max_n=24)
    f = random_function(rng, space.n)
    sf = decreasing_rearrangement(space, f)
    rb, rv = brute_rearrangement(space.mu, f)
    assert np.allclose(sf.breaks, rb, atol=1e-12, rtol=0.0)
    assert np.allclose(sf.values, rv, atol=1e-12, rtol=0.0)
    # mass is preserved exactly
    gaps = np.diff(np.concatenate([[0.0], sf.breaks]))
    assert (sf.values * gaps).sum() == pytest.approx(
        float(np.abs(f) @ space.mu), abs=1e-12 * max(1.0, float(np.abs(f) @ space.mu))
    )
    # spot-check the distribution-function definition of f*
    for t in [0.01, 0.5 * space.total_measure, 0.99 * space.total_measure]:
        assert sf.evaluate(t) == pytest.approx(brute_star_at(space.mu, f, t), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.sampled_from([1.0, 1.5, 2.0]),
)
def test_running_average_matches_brute_force(seed, q):
    rng = np.random.default_rng(seed)
    space = random_weighted_space(rng, max_n=16)
    f = random_function(rng, space.n)
    if not np.abs(f).any():
        f[0] = 1.0
    sf = decreasing_rearrangement(space, f).power(q)
    for t in [0.3, 1.7, space.total_measure, 2.0 * space.total_measure]:
        assert sf.double_star(t) == pytest.approx(
            brute_lower_average(space.mu, f, q, t), rel=1e-12, abs=1e-13
        )


def test_five_hundred_seeded_pairs_exact():
    rng = np.random.default_rng(20260819)
    for _ in range(500):
        space = random_weighted_space(rng, max_n=50)
        f = random_function(rng, space.n)
        sf = decreasing_rearrangement(space, f)
        rb, rv = brute_rearrangement(space.mu, f)
        assert np.allclose(sf.breaks, rb, atol=1e-12, rtol=0.0)
        assert np.allclose(sf.values, rv, atol=1e-12, rtol=0.0)
        mass = float(np.abs(f) @ space.mu)
        gaps = np.diff(np.concatenate([[0.0], sf.breaks]))
        assert abs((sf.values * gaps).sum() - mass) <= 1e-12 * max(1.0, mass)
