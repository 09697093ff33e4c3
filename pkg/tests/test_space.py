import numpy as np
import pytest

from gnlab.space import (
    build_builtin,
    build_from_file,
    doubling_constant,
    doubling_profile,
    growth_exponent,
)


def test_cycle_basic():
    s = build_builtin("cycle:8")
    assert s.n == 8
    assert s.n_edges == 8
    assert s.diameter == 4
    assert s.total_measure == 8.0
    assert s.ball_measure(0, 1) == 3.0
    assert s.ball_measure(0, 2) == 5.0
    # distance is the hop metric
    assert s.dist[0, 4] == 4
    assert s.dist[0, 7] == 1


def test_cycle_doubling():
    s = build_builtin("cycle:8")
    c, wit = doubling_constant(s)
    assert c == pytest.approx(5.0 / 3.0)
    assert wit["r"] == 1


def test_path_graph_k2():
    s = build_builtin("grid:2")
    assert s.n == 2 and s.n_edges == 1 and s.diameter == 1
    c, _ = doubling_constant(s)
    assert c == pytest.approx(1.0)  # 2r clamps to the diameter


def test_grid_torus_counts():
    g = build_builtin("grid:4x5")
    assert g.n == 20
    assert g.n_edges == 3 * 5 + 4 * 4  # rows of 4, columns of 5
    t = build_builtin("torus:4x5")
    assert t.n == 20
    assert t.n_edges == 2 * 20
    assert t.diameter == 2 + 2
    # every torus vertex has degree 4
    deg = np.diff(t.adj_indptr)
    assert (deg == 4).all()


def test_torus_length_two_axis_dedupes():
    t = build_builtin("torus:2x4")
    # a length-2 periodic axis contributes a single edge, not a double one
    deg = np.diff(t.adj_indptr)
    assert (deg == 3).all()
    assert t.n_edges == (3 * 8) // 2


def test_grid_length_one_axis():
    g = build_builtin("grid:1x5")
    assert g.n == 5
    assert g.n_edges == 4


def test_tree_shape():
    s = build_builtin("tree:2")
    assert s.n == 7
    assert s.n_edges == 6
    assert s.diameter == 4
    root = s.index["1"]
    nbrs, wts = s.neighbors(root)
    assert sorted(s.ids[v] for v in nbrs) == ["2", "3"]
    assert (wts == 1.0).all()


def test_tree_deep_doubling_blows_up():
    s = build_builtin("tree:10")
    radii, ratios = doubling_profile(s, r_max=6)
    # volume of balls around the root roughly doubles with each extra
    # level, so the measure ratio at scale r grows like 2^r
    assert ratios[list(radii).index(6)] > 8.0


def test_dumbbell_shape():
    s = build_builtin("dumbbell:4,3")
    assert s.n == 2 * 4 + 3 - 1
    # two cliques plus the connecting path
    expected_edges = 2 * (4 * 3 // 2) + 3
    assert s.n_edges == expected_edges


def test_heisenberg_ball():
    s = build_builtin("heisenberg:2")
    assert s.n >= 5
    assert "0,0,0" in s.index
    origin = s.index["0,0,0"]
    assert len(s.neighbors(origin)[0]) == 4
    # group product is non-commutative: both (1,1,1) and (1,1,0) exist
    assert "1,1,1" in s.index and "1,1,0" in s.index


def test_builtin_validation():
    with pytest.raises(ValueError):
        build_builtin("cycle:2")
    with pytest.raises(ValueError):
        build_builtin("grid:0x4")
    with pytest.raises(ValueError):
        build_builtin("whatever:3")
    with pytest.raises(ValueError):
        build_builtin("cycle:abc")
    with pytest.raises(ValueError):
        build_builtin("torus:64x64", max_vertices=1000)


def test_file_roundtrip(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text(
        "# a weighted path\n"
        "v a 1.0\n"
        "v b 2.0\n"
        "v c 0.5\n"
        "\n"
        "e a b 2.0\n"
        "e b c 1.0\n"
    )
    s = build_from_file(str(p))
    assert s.n == 3
    assert s.total_measure == 3.5
    ia, ib = s.index["a"], s.index["b"]
    assert s.mu[ib] == 2.0
    assert s.dist[ia, s.index["c"]] == 2


@pytest.mark.parametrize(
    "body,fragment",
    [
        ("v a 1\ne a b 1\n", "unknown vertex"),
        ("v a 1\nv a 2\n", "duplicate"),
        ("v a 0\n", "> 0"),
        ("v a 1\nv b 1\ne a b -1\n", "> 0"),
        ("v a 1\ne a a 1\n", "self-loop"),
        ("v a 1\nv b 1\nq a b\n", "line 3"),
        ("v a 1\nv b 1\ne a b 1\ne a b 2\n", "duplicate"),
        ("v a 1\nv b 1\nv c 1\ne a b 1\n", "connect"),
    ],
)
def test_file_errors(tmp_path, body, fragment):
    p = tmp_path / "bad.txt"
    p.write_text(body)
    with pytest.raises(ValueError) as ei:
        build_from_file(str(p))
    assert fragment in str(ei.value)


def test_growth_exponent_cycle():
    s = build_builtin("cycle:64")
    fit = growth_exponent(s)
    # one-dimensional volume growth
    assert 0.8 < fit["sigma"] < 1.2


def test_growth_exponent_torus():
    s = build_builtin("torus:16x16")
    fit = growth_exponent(s)
    assert 1.4 < fit["sigma"] < 2.2


def test_ball_measure_table_matches_direct_count():
    s = build_builtin("grid:3x4")
    for x in range(s.n):
        for r in range(s.diameter + 1):
            direct = s.mu[s.dist[x] <= r].sum()
            assert s.ball_measure(x, r) == pytest.approx(direct)
