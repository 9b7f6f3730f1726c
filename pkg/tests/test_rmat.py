import numpy as np
import pytest

from paracolor import InputError, RmatParams, average_clustering, degree_stats, preset, rmat_generate, sample_edge
from paracolor.rmat import _sample_block, block_variates, sample_edges


@pytest.mark.parametrize("name, probs", [
    ("ER", (0.25, 0.25, 0.25, 0.25)),
    ("G", (0.45, 0.15, 0.15, 0.25)),
    ("B", (0.55, 0.15, 0.15, 0.15)),
])
def test_presets(name, probs):
    p = preset(name)
    assert (p.a, p.b, p.c, p.d) == probs
    assert preset(name.lower()) == p


def test_unknown_preset():
    with pytest.raises(InputError):
        preset("X")


@pytest.mark.parametrize("kw", [
    dict(a=0.5, b=0.5, c=0.5, d=-0.5, scale=3),
    dict(a=0.3, b=0.3, c=0.3, d=0.3, scale=3),
    dict(a=0.25, b=0.25, c=0.25, d=0.25, scale=0),
    dict(a=0.25, b=0.25, c=0.25, d=0.25, scale=3, edge_factor=0),
])
def test_invalid_params(kw):
    with pytest.raises(InputError):
        RmatParams(**kw)


def test_sample_edge_single_level():
    p = preset("G", scale=1)
    assert sample_edge(p, [0.1]) == (0, 0)


def test_sample_edge_bit_accumulation():
    p = preset("ER", scale=2)
    # 0.9 -> (2,2); 0.3 -> (1,2)
    assert sample_edge(p, [0.9, 0.3]) == (2, 3)


def test_sample_edge_three_levels_hand_trace():
    # B thresholds 0.55 / 0.70 / 0.85:
    # 0.60 -> (1,2): row 0 col 1; 0.90 -> (2,2): row 1 col 1; 0.10 -> (1,1): row 0 col 0
    p = preset("B", scale=3)
    assert sample_edge(p, [0.60, 0.90, 0.10]) == (0b010, 0b110)


def test_sample_edge_quadrant_boundaries():
    p = preset("ER", scale=1)
    assert sample_edge(p, [0.0]) == (0, 0)
    assert sample_edge(p, [0.25]) == (0, 1)
    assert sample_edge(p, [0.5]) == (1, 0)
    assert sample_edge(p, [0.75]) == (1, 1)


def test_vectorized_sampler_matches_scalar():
    p = preset("G", scale=7, seed=4)
    u = block_variates(p, 3, 200)
    got = _sample_block(p, 3, 200)
    want = [sample_edge(p, u[:, e]) for e in range(200)]
    assert got.tolist() == [list(x) for x in want]


def test_sampling_independent_of_worker_count(monkeypatch):
    import paracolor.rmat as rmat
    monkeypatch.setattr(rmat, "BLOCK_EDGES", 1000)
    p = preset("B", scale=9, seed=7)
    assert np.array_equal(sample_edges(p, 1), sample_edges(p, 4))


def test_generate_is_deterministic():
    p = preset("ER", scale=10, edge_factor=8, seed=3)
    assert rmat_generate(p) == rmat_generate(p)
    assert rmat_generate(p) != rmat_generate(preset("ER", 10, 8, seed=4))


def test_generated_graph_invariants():
    g = rmat_generate(preset("B", scale=8, seed=1))
    assert g.n == 256
    assert g.m <= 8 * 256
    for v in range(g.n):
        a = g.adj(v)
        assert v not in a and np.all(np.diff(a) > 0)


@pytest.fixture(scope="module")
def scale16():
    return {name: rmat_generate(preset(name, 16, 8, seed=1)) for name in ("ER", "G", "B")}


def test_er_edge_count_after_dedup(scale16):
    m = scale16["ER"].m
    assert 0.95 * 8 * 2**16 <= m <= 8 * 2**16


def test_isolated_vertices_pattern(scale16):
    assert degree_stats(scale16["B"]).isolated_pct > 0
    assert degree_stats(scale16["ER"]).isolated_pct == 0


def test_structural_ordering(scale16):
    s = {k: degree_stats(g) for k, g in scale16.items()}
    assert s["B"].max_degree > s["G"].max_degree > s["ER"].max_degree
    assert s["B"].variance > s["G"].variance > s["ER"].variance
    assert s["B"].max_degree >= 10 * s["ER"].max_degree


def test_mean_degree_near_twice_edge_factor():
    for name in ("ER", "G", "B"):
        s = degree_stats(rmat_generate(preset(name, 14, 8, seed=2)))
        assert abs(s.avg_degree - 16) <= 0.1 * 16


def test_clustering_ordering(scale16):
    c = {k: average_clustering(g) for k, g in scale16.items()}
    assert c["B"] > c["G"] > c["ER"]
