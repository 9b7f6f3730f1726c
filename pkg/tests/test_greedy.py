import random
import time

import numpy as np
import pytest

from oracles import complete, cycle, naive_greedy, path, random_graph, star
from paracolor import (InputError, build_graph, first_permissible, greedy_color, new_marks,
                       num_colors, preset, rmat_generate, shuffle_labels, verify_coloring)


def test_path_natural_order():
    assert greedy_color(path(4)).tolist() == [1, 2, 1, 2]


@pytest.mark.parametrize("order", [[0, 1, 2, 3], [3, 1, 0, 2], [2, 3, 1, 0]])
def test_clique_uses_n_colors(order):
    c = greedy_color(complete(4), order)
    assert sorted(c.tolist()) == [1, 2, 3, 4]


def test_odd_cycle():
    assert greedy_color(cycle(5)).tolist() == [1, 2, 1, 2, 3]


def test_star_center_last():
    c = greedy_color(star(5, center=0), [1, 2, 3, 4, 5, 0])
    assert c.tolist() == [2, 1, 1, 1, 1, 1]


@pytest.mark.parametrize("order", [[0, 1], [0, 0, 1], [0, 1, 3], [1, 1, 0], [0, 1, 2, 3]])
def test_order_must_be_permutation(order):
    with pytest.raises(InputError):
        greedy_color(path(3), order)


def test_first_permissible_examples():
    v = 7
    marks = new_marks(4, sentinel=100)
    assert first_permissible(marks, v) == 1
    marks[1] = marks[2] = v
    assert first_permissible(marks, v) == 3
    marks = new_marks(4, sentinel=100)
    marks[1] = marks[3] = v
    marks[2] = 5  # stale label from an earlier vertex
    assert first_permissible(marks, v) == 2


def test_marks_never_reinitialized_between_vertices():
    # a single scratch array serves a whole run; labels keep vertices apart
    g = cycle(7)
    marks = new_marks(g.max_degree(), g.n)
    from paracolor.greedy import _greedy
    colors = np.zeros(g.n, dtype=np.int64)
    _greedy(g.offsets, g.neighbors, np.arange(g.n, dtype=np.int64), colors, marks)
    assert colors.tolist() == naive_greedy(7, g.edges().tolist(), range(7))
    assert set(marks.tolist()) <= set(range(g.n)) | {g.n}


def test_verify_examples():
    assert len(verify_coloring(complete(3), [1, 2, 3])) == 0
    v = verify_coloring(path(2), [2, 2])
    assert v.conflicts == [(0, 1)] and not v.valid
    v = verify_coloring(path(3), [1, 0, 1])
    assert v.uncolored == [1] and v.conflicts == []


def test_verify_length_mismatch():
    with pytest.raises(InputError):
        verify_coloring(path(3), [1, 2])


def test_num_colors():
    assert num_colors(greedy_color(complete(4))) == 4
    assert num_colors(greedy_color(build_graph([], 0))) == 0
    with pytest.raises(InputError):
        num_colors([1, 0, 2])


@pytest.mark.parametrize("seed", range(40))
def test_matches_naive_oracle(seed):
    rng = random.Random(seed)
    g, edges = random_graph(rng, 500)
    order = list(range(g.n))
    rng.shuffle(order)
    got = greedy_color(g, order)
    assert got.tolist() == naive_greedy(g.n, edges, order)


@pytest.mark.parametrize("seed", range(10))
def test_back_degree_bound(seed):
    rng = random.Random(seed)
    g, _ = random_graph(rng, 300, avg_degree=10)
    order = list(range(g.n))
    rng.shuffle(order)
    c = greedy_color(g, order)
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    for v in range(g.n):
        earlier = np.count_nonzero(pos[g.adj(v)] < pos[v])
        assert 1 <= c[v] <= earlier + 1
    assert verify_coloring(g, c).valid
    assert num_colors(c) <= g.max_degree() + 1


def test_far_below_max_degree_on_rmat_er():
    g = shuffle_labels(rmat_generate(preset("ER", 14, 8, seed=1)), 1)
    k = num_colors(greedy_color(g))
    assert k <= (g.max_degree() + 1) / 2


def _best_time(g, reps=7):
    greedy_color(g)
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        greedy_color(g)
        best = min(best, time.perf_counter() - t0)
    return best


def test_runtime_roughly_linear():
    small = shuffle_labels(rmat_generate(preset("ER", 15, 8, seed=1)), 1)
    big = shuffle_labels(rmat_generate(preset("ER", 16, 8, seed=1)), 1)
    assert _best_time(big) <= 2.5 * _best_time(small)
