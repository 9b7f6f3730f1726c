import random

import numpy as np
import pytest

from oracles import complete, path, random_graph
from paracolor import (InputError, SchedulePolicy, build_graph, detect_conflicts, greedy_color,
                       iterative_color, num_colors, preset, rmat_generate, shuffle_labels,
                       tentative_round, verify_coloring)


def test_policy_validation():
    for kw in (dict(workers=0), dict(chunk_size=0), dict(chunking="guided"),
               dict(execution="gpu")):
        with pytest.raises(InputError):
            SchedulePolicy(**kw)


@pytest.mark.parametrize("seed", range(15))
def test_single_worker_equals_greedy(seed):
    g, _ = random_graph(random.Random(seed), 800)
    colors, rounds = iterative_color(g, SchedulePolicy(1))
    assert np.array_equal(colors, greedy_color(g))
    assert len(rounds) == 1 and rounds[0].conflicts_found == 0


def test_k2_concurrent_conflict_recolors_higher_index():
    g = path(2)
    colors, rounds = iterative_color(g, SchedulePolicy(2, execution="lockstep"))
    assert [(r.pending_size, r.conflicts_found) for r in rounds] == [(2, 1), (1, 0)]
    assert colors.tolist() == [1, 2]


def test_tentative_isolated_vertex():
    g = build_graph([], 3)
    colors = np.zeros(3, dtype=np.int64)
    tentative_round(g, [1], colors, SchedulePolicy(1))
    assert colors.tolist() == [0, 1, 0]


def test_tentative_single_worker_path():
    g = path(4)
    colors = np.zeros(4, dtype=np.int64)
    tentative_round(g, np.arange(4), colors, SchedulePolicy(1))
    assert colors.tolist() == [1, 2, 1, 2]


def test_tentative_reads_before_writes_conflict():
    g = path(2)
    colors = np.zeros(2, dtype=np.int64)
    tentative_round(g, [0, 1], colors, SchedulePolicy(2, execution="lockstep"))
    assert colors.tolist() == [1, 1]


@pytest.mark.parametrize("colors, expected", [
    ([1, 2, 1], []),
])
def test_detect_p3(colors, expected):
    got = detect_conflicts(path(3), [0, 1, 2], np.array(colors), SchedulePolicy(2))
    assert got.tolist() == expected


def test_detect_k2_and_triangle():
    assert detect_conflicts(path(2), [0, 1], np.array([1, 1]), SchedulePolicy(1)).tolist() == [1]
    got = detect_conflicts(complete(3), [0, 1, 2], np.array([1, 1, 1]), SchedulePolicy(3))
    assert got.tolist() == [1, 2]


@pytest.mark.parametrize("chunking", ["static", "dynamic"])
def test_detect_matches_definition(chunking):
    rng = random.Random(5)
    g, _ = random_graph(rng, 400, avg_degree=6)
    colors = np.array([rng.randint(1, 4) for _ in range(g.n)])
    U = np.array(sorted(rng.sample(range(g.n), g.n // 2)), dtype=np.int64)
    want = [v for v in U if any(colors[w] == colors[v] and v > w for w in g.adj(v))]
    got = detect_conflicts(g, U, colors, SchedulePolicy(4, chunking, chunk_size=7))
    assert got.tolist() == want


POLICIES = [
    SchedulePolicy(2), SchedulePolicy(4), SchedulePolicy(8),
    SchedulePolicy(4, "dynamic", 16), SchedulePolicy(3, "dynamic", 1),
    SchedulePolicy(8, execution="lockstep"), SchedulePolicy(64, execution="lockstep"),
]


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("seed", range(5))
def test_valid_and_bounded(policy, seed):
    g, _ = random_graph(random.Random(seed), 2000, avg_degree=20)
    colors, rounds = iterative_color(g, policy)
    assert verify_coloring(g, colors).valid
    assert num_colors(colors) <= g.max_degree() + 1
    for r in rounds:
        assert r.conflicts_found < r.pending_size
    assert rounds[-1].conflicts_found == 0
    assert len(rounds) <= max(g.n, 1)
    # each conflict is recolored in exactly the next round
    assert [r.pending_size for r in rounds[1:]] == [r.conflicts_found for r in rounds[:-1]]


def test_lockstep_termination_on_clique():
    # every round of a fully concurrent clique leaves only the lowest vertex settled
    g = complete(6)
    colors, rounds = iterative_color(g, SchedulePolicy(6, execution="lockstep"))
    assert [r.pending_size for r in rounds] == [6, 5, 4, 3, 2, 1]
    assert sorted(colors.tolist()) == [1, 2, 3, 4, 5, 6]


def test_serial_cutoff():
    g = complete(6)
    colors, rounds = iterative_color(g, SchedulePolicy(6, execution="lockstep"), serial_cutoff=5)
    assert [r.pending_size for r in rounds] == [6, 5]
    assert verify_coloring(g, colors).valid


def test_empty_graph():
    colors, rounds = iterative_color(build_graph([], 0), SchedulePolicy(4))
    assert len(colors) == 0 and rounds == []


def test_rmat_b_scale16_eight_workers():
    g = shuffle_labels(rmat_generate(preset("B", 16, 8, seed=1)), 1)
    for execution in ("threads", "lockstep"):
        colors, rounds = iterative_color(g, SchedulePolicy(8, execution=execution))
        assert verify_coloring(g, colors).valid
        assert len(rounds) <= 8
