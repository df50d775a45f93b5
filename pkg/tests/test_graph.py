from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fovlap.camera import CameraPose
from fovlap.errors import EmptyEnsemble
from fovlap.geometry import look_at
from fovlap.graph import (ComponentHistogram, ConnectivityCriteria, accumulate, build_graph,
                          components, graph_from_adjacency, p_calib, pairwise_angle)
from fovlap.overlap import OverlapReport


def fake_report(ro):
    ro = np.asarray(ro, dtype=float)
    n = ro.shape[0]
    return OverlapReport(0.0, 0.0, ro, 1.0, np.ones(n))


def line_poses(n, spacing=100.0):
    poses = []
    for i in range(n):
        pos = np.array([i * spacing, 0.0, 500.0])
        poses.append(CameraPose(pos, look_at(pos), i))
    return poses


def test_criteria_validation():
    with pytest.raises(ValueError):
        ConnectivityCriteria(t_threshold=1.5)
    with pytest.raises(ValueError):
        ConnectivityCriteria(similarity_mode="angular")
    with pytest.raises(ValueError):
        ConnectivityCriteria(similarity_mode="other")


def test_pairwise_angle_identical():
    p = line_poses(1)[0]
    assert pairwise_angle(p, p) == 0.0


def test_complete_graph():
    n = 6
    crit = ConnectivityCriteria(0.8, "angular", mu_max_deg=180.0, d_max_km=None)
    g = build_graph(fake_report(np.ones((n, n))), line_poses(n), crit)
    assert g.largest_component_size == n
    assert not np.any(np.diag(g.adjacency))


def test_t_one_with_distinct_footprints():
    n = 5
    ro = np.full((n, n), 0.9)
    np.fill_diagonal(ro, 1.0)
    g = build_graph(fake_report(ro), line_poses(n), ConnectivityCriteria(1.0, d_max_km=1e9))
    assert g.largest_component_size == 1
    assert sorted(g.component_sizes.tolist()) == [1] * n


def test_fig2_left_topology():
    # a triangle {0,1,2} plus a pair {3,4}
    adj = np.zeros((5, 5), dtype=bool)
    for a, b in [(0, 1), (1, 2), (3, 4)]:
        adj[a, b] = True
    g = graph_from_adjacency(adj)
    assert sorted(g.component_sizes.tolist()) == [2, 3]
    assert g.largest_component_size == 3


def test_baseline_mode_blocks_far_pairs():
    n = 4
    g = build_graph(fake_report(np.ones((n, n))), line_poses(n),
                    ConnectivityCriteria(0.8, d_max_km=150.0))
    # only neighbours are similar, which still chains everything together
    assert g.largest_component_size == 4
    assert not g.adjacency[0, 2]
    g = build_graph(fake_report(np.ones((n, n))), line_poses(n, 200.0),
                    ConnectivityCriteria(0.8, d_max_km=150.0))
    assert g.largest_component_size == 1


def test_invalid_footprint_never_connects():
    n = 3
    rep = fake_report(np.zeros((n, n)))
    rep.areas[1] = 0.0
    g = build_graph(rep, line_poses(n), ConnectivityCriteria(0.0, d_max_km=1e9))
    assert not g.adjacency[0, 1] and not g.adjacency[1, 2]
    assert g.adjacency[0, 2]


def test_accumulate_and_fig3_histogram():
    hist = ComponentHistogram()
    for size in [3, 5, 3, 4, 4]:
        adj = np.zeros((5, 5), dtype=bool)
        for i in range(size - 1):
            adj[i, i + 1] = True
        hist = accumulate(hist, graph_from_adjacency(adj))
    assert hist.counts == Counter({3: 2, 4: 2, 5: 1})
    assert hist.n_mc == 5
    assert p_calib(hist, 3) == 1.0
    assert p_calib(hist, 4) == pytest.approx(0.6)
    assert p_calib(hist, 5) == pytest.approx(0.2)
    assert p_calib(hist, 1) == 1.0


def test_empty_graph_counts_singleton():
    g = graph_from_adjacency(np.zeros((4, 4), dtype=bool))
    assert accumulate(ComponentHistogram(), g).counts == Counter({1: 1})


def test_empty_ensemble():
    with pytest.raises(EmptyEnsemble):
        p_calib(ComponentHistogram(), 1)


def test_histogram_merge():
    a = ComponentHistogram(Counter({3: 1, 4: 2}), 3)
    b = ComponentHistogram(Counter({4: 1, 5: 1}), 2)
    m = a.merge(b)
    assert m.counts == Counter({3: 1, 4: 3, 5: 1}) and m.n_mc == 5
    assert m.merge(ComponentHistogram()) == m


sym_adj = st.integers(2, 9).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: np.array(bits).reshape(n, n)))


@given(sym_adj, st.randoms(use_true_random=False))
def test_relabel_invariance(adj, rnd):
    g = graph_from_adjacency(adj)
    n = g.n_nodes
    perm = list(range(n))
    rnd.shuffle(perm)
    g2 = graph_from_adjacency(g.adjacency[np.ix_(perm, perm)])
    assert sorted(g.component_sizes.tolist()) == sorted(g2.component_sizes.tolist())
    np.testing.assert_array_equal(g.adjacency, g.adjacency.T)
    assert 1 <= g.largest_component_size <= n


def brute_components(adj):
    n = adj.shape[0]
    seen, sizes = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], 0
        seen.add(s)
        while stack:
            u = stack.pop()
            comp += 1
            for v in range(n):
                if adj[u, v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        sizes.append(comp)
    return sorted(sizes)


@given(sym_adj)
def test_union_find_matches_traversal(adj):
    g = graph_from_adjacency(adj)
    assert sorted(g.component_sizes.tolist()) == brute_components(g.adjacency)
    labels = components(g.adjacency)
    assert labels[0] == 0


@given(st.integers(0, 2 ** 32 - 1))
def test_largest_component_monotone_in_t(seed):
    rng = np.random.default_rng(seed)
    n = 8
    ro = rng.uniform(0, 1, (n, n))
    ro = (ro + ro.T) / 2
    np.fill_diagonal(ro, 1.0)
    poses = line_poses(n)
    sizes = [build_graph(fake_report(ro), poses, ConnectivityCriteria(t, d_max_km=250.0))
             .largest_component_size for t in np.linspace(0, 1, 21)]
    assert all(b <= a for a, b in zip(sizes, sizes[1:]))


@given(st.dictionaries(st.integers(1, 10), st.integers(0, 50), min_size=1))
def test_p_calib_tail_sum_monotone(counts):
    n = sum(counts.values())
    if n == 0:
        return
    hist = ComponentHistogram(Counter(counts), n)
    ps = [p_calib(hist, q) for q in range(1, 11)]
    assert ps[0] == 1.0
    assert all(b <= a for a, b in zip(ps, ps[1:]))
