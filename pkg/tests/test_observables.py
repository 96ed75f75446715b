from collections import Counter

import numpy as np
import pytest

from edgepa import edgestep as es
from edgepa import graphs as gr
from edgepa import observables as ob
from edgepa.verify import _random_view, exhaustive_clique_upto, floyd_warshall_diameter

from conftest import forced_path, forced_star


def test_simple_view_dedup_and_loops():
    g = gr.new_initial()
    v = ob.simple_view(g)
    assert v.n == 1 and v.n_edges == 0
    tripled = gr.MultiGraph(
        endpoints=np.array([1, 1, 1, 2, 1, 2, 2, 1]),
        step_type=np.array([True, True, False, False]),
        birth_time=np.array([1, 2]),
        parent=np.array([0, 1]),
    )
    v = ob.simple_view(tripled)
    assert v.n_edges == 1 and list(v.edges[0]) == [0, 1]
    assert list(v.neighbors(0)) == [1]


def test_tallies():
    g = gr.new_initial()
    assert ob.count_vertices(g) == 1
    assert ob.max_degree(g) == 2
    assert ob.degree_histogram(g) == {2: 1}
    tree = gr.evolve(es.ba(), 100, seed=1)
    hist = ob.degree_histogram(tree)
    assert sum(hist.values()) == 100


def test_max_degree_grows_for_decaying_schedules():
    # with a vanishing vertex rate the hub keeps nearly everything:
    # max degree reaches t^0.8 in at least 19 of 20 runs at t = 1e5
    t, hits = 10**5, 0
    for r in range(20):
        g = gr.evolve(es.rv_power(0.5), t, seed=3000 + r)
        hits += ob.max_degree(g) >= t**0.8
    assert hits >= 19


def test_diameter_examples():
    assert ob.diameter_exact(ob.simple_view(forced_path(5))) == 4
    assert ob.diameter_bounds(ob.simple_view(forced_path(5))) == (4, 4)
    assert ob.diameter_bounds(ob.simple_view(forced_star(9))) == (2, 2)
    assert ob.diameter_exact(ob.simple_view(gr.new_initial())) == 0


def test_diameter_cross_checks(rng):
    for _ in range(25):
        n = int(rng.integers(2, 120))
        view = _random_view(rng, n, int(rng.integers(0, 2 * n)))
        exact = ob.diameter_exact(view)
        assert exact == floyd_warshall_diameter(view)
        lo, hi = ob.diameter_bounds(view)
        assert lo <= exact <= hi
        assert ob.diameter_auto(view) == exact


def test_diameter_exact_guards():
    view = ob.simple_view(forced_path(30))
    with pytest.raises(ValueError, match="cap"):
        ob.diameter_exact(view, cap=10)
    disconnected = ob.SimpleView(
        n=4,
        edges=np.array([[0, 1], [2, 3]]),
        indptr=np.array([0, 1, 2, 3, 4]),
        indices=np.array([1, 0, 3, 2]),
    )
    with pytest.raises(ValueError, match="disconnected"):
        ob.diameter_exact(disconnected)


def _k5_multigraph():
    e = [1, 1]
    z = [True]
    for u, v in [(1, 2), (1, 3), (1, 4), (1, 5)]:
        e += [u, v]
        z.append(True)
    for u, v in [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]:
        e += [u, v]
        z.append(False)
    return gr.MultiGraph(
        endpoints=np.array(e),
        step_type=np.array(z),
        birth_time=np.arange(1, 6),
        parent=np.array([0, 1, 1, 1, 1]),
    )


def test_clique_examples():
    k5 = _k5_multigraph()
    assert ob.clique_greedy(k5) == 5
    assert ob.clique_exact(ob.simple_view(k5)) == (5, "exact")
    assert ob.clique_greedy(forced_path(6)) == 2
    assert ob.clique_exact(ob.simple_view(forced_path(6))) == (2, "exact")


def test_clique_exact_statuses():
    view = ob.simple_view(_k5_multigraph())
    assert ob.clique_exact(view, cap=3)[1] == "lower_bound"
    assert ob.clique_exact(view, node_budget=1) == (None, "unavailable")


def test_clique_cross_check(rng):
    for _ in range(10):
        n = int(rng.integers(5, 45))
        view = _random_view(rng, n, int(rng.integers(n, 3 * n)))
        got, status = ob.clique_exact(view)
        want = exhaustive_clique_upto(view, 6)
        assert status == "exact"
        if want < 6:
            assert got == want
        else:
            assert got >= 6


def test_clique_greedy_never_beats_exact():
    g = gr.evolve(es.constant(0.3), 600, seed=2)
    view = ob.simple_view(g)
    assert view.n <= 500
    exact, status = ob.clique_exact(view)
    assert status == "exact"
    assert ob.clique_greedy(g, view) <= exact


def _recheck_chain(g, chain):
    """Independently verify every defining property of an isolated chain."""
    deg = g.degrees()
    births = [int(g.birth_time[v - 1]) for v in chain]
    assert births == sorted(births) and len(set(births)) == len(births)
    for v in chain:
        assert v != 1 and g.step_type[g.birth_time[v - 1] - 1]
    for prev, nxt in zip(chain, chain[1:]):
        assert g.parent[nxt - 1] == prev
    for v in chain[:-1]:
        assert deg[v - 1] == 2
    assert deg[chain[-1] - 1] == 1


def test_isolated_chain_fixtures():
    assert ob.isolated_paths(forced_path(3)) == Counter({2: 1})
    assert ob.isolated_paths(gr.evolve(es.constant(0.0), 30, seed=1)) == Counter()
    two = gr.MultiGraph(
        endpoints=np.array([1, 1, 1, 2, 2, 3, 3, 4, 1, 5, 5, 6, 6, 7, 7, 8]),
        step_type=np.ones(8, dtype=bool),
        birth_time=np.arange(1, 9),
        parent=np.array([0, 1, 2, 3, 1, 5, 6, 7]),
    )
    assert sorted(len(c) for c in ob.isolated_chains(two)) == [3, 4]
    for chain in ob.isolated_chains(two):
        _recheck_chain(two, chain)


def test_isolated_chains_pass_recheck_on_generated_graphs():
    for seed in range(5):
        g = gr.evolve(es.constant(0.5), 400, seed=seed)
        for chain in ob.isolated_chains(g):
            _recheck_chain(g, chain)


def _adjacency_chain_scan(g):
    """Independent pendant-chain scan using only the simple adjacency."""
    view = ob.simple_view(g)
    deg = g.degrees()
    lengths = []
    for leaf in np.flatnonzero(deg == 1):
        length, prev, cur = 1, -1, int(leaf)
        while True:
            onward = [int(x) for x in view.neighbors(cur) if int(x) != prev]
            if len(onward) != 1 or deg[onward[0]] != 2:
                break
            prev, cur = cur, onward[0]
            length += 1
        lengths.append(length)
    return Counter(lengths)


def test_tree_chain_scan_agrees():
    # on pure trees every edge is a first connection, so the parent walk
    # and a direction-blind adjacency scan must find the same chains
    for seed in range(6):
        g = gr.evolve(es.ba(), 300, seed=seed)
        assert ob.isolated_paths(g) == _adjacency_chain_scan(g)


def test_count_isolated_in_window():
    p5 = forced_path(5)
    assert ob.count_isolated_in_window(p5, 2, 0.5) == 1  # tail (4, 5) born at >= 2.5
    assert ob.count_isolated_in_window(p5, 4, 0.2) == 1
    assert ob.count_isolated_in_window(p5, 4, 0.5) == 0  # chain[-4] born at 2 < 2.5
    assert ob.count_isolated_in_window(p5, 5, 0.2) == 0  # no size-5 chain


def test_vertex_paths():
    p10 = forced_path(10)
    assert ob.max_vertex_path(p10, 2) == 9
    assert ob.max_vertex_path(p10, 11) == 0
    assert ob.max_vertex_path(gr.evolve(es.constant(0.0), 20, seed=1), 2) == 0
    assert ob.count_vertex_paths(p10, 2, 4) == 6  # chains end at v5..v10
    assert ob.count_vertex_paths(p10, 2, 9) == 1


def test_max_vertex_path_monotone_in_t0():
    g = gr.evolve(es.constant(0.6), 500, seed=9)
    values = [ob.max_vertex_path(g, t0) for t0 in (2, 5, 20, 100, 400)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_measure_graph_report():
    g = gr.evolve(es.constant(0.5), 500, seed=12)
    rep = ob.measure_graph(g, want_clique_exact=True)
    rep.check()
    assert sum(rep.degree_histogram.values()) == rep.n_vertices
    assert rep.diameter_method == "exact"
    assert rep.diameter_lower == rep.diameter_upper
    assert rep.clique_greedy <= rep.clique_exact
    k = rep.clique_greedy
    assert k * (k - 1) // 2 <= rep.simple_edge_count

    bounded = ob.measure_graph(g, exact_diameter_cap=10)
    assert bounded.diameter_method == "bounds"
    assert bounded.diameter_lower <= rep.diameter_lower <= bounded.diameter_upper
