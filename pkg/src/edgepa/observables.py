"""Graph measurements: degrees, diameter, cliques, isolated chains, vertex paths.

Distance and clique observables are computed on the simple view (loops
dropped, parallel edges deduplicated) since multiplicities change neither
distances nor cliques; chain observables need the growth history and run
on the multigraph itself.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graphs import MultiGraph


@dataclass
class SimpleView:
    """Deduplicated undirected adjacency in CSR form, vertices 0-based."""

    n: int
    edges: np.ndarray    # (m, 2) unique pairs, edges[:, 0] < edges[:, 1]
    indptr: np.ndarray
    indices: np.ndarray  # sorted within each row

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


def simple_view(g: MultiGraph) -> SimpleView:
    """Drop loops, deduplicate parallel edges, keep the vertex set unchanged."""
    n = g.n_vertices
    pairs = g.endpoints.reshape(-1, 2) - 1
    a = pairs.min(axis=1)
    b = pairs.max(axis=1)
    off_loop = a != b
    a, b = a[off_loop], b[off_loop]
    if a.size:
        keys = np.unique(a * n + b)
        a, b = keys // n, keys % n
    edges = np.column_stack([a, b]).astype(np.int64)

    src = np.concatenate([a, b])
    dst = np.concatenate([b, a])
    order = np.lexsort((dst, src))
    indices = dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return SimpleView(n=n, edges=edges, indptr=indptr, indices=indices.astype(np.int64))


# -- tallies -----------------------------------------------------------------


def count_vertices(g: MultiGraph) -> int:
    return g.n_vertices


def max_degree(g: MultiGraph) -> int:
    return int(g.degrees().max())


def degree_histogram(g: MultiGraph) -> dict[int, int]:
    counts = np.bincount(g.degrees())
    return {int(d): int(c) for d, c in enumerate(counts) if c > 0}


# -- breadth-first distances ---------------------------------------------------


def bfs_distances(view: SimpleView, src: int) -> np.ndarray:
    """Unweighted distances from ``src``; unreachable vertices get -1."""
    dist = np.full(view.n, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    d = 0
    indptr, indices = view.indptr, view.indices
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        shift = np.repeat(starts - (np.cumsum(counts) - counts), counts)
        nbrs = indices[shift + np.arange(total)]
        nbrs = nbrs[dist[nbrs] < 0]
        if nbrs.size == 0:
            break
        d += 1
        dist[nbrs] = d
        frontier = np.unique(nbrs)
    return dist


def _eccentricity(view: SimpleView, src: int) -> tuple[int, np.ndarray]:
    dist = bfs_distances(view, src)
    if dist.min() < 0:
        raise ValueError("graph is disconnected")
    return int(dist.max()), dist


def diameter_exact(view: SimpleView, cap: int = 20000) -> int:
    """Exact diameter via breadth-first search from every vertex.

    Quadratic; refuses graphs above ``cap`` vertices (use
    :func:`diameter_bounds` there).  Raises on disconnected input, which
    generated graphs never are.
    """
    if view.n > cap:
        raise ValueError(f"graph has {view.n} vertices, above the exact cap {cap}")
    if view.n == 1:
        return 0
    best = 0
    for src in range(view.n):
        ecc, _ = _eccentricity(view, src)
        best = max(best, ecc)
    return best


def diameter_bounds(
    view: SimpleView,
    sweeps: int = 16,
    refine_budget: int = 256,
    target_gap: int = 1,
) -> tuple[int, int]:
    """Diameter interval from double sweeps, tightened by fringe refinement.

    Trees resolve exactly with one double sweep.  Otherwise each sweep
    starts at a fresh high-degree seed; the far endpoint of a
    breadth-first search gives the lower bound and twice any eccentricity
    gives an upper bound (sweeping again from a midpoint of the found long
    path approximates the radius).  When the gap still exceeds one, fringe
    vertices of the best (smallest-eccentricity) root are searched from
    the outermost level inward, which closes the interval exactly unless
    the budget runs out first.
    """
    n = view.n
    if n == 1:
        return (0, 0)

    deg_order = np.argsort(-view.degrees(), kind="stable")
    lb, ub = 0, 2 * (n - 1)
    best_ecc, best_dist = None, None

    def probe(v: int) -> np.ndarray:
        nonlocal lb, ub, best_ecc, best_dist
        ecc, dist = _eccentricity(view, v)
        lb = max(lb, ecc)
        ub = min(ub, 2 * ecc)
        if best_ecc is None or ecc < best_ecc:
            best_ecc, best_dist = ecc, dist
        return dist

    if view.n_edges == n - 1:
        # connected with n-1 edges = tree: the far end of any search is a
        # diametral endpoint, so its eccentricity is the diameter
        dist_root = probe(int(deg_order[0]))
        dist_far = bfs_distances(view, int(np.argmax(dist_root)))
        d = int(dist_far.max())
        return (d, d)

    seen_far: set[int] = set()
    for k in range(max(1, sweeps)):
        if k >= len(deg_order):
            break
        dist_root = probe(int(deg_order[k]))
        u = int(np.argmax(dist_root))
        if u not in seen_far:
            seen_far.add(u)
            dist_u = probe(u)
            ecc_u = int(dist_u.max())
            w = int(np.argmax(dist_u))
            dist_w = probe(w)
            # a midpoint of the found long path approximates a center
            mids = np.flatnonzero((dist_u + dist_w == ecc_u) & (dist_u == ecc_u // 2))
            if mids.size:
                probe(int(mids[0]))
        if ub - lb <= target_gap:
            return (lb, ub)

    if ub - lb <= target_gap or refine_budget <= 0:
        return (lb, ub)

    # Fringe refinement: sweep the outermost levels of the best root inward.
    # Once every vertex at level > i-1 has been searched, any remaining pair
    # lies within 2(i-1) of the root, so lb >= 2(i-1) certifies lb exactly.
    levels = best_dist
    used = 0
    for i in range(int(levels.max()), 0, -1):
        if lb >= 2 * i:
            return (lb, lb)
        fringe = np.flatnonzero(levels == i)
        fringe = fringe[np.argsort(-view.degrees()[fringe], kind="stable")]
        for v in fringe:
            if used >= refine_budget:
                return (lb, min(ub, max(lb, 2 * i)))
            ecc, _ = _eccentricity(view, int(v))
            lb = max(lb, ecc)
            used += 1
        if lb >= 2 * (i - 1):
            return (lb, lb)
    return (lb, lb)


def diameter_auto(
    view: SimpleView,
    exact_cap: int = 512,
    refine_budget: int = 1 << 20,
) -> int:
    """Exact diameter by the cheapest available route (small: all-pairs;
    large: sweeps plus fringe refinement driven to gap zero, which always
    terminates with the exact value given enough budget)."""
    if view.n <= exact_cap:
        return diameter_exact(view, cap=exact_cap)
    lb, ub = diameter_bounds(view, sweeps=4, refine_budget=refine_budget, target_gap=0)
    if lb != ub:
        return diameter_exact(view, cap=view.n)
    return lb


# -- cliques -------------------------------------------------------------------


def _bitset_adjacency(view: SimpleView, keep: np.ndarray) -> list[int]:
    """Adjacency bitmasks of the induced subgraph on ``keep`` (local indexing)."""
    local = {int(v): i for i, v in enumerate(keep)}
    masks = [0] * len(keep)
    for i, v in enumerate(keep):
        for u in view.neighbors(int(v)):
            j = local.get(int(u))
            if j is not None and j != i:
                masks[i] |= 1 << j
    return masks


class _SearchBudget(Exception):
    pass


def _max_clique_masks(masks: list[int], node_budget: int) -> int:
    """Branch-and-bound maximum clique with pivoting on bitmask adjacency."""
    n = len(masks)
    if n == 0:
        return 0
    best = 1
    nodes = 0

    def expand(size: int, cand: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise _SearchBudget
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        # pivot on the candidate covering most of the candidate set
        pivot, cover = -1, -1
        probe = cand
        while probe:
            v = (probe & -probe).bit_length() - 1
            c = (cand & masks[v]).bit_count()
            if c > cover:
                pivot, cover = v, c
            probe &= probe - 1
        ext = cand & ~masks[pivot]
        while ext:
            v = (ext & -ext).bit_length() - 1
            bit = 1 << v
            expand(size + 1, cand & masks[v])
            cand &= ~bit
            ext &= ~bit
            if size + cand.bit_count() <= best:
                return

    expand(0, (1 << n) - 1)
    return best


def clique_exact(
    view: SimpleView,
    cap: int = 500,
    node_budget: int = 500_000,
) -> tuple[Optional[int], str]:
    """Maximum clique size with an explicit status.

    Returns ``(omega, "exact")`` when the whole graph was searched,
    ``(size, "lower_bound")`` when the graph exceeded ``cap`` vertices and
    the search ran on the ``cap`` oldest vertices only (early vertices are
    where large cliques live), or ``(None, "unavailable")`` when the node
    budget was exhausted.
    """
    restricted = view.n > cap
    keep = np.arange(min(view.n, cap), dtype=np.int64)
    masks = _bitset_adjacency(view, keep)
    try:
        size = _max_clique_masks(masks, node_budget)
    except _SearchBudget:
        return (None, "unavailable")
    return (size, "lower_bound" if restricted else "exact")


def clique_greedy(g: MultiGraph, view: Optional[SimpleView] = None) -> int:
    """Larger of two verified greedy cliques (birth order / degree order).

    Each pass walks the candidate order and keeps a vertex iff it is
    adjacent to every vertex kept so far; the returned set is re-checked
    pairwise before reporting.
    """
    if view is None:
        view = simple_view(g)
    n = view.n
    if n == 1:
        return 1

    def greedy(order: np.ndarray) -> list[int]:
        ok = np.ones(n, dtype=bool)
        members: list[int] = []
        for v in order:
            v = int(v)
            if ok[v]:
                members.append(v)
                mask = np.zeros(n, dtype=bool)
                mask[view.neighbors(v)] = True
                ok &= mask
        return members

    by_birth = np.arange(n)
    by_degree = np.argsort(-g.degrees(), kind="stable")
    best: list[int] = []
    for order in (by_birth, by_degree):
        members = greedy(order)
        if len(members) > len(best):
            best = members
    nbr_sets = {v: set(view.neighbors(v).tolist()) for v in best}
    for i, v in enumerate(best):
        for u in best[i + 1 :]:
            if u not in nbr_sets[v]:
                raise AssertionError("greedy clique failed pairwise adjacency check")
    return len(best)


# -- isolated chains -----------------------------------------------------------


def isolated_chains(g: MultiGraph) -> list[list[int]]:
    """All maximal isolated chains, each as vertex ids oldest first.

    A chain is a run of vertex-born vertices in increasing birth order,
    each first-connected to its predecessor, with interior degrees exactly
    2 and tip degree 1; the walk from each degree-1 tip climbs parents
    until the predicate first fails, so every chain is reported at its
    maximal valid length.  The root never qualifies (it was not born by a
    step coin), while every other vertex is vertex-born by construction.
    """
    deg = g.degrees()
    chains: list[list[int]] = []
    for tip in np.flatnonzero(deg == 1) + 1:
        chain = [int(tip)]
        cur = int(tip)
        while True:
            p = int(g.parent[cur - 1])
            if p <= 1 or deg[p - 1] != 2:
                break
            chain.append(p)
            cur = p
        chain.reverse()
        chains.append(chain)
    return chains


def isolated_paths(g: MultiGraph) -> Counter:
    """Multiset of maximal isolated-chain lengths (vertex counts)."""
    return Counter(len(c) for c in isolated_chains(g))


def count_isolated_in_window(g: MultiGraph, l: int, xi: float) -> int:
    """Chains containing an exact-length-``l`` tail born at or after ``xi * t``.

    Counts, per maximal chain, the single size-``l`` sub-chain ending at
    the degree-1 tip, provided all ``l`` of its vertices were born in the
    window; only tails qualify because interior vertices have degree 2.
    """
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    cutoff = xi * g.t
    hits = 0
    for chain in isolated_chains(g):
        if len(chain) >= l and g.birth_time[chain[-l] - 1] >= cutoff:
            hits += 1
    return hits


# -- vertex paths ---------------------------------------------------------------


def vertex_path_depths(g: MultiGraph, t0: int) -> np.ndarray:
    """Length of the first-connection chain ending at each vertex.

    A vertex qualifies when it was vertex-born at time >= ``t0``; its
    depth is 1 plus the parent's depth when the parent qualifies too.
    Indexed by vertex id (entry 0 unused).
    """
    n = g.n_vertices
    qual = np.zeros(n + 1, dtype=bool)
    qual[2:] = g.birth_time[1:] >= t0
    par = np.concatenate([[0], g.parent]).astype(np.int64)
    par[par < 0] = 0
    depth = qual.astype(np.int64)
    ptr = np.where(qual & qual[par], par, 0)
    while ptr.any():
        depth = depth + depth[ptr]
        ptr = ptr[ptr]
    return depth


def max_vertex_path(g: MultiGraph, t0: int) -> int:
    """Maximal first-connection chain length among vertices born at >= ``t0``."""
    if g.n_vertices == 1:
        return 0
    return int(vertex_path_depths(g, t0).max())


def count_vertex_paths(g: MultiGraph, t0: int, k: int) -> int:
    """Number of chains of length exactly ``k`` (one per vertex of depth >= k)."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if g.n_vertices == 1:
        return 0
    return int(np.count_nonzero(vertex_path_depths(g, t0) >= k))


# -- report ---------------------------------------------------------------------


@dataclass
class ObservableReport:
    """Measurements of one graph, flat enough to serialize as a single row."""

    n_vertices: int
    max_degree: int
    degree_histogram: dict[int, int]
    simple_edge_count: int
    diameter_lower: Optional[int] = None
    diameter_upper: Optional[int] = None
    diameter_method: str = "off"
    clique_greedy: Optional[int] = None
    clique_exact: Optional[int] = None
    clique_exact_status: str = "off"
    isolated_path_lengths: Optional[Counter] = None
    max_vertex_path: Optional[int] = None
    vertex_path_t0: Optional[int] = None

    def check(self) -> None:
        if sum(self.degree_histogram.values()) != self.n_vertices:
            raise ValueError("degree histogram must count every vertex")
        if self.diameter_lower is not None and self.diameter_lower > self.diameter_upper:
            raise ValueError("diameter lower bound exceeds upper bound")
        if (
            self.clique_greedy is not None
            and self.clique_exact is not None
            and self.clique_exact_status == "exact"
            and self.clique_greedy > self.clique_exact
        ):
            raise ValueError("greedy clique cannot exceed the exact clique number")


def measure_graph(
    g: MultiGraph,
    *,
    diameter: bool = True,
    clique: bool = True,
    paths: bool = True,
    exact_diameter_cap: int = 20000,
    sweeps: int = 16,
    refine_budget: int = 256,
    want_clique_exact: bool = False,
    clique_exact_cap: int = 500,
    vertex_path_t0: Optional[int] = None,
) -> ObservableReport:
    """Measure the toggled observables of one graph into a report."""
    view = simple_view(g)
    report = ObservableReport(
        n_vertices=g.n_vertices,
        max_degree=max_degree(g),
        degree_histogram=degree_histogram(g),
        simple_edge_count=view.n_edges,
    )
    if diameter:
        if view.n <= exact_diameter_cap:
            d = diameter_exact(view, cap=exact_diameter_cap)
            report.diameter_lower = report.diameter_upper = d
            report.diameter_method = "exact"
        else:
            lo, hi = diameter_bounds(view, sweeps=sweeps, refine_budget=refine_budget)
            report.diameter_lower, report.diameter_upper = lo, hi
            report.diameter_method = "bounds"
    if clique:
        report.clique_greedy = clique_greedy(g, view)
        if want_clique_exact:
            report.clique_exact, report.clique_exact_status = clique_exact(
                view, cap=clique_exact_cap
            )
    if paths:
        report.isolated_path_lengths = isolated_paths(g)
        t0 = vertex_path_t0 if vertex_path_t0 is not None else _default_t0(g.t)
        report.max_vertex_path = max_vertex_path(g, t0)
        report.vertex_path_t0 = t0
    report.check()
    return report


def _default_t0(t: int) -> int:
    """Fractional-power time indices round up and never below 2."""
    return max(2, math.ceil(t ** (1.0 / 13.0)))
