"""The doubly-labeled random tree and the collapse map.

The tree process is the pure preferential-attachment tree (the ``f == 1``
case) where every vertex ``j >= 2`` additionally carries two labels drawn
at its birth: a ghost target ``ell(j)`` chosen by the same
degree-proportional rule as the real attachment ``w(j)`` (only real edges
count toward degree), and an independent uniform mark ``U_j``.

One grown tree generates the graph of *every* edge-step function:
``collapse(tree, f)`` keeps vertex ``j`` when ``U_j <= f(j)`` and merges
it into the representative of its ghost target otherwise, remapping each
tree edge to the representatives of its endpoints.  The collapsed graph
is distributed exactly as the directly evolved graph at the same horizon
(the oracle module verifies this law equality exhaustively on small
instances), and running several functions against one tree yields the
grand coupling used by the monotonicity and total-variation experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .edgestep import EdgeStepFunction
from .graphs import MultiGraph, canonical_key


@dataclass
class DoublyLabeledTree:
    """Attachment targets, ghost targets, and uniform marks, indexed by birth ``j``.

    ``w[j]`` and ``ell[j]`` are defined for ``j >= 2`` and always point to
    strictly older vertices; slot 0 and the root entries are zero.
    Immutable after growth; collapsing is read-only, so one tree may serve
    many edge-step functions concurrently.
    """

    w: np.ndarray
    ell: np.ndarray
    u: np.ndarray
    seed: int

    @property
    def t(self) -> int:
        return len(self.w) - 1

    def validate(self) -> None:
        t = self.t
        js = np.arange(2, t + 1)
        if t >= 2 and (np.any(self.w[2:] < 1) or np.any(self.w[2:] >= js)):
            raise ValueError("attachment targets must be strictly older vertices")
        if t >= 2 and (np.any(self.ell[2:] < 1) or np.any(self.ell[2:] >= js)):
            raise ValueError("ghost targets must be strictly older vertices")
        if np.any((self.u < 0) | (self.u > 1)):
            raise ValueError("uniform marks must lie in [0, 1]")


def grow_tree(t: int, seed: int) -> DoublyLabeledTree:
    """Grow the tree to size ``t``; deterministic given ``(t, seed)``.

    Per step the draws are: one slot for the real edge, one independent
    slot for the ghost label (both uniform over the 2(j-1) endpoint slots
    of the pre-step tree), plus one uniform mark per vertex from its own
    stream, so mark ``j`` is the ``j``-th entry of that stream.
    """
    if t < 1:
        raise ValueError(f"tree size must be >= 1, got {t}")
    u = np.concatenate([[0.0], _rng.stream(seed, _rng.TREE_ULABELS).random(t)])
    if t == 1:
        zero = np.zeros(2, dtype=np.int64)
        return DoublyLabeledTree(w=zero, ell=zero.copy(), u=u, seed=seed)
    raw = _rng.stream(seed, _rng.TREE_SLOTS).random((t - 1, 2))
    js = np.arange(2, t + 1, dtype=np.int64)
    width = 2 * (js - 1)
    w_slot = np.minimum((raw[:, 0] * width).astype(np.int64), width - 1)
    l_slot = np.minimum((raw[:, 1] * width).astype(np.int64), width - 1)

    # Slot-link resolution as in the direct generator; every step is a
    # vertex-step here, so each odd slot terminates with its birth index.
    n_slots = 2 * t
    ptr = np.arange(n_slots, dtype=np.int64)
    val = np.zeros(n_slots, dtype=np.int64)
    val[0] = val[1] = 1
    even = np.arange(2, n_slots, 2, dtype=np.int64)
    ptr[even] = w_slot
    val[even + 1] = js
    while True:
        nxt = ptr[ptr]
        if np.array_equal(nxt, ptr):
            break
        ptr = nxt
    slot_value = val[ptr]

    w = np.concatenate([[0, 0], slot_value[even]])
    ell = np.concatenate([[0, 0], slot_value[l_slot]])
    return DoublyLabeledTree(w=w, ell=ell, u=u, seed=seed)


def collapse(tree: DoublyLabeledTree, f: EdgeStepFunction) -> MultiGraph:
    """Apply ``f`` to the tree and return the resulting multigraph.

    Vertex ``j`` survives iff ``U_j <= f(j)`` (the root always survives);
    a collapsed vertex is merged into the surviving representative reached
    by following ghost targets through collapsed vertices.  Ghost chains
    strictly decrease the birth index, so the representative map is
    computed by pointer doubling on the ghost array -- the same answer a
    path-compressed union-find keyed by birth index would give.  Each tree
    edge ``{w(j), j}`` is remapped to the representatives of its
    endpoints; birth times and step types carry over so every observable
    applies to the result.
    """
    t = tree.t
    keep = np.ones(t + 1, dtype=bool)
    if t >= 2:
        js = np.arange(2, t + 1, dtype=np.int64)
        keep[2:] = tree.u[2:] <= f.eval_array(js)

    rep = np.arange(t + 1, dtype=np.int64)
    rep[~keep] = tree.ell[~keep]
    rep[0] = 0
    while True:
        nxt = rep[rep]
        if np.array_equal(nxt, rep):
            break
        rep = nxt

    survivors = np.flatnonzero(keep[1:]).astype(np.int64) + 1
    rank = np.zeros(t + 1, dtype=np.int64)
    rank[survivors] = np.arange(1, len(survivors) + 1)

    endpoints = np.empty(2 * t, dtype=np.int64)
    endpoints[0] = endpoints[1] = 1
    if t >= 2:
        endpoints[2::2] = rank[rep[tree.w[2:]]]
        endpoints[3::2] = rank[rep[js]]

    return MultiGraph(
        endpoints=endpoints,
        step_type=keep[1:].copy(),
        birth_time=survivors,
        parent=np.concatenate([[0], rank[rep[tree.w[survivors[1:]]]]]),
        family=f.name,
        seed=tree.seed,
    )


def coupled_run(tree: DoublyLabeledTree, fs: list[EdgeStepFunction]) -> list[MultiGraph]:
    """Collapse one tree under several functions; outputs share all randomness."""
    return [collapse(tree, f) for f in fs]


def tv_upper_bound(f: EdgeStepFunction, h: EdgeStepFunction, horizon: int) -> float:
    """Truncated L1 distance ``sum_{s=2..horizon} |f(s) - h(s)|``.

    This bounds the total variation distance between the two graph laws;
    :func:`empirical_disagreement` measures the coupled counterpart.
    """
    if horizon < 2:
        raise ValueError(f"horizon must be >= 2, got {horizon}")
    s = np.arange(2, horizon + 1, dtype=np.int64)
    return float(np.sum(np.abs(f.eval_array(s) - h.eval_array(s))))


def empirical_disagreement(
    f: EdgeStepFunction,
    h: EdgeStepFunction,
    t: int,
    reps: int,
    seed: int,
) -> float:
    """Fraction of coupled replicates whose two collapsed graphs differ.

    Graphs are compared by canonical form (surviving birth times plus the
    remapped edge multiset).  Comparing at the single horizon ``t`` can
    only miss differences that appear later in the trajectories.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    differ = 0
    for r in range(reps):
        tree = grow_tree(t, _rng.child_seed(seed, r))
        if canonical_key(collapse(tree, f)) != canonical_key(collapse(tree, h)):
            differ += 1
    return differ / reps


# -- text dumps --------------------------------------------------------------


def dump_tree(tree: DoublyLabeledTree, fh) -> None:
    """Write one line ``j w ell u`` per vertex; marks at full precision."""
    for j in range(1, tree.t + 1):
        fh.write(f"{j} {tree.w[j]} {tree.ell[j]} {float(tree.u[j])!r}\n")


def load_tree(fh, seed: int = 0) -> DoublyLabeledTree:
    """Read a tree dump back; the round trip is exact."""
    w, ell, u = [0], [0], [0.0]
    for expected, line in enumerate(fh, start=1):
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"tree dump line {expected}: expected 'j w ell u'")
        if int(parts[0]) != expected:
            raise ValueError(f"tree dump line {expected}: out-of-order vertex {parts[0]}")
        w.append(int(parts[1]))
        ell.append(int(parts[2]))
        u.append(float(parts[3]))
    if len(w) < 2:
        raise ValueError("empty tree dump")
    tree = DoublyLabeledTree(
        w=np.array(w, dtype=np.int64),
        ell=np.array(ell, dtype=np.int64),
        u=np.array(u, dtype=float),
        seed=seed,
    )
    tree.validate()
    return tree
