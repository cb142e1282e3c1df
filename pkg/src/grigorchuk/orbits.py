"""Schreier graphs of level and boundary actions, inverted orbit growth."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, List

from . import tree
from .elements import E, store_for
from .groups import LETTERS, GroupContext, _generator
from .growth import ResourceCap
from .tree import BoundaryPoint, ZERO_RAY
from .words import level_permutation


@dataclass
class SchreierGraph:
    """Labeled graph of a group action.

    ``edges[s][v]`` is the image of ``v`` under generator ``s``; only edges
    with both ends in ``vertices`` are kept, so partial balls stay closed.
    """

    vertices: List[Hashable]
    edges: Dict[str, Dict[Hashable, Hashable]]
    base: Hashable

    def neighbors(self, v):
        return [self.edges[s][v] for s in self.edges if v in self.edges[s]]

    def edge_list(self):
        for v in self.vertices:
            for s, m in self.edges.items():
                if v in m:
                    yield v, s, m[v]

    def is_connected(self) -> bool:
        return graph_growth(self, self.base)[-1] == len(self.vertices)


def _name(v) -> str:
    if isinstance(v, tuple):
        return "".join(map(str, v)) or "()"
    return str(v)


def to_edge_list(graph: SchreierGraph) -> str:
    """One ``v<TAB>label<TAB>u`` line per directed labeled edge."""
    return "".join(f"{_name(v)}\t{s}\t{_name(u)}\n" for v, s, u in graph.edge_list())


def to_json(graph: SchreierGraph) -> dict:
    return {
        "schema": "schreier/1",
        "base": _name(graph.base),
        "vertices": [_name(v) for v in graph.vertices],
        "edges": [[_name(v), s, _name(u)] for v, s, u in graph.edge_list()],
    }


def level_graph(ctx: GroupContext, k: int, max_vertices: int = 1 << 20) -> SchreierGraph:
    """Schreier graph of the action on level ``k``; vertices are 0/1 tuples."""
    if k < 1:
        raise ValueError("level must be >= 1")
    if 2 ** k > max_vertices:
        raise ResourceCap(f"2^{k} vertices exceed the cap {max_vertices}")
    verts = tree.level_vertices(k)
    edges = {}
    for s in LETTERS:
        img = level_permutation(ctx, s, k)
        edges[s] = {v: verts[int(j)] for v, j in zip(verts, img)}
    return SchreierGraph(verts, edges, verts[0])


def graph_growth(graph: SchreierGraph, base=None) -> List[int]:
    """Number of vertices within distance ``n`` of ``base``, for n = 0.. eccentricity."""
    base = graph.base if base is None else base
    dist = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for u in graph.neighbors(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    counts = [0] * (max(dist.values()) + 1)
    for d in dist.values():
        counts[d] += 1
    return list(itertools.accumulate(counts))


class _BoundaryAction:
    """Memoized generator and element actions on boundary points."""

    def __init__(self, ctx: GroupContext, cap: int = 64):
        self.ctx, self.cap = ctx, cap
        self.store = store_for(ctx.oracle)
        self.gens = ctx.generators
        self._gen_memo = {}
        self._elt_memo = {}

    def generator(self, s: str, p: BoundaryPoint) -> BoundaryPoint:
        r = self._gen_memo.get((s, p))
        if r is None:
            r = tree.apply_boundary(self.gens[s], p, self.cap)
            self._gen_memo[s, p] = r
        return r

    def element(self, g: int, p: BoundaryPoint) -> BoundaryPoint:
        """Image of ``p`` under a canonical element id of the context's stage."""
        memo = (g, p)
        r = self._elt_memo.get(memo)
        if r is not None:
            return r
        store, oracle = self.store, self.ctx.oracle
        key, q, out = self.ctx.key, p, []
        while not store.is_atom(g):
            perm, g0, g1 = store.decompose(key, g)
            x = q.letter(0)
            out.append(x ^ perm)
            g = g1 if x else g0
            key = oracle.next_stage(key)
            q = q.shift()
        if g != E:
            q = tree.apply_boundary(_generator(oracle, store.letter_of(g), key), q, self.cap)
        r = BoundaryPoint.make(tuple(out) + q.prefix, q.period)
        self._elt_memo[memo] = r
        return r


def _check_base(base: BoundaryPoint):
    if base.period == (1,):
        raise ValueError(f"{base} is cofinal with 1^inf; its orbit is excluded")


def orbit_graph_ball(ctx: GroupContext, base: BoundaryPoint = ZERO_RAY, radius: int = 10,
                     max_vertices: int = 1_000_000, expansion_cap: int = 64) -> SchreierGraph:
    """Ball of radius ``radius`` around ``base`` in the orbital Schreier graph."""
    _check_base(base)
    act = _BoundaryAction(ctx, expansion_cap)
    dist = {base: 0}
    order = [base]
    images = {s: {} for s in LETTERS}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for s in LETTERS:
            u = act.generator(s, v)
            images[s][v] = u
            if u not in dist and dist[v] < radius:
                dist[u] = dist[v] + 1
                order.append(u)
                if len(order) > max_vertices:
                    raise ResourceCap(f"orbit ball exceeds {max_vertices} vertices")
                queue.append(u)
    edges = {s: {v: u for v, u in m.items() if u in dist} for s, m in images.items()}
    return SchreierGraph(order, edges, base)


@dataclass(frozen=True)
class InvertedOrbitRecord:
    n: int
    delta: int
    witness: str


def inverted_orbit(ctx: GroupContext, word: str, base: BoundaryPoint = ZERO_RAY,
                   expansion_cap: int = 64) -> set:
    """``{x, x w_l, x w_{l-1} w_l, ..., x w_1 ... w_l}`` for the right action.

    Straight from the definition: every suffix is applied to ``x`` letter by
    letter, leftmost letter first (generators are involutions, so the right
    action of a letter is its tree action).
    """
    act = _BoundaryAction(ctx, expansion_cap)
    return _inverted_orbit(act, word, base)


def _inverted_orbit(act, word, base):
    points = {base}
    for k in range(len(word)):
        p = base
        for s in word[k:]:
            p = act.generator(s, p)
        points.add(p)
    return points


def brute_force_inverted_orbit_growth(ctx: GroupContext, n: int,
                                      base: BoundaryPoint = ZERO_RAY) -> InvertedOrbitRecord:
    """Delta(n) by evaluating every word of length ``n`` with no pruning."""
    _check_base(base)
    act = _BoundaryAction(ctx)
    best, witness = 0, ""
    for letters in itertools.product(LETTERS, repeat=n):
        w = "".join(letters)
        d = len(_inverted_orbit(act, w, base))
        if d > best:
            best, witness = d, w
    return InvertedOrbitRecord(n, best, witness)


def inverted_orbit_growth(ctx: GroupContext, base: BoundaryPoint = ZERO_RAY, n: int = 8,
                          max_n: int = 12) -> InvertedOrbitRecord:
    """Delta(n) with the lexicographically least maximizing word.

    Uses ``x w_k ... w_l = (x w_1 ... w_l) (w_1 ... w_{k-1})^-1``: the
    inverted orbit of ``w`` has the size of ``{P_m(x) : m = 0..l}``, where
    ``P_m = w_1 ... w_m`` is the prefix product acting on the left (``w_m``
    applied first).  A depth-first search over prefixes carries ``P_m`` as a
    canonical element, so each step costs one group multiplication and one
    memoized boundary image, and branches that cannot beat the current best
    (points so far + remaining letters) are cut.
    """
    _check_base(base)
    if n > max_n:
        raise ResourceCap(f"n = {n} exceeds the search cap {max_n}")
    act = _BoundaryAction(ctx)
    store, key = act.store, ctx.key
    gens = [(s, store.atom(key, s)) for s in LETTERS]
    best = [1, ""]

    def dfs(prefix, element, visited, remaining):
        if len(visited) > best[0]:
            best[0], best[1] = len(visited), prefix + "a" * remaining
        if remaining == 0 or len(visited) + remaining <= best[0]:
            return
        for s, g in gens:
            h = store.mul(key, element, g)
            p = act.element(h, base)
            added = p not in visited
            if added:
                visited.add(p)
            dfs(prefix + s, h, visited, remaining - 1)
            if added:
                visited.discard(p)

    dfs("", E, {base}, n)
    if len(best[1]) < n:
        best[1] += "a" * (n - len(best[1]))
    return InvertedOrbitRecord(n, best[0], best[1])
