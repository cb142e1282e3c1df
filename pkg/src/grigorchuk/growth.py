"""Exact growth of G_omega: ball enumeration and related experiments."""
from __future__ import annotations

import bisect as _bisect
import math
import os
import time
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.optimize import bisect

from .elements import E, ElementStore, store_for
from .groups import LETTERS, GroupContext, OracleSequence, build_group

DEFAULT_MAX_ELEMENTS = int(os.environ.get("GRIGORCHUK_MAX_ELEMENTS", 5_000_000))


class ResourceCap(RuntimeError):
    pass


class NeedsLargerTable(RuntimeError):
    pass


@dataclass
class GrowthTable:
    """Ball of the Cayley graph around the identity, in BFS order.

    ``keys[i]`` is the canonical element id (see :mod:`grigorchuk.elements`),
    ``parent[i]``/``letter[i]`` give a geodesic spanning tree so that
    ``word(i)`` is a geodesic word for element ``i``.
    """

    ctx: GroupContext
    letters: str
    ball: List[int] = field(default_factory=list)
    keys: List[int] = field(default_factory=list)
    parent: array = field(default_factory=lambda: array("q"))
    letter: bytearray = field(default_factory=bytearray)
    index: Dict[int, int] = field(default_factory=dict)
    complete: bool = True
    stop_reason: str = ""

    @property
    def radius(self) -> int:
        return len(self.ball) - 1

    @property
    def sphere(self) -> List[int]:
        return [b - (self.ball[n - 1] if n else 0) for n, b in enumerate(self.ball)]

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return key in self.index

    def length(self, i: int) -> int:
        # BFS layers are contiguous
        return _bisect.bisect_right(self.ball, i)

    def length_of(self, key: int) -> int:
        return self.length(self.index[key])

    def word(self, i: int) -> str:
        out = []
        while i:
            out.append(self.letters[self.letter[i]])
            i = self.parent[i]
        return "".join(reversed(out))

    def word_of(self, key: int) -> str:
        return self.word(self.index[key])

    def records(self):
        for i, key in enumerate(self.keys):
            yield key, self.length(i), self.word(i)

    def rows(self):
        return [(n, b, s) for n, (b, s) in enumerate(zip(self.ball, self.sphere))]


def _expand(store, key, gens, chunk):
    out = []
    for g in chunk:
        out.append([store.mul(key, g, h) for h in gens])
    return out


def enumerate_ball(ctx: GroupContext, radius: int, *, letters: str = LETTERS,
                   workers: int = 1, max_elements: Optional[int] = None,
                   time_budget: Optional[float] = None,
                   strict: bool = False, store=None) -> GrowthTable:
    """Exact BFS ball of radius ``radius`` with canonical-form dedup.

    Layer-synchronous: each frontier is expanded (optionally by ``workers``
    threads over fixed chunks), then merged in frontier order with generators
    in ``letters`` order, so the table does not depend on scheduling.  When
    ``max_elements`` or ``time_budget`` (seconds, checked between layers) is
    exceeded the table is returned with ``complete=False``, or
    :class:`ResourceCap` is raised if ``strict``.  ``store`` overrides the
    shared interning table (ids are then only meaningful within it).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if max_elements is None:
        max_elements = DEFAULT_MAX_ELEMENTS
    store = store or store_for(ctx.oracle)
    key = ctx.key
    gens = [store.atom(key, x) for x in letters]
    table = GrowthTable(ctx, letters)
    table.keys.append(E)
    table.parent.append(0)
    table.letter.append(0)
    table.index[E] = 0
    table.ball.append(1)
    start = time.monotonic()
    lo, hi = 0, 1
    chunk_size = 4096
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for n in range(1, radius + 1):
            frontier = table.keys[lo:hi]
            chunks = [frontier[i:i + chunk_size] for i in range(0, len(frontier), chunk_size)]
            if pool is not None:
                results = list(pool.map(lambda c: _expand(store, key, gens, c), chunks))
            else:
                results = [_expand(store, key, gens, c) for c in chunks]
            i = lo
            for res in results:
                for prods in res:
                    for j, p in enumerate(prods):
                        if p not in table.index:
                            table.index[p] = len(table.keys)
                            table.keys.append(p)
                            table.parent.append(i)
                            table.letter.append(j)
                    i += 1
            lo, hi = hi, len(table.keys)
            if hi > max_elements:
                # drop the incomplete layer
                _truncate(table, lo)
                table.complete = False
                table.stop_reason = f"element cap {max_elements} exceeded at radius {n}"
                break
            table.ball.append(hi)
            if n < radius and time_budget is not None and time.monotonic() - start > time_budget:
                table.complete = False
                table.stop_reason = f"time budget {time_budget}s exceeded after radius {n}"
                break
    finally:
        if pool is not None:
            pool.shutdown()
    if strict and not table.complete:
        raise ResourceCap(table.stop_reason)
    return table


def _truncate(table: GrowthTable, size: int):
    for k in table.keys[size:]:
        del table.index[k]
    del table.keys[size:]
    del table.parent[size:]
    del table.letter[size:]


def free_product_bound(n: int) -> int:
    """Ball size of the free product of four involutions."""
    return 1 + sum(4 * 3 ** (k - 1) for k in range(1, n + 1))


# -- contraction ------------------------------------------------------------

@dataclass
class ContractionReport:
    kind: str
    level: int
    ratio: float
    constant: float
    checked: int = 0
    violations: int = 0
    witness: Optional[str] = None
    worst_excess: float = -math.inf

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _sections(store, key, g, level):
    """Level-``level`` sections of ``g`` in vertex order, with their stage key."""
    layer = [g]
    for _ in range(level):
        nxt = []
        for h in layer:
            _, h0, h1 = store.decompose(key, h)
            nxt += [h0, h1]
        layer = nxt
        key = store.oracle.next_stage(key)
    return key, layer


class _Companion:
    """Geodesic lengths in a deeper stage, enlarging the ball on demand."""

    def __init__(self, ctx, radius, cap, max_elements):
        self.ctx, self.cap, self.max_elements = ctx, cap, max_elements
        self.table = enumerate_ball(ctx, radius, max_elements=max_elements)

    def length(self, g):
        while g not in self.table.index:
            r = self.table.radius
            if not self.table.complete or r >= self.cap:
                raise NeedsLargerTable(f"section not within radius {r} at stage {self.ctx.stage}")
            self.table = enumerate_ball(self.ctx, min(2 * r + 1, self.cap),
                                        max_elements=self.max_elements)
        return self.table.length_of(g)


def check_contracting(ctx: GroupContext, table: GrowthTable, ratio: float = 0.5,
                      constant: float = 1.0, *, max_elements: Optional[int] = None
                      ) -> ContractionReport:
    """Check ``|g_x| <= ratio |g| + constant`` for every element and both sections."""
    store = store_for(ctx.oracle)
    companion = _Companion(ctx.child(), (table.radius + 1) // 2, table.radius + 1, max_elements)
    rep = ContractionReport("contracting", 1, ratio, constant)
    for i, g in enumerate(table.keys):
        n = table.length(i)
        _, secs = _sections(store, ctx.key, g, 1)
        for s in secs:
            excess = companion.length(s) - (ratio * n + constant)
            rep.checked += 1
            if excess > rep.worst_excess:
                rep.worst_excess = excess
            if excess > 0:
                rep.violations += 1
                if rep.witness is None:
                    rep.witness = table.word(i)
    return rep


def check_anti_contracting(ctx: GroupContext, table: GrowthTable, level: int = 1,
                           ratio: float = 2.0, constant: float = 1.0, *,
                           max_elements: Optional[int] = None) -> ContractionReport:
    """Check ``|g| <= ratio * sum_v |g_v| + constant`` over level ``level``."""
    if level < 1:
        raise ValueError("level must be >= 1")
    store = store_for(ctx.oracle)
    companion = _Companion(ctx.at_stage(ctx.stage + level), (table.radius + 1) // 2,
                           table.radius + 1, max_elements)
    rep = ContractionReport("anti-contracting", level, ratio, constant)
    for i, g in enumerate(table.keys):
        n = table.length(i)
        _, secs = _sections(store, ctx.key, g, level)
        total = sum(companion.length(s) for s in secs)
        excess = n - (ratio * total + constant)
        rep.checked += 1
        if excess > rep.worst_excess:
            rep.worst_excess = excess
        if excess > 0:
            rep.violations += 1
            if rep.witness is None:
                rep.witness = table.word(i)
    return rep


# -- ball coincidence -------------------------------------------------------

@dataclass
class PrefixComparison:
    shared_prefix: int
    radius: int
    ball1: List[int]
    ball2: List[int]
    complete: bool
    asserted: bool

    @property
    def mismatches(self) -> List[int]:
        return [n for n, (x, y) in enumerate(zip(self.ball1, self.ball2)) if x != y]

    @property
    def agree(self) -> bool:
        return not self.mismatches


def ball_prefix_experiment(omega1: OracleSequence, omega2: OracleSequence, n: int, *,
                           max_elements: Optional[int] = None,
                           time_budget: Optional[float] = None) -> PrefixComparison:
    """Compare growth of two groups whose oracles share a length-``n`` prefix.

    Balls are compared radius by radius up to ``2^(n-1)``; with ``n = 0``
    nothing is asserted.  ``complete`` is false when a budget stopped either
    enumeration early; the common completed radii are still compared.
    """
    for i in range(n):
        if omega1.symbol_at(i) != omega2.symbol_at(i):
            raise ValueError(f"oracles differ at position {i} < {n}")
    if n == 0:
        return PrefixComparison(0, 0, [1], [1], True, False)
    radius = 2 ** (n - 1)
    balls, complete = [], True
    for omega in (omega1, omega2):
        # private stores: the tables are large and only their counts are kept
        t = enumerate_ball(build_group(omega), radius, max_elements=max_elements,
                           time_budget=time_budget, store=ElementStore(omega))
        balls.append(t.ball)
        complete = complete and t.complete
        del t
    r = min(len(b) for b in balls) - 1
    return PrefixComparison(n, r, balls[0][:r + 1], balls[1][:r + 1], complete, True)


# -- diagnostics and constants ----------------------------------------------

@dataclass(frozen=True)
class ExponentFit:
    """Slope of ``log log gamma(n)`` against ``log n``; a finite-radius diagnostic only."""
    alpha: float
    intercept: float
    residual: float
    radii: tuple


def growth_exponent_fit(table: GrowthTable, start: int = 3) -> ExponentFit:
    if table.radius < 6:
        raise ValueError("growth exponent fit needs radius >= 6")
    n = np.arange(start, table.radius + 1)
    y = np.log(np.log(np.asarray(table.ball, dtype=float)[start:]))
    x = np.log(n)
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    rms = float(np.sqrt(res[0] / len(n))) if len(res) else 0.0
    return ExponentFit(float(coef[0]), float(coef[1]), rms, tuple(int(k) for k in n))


@dataclass(frozen=True)
class Constants:
    rho: float
    rho_residual: float
    alpha0: float
    eta_plus: float
    eta_residual: float


def _root(f, lo, hi):
    if f(lo) * f(hi) >= 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    return bisect(f, lo, hi, xtol=1e-15, maxiter=200)


def paper_constants() -> Constants:
    """Real root rho of x^3+x^2+x-2, alpha_0 = log 2 / log(2/rho), and the
    positive root eta_+ of x^3-x^2-2x-4."""
    f = lambda x: x ** 3 + x ** 2 + x - 2
    g = lambda x: x ** 3 - x ** 2 - 2 * x - 4
    rho = _root(f, 0.5, 1.0)
    eta = _root(g, 2.0, 3.0)
    return Constants(rho, abs(f(rho)), math.log(2) / math.log(2 / rho), eta, abs(g(eta)))


# -- export -----------------------------------------------------------------

GROWTH_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "oracle", "stage", "radius", "complete", "rows"],
    "properties": {
        "schema": {"const": "growth/1"},
        "oracle": {"type": "string"},
        "stage": {"type": "integer", "minimum": 0},
        "letters": {"type": "string"},
        "radius": {"type": "integer", "minimum": 0},
        "complete": {"type": "boolean"},
        "stop_reason": {"type": "string"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "ball", "sphere"],
                "properties": {
                    "n": {"type": "integer", "minimum": 0},
                    "ball": {"type": "integer", "minimum": 1},
                    "sphere": {"type": "integer", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def table_to_json(table: GrowthTable) -> dict:
    return {
        "schema": "growth/1",
        "oracle": str(table.ctx.oracle),
        "stage": table.ctx.stage,
        "letters": table.letters,
        "radius": table.radius,
        "complete": table.complete,
        "stop_reason": table.stop_reason,
        "rows": [{"n": n, "ball": b, "sphere": s} for n, b, s in table.rows()],
    }


def table_to_csv(table: GrowthTable) -> str:
    lines = ["n,ball,sphere"]
    lines += [f"{n},{b},{s}" for n, b, s in table.rows()]
    return "\n".join(lines) + "\n"
