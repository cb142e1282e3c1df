"""Random walks on G_omega: exact convolution powers, return probabilities,
entropy and drift, and the first-hit projection map psi."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .elements import E, store_for
from .groups import LETTERS, GroupContext
from .growth import GrowthTable, ResourceCap, enumerate_ball
from .tree import bisimilar
from .words import is_identity

DEFAULT_PATH_CAP = 10_000
CHUNK = 1 << 16


class MissingLength(KeyError):
    pass


@dataclass
class Measure:
    """Finitely supported probability measure with exact rational weights.

    ``atoms`` maps canonical element ids (at ``ctx``'s stage) to weights and
    ``words`` keeps one representative word per atom.
    """

    ctx: GroupContext
    atoms: Dict[int, Fraction]
    words: Dict[int, str]

    @classmethod
    def from_words(cls, ctx: GroupContext, weights: Dict[str, Union[Fraction, int, str]],
                   check_generating: bool = True) -> "Measure":
        store = store_for(ctx.oracle)
        atoms, words = {}, {}
        for w, p in weights.items():
            p = Fraction(p)
            if p <= 0:
                raise ValueError(f"weight of {w!r} must be positive")
            g = store.from_word(ctx.key, w)
            atoms[g] = atoms.get(g, Fraction(0)) + p
            words.setdefault(g, w)
        if sum(atoms.values()) != 1:
            raise ValueError(f"weights sum to {sum(atoms.values())}, not 1")
        m = cls(ctx, atoms, words)
        if check_generating and not m.generates():
            raise ValueError("support does not generate the group")
        return m

    def is_symmetric(self) -> bool:
        store = store_for(self.ctx.oracle)
        for g, p in self.atoms.items():
            inv = store.from_word(self.ctx.key, self.words[g][::-1])
            if self.atoms.get(inv) != p:
                return False
        return True

    def generates(self, radius: int = 6) -> bool:
        """Whether every generator is a product of at most ``radius`` support atoms."""
        store = store_for(self.ctx.oracle)
        key = self.ctx.key
        targets = {store.atom(key, x) for x in LETTERS} - {E}
        seen, frontier = {E}, [E]
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for h in self.atoms:
                    p = store.mul(key, g, h)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
            if targets <= seen:
                return True
        return targets <= seen

    def as_words(self) -> Dict[str, Fraction]:
        return {self.words[g]: p for g, p in self.atoms.items()}


def uniform(ctx: GroupContext) -> Measure:
    return Measure.from_words(ctx, {x: Fraction(1, 4) for x in LETTERS})


def kaimanovich(ctx: GroupContext) -> Measure:
    """``(4/7) a + (1/7)(b + c + d)``."""
    return Measure.from_words(ctx, {"a": Fraction(4, 7), "b": Fraction(1, 7),
                                    "c": Fraction(1, 7), "d": Fraction(1, 7)})


def convolution_powers(mu: Measure, n: int, max_support: int = 5_000_000):
    """Yield the exact distributions of ``mu^{*k}`` for ``k = 0..n``.

    Step ``k + 1`` right-multiplies by an independent ``mu`` sample; atoms are
    canonical ids so equal elements merge exactly.  Iteration follows
    insertion order, which makes the result deterministic.
    """
    store = store_for(mu.ctx.oracle)
    key = mu.ctx.key
    dist = {E: Fraction(1)}
    yield dist
    for _ in range(n):
        nxt: Dict[int, Fraction] = {}
        for g, p in dist.items():
            for h, q in mu.atoms.items():
                r = store.mul(key, g, h)
                nxt[r] = nxt.get(r, 0) + p * q
        if len(nxt) > max_support:
            raise ResourceCap(f"support {len(nxt)} exceeds {max_support}")
        dist = nxt
        yield dist


def convolve_power(mu: Measure, n: int, max_support: int = 5_000_000) -> Dict[int, Fraction]:
    for dist in convolution_powers(mu, n, max_support):
        pass
    return dist


def naive_return_probability(mu: Measure, n: int) -> Fraction:
    """``mu^{*n}(e)`` summed over all ``|supp|^n`` step sequences, each tested
    with the word-problem algorithm."""
    import itertools

    items = [(mu.words[g], p) for g, p in mu.atoms.items()]
    total = Fraction(0)
    for steps in itertools.product(items, repeat=n):
        word = "".join(w for w, _ in steps)
        if is_identity(mu.ctx, word):
            weight = Fraction(1)
            for _, p in steps:
                weight *= p
            total += weight
    return total


@dataclass(frozen=True)
class WalkStats:
    n: int
    P: Fraction
    H: float
    L: float
    support: int


def walk_stats(mu: Measure, n: int, table: Optional[GrowthTable] = None) -> List[WalkStats]:
    """Return probability, entropy (natural log) and drift for ``k = 0..n``.

    Lengths come from ``table``, which must be a ball of radius ``>= n`` for
    a measure supported on generators (it is enumerated if omitted).
    """
    if table is None:
        table = enumerate_ball(mu.ctx, n)
    out = []
    for k, dist in enumerate(convolution_powers(mu, n)):
        H = 0.0
        L = 0.0
        for g, p in dist.items():
            pf = float(p)
            H -= pf * math.log(pf)
            try:
                L += pf * table.length_of(g)
            except KeyError:
                raise MissingLength(f"element of the support of mu^*{k} is outside the table") from None
        out.append(WalkStats(k, dist.get(E, Fraction(0)), H, L, len(dist)))
    return out


@dataclass(frozen=True)
class SpectralEstimate:
    """``P(2n)^(1/2n)`` and its running maximum: lower-bound diagnostics only."""
    n: tuple
    roots: tuple
    running_sup: tuple


def spectral_radius_estimate(stats: Sequence[WalkStats]) -> SpectralEstimate:
    ns, roots = [], []
    for s in stats:
        if s.n >= 2 and s.n % 2 == 0:
            ns.append(s.n // 2)
            roots.append(float(s.P) ** (1.0 / s.n))
    sup = tuple(np.maximum.accumulate(roots).tolist()) if roots else ()
    return SpectralEstimate(tuple(ns), tuple(roots), sup)


def _chunk_seeds(seed: int, samples: int):
    sizes = [min(CHUNK, samples - i) for i in range(0, samples, CHUNK)]
    return list(zip(np.random.SeedSequence(seed).spawn(len(sizes)), sizes))


def _run_chunks(fn, seed, samples, workers):
    chunks = _chunk_seeds(seed, samples)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda c: fn(*c), chunks))
    return [fn(*c) for c in chunks]


@dataclass(frozen=True)
class MonteCarloReturn:
    n: int
    samples: int
    seed: int
    returns: int

    @property
    def estimate(self) -> float:
        return self.returns / self.samples


def monte_carlo_return(mu: Measure, n: int, samples: int = 100_000, seed: int = 0,
                       workers: int = 1) -> MonteCarloReturn:
    """Empirical ``P(n)`` from ``samples`` walks of length ``n``.

    Samples are split into fixed chunks, each with its own spawned seed, so
    the count does not depend on ``workers``.
    """
    store = store_for(mu.ctx.oracle)
    key = mu.ctx.key
    ids = list(mu.atoms)
    probs = np.array([float(mu.atoms[g]) for g in ids])

    def chunk(ss, size):
        rng = np.random.default_rng(ss)
        steps = rng.choice(len(ids), size=(size, n), p=probs)
        hits = 0
        for row in steps:
            g = E
            for j in row:
                g = store.mul(key, g, ids[j])
            hits += g == E
        return hits

    return MonteCarloReturn(n, samples, seed, sum(_run_chunks(chunk, seed, samples, workers)))


# -- psi map ----------------------------------------------------------------

@dataclass(frozen=True)
class MonteCarlo:
    samples: int = 1_000_000
    path_cap: int = DEFAULT_PATH_CAP
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class TruncatedExact:
    length_cap: int = 30


@dataclass
class PsiEstimate:
    """Projected first-hit measure at a level-1 vertex.

    ``atoms`` are ids in the *original* context (sections are translated back
    through the self-similarity of the family); ``residual`` is the mass not
    captured (capped trajectories or truncated paths).
    """
    vertex: int
    method: Union[MonteCarlo, TruncatedExact]
    atoms: Dict[int, Union[Fraction, float]]
    residual: Union[Fraction, float]
    capped: int = 0

    @property
    def captured(self):
        return 1 - self.residual


class NotSelfSimilar(ValueError):
    pass


class _Translator:
    """Maps element ids of a deeper stage to equal elements of the base stage.

    For self-similar members of the family (e.g. xi) every stage's
    generators coincide, as automorphisms, with generators of the base stage
    up to relabeling; elements are translated node by node.
    """

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        self.store = store_for(ctx.oracle)
        self.oracle = ctx.oracle
        self.memo = {}
        self.letter_maps = {}

    def _letters(self, src: int, dst: int):
        m = self.letter_maps.get((src, dst))
        if m is None:
            gs = self.ctx.at_stage(src).generators
            gd = self.ctx.at_stage(dst).generators
            m = {}
            for x, g in gs.items():
                match = next((y for y, h in gd.items() if bisimilar(g, h)), None)
                if match is None:
                    raise NotSelfSimilar(f"generator {x} of stage {src} is not a generator of stage {dst}")
                m[x] = match
            self.letter_maps[src, dst] = m
        return m

    def translate(self, src: int, g: int, dst: int) -> int:
        if g == E:
            return E
        memo = (src, g, dst)
        r = self.memo.get(memo)
        if r is not None:
            return r
        store = self.store
        if store.is_atom(g):
            r = store.atom(dst, self._letters(src, dst)[store.letter_of(g)])
        else:
            perm, g0, g1 = store.decompose(src, g)
            ns, nd = self.oracle.next_stage(src), self.oracle.next_stage(dst)
            r = store.make(dst, perm, self.translate(ns, g0, nd), self.translate(ns, g1, nd))
        self.memo[memo] = r
        return r


def psi_map(mu: Measure, vertex: int,
            method: Union[MonteCarlo, TruncatedExact] = TruncatedExact()) -> PsiEstimate:
    """First-hit projection of ``mu`` to the section at a level-1 vertex.

    The walk ``g_t = s_1 ... s_t`` is run until it first lands in the
    stabilizer of level 1 (root permutation trivial); the section of ``g_t``
    at ``vertex`` is recorded.
    """
    if vertex not in (0, 1):
        raise ValueError("vertex must be 0 or 1")
    if not mu.generates():
        raise ValueError("support of mu must generate the group")
    ctx = mu.ctx
    store = store_for(ctx.oracle)
    key, child = ctx.key, ctx.oracle.next_stage(ctx.key)
    tr = _Translator(ctx)
    ids = list(mu.atoms)

    def project(g):
        _, g0, g1 = store.decompose(key, g)
        return tr.translate(child, g1 if vertex else g0, key)

    if isinstance(method, TruncatedExact):
        alive = {E: Fraction(1)}
        hit: Dict[int, Fraction] = {}
        for _ in range(method.length_cap):
            nxt: Dict[int, Fraction] = {}
            for g, p in alive.items():
                for h in ids:
                    r = store.mul(key, g, h)
                    w = p * mu.atoms[h]
                    if store.perm(r) == 0:
                        s = project(r)
                        hit[s] = hit.get(s, 0) + w
                    else:
                        nxt[r] = nxt.get(r, 0) + w
            alive = nxt
        return PsiEstimate(vertex, method, hit, sum(alive.values(), Fraction(0)))

    probs = np.array([float(mu.atoms[g]) for g in ids])
    cap = method.path_cap

    def chunk(ss, size):
        rng = np.random.default_rng(ss)
        counts: Dict[int, int] = {}
        capped = 0
        buf = rng.choice(len(ids), size=4 * size + 64, p=probs)
        pos = 0
        for _ in range(size):
            g, t = E, 0
            while True:
                if pos == len(buf):
                    buf = rng.choice(len(ids), size=4 * size + 64, p=probs)
                    pos = 0
                g = store.mul(key, g, ids[buf[pos]])
                pos += 1
                t += 1
                if store.perm(g) == 0:
                    s = project(g)
                    counts[s] = counts.get(s, 0) + 1
                    break
                if t >= cap:
                    capped += 1
                    break
        return counts, capped

    total: Dict[int, int] = {}
    capped = 0
    for counts, c in _run_chunks(chunk, method.seed, method.samples, method.workers):
        capped += c
        for s, k in counts.items():
            total[s] = total.get(s, 0) + k
    n = method.samples
    atoms = {s: k / n for s, k in sorted(total.items())}
    return PsiEstimate(vertex, method, atoms, capped / n, capped)


def self_similar_target(mu: Measure, lam) -> Dict[int, Fraction]:
    lam = Fraction(lam)
    target = {g: lam * p for g, p in mu.atoms.items()}
    target[E] = target.get(E, 0) + (1 - lam)
    return target


def total_variation(p: Dict[int, float], q: Dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


@dataclass
class SelfSimilarVerdict:
    vertex: int
    lam: Fraction
    distance: float
    residual: float
    tol: float
    estimate: PsiEstimate

    @property
    def passed(self) -> bool:
        return self.distance + self.residual < self.tol


def self_similar_check(mu: Measure, lam=Fraction(1, 2), tol: float = 0.01, vertex: int = 0,
                       method: Union[MonteCarlo, TruncatedExact] = TruncatedExact()
                       ) -> SelfSimilarVerdict:
    """Compare ``psi(mu)`` at ``vertex`` with ``(1 - lam) delta_e + lam mu``."""
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("contracting coefficient must lie strictly between 0 and 1")
    est = psi_map(mu, vertex, method)
    dist = total_variation(est.atoms, self_similar_target(mu, lam))
    return SelfSimilarVerdict(vertex, lam, dist, float(est.residual), tol, est)


# -- export -----------------------------------------------------------------

WALKS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "oracle", "measure", "rows"],
    "properties": {
        "schema": {"const": "walks/1"},
        "oracle": {"type": "string"},
        "stage": {"type": "integer", "minimum": 0},
        "measure": {"type": "object", "additionalProperties": {"type": "string"}},
        "seed": {"type": ["integer", "null"]},
        "samples": {"type": ["integer", "null"]},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "P", "H", "L", "support"],
                "properties": {
                    "n": {"type": "integer", "minimum": 0},
                    "P": {"type": "string"},
                    "P_float": {"type": "number"},
                    "H": {"type": "number"},
                    "L": {"type": "number"},
                    "support": {"type": "integer", "minimum": 1},
                    "P_monte_carlo": {"type": "number"},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def stats_to_json(mu: Measure, stats: Sequence[WalkStats], seed=None, samples=None,
                  monte_carlo: Optional[Dict[int, float]] = None) -> dict:
    rows = []
    for s in stats:
        row = {"n": s.n, "P": str(s.P), "P_float": float(s.P), "H": s.H, "L": s.L,
               "support": s.support}
        if monte_carlo and s.n in monte_carlo:
            row["P_monte_carlo"] = monte_carlo[s.n]
        rows.append(row)
    return {
        "schema": "walks/1",
        "oracle": str(mu.ctx.oracle),
        "stage": mu.ctx.stage,
        "measure": {w: str(p) for w, p in mu.as_words().items()},
        "seed": seed,
        "samples": samples,
        "rows": rows,
    }


def stats_to_csv(stats: Sequence[WalkStats]) -> str:
    lines = ["n,P,H,L"]
    lines += [f"{s.n},{float(s.P)!r},{s.H!r},{s.L!r}" for s in stats]
    return "\n".join(lines) + "\n"
