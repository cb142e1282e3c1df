"""Slow reference computations that avoid the canonical-form machinery.

Level permutations are built straight from an explicit wreath-recursion
automaton (for xi) or from the generator automorphisms, never from
``grigorchuk.elements`` or ``grigorchuk.words``.
"""
import itertools

import numpy as np

from grigorchuk.groups import explicit_grigorchuk


def automaton_level_perm(state, depth, memo):
    """Level-``depth`` permutation of a tree automorphism, recursively."""
    key = (id(state), depth)
    if key in memo:
        return memo[key]
    if depth == 0:
        p = np.zeros(1, dtype=np.int64)
    else:
        parts = []
        for x in (0, 1):
            sub = automaton_level_perm(state.sections[x], depth - 1, memo)
            parts.append(sub + ((x ^ state.perm) << (depth - 1)))
        p = np.concatenate(parts)
    memo[key] = p
    return p


class ActionOracle:
    """Word actions on level ``depth`` from a dict of generator automorphisms."""

    def __init__(self, gens=None, depth=12):
        self.gens = gens or explicit_grigorchuk()
        self.depth = depth
        memo = {}
        self.perms = {x: automaton_level_perm(self.gens[x], depth, memo) for x in "abcd"}

    def perm(self, word):
        v = np.arange(1 << self.depth, dtype=np.int64)
        for x in reversed(word):
            v = self.perms[x][v]
        return v

    def key(self, word):
        return self.perm(word).tobytes()

    def is_trivial(self, word):
        return bool(np.array_equal(self.perm(word), np.arange(1 << self.depth)))


def alternating_words(max_len):
    """All words of length <= max_len alternating between a and one of b, c, d."""
    out = [""]
    for n in range(1, max_len + 1):
        for start in ("a", "x"):
            slots = []
            for i in range(n):
                is_a = (i % 2 == 0) == (start == "a")
                slots.append(("a",) if is_a else ("b", "c", "d"))
            out += ["".join(w) for w in itertools.product(*slots)]
    return out


def all_words(max_len, letters="abcd"):
    for n in range(max_len + 1):
        for w in itertools.product(letters, repeat=n):
            yield "".join(w)


def naive_ball(action, radius, exact=None):
    """BFS over words, deduplicated by level action with an exact fallback.

    ``exact(u, v)`` decides equality of two words whose level actions agree;
    without it the action key alone is trusted.  Returns the ball counts and
    the list of layers, each a list of representative words.
    """
    buckets = {action.key(""): [""]}
    layers = [[""]]
    counts = [1]
    for _ in range(radius):
        layer = []
        for w in layers[-1]:
            for x in "abcd":
                u = w + x
                k = action.key(u)
                reps = buckets.setdefault(k, [])
                if reps and (exact is None or any(exact(u, v) for v in reps)):
                    continue
                reps.append(u)
                layer.append(u)
        layers.append(layer)
        counts.append(counts[-1] + len(layer))
    return counts, layers
