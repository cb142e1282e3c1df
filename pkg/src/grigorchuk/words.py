"""Word problem for G_omega by contraction.

Words are strings over ``abcd``; the word ``xy`` applies ``y`` first.  All
generators are involutions, so a word's inverse is its reversal.
"""
from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np

from .groups import LETTERS, GroupContext, UnknownLetter, decomposition
from .elements import _KLEIN

MEMO_CAP = 1 << 20


def _check(word: str):
    for x in word:
        if x not in LETTERS:
            raise UnknownLetter(x)


def reduce(ctx: GroupContext, word: str) -> str:
    """Normal form under the local rules.

    Degenerate letters are dropped, aliased letters replaced by their
    representative, and adjacent pairs rewritten by ``aa -> 1``, ``xx -> 1``
    and ``xy -> z`` for ``{x, y, z} = {b, c, d}``.  The result alternates
    between ``a`` and a single spine letter.
    """
    _check(word)
    alias = ctx.alias
    stack = []
    for x in word:
        x = alias[x]
        if not x:
            continue
        if stack:
            y = stack[-1]
            if y == x:
                stack.pop()
                continue
            if y != "a" and x != "a":
                z = alias[_KLEIN[y, x]]
                stack.pop()
                # z is never "a"; it may merge with the letter underneath
                if z:
                    if stack and stack[-1] == z:
                        stack.pop()
                    else:
                        stack.append(z)
                continue
        stack.append(x)
    return "".join(stack)


def section_words(ctx: GroupContext, word: str) -> Tuple[int, str, str]:
    """Root permutation and the two level-1 section words of ``word``.

    Derived from the generators' wreath recursions: scanning right to left,
    each letter contributes its section at the vertex it currently sees, and
    ``a`` flips that vertex.  The section at ``x`` of ``w_1 ... w_n`` is the
    product, left to right, of the ``w_k`` sections.
    """
    oracle, key = ctx.oracle, ctx.key
    parts = ([], [])
    pos = [0, 1]  # pos[x]: where the path that ends at x currently is
    for letter in reversed(word):
        perm, left, right = decomposition(oracle, letter, key)
        for x in (0, 1):
            s = left if pos[x] == 0 else right
            if s:
                parts[x].append(s)
            pos[x] ^= perm
    perm = pos[0]
    return perm, "".join(reversed(parts[0])), "".join(reversed(parts[1]))


class _Memo:
    """Bounded LRU table safe for concurrent idempotent use."""

    def __init__(self, cap=MEMO_CAP):
        self.cap = cap
        self.data: "OrderedDict[tuple, bool]" = OrderedDict()
        self.lock = threading.Lock()

    def get(self, key):
        with self.lock:
            v = self.data.get(key)
            if v is not None:
                self.data.move_to_end(key)
            return v

    def put(self, key, value):
        with self.lock:
            self.data[key] = value
            if len(self.data) > self.cap:
                self.data.popitem(last=False)


_identity_memo = _Memo()


def is_identity(ctx: GroupContext, word: str) -> bool:
    """Whether ``word`` is the identity of G_omega (exact).

    Reduce; an odd number of ``a`` letters moves level 1; otherwise recurse on
    both section words over the next stage.  Each section of a reduced word of
    length ``n >= 2`` has length at most ``(n + 1) / 2 < n``, so the recursion
    terminates.
    """
    _check(word)
    return _is_identity(ctx, reduce(ctx, word))


def _is_identity(ctx, w):
    if not w:
        return True
    if len(w) == 1:
        return False
    if w.count("a") % 2:
        return False
    key = (ctx.oracle, ctx.key, w)
    hit = _identity_memo.get(key)
    if hit is not None:
        return hit
    _, left, right = section_words(ctx, w)
    child = ctx.child()
    left, right = reduce(child, left), reduce(child, right)
    assert len(left) < len(w) and len(right) < len(w), "contraction failed"
    result = _is_identity(child, left) and _is_identity(child, right)
    _identity_memo.put(key, result)
    return result


def inverse(word: str) -> str:
    return word[::-1]


def equal(ctx: GroupContext, w1: str, w2: str) -> bool:
    return is_identity(ctx, w1 + inverse(w2))


@dataclass(frozen=True)
class Unbounded:
    """No power up to ``cap`` was the identity."""
    cap: int


def order_of(ctx: GroupContext, word: str, cap: int = 256) -> Union[int, Unbounded]:
    """Least ``k <= cap`` with ``word^k = 1``.

    For oracles in Omega_0 every element has 2-power order, so only
    ``g, g^2, g^4, ...`` are tested; otherwise every ``k`` up to ``cap``.
    """
    from .groups import classify_oracle

    if cap < 1:
        raise ValueError("cap must be >= 1")
    w = reduce(ctx, word)
    if not w:
        return 1
    if classify_oracle(ctx.oracle).in_Omega0:
        k, power = 1, w
        while k <= cap:
            if is_identity(ctx, power):
                return k
            k *= 2
            power = reduce(ctx, power + power)
        return Unbounded(cap)
    power = ""
    for k in range(1, cap + 1):
        power = reduce(ctx, power + w)
        if not power:
            return k
        if is_identity(ctx, power):
            return k
    return Unbounded(cap)


# -- signatures -------------------------------------------------------------

_perm_cache: Dict[tuple, np.ndarray] = {}


def _letter_perm(ctx: GroupContext, letter: str, depth: int) -> np.ndarray:
    """Permutation of level ``depth`` induced by a generator.

    Vertex ``x_1 ... x_D`` is indexed by the integer with ``x_1`` as most
    significant bit.
    """
    key = (ctx.oracle, ctx.key, letter, depth)
    p = _perm_cache.get(key)
    if p is not None:
        return p
    if depth == 0:
        p = np.zeros(1, dtype=np.int64)
    else:
        half = 1 << (depth - 1)
        perm, left, right = decomposition(ctx.oracle, letter, ctx.key)
        child = ctx.child()
        parts = []
        for x, s in ((0, left), (1, right)):
            sub = np.arange(half, dtype=np.int64)
            for y in reversed(s):
                sub = _letter_perm(child, y, depth - 1)[sub]
            parts.append(sub + ((x ^ perm) << (depth - 1)))
        p = np.concatenate(parts)
    p.setflags(write=False)
    _perm_cache[key] = p
    return p


def level_permutation(ctx: GroupContext, word: str, depth: int) -> np.ndarray:
    """Image index of every level-``depth`` vertex under ``word``."""
    _check(word)
    v = np.arange(1 << depth, dtype=np.int64)
    for x in reversed(word):
        v = _letter_perm(ctx, x, depth)[v]
    return v


@dataclass(frozen=True)
class Signature:
    """Packed level permutations of levels ``1..depth``.

    Encoding: for each level ``k = 1..depth`` in order, the images of the
    ``2^k`` vertices (lexicographic order, first letter most significant) as
    little-endian unsigned 32-bit integers, concatenated.
    """
    depth: int
    table: bytes


def signature_at(ctx: GroupContext, word: str, depth: int) -> Signature:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    top = level_permutation(ctx, word, depth)
    chunks = [(top >> (depth - k))[:: 1 << (depth - k)].astype("<u4").tobytes()
              for k in range(1, depth + 1)]
    return Signature(depth, b"".join(chunks))


def adaptive_depth(total_length: int, c0: int = 5) -> int:
    return max(1, math.ceil(math.log2(max(total_length, 1)))) + c0


def fast_equal(ctx: GroupContext, w1: str, w2: str, c0: int = 5) -> bool:
    """Equality with a signature fast path and exact fallback."""
    d = adaptive_depth(len(w1) + len(w2), c0)
    if signature_at(ctx, w1, d) != signature_at(ctx, w2, d):
        return False
    return equal(ctx, w1, w2)
