"""Hash-consed canonical forms for elements of G_omega.

Every element lives at a normalized stage ``k`` and is an integer id.  Ids
``0`` and ``1`` are the identity and ``a`` at every stage; a spine generator
at stage ``k`` has its own atom id (degenerate letters collapse to ``0``,
letters with equal rows share an id).  Any other element is the interned
triple ``(k, perm, left, right)`` whose sections are ids at stage ``k + 1``.

Canonicity: an element of word length ``>= 2`` has sections of length at
most ``(n + 1) / 2 < n``, so the recursion bottoms out in atoms, and every
triple that equals an atom's own wreath recursion is mapped back to that
atom.  Two ids are therefore equal iff the elements are.
"""
from __future__ import annotations

import threading
from typing import Dict, List, Sequence, Tuple

from .groups import SPINE, GroupContext, OracleSequence, _stage_info

E = 0
A = 1

_KLEIN = {("b", "c"): "d", ("c", "b"): "d", ("b", "d"): "c",
          ("d", "b"): "c", ("c", "d"): "b", ("d", "c"): "b"}


class ElementStore:
    """Interning table for one oracle, shared by all of its stages.

    Insertions are guarded by a lock and idempotent, so concurrent readers
    and writers always agree on ids.
    """

    def __init__(self, oracle: OracleSequence):
        self.oracle = oracle
        self._lock = threading.Lock()
        self._intern: Dict[tuple, int] = {}
        # id -> (stage key or -1, perm, left, right, atom letter or "")
        self._nodes: List[tuple] = [(-1, 0, E, E, ""), (-1, 1, E, E, "a")]
        self._atoms: Dict[Tuple[int, str], int] = {}
        self._mul: Dict[Tuple[int, int, int], int] = {}
        keys = range(oracle.n_stages)
        for k in keys:
            _, alias = _stage_info(oracle, k)
            for x in SPINE:
                rep = alias[x]
                if not rep:
                    self._atoms[k, x] = E
                elif (k, rep) in self._atoms:
                    self._atoms[k, x] = self._atoms[k, rep]
                else:
                    self._atoms[k, x] = len(self._nodes)
                    self._nodes.append((k, 0, None, None, rep))
        for k in keys:
            nk = oracle.next_stage(k)
            for x in SPINE:
                atom = self._atoms[k, x]
                if atom == E:
                    continue
                left = A if oracle.row(x, k) == "P" else E
                right = self._atoms[nk, x]
                self._nodes[atom] = (k, 0, left, right, self._nodes[atom][4])
                self._intern[(k, 0, left, right)] = atom

    def __len__(self):
        return len(self._nodes)

    def atom(self, key: int, letter: str) -> int:
        if letter == "a":
            return A
        return self._atoms[key, letter]

    def letter_of(self, g: int) -> str:
        """Generator letter of an atom id, ``""`` for the identity or non-atoms."""
        return self._nodes[g][4]

    def is_atom(self, g: int) -> bool:
        return g == E or self._nodes[g][4] != ""

    def make(self, key: int, perm: int, left: int, right: int) -> int:
        if perm == 0 and left == E and right == E:
            return E
        if perm == 1 and left == E and right == E:
            return A
        t = (key, perm, left, right)
        g = self._intern.get(t)
        if g is None:
            with self._lock:
                g = self._intern.get(t)
                if g is None:
                    g = len(self._nodes)
                    self._nodes.append((key, perm, left, right, ""))
                    self._intern[t] = g
        return g

    def decompose(self, key: int, g: int) -> Tuple[int, int, int]:
        """``(perm, left, right)`` of ``g`` at stage ``key``; sections at ``key + 1``."""
        if g == E:
            return 0, E, E
        if g == A:
            return 1, E, E
        node = self._nodes[g]
        return node[1], node[2], node[3]

    def perm(self, g: int) -> int:
        return self._nodes[g][1]

    def mul(self, key: int, g: int, h: int) -> int:
        """The product ``g h`` (``h`` applied first) at stage ``key``."""
        if g == E:
            return h
        if h == E:
            return g
        memo = (key, g, h)
        r = self._mul.get(memo)
        if r is not None:
            return r
        lg, lh = self._nodes[g][4], self._nodes[h][4]
        if lg and lh:
            if lg == "a" and lh == "a":
                r = E
            elif lg != "a" and lh != "a":
                r = E if lg == lh else self._atoms[key, _KLEIN[lg, lh]]
        if r is None:
            pg, g0, g1 = self.decompose(key, g)
            ph, h0, h1 = self.decompose(key, h)
            nk = self.oracle.next_stage(key)
            if ph:
                g0, g1 = g1, g0
            r = self.make(key, pg ^ ph, self.mul(nk, g0, h0), self.mul(nk, g1, h1))
        self._mul[memo] = r
        return r

    def from_word(self, key: int, word: str) -> int:
        g = E
        for x in word:
            g = self.mul(key, g, self.atom(key, x))
        return g

    def section(self, key: int, g: int, vertex: Sequence[int]) -> Tuple[int, int]:
        """Section of ``g`` at ``vertex``; returns ``(stage key, id)``."""
        for x in vertex:
            _, g0, g1 = self.decompose(key, g)
            g = g1 if x else g0
            key = self.oracle.next_stage(key)
        return key, g

    def apply(self, key: int, g: int, vertex: Sequence[int]) -> Tuple[int, ...]:
        out = []
        for x in vertex:
            if g == E:
                out.append(x)
                continue
            p, g0, g1 = self.decompose(key, g)
            out.append(x ^ p)
            g = g1 if x else g0
            key = self.oracle.next_stage(key)
        return tuple(out)

    def power(self, key: int, g: int, n: int) -> int:
        r = E
        base = g
        while n:
            if n & 1:
                r = self.mul(key, r, base)
            base = self.mul(key, base, base)
            n >>= 1
        return r


_stores: Dict[OracleSequence, ElementStore] = {}
_stores_lock = threading.Lock()


def store_for(oracle: OracleSequence) -> ElementStore:
    s = _stores.get(oracle)
    if s is None:
        with _stores_lock:
            s = _stores.setdefault(oracle, ElementStore(oracle))
    return s


def element(ctx: GroupContext, word: str) -> int:
    """Canonical id of a word in the context's group."""
    return store_for(ctx.oracle).from_word(ctx.key, word)
