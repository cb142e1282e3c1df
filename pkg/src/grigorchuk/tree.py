"""Automorphisms of the binary rooted tree.

Vertices are tuples over ``{0, 1}``; the empty tuple is the root.  An
:class:`Automorphism` is a wreath-recursion node ``g = (g_0, g_1) perm``: it
acts on a word ``x w`` by ``g(x w) = perm(x) g_x(w)``.

Composition convention, fixed for the whole package: ``compose(g, h)`` (and
the word ``gh``) means *apply h first, then g*.  From
``(g h)(x w) = g(h(x) h_x(w))`` the section law is::

    (g h)_x = g_{h(x)} h_x

and for inverses ``(g^-1)_y = (g_{g^-1(y)})^-1``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

Vertex = Tuple[int, ...]


class CapExceeded(RuntimeError):
    """Section recursion along a boundary point did not stabilize."""


class Automorphism:
    """A lazily expanded binary tree automorphism.

    ``sections`` is either a pair of automorphisms or a zero-argument callable
    producing one; the callable is invoked at most once.  Instances are
    immutable from the outside and compare by identity, so hash-consed
    instances (generators, memoized composites) make recursive structures
    finite.
    """

    __slots__ = ("perm", "label", "_sections", "_thunk", "_lock")

    def __init__(self, perm: int, sections, label: Optional[str] = None):
        if perm not in (0, 1):
            raise ValueError("root permutation must be 0 (identity) or 1 (swap)")
        self.perm = perm
        self.label = label
        self._lock = threading.Lock()
        if callable(sections):
            self._sections = None
            self._thunk = sections
        else:
            self._sections = tuple(sections)
            self._thunk = None

    @property
    def sections(self) -> Tuple["Automorphism", "Automorphism"]:
        if self._sections is None:
            with self._lock:
                if self._sections is None:
                    self._sections = tuple(self._thunk())
                    self._thunk = None
        return self._sections

    def section_at(self, x: int) -> "Automorphism":
        return self.sections[x]

    def __call__(self, v: Sequence[int]) -> Vertex:
        return apply(self, v)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def __repr__(self):
        if self.label is not None:
            return f"<Automorphism {self.label}>"
        return f"<Automorphism perm={self.perm} at {id(self):#x}>"


IDENTITY = Automorphism(0, lambda: (IDENTITY, IDENTITY), label="e")
SWAP = Automorphism(1, (IDENTITY, IDENTITY), label="a")


def recursive(definitions: dict) -> dict:
    """Build mutually recursive automorphisms from wreath recursions.

    ``definitions`` maps a name to ``(perm, left, right)`` where ``left`` and
    ``right`` are names from the same mapping, or ``"e"`` / ``"a"``.  This is a
    finite Mealy automaton; ``recursive({"b": (0, "a", "c"), ...})`` encodes
    ``b = (a, c)``.
    """
    out = {"e": IDENTITY, "a": SWAP}

    def thunk(left, right):
        return lambda: (out[left], out[right])

    for name, (perm, left, right) in definitions.items():
        out[name] = Automorphism(perm, thunk(left, right), label=name)
    return out


def apply(g: Automorphism, v: Sequence[int]) -> Vertex:
    """Image of the vertex ``v`` under ``g``; the level is preserved."""
    out = []
    for x in v:
        if g is IDENTITY:
            out.append(x)
            continue
        out.append(x ^ g.perm)
        g = g.sections[x]
    return tuple(out)


def section(g: Automorphism, v: Sequence[int]) -> Automorphism:
    for x in v:
        g = g.sections[x]
    return g


@lru_cache(maxsize=1 << 16)
def compose(g: Automorphism, h: Automorphism) -> Automorphism:
    """The automorphism ``g h``: apply ``h`` first.

    Memoized on object identity so that composites of finite-state
    automorphisms stay finite-state.
    """
    if g is IDENTITY:
        return h
    if h is IDENTITY:
        return g

    def sections():
        h0, h1 = h.sections
        return (compose(g.sections[h.perm], h0), compose(g.sections[1 ^ h.perm], h1))

    label = None
    if g.label is not None and h.label is not None:
        label = f"({g.label})({h.label})"
    return Automorphism(g.perm ^ h.perm, sections, label=label)


@lru_cache(maxsize=1 << 16)
def invert(g: Automorphism) -> Automorphism:
    if g is IDENTITY or g is SWAP:
        return g

    def sections():
        # (g^-1)_y = (g_{g^-1(y)})^-1 and g^-1(y) = y ^ perm on level 1
        return (invert(g.sections[g.perm]), invert(g.sections[1 ^ g.perm]))

    label = None if g.label is None else f"({g.label})^-1"
    return Automorphism(g.perm, sections, label=label)


def bisimilar(g: Automorphism, h: Automorphism, depth: Optional[int] = None) -> bool:
    """Whether ``g`` and ``h`` act identically.

    With ``depth=None`` this is a coinductive check over pairs of states; it
    terminates whenever both automorphisms are finite-state with shared
    section objects (generators and memoized composites are).  With an
    integer ``depth`` only the action on levels ``<= depth`` is compared.
    """
    if depth is not None:
        return _bisimilar_to_depth(g, h, depth, {})
    seen = set()
    stack = [(g, h)]
    while stack:
        u, v = stack.pop()
        if u is v or (id(u), id(v)) in seen:
            continue
        if u.perm != v.perm:
            return False
        seen.add((id(u), id(v)))
        stack.extend(zip(u.sections, v.sections))
    return True


def _bisimilar_to_depth(g, h, depth, memo):
    if g is h or depth == 0:
        return True
    key = (id(g), id(h))
    if memo.get(key, -1) >= depth:
        return True
    if g.perm != h.perm:
        return False
    ok = all(_bisimilar_to_depth(u, v, depth - 1, memo)
             for u, v in zip(g.sections, h.sections))
    if ok:
        memo[key] = max(memo.get(key, -1), depth)
    return ok


def is_trivial(g: Automorphism, depth: Optional[int] = None) -> bool:
    return bisimilar(g, IDENTITY, depth)


def level_vertices(k: int):
    """All vertices of level ``k`` in lexicographic order."""
    from itertools import product
    return [tuple(v) for v in product((0, 1), repeat=k)]


@dataclass(frozen=True)
class BoundaryPoint:
    """An eventually periodic point ``prefix . period^inf`` of the boundary.

    Always stored in canonical form: the period is primitive and the prefix
    as short as possible (the period is rotated as the prefix is absorbed).
    Construct through :meth:`make` to canonicalize.
    """

    prefix: Tuple[int, ...]
    period: Tuple[int, ...]

    @classmethod
    def make(cls, prefix: Sequence[int], period: Sequence[int]) -> "BoundaryPoint":
        prefix, period = tuple(prefix), tuple(period)
        if not period:
            raise ValueError("period must be nonempty")
        if any(x not in (0, 1) for x in prefix + period):
            raise ValueError("boundary letters must be 0 or 1")
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and period == period[:d] * (n // d):
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1:] + period[:-1]
        return cls(prefix, period)

    @classmethod
    def parse(cls, text: str) -> "BoundaryPoint":
        """Parse ``"01(1)"``-style text: prefix, then the period in parentheses."""
        text = "".join(text.split())
        if not text.endswith(")") or "(" not in text:
            raise ValueError(f"expected PREFIX(PERIOD), got {text!r}")
        head, _, tail = text[:-1].partition("(")
        return cls.make([int(c) for c in head], [int(c) for c in tail])

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def truncate(self, k: int) -> Vertex:
        return tuple(self.letter(i) for i in range(k))

    def shift(self) -> "BoundaryPoint":
        if self.prefix:
            return BoundaryPoint.make(self.prefix[1:], self.period)
        return BoundaryPoint.make((), self.period[1:] + self.period[:1])

    def __str__(self):
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"


ZERO_RAY = BoundaryPoint.make((), (0,))
ONE_RAY = BoundaryPoint.make((), (1,))


def apply_boundary(g: Automorphism, p: BoundaryPoint, expansion_cap: int = 64) -> BoundaryPoint:
    """Image of an eventually periodic boundary point.

    Walks along ``p`` while tracking the current section of ``g``.  The
    result is eventually periodic as soon as a (section, period phase) state
    repeats, or the section becomes the identity.  Raises
    :class:`CapExceeded` when neither happens within ``expansion_cap``
    letters past the prefix.
    """
    if expansion_cap < 1:
        raise ValueError("expansion_cap must be >= 1")
    out = []
    m, n = len(p.prefix), len(p.period)
    seen = {}
    i = 0
    while True:
        if g is IDENTITY:
            rest_prefix = tuple(p.letter(j) for j in range(i, max(i, m)))
            phase = (max(i, m) - m) % n
            return BoundaryPoint.make(tuple(out) + rest_prefix,
                                      p.period[phase:] + p.period[:phase])
        if i >= m:
            state = (g, (i - m) % n)
            if state in seen:
                start = seen[state]
                return BoundaryPoint.make(out[:start], out[start:])
            if i - m > expansion_cap:
                raise CapExceeded(f"no periodic state within {expansion_cap} letters")
            seen[state] = i
        x = p.letter(i)
        out.append(x ^ g.perm)
        g = g.sections[x]
        i += 1
