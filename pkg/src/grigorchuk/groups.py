"""Oracle sequences and the generator families of the groups G_omega.

An oracle ``omega`` over ``{0, 1, 2}`` is turned column by column into three
rows over ``{I, P}``::

    0 -> (P, P, I)     1 -> (P, I, P)     2 -> (I, P, P)

and at stage ``i`` (the oracle shifted ``i`` times) the generators are::

    a   = swap, trivial sections
    b_i = (beta(U_i), b_{i+1})    c_i = (beta(V_i), c_{i+1})    d_i = (beta(W_i), d_{i+1})

with ``beta(P) = a`` and ``beta(I) = 1``.  For ``xi = (012)^inf`` this is
``a = swap, b = (a, c), c = (a, d), d = (1, b)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from . import tree
from .tree import IDENTITY, SWAP, Automorphism

LETTERS = "abcd"
SPINE = "bcd"
COLUMNS = {0: "PPI", 1: "PIP", 2: "IPP"}
ROW_INDEX = {"b": 0, "c": 1, "d": 2}


class OracleParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownLetter(ValueError):
    pass


@dataclass(frozen=True)
class OracleSequence:
    """An eventually periodic sequence ``prefix . period^inf`` over {0,1,2}.

    Instances are normalized (primitive period, shortest prefix) so equal
    sequences compare and hash equal.
    """

    prefix: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        prefix, period = tuple(self.prefix), tuple(self.period)
        if not period:
            raise ValueError("period must be nonempty")
        if any(s not in (0, 1, 2) for s in prefix + period):
            raise ValueError("oracle symbols must be 0, 1 or 2")
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and period == period[:d] * (n // d):
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "OracleSequence":
        """Parse ``PREFIX(PERIOD)*`` text, e.g. ``(012)*`` or ``01(2)*``.

        Whitespace is ignored.  Errors carry the offending position in the
        whitespace-stripped text.
        """
        s = "".join(text.split())
        m = re.match(r"[012]*", s)
        pos = m.end()
        prefix = s[:pos]
        if pos == len(s) or s[pos] != "(":
            raise OracleParseError("expected '('", pos)
        m = re.match(r"[012]+", s[pos + 1:])
        if not m:
            raise OracleParseError("expected a nonempty period over {0,1,2}", pos + 1)
        end = pos + 1 + m.end()
        if s[end:end + 2] != ")*":
            raise OracleParseError("expected ')*'", end)
        if end + 2 != len(s):
            raise OracleParseError("trailing characters", end + 2)
        return cls(tuple(map(int, prefix)), tuple(map(int, m.group())))

    def __str__(self):
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")*"

    def symbol_at(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def shift(self, times: int = 1) -> "OracleSequence":
        p = len(self.period)
        if times <= len(self.prefix):
            return OracleSequence(self.prefix[times:], self.period)
        r = (times - len(self.prefix)) % p
        return OracleSequence((), self.period[r:] + self.period[:r])

    def row(self, letter: str, i: int) -> str:
        """Entry ``I`` or ``P`` of the row of ``letter`` (b->U, c->V, d->W) at index i."""
        return COLUMNS[self.symbol_at(i)][ROW_INDEX[letter]]

    def stage_key(self, i: int) -> int:
        """Normalized stage: stages with equal shifted oracles get equal keys."""
        m = len(self.prefix)
        if i < m:
            return i
        return m + (i - m) % len(self.period)

    @property
    def n_stages(self) -> int:
        return len(self.prefix) + len(self.period)

    def next_stage(self, key: int) -> int:
        return self.stage_key(key + 1)


XI = OracleSequence((), (0, 1, 2))
ETA = OracleSequence((), (0, 1))


@dataclass(frozen=True)
class OracleClass:
    in_Omega0: bool
    in_Omega1: bool
    in_Theta: bool
    gap_constant: Optional[int] = None


def classify_oracle(oracle: OracleSequence) -> OracleClass:
    """Membership in Theta, Omega_0 and Omega_1.

    Membership depends on the period only; for an eventually periodic
    sequence Theta coincides with Omega_0.  The gap constant is the least
    ``C`` such that every window of ``C`` consecutive symbols, starting
    anywhere (prefix included), contains all three symbols.
    """
    symbols = set(oracle.period)
    in0 = len(symbols) == 3
    in1 = len(symbols) >= 2
    gap = None
    if in0:
        gap = 0
        for i in range(oracle.n_stages):
            seen, w = set(), 0
            while len(seen) < 3:
                seen.add(oracle.symbol_at(i + w))
                w += 1
            gap = max(gap, w)
    return OracleClass(in_Omega0=in0, in_Omega1=in1, in_Theta=in0, gap_constant=gap)


@lru_cache(maxsize=None)
def _stage_info(oracle: OracleSequence, key: int):
    """Degenerate letters and letter aliases at a normalized stage.

    A spine letter is degenerate when its row is all ``I`` from this stage on;
    two letters are aliases when their rows agree from here on.  Scanning
    ``n_stages`` entries covers the prefix remainder and one full period.
    """
    span = range(key, key + oracle.n_stages)
    rows = {x: tuple(oracle.row(x, j) for j in span) for x in SPINE}
    degenerate = frozenset(x for x in SPINE if set(rows[x]) == {"I"})
    alias = {"a": "a"}
    for x in SPINE:
        if x in degenerate:
            alias[x] = ""
        else:
            alias[x] = next(y for y in SPINE if rows[y] == rows[x])
    return degenerate, alias


@lru_cache(maxsize=None)
def _generator(oracle: OracleSequence, letter: str, key: int) -> Automorphism:
    if letter == "a":
        return SWAP
    degenerate, _ = _stage_info(oracle, key)
    if letter in degenerate:
        return IDENTITY

    def sections():
        left = SWAP if oracle.row(letter, key) == "P" else IDENTITY
        return (left, _generator(oracle, letter, oracle.next_stage(key)))

    return Automorphism(0, sections, label=f"{letter}{key}")


def decomposition(oracle: OracleSequence, letter: str, key: int):
    """Wreath recursion of a generator letter at a stage.

    Returns ``(perm, left, right)`` where ``left``/``right`` are words (empty
    string for the identity) over the generators of the next stage.  This is
    the single source of truth for section-word extraction.
    """
    if letter == "a":
        return 1, "", ""
    if letter not in SPINE:
        raise UnknownLetter(letter)
    left = "a" if oracle.row(letter, key) == "P" else ""
    return 0, left, letter


@dataclass(frozen=True)
class GroupContext:
    """Generators ``a, b, c, d`` of G_omega at a given shift stage."""

    oracle: OracleSequence
    stage: int = 0

    @property
    def key(self) -> int:
        return self.oracle.stage_key(self.stage)

    @property
    def degenerate(self) -> frozenset:
        return _stage_info(self.oracle, self.key)[0]

    @property
    def alias(self) -> Dict[str, str]:
        return _stage_info(self.oracle, self.key)[1]

    @property
    def generators(self) -> Dict[str, Automorphism]:
        return {x: _generator(self.oracle, x, self.key) for x in LETTERS}

    def child(self) -> "GroupContext":
        return GroupContext(self.oracle, self.stage + 1)

    def at_stage(self, stage: int) -> "GroupContext":
        return GroupContext(self.oracle, stage)

    def decompose_letter(self, letter: str):
        return decomposition(self.oracle, letter, self.key)


class RelationFailure(AssertionError):
    pass


def check_relations(ctx: GroupContext, depth: int = 10) -> None:
    """Involution and Klein-four relations as automorphism identities."""
    g = ctx.generators
    for x in LETTERS:
        if not tree.is_trivial(tree.compose(g[x], g[x]), depth):
            raise RelationFailure(f"{x}^2 != 1 at stage {ctx.stage}")
    for x, y, z in ("bcd", "cbd", "bdc", "dbc", "cdb", "dcb"):
        if not tree.bisimilar(tree.compose(g[x], g[y]), g[z], depth):
            raise RelationFailure(f"{x}{y} != {z} at stage {ctx.stage}")


def build_group(oracle, stage: int = 0, verify_depth: int = 10) -> GroupContext:
    """Context for G_omega at ``stage``; local relations are verified on build."""
    if isinstance(oracle, str):
        oracle = OracleSequence.parse(oracle)
    ctx = GroupContext(oracle, stage)
    if verify_depth:
        check_relations(ctx, verify_depth)
    return ctx


def word_to_automorphism(ctx: GroupContext, word: str) -> Automorphism:
    """The automorphism of a word; ``"xy"`` applies ``y`` first."""
    gens = ctx.generators
    result = IDENTITY
    for x in word:
        if x not in gens:
            raise UnknownLetter(x)
    for x in reversed(word):
        result = tree.compose(gens[x], result)
    return result


def explicit_grigorchuk():
    """The automaton ``a = swap, b = (a, c), c = (a, d), d = (1, b)``."""
    return tree.recursive({
        "b": (0, "a", "c"),
        "c": (0, "a", "d"),
        "d": (0, "e", "b"),
    })


def random_oracle(rng, max_prefix: int = 4, max_period: int = 5) -> OracleSequence:
    prefix = tuple(int(rng.integers(3)) for _ in range(int(rng.integers(max_prefix + 1))))
    period = tuple(int(rng.integers(3)) for _ in range(int(rng.integers(1, max_period + 1))))
    return OracleSequence(prefix, period)
