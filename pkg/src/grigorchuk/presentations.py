"""Lysenok's L-presentation of the first Grigorchuk group.

Relators: ``a^2, b^2, c^2, d^2, bcd`` and ``sigma^k((ad)^4)``,
``sigma^k((adacac)^4)`` for ``k >= 0``, where the substitution is
``a -> aca, b -> d, c -> b, d -> c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

from .groups import XI, GroupContext, UnknownLetter
from .growth import ResourceCap
from .words import is_identity

SUBSTITUTION = {"a": "aca", "b": "d", "c": "b", "d": "c"}
BASE_RELATORS = ("aa", "bb", "cc", "dd", "bcd")
ITERATED_RELATORS = ("ad" * 4, "adacac" * 4)
MAX_WORD_LENGTH = 3 ** 8 * 24


class RelatorFailed(AssertionError):
    def __init__(self, word):
        super().__init__(f"relator is not the identity: {word[:60]}{'...' if len(word) > 60 else ''}")
        self.word = word


def apply_substitution(word: str, times: int = 1) -> str:
    if times < 0:
        raise ValueError("times must be >= 0")
    for _ in range(times):
        try:
            word = "".join(SUBSTITUTION[x] for x in word)
        except KeyError as exc:
            raise UnknownLetter(exc.args[0]) from None
    return word


@dataclass
class RelatorSet:
    depth: int
    base: List[str]
    iterated: List[str]

    @property
    def relators(self) -> List[str]:
        return self.base + self.iterated

    def __len__(self):
        return len(self.base) + len(self.iterated)

    def to_text(self) -> str:
        return "".join(w + "\n" for w in self.relators)


def generate_relators(depth: int, max_length: int = MAX_WORD_LENGTH) -> RelatorSet:
    """Base relators plus both iterated families for ``k = 0..depth``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    iterated = []
    for k in range(depth + 1):
        for r in ITERATED_RELATORS:
            w = apply_substitution(r, k)
            if len(w) > max_length:
                raise ResourceCap(f"relator of length {len(w)} exceeds {max_length}")
            iterated.append(w)
    return RelatorSet(depth, list(BASE_RELATORS), iterated)


@dataclass
class RelatorReport:
    checked: int
    lengths: List[int] = field(default_factory=list)


def verify_relators(ctx: GroupContext, relators: RelatorSet) -> RelatorReport:
    """Check that every relator is trivial in G; raises :class:`RelatorFailed`.

    This is the soundness direction only: relators are tested in the group
    realized by tree automorphisms.
    """
    if ctx.oracle != XI or ctx.key != 0:
        raise ValueError("the L-presentation is only known here for xi = (012)^inf at stage 0")
    report = RelatorReport(0)
    for w in relators.relators:
        if not is_identity(ctx, w):
            raise RelatorFailed(w)
        report.checked += 1
        report.lengths.append(len(w))
    return report
