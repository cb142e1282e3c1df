"""Grigorchuk's family of groups G_omega acting on the binary rooted tree.

Modules: ``tree`` (automorphisms and boundary points), ``groups`` (oracle
sequences and generators), ``elements`` and ``words`` (canonical forms and
the word problem), ``growth``, ``orbits``, ``walks``, ``presentations`` and
``cli``.
"""
from .groups import ETA, XI, OracleSequence, build_group
from .words import equal, is_identity

__version__ = "0.1.0"

__all__ = ["ETA", "XI", "OracleSequence", "build_group", "equal", "is_identity"]
