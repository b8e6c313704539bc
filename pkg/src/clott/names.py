"""Identifiers for the three binding namespaces: term, clock, and tick variables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

TERM = "term"
CLOCK = "clock"
TICK = "tick"

_serial = itertools.count(1)


@dataclass(frozen=True)
class Name:
    """An identifier with a fixed namespace kind.

    ``uid == 0`` marks a user-written name; freshened names carry a nonzero
    serial so distinct calls to :func:`fresh` never collide.
    """

    text: str
    kind: str
    uid: int = 0

    def __post_init__(self):
        if not self.text:
            raise ValueError("empty identifier")
        if self.kind not in (TERM, CLOCK, TICK):
            raise ValueError(f"bad name kind {self.kind!r}")

    def __str__(self):
        return self.text if self.uid == 0 else f"{self.text}%{self.uid}"


def user(text: str, kind: str = TERM) -> Name:
    return Name(text, kind, 0)


def fresh(text: str, kind: str) -> Name:
    """A name guaranteed distinct from every other name produced so far."""
    return Name(text, kind, next(_serial))
