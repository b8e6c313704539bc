"""Finite time stages: sets of semantic clocks with tick budgets, and the
budget-decreasing maps between them.

A stage holds finitely many clocks, each with a number of ticks remaining.
A morphism may synchronize clocks, discard budget, or land in a stage with
extra clocks; it can never create budget.  All evaluation and every property
suite works pointwise at such stages.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ClockAtom:
    """A semantic clock name, unique per allocation."""
    label: str
    serial: int = 0

    def __str__(self):
        return self.label if self.serial == 0 else f"{self.label}!{self.serial}"

    def _key(self):
        return (self.label, self.serial)


class StageError(Exception):
    pass


@dataclass(frozen=True)
class TimeObject:
    """A finite clock set with the ticks remaining on each clock."""

    items: tuple[tuple[ClockAtom, int], ...] = ()

    def __post_init__(self):
        canon = tuple(sorted(self.items, key=lambda p: p[0]._key()))
        seen = set()
        for atom, budget in canon:
            if atom in seen:
                raise StageError(f"duplicate clock {atom}")
            if budget < 0:
                raise StageError("budget must be nonnegative")
            seen.add(atom)
        object.__setattr__(self, "items", canon)

    @staticmethod
    def of(mapping: dict[ClockAtom, int]) -> "TimeObject":
        return TimeObject(tuple(mapping.items()))

    @property
    def atoms(self) -> frozenset[ClockAtom]:
        return frozenset(a for a, _ in self.items)

    def budget(self, atom: ClockAtom) -> int:
        for a, n in self.items:
            if a == atom:
                return n
        raise StageError(f"clock {atom} not at this stage")

    def decrement(self, atom: ClockAtom) -> "TimeObject":
        n = self.budget(atom)
        if n == 0:
            raise StageError(f"clock {atom} has no ticks left")
        return TimeObject(tuple((a, m - 1 if a == atom else m)
                                for a, m in self.items))

    def extend(self, atom: ClockAtom, budget: int) -> "TimeObject":
        if atom in self.atoms:
            raise StageError(f"clock {atom} already present")
        return TimeObject(self.items + ((atom, budget),))

    def __str__(self):
        return "(" + ",".join(f"{a}={n}" for a, n in self.items) + ")"


@dataclass(frozen=True)
class TimeMorphism:
    """A clock map under which no budget grows: the target budget of the
    image is at most the source budget, pointwise."""

    src: TimeObject
    dst: TimeObject
    mapping: tuple[tuple[ClockAtom, ClockAtom], ...]

    def __post_init__(self):
        canon = tuple(sorted(self.mapping, key=lambda p: p[0]._key()))
        object.__setattr__(self, "mapping", canon)
        got = {a for a, _ in canon}
        if got != self.src.atoms:
            raise StageError("morphism must be total on the source clocks")
        for a, b in canon:
            if b not in self.dst.atoms:
                raise StageError(f"morphism target {b} not in destination")
            if self.dst.budget(b) > self.src.budget(a):
                raise StageError(
                    f"budget grows along {a}->{b}: "
                    f"{self.dst.budget(b)} > {self.src.budget(a)}")

    @staticmethod
    def of(src: TimeObject, dst: TimeObject,
           mapping: dict[ClockAtom, ClockAtom]) -> "TimeMorphism":
        return TimeMorphism(src, dst, tuple(mapping.items()))

    def apply(self, atom: ClockAtom) -> ClockAtom:
        for a, b in self.mapping:
            if a == atom:
                return b
        raise StageError(f"clock {atom} not in morphism source")

    def is_identity(self) -> bool:
        return self.src == self.dst and all(a == b for a, b in self.mapping)

    def __str__(self):
        arrows = ",".join(f"{a}->{b}" for a, b in self.mapping)
        return f"[{arrows}]: {self.src} => {self.dst}"


def is_morphism(src: TimeObject, dst: TimeObject,
                mapping: dict[ClockAtom, ClockAtom]) -> bool:
    """Does the map respect the pointwise budget inequality?"""
    try:
        TimeMorphism.of(src, dst, mapping)
        return True
    except StageError:
        return False


def identity(stage: TimeObject) -> TimeMorphism:
    return TimeMorphism.of(stage, stage, {a: a for a in stage.atoms})


def compose(sigma: TimeMorphism, tau: TimeMorphism) -> TimeMorphism:
    """``sigma`` after ``tau``."""
    if tau.dst != sigma.src:
        raise StageError("stage mismatch in composition")
    return TimeMorphism.of(tau.src, sigma.dst,
                           {a: sigma.apply(b) for a, b in tau.mapping})


def tick_morphism(stage: TimeObject, atom: ClockAtom) -> TimeMorphism:
    """The identity-on-clocks map spending one tick on ``atom``."""
    return TimeMorphism.of(stage, stage.decrement(atom),
                           {a: a for a in stage.atoms})


def decrement_morphism(sigma: TimeMorphism, atom: ClockAtom) -> TimeMorphism:
    """The map ``sigma`` between the stages with one tick spent on ``atom``
    and on its image."""
    return TimeMorphism(sigma.src.decrement(atom),
                        sigma.dst.decrement(sigma.apply(atom)),
                        sigma.mapping)


def enumerate_morphisms(src: TimeObject, dst: TimeObject) -> list[TimeMorphism]:
    """All budget-respecting total maps from ``src`` to ``dst``."""
    src_atoms = [a for a, _ in src.items]
    dst_atoms = [a for a, _ in dst.items]
    if not src_atoms:
        return [TimeMorphism.of(src, dst, {})]
    out = []
    for image in itertools.product(dst_atoms, repeat=len(src_atoms)):
        mapping = dict(zip(src_atoms, image))
        if is_morphism(src, dst, mapping):
            out.append(TimeMorphism.of(src, dst, mapping))
    return out


@dataclass
class ClockAllocator:
    """Supplies semantic clocks that are fresh across one evaluation."""

    counter: itertools.count = field(default_factory=lambda: itertools.count(1))

    def fresh(self, hint: str = "_c") -> ClockAtom:
        return ClockAtom(hint, next(self.counter))


def clock_intro_iota(stage: TimeObject, budget: int,
                     alloc: ClockAllocator | None = None
                     ) -> tuple[TimeMorphism, ClockAtom]:
    """Adjoin a fresh clock with the given budget; returns the inclusion."""
    alloc = alloc or ClockAllocator()
    atom = alloc.fresh("_c")
    while atom in stage.atoms:  # defensive: allocators may be reused
        atom = alloc.fresh("_c")
    bigger = stage.extend(atom, budget)
    iota = TimeMorphism.of(stage, bigger, {a: a for a in stage.atoms})
    return iota, atom


def parse_stage(literal: str) -> TimeObject:
    """Parse ``k0=3,k1=2`` into a stage; empty input is the empty stage."""
    items: list[tuple[ClockAtom, int]] = []
    seen: set[str] = set()
    text = literal.strip()
    if not text:
        return TimeObject()
    for part in text.split(","):
        if "=" not in part:
            raise StageError(f"malformed stage entry {part!r}")
        name, _, num = part.partition("=")
        name = name.strip()
        num = num.strip()
        if not name.isidentifier():
            raise StageError(f"malformed clock name {name!r}")
        if name in seen:
            raise StageError(f"duplicate clock name {name!r}")
        seen.add(name)
        try:
            budget = int(num)
        except ValueError:
            raise StageError(f"malformed budget {num!r}") from None
        if budget < 0:
            raise StageError("budget must be nonnegative")
        items.append((ClockAtom(name), budget))
    return TimeObject(tuple(items))


from .syntax import install_cached_hash

for _cls in (ClockAtom, TimeObject, TimeMorphism):
    install_cached_hash(_cls)
