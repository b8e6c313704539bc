"""Stage-indexed semantic values and environments.

Every value is tagged with the stage it lives at; restriction along a stage
morphism is the only way to move it.  Function values are Kripke closures:
they take the morphism under which they are applied together with the
argument.  Delayed values carry their governing clock and an inner value at
the stage with one tick spent; at budget zero only the trivial delayed
value exists.

Environments mirror contexts.  A tick entry stores a representative of the
equivalence class it denotes: the morphism into the current stage together
with the earlier environment, with strictly more ticks remaining on the
governing clock there.  Projection collapses a tick entry by restricting
the earlier environment along its morphism.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .names import Name
from .stages import (
    ClockAtom, StageError, TimeMorphism, TimeObject, compose,
    decrement_morphism,
)
from .syntax import CVar, Tm


@dataclass(frozen=True)
class Star:
    stage: TimeObject


@dataclass(frozen=True)
class NatVal:
    stage: TimeObject
    n: int


@dataclass(frozen=True)
class PairVal:
    stage: TimeObject
    fst: "Value"
    snd: "Value"


@dataclass(frozen=True)
class TermClosure:
    """A function value as data: body with one term binder plus the
    captured environment.  Structural equality of closures is sound, so
    equal code in equal environments compares without probing."""
    body: Tm       # binds one term variable
    env: "Env"
    opts: int      # evaluation options baked into behaviour (fresh budget)
    hint: str = "x"
    ectx: object = None  # evaluation context, not part of the value

    def __eq__(self, other):
        return (isinstance(other, TermClosure) and self.body == other.body
                and self.env == other.env and self.opts == other.opts)

    def __hash__(self):
        return hash((TermClosure, self.body, self.env, self.opts))


@dataclass(frozen=True)
class ClockClosure:
    """A clock-indexed value as data: body with one clock binder."""
    body: Tm       # binds one clock variable
    env: "Env"
    opts: int
    hint: str = "k"
    ectx: object = None

    def __eq__(self, other):
        return (isinstance(other, ClockClosure) and self.body == other.body
                and self.env == other.env and self.opts == other.opts)

    def __hash__(self):
        return hash((ClockClosure, self.body, self.env, self.opts))


@dataclass(frozen=True)
class NativeClosure:
    """An opaque built-in closure; equal only to itself."""
    tag: str
    payload: tuple
    fn: Callable  # (TimeMorphism, argument) -> Value

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class RestrictedClosure:
    mor: TimeMorphism
    inner: "Closure"


Closure = Union[TermClosure, ClockClosure, NativeClosure, RestrictedClosure]


def restrict_closure(c: Closure, sigma: TimeMorphism) -> Closure:
    if isinstance(c, TermClosure):
        return TermClosure(c.body, restrict_env(c.env, sigma), c.opts,
                           c.hint, c.ectx)
    if isinstance(c, ClockClosure):
        return ClockClosure(c.body, restrict_env(c.env, sigma), c.opts,
                            c.hint, c.ectx)
    if isinstance(c, RestrictedClosure):
        both = compose(sigma, c.mor)
        return c.inner if both.is_identity() else \
            RestrictedClosure(both, c.inner)
    return RestrictedClosure(sigma, c)


@dataclass(frozen=True)
class FunVal:
    stage: TimeObject
    clos: Closure


@dataclass(frozen=True)
class ClkFunVal:
    stage: TimeObject
    clos: Closure


@dataclass(frozen=True)
class LaterVal:
    stage: TimeObject
    atom: ClockAtom
    inner: "Value"  # at stage.decrement(atom)


@dataclass(frozen=True)
class LaterZero:
    stage: TimeObject
    atom: ClockAtom


@dataclass(frozen=True)
class ReflVal:
    stage: TimeObject


@dataclass(frozen=True)
class CodeVal:
    """A universe element: a code closure, decoded by the type evaluator."""
    stage: TimeObject
    code: Tm
    env: "Env"


Value = Union[Star, NatVal, PairVal, FunVal, ClkFunVal, LaterVal, LaterZero,
              ReflVal, CodeVal]


# ---------------------------------------------------------------------------
# Environments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmptyEnv:
    stage: TimeObject


@dataclass(frozen=True)
class ConsVal:
    parent: "Env"
    name: Name
    value: Value

    @property
    def stage(self) -> TimeObject:
        return self.parent.stage


@dataclass(frozen=True)
class ConsClock:
    parent: "Env"
    name: Name
    atom: ClockAtom

    @property
    def stage(self) -> TimeObject:
        return self.parent.stage


@dataclass(frozen=True)
class ConsTick:
    parent: "Env"
    name: Name
    clock_name: Name
    mor: TimeMorphism  # from the parent's stage into this entry's stage

    @property
    def stage(self) -> TimeObject:
        return self.mor.dst


Env = Union[EmptyEnv, ConsVal, ConsClock, ConsTick]


def cons_tick(parent: Env, name: Name, clock_name: Name,
              mor: TimeMorphism) -> ConsTick:
    """Checked tick extension: the earlier stage must keep strictly more
    ticks on the governing clock."""
    if mor.src != parent.stage:
        raise StageError("tick morphism must start at the earlier stage")
    atom = lookup_clock_atom(parent, clock_name)
    if mor.dst.budget(mor.apply(atom)) >= mor.src.budget(atom):
        raise StageError(
            f"tick entry needs strictly more budget on {atom} at the "
            f"earlier stage")
    return ConsTick(parent, name, clock_name, mor)


def env_len(env: Env) -> int:
    n = 0
    while not isinstance(env, EmptyEnv):
        n += 1
        env = env.parent
    return n


def lookup_value(env: Env, name: Name) -> Value:
    """Variable projection: entries behind a tick are restricted along it."""
    while True:
        if isinstance(env, EmptyEnv):
            raise KeyError(name)
        if isinstance(env, ConsVal):
            if env.name == name:
                return env.value
            env = env.parent
        elif isinstance(env, ConsClock):
            env = env.parent
        else:
            return restrict_value(lookup_value(env.parent, name), env.mor)


def lookup_clock_atom(env: Env, name: Name) -> ClockAtom:
    while True:
        if isinstance(env, EmptyEnv):
            raise KeyError(name)
        if isinstance(env, ConsClock):
            if env.name == name:
                return env.atom
            env = env.parent
        elif isinstance(env, ConsVal):
            env = env.parent
        else:
            return env.mor.apply(lookup_clock_atom(env.parent, name))


def resolve_clock(env: Env, ref) -> ClockAtom:
    if not isinstance(ref, CVar):
        raise ValueError(f"clock reference escaped its binder: {ref!r}")
    return lookup_clock_atom(env, ref.name)


def restrict_value(v: Value, sigma: TimeMorphism) -> Value:
    """The presheaf action on values, forward along ``sigma``."""
    if v.stage != sigma.src:
        raise StageError(f"value at {v.stage} restricted along {sigma}")
    if sigma.is_identity():
        return v
    dst = sigma.dst
    if isinstance(v, Star):
        return Star(dst)
    if isinstance(v, NatVal):
        return NatVal(dst, v.n)
    if isinstance(v, ReflVal):
        return ReflVal(dst)
    if isinstance(v, PairVal):
        return PairVal(dst, restrict_value(v.fst, sigma),
                       restrict_value(v.snd, sigma))
    if isinstance(v, FunVal):
        return FunVal(dst, restrict_closure(v.clos, sigma))
    if isinstance(v, ClkFunVal):
        return ClkFunVal(dst, restrict_closure(v.clos, sigma))
    if isinstance(v, LaterVal):
        image = sigma.apply(v.atom)
        if dst.budget(image) == 0:
            return LaterZero(dst, image)
        return LaterVal(dst, image,
                        restrict_value(v.inner, decrement_morphism(sigma, v.atom)))
    if isinstance(v, LaterZero):
        return LaterZero(dst, sigma.apply(v.atom))
    if isinstance(v, CodeVal):
        return CodeVal(dst, v.code, restrict_env(v.env, sigma))
    raise TypeError(f"not a value: {v!r}")


def restrict_env(env: Env, sigma: TimeMorphism) -> Env:
    if env.stage != sigma.src:
        raise StageError(f"environment at {env.stage} restricted along {sigma}")
    if sigma.is_identity():
        return env
    if isinstance(env, EmptyEnv):
        return EmptyEnv(sigma.dst)
    if isinstance(env, ConsVal):
        return ConsVal(restrict_env(env.parent, sigma), env.name,
                       restrict_value(env.value, sigma))
    if isinstance(env, ConsClock):
        return ConsClock(restrict_env(env.parent, sigma), env.name,
                         sigma.apply(env.atom))
    # the class representative absorbs the morphism; the earlier
    # environment is untouched
    return ConsTick(env.parent, env.name, env.clock_name,
                    compose(sigma, env.mor))


def project_env(env: Env, keep: int) -> Env:
    """Drop entries down to length ``keep``; a dropped tick entry restricts
    everything before it along its morphism."""
    n = env_len(env)
    if keep > n:
        raise ValueError(f"cannot keep {keep} of {n} entries")
    while n > keep:
        if isinstance(env, ConsTick):
            env = restrict_env(env.parent, env.mor)
        else:
            env = env.parent
        n -= 1
    return env


def split_at_tick(env: Env, name: Name) -> ConsTick:
    """Project entries above the named tick entry away, returning the
    environment whose top entry is that tick."""
    while True:
        if isinstance(env, EmptyEnv):
            raise KeyError(name)
        if isinstance(env, ConsTick):
            if env.name == name:
                return env
            env = restrict_env(env.parent, env.mor)
        else:
            env = env.parent


def env_eq_structural(a: Env, b: Env) -> bool:
    """Structural equality; function closures only compare by identity, so
    this is meant for first-order environments."""
    return a == b


def pretty_value(v: Value, plain: bool = False) -> str:
    """Right-nested tuple rendering; delayed values print transparently."""
    star = "*" if plain else "⋆"
    if isinstance(v, (Star, LaterZero)):
        return star
    if isinstance(v, NatVal):
        return str(v.n)
    if isinstance(v, LaterVal):
        return pretty_value(v.inner, plain)
    if isinstance(v, PairVal):
        return f"({pretty_value(v.fst, plain)},{pretty_value(v.snd, plain)})"
    if isinstance(v, ReflVal):
        return "refl"
    if isinstance(v, CodeVal):
        return "<code>" if plain else "⟨code⟩"
    return "<fun>" if plain else "⟨fun⟩"


from .syntax import install_cached_hash

for _cls in (Star, NatVal, PairVal, FunVal, ClkFunVal, LaterVal, LaterZero,
             ReflVal, CodeVal, TermClosure, ClockClosure, RestrictedClosure,
             EmptyEnv, ConsVal, ConsClock, ConsTick):
    install_cached_hash(_cls)
