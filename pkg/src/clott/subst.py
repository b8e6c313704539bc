"""Telescopic substitutions and their action on types and terms.

A :class:`Subst` has one entry per codomain assumption (the diamond former
covers a clock assumption and the tick over it at once).  The action is
capture-avoiding by construction: binders are nameless, payloads are locally
closed.  Composition is realized by action, never stored.

The interesting clause is tick application under a tick-to-diamond entry,
which rewrites to a diamond application with an explicit clock binder; when
several clauses could apply, the tick-to-diamond one takes precedence.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, replace
from typing import Union

from .names import CLOCK, Name, fresh
from .syntax import (
    _CHILDREN, _CLOCK_FIELDS, _SET_FIELDS, _TICK_FIELDS,
    AppDiamond, AppTick, Ast, Bound, CBound, ClockEntry, Context, CVar,
    DefRef, TickBound, TickEntry, TickVar, Tm, Ty, Var, VarEntry,
    close_clock, free_clocks, free_term_vars, free_ticks,
)


class ScopeError(Exception):
    """A substituted expression mentions a name outside the codomain."""


@dataclass(frozen=True)
class SubVar:
    name: Name   # codomain term variable
    term: Tm     # payload over the domain


@dataclass(frozen=True)
class SubClock:
    name: Name   # codomain clock
    target: Name  # domain clock


@dataclass(frozen=True)
class SubTick:
    name: Name   # codomain tick
    target: Name  # domain tick


@dataclass(frozen=True)
class SubDiamond:
    """Maps a codomain clock to a domain clock and the tick over it to the
    tick constant at that clock."""
    clock: Name
    tick: Name
    target: Name  # domain clock


SubEntry = Union[SubVar, SubClock, SubTick, SubDiamond]


@dataclass(frozen=True)
class Subst:
    """A substitution from ``dom`` to ``cod``: expressions over the codomain
    are carried to expressions over the domain."""

    dom: Context
    cod: Context
    entries: tuple[SubEntry, ...] = ()

    def extend_var(self, name: Name, term: Tm, ty: Ty) -> "Subst":
        return Subst(self.dom, self.cod.extend_var(name, ty),
                     self.entries + (SubVar(name, term),))

    def extend_clock(self, name: Name, target: Name) -> "Subst":
        return Subst(self.dom, self.cod.extend_clock(name),
                     self.entries + (SubClock(name, target),))

    def extend_tick(self, name: Name, clock: Name, target: Name) -> "Subst":
        return Subst(self.dom, self.cod.extend_tick(name, clock),
                     self.entries + (SubTick(name, target),))

    def extend_diamond(self, clock: Name, tick: Name, target: Name) -> "Subst":
        cod = self.cod.extend_clock(clock).extend_tick(tick, clock)
        return Subst(self.dom, cod, self.entries + (SubDiamond(clock, tick, target),))


def identity_subst(ctx: Context) -> Subst:
    """The identity substitution on ``ctx``."""
    entries: list[SubEntry] = []
    for e in ctx.entries:
        if isinstance(e, VarEntry):
            entries.append(SubVar(e.name, Var(e.name)))
        elif isinstance(e, ClockEntry):
            entries.append(SubClock(e.name, e.name))
        else:
            entries.append(SubTick(e.name, e.name))
    return Subst(ctx, ctx, tuple(entries))


def weaken(sigma: Subst, suffix: Context) -> Subst:
    """Precompose with the projection that forgets ``suffix``.

    On named payloads the weakening embedding is the identity, so only the
    recorded domain changes; tick entries absorb the new assumptions into
    their trailing telescope, the other formers take weakened payloads.
    """
    clash = sigma.dom.names() & suffix.names()
    if clash:
        raise ScopeError(f"weakening rebinds {sorted(str(n) for n in clash)}")
    return Subst(Context(sigma.dom.entries + suffix.entries),
                 sigma.cod, sigma.entries)


# ---------------------------------------------------------------------------
# Action
# ---------------------------------------------------------------------------

@dataclass
class _Maps:
    terms: dict
    clocks: dict
    ticks: dict
    diamonds: dict   # tick name -> (codomain clock name, domain target clock)
    strict: bool
    defs: dict | None  # name -> locally closed body, for transparent unfolding


def _maps_of(sigma: Subst, strict: bool, defs) -> _Maps:
    terms, clocks, ticks, diamonds = {}, {}, {}, {}
    for e in sigma.entries:
        if isinstance(e, SubVar):
            terms[e.name] = e.term
        elif isinstance(e, SubClock):
            clocks[e.name] = e.target
        elif isinstance(e, SubTick):
            ticks[e.name] = e.target
        else:
            clocks[e.clock] = e.target
            diamonds[e.tick] = (e.clock, e.target)
    return _Maps(terms, clocks, ticks, diamonds, strict, defs)


def _clock_ref(r, m: _Maps):
    if isinstance(r, CBound):
        return r
    got = m.clocks.get(r.name)
    if got is not None:
        return CVar(got)
    if m.strict:
        raise ScopeError(f"clock {r.name} not covered by substitution")
    return r


def _tick_ref(r, m: _Maps):
    if isinstance(r, TickBound):
        return r
    got = m.ticks.get(r.name)
    if got is not None:
        return TickVar(got)
    if m.strict:
        raise ScopeError(f"tick {r.name} not covered by substitution")
    return r


def _def_touched(body: Ast, m: _Maps) -> bool:
    for n in free_term_vars(body):
        t = m.terms.get(n)
        if t is not None and t != Var(n):
            return True
        if t is None and m.strict:
            raise ScopeError(f"variable {n} not covered by substitution")
    for n in free_clocks(body):
        c = m.clocks.get(n)
        if c is not None and c != n:
            return True
        if c is None and m.strict:
            raise ScopeError(f"clock {n} not covered by substitution")
    for n in free_ticks(body):
        if n in m.diamonds or (n in m.ticks and m.ticks[n] != n):
            return True
    return False


def _apply(x: Ast, m: _Maps) -> Ast:
    if isinstance(x, Var):
        got = m.terms.get(x.name)
        if got is not None:
            return got
        if m.strict:
            raise ScopeError(f"variable {x.name} not covered by substitution")
        return x
    if isinstance(x, Bound):
        return x
    if isinstance(x, DefRef):
        if m.defs is not None:
            body = m.defs.get(x.name)
            if body is not None and _def_touched(body, m):
                return _apply(body, m)
        return x
    if isinstance(x, AppTick) and isinstance(x.tick, TickVar) \
            and x.tick.name in m.diamonds:
        # Tick-constant clause: rewrite the application to an explicit-binder
        # diamond application, rebinding the governing clock in fn and cod.
        cod_clock, target = m.diamonds[x.tick.name]
        if x.clock != CVar(cod_clock):
            raise ScopeError(
                f"tick {x.tick.name} substituted by the tick constant but the "
                f"application is annotated with a different clock")
        rebound = fresh(cod_clock.text, CLOCK)
        m2 = dataclasses.replace(
            m,
            clocks={**m.clocks, cod_clock: rebound},
            diamonds={k: v for k, v in m.diamonds.items() if k != x.tick.name},
        )
        fn2 = _apply(x.fn, m2)
        cod2 = _apply(x.cod, m2)
        return AppDiamond(cod=close_clock(cod2, rebound),
                          fn=close_clock(fn2, rebound),
                          target=CVar(target),
                          hint_k=cod_clock.text, hint_a=x.hint)
    # generic structural case
    cls = type(x)
    changes = {}
    for fname, _inc in _CHILDREN.get(cls, ()):
        child = getattr(x, fname)
        new = _apply(child, m)
        if new is not child:
            changes[fname] = new
    for fname in _CLOCK_FIELDS.get(cls, ()):
        ref = getattr(x, fname)
        new = _clock_ref(ref, m)
        if new is not ref:
            changes[fname] = new
    for fname in _TICK_FIELDS.get(cls, ()):
        ref = getattr(x, fname)
        new = _tick_ref(ref, m)
        if new is not ref:
            changes[fname] = new
    for fname in _SET_FIELDS.get(cls, ()):
        refs = getattr(x, fname)
        new = frozenset(_clock_ref(r, m) for r in refs)
        if new != refs:
            changes[fname] = new
    return replace(x, **changes) if changes else x


def subst_term(t: Tm, sigma: Subst, defs=None) -> Tm:
    """Apply ``sigma`` to a term over its codomain context."""
    return _apply(t, _maps_of(sigma, strict=True, defs=defs))


def subst_type(a: Ty, sigma: Subst, defs=None) -> Ty:
    """Apply ``sigma`` to a type; distributes over the type structure and
    renames clocks inside universe indices."""
    return _apply(a, _maps_of(sigma, strict=True, defs=defs))


def single_subst(x: Ast, name: Name, payload: Tm) -> Ast:
    """Substitute one free term variable, leaving everything else alone."""
    return _apply(x, _Maps({name: payload}, {}, {}, {}, False, None))


def diamond_substitute(x: Ast, tick: Name, clock: Name, target: Name,
                       defs=None) -> Ast:
    """The simultaneous substitution of the tick constant at ``target`` for
    ``tick`` and of ``target`` for ``clock``, identity elsewhere."""
    m = _Maps({}, {clock: target}, {}, {tick: (clock, target)}, False, defs)
    return _apply(x, m)


def compose_subst(sigma: Subst, tau: Subst, defs=None) -> Subst:
    """``sigma`` after ``tau``, computed by applying ``sigma`` to the
    payloads of ``tau``.

    When ``sigma`` sends a tick payload of ``tau`` to the tick constant the
    composite entry merges with the adjacent clock entry into a diamond
    former; any other escape from the telescope discipline is an error.
    """
    m = _maps_of(sigma, strict=True, defs=defs)
    out: list[SubEntry] = []
    for e in tau.entries:
        if isinstance(e, SubVar):
            out.append(SubVar(e.name, _apply(e.term, m)))
        elif isinstance(e, SubClock):
            got = m.clocks.get(e.target)
            if got is None:
                raise ScopeError(f"clock {e.target} not covered by substitution")
            out.append(SubClock(e.name, got))
        elif isinstance(e, SubTick):
            if e.target in m.ticks:
                out.append(SubTick(e.name, m.ticks[e.target]))
            elif e.target in m.diamonds:
                _cod_clock, target = m.diamonds[e.target]
                prev = out[-1] if out else None
                tick_clock = tau.cod.lookup_tick(e.name)
                if not (isinstance(prev, SubClock) and prev.name == tick_clock
                        and prev.target == target):
                    raise ScopeError(
                        "composite substitution leaves the telescope fragment")
                out[-1] = SubDiamond(prev.name, e.name, target)
            else:
                raise ScopeError(f"tick {e.target} not covered by substitution")
        else:
            got = m.clocks.get(e.target)
            if got is None:
                raise ScopeError(f"clock {e.target} not covered by substitution")
            out.append(SubDiamond(e.clock, e.tick, got))
    return Subst(sigma.dom, tau.cod, tuple(out))
