"""Executable denotational evaluation at concrete finite stages.

``eval_term`` computes the interpretation of a well-typed term in an
environment at a stage; evaluation is total.  Guarded fixed points are
computed by recursion on the remaining budget of their clock.  Application
to the tick constant adjoins a fresh semantic clock with one more tick than
the target clock, evaluates under it, and merges it away again; the fresh
budget is the least legal one, and independence from that choice is a
tested property, not an assumption.

``eval_type`` produces semantic type descriptors supporting membership-style
enumeration and the bounded observational equality ``value_eq`` used as the
oracle by every soundness suite.  Equality on function values is checked
pointwise over enumerated arguments and budget-spending morphisms, and is
an approximation: full extensional equality of number-indexed functions is
not decidable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .names import CLOCK, TERM, TICK, Name, fresh
from .stages import (
    ClockAllocator, ClockAtom, TimeMorphism, TimeObject, identity,
    tick_morphism,
)
from . import syntax as S
from .syntax import (
    AppDiamond, AppForall, AppPi, AppTick, CVar, Cirr, CodeForall, CodeLater,
    CodeNat, CodePi, CodeSigma, DefRef, Dfix, Fst, Incl, J, LamForall, LamPi,
    LamTick, NatRec, PairSigma, Pfix, Refl, Snd, Suc, TEl, TForall, TickVar,
    TId, Tirr, TLater, Tm, TNat, TPi, TSigma, TUniv, Ty, Var, Zero,
    open_clock, open_tick, open_tm,
)
from .typecheck import Defs, open_tm_many
from .values import (
    ClkFunVal, ClockClosure, CodeVal, ConsClock, ConsTick, ConsVal,
    EmptyEnv, Env, FunVal, LaterVal, LaterZero, NatVal, NativeClosure,
    PairVal, ReflVal, RestrictedClosure, Star, TermClosure, Value,
    lookup_clock_atom, lookup_value, project_env, resolve_clock,
    restrict_env, restrict_value, split_at_tick,
)
from .stages import compose


@dataclass
class EvalCtx:
    """Evaluation context: definitions plus the fresh-clock allocator.

    ``diamond_extra`` widens the budget of the fresh clock adjoined when
    eliminating with the tick constant; the default is the minimum."""

    defs: Defs
    alloc: ClockAllocator = field(default_factory=ClockAllocator)
    diamond_extra: int = 0
    def_cache: dict = field(default_factory=dict)


def kripke_apply(v: FunVal, sigma: TimeMorphism, arg: Value) -> Value:
    """Apply a function value under a stage morphism."""
    c = v.clos
    while isinstance(c, RestrictedClosure):
        sigma = compose(sigma, c.mor)
        c = c.inner
    if isinstance(c, TermClosure):
        x = fresh(c.hint, TERM)
        return eval_term(c.ectx, open_tm(c.body, Var(x)),
                         ConsVal(restrict_env(c.env, sigma), x, arg))
    return c.fn(sigma, arg)


def kripke_apply_clock(v: ClkFunVal, sigma: TimeMorphism,
                       atom: ClockAtom) -> Value:
    c = v.clos
    while isinstance(c, RestrictedClosure):
        sigma = compose(sigma, c.mor)
        c = c.inner
    if isinstance(c, ClockClosure):
        k = fresh(c.hint, CLOCK)
        return eval_term(c.ectx, open_clock(c.body, CVar(k)),
                         ConsClock(restrict_env(c.env, sigma), k, atom))
    return c.fn(sigma, atom)


def apply_fun(v: Value, arg: Value) -> Value:
    return kripke_apply(v, identity(v.stage), arg)


def apply_clock(v: Value, atom: ClockAtom) -> Value:
    return kripke_apply_clock(v, identity(v.stage), atom)


def _later_refl(stage: TimeObject, atom: ClockAtom, wraps: int) -> Value:
    if wraps == 0:
        return ReflVal(stage)
    if stage.budget(atom) == 0:
        return LaterZero(stage, atom)
    return LaterVal(stage, atom,
                    _later_refl(stage.decrement(atom), atom, wraps - 1))


def dfix_eval(ectx: EvalCtx, fun: Value, atom: ClockAtom) -> Value:
    """The guarded fixed point, by recursion on the ticks remaining."""
    stage = fun.stage
    if stage.budget(atom) == 0:
        return LaterZero(stage, atom)
    tick = tick_morphism(stage, atom)
    earlier = restrict_value(fun, tick)
    prev = dfix_eval(ectx, earlier, atom)
    return LaterVal(stage, atom, apply_fun(earlier, prev))


def diamond_env(ectx: EvalCtx, cc: ConsClock, tick_hint: str = "a") -> ConsTick:
    """The substitution of the tick constant for a fresh tick over the
    topmost clock entry: adjoin a fresh clock with one more tick than the
    target, push it as the clock value, and wrap with the merge morphism."""
    stage = cc.stage
    target = cc.atom
    n = stage.budget(target)
    lam = ectx.alloc.fresh(target.label)
    while lam in stage.atoms:
        lam = ectx.alloc.fresh(target.label)
    ext = stage.extend(lam, n + 1 + ectx.diamond_extra)
    iota = TimeMorphism.of(stage, ext, {a: a for a in stage.atoms})
    inner = ConsClock(restrict_env(cc.parent, iota), cc.name, lam)
    merge_map = {a: a for a in stage.atoms}
    merge_map[lam] = target
    merge = TimeMorphism.of(ext, stage, merge_map)
    return ConsTick(inner, fresh(tick_hint, TICK), cc.name, merge)


def _consume_tick(ectx: EvalCtx, fn: Tm, tick_env: ConsTick) -> Value:
    """Eliminate a delayed value at a tick entry: evaluate the function at
    the earlier environment and carry its guts over the entry's morphism
    between the decremented source and the current stage."""
    inner_env = tick_env.parent
    atom = lookup_clock_atom(inner_env, tick_env.clock_name)
    v = eval_term(ectx, fn, inner_env)
    if not isinstance(v, LaterVal):
        raise ValueError(f"tick applied to a non-delayed value {v!r}")
    carried = TimeMorphism(inner_env.stage.decrement(atom),
                           tick_env.mor.dst, tick_env.mor.mapping)
    return restrict_value(v.inner, carried)


def eval_term(ectx: EvalCtx, t: Tm, env: Env) -> Value:
    stage = env.stage
    if isinstance(t, Var):
        return lookup_value(env, t.name)
    if isinstance(t, DefRef):
        d = ectx.defs.table[t.name]
        base = project_env(env, d.ambient_len)
        key = (t.name, base)
        got = ectx.def_cache.get(key)
        if got is None:
            got = eval_term(ectx, d.body, base)
            ectx.def_cache[key] = got
        return got
    if isinstance(t, Zero):
        return NatVal(stage, 0)
    if isinstance(t, Suc):
        v = eval_term(ectx, t.arg, env)
        return NatVal(stage, v.n + 1)
    if isinstance(t, NatRec):
        scrut = eval_term(ectx, t.scrut, env)
        m = fresh(t.hint_m, TERM)
        ih = fresh(t.hint_ih, TERM)
        step = open_tm_many(t.step, [Var(ih), Var(m)])
        acc = eval_term(ectx, t.base, env)
        for i in range(scrut.n):
            env_i = ConsVal(ConsVal(env, m, NatVal(stage, i)), ih, acc)
            acc = eval_term(ectx, step, env_i)
        return acc
    if isinstance(t, LamPi):
        return FunVal(stage, TermClosure(t.body, env, ectx.diamond_extra,
                                         t.hint, ectx))
    if isinstance(t, AppPi):
        v = eval_term(ectx, t.fn, env)
        return apply_fun(v, eval_term(ectx, t.arg, env))
    if isinstance(t, PairSigma):
        return PairVal(stage, eval_term(ectx, t.fst, env),
                       eval_term(ectx, t.snd, env))
    if isinstance(t, Fst):
        return eval_term(ectx, t.pair, env).fst
    if isinstance(t, Snd):
        return eval_term(ectx, t.pair, env).snd
    if isinstance(t, Refl):
        return ReflVal(stage)
    if isinstance(t, J):
        x = fresh(t.hint_x, TERM)
        eval_term(ectx, t.eq, env)  # total; forces the proof
        lhs = eval_term(ectx, t.lhs, env)
        return eval_term(ectx, open_tm(t.base, Var(x)),
                         ConsVal(env, x, lhs))
    if isinstance(t, LamForall):
        return ClkFunVal(stage, ClockClosure(t.body, env, ectx.diamond_extra,
                                             t.hint, ectx))
    if isinstance(t, AppForall):
        v = eval_term(ectx, t.fn, env)
        return apply_clock(v, resolve_clock(env, t.arg))
    if isinstance(t, LamTick):
        atom = resolve_clock(env, t.clock)
        if stage.budget(atom) == 0:
            return LaterZero(stage, atom)
        a = fresh(t.hint, TICK)
        tick_env = ConsTick(env, a, t.clock.name, tick_morphism(stage, atom))
        inner = eval_term(ectx, open_tick(t.body, TickVar(a)), tick_env)
        return LaterVal(stage, atom, inner)
    if isinstance(t, AppTick):
        tick_env = split_at_tick(env, t.tick.name)
        return _consume_tick(ectx, t.fn, tick_env)
    if isinstance(t, AppDiamond):
        atom = resolve_clock(env, t.target)
        k = fresh(t.hint_k, CLOCK)
        denv = diamond_env(ectx, ConsClock(env, k, atom), t.hint_a)
        return _consume_tick(ectx, open_clock(t.fn, CVar(k)), denv)
    if isinstance(t, Dfix):
        atom = resolve_clock(env, t.clock)
        return dfix_eval(ectx, eval_term(ectx, t.fn, env), atom)
    if isinstance(t, Cirr):
        def inner(sigma2, _a2):
            return ReflVal(sigma2.dst)

        def outer(sigma, _atom):
            return ClkFunVal(sigma.dst,
                             NativeClosure("cirr-inner", (), inner))
        return ClkFunVal(stage, NativeClosure("cirr", (), outer))
    if isinstance(t, Tirr):
        return _later_refl(stage, resolve_clock(env, t.clock), 2)
    if isinstance(t, Pfix):
        return _later_refl(stage, resolve_clock(env, t.clock), 1)
    if isinstance(t, (CodeNat, CodePi, CodeSigma, CodeForall, CodeLater)):
        return CodeVal(stage, t, env)
    if isinstance(t, Incl):
        # inclusions are invisible to decoding
        return eval_term(ectx, t.code, env)
    raise ValueError(f"cannot evaluate {t!r}")


# ---------------------------------------------------------------------------
# Semantic types
# ---------------------------------------------------------------------------

@dataclass
class SNat:
    stage: TimeObject


@dataclass
class SUnitLater:
    stage: TimeObject
    atom: ClockAtom


@dataclass
class SLater:
    stage: TimeObject
    atom: ClockAtom
    inner: Callable  # () -> SemType at the decremented stage


@dataclass
class SPair:
    stage: TimeObject
    fst: "SemType"
    snd: Callable  # Value -> SemType


@dataclass
class SPi:
    stage: TimeObject
    dom: Callable  # TimeMorphism -> SemType at its target
    cod: Callable  # (TimeMorphism, Value) -> SemType at its target


@dataclass
class SClkPi:
    stage: TimeObject
    body: Callable  # (TimeMorphism, ClockAtom) -> SemType at its target


@dataclass
class SId:
    stage: TimeObject
    ty: "SemType"
    lhs: Value
    rhs: Value


@dataclass
class SU:
    stage: TimeObject
    atoms: frozenset


SemType = object


def eval_type(ectx: EvalCtx, a: Ty, env: Env) -> SemType:
    stage = env.stage
    if isinstance(a, TNat):
        return SNat(stage)
    if isinstance(a, TPi):
        x = fresh(a.hint, TERM)
        cod = open_tm(a.cod, Var(x))
        dom_ast = a.dom
        return SPi(
            stage,
            dom=lambda sigma: eval_type(ectx, dom_ast,
                                        restrict_env(env, sigma)),
            cod=lambda sigma, v: eval_type(
                ectx, cod, ConsVal(restrict_env(env, sigma), x, v)))
    if isinstance(a, TSigma):
        x = fresh(a.hint, TERM)
        cod = open_tm(a.cod, Var(x))
        return SPair(stage, eval_type(ectx, a.dom, env),
                     snd=lambda v: eval_type(ectx, cod, ConsVal(env, x, v)))
    if isinstance(a, TId):
        return SId(stage, eval_type(ectx, a.ty, env),
                   eval_term(ectx, a.lhs, env), eval_term(ectx, a.rhs, env))
    if isinstance(a, TLater):
        atom = resolve_clock(env, a.clock)
        if stage.budget(atom) == 0:
            return SUnitLater(stage, atom)
        tk = fresh(a.hint, TICK)
        body = open_tick(a.body, TickVar(tk))
        tick_env = ConsTick(env, tk, a.clock.name, tick_morphism(stage, atom))
        return SLater(stage, atom,
                      inner=lambda: eval_type(ectx, body, tick_env))
    if isinstance(a, TForall):
        k = fresh(a.hint, CLOCK)
        body = open_clock(a.body, CVar(k))
        return SClkPi(stage, body=lambda sigma, atom: eval_type(
            ectx, body, ConsClock(restrict_env(env, sigma), k, atom)))
    if isinstance(a, TUniv):
        return SU(stage, frozenset(resolve_clock(env, r) for r in a.delta))
    if isinstance(a, TEl):
        return decode_code(ectx, eval_term(ectx, a.code, env))
    raise ValueError(f"cannot evaluate the type {a!r}")


def decode_code(ectx: EvalCtx, v: Value) -> SemType:
    """Decode a universe element into the semantic type it names."""
    if not isinstance(v, CodeVal):
        raise ValueError(f"decoding a non-code value {v!r}")
    code, env, stage = v.code, v.env, v.stage
    if isinstance(code, CodeNat):
        return SNat(stage)
    if isinstance(code, (CodePi, CodeSigma)):
        x = fresh(code.hint, TERM)
        cod = open_tm(code.cod, Var(x))
        dom_ast = code.dom
        if isinstance(code, CodePi):
            return SPi(
                stage,
                dom=lambda sigma: decode_code(ectx, eval_term(
                    ectx, dom_ast, restrict_env(env, sigma))),
                cod=lambda sigma, w: decode_code(ectx, eval_term(
                    ectx, cod, ConsVal(restrict_env(env, sigma), x, w))))
        return SPair(
            stage, decode_code(ectx, eval_term(ectx, dom_ast, env)),
            snd=lambda w: decode_code(ectx, eval_term(
                ectx, cod, ConsVal(env, x, w))))
    if isinstance(code, CodeForall):
        k = fresh(code.hint, CLOCK)
        body = open_clock(code.body, CVar(k))
        return SClkPi(stage, body=lambda sigma, atom: decode_code(
            ectx, eval_term(ectx, body,
                            ConsClock(restrict_env(env, sigma), k, atom))))
    if isinstance(code, CodeLater):
        atom = resolve_clock(env, code.clock)
        if stage.budget(atom) == 0:
            return SUnitLater(stage, atom)
        tk = fresh(code.hint, TICK)
        body = open_tick(code.body, TickVar(tk))
        tick_env = ConsTick(env, tk, code.clock.name,
                            tick_morphism(stage, atom))
        return SLater(stage, atom,
                      inner=lambda: decode_code(
                          ectx, eval_term(ectx, body, tick_env)))
    if isinstance(code, Incl):
        return decode_code(ectx, eval_term(ectx, code.code, env))
    raise ValueError(f"stuck code {code!r}")


# ---------------------------------------------------------------------------
# Observational equality and bounded enumeration
# ---------------------------------------------------------------------------

@dataclass
class EqConfig:
    depth: int = 4        # natural-number arguments sampled 0..depth
    samples: int = 24     # cap on enumerated values per position
    fresh_budget: int = 2  # budget of the fresh clock probed at clock types


# function carriers are sampled coarsely: a few choice functions suffice to
# exercise restriction and application without exponential blowup
_FN_WIDTH = 2


def _probe_morphisms(stage: TimeObject) -> list[TimeMorphism]:
    """Identity plus one tick per clock: budget-spending probes under which
    function values are compared; deeper stages are reached recursively."""
    out = [identity(stage)]
    for atom in stage.atoms:
        if stage.budget(atom) > 0:
            out.append(tick_morphism(stage, atom))
    return out


def value_eq(ectx: EvalCtx, v: Value, w: Value, ty: SemType,
             cfg: EqConfig | None = None) -> bool:
    """Observational equality of two values of the same semantic type."""
    cfg = cfg or EqConfig()
    if isinstance(ty, SNat):
        return v.n == w.n
    if isinstance(ty, (SUnitLater, SId)):
        return True  # at most one element
    if isinstance(ty, SLater):
        if isinstance(v, LaterZero) or isinstance(w, LaterZero):
            return isinstance(v, LaterZero) and isinstance(w, LaterZero)
        return value_eq(ectx, v.inner, w.inner, ty.inner(), cfg)
    if isinstance(ty, SPair):
        return (value_eq(ectx, v.fst, w.fst, ty.fst, cfg)
                and value_eq(ectx, v.snd, w.snd, ty.snd(v.fst), cfg))
    if isinstance(ty, SPi):
        if v == w:
            return True
        for sigma in _probe_morphisms(ty.stage):
            dom = ty.dom(sigma)
            for arg in itertools.islice(
                    enumerate_values(ectx, dom, cfg), cfg.samples):
                if not value_eq(ectx, kripke_apply(v, sigma, arg),
                                kripke_apply(w, sigma, arg),
                                ty.cod(sigma, arg), cfg):
                    return False
        return True
    if isinstance(ty, SClkPi):
        if v == w:
            return True
        ident = identity(ty.stage)
        for atom in ty.stage.atoms:
            if not value_eq(ectx, kripke_apply_clock(v, ident, atom),
                            kripke_apply_clock(w, ident, atom),
                            ty.body(ident, atom), cfg):
                return False
        lam = ectx.alloc.fresh("_q")
        while lam in ty.stage.atoms:
            lam = ectx.alloc.fresh("_q")
        ext = ty.stage.extend(lam, cfg.fresh_budget)
        iota = TimeMorphism.of(ty.stage, ext, {a: a for a in ty.stage.atoms})
        return value_eq(ectx, kripke_apply_clock(v, iota, lam),
                        kripke_apply_clock(w, iota, lam),
                        ty.body(iota, lam), cfg)
    if isinstance(ty, SU):
        return sem_type_eq(ectx, decode_code(ectx, v), decode_code(ectx, w),
                           cfg)
    raise ValueError(f"no equality at {ty!r}")


def sem_type_eq(ectx: EvalCtx, s: SemType, t: SemType,
                cfg: EqConfig | None = None) -> bool:
    """Pointwise equality of semantic type descriptors, to the same bounds
    as :func:`value_eq`."""
    cfg = cfg or EqConfig()
    if type(s) is not type(t):
        return False
    if isinstance(s, SNat):
        return True
    if isinstance(s, SUnitLater):
        return s.atom == t.atom
    if isinstance(s, SLater):
        return s.atom == t.atom and sem_type_eq(ectx, s.inner(), t.inner(), cfg)
    if isinstance(s, SPair):
        if not sem_type_eq(ectx, s.fst, t.fst, cfg):
            return False
        return all(sem_type_eq(ectx, s.snd(v), t.snd(v), cfg)
                   for v in itertools.islice(
                       enumerate_values(ectx, s.fst, cfg), cfg.samples))
    if isinstance(s, SPi):
        ident = identity(s.stage)
        if not sem_type_eq(ectx, s.dom(ident), t.dom(ident), cfg):
            return False
        return all(sem_type_eq(ectx, s.cod(ident, v), t.cod(ident, v), cfg)
                   for v in itertools.islice(
                       enumerate_values(ectx, s.dom(ident), cfg),
                       cfg.samples))
    if isinstance(s, SClkPi):
        ident = identity(s.stage)
        for atom in s.stage.atoms:
            if not sem_type_eq(ectx, s.body(ident, atom),
                               t.body(ident, atom), cfg):
                return False
        lam = ectx.alloc.fresh("_q")
        ext = s.stage.extend(lam, cfg.fresh_budget)
        iota = TimeMorphism.of(s.stage, ext, {a: a for a in s.stage.atoms})
        return sem_type_eq(ectx, s.body(iota, lam), t.body(iota, lam), cfg)
    if isinstance(s, SId):
        return (sem_type_eq(ectx, s.ty, t.ty, cfg)
                and value_eq(ectx, s.lhs, t.lhs, s.ty, cfg)
                and value_eq(ectx, s.rhs, t.rhs, s.ty, cfg))
    if isinstance(s, SU):
        return s.atoms == t.atoms
    raise ValueError(f"no equality between {s!r} and {t!r}")


def enumerate_values(ectx: EvalCtx, ty: SemType,
                     cfg: EqConfig | None = None) -> Iterator[Value]:
    """Bounded enumeration of a semantic type's carrier.

    Function carriers are sampled through constant closures over the first
    argument's codomain, enough to exercise restriction round-trips."""
    cfg = cfg or EqConfig()
    if isinstance(ty, SNat):
        for i in range(cfg.depth + 1):
            yield NatVal(ty.stage, i)
        return
    if isinstance(ty, SUnitLater):
        yield LaterZero(ty.stage, ty.atom)
        return
    if isinstance(ty, SLater):
        inner = ty.inner()
        for v in enumerate_values(ectx, inner, cfg):
            yield LaterVal(ty.stage, ty.atom, v)
        return
    if isinstance(ty, SPair):
        for v in itertools.islice(enumerate_values(ectx, ty.fst, cfg),
                                  cfg.samples):
            for w in itertools.islice(enumerate_values(ectx, ty.snd(v), cfg),
                                      cfg.samples):
                yield PairVal(ty.stage, v, w)
        return
    if isinstance(ty, SId):
        if value_eq(ectx, ty.lhs, ty.rhs, ty.ty, cfg):
            yield ReflVal(ty.stage)
        return
    if isinstance(ty, SPi):
        ident = identity(ty.stage)
        args = list(itertools.islice(
            enumerate_values(ectx, ty.dom(ident), cfg), 1))
        if not args:
            return
        width = len(list(itertools.islice(
            enumerate_values(ectx, ty.cod(ident, args[0]), cfg),
            _FN_WIDTH)))
        for i in range(width):
            fn = (lambda sigma, arg, _i=i, _ty=ty:
                  _choice(ectx, _ty.cod(sigma, arg), _i, cfg))
            yield FunVal(ty.stage, NativeClosure("choice", (i,), fn))
        return
    if isinstance(ty, SClkPi):
        if not ty.stage.atoms:
            return
        ident = identity(ty.stage)
        atom0 = next(iter(ty.stage.atoms))
        width = len(list(itertools.islice(
            enumerate_values(ectx, ty.body(ident, atom0), cfg),
            _FN_WIDTH)))
        for i in range(width):
            fn = (lambda sigma, atom, _i=i, _ty=ty:
                  _choice(ectx, _ty.body(sigma, atom), _i, cfg))
            yield ClkFunVal(ty.stage, NativeClosure("clock-choice", (i,), fn))
        return
    if isinstance(ty, SU):
        return
    raise ValueError(f"cannot enumerate {ty!r}")


def _choice(ectx: EvalCtx, ty: SemType, i: int, cfg: EqConfig) -> Value:
    """The i-th carrier element, used as a pointwise choice function when
    sampling function types; falls back on earlier elements when the carrier
    shrinks across stages."""
    got = list(itertools.islice(enumerate_values(ectx, ty, cfg), i + 1))
    if not got:
        return Star(ty.stage)
    return got[min(i, len(got) - 1)]


# ---------------------------------------------------------------------------
# Interpreting substitutions as environment transformers
# ---------------------------------------------------------------------------

def apply_subst_env(ectx: EvalCtx, sigma, env: Env) -> Env:
    """The environment morphism a telescopic substitution denotes.

    Variable and clock payloads evaluate in the domain environment; a tick
    entry locates its target tick there and re-wraps the interpreted prefix
    with that representative's morphism; a diamond entry interprets the
    prefix, pushes the target clock, and wraps via the fresh-clock
    construction."""
    from .subst import SubClock, SubDiamond, SubTick, SubVar

    def go(entries, at: Env) -> Env:
        if not entries:
            return EmptyEnv(at.stage)
        e = entries[-1]
        rest = entries[:-1]
        if isinstance(e, SubVar):
            return ConsVal(go(rest, at), e.name, eval_term(ectx, e.term, at))
        if isinstance(e, SubClock):
            return ConsClock(go(rest, at), e.name,
                             lookup_clock_atom(at, e.target))
        if isinstance(e, SubTick):
            tick_env = split_at_tick(at, e.target)
            return ConsTick(go(rest, tick_env.parent), e.name,
                            _cod_tick_clock(sigma, e), tick_env.mor)
        if isinstance(e, SubDiamond):
            cc = ConsClock(go(rest, at), e.clock,
                           lookup_clock_atom(at, e.target))
            denv = diamond_env(ectx, cc, e.tick.text)
            return ConsTick(denv.parent, e.tick, denv.clock_name, denv.mor)
        raise TypeError(f"not a substitution entry: {e!r}")

    return go(list(sigma.entries), env)


def _cod_tick_clock(sigma, entry) -> Name:
    clock = sigma.cod.lookup_tick(entry.name)
    if clock is None:
        raise ValueError(f"substitution codomain lacks tick {entry.name}")
    return clock


# ---------------------------------------------------------------------------
# Entry points over checked programs
# ---------------------------------------------------------------------------

def ambient_env(defs: Defs, stage: TimeObject, upto: int | None = None) -> Env:
    """Environment for the ambient clock context, matching clocks to stage
    atoms by label."""
    by_label = {a.label: a for a in stage.atoms}
    env: Env = EmptyEnv(stage)
    entries = defs.ambient.entries if upto is None else defs.ambient.entries[:upto]
    for e in entries:
        atom = by_label.get(e.name.text)
        if atom is None:
            raise ValueError(
                f"stage does not provide the ambient clock {e.name.text}")
        env = ConsClock(env, e.name, atom)
    return env


def evaluate_def(defs: Defs, name: str, stage: TimeObject,
                 ectx: EvalCtx | None = None) -> Value:
    """Evaluate a checked definition at a stage."""
    ectx = ectx or EvalCtx(defs)
    d = defs.table[name]
    env = ambient_env(defs, stage, upto=d.ambient_len)
    return eval_term(ectx, d.body, env)
