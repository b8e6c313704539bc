"""Decidable checking for the annotated calculus.

``infer`` is total on well-typed terms because every elimination and
abstraction carries its annotation.  Conversion is weak-head normalisation
plus congruence and eta expansion; guarded fixed points unfold when applied
to a tick or to the tick constant, each unfolding spending fuel, so the
extensional unfolding equality is approximated decidably.  Identity
reflection is deliberately not a rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .names import CLOCK, TERM, TICK, Name, fresh
from .syntax import (
    AppDiamond, AppForall, AppPi, AppTick, Ast, Bound, CBound, Cirr,
    ClockEntry, CodeForall, CodeLater, CodeNat, CodePi, CodeSigma, Context,
    CVar, DefRef, Dfix, Fst, Incl, J, LamForall, LamPi, LamTick, map_refs,
    NatRec, PairSigma, Pfix, Refl, Snd, Suc, TEl, TForall, TickBound,
    TickEntry, TickVar, TId, Tirr, TLater, Tm, TNat, TPi, TSigma, TUniv, Ty,
    Var, VarEntry, Zero, close_clock, open_clock, open_tick, open_tm,
    open_tm_many,
)
from . import syntax as S
from .subst import diamond_substitute


# ---------------------------------------------------------------------------
# Judgements, errors, fuel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CtxWf:
    ctx: Context


@dataclass(frozen=True)
class TypeWf:
    ctx: Context
    ty: Ty


@dataclass(frozen=True)
class HasType:
    ctx: Context
    term: Tm
    ty: Ty


@dataclass(frozen=True)
class ConvGoal:
    ctx: Context
    lhs: Ast
    rhs: Ast


Judgement = Union[CtxWf, TypeWf, HasType, ConvGoal]


class TypeCheckError(Exception):
    def __init__(self, message: str, span=None, expected=None, found=None,
                 trace: tuple = ()):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = expected
        self.found = found
        self.trace = trace

    def with_span(self, span) -> "TypeCheckError":
        if self.span is None:
            self.span = span
        return self


@dataclass
class Fuel:
    """Bound on fixed-point unfoldings per compared position."""
    unfold_depth: int = 8


@dataclass
class _Cell:
    left: int

    def spend(self) -> bool:
        if self.left > 0:
            self.left -= 1
            return True
        return False


# ---------------------------------------------------------------------------
# Definitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Definition:
    name: str
    ty: Ty
    body: Tm
    ambient_len: int   # how much of the ambient context the body may see


@dataclass
class Defs:
    """Top-level environment: ambient clocks plus transparent definitions."""

    ambient: Context = field(default_factory=Context)
    table: dict[str, Definition] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)

    def add(self, d: Definition):
        if d.name in self.table:
            raise TypeCheckError(f"duplicate definition {d.name}")
        self.table[d.name] = d
        self.order.append(d.name)

    def add_clock(self, name: Name):
        if self.ambient.has_clock(name):
            raise TypeCheckError(f"duplicate ambient clock {name}")
        self.ambient = self.ambient.extend_clock(name)

    def body(self, name: str) -> Tm:
        return self.table[name].body

    def bodies(self) -> dict[str, Tm]:
        return {n: d.body for n, d in self.table.items()}


# ---------------------------------------------------------------------------
# Weak-head normalisation
# ---------------------------------------------------------------------------

def _shift_cset(delta: frozenset) -> frozenset:
    return frozenset(CBound(r.idx + 1) if isinstance(r, CBound) else r
                     for r in delta)


def whnf(defs: Defs, t: Tm, cell: _Cell) -> Tm:
    """Weak-head normal form; fuel exhaustion leaves fixed points in place."""
    while True:
        if isinstance(t, DefRef):
            d = defs.table.get(t.name)
            if d is None:
                return t
            t = d.body
            continue
        if isinstance(t, AppPi):
            fn = whnf(defs, t.fn, cell)
            if isinstance(fn, LamPi):
                t = open_tm(fn.body, t.arg)
                continue
            return t if fn is t.fn else AppPi(t.dom, t.cod, fn, t.arg, hint=t.hint)
        if isinstance(t, Fst):
            p = whnf(defs, t.pair, cell)
            if isinstance(p, PairSigma):
                t = p.fst
                continue
            return t if p is t.pair else Fst(t.dom, t.cod, p, hint=t.hint)
        if isinstance(t, Snd):
            p = whnf(defs, t.pair, cell)
            if isinstance(p, PairSigma):
                t = p.snd
                continue
            return t if p is t.pair else Snd(t.dom, t.cod, p, hint=t.hint)
        if isinstance(t, NatRec):
            s = whnf(defs, t.scrut, cell)
            if isinstance(s, Zero):
                t = t.base
                continue
            if isinstance(s, Suc):
                prev = NatRec(t.motive, t.base, t.step, s.arg,
                              hint=t.hint, hint_m=t.hint_m, hint_ih=t.hint_ih)
                t = open_tm_many(t.step, [prev, s.arg])
                continue
            return t if s is t.scrut else NatRec(t.motive, t.base, t.step, s,
                                                 hint=t.hint, hint_m=t.hint_m,
                                                 hint_ih=t.hint_ih)
        if isinstance(t, AppForall):
            fn = whnf(defs, t.fn, cell)
            if isinstance(fn, LamForall):
                t = open_clock(fn.body, t.arg)
                continue
            return t if fn is t.fn else AppForall(t.cod, fn, t.arg, hint=t.hint)
        if isinstance(t, AppTick):
            fn = whnf(defs, t.fn, cell)
            if isinstance(fn, LamTick):
                t = open_tick(fn.body, t.tick)
                continue
            if isinstance(fn, Dfix) and cell.spend():
                # unfolding at a tick, the judgemental face of the
                # fixed-point axiom
                t = AppPi(TLater(fn.clock, fn.ty), fn.ty, fn.fn, fn)
                continue
            return t if fn is t.fn else AppTick(t.clock, t.cod, fn, t.tick,
                                                hint=t.hint)
        if isinstance(t, AppDiamond):
            if not isinstance(t.target, CVar):
                return t
            kname = fresh(t.hint_k, CLOCK)
            fn = whnf(defs, open_clock(t.fn, CVar(kname)), cell)
            if isinstance(fn, LamTick) and fn.clock == CVar(kname):
                aname = fresh(fn.hint, TICK)
                body = open_tick(fn.body, TickVar(aname))
                t = diamond_substitute(body, aname, kname, t.target.name)
                continue
            if isinstance(fn, Dfix) and fn.clock == CVar(kname) and cell.spend():
                unfolded = AppPi(TLater(fn.clock, fn.ty), fn.ty, fn.fn, fn)
                t = S.rename_clock(unfolded, kname, t.target.name)
                continue
            closed = close_clock(fn, kname)
            return t if closed == t.fn else AppDiamond(t.cod, closed, t.target,
                                                       hint_k=t.hint_k,
                                                       hint_a=t.hint_a)
        if isinstance(t, J):
            e = whnf(defs, t.eq, cell)
            if isinstance(e, Refl):
                t = open_tm(t.base, t.lhs)
                continue
            return t if e is t.eq else J(t.ty, t.motive, t.base, t.lhs, t.rhs,
                                         e, hint_x=t.hint_x, hint_y=t.hint_y,
                                         hint_p=t.hint_p)
        if isinstance(t, Incl):
            if t.small == t.big:
                t = t.code
                continue
            c = whnf(defs, t.code, cell)
            if isinstance(c, Incl):
                t = Incl(c.small, t.big, c.code)
                continue
            if isinstance(c, CodeNat):
                return CodeNat(t.big)
            if isinstance(c, CodePi):
                return CodePi(t.big, Incl(t.small, t.big, c.dom),
                              Incl(t.small, t.big, c.cod), hint=c.hint)
            if isinstance(c, CodeSigma):
                return CodeSigma(t.big, Incl(t.small, t.big, c.dom),
                                 Incl(t.small, t.big, c.cod), hint=c.hint)
            if isinstance(c, CodeForall):
                inner_small = _shift_cset(t.small) | {CBound(0)}
                inner_big = _shift_cset(t.big) | {CBound(0)}
                return CodeForall(t.big, Incl(inner_small, inner_big, c.body),
                                  hint=c.hint)
            if isinstance(c, CodeLater):
                return CodeLater(t.big, c.clock,
                                 Incl(t.small, t.big, c.body), hint=c.hint)
            return t if c is t.code else Incl(t.small, t.big, c)
        return t


def whnf_type(defs: Defs, a: Ty, cell: _Cell) -> Ty:
    while isinstance(a, TEl):
        delta, code = a.delta, whnf(defs, a.code, cell)
        while isinstance(code, Incl):
            delta = code.small
            code = whnf(defs, code.code, cell)
        if isinstance(code, CodeNat):
            return TNat()
        if isinstance(code, CodePi):
            return TPi(TEl(delta, code.dom), TEl(delta, code.cod),
                       hint=code.hint)
        if isinstance(code, CodeSigma):
            return TSigma(TEl(delta, code.dom), TEl(delta, code.cod),
                          hint=code.hint)
        if isinstance(code, CodeForall):
            inner = _shift_cset(delta) | {CBound(0)}
            return TForall(TEl(inner, code.body), hint=code.hint)
        if isinstance(code, CodeLater):
            return TLater(code.clock, TEl(delta, code.body), hint=code.hint)
        return TEl(delta, code)
    return a


# ---------------------------------------------------------------------------
# Conversion
# ---------------------------------------------------------------------------

def conv(defs: Defs, a: Tm, b: Tm, fuel: Fuel) -> bool:
    """Algorithmic equality on terms typable at a common type.

    Sound for the model; incomplete for consequences of reflection beyond
    fixed-point unfolding.  Each compared position gets a fresh unfolding
    budget.
    """
    if a == b:
        return True
    wa = whnf(defs, a, _Cell(fuel.unfold_depth))
    wb = whnf(defs, b, _Cell(fuel.unfold_depth))
    if wa == wb:
        return True
    return _conv_whnf(defs, wa, wb, fuel)


def _conv_whnf(defs: Defs, a: Tm, b: Tm, fuel: Fuel) -> bool:
    # eta: function, pair, clock abstraction, tick abstraction
    if isinstance(a, LamPi) or isinstance(b, LamPi):
        lam, other, flip = (a, b, False) if isinstance(a, LamPi) else (b, a, True)
        if isinstance(other, LamPi):
            x = Var(fresh(a.hint, TERM))
            return conv(defs, open_tm(a.body, x), open_tm(b.body, x), fuel)
        x = Var(fresh(lam.hint, TERM))
        expanded = AppPi(lam.dom, lam.cod, other, x)
        body = open_tm(lam.body, x)
        return conv(defs, expanded, body, fuel) if flip else \
            conv(defs, body, expanded, fuel)
    if isinstance(a, PairSigma) or isinstance(b, PairSigma):
        pair, other = (a, b) if isinstance(a, PairSigma) else (b, a)
        if isinstance(other, PairSigma):
            return (conv(defs, a.fst, b.fst, fuel)
                    and conv(defs, a.snd, b.snd, fuel))
        return (conv(defs, pair.fst, Fst(pair.dom, pair.cod, other), fuel)
                and conv(defs, pair.snd, Snd(pair.dom, pair.cod, other), fuel))
    if isinstance(a, LamForall) or isinstance(b, LamForall):
        lam, other, flip = (a, b, False) if isinstance(a, LamForall) else (b, a, True)
        k = CVar(fresh(lam.hint, CLOCK))
        if isinstance(other, LamForall):
            return conv(defs, open_clock(a.body, k), open_clock(b.body, k), fuel)
        expanded = AppForall(lam.cod, other, k)
        body = open_clock(lam.body, k)
        return conv(defs, expanded, body, fuel) if flip else \
            conv(defs, body, expanded, fuel)
    if isinstance(a, LamTick) or isinstance(b, LamTick):
        lam, other, flip = (a, b, False) if isinstance(a, LamTick) else (b, a, True)
        tk = TickVar(fresh(lam.hint, TICK))
        if isinstance(other, LamTick):
            if a.clock != b.clock:
                return False
            return conv(defs, open_tick(a.body, tk), open_tick(b.body, tk), fuel)
        expanded = AppTick(lam.clock, lam.cod, other, tk)
        body = open_tick(lam.body, tk)
        return conv(defs, expanded, body, fuel) if flip else \
            conv(defs, body, expanded, fuel)

    if type(a) is not type(b):
        return False
    if isinstance(a, (Var, DefRef)):
        return a == b
    if isinstance(a, Zero):
        return True
    if isinstance(a, Suc):
        return conv(defs, a.arg, b.arg, fuel)
    if isinstance(a, NatRec):
        return (conv(defs, a.base, b.base, fuel)
                and _conv_tm_binders(defs, a.step, b.step, 2, fuel)
                and conv(defs, a.scrut, b.scrut, fuel))
    if isinstance(a, AppPi):
        return conv(defs, a.fn, b.fn, fuel) and conv(defs, a.arg, b.arg, fuel)
    if isinstance(a, (Fst, Snd)):
        return conv(defs, a.pair, b.pair, fuel)
    if isinstance(a, Refl):
        # identity proofs are unique in the model
        return True
    if isinstance(a, J):
        return (conv(defs, a.lhs, b.lhs, fuel)
                and conv(defs, a.rhs, b.rhs, fuel)
                and conv(defs, a.eq, b.eq, fuel)
                and _conv_tm_binders(defs, a.base, b.base, 1, fuel))
    if isinstance(a, AppForall):
        return a.arg == b.arg and conv(defs, a.fn, b.fn, fuel)
    if isinstance(a, AppTick):
        return a.tick == b.tick and conv(defs, a.fn, b.fn, fuel)
    if isinstance(a, AppDiamond):
        if a.target != b.target:
            return False
        k = CVar(fresh(a.hint_k, CLOCK))
        return conv(defs, open_clock(a.fn, k), open_clock(b.fn, k), fuel)
    if isinstance(a, Dfix):
        return a.clock == b.clock and conv(defs, a.fn, b.fn, fuel)
    if isinstance(a, Cirr):
        return conv(defs, a.fn, b.fn, fuel)
    if isinstance(a, (Tirr, Pfix)):
        return a.clock == b.clock and conv(defs, a.fn, b.fn, fuel)
    if isinstance(a, CodeNat):
        return a.delta == b.delta
    if isinstance(a, (CodePi, CodeSigma)):
        return (a.delta == b.delta and conv(defs, a.dom, b.dom, fuel)
                and _conv_tm_binders(defs, a.cod, b.cod, 1, fuel))
    if isinstance(a, CodeForall):
        if a.delta != b.delta:
            return False
        k = CVar(fresh(a.hint, CLOCK))
        return conv(defs, open_clock(a.body, k), open_clock(b.body, k), fuel)
    if isinstance(a, CodeLater):
        if a.delta != b.delta or a.clock != b.clock:
            return False
        tk = TickVar(fresh(a.hint, TICK))
        return conv(defs, open_tick(a.body, tk), open_tick(b.body, tk), fuel)
    if isinstance(a, Incl):
        return (a.small == b.small and a.big == b.big
                and conv(defs, a.code, b.code, fuel))
    return False


def _conv_tm_binders(defs: Defs, a: Tm, b: Tm, n: int, fuel: Fuel) -> bool:
    xs = [Var(fresh("x", TERM)) for _ in range(n)]
    return conv(defs, open_tm_many(a, xs), open_tm_many(b, xs), fuel)


def conv_type(defs: Defs, a: Ty, b: Ty, fuel: Fuel) -> bool:
    if a == b:
        return True
    wa = whnf_type(defs, a, _Cell(fuel.unfold_depth))
    wb = whnf_type(defs, b, _Cell(fuel.unfold_depth))
    if wa == wb:
        return True
    if type(wa) is not type(wb):
        return False
    if isinstance(wa, TNat):
        return True
    if isinstance(wa, (TPi, TSigma)):
        if not conv_type(defs, wa.dom, wb.dom, fuel):
            return False
        x = Var(fresh(wa.hint, TERM))
        return conv_type(defs, open_tm(wa.cod, x), open_tm(wb.cod, x), fuel)
    if isinstance(wa, TId):
        return (conv_type(defs, wa.ty, wb.ty, fuel)
                and conv(defs, wa.lhs, wb.lhs, fuel)
                and conv(defs, wa.rhs, wb.rhs, fuel))
    if isinstance(wa, TLater):
        if wa.clock != wb.clock:
            return False
        tk = TickVar(fresh(wa.hint, TICK))
        return conv_type(defs, open_tick(wa.body, tk),
                         open_tick(wb.body, tk), fuel)
    if isinstance(wa, TForall):
        k = CVar(fresh(wa.hint, CLOCK))
        return conv_type(defs, open_clock(wa.body, k),
                         open_clock(wb.body, k), fuel)
    if isinstance(wa, TUniv):
        return wa.delta == wb.delta
    if isinstance(wa, TEl):
        return wa.delta == wb.delta and conv(defs, wa.code, wb.code, fuel)
    return False


# ---------------------------------------------------------------------------
# Context and type formation
# ---------------------------------------------------------------------------

def check_ctx(defs: Defs, ctx: Context, fuel: Fuel | None = None) -> None:
    fuel = fuel or Fuel()
    seen: set[Name] = set()
    for i, e in enumerate(ctx.entries):
        if e.name in seen:
            raise TypeCheckError(f"duplicate name {e.name} in context")
        seen.add(e.name)
        prefix = Context(ctx.entries[:i])
        if isinstance(e, VarEntry):
            check_type(defs, prefix, e.ty, fuel)
        elif isinstance(e, TickEntry):
            if not prefix.has_clock(e.clock):
                raise TypeCheckError(
                    f"{e.clock} is not a clock in scope for tick {e.name}")


def check_type(defs: Defs, ctx: Context, a: Ty, fuel: Fuel) -> None:
    if isinstance(a, TNat):
        return
    if isinstance(a, (TPi, TSigma)):
        check_type(defs, ctx, a.dom, fuel)
        x = fresh(a.hint, TERM)
        check_type(defs, ctx.extend_var(x, a.dom), open_tm(a.cod, Var(x)), fuel)
        return
    if isinstance(a, TId):
        check_type(defs, ctx, a.ty, fuel)
        check(defs, ctx, a.lhs, a.ty, fuel)
        check(defs, ctx, a.rhs, a.ty, fuel)
        return
    if isinstance(a, TLater):
        kn = _clock_name(ctx, a.clock)
        tk = fresh(a.hint, TICK)
        check_type(defs, ctx.extend_tick(tk, kn),
                   open_tick(a.body, TickVar(tk)), fuel)
        return
    if isinstance(a, TForall):
        k = fresh(a.hint, CLOCK)
        check_type(defs, ctx.extend_clock(k), open_clock(a.body, CVar(k)), fuel)
        return
    if isinstance(a, TUniv):
        _check_cset(ctx, a.delta)
        return
    if isinstance(a, TEl):
        _check_cset(ctx, a.delta)
        check(defs, ctx, a.code, TUniv(a.delta), fuel)
        return
    raise TypeCheckError(f"not a type: {a!r}")


def _clock_name(ctx: Context, ref) -> Name:
    if not isinstance(ref, CVar):
        raise TypeCheckError(f"clock reference escaped its binder: {ref!r}")
    if not ctx.has_clock(ref.name):
        raise TypeCheckError(f"{ref.name} is not a clock in scope")
    return ref.name


def _check_cset(ctx: Context, delta: frozenset) -> None:
    for r in delta:
        _clock_name(ctx, r)


# ---------------------------------------------------------------------------
# Typing
# ---------------------------------------------------------------------------

def infer(defs: Defs, ctx: Context, t: Tm, fuel: Fuel) -> Ty:
    """The unique type, up to conversion, assigned by the annotated rules."""
    if isinstance(t, Var):
        ty = ctx.lookup_var(t.name)
        if ty is None:
            raise TypeCheckError(f"variable {t.name} not in scope")
        return ty
    if isinstance(t, DefRef):
        d = defs.table.get(t.name)
        if d is None:
            raise TypeCheckError(f"unknown definition {t.name}")
        return d.ty
    if isinstance(t, Bound):
        raise TypeCheckError("dangling bound variable (kernel invariant)")
    if isinstance(t, Zero):
        return TNat()
    if isinstance(t, Suc):
        check(defs, ctx, t.arg, TNat(), fuel)
        return TNat()
    if isinstance(t, NatRec):
        n = fresh(t.hint, TERM)
        check_type(defs, ctx.extend_var(n, TNat()),
                   open_tm(t.motive, Var(n)), fuel)
        check(defs, ctx, t.base, open_tm(t.motive, Zero()), fuel)
        m = fresh(t.hint_m, TERM)
        ih = fresh(t.hint_ih, TERM)
        step_ctx = ctx.extend_var(m, TNat()).extend_var(
            ih, open_tm(t.motive, Var(m)))
        check(defs, step_ctx, open_tm_many(t.step, [Var(ih), Var(m)]),
              open_tm(t.motive, Suc(Var(m))), fuel)
        check(defs, ctx, t.scrut, TNat(), fuel)
        return open_tm(t.motive, t.scrut)
    if isinstance(t, LamPi):
        check_type(defs, ctx, t.dom, fuel)
        x = fresh(t.hint, TERM)
        inner = ctx.extend_var(x, t.dom)
        cod = open_tm(t.cod, Var(x))
        check_type(defs, inner, cod, fuel)
        check(defs, inner, open_tm(t.body, Var(x)), cod, fuel)
        return TPi(t.dom, t.cod, hint=t.hint)
    if isinstance(t, AppPi):
        want = TPi(t.dom, t.cod, hint=t.hint)
        check_type(defs, ctx, want, fuel)
        got = infer(defs, ctx, t.fn, fuel)
        _require_conv_ty(defs, ctx, got, want, fuel, "function")
        check(defs, ctx, t.arg, t.dom, fuel)
        return open_tm(t.cod, t.arg)
    if isinstance(t, PairSigma):
        want = TSigma(t.dom, t.cod, hint=t.hint)
        check_type(defs, ctx, want, fuel)
        check(defs, ctx, t.fst, t.dom, fuel)
        check(defs, ctx, t.snd, open_tm(t.cod, t.fst), fuel)
        return want
    if isinstance(t, (Fst, Snd)):
        want = TSigma(t.dom, t.cod, hint=t.hint)
        check_type(defs, ctx, want, fuel)
        got = infer(defs, ctx, t.pair, fuel)
        _require_conv_ty(defs, ctx, got, want, fuel, "pair")
        if isinstance(t, Fst):
            return t.dom
        return open_tm(t.cod, Fst(t.dom, t.cod, t.pair, hint=t.hint))
    if isinstance(t, Refl):
        check_type(defs, ctx, t.ty, fuel)
        check(defs, ctx, t.arg, t.ty, fuel)
        return TId(t.ty, t.arg, t.arg)
    if isinstance(t, J):
        check_type(defs, ctx, t.ty, fuel)
        check(defs, ctx, t.lhs, t.ty, fuel)
        check(defs, ctx, t.rhs, t.ty, fuel)
        check(defs, ctx, t.eq, TId(t.ty, t.lhs, t.rhs), fuel)
        x = fresh(t.hint_x, TERM)
        y = fresh(t.hint_y, TERM)
        p = fresh(t.hint_p, TERM)
        mot_ctx = (ctx.extend_var(x, t.ty).extend_var(y, t.ty)
                   .extend_var(p, TId(t.ty, Var(x), Var(y))))
        motive = open_tm_many(t.motive, [Var(p), Var(y), Var(x)])
        check_type(defs, mot_ctx, motive, fuel)
        base_ty = open_tm_many(t.motive, [Refl(t.ty, Var(x)), Var(x), Var(x)])
        check(defs, ctx.extend_var(x, t.ty), open_tm(t.base, Var(x)),
              base_ty, fuel)
        return open_tm_many(t.motive, [t.eq, t.rhs, t.lhs])
    if isinstance(t, LamForall):
        k = fresh(t.hint, CLOCK)
        inner = ctx.extend_clock(k)
        cod = open_clock(t.cod, CVar(k))
        check_type(defs, inner, cod, fuel)
        check(defs, inner, open_clock(t.body, CVar(k)), cod, fuel)
        return TForall(t.cod, hint=t.hint)
    if isinstance(t, AppForall):
        kn = _clock_name(ctx, t.arg)
        want = TForall(t.cod, hint=t.hint)
        check_type(defs, ctx, want, fuel)
        got = infer(defs, ctx, t.fn, fuel)
        _require_conv_ty(defs, ctx, got, want, fuel, "clock abstraction")
        return open_clock(t.cod, CVar(kn))
    if isinstance(t, LamTick):
        kn = _clock_name(ctx, t.clock)
        a = fresh(t.hint, TICK)
        inner = ctx.extend_tick(a, kn)
        cod = open_tick(t.cod, TickVar(a))
        check_type(defs, inner, cod, fuel)
        check(defs, inner, open_tick(t.body, TickVar(a)), cod, fuel)
        return TLater(t.clock, t.cod, hint=t.hint)
    if isinstance(t, AppTick):
        if not isinstance(t.tick, TickVar):
            raise TypeCheckError("tick reference escaped its binder")
        split = ctx.split_at_tick(t.tick.name)
        if split is None:
            raise TypeCheckError(f"tick {t.tick.name} not in scope")
        prefix, entry, _suffix = split
        kn = _clock_name(ctx, t.clock)
        if entry.clock != kn:
            raise TypeCheckError(
                f"tick {entry.name} is on clock {entry.clock}, but the "
                f"application is annotated with {kn}")
        want = TLater(t.clock, t.cod, hint=t.hint)
        check_type(defs, prefix, want, fuel)
        try:
            got = infer(defs, prefix, t.fn, fuel)
        except TypeCheckError as err:
            if "not in scope" in err.message:
                raise TypeCheckError(
                    f"{err.message} before tick {entry.name}: a tick can "
                    f"only unpack a term typed strictly earlier",
                    span=err.span) from None
            raise
        _require_conv_ty(defs, prefix, got, want, fuel, "delayed term")
        return open_tick(t.cod, t.tick)
    if isinstance(t, AppDiamond):
        target = _clock_name(ctx, t.target)
        k = fresh(t.hint_k, CLOCK)
        inner = ctx.extend_clock(k)
        fn = open_clock(t.fn, CVar(k))
        cod_k = open_clock(t.cod, CVar(k))
        want = TLater(CVar(k), cod_k, hint=t.hint_a)
        check_type(defs, inner, want, fuel)
        got = infer(defs, inner, fn, fuel)
        _require_conv_ty(defs, inner, got, want, fuel, "delayed term")
        a = fresh(t.hint_a, TICK)
        opened = open_tick(cod_k, TickVar(a))
        return diamond_substitute(opened, a, k, target)
    if isinstance(t, Dfix):
        kn = _clock_name(ctx, t.clock)
        check_type(defs, ctx, t.ty, fuel)
        check(defs, ctx, t.fn,
              TPi(TLater(t.clock, t.ty), t.ty), fuel)
        return TLater(t.clock, t.ty)
    if isinstance(t, Cirr):
        check_type(defs, ctx, t.ty, fuel)
        want = TForall(t.ty)
        got = infer(defs, ctx, t.fn, fuel)
        _require_conv_ty(defs, ctx, got, want, fuel,
                         "clock irrelevance argument")
        return TForall(TForall(TId(
            t.ty,
            AppForall(t.ty, t.fn, CBound(1)),
            AppForall(t.ty, t.fn, CBound(0)))), hint="k'")
    if isinstance(t, Tirr):
        _clock_name(ctx, t.clock)
        check_type(defs, ctx, t.ty, fuel)
        check(defs, ctx, t.fn, TLater(t.clock, t.ty), fuel)
        return TLater(t.clock, TLater(t.clock, TId(
            t.ty,
            AppTick(t.clock, t.ty, t.fn, TickBound(1)),
            AppTick(t.clock, t.ty, t.fn, TickBound(0)))))
    if isinstance(t, Pfix):
        _clock_name(ctx, t.clock)
        check_type(defs, ctx, t.ty, fuel)
        fn_ty = TPi(TLater(t.clock, t.ty), t.ty)
        check(defs, ctx, t.fn, fn_ty, fuel)
        d = Dfix(t.clock, t.ty, t.fn)
        return TLater(t.clock, TId(
            t.ty,
            AppTick(t.clock, t.ty, d, TickBound(0)),
            AppPi(TLater(t.clock, t.ty), t.ty, t.fn, d)))
    if isinstance(t, CodeNat):
        _check_cset(ctx, t.delta)
        return TUniv(t.delta)
    if isinstance(t, (CodePi, CodeSigma)):
        _check_cset(ctx, t.delta)
        check(defs, ctx, t.dom, TUniv(t.delta), fuel)
        x = fresh(t.hint, TERM)
        check(defs, ctx.extend_var(x, TEl(t.delta, t.dom)),
              open_tm(t.cod, Var(x)), TUniv(t.delta), fuel)
        return TUniv(t.delta)
    if isinstance(t, CodeForall):
        _check_cset(ctx, t.delta)
        k = fresh(t.hint, CLOCK)
        check(defs, ctx.extend_clock(k), open_clock(t.body, CVar(k)),
              TUniv(t.delta | {CVar(k)}), fuel)
        return TUniv(t.delta)
    if isinstance(t, CodeLater):
        kn = _clock_name(ctx, t.clock)
        _check_cset(ctx, t.delta)
        if t.clock not in t.delta:
            raise TypeCheckError(
                f"clock {kn} must belong to the universe index of a "
                f"delay code")
        a = fresh(t.hint, TICK)
        check(defs, ctx.extend_tick(a, kn), open_tick(t.body, TickVar(a)),
              TUniv(t.delta), fuel)
        return TUniv(t.delta)
    if isinstance(t, Incl):
        _check_cset(ctx, t.big)
        if not t.small <= t.big:
            raise TypeCheckError(
                "universe inclusion requires the source index to be a "
                "subset of the target index")
        check(defs, ctx, t.code, TUniv(t.small), fuel)
        return TUniv(t.big)
    raise TypeCheckError(f"cannot infer a type for {t!r}")


def check(defs: Defs, ctx: Context, t: Tm, a: Ty, fuel: Fuel) -> None:
    got = infer(defs, ctx, t, fuel)
    _require_conv_ty(defs, ctx, got, a, fuel, "term")


def check_subst(defs: Defs, sigma, fuel: Fuel | None = None) -> None:
    """Validate a telescopic substitution: each former's side conditions.

    Variable payloads must have the instantiated entry type over the domain;
    clock targets must be clocks there; a tick target must be a tick on the
    image of its entry's clock; a diamond target must be a clock."""
    from .subst import SubClock, SubDiamond, SubTick, SubVar, Subst, subst_type
    fuel = fuel or Fuel()
    check_ctx(defs, sigma.dom, fuel)
    check_ctx(defs, sigma.cod, fuel)
    bodies = defs.bodies()
    cod_entries = list(sigma.cod.entries)
    pos = 0
    prefix: list = []
    clock_image: dict[Name, Name] = {}
    for e in sigma.entries:
        if isinstance(e, SubVar):
            entry = cod_entries[pos]
            if not (isinstance(entry, VarEntry) and entry.name == e.name):
                raise TypeCheckError(
                    f"substitution entry for {e.name} does not match the "
                    f"codomain telescope")
            prefix_subst = Subst(sigma.dom, Context(tuple(cod_entries[:pos])),
                                 tuple(prefix))
            want = subst_type(entry.ty, prefix_subst, bodies)
            check(defs, sigma.dom, e.term, want, fuel)
            pos += 1
        elif isinstance(e, SubClock):
            entry = cod_entries[pos]
            if not (isinstance(entry, ClockEntry) and entry.name == e.name):
                raise TypeCheckError(
                    f"substitution entry for {e.name} does not match the "
                    f"codomain telescope")
            if not sigma.dom.has_clock(e.target):
                raise TypeCheckError(f"{e.target} is not a clock in the "
                                     f"substitution domain")
            clock_image[e.name] = e.target
            pos += 1
        elif isinstance(e, SubTick):
            entry = cod_entries[pos]
            if not (isinstance(entry, TickEntry) and entry.name == e.name):
                raise TypeCheckError(
                    f"substitution entry for {e.name} does not match the "
                    f"codomain telescope")
            got = sigma.dom.lookup_tick(e.target)
            if got is None:
                raise TypeCheckError(f"{e.target} is not a tick in the "
                                     f"substitution domain")
            want_clock = clock_image.get(entry.clock, entry.clock)
            if got != want_clock:
                raise TypeCheckError(
                    f"tick {e.target} is on clock {got}, expected the image "
                    f"{want_clock} of {entry.clock}")
            pos += 1
        else:
            entry = cod_entries[pos]
            tick_entry = cod_entries[pos + 1] if pos + 1 < len(cod_entries) \
                else None
            if not (isinstance(entry, ClockEntry) and entry.name == e.clock
                    and isinstance(tick_entry, TickEntry)
                    and tick_entry.name == e.tick
                    and tick_entry.clock == e.clock):
                raise TypeCheckError(
                    "diamond substitution entry must close a clock and the "
                    "tick over it")
            if not sigma.dom.has_clock(e.target):
                raise TypeCheckError(f"{e.target} is not a clock in the "
                                     f"substitution domain")
            clock_image[e.clock] = e.target
            pos += 2
        prefix.append(e)
    if pos != len(cod_entries):
        raise TypeCheckError("substitution does not cover its codomain")


def normalize(defs: Defs, t, fuel: Fuel | None = None):
    """Deep normal form under a single global unfolding budget.

    Binders are opened with fresh names before descending, so every reduced
    position is locally closed; the shared budget keeps unfolding of nested
    fixed points finite."""
    import dataclasses
    fuel = fuel or Fuel()
    cell = _Cell(fuel.unfold_depth)

    def _is_ty(x) -> bool:
        return isinstance(x, (TNat, TPi, TSigma, TId, TLater, TForall,
                              TUniv, TEl))

    def norm(x):
        x = whnf_type(defs, x, cell) if _is_ty(x) else whnf(defs, x, cell)
        cls = type(x)
        changes = {}
        for fname, inc in S._CHILDREN.get(cls, ()):
            child = getattr(x, fname)
            tms = [fresh("x", TERM) for _ in range(inc[0])]
            cks = [fresh("k", CLOCK) for _ in range(inc[1])]
            tks = [fresh("a", TICK) for _ in range(inc[2])]
            opened = open_tm_many(child, [Var(n) for n in tms]) if tms else child
            for k in cks:
                opened = open_clock(opened, CVar(k))
            for a in tks:
                opened = open_tick(opened, TickVar(a))
            new = norm(opened)
            for a in reversed(tks):
                new = S.close_tick(new, a)
            for k in reversed(cks):
                new = close_clock(new, k)
            if tms:
                new = S.close_tm_many(new, tms)
            if new != child:
                changes[fname] = new
        return dataclasses.replace(x, **changes) if changes else x

    return norm(t)


def _require_conv_ty(defs: Defs, ctx: Context, got: Ty, want: Ty,
                     fuel: Fuel, what: str) -> None:
    if conv_type(defs, got, want, fuel):
        return
    from .pretty import pretty
    cell_g, cell_w = _Cell(fuel.unfold_depth), _Cell(fuel.unfold_depth)
    raise TypeCheckError(
        f"{what} has type {pretty(whnf_type(defs, got, cell_g))}, "
        f"expected {pretty(whnf_type(defs, want, cell_w))} "
        f"(not convertible within fuel {fuel.unfold_depth})",
        expected=want, found=got,
        trace=(ConvGoal(ctx, got, want),))
