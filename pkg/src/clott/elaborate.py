"""Elaboration of surface pre-syntax into the annotated core.

Bidirectional: eliminations and annotated abstractions infer, everything
else checks against an expected type.  Elaboration inserts every annotation
the typing rules demand, so its output always passes the kernel checker.

Surface ``t[<>]`` rebinds the clock that guards the inferred type of ``t``;
the explicit form ``t [k.][<> k']`` lets the source spell the binder when
that default is not intended.  Type definitions are expanded eagerly and
never reach the core.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .lexer import Span
from .names import CLOCK, TERM, TICK, Name, fresh, user
from . import parser as P
from . import syntax as S
from .syntax import (
    AppDiamond, AppForall, AppPi, AppTick, CVar, Cirr, CodeForall, CodeLater,
    CodeNat, CodePi, CodeSigma, Context, DefRef, Dfix, Fst, Incl, J,
    LamForall, LamPi, LamTick, NatRec, PairSigma, Pfix, Refl, Snd, Suc, TEl,
    TForall, TickVar, TId, Tirr, TLater, Tm, TNat, TPi, TSigma, TUniv, Ty,
    Var, Zero, close_clock, close_tick, close_tm, close_tm_many, nat_lit,
    open_clock, open_tick, open_tm, rename_clock, uses_bound_clock,
    uses_bound_tick, uses_bound_tm,
)
from .typecheck import (
    Definition, Defs, Fuel, TypeCheckError, _Cell, check, check_type, conv,
    conv_type, infer, open_tm_many, whnf_type,
)
from .pretty import pretty


@dataclass(frozen=True)
class ElabEnv:
    defs: Defs
    tydefs: dict
    ctx: Context
    scope: tuple  # (surface text, kind, Name) per context entry
    fuel: Fuel

    def lookup(self, text: str):
        for t, kind, name in reversed(self.scope):
            if t == text:
                return kind, name
        return None

    def _pick(self, text: str, kind: str) -> Name:
        name = user(text, kind)
        if name in self.ctx.names():
            name = fresh(text, kind)
        return name

    def bind_var(self, text: str, ty: Ty):
        name = self._pick(text, TERM)
        return replace(self, ctx=self.ctx.extend_var(name, ty),
                       scope=self.scope + ((text, "var", name),)), name

    def bind_clock(self, text: str):
        name = self._pick(text, CLOCK)
        return replace(self, ctx=self.ctx.extend_clock(name),
                       scope=self.scope + ((text, "clock", name),)), name

    def bind_tick(self, text: str, clock: Name):
        name = self._pick(text, TICK)
        return replace(self, ctx=self.ctx.extend_tick(name, clock),
                       scope=self.scope + ((text, "tick", name),)), name

    def truncate_before_tick(self, tick: Name) -> "ElabEnv":
        for i, e in enumerate(self.ctx.entries):
            if isinstance(e, S.TickEntry) and e.name == tick:
                return replace(self, ctx=Context(self.ctx.entries[:i]),
                               scope=self.scope[:i])
        raise ValueError(f"tick {tick} not in context")

    def resolve_clock(self, text: str, span: Span) -> Name:
        got = self.lookup(text)
        if got is None or got[0] != "clock":
            raise TypeCheckError(f"{text} is not a clock in scope", span=span)
        return got[1]


def _spanned(span: Span):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if isinstance(exc, TypeCheckError):
                exc.with_span(span)
            return False
    return _Ctx()


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

def elaborate_type(env: ElabEnv, st: P.SType) -> Ty:
    with _spanned(st.span):
        return _elab_type(env, st)


def _elab_type(env: ElabEnv, st: P.SType) -> Ty:
    if isinstance(st, P.STName):
        if st.text in env.tydefs:
            return env.tydefs[st.text]
        got = env.lookup(st.text)
        if got is not None:
            raise TypeCheckError(f"{st.text} is a {got[0]}, not a type",
                                 span=st.span)
        raise TypeCheckError(f"unknown type {st.text}", span=st.span)
    if isinstance(st, P.STNat):
        return TNat()
    if isinstance(st, P.STPi):
        dom = elaborate_type(env, st.dom)
        if st.var is None:
            return TPi(dom, _elab_type(env, st.cod))
        env2, x = env.bind_var(st.var, dom)
        cod = elaborate_type(env2, st.cod)
        return TPi(dom, close_tm(cod, x), hint=st.var)
    if isinstance(st, P.STSigma):
        dom = elaborate_type(env, st.dom)
        if st.var is None:
            return TSigma(dom, _elab_type(env, st.cod))
        env2, x = env.bind_var(st.var, dom)
        cod = elaborate_type(env2, st.cod)
        return TSigma(dom, close_tm(cod, x), hint=st.var)
    if isinstance(st, P.STId):
        ty = elaborate_type(env, st.ty)
        lhs = elab_check(env, st.lhs, ty)
        rhs = elab_check(env, st.rhs, ty)
        return TId(ty, lhs, rhs)
    if isinstance(st, P.STLater):
        kn = env.resolve_clock(st.clock, st.span)
        if st.tick is None:
            return TLater(CVar(kn), _elab_type(env, st.body))
        env2, a = env.bind_tick(st.tick, kn)
        body = elaborate_type(env2, st.body)
        return TLater(CVar(kn), close_tick(body, a), hint=st.tick)
    if isinstance(st, P.STForall):
        env2, k = env.bind_clock(st.clock)
        body = elaborate_type(env2, st.body)
        return TForall(close_clock(body, k), hint=st.clock)
    if isinstance(st, P.STUniv):
        return TUniv(_cset(env, st.clocks, st.span))
    if isinstance(st, P.STEl):
        delta = _cset(env, st.clocks, st.span)
        code = elab_check(env, st.code, TUniv(delta))
        return TEl(delta, code)
    raise TypeCheckError(f"unhandled surface type {st!r}", span=st.span)


def _cset(env: ElabEnv, names, span) -> frozenset:
    return frozenset(CVar(env.resolve_clock(n, span)) for n in names)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

def elab_infer(env: ElabEnv, s: P.STerm) -> tuple[Tm, Ty]:
    with _spanned(s.span):
        return _infer(env, s)


def elab_check(env: ElabEnv, s: P.STerm, want: Ty) -> Tm:
    with _spanned(s.span):
        return _check(env, s, want)


def _whnf_ty(env: ElabEnv, a: Ty) -> Ty:
    return whnf_type(env.defs, a, _Cell(env.fuel.unfold_depth))


def _infer(env: ElabEnv, s: P.STerm) -> tuple[Tm, Ty]:
    if isinstance(s, P.SName):
        got = env.lookup(s.text)
        if got is not None:
            kind, name = got
            if kind == "var":
                return Var(name), env.ctx.lookup_var(name)
            raise TypeCheckError(f"{s.text} is a {kind}, not a term",
                                 span=s.span)
        if s.text in env.defs.table:
            return DefRef(s.text), env.defs.table[s.text].ty
        if s.text in env.tydefs:
            raise TypeCheckError(f"{s.text} is a type, not a term",
                                 span=s.span)
        raise TypeCheckError(f"unknown identifier {s.text}", span=s.span)
    if isinstance(s, P.SNum):
        return nat_lit(s.value), TNat()
    if isinstance(s, P.SSuc):
        arg = elab_check(env, s.arg, TNat())
        return Suc(arg), TNat()
    if isinstance(s, P.SNatRec):
        env_n, n = env.bind_var(s.var, TNat())
        motive_open = elaborate_type(env_n, s.motive)
        motive = close_tm(motive_open, n)
        base = elab_check(env, s.base, open_tm(motive, Zero()))
        env_m, m = env.bind_var(s.pred, TNat())
        env_i, ih = env_m.bind_var(s.ih, open_tm(motive, Var(m)))
        step_open = elab_check(env_i, s.step, open_tm(motive, Suc(Var(m))))
        step = close_tm_many(step_open, [ih, m])
        scrut = elab_check(env, s.scrut, TNat())
        node = NatRec(motive, base, step, scrut, hint=s.var,
                      hint_m=s.pred, hint_ih=s.ih)
        return node, open_tm(motive, scrut)
    if isinstance(s, P.SLam):
        binder = s.binders[0]
        if binder.annot is None:
            raise TypeCheckError(
                "cannot infer the type of an unannotated abstraction",
                span=binder.span)
        first = binder.names[0]
        if len(binder.names) > 1:
            rest: P.STerm = P.SLam(
                (P.SBinder(binder.names[1:], binder.annot, binder.span),)
                + s.binders[1:], s.body, s.span)
        elif len(s.binders) > 1:
            rest = P.SLam(s.binders[1:], s.body, s.span)
        else:
            rest = s.body
        return _infer_lam_one(env, first, binder, rest, s)
    if isinstance(s, P.SClockLam):
        name = s.clocks[0]
        rest = (P.SClockLam(s.clocks[1:], s.body, s.span)
                if len(s.clocks) > 1 else s.body)
        env2, k = env.bind_clock(name)
        body, bty = elab_infer(env2, rest)
        return (LamForall(close_clock(bty, k), close_clock(body, k), hint=name),
                TForall(close_clock(bty, k), hint=name))
    if isinstance(s, P.SApp):
        fn, fty = elab_infer(env, s.fn)
        w = _whnf_ty(env, fty)
        if not isinstance(w, TPi):
            raise TypeCheckError(
                f"cannot apply a term of type {pretty(w)}", span=s.span)
        arg = elab_check(env, s.arg, w.dom)
        return AppPi(w.dom, w.cod, fn, arg, hint=w.hint), open_tm(w.cod, arg)
    if isinstance(s, P.SProj):
        pair, pty = elab_infer(env, s.arg)
        w = _whnf_ty(env, pty)
        if not isinstance(w, TSigma):
            raise TypeCheckError(
                f"cannot project from a term of type {pretty(w)}", span=s.span)
        if s.which == "fst":
            return Fst(w.dom, w.cod, pair, hint=w.hint), w.dom
        node = Snd(w.dom, w.cod, pair, hint=w.hint)
        return node, open_tm(w.cod, Fst(w.dom, w.cod, pair, hint=w.hint))
    if isinstance(s, P.SPair):
        fst, a = elab_infer(env, s.fst)
        snd, b = elab_infer(env, s.snd)
        return PairSigma(a, b, fst, snd), TSigma(a, b)
    if isinstance(s, P.SAnnot):
        ty = elaborate_type(env, s.ty)
        check_type(env.defs, env.ctx, ty, env.fuel)
        return elab_check(env, s.term, ty), ty
    if isinstance(s, P.SRefl):
        arg, ty = elab_infer(env, s.arg)
        return Refl(ty, arg), TId(ty, arg, arg)
    if isinstance(s, P.SJ):
        eq, ety = elab_infer(env, s.eq)
        w = _whnf_ty(env, ety)
        if not isinstance(w, TId):
            raise TypeCheckError(
                f"J expects an identity proof, got {pretty(w)}", span=s.span)
        env_x, x = env.bind_var(s.x, w.ty)
        env_y, y = env_x.bind_var(s.y, w.ty)
        env_p, p = env_y.bind_var(s.p, TId(w.ty, Var(x), Var(y)))
        motive_open = elaborate_type(env_p, s.motive)
        motive = close_tm_many(motive_open, [p, y, x])
        env_b, bx = env.bind_var(s.bx, w.ty)
        base_ty = open_tm_many(motive, [Refl(w.ty, Var(bx)), Var(bx), Var(bx)])
        base_open = elab_check(env_b, s.base, base_ty)
        base = close_tm(base_open, bx)
        node = J(w.ty, motive, base, w.lhs, w.rhs, eq,
                 hint_x=s.x, hint_y=s.y, hint_p=s.p)
        return node, open_tm_many(motive, [eq, w.rhs, w.lhs])
    if isinstance(s, P.SBrack):
        got = env.lookup(s.arg)
        if got is None:
            raise TypeCheckError(f"{s.arg} is not in scope", span=s.span)
        kind, name = got
        if kind == "clock":
            fn, fty = elab_infer(env, s.fn)
            w = _whnf_ty(env, fty)
            if not isinstance(w, TForall):
                raise TypeCheckError(
                    f"cannot apply a term of type {pretty(w)} to a clock",
                    span=s.span)
            return (AppForall(w.body, fn, CVar(name), hint=w.hint),
                    open_clock(w.body, CVar(name)))
        if kind == "tick":
            tick_clock = env.ctx.lookup_tick(name)
            prefix = env.truncate_before_tick(name)
            try:
                fn, fty = elab_infer(prefix, s.fn)
            except TypeCheckError as err:
                if "unknown identifier" in err.message or "not in scope" in err.message:
                    raise TypeCheckError(
                        f"{err.message} (it is not available before tick "
                        f"{s.arg}: a tick unpacks only terms typed strictly "
                        f"earlier)", span=err.span or s.span) from None
                raise
            w = _whnf_ty(prefix, fty)
            if not isinstance(w, TLater):
                raise TypeCheckError(
                    f"cannot apply a term of type {pretty(w)} to a tick",
                    span=s.span)
            if w.clock != CVar(tick_clock):
                raise TypeCheckError(
                    f"tick {s.arg} is on clock {tick_clock}, but the term "
                    f"delays on {pretty_clock(w.clock)}", span=s.span)
            return (AppTick(w.clock, w.body, fn, TickVar(name), hint=w.hint),
                    open_tick(w.body, TickVar(name)))
        raise TypeCheckError(f"{s.arg} is a {kind}; expected a tick or clock",
                             span=s.span)
    if isinstance(s, P.SDiamondApp):
        fn, fty = elab_infer(env, s.fn)
        w = _whnf_ty(env, fty)
        if not isinstance(w, TLater) or not isinstance(w.clock, CVar):
            raise TypeCheckError(
                f"the tick constant eliminates a delay type, got {pretty(w)}",
                span=s.span)
        kappa = w.clock.name
        rebound = fresh(kappa.text, CLOCK)
        fn2 = rename_clock(fn, kappa, rebound)
        cod2 = rename_clock(w.body, kappa, rebound)
        node = AppDiamond(close_clock(cod2, rebound),
                          close_clock(fn2, rebound),
                          CVar(kappa), hint_k=kappa.text, hint_a=w.hint)
        try:
            ty = infer(env.defs, env.ctx, node, env.fuel)
        except TypeCheckError as err:
            raise TypeCheckError(
                f"tick constant not allowed here: the clock {kappa} guarding "
                f"the delayed term cannot be rebound ({err.message})",
                span=s.span) from None
        return node, ty
    if isinstance(s, P.SDiamondExplicit):
        target = env.resolve_clock(s.target, s.span)
        env2, k = env.bind_clock(s.binder)
        fn, fty = elab_infer(env2, s.fn)
        w = _whnf_ty(env2, fty)
        if not isinstance(w, TLater) or w.clock != CVar(k):
            raise TypeCheckError(
                f"the delayed term must be guarded by the bound clock "
                f"{s.binder}, got {pretty(w)}", span=s.span)
        node = AppDiamond(close_clock(w.body, k), close_clock(fn, k),
                          CVar(target), hint_k=s.binder, hint_a=w.hint)
        return node, infer(env.defs, env.ctx, node, env.fuel)
    if isinstance(s, P.SFix):
        fn, fty = elab_infer(env, s.arg)
        kn = env.resolve_clock(s.clock, s.span)
        w = _whnf_ty(env, fty)
        if not (isinstance(w, TPi) and not uses_bound_tm(w.cod)):
            raise TypeCheckError(
                "a fixed point needs a non-dependent function "
                f"from a delay, got {pretty(w)}", span=s.span)
        a = w.cod
        want_fn = TPi(TLater(CVar(kn), a), a)
        if not conv_type(env.defs, w, want_fn, env.fuel):
            raise TypeCheckError(
                f"fixed point argument has type {pretty(w)}, "
                f"expected {pretty(want_fn)}", span=s.span)
        node = AppPi(TLater(CVar(kn), a), a, fn, Dfix(CVar(kn), a, fn))
        return node, a
    if isinstance(s, P.SDfix):
        fn, fty = elab_infer(env, s.arg)
        kn = env.resolve_clock(s.clock, s.span)
        w = _whnf_ty(env, fty)
        if not (isinstance(w, TPi) and not uses_bound_tm(w.cod)):
            raise TypeCheckError(
                "dfix needs a non-dependent function from a delay, "
                f"got {pretty(w)}", span=s.span)
        a = w.cod
        want_fn = TPi(TLater(CVar(kn), a), a)
        if not conv_type(env.defs, w, want_fn, env.fuel):
            raise TypeCheckError(
                f"dfix argument has type {pretty(w)}, expected "
                f"{pretty(want_fn)}", span=s.span)
        node = Dfix(CVar(kn), a, fn)
        return node, TLater(CVar(kn), a)
    if isinstance(s, P.SAxiom):
        fn, fty = elab_infer(env, s.arg)
        w = _whnf_ty(env, fty)
        if s.which == "cirr":
            if not isinstance(w, TForall):
                raise TypeCheckError(
                    f"cirr expects a clock abstraction, got {pretty(w)}",
                    span=s.span)
            if uses_bound_clock(w.body):
                raise TypeCheckError(
                    "cirr needs the quantified clock absent from the body "
                    "type", span=s.span)
            node = Cirr(w.body, fn)
        elif s.which == "tirr":
            if not isinstance(w, TLater) or uses_bound_tick(w.body):
                raise TypeCheckError(
                    f"tirr expects a tick-independent delayed term, got "
                    f"{pretty(w)}", span=s.span)
            node = Tirr(w.clock, w.body, fn)
        else:
            ok = (isinstance(w, TPi) and not uses_bound_tm(w.cod))
            if ok:
                wd = _whnf_ty(env, w.dom)
                ok = (isinstance(wd, TLater) and not uses_bound_tick(wd.body)
                      and conv_type(env.defs, wd.body, w.cod, env.fuel))
            if not ok:
                raise TypeCheckError(
                    f"pfix expects a guarded recursive map, got {pretty(w)}",
                    span=s.span)
            node = Pfix(wd.clock, w.cod, fn)
        return node, infer(env.defs, env.ctx, node, env.fuel)
    if isinstance(s, P.SIncl):
        small = _cset(env, s.small, s.span)
        big = _cset(env, s.big, s.span)
        if not small <= big:
            raise TypeCheckError(
                "universe inclusion requires the source clocks to be a "
                "subset of the target clocks", span=s.span)
        code = elab_check(env, s.code, TUniv(small))
        return Incl(small, big, code), TUniv(big)
    if isinstance(s, (P.SCodeNat, P.SCodePi, P.SCodeSigma, P.SCodeForall,
                      P.SCodeLater)):
        raise TypeCheckError(
            "a universe code needs an expected universe; ascribe it with "
            "(code : U{...})", span=s.span)
    raise TypeCheckError(f"unhandled surface term {s!r}", span=s.span)


def _infer_lam_one(env: ElabEnv, name: str, binder: P.SBinder, rest, s):
    """One annotated lambda binder in inference mode."""
    annot = binder.annot
    if isinstance(annot, P.STName):
        got = env.lookup(annot.text)
        if got is not None and got[0] == "clock":
            env2, a = env.bind_tick(name, got[1])
            body, bty = elab_infer(env2, rest)
            cod = close_tick(bty, a)
            return (LamTick(CVar(got[1]), cod, close_tick(body, a), hint=name),
                    TLater(CVar(got[1]), cod, hint=name))
    dom = elaborate_type(env, annot)
    env2, x = env.bind_var(name, dom)
    body, bty = elab_infer(env2, rest)
    cod = close_tm(bty, x)
    return (LamPi(dom, cod, close_tm(body, x), hint=name),
            TPi(dom, cod, hint=name))


def pretty_clock(ref) -> str:
    return str(ref.name) if isinstance(ref, CVar) else f"^{ref.idx}"


def _check(env: ElabEnv, s: P.STerm, want: Ty) -> Tm:
    w = _whnf_ty(env, want)
    if isinstance(s, P.SLam):
        binder = s.binders[0]
        names = binder.names
        first = names[0]
        if len(names) > 1:
            rest: P.STerm = P.SLam(
                (P.SBinder(names[1:], binder.annot, binder.span),)
                + s.binders[1:], s.body, s.span)
        elif len(s.binders) > 1:
            rest = P.SLam(s.binders[1:], s.body, s.span)
        else:
            rest = s.body
        annot = binder.annot
        if annot is not None and isinstance(annot, P.STName):
            got = env.lookup(annot.text)
            if got is not None and got[0] == "clock":
                if not (isinstance(w, TLater) and w.clock == CVar(got[1])):
                    raise TypeCheckError(
                        f"tick abstraction on clock {annot.text} cannot have "
                        f"type {pretty(w)}", span=s.span)
                env2, a = env.bind_tick(first, got[1])
                body = elab_check(env2, rest, open_tick(w.body, TickVar(a)))
                return LamTick(w.clock, w.body, close_tick(body, a), hint=first)
        if isinstance(w, TPi):
            if annot is not None:
                dom = elaborate_type(env, annot)
                if not conv_type(env.defs, dom, w.dom, env.fuel):
                    raise TypeCheckError(
                        f"binder annotation {pretty(dom)} does not match the "
                        f"expected domain {pretty(w.dom)}", span=binder.span)
            env2, x = env.bind_var(first, w.dom)
            body = elab_check(env2, rest, open_tm(w.cod, Var(x)))
            return LamPi(w.dom, w.cod, close_tm(body, x), hint=first)
        if isinstance(w, TLater) and annot is None:
            if not isinstance(w.clock, CVar):
                raise TypeCheckError("delay clock escaped its binder",
                                     span=s.span)
            env2, a = env.bind_tick(first, w.clock.name)
            body = elab_check(env2, rest, open_tick(w.body, TickVar(a)))
            return LamTick(w.clock, w.body, close_tick(body, a), hint=first)
        if isinstance(w, TForall) and annot is None:
            env2, k = env.bind_clock(first)
            body = elab_check(env2, rest, open_clock(w.body, CVar(k)))
            return LamForall(w.body, close_clock(body, k), hint=first)
        raise TypeCheckError(
            f"an abstraction cannot have type {pretty(w)}", span=s.span)
    if isinstance(s, P.SClockLam):
        if not isinstance(w, TForall):
            raise TypeCheckError(
                f"a clock abstraction cannot have type {pretty(w)}",
                span=s.span)
        name = s.clocks[0]
        rest = (P.SClockLam(s.clocks[1:], s.body, s.span)
                if len(s.clocks) > 1 else s.body)
        env2, k = env.bind_clock(name)
        body = elab_check(env2, rest, open_clock(w.body, CVar(k)))
        return LamForall(w.body, close_clock(body, k), hint=name)
    if isinstance(s, P.SPair) and isinstance(w, TSigma):
        fst = elab_check(env, s.fst, w.dom)
        snd = elab_check(env, s.snd, open_tm(w.cod, fst))
        return PairSigma(w.dom, w.cod, fst, snd, hint=w.hint)
    if isinstance(s, P.SRefl) and isinstance(w, TId):
        arg = elab_check(env, s.arg, w.ty)
        if not conv(env.defs, arg, w.lhs, env.fuel):
            raise TypeCheckError(
                "refl must prove an equation about its argument", span=s.span)
        if not conv(env.defs, w.lhs, w.rhs, env.fuel):
            raise TypeCheckError(
                f"refl proves only definitional equalities; "
                f"{pretty(w.lhs)} and {pretty(w.rhs)} are not convertible "
                f"within fuel {env.fuel.unfold_depth}", span=s.span)
        return Refl(w.ty, w.lhs)
    if isinstance(s, P.SFix):
        kn = env.resolve_clock(s.clock, s.span)
        fn_ty = TPi(TLater(CVar(kn), want), want)
        fn = elab_check(env, s.arg, fn_ty)
        return AppPi(TLater(CVar(kn), want), want, fn,
                     Dfix(CVar(kn), want, fn))
    if isinstance(s, P.SDfix):
        kn = env.resolve_clock(s.clock, s.span)
        if not (isinstance(w, TLater) and not uses_bound_tick(w.body)):
            raise TypeCheckError(
                f"dfix produces a tick-independent delay, not {pretty(w)}",
                span=s.span)
        if w.clock != CVar(kn):
            raise TypeCheckError(
                f"dfix on clock {s.clock} cannot have type {pretty(w)}",
                span=s.span)
        a = w.body
        fn = elab_check(env, s.arg, TPi(TLater(CVar(kn), a), a))
        return Dfix(CVar(kn), a, fn)
    if isinstance(w, TUniv):
        delta = w.delta
        if isinstance(s, P.SCodeNat):
            return CodeNat(delta)
        if isinstance(s, (P.SCodePi, P.SCodeSigma)):
            cls = CodePi if isinstance(s, P.SCodePi) else CodeSigma
            dom = elab_check(env, s.dom, TUniv(delta))
            if s.var is None:
                cod = elab_check(env, s.cod, TUniv(delta))
                return cls(delta, dom, cod)
            env2, x = env.bind_var(s.var, TEl(delta, dom))
            cod = elab_check(env2, s.cod, TUniv(delta))
            return cls(delta, dom, close_tm(cod, x), hint=s.var)
        if isinstance(s, P.SCodeForall):
            env2, k = env.bind_clock(s.clock)
            body = elab_check(env2, s.body, TUniv(delta | {CVar(k)}))
            return CodeForall(delta, close_clock(body, k), hint=s.clock)
        if isinstance(s, P.SCodeLater):
            kn = env.resolve_clock(s.clock, s.span)
            if CVar(kn) not in delta:
                raise TypeCheckError(
                    f"delay code on clock {s.clock} needs that clock in the "
                    f"universe index {pretty(TUniv(delta))}", span=s.span)
            env2, a = env.bind_tick(s.tick, kn)
            body = elab_check(env2, s.body, TUniv(delta))
            return CodeLater(delta, CVar(kn), close_tick(body, a), hint=s.tick)
    got_tm, got_ty = elab_infer(env, s)
    if not conv_type(env.defs, got_ty, want, env.fuel):
        raise TypeCheckError(
            f"term has type {pretty(_whnf_ty(env, got_ty))}, expected "
            f"{pretty(w)} (not convertible within fuel "
            f"{env.fuel.unfold_depth})",
            span=s.span, expected=want, found=got_ty)
    return got_tm


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass
class DeclReport:
    name: str
    ok: bool
    message: str = ""
    span: Span | None = None
    kind: str = "def"   # "def" | "clock" | "type"


@dataclass
class Program:
    defs: Defs
    tydefs: dict
    reports: list[DeclReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


def _desugar_params(decl: P.DefDecl, env: ElabEnv):
    """Fold parameter telescopes into the annotation and the body."""
    annot = decl.annot
    body = decl.body_term
    for p in reversed(decl.params):
        for name in reversed(p.names):
            if p.annot == "clock":
                annot = P.STForall(name, annot, p.span)
                body = P.SClockLam((name,), body, p.span)
            elif (isinstance(p.annot, P.STName)
                  and (got := env.lookup(p.annot.text)) is not None
                  and got[0] == "clock"):
                annot = P.STLater(name, p.annot.text, annot, p.span)
                body = P.SLam((P.SBinder((name,), p.annot, p.span),),
                              body, p.span)
            else:
                annot = P.STPi(name, p.annot, annot, p.span)
                body = P.SLam((P.SBinder((name,), p.annot, p.span),),
                              body, p.span)
    return annot, body


def typecheck_file(decls: list[P.SurfaceDecl], fuel: Fuel | None = None,
                   with_k0: bool = False) -> Program:
    """Elaborate and check a file top to bottom, threading definitions."""
    fuel = fuel or Fuel()
    defs = Defs()
    tydefs: dict[str, Ty] = {}
    scope: list[tuple[str, str, Name]] = []
    if with_k0:
        k0 = user("k0", CLOCK)
        defs.add_clock(k0)
        scope.append(("k0", "clock", k0))
    prog = Program(defs, tydefs)
    for decl in decls:
        env = ElabEnv(defs, tydefs, defs.ambient, tuple(scope), fuel)
        if isinstance(decl, P.ClockDecl):
            try:
                if env.lookup(decl.name) is not None:
                    raise TypeCheckError(f"{decl.name} is already bound",
                                         span=decl.span)
                name = user(decl.name, CLOCK)
                defs.add_clock(name)
                scope.append((decl.name, "clock", name))
                prog.reports.append(DeclReport(decl.name, True, kind="clock"))
            except TypeCheckError as err:
                prog.reports.append(DeclReport(
                    decl.name, False, err.message, err.span or decl.span,
                    kind="clock"))
            continue
        try:
            if (decl.name in defs.table or decl.name in tydefs
                    or env.lookup(decl.name) is not None):
                raise TypeCheckError(f"{decl.name} is already defined",
                                     span=decl.span)
            if decl.is_type_def:
                if decl.params:
                    raise TypeCheckError(
                        "type definitions take no parameters", span=decl.span)
                ty = elaborate_type(env, decl.body_type)
                check_type(defs, defs.ambient, ty, fuel)
                tydefs[decl.name] = ty
                prog.reports.append(DeclReport(decl.name, True, kind="type"))
            else:
                annot_s, body_s = _desugar_params(decl, env)
                ty = elaborate_type(env, annot_s)
                check_type(defs, defs.ambient, ty, fuel)
                body = elab_check(env, body_s, ty)
                defs.add(Definition(decl.name, ty, body,
                                    ambient_len=len(defs.ambient)))
                prog.reports.append(DeclReport(decl.name, True))
        except TypeCheckError as err:
            prog.reports.append(DeclReport(
                decl.name, False, err.message, err.span or decl.span))
    return prog
