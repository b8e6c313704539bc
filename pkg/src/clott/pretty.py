"""Printing core syntax back into the surface grammar.

Printed text reparses to an alpha-equivalent term: eliminations drop their
annotations (they are re-inferred), introductions keep exactly the
annotations elaboration needs.  Binder display names come from hints,
disambiguated against everything in scope.
"""
from __future__ import annotations

from .names import Name
from . import syntax as S
from .syntax import (
    AppDiamond, AppForall, AppPi, AppTick, Bound, CBound, Cirr, CodeForall,
    CodeLater, CodeNat, CodePi, CodeSigma, Context, CVar, DefRef, Dfix, Fst,
    Incl, J, LamForall, LamPi, LamTick, NatRec, PairSigma, Pfix, Refl, Snd,
    Suc, TEl, TForall, TickBound, TickEntry, TickVar, TId, Tirr, TLater,
    TNat, TPi, TSigma, TUniv, Var, VarEntry, Zero, ClockEntry,
    free_clocks, free_term_vars, free_ticks, lit_value, uses_bound_tick,
    uses_bound_tm,
)

KEYWORDS = {
    "clock", "def", "type", "forall", "Nat", "U", "El", "Id", "in", "fst",
    "snd", "suc", "natrec", "refl", "J", "fix", "dfix", "cirr", "tirr",
    "pfix",
}


class _Scope:
    def __init__(self, used: set[str]):
        self.used = set(used) | KEYWORDS
        self.terms: list[str] = []
        self.clocks: list[str] = []
        self.ticks: list[str] = []

    def push(self, stack: list[str], hint: str, default: str) -> str:
        base = "".join(c for c in hint if c.isalnum() or c in "_'")
        if not base or not (base[0].isalpha() or base[0] == "_"):
            base = default
        name = base
        i = 0
        while name in self.used:
            i += 1
            name = f"{base}{i}"
        self.used.add(name)
        stack.append(name)
        return name

    def pop(self, stack: list[str]):
        # scoped: sibling binders may reuse a display name
        self.used.discard(stack.pop())


def _free_display(name: Name) -> str:
    return name.text if name.uid == 0 else f"{name.text}{name.uid}"


def pretty(x, width_hint: int = 0) -> str:
    """Render a term, type, or context."""
    if isinstance(x, Context):
        return ", ".join(_entry(e) for e in x.entries)
    used = {_free_display(n)
            for n in free_term_vars(x) | free_clocks(x) | free_ticks(x)}
    used |= set(S.def_refs(x))
    sc = _Scope(used)
    if _is_type(x):
        return _ty(x, sc, 0)
    return _tm(x, sc, 0)


def _entry(e) -> str:
    if isinstance(e, VarEntry):
        return f"{_free_display(e.name)} : {pretty(e.ty)}"
    if isinstance(e, ClockEntry):
        return f"{_free_display(e.name)} : clock"
    return f"{_free_display(e.name)} : {_free_display(e.clock)}"


def _is_type(x) -> bool:
    return isinstance(x, (TNat, TPi, TSigma, TId, TLater, TForall, TUniv, TEl))


def _paren(s: str, have: int, need: int) -> str:
    return f"({s})" if have < need else s


def _cref(r, sc: _Scope) -> str:
    if isinstance(r, CVar):
        return _free_display(r.name)
    return sc.clocks[-1 - r.idx]


def _tref(r, sc: _Scope) -> str:
    if isinstance(r, TickVar):
        return _free_display(r.name)
    return sc.ticks[-1 - r.idx]


def _cset(delta, sc: _Scope) -> str:
    return ",".join(sorted(_cref(r, sc) for r in delta))


# --- types ------------------------------------------------------------------
# levels: 0 arrow/binders, 1 product, 2 later prefix, 3 atom

def _ty(a, sc: _Scope, lv: int) -> str:
    if isinstance(a, TNat):
        return "Nat"
    if isinstance(a, TPi):
        if uses_bound_tm(a.cod):
            dom = _ty(a.dom, sc, 0)
            x = sc.push(sc.terms, a.hint, "x")
            s = f"({x} : {dom}) -> {_ty(a.cod, sc, 0)}"
            sc.pop(sc.terms)
        else:
            dom = _ty(a.dom, sc, 1)
            sc.terms.append("_")
            s = f"{dom} -> {_ty(a.cod, sc, 0)}"
            sc.terms.pop()
        return _paren(s, 0, lv)
    if isinstance(a, TSigma):
        if uses_bound_tm(a.cod):
            dom = _ty(a.dom, sc, 0)
            x = sc.push(sc.terms, a.hint, "x")
            s = f"({x} : {dom}) ** {_ty(a.cod, sc, 1)}"
            sc.pop(sc.terms)
            return _paren(s, 1, lv)
        dom = _ty(a.dom, sc, 2)
        sc.terms.append("_")
        s = f"{dom} ** {_ty(a.cod, sc, 1)}"
        sc.terms.pop()
        return _paren(s, 1, lv)
    if isinstance(a, TId):
        return (f"Id({_ty(a.ty, sc, 0)}, {_tm(a.lhs, sc, 0)}, "
                f"{_tm(a.rhs, sc, 0)})")
    if isinstance(a, TLater):
        k = _cref(a.clock, sc)
        if uses_bound_tick(a.body):
            t = sc.push(sc.ticks, a.hint, "a")
            s = f"|>({t} : {k}). {_ty(a.body, sc, 0)}"
            sc.pop(sc.ticks)
            return _paren(s, 0, lv)
        sc.ticks.append("_")
        s = f"|>^{k} {_ty(a.body, sc, 2)}"
        sc.ticks.pop()
        return _paren(s, 2, lv)
    if isinstance(a, TForall):
        k = sc.push(sc.clocks, a.hint, "k")
        s = f"forall {k}. {_ty(a.body, sc, 0)}"
        sc.pop(sc.clocks)
        return _paren(s, 0, lv)
    if isinstance(a, TUniv):
        return f"U{{{_cset(a.delta, sc)}}}"
    if isinstance(a, TEl):
        return f"El{{{_cset(a.delta, sc)}}}({_tm(a.code, sc, 0)})"
    raise ValueError(f"not a type: {a!r}")


# --- terms ------------------------------------------------------------------
# levels: 0 lambda, 1 cons, 2 application, 3 postfix, 4 atom

def _body(t, sc: _Scope) -> str:
    """An abstraction body; universe codes get an ascription so the body
    reparses in inference position."""
    if isinstance(t, (CodeNat, CodePi, CodeSigma, CodeForall, CodeLater)):
        return f"({_tm(t, sc, 0)} : U{{{_cset(t.delta, sc)}}})"
    return _tm(t, sc, 0)


def _tm(t, sc: _Scope, lv: int) -> str:
    if isinstance(t, Var):
        return _free_display(t.name)
    if isinstance(t, Bound):
        return sc.terms[-1 - t.idx]
    if isinstance(t, DefRef):
        return t.name
    if isinstance(t, (Zero, Suc)):
        n = lit_value(t)
        if n is not None:
            return str(n)
        return _paren(f"suc {_tm(t.arg, sc, 3)}", 2, lv)
    if isinstance(t, NatRec):
        x = sc.push(sc.terms, t.hint, "n")
        motive = _ty(t.motive, sc, 0)
        sc.pop(sc.terms)
        base = _tm(t.base, sc, 0)
        m = sc.push(sc.terms, t.hint_m, "m")
        ih = sc.push(sc.terms, t.hint_ih, "ih")
        step = _tm(t.step, sc, 0)
        sc.pop(sc.terms)
        sc.pop(sc.terms)
        return (f"natrec({x}. {motive}, {base}, {m} {ih}. {step}, "
                f"{_tm(t.scrut, sc, 0)})")
    if isinstance(t, LamPi):
        dom = _ty(t.dom, sc, 0)
        x = sc.push(sc.terms, t.hint, "x")
        s = f"\\({x} : {dom}). {_body(t.body, sc)}"
        sc.pop(sc.terms)
        return _paren(s, 0, lv)
    if isinstance(t, AppPi):
        if (isinstance(t.arg, Dfix) and t.arg.fn == t.fn
                and not uses_bound_tm(t.cod)
                and t.dom == TLater(t.arg.clock, t.arg.ty)
                and t.cod == t.arg.ty):
            # the definitional fixed point: t (dfix t)
            s = f"fix^{_cref(t.arg.clock, sc)} {_tm(t.fn, sc, 3)}"
            return _paren(s, 2, lv)
        s = f"{_tm(t.fn, sc, 2)} {_tm(t.arg, sc, 3)}"
        return _paren(s, 2, lv)
    if isinstance(t, PairSigma):
        inner = f"({_tm(t.fst, sc, 0)} , {_tm(t.snd, sc, 0)})"
        if uses_bound_tm(t.cod) or not isinstance(t.dom, TNat) \
                or not isinstance(t.cod, TNat):
            # ascribe so the reparse restores the same annotations
            sig = _ty(TSigma(t.dom, t.cod, hint=t.hint), sc, 0)
            return f"({inner} : {sig})"
        return inner
    if isinstance(t, Fst):
        return _paren(f"fst {_tm(t.pair, sc, 3)}", 2, lv)
    if isinstance(t, Snd):
        return _paren(f"snd {_tm(t.pair, sc, 3)}", 2, lv)
    if isinstance(t, Refl):
        return _paren(f"refl {_tm(t.arg, sc, 3)}", 2, lv)
    if isinstance(t, J):
        x = sc.push(sc.terms, t.hint_x, "x")
        y = sc.push(sc.terms, t.hint_y, "y")
        p = sc.push(sc.terms, t.hint_p, "p")
        motive = _ty(t.motive, sc, 0)
        sc.pop(sc.terms)
        sc.pop(sc.terms)
        sc.pop(sc.terms)
        bx = sc.push(sc.terms, t.hint_x, "x")
        base = _tm(t.base, sc, 0)
        sc.pop(sc.terms)
        return f"J({x} {y} {p}. {motive}, {bx}. {base}, {_tm(t.eq, sc, 0)})"
    if isinstance(t, LamForall):
        k = sc.push(sc.clocks, t.hint, "k")
        s = f"/\\{k}. {_body(t.body, sc)}"
        sc.pop(sc.clocks)
        return _paren(s, 0, lv)
    if isinstance(t, AppForall):
        return _paren(f"{_tm(t.fn, sc, 3)}[{_cref(t.arg, sc)}]", 3, lv)
    if isinstance(t, LamTick):
        k = _cref(t.clock, sc)
        a = sc.push(sc.ticks, t.hint, "a")
        s = f"\\({a} : {k}). {_body(t.body, sc)}"
        sc.pop(sc.ticks)
        return _paren(s, 0, lv)
    if isinstance(t, AppTick):
        return _paren(f"{_tm(t.fn, sc, 3)}[{_tref(t.tick, sc)}]", 3, lv)
    if isinstance(t, AppDiamond):
        target = _cref(t.target, sc)
        k = sc.push(sc.clocks, t.hint_k, "k")
        s = f"{_tm(t.fn, sc, 3)} [{k}.][<> {target}]"
        sc.pop(sc.clocks)
        return _paren(s, 3, lv)
    if isinstance(t, Dfix):
        s = f"dfix^{_cref(t.clock, sc)} {_tm(t.fn, sc, 3)}"
        return _paren(s, 2, lv)
    if isinstance(t, Cirr):
        return _paren(f"cirr {_tm(t.fn, sc, 3)}", 2, lv)
    if isinstance(t, Tirr):
        return _paren(f"tirr {_tm(t.fn, sc, 3)}", 2, lv)
    if isinstance(t, Pfix):
        return _paren(f"pfix {_tm(t.fn, sc, 3)}", 2, lv)
    if isinstance(t, CodeNat):
        return "@Nat"
    if isinstance(t, (CodePi, CodeSigma)):
        dep = uses_bound_tm(t.cod)
        if isinstance(t, CodePi):
            head, infix = "@pi", "@->"
        else:
            head, infix = "@sig", "@**"
        if dep:
            dom = _tm(t.dom, sc, 0)
            x = sc.push(sc.terms, t.hint, "x")
            s = f"{head} ({x} : {dom}). {_tm(t.cod, sc, 0)}"
            sc.pop(sc.terms)
            return _paren(s, 0, lv)
        dom = _tm(t.dom, sc, 2)
        sc.terms.append("_")
        s = f"{dom} {infix} {_tm(t.cod, sc, 1)}"
        sc.terms.pop()
        return _paren(s, 1, lv)
    if isinstance(t, CodeForall):
        k = sc.push(sc.clocks, t.hint, "k")
        s = f"@forall {k}. {_tm(t.body, sc, 0)}"
        sc.pop(sc.clocks)
        return _paren(s, 0, lv)
    if isinstance(t, CodeLater):
        k = _cref(t.clock, sc)
        a = sc.push(sc.ticks, t.hint, "a")
        s = f"@|>({a} : {k}). {_tm(t.body, sc, 0)}"
        sc.pop(sc.ticks)
        return _paren(s, 0, lv)
    if isinstance(t, Incl):
        return (f"in{{{_cset(t.small, sc)} ; {_cset(t.big, sc)}}}"
                f"({_tm(t.code, sc, 0)})")
    raise ValueError(f"not a term: {t!r}")
