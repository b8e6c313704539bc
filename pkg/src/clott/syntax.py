"""Core annotated syntax: types, terms, universe codes, and contexts.

Binding is locally nameless: bound occurrences are indices counting enclosing
binders *of the same namespace* (term / clock / tick separately), free
occurrences are :class:`~clott.names.Name` values.  Binder nodes keep only a
printing hint, excluded from equality, so structural ``==`` on locally closed
syntax is exactly alpha-equivalence.

Every application and abstraction carries the annotation its typing rule
needs; eliminations are therefore inferable without search.  The diamond
application ``AppDiamond`` binds a clock in its function argument and both a
clock and a tick in its type annotation.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Union

from .names import CLOCK, TERM, TICK, Name, fresh


def _hint(default: str) -> str:
    return field(default=default, compare=False)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# References
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CVar:
    """Free clock variable."""
    name: Name


@dataclass(frozen=True)
class CBound:
    """Clock bound by the idx-th enclosing clock binder."""
    idx: int


ClockRef = Union[CVar, CBound]


@dataclass(frozen=True)
class TickVar:
    name: Name


@dataclass(frozen=True)
class TickBound:
    idx: int


TickRef = Union[TickVar, TickBound]

ClockSet = frozenset  # frozenset[ClockRef]


def cset(*refs: ClockRef) -> ClockSet:
    return frozenset(refs)


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TNat:
    pass


@dataclass(frozen=True)
class TPi:
    dom: "Ty"
    cod: "Ty"  # binds one term variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class TSigma:
    dom: "Ty"
    cod: "Ty"  # binds one term variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class TId:
    ty: "Ty"
    lhs: "Tm"
    rhs: "Tm"


@dataclass(frozen=True)
class TLater:
    clock: ClockRef
    body: "Ty"  # binds one tick variable
    hint: str = _hint("a")


@dataclass(frozen=True)
class TForall:
    body: "Ty"  # binds one clock variable
    hint: str = _hint("k")


@dataclass(frozen=True)
class TUniv:
    delta: ClockSet


@dataclass(frozen=True)
class TEl:
    delta: ClockSet
    code: "Tm"


Ty = Union[TNat, TPi, TSigma, TId, TLater, TForall, TUniv, TEl]


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: Name


@dataclass(frozen=True)
class Bound:
    idx: int


@dataclass(frozen=True)
class DefRef:
    """Reference to a transparent top-level definition."""
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Suc:
    arg: "Tm"


@dataclass(frozen=True)
class NatRec:
    motive: Ty   # binds the scrutinee
    base: "Tm"
    step: "Tm"   # binds predecessor (idx 1) and induction hypothesis (idx 0)
    scrut: "Tm"
    hint: str = _hint("n")
    hint_m: str = _hint("m")
    hint_ih: str = _hint("ih")


@dataclass(frozen=True)
class LamPi:
    dom: Ty
    cod: Ty      # binds one term variable
    body: "Tm"   # binds one term variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class AppPi:
    dom: Ty
    cod: Ty      # binds one term variable
    fn: "Tm"
    arg: "Tm"
    hint: str = _hint("x")


@dataclass(frozen=True)
class PairSigma:
    dom: Ty
    cod: Ty      # binds one term variable
    fst: "Tm"
    snd: "Tm"
    hint: str = _hint("x")


@dataclass(frozen=True)
class Fst:
    dom: Ty
    cod: Ty
    pair: "Tm"
    hint: str = _hint("x")


@dataclass(frozen=True)
class Snd:
    dom: Ty
    cod: Ty
    pair: "Tm"
    hint: str = _hint("x")


@dataclass(frozen=True)
class Refl:
    ty: Ty
    arg: "Tm"


@dataclass(frozen=True)
class J:
    """Identity eliminator; motive binds lhs, rhs and the proof."""
    ty: Ty
    motive: Ty   # binds 3 term variables: x (idx 2), y (idx 1), p (idx 0)
    base: "Tm"   # binds 1 term variable
    lhs: "Tm"
    rhs: "Tm"
    eq: "Tm"
    hint_x: str = _hint("x")
    hint_y: str = _hint("y")
    hint_p: str = _hint("p")


@dataclass(frozen=True)
class LamForall:
    cod: Ty      # binds one clock variable
    body: "Tm"   # binds one clock variable
    hint: str = _hint("k")


@dataclass(frozen=True)
class AppForall:
    cod: Ty      # binds one clock variable
    fn: "Tm"
    arg: ClockRef
    hint: str = _hint("k")


@dataclass(frozen=True)
class LamTick:
    clock: ClockRef
    cod: Ty      # binds one tick variable
    body: "Tm"   # binds one tick variable
    hint: str = _hint("a")


@dataclass(frozen=True)
class AppTick:
    clock: ClockRef
    cod: Ty      # binds one tick variable
    fn: "Tm"
    tick: TickRef
    hint: str = _hint("a")


@dataclass(frozen=True)
class AppDiamond:
    """Application to the tick constant, with an explicit clock binder.

    ``cod`` binds a clock and then a tick; ``fn`` binds the same clock.
    ``target`` is the clock the bound one is instantiated with.
    """
    cod: Ty      # binds one clock, then one tick
    fn: "Tm"     # binds one clock
    target: ClockRef
    hint_k: str = _hint("k")
    hint_a: str = _hint("a")


@dataclass(frozen=True)
class Dfix:
    clock: ClockRef
    ty: Ty       # no binder: the delayed type may not mention the tick
    fn: "Tm"


@dataclass(frozen=True)
class Cirr:
    """Clock irrelevance witness; ``ty`` may not mention the quantified clock."""
    ty: Ty
    fn: "Tm"


@dataclass(frozen=True)
class Tirr:
    """Tick irrelevance witness for a delayed term."""
    clock: ClockRef
    ty: Ty
    fn: "Tm"


@dataclass(frozen=True)
class Pfix:
    """Fixed-point unfolding witness."""
    clock: ClockRef
    ty: Ty
    fn: "Tm"


@dataclass(frozen=True)
class CodeNat:
    delta: ClockSet


@dataclass(frozen=True)
class CodePi:
    delta: ClockSet
    dom: "Tm"
    cod: "Tm"    # binds one term variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class CodeSigma:
    delta: ClockSet
    dom: "Tm"
    cod: "Tm"    # binds one term variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class CodeForall:
    delta: ClockSet
    body: "Tm"   # binds one clock variable
    hint: str = _hint("k")


@dataclass(frozen=True)
class CodeLater:
    delta: ClockSet
    clock: ClockRef
    body: "Tm"   # binds one tick variable
    hint: str = _hint("a")


@dataclass(frozen=True)
class Incl:
    small: ClockSet
    big: ClockSet
    code: "Tm"


Tm = Union[
    Var, Bound, DefRef, Zero, Suc, NatRec,
    LamPi, AppPi, PairSigma, Fst, Snd, Refl, J,
    LamForall, AppForall, LamTick, AppTick, AppDiamond,
    Dfix, Cirr, Tirr, Pfix,
    CodeNat, CodePi, CodeSigma, CodeForall, CodeLater, Incl,
]

Ast = Union[Ty, Tm]


# ---------------------------------------------------------------------------
# Traversal: every structural operation below is an instance of one mapper.
# ---------------------------------------------------------------------------

# field name -> (term, clock, tick) binder increments for that child
_CHILDREN: dict[type, tuple[tuple[str, tuple[int, int, int]], ...]] = {
    TNat: (),
    TPi: (("dom", (0, 0, 0)), ("cod", (1, 0, 0))),
    TSigma: (("dom", (0, 0, 0)), ("cod", (1, 0, 0))),
    TId: (("ty", (0, 0, 0)), ("lhs", (0, 0, 0)), ("rhs", (0, 0, 0))),
    TLater: (("body", (0, 0, 1)),),
    TForall: (("body", (0, 1, 0)),),
    TUniv: (),
    TEl: (("code", (0, 0, 0)),),
    Zero: (),
    Suc: (("arg", (0, 0, 0)),),
    NatRec: (("motive", (1, 0, 0)), ("base", (0, 0, 0)),
             ("step", (2, 0, 0)), ("scrut", (0, 0, 0))),
    LamPi: (("dom", (0, 0, 0)), ("cod", (1, 0, 0)), ("body", (1, 0, 0))),
    AppPi: (("dom", (0, 0, 0)), ("cod", (1, 0, 0)),
            ("fn", (0, 0, 0)), ("arg", (0, 0, 0))),
    PairSigma: (("dom", (0, 0, 0)), ("cod", (1, 0, 0)),
                ("fst", (0, 0, 0)), ("snd", (0, 0, 0))),
    Fst: (("dom", (0, 0, 0)), ("cod", (1, 0, 0)), ("pair", (0, 0, 0))),
    Snd: (("dom", (0, 0, 0)), ("cod", (1, 0, 0)), ("pair", (0, 0, 0))),
    Refl: (("ty", (0, 0, 0)), ("arg", (0, 0, 0))),
    J: (("ty", (0, 0, 0)), ("motive", (3, 0, 0)), ("base", (1, 0, 0)),
        ("lhs", (0, 0, 0)), ("rhs", (0, 0, 0)), ("eq", (0, 0, 0))),
    LamForall: (("cod", (0, 1, 0)), ("body", (0, 1, 0))),
    AppForall: (("cod", (0, 1, 0)), ("fn", (0, 0, 0))),
    LamTick: (("cod", (0, 0, 1)), ("body", (0, 0, 1))),
    AppTick: (("cod", (0, 0, 1)), ("fn", (0, 0, 0))),
    AppDiamond: (("cod", (0, 1, 1)), ("fn", (0, 1, 0))),
    Dfix: (("ty", (0, 0, 0)), ("fn", (0, 0, 0))),
    Cirr: (("ty", (0, 0, 0)), ("fn", (0, 0, 0))),
    Tirr: (("ty", (0, 0, 0)), ("fn", (0, 0, 0))),
    Pfix: (("ty", (0, 0, 0)), ("fn", (0, 0, 0))),
    CodeNat: (),
    CodePi: (("dom", (0, 0, 0)), ("cod", (1, 0, 0))),
    CodeSigma: (("dom", (0, 0, 0)), ("cod", (1, 0, 0))),
    CodeForall: (("body", (0, 1, 0)),),
    CodeLater: (("body", (0, 0, 1)),),
    Incl: (("code", (0, 0, 0)),),
}

# clock / tick reference fields, always at the node's own depth
_CLOCK_FIELDS: dict[type, tuple[str, ...]] = {
    TLater: ("clock",),
    AppForall: ("arg",),
    LamTick: ("clock",),
    AppTick: ("clock",),
    AppDiamond: ("target",),
    Dfix: ("clock",),
    Tirr: ("clock",),
    Pfix: ("clock",),
    CodeLater: ("clock",),
}

_TICK_FIELDS: dict[type, tuple[str, ...]] = {
    AppTick: ("tick",),
}

_SET_FIELDS: dict[type, tuple[str, ...]] = {
    TUniv: ("delta",),
    TEl: ("delta",),
    CodeNat: ("delta",),
    CodePi: ("delta",),
    CodeSigma: ("delta",),
    CodeForall: ("delta",),
    CodeLater: ("delta",),
    Incl: ("small", "big"),
}

Depth = tuple[int, int, int]
_id3 = lambda r, d: r  # noqa: E731


def map_refs(x: Ast,
             on_term: Callable = _id3,
             on_clock: Callable = _id3,
             on_tick: Callable = _id3,
             depth: Depth = (0, 0, 0)) -> Ast:
    """Rebuild ``x`` applying the hooks to every leaf reference.

    Hooks receive the reference and the binder depth ``(term, clock, tick)``
    at its position.  Term hooks see ``Var``, ``Bound`` and ``DefRef`` nodes
    and may return arbitrary terms; clock/tick hooks must return references.
    """
    cls = type(x)
    if cls in (Var, Bound, DefRef):
        return on_term(x, depth)
    changes = {}
    for fname, inc in _CHILDREN.get(cls, ()):
        child = getattr(x, fname)
        d2 = (depth[0] + inc[0], depth[1] + inc[1], depth[2] + inc[2])
        new = map_refs(child, on_term, on_clock, on_tick, d2)
        if new is not child:
            changes[fname] = new
    for fname in _CLOCK_FIELDS.get(cls, ()):
        ref = getattr(x, fname)
        new = on_clock(ref, depth)
        if new is not ref:
            changes[fname] = new
    for fname in _TICK_FIELDS.get(cls, ()):
        ref = getattr(x, fname)
        new = on_tick(ref, depth)
        if new is not ref:
            changes[fname] = new
    for fname in _SET_FIELDS.get(cls, ()):
        refs = getattr(x, fname)
        new = frozenset(on_clock(r, depth) for r in refs)
        if new != refs:
            changes[fname] = new
    return dataclasses.replace(x, **changes) if changes else x


class IllScoped(Exception):
    """A bound index escaped its binder or a name was used out of scope."""


def levels(x: Ast) -> Depth:
    """How many enclosing binders of each namespace the subtree needs:
    one more than the largest dangling index, per namespace.  Cached on
    the node, which is safe because nodes are immutable."""
    try:
        return x._lv  # type: ignore[union-attr]
    except AttributeError:
        pass
    cls = type(x)
    tm = ck = tk = 0
    if cls is Bound:
        tm = x.idx + 1
    else:
        for fname, inc in _CHILDREN.get(cls, ()):
            ct, cc, ck2 = levels(getattr(x, fname))
            tm = max(tm, ct - inc[0])
            ck = max(ck, cc - inc[1])
            tk = max(tk, ck2 - inc[2])
        for fname in _CLOCK_FIELDS.get(cls, ()):
            r = getattr(x, fname)
            if isinstance(r, CBound):
                ck = max(ck, r.idx + 1)
        for fname in _TICK_FIELDS.get(cls, ()):
            r = getattr(x, fname)
            if isinstance(r, TickBound):
                tk = max(tk, r.idx + 1)
        for fname in _SET_FIELDS.get(cls, ()):
            for r in getattr(x, fname):
                if isinstance(r, CBound):
                    ck = max(ck, r.idx + 1)
    lv = (tm, ck, tk)
    object.__setattr__(x, "_lv", lv)
    return lv


def _open(x: Ast, ns: int, payloads: tuple, depth: int) -> Ast:
    """Instantiate binders of one namespace, pruning closed subtrees."""
    if levels(x)[ns] <= depth:
        return x
    cls = type(x)
    if cls is Bound and ns == 0:
        j = x.idx - depth
        if 0 <= j < len(payloads):
            return payloads[j]
        raise IllScoped(f"dangling term index {x.idx}")
    changes = {}
    for fname, inc in _CHILDREN.get(cls, ()):
        child = getattr(x, fname)
        new = _open(child, ns, payloads, depth + inc[ns])
        if new is not child:
            changes[fname] = new
    if ns == 1:
        for fname in _CLOCK_FIELDS.get(cls, ()):
            r = getattr(x, fname)
            if isinstance(r, CBound) and r.idx >= depth:
                if r.idx - depth >= len(payloads):
                    raise IllScoped(f"dangling clock index {r.idx}")
                changes[fname] = payloads[r.idx - depth]
        for fname in _SET_FIELDS.get(cls, ()):
            refs = getattr(x, fname)
            new = frozenset(
                payloads[r.idx - depth]
                if isinstance(r, CBound) and r.idx >= depth else r
                for r in refs)
            if new != refs:
                changes[fname] = new
    elif ns == 2:
        for fname in _TICK_FIELDS.get(cls, ()):
            r = getattr(x, fname)
            if isinstance(r, TickBound) and r.idx >= depth:
                if r.idx - depth >= len(payloads):
                    raise IllScoped(f"dangling tick index {r.idx}")
                changes[fname] = payloads[r.idx - depth]
    return dataclasses.replace(x, **changes) if changes else x


# --- opening (instantiate the outermost binder) ----------------------------

def open_tm(x: Ast, payload: Tm) -> Ast:
    """Instantiate the outermost term binder of a child with ``payload``."""
    return _open(x, 0, (payload,), 0)


def open_clock(x: Ast, ref: ClockRef) -> Ast:
    return _open(x, 1, (ref,), 0)


def open_tick(x: Ast, ref: TickRef) -> Ast:
    return _open(x, 2, (ref,), 0)


def open_tm_many(x: Ast, payloads: list) -> Ast:
    """Instantiate several term binders of one slot at once; payloads[0]
    fills the innermost index."""
    return _open(x, 0, tuple(payloads), 0)


# --- closing (abstract a free name into a new outermost binder) ------------

def close_tm(x: Ast, name: Name) -> Ast:
    def on_term(r, d):
        if isinstance(r, Var) and r.name == name:
            return Bound(d[0])
        return r
    return map_refs(x, on_term=on_term)


def close_tm_many(x: Ast, names: list[Name]) -> Ast:
    """Abstract several free names into one multi-binder slot; names[0]
    becomes the innermost index."""
    index = {n: i for i, n in enumerate(names)}

    def on_term(r, d):
        if isinstance(r, Var) and r.name in index:
            return Bound(d[0] + index[r.name])
        return r
    return map_refs(x, on_term=on_term)


def close_clock(x: Ast, name: Name) -> Ast:
    def on_clock(r, d):
        if isinstance(r, CVar) and r.name == name:
            return CBound(d[1])
        return r
    return map_refs(x, on_clock=on_clock)


def close_tick(x: Ast, name: Name) -> Ast:
    def on_tick(r, d):
        if isinstance(r, TickVar) and r.name == name:
            return TickBound(d[2])
        return r
    return map_refs(x, on_tick=on_tick)


# --- renaming free references ----------------------------------------------

def rename_clock(x: Ast, old: Name, new: Name) -> Ast:
    def on_clock(r, d):
        if isinstance(r, CVar) and r.name == old:
            return CVar(new)
        return r
    return map_refs(x, on_clock=on_clock)


def rename_tick(x: Ast, old: Name, new: Name) -> Ast:
    def on_tick(r, d):
        if isinstance(r, TickVar) and r.name == old:
            return TickVar(new)
        return r
    return map_refs(x, on_tick=on_tick)


# --- free-variable collectors ----------------------------------------------

def free_term_vars(x: Ast) -> frozenset[Name]:
    acc: set[Name] = set()

    def on_term(r, d):
        if isinstance(r, Var):
            acc.add(r.name)
        return r
    map_refs(x, on_term=on_term)
    return frozenset(acc)


def free_clocks(x: Ast) -> frozenset[Name]:
    """The clock variables occurring free anywhere in ``x``."""
    acc: set[Name] = set()

    def on_clock(r, d):
        if isinstance(r, CVar):
            acc.add(r.name)
        return r
    map_refs(x, on_clock=on_clock)
    return frozenset(acc)


def free_ticks(x: Ast) -> frozenset[Name]:
    acc: set[Name] = set()

    def on_tick(r, d):
        if isinstance(r, TickVar):
            acc.add(r.name)
        return r
    map_refs(x, on_tick=on_tick)
    return frozenset(acc)


def def_refs(x: Ast) -> frozenset[str]:
    acc: set[str] = set()

    def on_term(r, d):
        if isinstance(r, DefRef):
            acc.add(r.name)
        return r
    map_refs(x, on_term=on_term)
    return frozenset(acc)


def is_locally_closed(x: Ast) -> bool:
    try:
        def on_term(r, d):
            if isinstance(r, Bound) and r.idx >= d[0]:
                raise IllScoped(str(r.idx))
            return r

        def on_clock(r, d):
            if isinstance(r, CBound) and r.idx >= d[1]:
                raise IllScoped(str(r.idx))
            return r

        def on_tick(r, d):
            if isinstance(r, TickBound) and r.idx >= d[2]:
                raise IllScoped(str(r.idx))
            return r
        map_refs(x, on_term, on_clock, on_tick)
        return True
    except IllScoped:
        return False


def uses_bound_tm(x: Ast) -> bool:
    """Does ``x`` (the scope of one term binder) use that binder?"""
    try:
        def on_term(r, d):
            if isinstance(r, Bound) and r.idx == d[0]:
                raise IllScoped("used")
            return r
        map_refs(x, on_term=on_term)
        return False
    except IllScoped:
        return True


def uses_bound_clock(x: Ast) -> bool:
    try:
        def on_clock(r, d):
            if isinstance(r, CBound) and r.idx == d[1]:
                raise IllScoped("used")
            return r
        map_refs(x, on_clock=on_clock)
        return False
    except IllScoped:
        return True


def uses_bound_tick(x: Ast) -> bool:
    try:
        def on_tick(r, d):
            if isinstance(r, TickBound) and r.idx == d[2]:
                raise IllScoped("used")
            return r
        map_refs(x, on_tick=on_tick)
        return False
    except IllScoped:
        return True


def alpha_eq(a: Ast, b: Ast) -> bool:
    """Equality up to consistent renaming of bound names.

    With nameless bound occurrences and hints excluded from comparison this
    is plain structural equality.
    """
    return a == b


# ---------------------------------------------------------------------------
# Contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarEntry:
    name: Name
    ty: Ty


@dataclass(frozen=True)
class ClockEntry:
    name: Name


@dataclass(frozen=True)
class TickEntry:
    name: Name
    clock: Name


CtxEntry = Union[VarEntry, ClockEntry, TickEntry]


@dataclass(frozen=True)
class Context:
    """A telescope of variable, clock and tick assumptions."""

    entries: tuple[CtxEntry, ...] = ()

    def __len__(self):
        return len(self.entries)

    def names(self) -> frozenset[Name]:
        return frozenset(e.name for e in self.entries)

    def extend_var(self, name: Name, ty: Ty) -> "Context":
        return Context(self.entries + (VarEntry(name, ty),))

    def extend_clock(self, name: Name) -> "Context":
        return Context(self.entries + (ClockEntry(name),))

    def extend_tick(self, name: Name, clock: Name) -> "Context":
        return Context(self.entries + (TickEntry(name, clock),))

    def lookup_var(self, name: Name) -> Ty | None:
        for e in reversed(self.entries):
            if isinstance(e, VarEntry) and e.name == name:
                return e.ty
        return None

    def has_clock(self, name: Name) -> bool:
        return any(isinstance(e, ClockEntry) and e.name == name
                   for e in self.entries)

    def lookup_tick(self, name: Name) -> Name | None:
        for e in reversed(self.entries):
            if isinstance(e, TickEntry) and e.name == name:
                return e.clock
        return None

    def split_at_tick(self, name: Name) -> tuple["Context", TickEntry, "Context"] | None:
        """Split into (strict prefix, the tick entry, suffix)."""
        for i, e in enumerate(self.entries):
            if isinstance(e, TickEntry) and e.name == name:
                return (Context(self.entries[:i]), e,
                        Context(self.entries[i + 1:]))
        return None


def fresh_like(name_or_hint, kind: str) -> Name:
    text = name_or_hint.text if isinstance(name_or_hint, Name) else name_or_hint
    return fresh(text, kind)


# Convenience smart constructors used throughout the checker and tests.

def arrow(dom: Ty, cod: Ty, hint: str = "x") -> TPi:
    """Non-dependent function type; the codomain may not use the binder."""
    return TPi(dom, cod, hint=hint)


def later_simple(clock: ClockRef, body: Ty, hint: str = "a") -> TLater:
    """Delay type whose body does not depend on the tick."""
    return TLater(clock, body, hint=hint)


def nat_lit(n: int) -> Tm:
    t: Tm = Zero()
    for _ in range(n):
        t = Suc(t)
    return t


def lit_value(t: Tm) -> int | None:
    n = 0
    while isinstance(t, Suc):
        n += 1
        t = t.arg
    return n if isinstance(t, Zero) else None


def install_cached_hash(cls) -> None:
    """Memoize ``hash`` on an immutable class; nodes are deep and hashed
    often as cache keys."""
    orig = cls.__hash__

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            h = orig(self)
            object.__setattr__(self, "_h", h)
            return h
    cls.__hash__ = __hash__


for _cls in (TNat, TPi, TSigma, TId, TLater, TForall, TUniv, TEl,
             Var, Bound, DefRef, Zero, Suc, NatRec, LamPi, AppPi, PairSigma,
             Fst, Snd, Refl, J, LamForall, AppForall, LamTick, AppTick,
             AppDiamond, Dfix, Cirr, Tirr, Pfix, CodeNat, CodePi, CodeSigma,
             CodeForall, CodeLater, Incl, CVar, CBound, TickVar, TickBound,
             Name):
    install_cached_hash(_cls)
