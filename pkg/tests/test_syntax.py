from hypothesis import given, strategies as st

from clott import syntax as S
from clott.names import CLOCK, TERM, TICK, fresh, user
from clott.syntax import (
    AppTick, CBound, Context, CVar, LamTick, Suc, TickBound, TickVar,
    TForall, TLater, TNat, Var, Zero, alpha_eq, close_clock, close_tick,
    close_tm, close_tm_many, free_clocks, free_term_vars, open_clock,
    open_tick, open_tm, open_tm_many,
)

k = user("k", CLOCK)
x = user("x", TERM)


def tick_lam(body):
    return LamTick(CVar(k), TNat(), body)


def test_alpha_bound_tick_names_do_not_matter():
    t = user("t", TERM)
    a = LamTick(CVar(k), TNat(),
                AppTick(CVar(k), TNat(), Var(t), TickBound(0)), hint="a")
    b = LamTick(CVar(k), TNat(),
                AppTick(CVar(k), TNat(), Var(t), TickBound(0)), hint="b")
    assert alpha_eq(a, b)


def test_alpha_distinct_heads():
    assert not alpha_eq(tick_lam(Zero()), tick_lam(Suc(Zero())))


def test_alpha_later_type_unused_tick():
    assert alpha_eq(TLater(CVar(k), TNat(), hint="a"),
                    TLater(CVar(k), TNat(), hint="b"))


def test_free_clocks_nat_empty():
    assert free_clocks(TNat()) == frozenset()


def test_free_clocks_later():
    assert free_clocks(TLater(CVar(k), TNat())) == frozenset({k})


def test_free_clocks_quantified_clock_is_bound():
    assert free_clocks(TForall(TLater(CBound(0), TNat()))) == frozenset()


def test_open_close_term_roundtrip():
    body = Suc(Var(x))
    closed = close_tm(body, x)
    assert closed == Suc(S.Bound(0))
    assert open_tm(closed, Var(x)) == body


def test_open_close_clock_roundtrip():
    ty = TLater(CVar(k), TNat())
    closed = close_clock(ty, k)
    assert closed == TLater(CBound(0), TNat())
    assert open_clock(closed, CVar(k)) == ty


def test_open_close_tick_roundtrip():
    a = user("a", TICK)
    t = user("t", TERM)
    body = AppTick(CVar(k), TNat(), Var(t), TickVar(a))
    closed = close_tick(body, a)
    assert closed.tick == TickBound(0)
    assert open_tick(closed, TickVar(a)) == body


def test_close_many_gives_distinct_indices():
    y = user("y", TERM)
    body = S.PairSigma(TNat(), TNat(), Var(x), Var(y))
    closed = close_tm_many(body, [y, x])  # y innermost
    assert closed.fst == S.Bound(1)
    assert closed.snd == S.Bound(0)
    assert open_tm_many(closed, [Var(y), Var(x)]) == body


def test_substituting_fresh_names_preserves_alpha():
    a = tick_lam(AppTick(CVar(k), TNat(), Var(x), TickBound(0)))
    x2 = fresh("x", TERM)
    renamed = open_tm(close_tm(a, x), Var(x2))
    assert not alpha_eq(a, renamed)  # the free name changed
    assert alpha_eq(close_tm(a, x), close_tm(renamed, x2))


def test_free_clocks_commute_with_renaming():
    k2 = fresh("k", CLOCK)
    ty = TLater(CVar(k), TLater(CVar(k), TNat()))
    renamed = S.rename_clock(ty, k, k2)
    assert free_clocks(renamed) == frozenset({k2})


# small generator for closed naturals with some redexes
def nat_terms(depth=3):
    if depth == 0:
        return st.just(Zero())
    sub = nat_terms(depth - 1)
    return st.one_of(
        st.just(Zero()),
        sub.map(Suc),
        st.tuples(sub, sub).map(
            lambda p: S.AppPi(TNat(), TNat(),
                              S.LamPi(TNat(), TNat(), S.Bound(0)), p[0])),
    )


@given(nat_terms(), nat_terms())
def test_alpha_eq_is_an_equivalence(a, b):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)


@given(nat_terms())
def test_closing_an_unused_name_is_identity(t):
    assert close_tm(t, user("unused", TERM)) == t


def test_context_split_at_tick():
    a = user("a", TICK)
    ctx = (Context().extend_clock(k).extend_var(x, TNat())
           .extend_tick(a, k).extend_var(user("y", TERM), TNat()))
    split = ctx.split_at_tick(a)
    assert split is not None
    prefix, entry, suffix = split
    assert len(prefix) == 2
    assert entry.clock == k
    assert len(suffix) == 1


def test_context_names_must_be_resolvable():
    ctx = Context().extend_clock(k)
    assert ctx.has_clock(k)
    assert ctx.lookup_var(x) is None
