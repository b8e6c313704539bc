"""The tick-constant substitution clauses and the substitution calculus."""
import pytest

from clott import syntax as S
from clott.names import CLOCK, TERM, TICK, user
from clott.subst import (
    ScopeError,Subst, SubVar, compose_subst, diamond_substitute,
    identity_subst, single_subst, subst_term, subst_type, weaken,
)
from clott.syntax import (
    AppDiamond, AppForall, AppTick, CBound, Context, CVar, LamForall,
    LamTick, Suc, TickBound, TickVar, TId, TLater, TNat, TPi, TUniv, Var,
    Zero, alpha_eq,
)

kappa = user("kp", CLOCK)        # the clock closed by the constant
alpha = user("al", TICK)         # the tick sent to the constant
target = user("kq", CLOCK)       # the clock the constant lives on
other_clock = user("ko", CLOCK)
other_tick = user("ao", TICK)
f = user("f", TERM)
g = user("g", TERM)


def dia(x):
    """The substitution of the tick constant at ``target`` for ``alpha``
    over ``kappa``."""
    return diamond_substitute(x, alpha, kappa, target)


def uses_kappa():
    return AppForall(TNat(), Var(f), CVar(kappa))


def uses_target():
    return AppForall(TNat(), Var(f), CVar(target))


# the clause block, one test per displayed rewrite

def test_clause_clock_abstraction_distributes():
    t = LamForall(TLater(CVar(kappa), TNat()), uses_kappa())
    out = dia(t)
    assert out == LamForall(TLater(CVar(target), TNat()), uses_target())


def test_clause_clock_application_at_the_closed_clock():
    t = AppForall(TNat(), Var(f), CVar(kappa))
    assert dia(t) == AppForall(TNat(), Var(f), CVar(target))


def test_clause_clock_application_elsewhere():
    t = AppForall(TNat(), Var(f), CVar(other_clock))
    assert dia(t) == t


def test_clause_tick_abstraction_on_the_closed_clock():
    t = LamTick(CVar(kappa), TNat(), uses_kappa())
    assert dia(t) == LamTick(CVar(target), TNat(), uses_target())


def test_clause_tick_abstraction_elsewhere():
    t = LamTick(CVar(other_clock), TNat(), uses_kappa())
    assert dia(t) == LamTick(CVar(other_clock), TNat(), uses_target())


def test_clause_tick_application_becomes_diamond():
    t = AppTick(CVar(kappa), TNat(), Var(f), TickVar(alpha))
    out = dia(t)
    assert out == AppDiamond(TNat(), Var(f), CVar(target))


def test_clause_tick_application_rebinds_the_clock():
    # occurrences of the closed clock in the function become the binder,
    # not the target
    t = AppTick(CVar(kappa), TNat(), uses_kappa(), TickVar(alpha))
    out = dia(t)
    assert out == AppDiamond(TNat(),
                             AppForall(TNat(), Var(f), CBound(0)),
                             CVar(target))


def test_clause_other_tick_on_the_closed_clock():
    t = AppTick(CVar(kappa), TNat(), Var(f), TickVar(other_tick))
    assert dia(t) == AppTick(CVar(target), TNat(), Var(f),
                             TickVar(other_tick))


def test_clause_other_tick_elsewhere():
    t = AppTick(CVar(other_clock), TNat(), Var(f), TickVar(other_tick))
    assert dia(t) == t


def test_clause_diamond_target_at_the_closed_clock():
    t = AppDiamond(TNat(), uses_kappa(), CVar(kappa))
    out = dia(t)
    assert out == AppDiamond(TNat(), uses_target(), CVar(target))


def test_clause_diamond_target_elsewhere():
    t = AppDiamond(TNat(), Var(f), CVar(other_clock))
    assert dia(t) == t


def test_inner_abstraction_still_substituted():
    # the constant reaches under unrelated binders
    t = LamTick(CVar(other_clock), TNat(),
                AppTick(CVar(kappa), TNat(), Var(f), TickVar(alpha)))
    out = dia(t)
    assert isinstance(out.body, AppDiamond)


# type-level action

def test_universe_index_renames_elementwise():
    assert dia(TUniv(frozenset({CVar(kappa)}))) == \
        TUniv(frozenset({CVar(target)}))


def test_universe_index_merges_as_a_set():
    both = TUniv(frozenset({CVar(kappa), CVar(target)}))
    assert dia(both) == TUniv(frozenset({CVar(target)}))


def test_later_type_clock_renames():
    k2 = user("k2", CLOCK)
    ty = TLater(CVar(kappa), TNat())
    assert S.rename_clock(ty, kappa, k2) == TLater(CVar(k2), TNat())


def test_pi_type_distributes():
    ty = TPi(TLater(CVar(kappa), TNat()), TNat())
    assert dia(ty) == TPi(TLater(CVar(target), TNat()), TNat())


# single substitution

def test_single_subst_hits_only_its_variable():
    y = user("y", TERM)
    assert single_subst(Var(f), f, Zero()) == Zero()
    assert single_subst(Var(f), y, Zero()) == Var(f)


def test_single_subst_under_identity_type():
    a = user("a", TICK)
    b = user("b", TICK)
    ty = TId(TNat(),
             AppTick(CVar(kappa), TNat(), Var(f), TickVar(a)),
             AppTick(CVar(kappa), TNat(), Var(g), TickVar(a)))
    out = S.rename_tick(ty, a, b)
    assert out.lhs.tick == TickVar(b) and out.rhs.tick == TickVar(b)


def test_single_unfolding_of_a_fixpoint_body():
    d = user("d", TERM)
    body = S.PairSigma(TNat(), TNat(), Zero(), Var(f))
    assert single_subst(body, f, Var(d)) == \
        S.PairSigma(TNat(), TNat(), Zero(), Var(d))


# telescopic substitutions

def ambient():
    return Context().extend_clock(target)


def test_identity_substitution_is_the_identity():
    ctx = ambient().extend_var(f, TNat())
    sigma = identity_subst(ctx)
    t = Suc(Var(f))
    assert alpha_eq(subst_term(t, sigma), t)
    ty = TLater(CVar(target), TNat())
    assert alpha_eq(subst_type(ty, sigma), ty)


def test_strict_substitution_rejects_escaped_names():
    sigma = identity_subst(ambient())
    with pytest.raises(ScopeError):
        subst_term(Var(f), sigma)


def test_weaken_keeps_entries_and_extends_the_domain():
    sigma = identity_subst(ambient()).extend_clock(kappa, target)
    suffix = Context().extend_var(g, TNat())
    wide = weaken(sigma, suffix)
    assert wide.entries == sigma.entries
    assert len(wide.dom) == len(sigma.dom) + 1


def test_weaken_of_the_empty_substitution():
    sigma = Subst(Context(), Context())
    assert weaken(sigma, ambient()).entries == ()


def test_weaken_of_a_tick_entry_is_unchanged():
    beta = user("bt", TICK)
    dom = ambient().extend_tick(beta, target)
    sigma = Subst(dom, ambient(), identity_subst(ambient()).entries)
    sigma = sigma.extend_clock(kappa, target)
    sigma = sigma.extend_tick(alpha, kappa, beta)
    wide = weaken(sigma, Context().extend_var(g, TNat()))
    assert wide.entries == sigma.entries


def test_weaken_rejects_rebinding():
    sigma = identity_subst(ambient())
    with pytest.raises(ScopeError):
        weaken(sigma, Context().extend_clock(target))


def test_composition_matches_sequential_action():
    ctx = ambient()
    x = user("x", TERM)
    y = user("y", TERM)
    # tau : ctx,y:Nat -> ctx,x:Nat   sends x to suc y
    tau = identity_subst(ctx)
    tau = Subst(ctx.extend_var(y, TNat()), tau.cod, tau.entries)
    tau = tau.extend_var(x, Suc(Var(y)), TNat())
    # sigma : ctx -> ctx,y:Nat       sends y to 2
    sigma = identity_subst(ctx).extend_var(y, S.nat_lit(2), TNat())
    sigma = Subst(ctx, sigma.cod, sigma.entries)
    for t in (Var(x), Suc(Var(x)), S.PairSigma(TNat(), TNat(), Var(x),
                                               Suc(Var(x)))):
        once = subst_term(subst_term(t, tau), sigma)
        both = subst_term(t, compose_subst(sigma, tau))
        assert alpha_eq(once, both)


def test_no_capture_under_binders():
    # a payload mentioning g is inserted under a binder whose hint is g;
    # nameless binders cannot capture it
    sigma = identity_subst(ambient().extend_var(g, TNat()))
    sigma = Subst(sigma.dom, sigma.cod.extend_var(f, TNat()),
                  sigma.entries + (SubVar(f, Suc(Var(g))),))
    lam = S.LamPi(TNat(), TNat(), S.PairSigma(TNat(), TNat(), Var(f),
                                              S.Bound(0)), hint="g")
    out = subst_term(lam, sigma)
    assert out.body.fst == Suc(Var(g))
    assert out.body.snd == S.Bound(0)
