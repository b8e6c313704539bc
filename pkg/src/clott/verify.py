"""Property suites driving the evaluator as an oracle over a corpus.

Each suite instantiates one family of semantic facts at every stage within
the configured bounds: restriction commutes with evaluation, fixed points
unfold, ticks and clocks are irrelevant, the fresh-clock elimination is
inverse to projection and independent of its budget choice, substitutions
act the same syntactically and on environments, and every definitional
equation both converts and evaluates to equal values.

Failures carry enough rendered data (definition, stage, morphism, values)
to re-run the instance by hand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .names import CLOCK, TERM, TICK, Name, fresh, user
from .stages import (
    ClockAtom, TimeMorphism, TimeObject, enumerate_morphisms, identity,
    tick_morphism,
)
from . import syntax as S
from .syntax import (
    AppDiamond, AppForall, AppPi, AppTick, CBound, CVar, CodeForall,
    CodeLater, CodeNat, Context, DefRef, Dfix, Incl, LamForall, LamPi,
    LamTick, TEl, TForall, TickBound, TickVar, TLater, Tm, TNat, TPi,
    TUniv, Ty, Var, Zero, close_clock, nat_lit, open_clock, open_tick,
    rename_clock, uses_bound_clock, uses_bound_tick,
)
from .subst import (
    Subst, diamond_substitute, identity_subst, subst_term, subst_type,
)
from .typecheck import (
    Defs, Fuel, TypeCheckError, _Cell, check_subst, conv, conv_type, infer,
    whnf, whnf_type,
)
from .elaborate import Program
from .evaluate import (
    EqConfig, EvalCtx, apply_subst_env, diamond_env, enumerate_values,
    eval_term, eval_type, kripke_apply_clock, sem_type_eq, value_eq,
)
from .values import (
    ConsClock, ConsTick, EmptyEnv, Env, env_len, lookup_clock_atom,
    pretty_value, project_env, restrict_env, restrict_value,
)


@dataclass
class VerifyConfig:
    fuel: int = 8
    depth: int = 4
    samples: int = 8
    max_clocks: int = 2
    max_budget: int = 3
    subst_instances: int = 50
    invariance_samples: int = 20

    def eq(self) -> EqConfig:
        return EqConfig(depth=self.depth, samples=self.samples)

    def fuel_(self) -> Fuel:
        return Fuel(self.fuel)


@dataclass
class Failure:
    suite: str
    detail: str


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, detail_fn):
        self.instances += 1
        if not ok:
            self.failures.append(Failure(self.name, detail_fn()))


def stage_pool(cfg: VerifyConfig) -> list[TimeObject]:
    atoms = [ClockAtom(f"c{i}") for i in range(cfg.max_clocks)]
    out = []
    for size in range(1, cfg.max_clocks + 1):
        for budgets in itertools.product(range(cfg.max_budget + 1),
                                         repeat=size):
            out.append(TimeObject(tuple(zip(atoms[:size], budgets))))
    return out


def _sorted_atoms(stage: TimeObject) -> list[ClockAtom]:
    return [a for a, _ in stage.items]


def ambient_assignments(defs: Defs, stage: TimeObject) -> list[Env]:
    """All ways of pointing the ambient clocks at stage atoms."""
    names = [e.name for e in defs.ambient.entries]
    out = []
    for combo in itertools.product(_sorted_atoms(stage), repeat=len(names)):
        env: Env = EmptyEnv(stage)
        for n, a in zip(names, combo):
            env = ConsClock(env, n, a)
        out.append(env)
    return out


def term_defs(prog: Program):
    return [prog.defs.table[n] for n in prog.defs.order]


class _Memo:
    """Evaluation cache keyed by definition name and interned environment.

    Interning hashes each deep environment once; later lookups go by
    identity."""

    def __init__(self, ectx: EvalCtx):
        self.ectx = ectx
        self.envs: dict = {}
        self.values: dict = {}
        self.types: dict = {}

    def intern(self, env: Env) -> Env:
        return self.envs.setdefault(env, env)

    def value(self, d, env: Env):
        key = (d.name, id(env))
        got = self.values.get(key)
        if got is None:
            got = eval_term(self.ectx, d.body, project_env(env, d.ambient_len))
            self.values[key] = got
        return got

    def sem_type(self, d, env: Env):
        key = (d.name, id(env))
        got = self.types.get(key)
        if got is None:
            got = eval_type(self.ectx, d.ty, project_env(env, d.ambient_len))
            self.types[key] = got
        return got


# ---------------------------------------------------------------------------
# naturality
# ---------------------------------------------------------------------------

def suite_naturality(progs: list[Program], cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("naturality")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        memo = _Memo(ectx)
        for src in stages:
            for env in map(memo.intern, ambient_assignments(defs, src)):
                for dst in stages:
                    for mor in enumerate_morphisms(src, dst):
                        env2 = memo.intern(restrict_env(env, mor))
                        for d in term_defs(prog):
                            lhs = restrict_value(memo.value(d, env), mor)
                            rhs = memo.value(d, env2)
                            ty = memo.sem_type(d, env2)
                            ok = lhs == rhs or value_eq(ectx, lhs, rhs, ty, eq)
                            res.record(ok, lambda d=d, src=src, mor=mor,
                                       lhs=lhs, rhs=rhs: (
                                f"def={d.name} src={src} mor={mor} "
                                f"restricted={pretty_value(lhs)} "
                                f"reevaluated={pretty_value(rhs)}"))
    return res


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------

def collect_dfix(defs: Defs, t: Tm, fuel: Fuel,
                 tele: tuple[Name, ...] = ()) -> list:
    """Fixed-point instances reachable from a term under clock binders only."""
    t = whnf(defs, t, _Cell(fuel.unfold_depth))
    out: list = []
    if isinstance(t, Dfix):
        out.append((tele, t))
        out += collect_dfix(defs, t.fn, fuel, tele)
        return out
    if isinstance(t, LamForall):
        k = fresh(t.hint, CLOCK)
        out += collect_dfix(defs, open_clock(t.body, CVar(k)), fuel,
                            tele + (k,))
        return out
    if isinstance(t, (LamPi, LamTick)):
        return out
    for fname, inc in S._CHILDREN.get(type(t), ()):
        if inc != (0, 0, 0):
            continue
        child = getattr(t, fname)
        if isinstance(child, (S.TNat, S.TPi, S.TSigma, S.TId, S.TLater,
                              S.TForall, S.TUniv, S.TEl)):
            continue
        out += collect_dfix(defs, child, fuel, tele)
    return out


def _close_all(tele, node):
    for k in reversed(tele):
        node = close_clock(node, k)
    return node


def corpus_dfix(prog: Program, cfg: VerifyConfig):
    found = []
    for d in term_defs(prog):
        found += collect_dfix(prog.defs, d.body, cfg.fuel_())
    seen = set()
    out = []
    for tele, node in found:
        key = (len(tele), _close_all(tele, node))
        if key not in seen:
            seen.add(key)
            out.append((tele, node))
    return out


def _tele_envs(base_env: Env, tele, stage: TimeObject, cap: int = 4):
    combos = itertools.islice(
        itertools.product(_sorted_atoms(stage), repeat=len(tele)), cap)
    for combo in combos:
        env = base_env
        for name, atom in zip(tele, combo):
            env = ConsClock(env, name, atom)
        yield env


def dfix_unfold_terms(node: Dfix) -> tuple[Tm, Tm, Ty]:
    """The two sides of the unfolding law at the tick constant."""
    kappa = node.clock.name
    rebound = fresh(kappa.text, CLOCK)
    renamed = rename_clock(node, kappa, rebound)
    lhs = AppDiamond(cod=close_clock(rename_clock(node.ty, kappa, rebound),
                                     rebound),
                     fn=close_clock(renamed, rebound),
                     target=CVar(kappa))
    rhs = AppPi(TLater(node.clock, node.ty), node.ty, node.fn, node)
    return lhs, rhs, node.ty


def suite_fixed_point(progs: list[Program], cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("fixed-point")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        for tele, node in corpus_dfix(prog, cfg):
            lhs_t, rhs_t, ty = dfix_unfold_terms(node)
            for stage in stages:
                for base in ambient_assignments(defs, stage):
                    for env in _tele_envs(base, tele, stage):
                        lhs = eval_term(ectx, lhs_t, env)
                        rhs = eval_term(ectx, rhs_t, env)
                        sem = eval_type(ectx, ty, env)
                        ok = lhs == rhs or value_eq(ectx, lhs, rhs, sem, eq)
                        res.record(ok, lambda stage=stage, lhs=lhs, rhs=rhs: (
                            f"dfix unfolding at {stage}: "
                            f"{pretty_value(lhs)} vs {pretty_value(rhs)}"))
    return res


# ---------------------------------------------------------------------------
# tick irrelevance
# ---------------------------------------------------------------------------

def delayed_terms(prog: Program, cfg: VerifyConfig):
    """Corpus terms of delay type with a tick-independent body."""
    out = []
    for d in term_defs(prog):
        w = whnf_type(prog.defs, d.ty, _Cell(cfg.fuel))
        if isinstance(w, TLater) and isinstance(w.clock, CVar) \
                and not uses_bound_tick(w.body):
            out.append(((), DefRef(d.name), w.clock.name, w.body))
    for tele, node in corpus_dfix(prog, cfg):
        out.append((tele, node, node.clock.name, node.ty))
    return out


def suite_tick_irrelevance(progs: list[Program],
                           cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("tick-irrelevance")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        for tele, term, kappa, body_ty in delayed_terms(prog, cfg):
            for outer in stages:
                for base in ambient_assignments(defs, outer):
                    for env in _tele_envs(base, tele, outer):
                        try:
                            atom = lookup_clock_atom(env, kappa)
                        except KeyError:
                            continue
                        if env.stage.budget(atom) < 2:
                            continue
                        a1 = fresh("a", TICK)
                        a2 = fresh("a", TICK)
                        e1 = ConsTick(env, a1, kappa,
                                      tick_morphism(env.stage, atom))
                        e2 = ConsTick(e1, a2, kappa,
                                      tick_morphism(e1.stage, atom))
                        lhs = eval_term(ectx, AppTick(CVar(kappa), body_ty,
                                                      term, TickVar(a1)), e2)
                        rhs = eval_term(ectx, AppTick(CVar(kappa), body_ty,
                                                      term, TickVar(a2)), e2)
                        sem = eval_type(ectx, body_ty, e2)
                        ok = lhs == rhs or value_eq(ectx, lhs, rhs, sem, eq)
                        res.record(ok, lambda outer=outer, lhs=lhs, rhs=rhs: (
                            f"tick irrelevance at {outer}: "
                            f"{pretty_value(lhs)} vs {pretty_value(rhs)}"))
    return res


# ---------------------------------------------------------------------------
# clock irrelevance and invariance under clock introduction
# ---------------------------------------------------------------------------

def suite_clock_irrelevance(progs: list[Program],
                            cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("clock-irrelevance")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        candidates = [d for d in term_defs(prog)
                      if isinstance(d.ty, TForall)
                      and not uses_bound_clock(d.ty.body)]
        for d in candidates:
            for stage in stages:
                for env in ambient_assignments(defs, stage):
                    env_d = project_env(env, d.ambient_len)
                    v = eval_term(ectx, DefRef(d.name), env_d)
                    sem = eval_type(ectx, d.ty.body, env_d)
                    ident = identity(stage)
                    for l1, l2 in itertools.product(_sorted_atoms(stage),
                                                    repeat=2):
                        lhs = kripke_apply_clock(v, ident, l1)
                        rhs = kripke_apply_clock(v, ident, l2)
                        ok = lhs == rhs or value_eq(ectx, lhs, rhs, sem, eq)
                        res.record(ok, lambda d=d, l1=l1, l2=l2: (
                            f"def={d.name} at clocks {l1} vs {l2}"))
    return res


def suite_invariance(progs: list[Program], cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("clock-introduction-invariance")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    from .evaluate import SClkPi, SPi
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        for stage in stages:
            env = ambient_assignments(defs, stage)[0]
            target = _sorted_atoms(stage)[0]
            lam = ectx.alloc.fresh("_i")
            ext = stage.extend(lam, stage.budget(target))
            iota = TimeMorphism.of(stage, ext, {a: a for a in stage.atoms})
            merge_map = {a: a for a in stage.atoms}
            merge_map[lam] = target
            merge = TimeMorphism.of(ext, stage, merge_map)
            for d in term_defs(prog):
                env_d = project_env(env, d.ambient_len)
                sem = eval_type(ectx, d.ty, env_d)
                sem_ext = eval_type(ectx, d.ty, restrict_env(env_d, iota))
                # function carriers are only coarsely enumerable; sample
                # them sparsely and probe them with tighter bounds
                fn_like = isinstance(sem, (SPi, SClkPi))
                n = 1 if fn_like else cfg.invariance_samples
                use = EqConfig(depth=2, samples=4) if fn_like else eq
                for v in itertools.islice(enumerate_values(ectx, sem, eq), n):
                    back = restrict_value(restrict_value(v, iota), merge)
                    ok = back == v or value_eq(ectx, back, v, sem, use)
                    res.record(ok, lambda d=d, stage=stage: (
                        f"type of {d.name} at {stage}: iota then merge is "
                        f"not the identity"))
                for w in itertools.islice(enumerate_values(ectx, sem_ext, eq),
                                          n):
                    back = restrict_value(restrict_value(w, merge), iota)
                    ok = back == w or value_eq(ectx, back, w, sem_ext, use)
                    res.record(ok, lambda d=d, stage=stage: (
                        f"type of {d.name} at {stage}: merge then iota is "
                        f"not the identity"))
    return res


# ---------------------------------------------------------------------------
# diamond elimination: inverse law and budget independence
# ---------------------------------------------------------------------------

def _strict_morphisms(src: TimeObject, dst: TimeObject, atom_src: ClockAtom,
                      atom_dst: ClockAtom):
    """Morphisms carrying atom_src to atom_dst and losing budget on it, as
    non-canonical representatives of tick entries."""
    for mor in enumerate_morphisms(src, dst):
        if mor.apply(atom_src) == atom_dst and \
                src.budget(atom_src) > dst.budget(atom_dst):
            yield mor


def suite_dp_inverse(progs: list[Program], cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("diamond-projection-inverse")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        for dst in stages:
            for env in ambient_assignments(defs, dst):
                for atom in _sorted_atoms(dst):
                    kname = fresh("k", CLOCK)
                    cc = ConsClock(env, kname, atom)
                    denv = diamond_env(ectx, cc)
                    back = project_env(denv, env_len(cc))
                    res.record(back == cc, lambda dst=dst: (
                        f"projection after the fresh-clock construction is "
                        f"not the identity at {dst}"))
                    # the other composite, observed through evaluation with
                    # deliberately non-canonical tick representatives
                    probe = Dfix(CVar(kname), TNat(),
                                 LamPi(TLater(CVar(kname), TNat()), TNat(),
                                       nat_lit(2)))
                    for src in stages:
                        for atom_src in _sorted_atoms(src):
                            envs_src = ambient_assignments(defs, src)
                            for mor in itertools.islice(
                                    _strict_morphisms(src, dst, atom_src,
                                                      atom), 3):
                                cc_src = ConsClock(envs_src[0], kname,
                                                   atom_src)
                                a = fresh("a", TICK)
                                rep = ConsTick(cc_src, a, kname, mor)
                                dp = diamond_env(ectx,
                                                 restrict_env(cc_src, mor))
                                lhs = eval_term(
                                    ectx, AppTick(CVar(kname), TNat(), probe,
                                                  TickVar(a)), rep)
                                rhs = eval_term(
                                    ectx, AppTick(CVar(kname), TNat(), probe,
                                                  TickVar(dp.name)), dp)
                                ok = lhs == rhs or value_eq(
                                    ectx, lhs, rhs, eval_type(
                                        ectx, TNat(), rep), eq)
                                res.record(ok, lambda dst=dst, mor=mor,
                                           lhs=lhs, rhs=rhs: (
                                    f"observation through the fresh-clock "
                                    f"construction changed along {mor}: "
                                    f"{pretty_value(lhs)} vs "
                                    f"{pretty_value(rhs)}"))
    return res


def _diamond_users(prog: Program):
    has_diamond: dict[str, bool] = {}

    def scan(t) -> bool:
        if isinstance(t, AppDiamond):
            return True
        if isinstance(t, DefRef):
            return has_diamond.get(t.name, False)
        for fname, _ in S._CHILDREN.get(type(t), ()):
            if scan(getattr(t, fname)):
                return True
        return False

    out = []
    for name in prog.defs.order:
        d = prog.defs.table[name]
        has_diamond[name] = scan(d.body)
        if has_diamond[name]:
            out.append(d)
    return out


def _saturate(prog: Program, term: Tm, ty: Ty, fuel: Fuel,
              cap: int = 6) -> list[tuple[Tm, Ty]]:
    """Apply a term to corpus-definable arguments until no function type
    remains; only honest elements make sound probes for laws that hold of
    natural families."""
    defs = prog.defs
    w = whnf_type(defs, ty, _Cell(fuel.unfold_depth))
    if isinstance(w, TPi):
        args: list[tuple[Tm, Ty]] = []
        if conv_type(defs, w.dom, TNat(), fuel):
            args = [(nat_lit(i), TNat()) for i in (0, 2)]
        else:
            for d2 in term_defs(prog):
                if conv_type(defs, d2.ty, w.dom, fuel):
                    args.append((DefRef(d2.name), d2.ty))
        out = []
        for arg, _ in args[:2]:
            applied = AppPi(w.dom, w.cod, term, arg)
            out += _saturate(prog, applied, S.open_tm(w.cod, arg), fuel, cap)
            if len(out) >= cap:
                break
        return out[:cap]
    if isinstance(w, TForall) and defs.ambient.entries:
        k0 = defs.ambient.entries[0].name
        applied = AppForall(w.body, term, CVar(k0))
        return _saturate(prog, applied, open_clock(w.body, CVar(k0)), fuel,
                         cap)
    return [(term, ty)]


def suite_budget_independence(progs: list[Program],
                              cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("fresh-budget-independence")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    fuel = cfg.fuel_()
    for prog in progs:
        defs = prog.defs
        probes: list[tuple[str, Tm, Ty]] = []
        for d in _diamond_users(prog):
            for term, ty in _saturate(prog, DefRef(d.name), d.ty, fuel):
                probes.append((d.name, term, ty))
        for name, term, ty in probes:
            for stage in stages:
                for env in ambient_assignments(defs, stage):
                    e0 = EvalCtx(defs, diamond_extra=0)
                    e1 = EvalCtx(defs, diamond_extra=1)
                    lhs = eval_term(e0, term, env)
                    rhs = eval_term(e1, term, env)
                    sem = eval_type(e0, ty, env)
                    ok = lhs == rhs or value_eq(e0, lhs, rhs, sem, eq)
                    res.record(ok, lambda name=name, stage=stage,
                               lhs=lhs, rhs=rhs: (
                        f"def={name} at {stage} depends on the fresh budget "
                        f"used for the tick constant: {pretty_value(lhs)} "
                        f"vs {pretty_value(rhs)}"))
    return res


# ---------------------------------------------------------------------------
# substitution lemma
# ---------------------------------------------------------------------------

def _subst_catalogue(prog: Program, cfg: VerifyConfig):
    """Generated (substitution, term) instances over the ambient context.

    Covers all five formers: variable payloads, clock renaming, tick
    renaming with a trailing telescope, and the diamond former, applied to
    terms that use the substituted assumptions.
    """
    defs = prog.defs
    ambient = defs.ambient
    if not ambient.entries:
        return
    k0 = ambient.entries[0].name
    base = identity_subst(ambient)

    def dfix_probe(clock: Name) -> Tm:
        return Dfix(CVar(clock), TNat(),
                    LamPi(TLater(CVar(clock), TNat()), TNat(), nat_lit(2)))

    x = user("x", TERM)
    kappa = user("kv", CLOCK)
    alpha = user("al", TICK)
    beta = user("bt", TICK)

    # variable former
    for payload in (Zero(), nat_lit(3)):
        sigma = base.extend_var(x, payload, TNat())
        for t in (Var(x), S.Suc(Var(x)),
                  AppPi(TNat(), TNat(), DefRef("plus2"), Var(x))
                  if "plus2" in defs.table else Var(x)):
            yield sigma, t

    # clock former
    sigma_k = base.extend_clock(kappa, k0)
    yield sigma_k, dfix_probe(kappa)
    yield sigma_k, LamTick(CVar(kappa), TNat(), nat_lit(1))
    for name in ("zeros", "cozeros"):
        if name in defs.table:
            yield sigma_k, DefRef(name)

    # tick former: domain ambient, beta : k0 (with an empty trailing part)
    dom_tick = ambient.extend_tick(beta, k0)
    sigma_t = Subst(dom_tick, ambient, base.entries)
    sigma_t = sigma_t.extend_clock(kappa, k0)
    sigma_t = sigma_t.extend_tick(alpha, kappa, beta)
    yield sigma_t, AppTick(CVar(kappa), TNat(), dfix_probe(kappa),
                           TickVar(alpha))

    # diamond former
    sigma_d = base.extend_diamond(kappa, alpha, k0)
    yield sigma_d, AppTick(CVar(kappa), TNat(), dfix_probe(kappa),
                           TickVar(alpha))
    yield sigma_d, AppTick(CVar(kappa), TNat(),
                           LamTick(CVar(kappa), TNat(), nat_lit(4)),
                           TickVar(alpha))
    yield sigma_d, LamTick(CVar(kappa), TNat(),
                           AppTick(CVar(kappa), TNat(), dfix_probe(kappa),
                                   TickBound(0)))


def _env_for_ctx(ctx: Context, base: Env) -> Env | None:
    """Extend an ambient environment to a context that may add one tick."""
    env = base
    for e in ctx.entries[env_len(base):]:
        if isinstance(e, S.TickEntry):
            atom = lookup_clock_atom(env, e.clock)
            if env.stage.budget(atom) == 0:
                return None
            env = ConsTick(env, e.name, e.clock,
                           tick_morphism(env.stage, atom))
        elif isinstance(e, S.ClockEntry):
            env = ConsClock(env, e.name, _sorted_atoms(env.stage)[0])
        else:
            return None
    return env


def suite_substitution(progs: list[Program], cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("substitution-lemma")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    fuel = cfg.fuel_()
    for prog in progs:
        defs = prog.defs
        if not defs.ambient.entries:
            continue
        ectx = EvalCtx(defs)
        bodies = defs.bodies()
        for sigma, t in _subst_catalogue(prog, cfg):
            check_subst(defs, sigma, fuel)
            ty = infer(defs, sigma.cod, t, fuel)
            t_sub = subst_term(t, sigma, bodies)
            ty_sub = subst_type(ty, sigma, bodies)
            for stage in stages:
                for base in ambient_assignments(defs, stage):
                    env = _env_for_ctx(sigma.dom, base)
                    if env is None:
                        continue
                    lhs = eval_term(ectx, t_sub, env)
                    rhs = eval_term(ectx, t, apply_subst_env(ectx, sigma, env))
                    sem = eval_type(ectx, ty_sub, env)
                    ok = lhs == rhs or value_eq(ectx, lhs, rhs, sem, eq)
                    res.record(ok, lambda stage=stage, lhs=lhs, rhs=rhs: (
                        f"substitution at {stage}: syntactic "
                        f"{pretty_value(lhs)} vs semantic "
                        f"{pretty_value(rhs)}"))
    return res


# ---------------------------------------------------------------------------
# definitional equations
# ---------------------------------------------------------------------------

@dataclass
class EqInstance:
    eq_id: str
    kind: str         # "term" | "type"
    lhs: object
    rhs: object
    ty: Ty | None     # for term instances
    ctx: Context      # checking context (ambient plus listed extras)
    needs_tick: Name | None = None  # evaluate under one tick on this clock


def _figure_equations(prog: Program) -> list[EqInstance]:
    defs = prog.defs
    ambient = defs.ambient
    if not ambient.entries:
        return []
    k0 = ambient.entries[0].name
    out: list[EqInstance] = []

    def add(eq_id, kind, lhs, rhs, ty=None, ctx=ambient, needs_tick=None):
        out.append(EqInstance(eq_id, kind, lhs, rhs, ty, ctx, needs_tick))

    # clock beta: applying a clock abstraction substitutes the clock
    body_plain = nat_lit(2)
    add("clock-beta", "term",
        AppForall(TNat(), LamForall(TNat(), body_plain), CVar(k0)),
        body_plain, TNat())
    delayed_body = LamTick(CBound(0), TNat(), Zero())
    add("clock-beta", "term",
        AppForall(TLater(CBound(0), TNat()),
                  LamForall(TLater(CBound(0), TNat()), delayed_body),
                  CVar(k0)),
        LamTick(CVar(k0), TNat(), Zero()), TLater(CVar(k0), TNat()))

    # clock eta
    for name in ("constclock", "constfn", "cozeros"):
        d = defs.table.get(name)
        if d is None or not isinstance(d.ty, TForall):
            continue
        add("clock-eta", "term",
            LamForall(d.ty.body,
                      AppForall(d.ty.body, DefRef(name), CBound(0))),
            DefRef(name), d.ty)

    # tick beta, under one tick on the ambient clock
    beta = user("b", TICK)
    ctx_tick = ambient.extend_tick(beta, k0)
    add("tick-beta", "term",
        AppTick(CVar(k0), TNat(), LamTick(CVar(k0), TNat(), nat_lit(5)),
                TickVar(beta)),
        nat_lit(5), TNat(), ctx_tick, needs_tick=k0)
    if "delayed" in defs.table:
        use = AppTick(CVar(k0), TNat(), DefRef("delayed"), TickBound(0))
        add("tick-beta", "term",
            AppTick(CVar(k0), TNat(), LamTick(CVar(k0), TNat(), use),
                    TickVar(beta)),
            AppTick(CVar(k0), TNat(), DefRef("delayed"), TickVar(beta)),
            TNat(), ctx_tick, needs_tick=k0)

    # tick eta
    if "delayed" in defs.table:
        add("tick-eta", "term",
            LamTick(CVar(k0), TNat(),
                    AppTick(CVar(k0), TNat(), DefRef("delayed"),
                            TickBound(0))),
            DefRef("delayed"), TLater(CVar(k0), TNat()))
    probe = Dfix(CVar(k0), TNat(),
                 LamPi(TLater(CVar(k0), TNat()), TNat(), nat_lit(1)))
    add("tick-eta", "term",
        LamTick(CVar(k0), TNat(),
                AppTick(CVar(k0), TNat(), probe, TickBound(0))),
        probe, TLater(CVar(k0), TNat()))

    # fixed point unfolding at the tick constant
    lhs, rhs, ty = dfix_unfold_terms(probe)
    add("dfix-diamond", "term", lhs, rhs, ty)

    # tick abstraction applied to the tick constant
    kv = fresh("k", CLOCK)
    av = fresh("a", TICK)
    inner = AppTick(CVar(kv), TNat(),
                    Dfix(CVar(kv), TNat(),
                         LamPi(TLater(CVar(kv), TNat()), TNat(), nat_lit(3))),
                    TickVar(av))
    lam = LamTick(CVar(kv), TNat(), S.close_tick(inner, av))
    lhs = AppDiamond(cod=TNat(), fn=close_clock(lam, kv), target=CVar(k0))
    rhs = diamond_substitute(inner, av, kv, k0)
    add("lamtick-diamond", "term", lhs, rhs, TNat())

    # Figure 2: decoding and inclusion equations
    d0 = frozenset({CVar(k0)})
    code_forall_body = Incl(d0, d0 | {CBound(0)}, CodeNat(d0))
    add("el-forall", "type",
        TEl(d0, CodeForall(d0, code_forall_body)),
        TForall(TEl(d0 | {CBound(0)}, code_forall_body)))
    add("el-later", "type",
        TEl(d0, CodeLater(d0, CVar(k0), CodeNat(d0))),
        TLater(CVar(k0), TEl(d0, CodeNat(d0))))
    add("in-id", "term", Incl(d0, d0, CodeNat(d0)), CodeNat(d0), TUniv(d0))
    empty = frozenset()
    add("in-in", "term",
        Incl(d0, d0, Incl(empty, d0, CodeNat(empty))),
        Incl(empty, d0, CodeNat(empty)), TUniv(d0))
    add("el-in", "type",
        TEl(d0, Incl(empty, d0, CodeNat(empty))),
        TEl(empty, CodeNat(empty)))
    if len(ambient.entries) >= 2:
        k1 = ambient.entries[1].name
        d01 = frozenset({CVar(k0), CVar(k1)})
        add("in-forall", "term",
            Incl(d0, d01, CodeForall(d0, code_forall_body)),
            CodeForall(d01, Incl(d0 | {CBound(0)}, d01 | {CBound(0)},
                                 code_forall_body)),
            TUniv(d01))
        add("in-later", "term",
            Incl(d0, d01, CodeLater(d0, CVar(k0), CodeNat(d0))),
            CodeLater(d01, CVar(k0), Incl(d0, d01, CodeNat(d0))),
            TUniv(d01))
        add("in-in", "term",
            Incl(d0, d01, Incl(empty, d0, CodeNat(empty))),
            Incl(empty, d01, CodeNat(empty)), TUniv(d01))
        add("el-in", "type",
            TEl(d01, Incl(d0, d01, CodeNat(d0))),
            TEl(d0, CodeNat(d0)))
    return out


EQUATION_IDS = {
    "clock-beta", "clock-eta", "tick-beta", "tick-eta", "dfix-diamond",
    "lamtick-diamond", "el-forall", "el-later", "in-forall", "in-later",
    "el-in", "in-in", "in-id",
}


def suite_beta_eta(progs: list[Program], cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("judgemental-equality")
    stages = stage_pool(cfg)
    eq = cfg.eq()
    fuel = cfg.fuel_()
    covered: set[str] = set()
    for prog in progs:
        defs = prog.defs
        ectx = EvalCtx(defs)
        for inst in _figure_equations(prog):
            covered.add(inst.eq_id)
            if inst.kind == "term":
                accepted = conv(defs, inst.lhs, inst.rhs, fuel)
            else:
                accepted = conv_type(defs, inst.lhs, inst.rhs, fuel)
            res.record(accepted, lambda inst=inst: (
                f"{inst.eq_id}: conversion rejected the equation"))
            for stage in stages:
                for base in ambient_assignments(defs, stage):
                    env = _env_for_ctx(inst.ctx, base)
                    if env is None:
                        continue
                    if inst.kind == "term":
                        lhs = eval_term(ectx, inst.lhs, env)
                        rhs = eval_term(ectx, inst.rhs, env)
                        sem = eval_type(ectx, inst.ty, env)
                        ok = lhs == rhs or value_eq(ectx, lhs, rhs, sem, eq)
                    else:
                        ok = sem_type_eq(ectx, eval_type(ectx, inst.lhs, env),
                                         eval_type(ectx, inst.rhs, env), eq)
                    res.record(ok, lambda inst=inst, stage=stage: (
                        f"{inst.eq_id} at {stage}: sides evaluate "
                        f"differently"))
    res.extra["covered"] = sorted(covered)
    required = set(EQUATION_IDS)
    if not any(len(p.defs.ambient.entries) >= 2 for p in progs):
        # the inclusion equations between distinct universes need two
        # ambient clocks in some file
        required -= {"in-forall", "in-later"}
    missing = required - covered
    if missing:
        res.failures.append(Failure(
            res.name, f"equations never instantiated: {sorted(missing)}"))
    return res


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

ALL_SUITES = [
    suite_naturality,
    suite_fixed_point,
    suite_tick_irrelevance,
    suite_clock_irrelevance,
    suite_invariance,
    suite_dp_inverse,
    suite_budget_independence,
    suite_substitution,
    suite_beta_eta,
]


def run_verify(progs: list[Program],
               cfg: VerifyConfig | None = None) -> list[SuiteResult]:
    """Run every suite.

    At default bounds or wider, every suite must produce at least one
    instance; narrower (degenerate) bounds may legitimately leave a suite
    without instances, which then counts as passed."""
    cfg = cfg or VerifyConfig()
    results = [suite(progs, cfg) for suite in ALL_SUITES]
    defaults = VerifyConfig()
    enforce = (cfg.max_budget >= defaults.max_budget
               and cfg.max_clocks >= defaults.max_clocks)
    for r in results:
        if r.instances == 0:
            if enforce:
                r.failures.append(
                    Failure(r.name, "suite produced no instances"))
            else:
                r.extra["skipped"] = "no instances within the given bounds"
    return results
