import itertools

import pytest
from hypothesis import given, strategies as st

from clott.stages import (
    ClockAllocator, ClockAtom, StageError, TimeMorphism, TimeObject,
    clock_intro_iota, compose, decrement_morphism, enumerate_morphisms,
    identity, is_morphism, parse_stage, tick_morphism,
)

a = ClockAtom("a")
b = ClockAtom("b")
c = ClockAtom("c")


def stage(**kw):
    return TimeObject(tuple((ClockAtom(n), v) for n, v in kw.items()))


def test_morphism_requires_pointwise_budget_drop():
    src = stage(a=2, b=1)
    dst = stage(c=1)
    atom_c = ClockAtom("c")
    assert is_morphism(src, dst, {ClockAtom("a"): atom_c,
                                  ClockAtom("b"): atom_c})


def test_morphism_rejects_budget_growth():
    src = stage(a=2, b=1)
    dst = stage(c=2)
    atom_c = ClockAtom("c")
    assert not is_morphism(src, dst, {ClockAtom("a"): atom_c,
                                      ClockAtom("b"): atom_c})


def test_identity_is_a_morphism():
    s = stage(a=3, b=0)
    assert identity(s).is_identity()


def test_compose_identity_laws():
    s, t = stage(a=2), stage(a=1)
    tau = TimeMorphism.of(s, t, {ClockAtom("a"): ClockAtom("a")})
    assert compose(tau, identity(s)) == tau
    assert compose(identity(t), tau) == tau


def test_compose_is_associative_on_a_concrete_triple():
    s0 = stage(a=3, b=3)
    s1 = stage(a=2, b=2)
    s2 = stage(a=1)
    for m1 in enumerate_morphisms(s0, s1):
        for m2 in enumerate_morphisms(s1, s2):
            for m3 in enumerate_morphisms(s2, stage(a=0)):
                lhs = compose(m3, compose(m2, m1))
                rhs = compose(compose(m3, m2), m1)
                assert lhs == rhs


def test_tick_spends_one_unit():
    s = stage(a=3)
    m = tick_morphism(s, ClockAtom("a"))
    assert m.dst.budget(ClockAtom("a")) == 2
    assert all(x == y for x, y in m.mapping)


def test_tick_leaves_other_clocks_alone():
    s = stage(a=1, b=0)
    m = tick_morphism(s, ClockAtom("a"))
    assert m.dst.budget(ClockAtom("a")) == 0
    assert m.dst.budget(ClockAtom("b")) == 0


def test_tick_at_zero_budget_fails():
    with pytest.raises(StageError):
        tick_morphism(stage(a=0), ClockAtom("a"))


def test_enumerate_single_clock_identity_only():
    s = stage(a=1)
    mors = enumerate_morphisms(s, s)
    assert len(mors) == 1 and mors[0].is_identity()


def test_enumerate_includes_budget_losing_map():
    src = stage(a=2)
    dst = stage(a=1)
    assert len(enumerate_morphisms(src, dst)) == 1


def test_enumerate_empty_when_budget_grows():
    assert enumerate_morphisms(stage(a=0), stage(a=1)) == []


def test_clock_intro_adjoins_a_fresh_clock():
    iota, atom = clock_intro_iota(TimeObject(), 2)
    assert atom in iota.dst.atoms
    assert iota.dst.budget(atom) == 2


def test_clock_intro_is_fresh():
    s = stage(a=1, b=2)
    alloc = ClockAllocator()
    for _ in range(5):
        _, atom = clock_intro_iota(s, 1, alloc)
        assert atom not in s.atoms


def test_two_intros_compose():
    s = stage(a=1)
    alloc = ClockAllocator()
    i1, _ = clock_intro_iota(s, 2, alloc)
    i2, _ = clock_intro_iota(i1.dst, 3, alloc)
    both = compose(i2, i1)
    assert both.src == s and len(both.dst.atoms) == 3


def test_decrement_morphism_keeps_validity():
    src = stage(a=2, b=1)
    dst = stage(a=1, b=1)
    m = TimeMorphism.of(src, dst, {ClockAtom("a"): ClockAtom("a"),
                                   ClockAtom("b"): ClockAtom("b")})
    d = decrement_morphism(m, ClockAtom("a"))
    assert d.src.budget(ClockAtom("a")) == 1
    assert d.dst.budget(ClockAtom("a")) == 0


def test_parse_stage_two_clocks():
    s = parse_stage("k0=3,k1=2")
    assert {x.label for x in s.atoms} == {"k0", "k1"}
    assert s.budget(ClockAtom("k0")) == 3


def test_parse_stage_empty():
    assert parse_stage("") == TimeObject()


def test_parse_stage_duplicate_name():
    with pytest.raises(StageError):
        parse_stage("k=3,k=2")


def test_parse_stage_negative_budget():
    with pytest.raises(StageError, match="nonnegative"):
        parse_stage("k=-1")


@given(st.lists(st.integers(min_value=0, max_value=3), min_size=1,
                max_size=2),
       st.lists(st.integers(min_value=0, max_value=3), min_size=1,
                max_size=2))
def test_enumerated_morphisms_are_valid(src_budgets, dst_budgets):
    atoms = [a, b]
    src = TimeObject(tuple(zip(atoms, src_budgets)))
    dst = TimeObject(tuple(zip(atoms, dst_budgets)))
    for m in enumerate_morphisms(src, dst):
        for atom, image in m.mapping:
            assert dst.budget(image) <= src.budget(atom)
