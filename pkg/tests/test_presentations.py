import itertools

import pytest

from profpres.errors import UnknownSort
from profpres.presentations import (
    CrossPath,
    CurriedMorphism,
    GenSym,
    InstanceMorphism,
    InstancePresentation,
    Term,
    TermEquation,
    UncurriedPresentation,
    ValidationStatus,
    build_collage,
    fiber_instance,
    validate_curried,
    validate_curried_morphism,
    validate_morphism,
)
from profpres.prover import Budget
from profpres.syntax import CatMorphism, Path


def test_collage_of_simple_uncurried(ws):
    t = build_collage(ws["Pu"])
    names = sorted(s.name for s in t.cat.sorts)
    assert names == ["c", "d"]
    assert sorted(f.name for f in t.cat.funs) == ["f", "p"]
    assert t.cat.eqs == ()


def test_collage_of_instance_renames_on_collision(ws):
    t = build_collage(ws["I"])
    assert [s.name for s in t.cat.sorts] == ["*", "*_N"]
    assert sorted(f.name for f in t.cat.funs) == ["s", "x", "y"]
    assert len(t.cat.eqs) == 1
    assert str(t.cat.eqs[0].lhs) == "x.s"


def test_collage_of_empty_uncurried_is_disjoint_union(ws):
    empty = UncurriedPresentation("none", ws["M"], ws["N"], (), ())
    t = build_collage(empty)
    assert len(t.cat.sorts) == 2
    assert len(t.cat.funs) == len(ws["M"].funs) + len(ws["N"].funs)
    assert len(t.cat.eqs) == len(ws["M"].eqs)


def test_collage_partition_tags(ws):
    t = build_collage(ws["Qapp"])
    part = t.partition
    assert [f.name for f in part.pro_funs] == ["q"]
    assert [f.name for f in part.left_funs] == ["f"]
    assert sorted(f.name for f in part.right_funs) == ["a", "b"]


def test_fiber_of_appendix_counterexample(ws):
    Q = ws["Qapp"]
    fib = fiber_instance(Q, Q.left.sorts[0])
    assert [g.name for g in fib.gens] == ["q"]
    # the equation whose left side starts with a base symbol is dropped
    assert [str(e) for e in fib.eqs] == ["q = q.b"]


def test_fiber_of_uncurried_unit(ws, budget):
    from profpres.bridge import uncurry
    from profpres.compose import unit_presentation

    Pu = uncurry(ws["Pc"])
    fib = fiber_instance(Pu, Pu.left.sorts[0])
    assert [g.name for g in fib.gens] == ["x", "y"]
    assert [str(e) for e in fib.eqs] == ["x.s = x"]


def test_fiber_no_equations(ws):
    fib = fiber_instance(ws["Pu"], ws["Pu"].left.sorts[0])
    assert [g.name for g in fib.gens] == ["p"] and fib.eqs == ()


def test_fiber_unknown_sort(ws):
    with pytest.raises(UnknownSort):
        fiber_instance(ws["Pu"], ws["N"].sorts[0])


def test_validate_cat_morphism_valid(ws, budget):
    rep = validate_morphism(ws["F"], budget)
    assert rep.status is ValidationStatus.VALID


def test_validate_identity_morphism(ws, budget):
    for name in ("M", "N", "A2"):
        rep = validate_morphism(CatMorphism.identity(ws[name]), budget)
        assert rep.status is ValidationStatus.VALID


def test_validate_morphism_into_free_monoid(ws, budget):
    # images of both equation sides coincide, so this is valid
    M, N = ws["M"], ws["N"]
    s = N.funs[0]
    f, g = M.funs
    F = CatMorphism.make(
        "collapse",
        M,
        N,
        {M.sorts[0]: N.sorts[0]},
        {f: Path(N.sorts[0], (s,)), g: Path(N.sorts[0], (s, s))},
    )
    rep = validate_morphism(F, budget)
    assert rep.status is ValidationStatus.VALID


def test_validate_instance_morphism(ws, budget):
    rep = validate_morphism(ws["h"], budget)
    assert rep.status is ValidationStatus.VALID


def test_validate_uncurried_morphism(ws, budget):
    rep = validate_morphism(ws["up"], budget)
    assert rep.status is ValidationStatus.VALID
    assert ws["up"].is_rightward


def test_validate_curried_running_example(ws, budget):
    rep = validate_curried(ws["Pc"], budget)
    assert rep.status is ValidationStatus.VALID
    # both composite routes send y to y.s.s.s
    labels = [i.label for i in rep.items if "y.s.s.s" in i.label]
    assert labels


def test_validate_unit_presentations(ws, budget):
    from profpres.compose import unit_presentation

    for name in ("M", "N", "O", "T0", "A2"):
        rep = validate_curried(unit_presentation(ws[name]), budget)
        assert rep.status is ValidationStatus.VALID


def test_validate_curried_broken_action(ws, budget):
    # sending the fixed-point generator to the free one breaks the equation
    Pc = ws["Pc"]
    inst = Pc.at_pairs[0][1]
    x, y = inst.gens
    broken_f = InstanceMorphism.make(
        "bad", inst, inst, {x: Term.of(y), y: Term(y, Path(y.sort, (inst.base.funs[0],)))}
    )
    from profpres.presentations import CurriedPresentation

    bad = CurriedPresentation.make(
        "bad",
        Pc.left,
        Pc.right,
        dict(Pc.at_pairs),
        {Pc.left.funs[0]: broken_f, Pc.left.funs[1]: Pc.act_pairs[1][1]},
    )
    rep = validate_curried(bad, budget)
    assert rep.status is ValidationStatus.INVALID
    assert rep.counterexample is not None


def test_validate_curried_morphism_identity(ws, budget):
    rep = validate_curried_morphism(CurriedMorphism.identity(ws["Pc"]), budget)
    assert rep.status is ValidationStatus.VALID


def test_validate_curried_morphism_from_corpus(ws, budget):
    rep = validate_curried_morphism(ws["ell"], budget)
    assert rep.status is ValidationStatus.VALID


def test_validate_curried_morphism_negative_control(ws, budget):
    # swap the two generator images at one component: the square for f breaks
    Pc = ws["Pc"]
    inst = Pc.at_pairs[0][1]
    x, y = inst.gens
    bad_comp = InstanceMorphism.make("swap", inst, inst, {x: Term.of(y), y: Term.of(x)})
    bad = CurriedMorphism.make("bad", Pc, Pc, {Pc.left.sorts[0]: bad_comp})
    rep = validate_curried_morphism(bad, budget)
    assert rep.status is not ValidationStatus.VALID
    offending = [i.label for i in rep.items if not i.outcome.is_positive]
    assert offending


def test_unique_term_decomposition(ws):
    I = ws["I"]
    col = I.collage
    seen = set()
    for t in I.terms_upto(5):
        # the split form is the decomposition: generator then base path
        assert t.gen in I.gens
        assert I.base.owns_path(t.tail)
        embedded = col.embed_term(t)
        back = col.unembed_cross(embedded)
        assert back.pro.name == t.gen.name and back.right == t.tail
        assert t not in seen
        seen.add(t)


def test_fiber_generators_match_curried_generators(ws):
    from profpres.bridge import uncurry

    for name in ("Pc", "Qc", "R2"):
        P = ws[name]
        Pu = uncurry(P)
        for c in P.left.sorts:
            fib = fiber_instance(Pu, c)
            assert len(fib.gens) == len(P.at(c).gens)


def test_validation_reports_never_raise_on_inconclusive(ws):
    # a starved budget yields inconclusive, not an exception
    tiny = Budget(max_path_length=1, max_closure_rounds=1, max_kb_steps=1)
    rep = validate_curried(ws["Pc"], tiny)
    assert rep.status in (ValidationStatus.VALID, ValidationStatus.INCONCLUSIVE)
