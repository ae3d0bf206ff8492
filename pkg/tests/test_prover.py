import itertools

import pytest
from hypothesis import given, settings, strategies as st

from profpres.derivations import depth, replay
from profpres.errors import NonParallel, ReplayError
from profpres.prover import (
    Budget,
    Status,
    complete_rewrite_system,
    cross_closure,
    engine_for,
    morphisms_equal,
    normalize,
    prove_path_eq,
    theory_of_category,
)
from profpres.presentations import build_collage
from profpres.syntax import Path, all_paths_upto


def test_prove_commutation(ws, pathin, budget):
    t = theory_of_category(ws["M"])
    out = prove_path_eq(t, pathin("M", "f.g"), pathin("M", "g.f"), budget)
    assert out.status is Status.PROVED


def test_prove_morphism_image_equation(ws, pathin, budget):
    t = theory_of_category(ws["M"])
    out = prove_path_eq(t, pathin("M", "f.f.f.g"), pathin("M", "f.g.f.f"), budget)
    assert out.status is Status.PROVED
    # the witness replays under the inference rules
    lhs, rhs = replay(ws["M"], out.derivation)
    assert (str(lhs), str(rhs)) == ("f.f.f.g", "f.g.f.f")
    assert depth(out.derivation) == out.witness_depth


def test_prove_free_monoid_distinct(ws, pathin, budget):
    t = theory_of_category(ws["N"])
    out = prove_path_eq(t, pathin("N", "s"), pathin("N", "s.s"), budget)
    assert out.status is Status.DECIDED and out.equal is False
    # without completion the same query is merely not-proved
    eng = engine_for(t, budget)
    assert eng.rs is not None


def test_non_parallel_rejected(ws, pathin, budget):
    t = theory_of_category(ws["A2"])
    with pytest.raises(NonParallel):
        prove_path_eq(t, pathin("A2", "u"), pathin("A2", "id(a0)"), budget)


def test_completion_on_commutative_monoid(ws, budget):
    t = theory_of_category(ws["M"])
    rs = complete_rewrite_system(t, budget)
    assert rs is not None
    assert [(str(l), str(r)) for l, r in rs.rules] == [("g.f", "f.g")]
    # both orderings of f.g.f normalize to the sorted word
    assert str(rs.normalize(parse("M", ws, "f.g.f"))) == "f.f.g"
    assert str(rs.normalize(parse("M", ws, "g.f.f"))) == "f.f.g"


def parse(name, ws, text):
    from profpres.dsl import parse_path_for

    return parse_path_for(ws[name], text)


def test_completion_empty_for_free_monoid(ws, budget):
    rs = complete_rewrite_system(theory_of_category(ws["N"]), budget)
    assert rs is not None and rs.rules == ()


def test_completion_on_instance_collage(ws, budget):
    col = ws["Qc"].at_pairs[0][1].collage
    rs = complete_rewrite_system(col.theory, budget)
    assert rs is not None
    assert [(str(l), str(r)) for l, r in rs.rules] == [("q.t.t", "q.t")]
    # two applications
    q_ttt = col.embed_term(_term(ws, "Qc", "q.t.t.t"))
    assert str(rs.normalize(q_ttt)) == "q.t"


def _term(ws, curried_name, text):
    from profpres.dsl import parse_path_for

    inst = ws[curried_name].at_pairs[0][1]
    return parse_path_for(inst, text)


def test_normalize_identity_is_normal(ws, budget):
    t = theory_of_category(ws["M"])
    rs = complete_rewrite_system(t, budget)
    one = Path.identity(ws["M"].sorts[0])
    assert normalize(rs, one) == one


def test_normalize_single_application(ws, budget):
    t = theory_of_category(ws["M"])
    rs = complete_rewrite_system(t, budget)
    assert str(normalize(rs, parse("M", ws, "g.f"))) == "f.g"


def test_morphisms_equal_model_indistinguishable(ws, budget):
    F, G = ws["Fs"], ws["Gs"]
    assert F != G  # purely syntactic inequality
    out = morphisms_equal(F, G, budget)
    assert out.status is Status.PROVED


def test_morphisms_equal_reflexive(ws, budget):
    out = morphisms_equal(ws["F"], ws["F"], budget)
    assert out.is_positive


def test_morphisms_equal_distinct_normal_forms(ws, budget):
    from profpres.syntax import CatMorphism, Path

    N, M = ws["N"], ws["M"]
    s = N.funs[0]
    f, g = M.funs
    F = CatMorphism.make("F1", N, M, {N.sorts[0]: M.sorts[0]}, {s: Path(M.sorts[0], (f,))})
    G = CatMorphism.make("G1", N, M, {N.sorts[0]: M.sorts[0]}, {s: Path(M.sorts[0], (g,))})
    out = morphisms_equal(F, G, budget)
    assert out.is_certified_negative


def test_curried_morphisms_equal(ws, budget):
    from profpres.presentations import CurriedMorphism

    ident = CurriedMorphism.identity(ws["Pc"])
    assert morphisms_equal(ident, ident, budget).is_positive
    ell = ws["ell"]
    out = morphisms_equal(ell, ident, budget)
    assert out.is_certified_negative or out.status is Status.NOT_PROVED


def test_closure_soundness_replay(ws, budget):
    """Every closure-proved pair replays as a derivation."""
    for name in ("M", "N", "O"):
        cat = ws[name]
        t = theory_of_category(cat)
        eng = engine_for(t, Budget(max_path_length=4))
        paths = all_paths_upto(cat, 4)
        checked = 0
        for p, q in itertools.combinations(paths, 2):
            if p.start != q.start or p.end != q.end:
                continue
            out = eng.prove(p, q)
            if out.status is Status.PROVED:
                lhs, rhs = replay(cat, out.derivation)
                assert (lhs, rhs) == (p, q)
                checked += 1
        if name == "M":
            assert checked > 0


def test_replay_rejects_bogus_derivation(ws):
    from profpres.derivations import Ax, Trans

    with pytest.raises(ReplayError):
        replay(ws["M"], Ax(5))
    with pytest.raises(ReplayError):
        replay(ws["M"], Trans(Ax(0), Ax(0)))  # endpoints do not chain


def test_budget_monotonicity(ws, pathin):
    """Enlarging any budget field never flips Proved off."""
    t = theory_of_category(ws["M"])
    goals = [
        (pathin("M", "f.g"), pathin("M", "g.f")),
        (pathin("M", "f.f.f.g"), pathin("M", "f.g.f.f")),
        (pathin("M", "f.g.g"), pathin("M", "g.g.f")),
    ]
    ladder = [
        Budget(max_path_length=4, max_closure_rounds=4, max_kb_steps=50),
        Budget(max_path_length=5, max_closure_rounds=8, max_kb_steps=100),
        Budget(max_path_length=6, max_closure_rounds=12, max_kb_steps=200),
        Budget(max_path_length=8, max_closure_rounds=16, max_kb_steps=500),
    ]
    proved_before: set[int] = set()
    for b in ladder:
        eng = engine_for(t, b)
        proved_now = {
            i for i, (p, q) in enumerate(goals) if eng.prove(p, q).status is Status.PROVED
        }
        assert proved_before <= proved_now
        proved_before = proved_now
    assert proved_before == {0, 1, 2}


@pytest.mark.parametrize("name", ["M", "N", "O", "A2", "B2", "Nf", "Ob"])
def test_completion_agrees_with_closure(ws, name):
    """Decided never contradicts closure-Proved on pairs up to length 6."""
    cat = ws[name]
    t = theory_of_category(cat)
    b = Budget(max_path_length=6)
    eng = engine_for(t, b)
    assert eng.rs is not None
    paths = all_paths_upto(cat, 6)
    by_ends = {}
    for p in paths:
        by_ends.setdefault((p.start, p.end), []).append(p)
    for group in by_ends.values():
        for p, q in itertools.combinations(group, 2):
            closure_proved = eng.closure.proves(p, q)
            decided_equal = eng.rs.normalize(p) == eng.rs.normalize(q)
            if closure_proved:
                assert decided_equal


@pytest.mark.parametrize("name", ["Pc_u", "Qapp", "Papp", "I"])
def test_cross_closure_matches_general_closure(ws, name):
    """The specialised cross-path relation agrees with the general closure
    restricted to cross-paths, on all parallel pairs up to length 5."""
    from profpres.bridge import uncurry

    if name == "Pc_u":
        P = uncurry(ws["Pc"])
    elif name == "I":
        P = ws["I"].as_uncurried()
    else:
        P = ws[name]
    theory = build_collage(P)
    b = Budget(max_path_length=5)
    eng = engine_for(theory, b)
    special = cross_closure(theory, b)
    crosses = theory.cross_paths_upto(5)
    by_ends = {}
    for p in crosses:
        by_ends.setdefault((p.start, p.end), []).append(p)
    compared = 0
    for group in by_ends.values():
        for p, q in itertools.combinations(group, 2):
            assert eng.closure.proves(p, q) == special.proves(p, q)
            compared += 1
    assert compared > 0


def test_cross_closure_derivations_replay(ws):
    theory = build_collage(ws["Qapp"])
    b = Budget(max_path_length=4)
    special = cross_closure(theory, b)
    crosses = theory.cross_paths_upto(4)
    for p, q in itertools.combinations(crosses, 2):
        if p.start != q.start or p.end != q.end:
            continue
        if special.proves(p, q):
            i, j = special.index[p], special.index[q]
            lhs, rhs = replay(theory.cat, special.explain(i, j))
            assert (lhs, rhs) == (p, q)


def test_engine_class_key_is_canonical(ws, budget):
    t = theory_of_category(ws["M"])
    eng = engine_for(t, budget)
    assert str(eng.class_key(parse("M", ws, "g.f"))) == "f.g"
    assert str(eng.class_key(parse("M", ws, "f.g"))) == "f.g"


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from("fg"), max_size=5),
    st.lists(st.sampled_from("fg"), max_size=5),
)
def test_decided_matches_commutative_count(a, b):
    # property: words over {f,g} are equal in the commutative monoid iff the
    # letter counts agree; the oracle is counting
    from profpres.dsl import parse_workspace

    wsl = parse_workspace(
        "category M { sorts *; fun f : * -> *; fun g : * -> *; eq f.g = g.f; }"
    )
    M = wsl["M"]
    star = M.sorts[0]
    f, g = M.funs
    to_path = lambda letters: Path(star, tuple(f if ch == "f" else g for ch in letters))
    t = theory_of_category(M)
    eng = engine_for(t, Budget(max_path_length=6))
    expected = sorted(a) == sorted(b)
    out = eng.prove(to_path(a), to_path(b))
    assert out.is_positive == expected
