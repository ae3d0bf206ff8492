import pytest

from profpres.bridge import (
    CheckStatus,
    check_conservative,
    check_nongenerative,
    curry,
    curry_with_report,
    find_right_witness,
    roundtrip_cells,
    uncurry,
    uncurry_morphism,
)
from profpres.compose import compose_curried, left_unitor, unit_presentation
from profpres.errors import CurryValidationFailed, NonGlobular, NongenerativityUnverified
from profpres.presentations import (
    CrossPath,
    CurriedMorphism,
    Term,
    ValidationStatus,
    prove_cross_eq,
    validate_curried,
    validate_curried_morphism,
    validate_morphism,
)
from profpres.prover import Budget, morphisms_equal
from profpres.syntax import Path

CORPUS_CURRIED = ["Pc", "Qc", "R2"]


def test_uncurry_running_example(ws):
    Pu = uncurry(ws["Pc"])
    assert [p.name for p in Pu.pros] == ["x", "y"]
    assert [str(e) for e in Pu.eqs] == [
        "x.s = x",
        "f.x = x",
        "f.y = y.s",
        "g.x = x",
        "g.y = y.s.s",
    ]


def test_uncurry_unit_of_trivial(ws):
    U = unit_presentation(ws["T0"])
    Uu = uncurry(U)
    assert len(Uu.pros) == 1 and Uu.eqs == ()


def test_uncurry_composite_has_seven_equations(ws):
    R = compose_curried(ws["Pc"], ws["Qc"])
    Ru = uncurry(R)
    eqs = [str(e) for e in Ru.eqs]
    assert len(eqs) == 7
    assert "f.x*q = x*q" in eqs
    assert "f.y*q = y*q.t" in eqs
    assert "g.y*q = y*q.t.t" in eqs
    assert "x*q.t = x*q" in eqs


def test_uncurry_morphism_identity(ws, budget):
    ident = CurriedMorphism.identity(ws["Pc"])
    mu = uncurry_morphism(ident)
    assert all(cp.is_right and cp.right.is_identity for _, cp in mu.pro_pairs)
    assert validate_morphism(mu, budget).status is ValidationStatus.VALID


def test_uncurry_morphism_of_left_unitor(ws, budget):
    lam, _ = left_unitor(ws["Pc"])
    mu = uncurry_morphism(lam)
    # generators x_* (x) x and x_* (x) y land on the bare generators
    images = {p.name: str(cp) for p, cp in mu.pro_pairs}
    assert images == {"x_**x": "x", "x_**y": "y"}
    assert validate_morphism(mu, budget).status is ValidationStatus.VALID
    assert mu.is_rightward


def test_uncurry_morphism_rejects_non_globular(ws):
    # fabricate a non-globular cell by switching a frame morphism
    from profpres.presentations import CurriedMorphism, InstanceMorphism
    from profpres.syntax import CatMorphism

    P = ws["Pc"]
    f0 = CatMorphism.make(
        "sw",
        P.left,
        P.left,
        {P.left.sorts[0]: P.left.sorts[0]},
        {
            P.left.funs[0]: Path(P.left.sorts[0], (P.left.funs[1],)),
            P.left.funs[1]: Path(P.left.sorts[0], (P.left.funs[0],)),
        },
    )
    comps = {
        P.left.sorts[0]: InstanceMorphism.identity(P.at_pairs[0][1])
    }
    cell = CurriedMorphism.make("tw", P, P, comps, f0=f0)
    with pytest.raises(NonGlobular):
        uncurry_morphism(cell)


@pytest.mark.parametrize("name", CORPUS_CURRIED)
def test_uncurried_images_strictly_nongenerative(ws, name, budget):
    out = check_nongenerative(uncurry(ws[name]), budget, strict=True)
    assert out.status is CheckStatus.HOLDS and out.certified


@pytest.mark.parametrize("name", ["Papp", "Qapp"])
def test_appendix_presentations_nongenerative(ws, name, budget):
    assert check_nongenerative(ws[name], budget).status is CheckStatus.HOLDS
    assert check_nongenerative(ws[name], budget, strict=True).status is CheckStatus.HOLDS


def test_prop_growth_example_inconclusive_nongenerativity(ws, budget):
    out = check_nongenerative(ws["Qu"], budget)
    assert out.status is CheckStatus.INCONCLUSIVE
    assert [str(c) for c in out.candidates] == ["f.q"]


def test_nongenerative_structural_failure_certified(ws, budget):
    # a profunctor symbol reachable from a sort with no symbols of its own
    from profpres.presentations import ProSym, UncurriedPresentation

    A2, B2 = ws["A2"], ws["B2"]
    a0, a1 = A2.sorts
    P = UncurriedPresentation(
        "gap", A2, B2, (ProSym("p", a1, B2.sorts[0]),), ()
    )
    out = check_nongenerative(P, budget)
    assert out.status is CheckStatus.FAILS and out.certified


def test_find_right_witness_bfs_order(ws, budget):
    Q = ws["Qapp"]
    f = Q.left.funs[0]
    q = Q.pros[0]
    l = CrossPath(Path(f.source, (f,)), q, Path.identity(q.target))
    r = find_right_witness(Q, l, budget)
    assert str(r) == "q.a"
    assert prove_cross_eq(Q, r, l, budget).is_positive


def test_conservativity_of_uncurried_images(ws, budget):
    for name in CORPUS_CURRIED:
        out = check_conservative(uncurry(ws[name]), budget)
        assert out.status is CheckStatus.HOLDS


def test_conservativity_fails_on_appendix(ws, budget):
    out = check_conservative(ws["Qapp"], budget)
    assert out.status is CheckStatus.FAILS and out.certified
    assert (str(out.witnesses[0][0]), str(out.witnesses[0][1])) == ("q.a", "q.a.b")
    # the derivation behind the witness: q.a ~ f.q ~ f.q.b ~ q.a.b in Q
    lhs = _cross(ws, "Qapp", "q.a")
    rhs = _cross(ws, "Qapp", "q.a.b")
    assert prove_cross_eq(ws["Qapp"], lhs, rhs, budget).is_positive


def _cross(ws, name, text):
    from profpres.dsl import parse_path_for

    return parse_path_for(ws[name], text)


def test_conservativity_trivial_when_no_equations(ws, budget):
    out = check_conservative(ws["Pu"], budget)
    assert out.status is CheckStatus.HOLDS and out.certified


def test_curry_roundtrip_matches_original_actions(ws, budget):
    P2, report = curry_with_report(uncurry(ws["Pc"]), budget)
    assert report.status is ValidationStatus.VALID
    images = {
        f.name: {g.name: str(t) for g, t in m.gen_pairs} for f, m in P2.act_pairs
    }
    assert images == {
        "f": {"x": "x", "y": "y.s"},
        "g": {"x": "x", "y": "y.s.s"},
    }


def test_curry_appendix_raises_validation_failure(ws, budget):
    with pytest.raises(CurryValidationFailed) as err:
        curry(ws["Qapp"], budget)
    assert "q.a" in str(err.value) and "q.a.b" in str(err.value)


def test_curry_requires_nongenerativity(ws, budget):
    with pytest.raises(NongenerativityUnverified):
        curry(ws["Qu"], budget)


def test_curry_strict_input_is_deterministic(ws, budget):
    # strict pairing equations pin the choice function: rerunning agrees
    Pu = uncurry(ws["Pc"])
    a, _ = curry_with_report(Pu, budget)
    b, _ = curry_with_report(Pu, budget)
    assert a == b


@pytest.mark.parametrize("name", CORPUS_CURRIED)
def test_roundtrip_iso_cells(ws, name, budget):
    P = ws[name]
    fwd, bwd = roundtrip_cells(P, budget)
    assert validate_curried_morphism(fwd, budget).status is ValidationStatus.VALID
    assert validate_curried_morphism(bwd, budget).status is ValidationStatus.VALID
    assert morphisms_equal(
        fwd.then(bwd), CurriedMorphism.identity(P), budget
    ).is_positive
    assert morphisms_equal(
        bwd.then(fwd), CurriedMorphism.identity(fwd.target), budget
    ).is_positive


@pytest.mark.parametrize("name", CORPUS_CURRIED)
def test_barred_action_lemma(ws, name):
    """f.t-bar is provably equal to the bar of the action image, for paths of
    length <= 3 and terms of length <= 3."""
    from profpres.bridge import _bar_names

    # the image of a length-3 term under a length-3 action can be 9 symbols
    # long (each step may double the tail), so the universe must reach it
    budget = Budget(max_path_length=10, max_closure_rounds=20)
    P = ws[name]
    Pu = uncurry(P)
    names = _bar_names(P)
    pros = {p.name: p for p in Pu.pros}
    from profpres.syntax import all_paths_upto

    checked = 0
    for fpath in all_paths_upto(P.left, 3):
        c2 = fpath.end  # terms live at the path's target
        for t in P.at(c2).terms_upto(3):
            bar_t = CrossPath(Path.identity(c2), pros[names[(c2, t.gen)]], t.tail)
            lhs = CrossPath(fpath, bar_t.pro, bar_t.right)
            img = P.act_path(fpath, t)
            rhs = CrossPath(
                Path.identity(fpath.start), pros[names[(fpath.start, img.gen)]], img.tail
            )
            assert prove_cross_eq(Pu, lhs, rhs, budget).is_positive
            checked += 1
    assert checked > 0
