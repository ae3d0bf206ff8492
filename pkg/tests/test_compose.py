import itertools

import pytest

from profpres.compose import (
    associator,
    coherence_cell,
    compose_curried,
    compose_curried_morphisms,
    left_unitor,
    right_unitor,
    tensor,
    unit_presentation,
)
from profpres.errors import BaseMismatch, FrameMismatch
from profpres.presentations import (
    CurriedMorphism,
    Term,
    ValidationStatus,
    prove_term_eq,
    validate_curried,
    validate_curried_morphism,
)
from profpres.prover import Budget, morphisms_equal


def test_tensor_pushes_left_tail_through_actions(ws, pathin):
    Pc, Qc = ws["Pc"], ws["Qc"]
    star = Pc.left.sorts[0]
    s = pathin("Pc@", "y.s") if False else _term(ws, "Pc", "y.s")
    t = _term(ws, "Qc", "q")
    out = tensor(Pc, Qc, star, s, t)
    assert str(out) == "y*q.t"


def _term(ws, curried_name, text, sort_index=0):
    from profpres.dsl import parse_path_for

    inst = ws[curried_name].at_pairs[sort_index][1]
    return parse_path_for(inst, text)


def test_tensor_generator_pair_is_bare(ws):
    Pc, Qc = ws["Pc"], ws["Qc"]
    star = Pc.left.sorts[0]
    out = tensor(Pc, Qc, star, _term(ws, "Pc", "x"), _term(ws, "Qc", "q"))
    assert str(out) == "x*q" and out.tail.is_identity


def test_tensor_right_tail_becomes_split_path(ws):
    Pc, Qc = ws["Pc"], ws["Qc"]
    star = Pc.left.sorts[0]
    out = tensor(Pc, Qc, star, _term(ws, "Pc", "x"), _term(ws, "Qc", "q.t"))
    assert str(out) == "x*q.t"


def test_compose_running_example_exactly(ws, budget):
    R = compose_curried(ws["Pc"], ws["Qc"])
    inst = R.at_pairs[0][1]
    assert [g.name for g in inst.gens] == ["x*q", "y*q"]
    assert [str(e) for e in inst.eqs] == [
        "x*q.t = x*q",
        "x*q.t.t = x*q.t",
        "y*q.t.t = y*q.t",
    ]
    images = {
        f.name: {g.name: str(t) for g, t in m.gen_pairs} for f, m in R.act_pairs
    }
    assert images == {
        "f": {"x*q": "x*q", "y*q": "y*q.t"},
        "g": {"x*q": "x*q", "y*q": "y*q.t.t"},
    }
    assert validate_curried(R, budget).status is ValidationStatus.VALID


def test_compose_with_empty_side_is_empty(ws, budget):
    from profpres.presentations import CurriedPresentation, InstancePresentation

    N, O = ws["N"], ws["O"]
    empty_inst = InstancePresentation("none", O, (), ())
    from profpres.presentations import InstanceMorphism

    Q0 = CurriedPresentation.make(
        "Q0",
        N,
        O,
        {N.sorts[0]: empty_inst},
        {N.funs[0]: InstanceMorphism.make("e", empty_inst, empty_inst, {})},
    )
    R = compose_curried(ws["Pc"], Q0)
    assert all(inst.gens == () for _, inst in R.at_pairs)


def test_compose_base_mismatch(ws):
    with pytest.raises(BaseMismatch):
        compose_curried(ws["Pc"], ws["Pc"])


def test_compose_generator_count_formula(ws):
    for left, right in (("Pc", "Qc"), ("R2", None)):
        P = ws[left]
        Q = compose_curried_partner(ws, left, right)
        R = compose_curried(P, Q)
        for c in P.left.sorts:
            expected = sum(len(Q.at(p.sort).gens) for p in P.at(c).gens)
            assert len(R.at(c).gens) == expected
            expected_eqs = sum(
                len(Q.at(p.sort).gens) for _ in [0] for p in []
            )  # recomputed below
        # equation count: one per (P-equation, Q-generator) + (P-generator, Q-equation)
        for c in P.left.sorts:
            n1 = sum(len(Q.at(eq.lhs.sort).gens) for eq in P.at(c).eqs)
            n2 = sum(len(Q.at(p.sort).eqs) for p in P.at(c).gens)
            assert len(R.at(c).eqs) == n1 + n2


def compose_curried_partner(ws, left, right):
    if right is not None:
        return ws[right]
    return unit_presentation(ws[left].right)


def test_composite_action_on_split_terms_structural(ws):
    """(P*Q)(f)(s (x) t) is literally P(f)(s) (x) t, up to term length 4."""
    P, Q = ws["Pc"], ws["Qc"]
    R = compose_curried(P, Q)
    c = P.left.sorts[0]
    for f in P.left.funs:
        act = R.act(f)
        for s in P.at(c).terms_upto(3):
            for t in Q.at(s.sort).terms_upto(2):
                if len(s) + len(t) - 1 > 4:
                    continue
                lhs = act.apply(tensor(P, Q, c, s, t))
                rhs = tensor(P, Q, c, P.act(f).apply(s), t)
                assert lhs == rhs


def test_tensor_respects_provable_equality(ws, budget):
    """Provably equal factors tensor to provably equal terms (sampled)."""
    P, Q = ws["Pc"], ws["Qc"]
    R = compose_curried(P, Q)
    c = P.left.sorts[0]
    p_inst, q_inst = P.at(c), Q.at(Q.left.sorts[0])
    p_terms = list(p_inst.terms_upto(4))
    q_terms = list(q_inst.terms_upto(3))
    pairs_checked = 0
    for s, s2 in itertools.combinations(p_terms, 2):
        if s.sort != s2.sort:
            continue
        if not prove_term_eq(p_inst, s, s2, budget).is_positive:
            continue
        for t, t2 in itertools.product(q_terms, repeat=2):
            if t.sort != t2.sort:
                continue
            if not prove_term_eq(q_inst, t, t2, budget).is_positive:
                continue
            a = tensor(P, Q, c, s, t)
            b = tensor(P, Q, c, s2, t2)
            assert prove_term_eq(R.at(c), a, b, budget).is_positive
            pairs_checked += 1
    assert pairs_checked > 0


def test_unit_presentation_shape(ws, budget):
    U = unit_presentation(ws["N"])
    star = ws["N"].sorts[0]
    inst = U.at(star)
    assert [g.name for g in inst.gens] == ["x_*"] and inst.eqs == ()
    img = U.act(ws["N"].funs[0]).apply(Term.of(inst.gens[0]))
    assert str(img) == "x_*.s"
    assert validate_curried(U, budget).status is ValidationStatus.VALID


def test_unit_of_trivial_presentation(ws):
    U = unit_presentation(ws["T0"])
    assert len(U.at_pairs) == 1 and U.act_pairs == ()


def test_compose_morphisms_of_identities_is_identity(ws, budget):
    P, Q = ws["Pc"], ws["Qc"]
    cell = compose_curried_morphisms(
        CurriedMorphism.identity(P), CurriedMorphism.identity(Q)
    )
    R = compose_curried(P, Q)
    out = morphisms_equal(cell, CurriedMorphism.identity(R), budget)
    assert out.is_positive


def test_compose_morphisms_validates(ws, budget):
    cell = compose_curried_morphisms(ws["ell"], CurriedMorphism.identity(ws["Qc"]))
    rep = validate_curried_morphism(cell, budget)
    assert rep.status is ValidationStatus.VALID


def test_compose_morphisms_functorial(ws, budget):
    """(ell . ell) * (id . id) agrees with (ell * id) . (ell * id)."""
    ell = ws["ell"]
    idQ = CurriedMorphism.identity(ws["Qc"])
    lhs = compose_curried_morphisms(ell.then(ell), idQ)
    rhs = compose_curried_morphisms(ell, idQ).then(compose_curried_morphisms(ell, idQ))
    assert morphisms_equal(lhs, rhs, budget).is_positive


def test_compose_morphisms_frame_mismatch(ws):
    with pytest.raises(FrameMismatch):
        compose_curried_morphisms(
            CurriedMorphism.identity(ws["Pc"]), CurriedMorphism.identity(ws["Pc"])
        )


def test_associator_on_running_example(ws, budget):
    UO = unit_presentation(ws["O"])
    al, al_inv = associator(ws["Pc"], ws["Qc"], UO)
    assert validate_curried_morphism(al, budget).status is ValidationStatus.VALID
    assert validate_curried_morphism(al_inv, budget).status is ValidationStatus.VALID
    # ((y*q)*x_*) goes to (y*(q*x_*))
    src_gen = al.source.at_pairs[0][1].gens[1]
    img = al.component(ws["Pc"].left.sorts[0]).apply(Term.of(src_gen))
    assert str(img) == "y*q*x_*"
    # invertible up to provable equality
    assert morphisms_equal(
        al.then(al_inv), CurriedMorphism.identity(al.source), budget
    ).is_positive
    assert morphisms_equal(
        al_inv.then(al), CurriedMorphism.identity(al.target), budget
    ).is_positive


def test_unitors_on_running_example(ws, budget):
    P = ws["Pc"]
    lam, lam_inv = left_unitor(P)
    rho, rho_inv = right_unitor(P)
    for cell in (lam, lam_inv, rho, rho_inv):
        assert validate_curried_morphism(cell, budget).status is ValidationStatus.VALID
    star = P.left.sorts[0]
    maps = {g.name: str(t) for g, t in lam.component(star).gen_pairs}
    assert maps == {"x_**x": "x", "x_**y": "y"}
    maps_r = {g.name: str(t) for g, t in rho.component(star).gen_pairs}
    assert maps_r == {"x*x_*": "x", "y*x_*": "y"}
    assert morphisms_equal(
        lam.then(lam_inv), CurriedMorphism.identity(lam.source), budget
    ).is_positive
    assert morphisms_equal(
        rho_inv.then(rho), CurriedMorphism.identity(P), budget
    ).is_positive


def test_coherence_cell_dispatch(ws):
    lam, _ = coherence_cell("lambda", ws["Pc"])
    assert lam.target == ws["Pc"]
    with pytest.raises(ValueError):
        coherence_cell("sigma", ws["Pc"])


def test_pentagon_and_triangle(ws, budget):
    P, Q = ws["Pc"], ws["Qc"]
    UO = unit_presentation(ws["O"])
    UN = unit_presentation(ws["N"])
    # triangle: (1_P * lambda_Q) . alpha = rho_P * 1_Q
    al, _ = associator(P, UN, Q)
    lamQ, _ = left_unitor(Q)
    rhoP, _ = right_unitor(P)
    lhs = al.then(compose_curried_morphisms(CurriedMorphism.identity(P), lamQ))
    rhs = compose_curried_morphisms(rhoP, CurriedMorphism.identity(Q))
    assert morphisms_equal(lhs, rhs, budget).is_positive
    # pentagon over (P, Q, U(O), U(O))
    R = S = UO
    idP, idQ, idR, idS = (CurriedMorphism.identity(Z) for Z in (P, Q, R, S))
    a1 = compose_curried_morphisms(associator(P, Q, R)[0], idS)
    a2 = associator(P, compose_curried(Q, R), S)[0]
    a3 = compose_curried_morphisms(idP, associator(Q, R, S)[0])
    top = a1.then(a2).then(a3)
    b1 = associator(compose_curried(P, Q), R, S)[0]
    b2 = associator(P, Q, compose_curried(R, S))[0]
    bottom = b1.then(b2)
    assert morphisms_equal(top, bottom, budget).is_positive


def test_compose_is_deterministic(ws):
    assert compose_curried(ws["Pc"], ws["Qc"]) == compose_curried(ws["Pc"], ws["Qc"])
