"""Composition of curried presentations: the term tensor, the composite
presentation, its action on 2-cells, units, and the coherence cells.

The tensor keeps every output in canonical split form: a pair generator
followed by a path in the far-right base.  Pair generators are named
"p*q"; the pairing is reproduced deterministically from declaration order,
so independently recomputed composites are structurally equal.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .errors import BaseMismatch, FrameMismatch, TypeMismatch
from .presentations import (
    CurriedMorphism,
    CurriedPresentation,
    GenSym,
    InstanceMorphism,
    InstancePresentation,
    Term,
    TermEquation,
)
from .syntax import CatMorphism, CatPresentation, FunSym, Path, Sort

# A tensor term is a Term of the composite instance whose generator is a pair
# generator; `tensor` below always returns this canonical split form.
TensorTerm = Term


def _pair_gens(
    P: CurriedPresentation, Q: CurriedPresentation, c: Sort
) -> Iterator[tuple[GenSym, GenSym, GenSym]]:
    """Deterministic pairing (p, q, p*q) for the composite instance at c."""
    for p in P.at(c).gens:
        for q in Q.at(p.sort).gens:
            yield p, q, GenSym(f"{p.name}*{q.name}", q.sort)


def _pair_book(
    P: CurriedPresentation, Q: CurriedPresentation, c: Sort
) -> dict[tuple[GenSym, GenSym], GenSym]:
    return {(p, q): pq for p, q, pq in _pair_gens(P, Q, c)}


def tensor(
    P: CurriedPresentation,
    Q: CurriedPresentation,
    c: Sort,
    s: Term,
    t: Term,
    book: Optional[dict[tuple[GenSym, GenSym], GenSym]] = None,
) -> TensorTerm:
    """The term s (x) t of the composite instance at c, in canonical form.

    s must be a term of P at c, and t a term of Q at the type of s.  A bare
    pair of generators returns the bare pair generator; otherwise the left
    tail is pushed through Q's actions and the right tail is kept as the
    split-form path.
    """
    inst = Q.at_map.get(s.sort)
    if inst is None or inst.gen_by_name.get(t.gen.name) != t.gen:
        raise TypeMismatch(f"cannot tensor {s} : {s.sort} with {t}")
    if book is None:
        book = _pair_book(P, Q, c)
    if not s.tail.is_identity:
        # s = p.g : push g through Q contravariantly, then recurse on the generator
        t = Q.act_path(s.tail, t)
        s = Term.of(s.gen)
    pq = book.get((s.gen, t.gen))
    if pq is None:
        raise TypeMismatch(f"{s.gen.name} (x) {t.gen.name} is not a generator pair at {c}")
    return Term(pq, t.tail)


def compose_curried(
    P: CurriedPresentation, Q: CurriedPresentation, name: Optional[str] = None
) -> CurriedPresentation:
    """The composite curried presentation.

    Generators at c are the pairs p*q; the equations are one instance of
    (s (x) q = s' (x) q) per equation of P at c and generator q, and one of
    (p (x) t = p (x) t') per generator p and equation of Q at the type of p.
    The action of a left symbol f sends p*q to (P(f)(p)) (x) q.
    """
    if P.right != Q.left:
        raise BaseMismatch(
            f"cannot compose {P.name} : ..-/->{P.right.name} "
            f"with {Q.name} : {Q.left.name}-/->.."
        )
    name = name or f"{P.name}*{Q.name}"
    books = {c: _pair_book(P, Q, c) for c in P.left.sorts}
    at: dict[Sort, InstancePresentation] = {}
    for c in P.left.sorts:
        book = books[c]
        gens = tuple(book[key] for key in book)
        eqs: list[TermEquation] = []
        for eq in P.at(c).eqs:
            d = eq.lhs.sort
            for q in Q.at(d).gens:
                tq = Term.of(q)
                eqs.append(
                    TermEquation(
                        tensor(P, Q, c, eq.lhs, tq, book),
                        tensor(P, Q, c, eq.rhs, tq, book),
                    )
                )
        for p in P.at(c).gens:
            sp = Term.of(p)
            for eq in Q.at(p.sort).eqs:
                eqs.append(
                    TermEquation(
                        tensor(P, Q, c, sp, eq.lhs, book),
                        tensor(P, Q, c, sp, eq.rhs, book),
                    )
                )
        at[c] = InstancePresentation(f"{name}@{c.name}", Q.right, gens, tuple(eqs))
    act: dict[FunSym, InstanceMorphism] = {}
    for f in P.left.funs:
        c, c2 = f.source, f.target
        gmap = {}
        for p, q, pq in _pair_gens(P, Q, c2):
            img = tensor(P, Q, c, P.act(f).apply(Term.of(p)), Term.of(q), books[c])
            gmap[pq] = img
        act[f] = InstanceMorphism.make(f"{name}({f.name})", at[c2], at[c], gmap)
    return CurriedPresentation.make(name, P.left, Q.right, at, act)


def compose_curried_morphisms(
    phi: CurriedMorphism, psi: CurriedMorphism, name: Optional[str] = None
) -> CurriedMorphism:
    """The horizontal composite cell, sending p*q to phi_c(p) (x) psi_d(q)."""
    if phi.source.right != psi.source.left or phi.target.right != psi.target.left:
        raise FrameMismatch(
            f"{phi.name} and {psi.name} do not share a middle base"
        )
    if phi.f1 != psi.f0:
        raise FrameMismatch(
            f"{phi.name} and {psi.name} disagree on the middle base map"
        )
    src = compose_curried(phi.source, psi.source)
    tgt = compose_curried(phi.target, psi.target)
    name = name or f"{phi.name}*{psi.name}"
    comps: dict[Sort, InstanceMorphism] = {}
    for c in src.left.sorts:
        c_img = phi.f0.apply_sort(c)
        book_tgt = _pair_book(phi.target, psi.target, c_img)
        gmap = {}
        for p, q, pq in _pair_gens(phi.source, psi.source, c):
            a = phi.component(c).apply(Term.of(p))
            b = psi.component(p.sort).apply(Term.of(q))
            gmap[pq] = tensor(phi.target, psi.target, c_img, a, b, book_tgt)
        comps[c] = InstanceMorphism.make(
            f"{name}@{c.name}",
            src.at(c),
            tgt.at(c_img),
            gmap,
            base_map=psi.f1,
        )
    return CurriedMorphism.make(name, src, tgt, comps, f0=phi.f0, f1=psi.f1)


def unit_presentation(C: CatPresentation) -> CurriedPresentation:
    """The unit: one generator x_c at each sort, no equations; a left symbol
    f : c -> c' acts by x_c' |-> x_c.f."""
    name = f"U_{C.name}"
    at = {
        c: InstancePresentation(f"{name}@{c.name}", C, (GenSym(f"x_{c.name}", c),), ())
        for c in C.sorts
    }
    act = {}
    for f in C.funs:
        src_gen = at[f.target].gens[0]
        tgt_gen = at[f.source].gens[0]
        act[f] = InstanceMorphism.make(
            f"{name}({f.name})",
            at[f.target],
            at[f.source],
            {src_gen: Term(tgt_gen, Path(f.source, (f,)))},
        )
    return CurriedPresentation.make(name, C, C, at, act)


def _cell_pair(
    name: str,
    source: CurriedPresentation,
    target: CurriedPresentation,
    forward: dict[Sort, dict[GenSym, Term]],
    backward: dict[Sort, dict[GenSym, Term]],
) -> tuple[CurriedMorphism, CurriedMorphism]:
    fwd = CurriedMorphism.make(
        name,
        source,
        target,
        {
            c: InstanceMorphism.make(f"{name}@{c.name}", source.at(c), target.at(c), forward[c])
            for c in source.left.sorts
        },
    )
    bwd = CurriedMorphism.make(
        f"{name}_inv",
        target,
        source,
        {
            c: InstanceMorphism.make(
                f"{name}_inv@{c.name}", target.at(c), source.at(c), backward[c]
            )
            for c in target.left.sorts
        },
    )
    return fwd, bwd


def associator(
    P: CurriedPresentation, Q: CurriedPresentation, R: CurriedPresentation
) -> tuple[CurriedMorphism, CurriedMorphism]:
    """(P*Q)*R -> P*(Q*R) on generators: (p*q)*r |-> p*(q*r), with inverse."""
    PQ = compose_curried(P, Q)
    QR = compose_curried(Q, R)
    src = compose_curried(PQ, R)
    tgt = compose_curried(P, QR)
    fwd: dict[Sort, dict[GenSym, Term]] = {}
    bwd: dict[Sort, dict[GenSym, Term]] = {}
    for c in P.left.sorts:
        fmap: dict[GenSym, Term] = {}
        gmap: dict[GenSym, Term] = {}
        book_pq = _pair_book(P, Q, c)
        book_src = _pair_book(PQ, R, c)
        book_tgt = _pair_book(P, QR, c)
        for p in P.at(c).gens:
            book_qr = _pair_book(Q, R, p.sort)
            for q in Q.at(p.sort).gens:
                pq = book_pq[(p, q)]
                for r in R.at(q.sort).gens:
                    left_gen = book_src[(pq, r)]
                    right_gen = book_tgt[(p, book_qr[(q, r)])]
                    fmap[left_gen] = Term.of(right_gen)
                    gmap[right_gen] = Term.of(left_gen)
        fwd[c] = fmap
        bwd[c] = gmap
    return _cell_pair(f"alpha_{P.name}_{Q.name}_{R.name}", src, tgt, fwd, bwd)


def left_unitor(P: CurriedPresentation) -> tuple[CurriedMorphism, CurriedMorphism]:
    """U(C)*P -> P on generators: x_c*p |-> p, with inverse."""
    U = unit_presentation(P.left)
    src = compose_curried(U, P)
    fwd: dict[Sort, dict[GenSym, Term]] = {}
    bwd: dict[Sort, dict[GenSym, Term]] = {}
    for c in P.left.sorts:
        book = _pair_book(U, P, c)
        x = U.at(c).gens[0]
        fwd[c] = {book[(x, p)]: Term.of(p) for p in P.at(c).gens}
        bwd[c] = {p: Term.of(book[(x, p)]) for p in P.at(c).gens}
    return _cell_pair(f"lambda_{P.name}", src, P, fwd, bwd)


def right_unitor(P: CurriedPresentation) -> tuple[CurriedMorphism, CurriedMorphism]:
    """P*U(D) -> P on generators: p*x_d |-> p, with inverse."""
    U = unit_presentation(P.right)
    src = compose_curried(P, U)
    fwd: dict[Sort, dict[GenSym, Term]] = {}
    bwd: dict[Sort, dict[GenSym, Term]] = {}
    for c in P.left.sorts:
        book = _pair_book(P, U, c)
        fmap: dict[GenSym, Term] = {}
        gmap: dict[GenSym, Term] = {}
        for p in P.at(c).gens:
            x = U.at(p.sort).gens[0]
            pair = book[(p, x)]
            fmap[pair] = Term.of(p)
            gmap[p] = Term.of(pair)
        fwd[c] = fmap
        bwd[c] = gmap
    return _cell_pair(f"rho_{P.name}", src, P, fwd, bwd)


def coherence_cell(kind: str, *args: CurriedPresentation):
    """Dispatch for the named coherence cells: alpha, lambda, rho."""
    if kind == "alpha":
        return associator(*args)
    if kind == "lambda":
        return left_unitor(*args)
    if kind == "rho":
        return right_unitor(*args)
    raise ValueError(f"unknown coherence cell kind {kind!r}")


def identity_cell(P: CurriedPresentation) -> CurriedMorphism:
    return CurriedMorphism.identity(P)
