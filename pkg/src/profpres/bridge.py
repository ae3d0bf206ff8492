"""Uncurrying, curryability checks, and the currying construction.

Uncurrying turns a curried presentation into an uncurried one: one profunctor
symbol per generator, the barred instance equations, and one pairing equation
f.p = image per left symbol and generator.  Currying goes the other way for
nongenerative presentations: the instances are the fibers and each action
image is the first right cross-path provably equal to the short left
cross-path, found by breadth-first search (length, then declaration order).
Validation of the result is exactly the conservativity question; a certified
validation failure raises CurryValidationFailed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .errors import CurryValidationFailed, NonGlobular, NongenerativityUnverified
from .presentations import (
    CrossEquation,
    CrossPath,
    CurriedMorphism,
    CurriedPresentation,
    GenSym,
    InstanceMorphism,
    InstancePresentation,
    Term,
    UncurriedMorphism,
    UncurriedPresentation,
    ValidationStatus,
    fiber_instance,
    validate_curried,
)
from .prover import Budget, DEFAULT_BUDGET, engine_for
from .syntax import Path, Sort


# --------------------------------------------------------------------------
# uncurrying
# --------------------------------------------------------------------------


def _bar_names(P: CurriedPresentation) -> dict[tuple[Sort, GenSym], str]:
    """Profunctor symbol names for the barred generators; generator names are
    kept when globally unique, else suffixed with their sort."""
    counts: dict[str, int] = {}
    for c in P.left.sorts:
        for g in P.at(c).gens:
            counts[g.name] = counts.get(g.name, 0) + 1
    out = {}
    for c in P.left.sorts:
        for g in P.at(c).gens:
            out[(c, g)] = g.name if counts[g.name] == 1 else f"{g.name}_{c.name}"
    return out


def uncurry(P: CurriedPresentation, name: Optional[str] = None) -> UncurriedPresentation:
    """The uncurried presentation of a curried one."""
    from .presentations import ProSym

    name = name or f"{P.name}_u"
    names = _bar_names(P)
    pro_of: dict[tuple[Sort, GenSym], ProSym] = {}
    pros = []
    for c in P.left.sorts:
        for g in P.at(c).gens:
            pro = ProSym(names[(c, g)], c, g.sort)
            pro_of[(c, g)] = pro
            pros.append(pro)

    def bar(c: Sort, t: Term) -> CrossPath:
        return CrossPath(Path.identity(c), pro_of[(c, t.gen)], t.tail)

    eqs: list[CrossEquation] = []
    for c in P.left.sorts:
        for eq in P.at(c).eqs:
            eqs.append(CrossEquation(bar(c, eq.lhs), bar(c, eq.rhs)))
    for f in P.left.funs:
        c, c2 = f.source, f.target
        for g in P.at(c2).gens:
            lhs = CrossPath(Path(c, (f,)), pro_of[(c2, g)], Path.identity(g.sort))
            rhs = bar(c, P.act(f).apply(Term.of(g)))
            eqs.append(CrossEquation(lhs, rhs))
    return UncurriedPresentation(name, P.left, P.right, tuple(pros), tuple(eqs))


def uncurry_morphism(F: CurriedMorphism, name: Optional[str] = None) -> UncurriedMorphism:
    """Uncurry a globular 2-cell; images are right cross-paths by construction."""
    if not F.is_globular:
        raise NonGlobular(f"{F.name} is not globular")
    src = uncurry(F.source)
    tgt = uncurry(F.target)
    names_src = _bar_names(F.source)
    names_tgt = _bar_names(F.target)
    src_pros = {p.name: p for p in src.pros}
    tgt_pros = {p.name: p for p in tgt.pros}
    pro_map = {}
    for c in F.source.left.sorts:
        for g in F.source.at(c).gens:
            img = F.component(c).apply(Term.of(g))
            pro = src_pros[names_src[(c, g)]]
            pro_map[pro] = CrossPath(
                Path.identity(c), tgt_pros[names_tgt[(c, img.gen)]], img.tail
            )
    return UncurriedMorphism.make(name or f"{F.name}_u", src, tgt, pro_map)


# --------------------------------------------------------------------------
# curryability checks
# --------------------------------------------------------------------------


class CheckStatus(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails-with-witness"
    INCONCLUSIVE = "inconclusive-within-budget"


@dataclass(frozen=True)
class CheckOutcome:
    """Outcome of a nongenerativity/conservativity check.

    `witnesses` carries certified failure data; `candidates` carries the
    unresolved goals of an inconclusive run.  `certified` marks a Holds
    answer that is exact over the enumerated range rather than best-effort.
    """

    status: CheckStatus
    budget_used: Budget
    witnesses: tuple = ()
    candidates: tuple = ()
    certified: bool = False
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status is CheckStatus.HOLDS

    def describe(self) -> str:
        def show(w):
            if isinstance(w, tuple):
                return "(" + ", ".join(str(x) for x in w) + ")"
            return str(w)

        bits = [self.status.value]
        if self.certified and self.status is CheckStatus.HOLDS:
            bits.append("(exact in enumerated range)")
        if self.witnesses:
            bits.append("witnesses: " + "; ".join(show(w) for w in self.witnesses))
        if self.candidates:
            bits.append("unresolved: " + "; ".join(show(c) for c in self.candidates))
        if self.detail:
            bits.append("[" + self.detail + "]")
        return " ".join(bits)


def find_right_witness(
    Q: UncurriedPresentation, l: CrossPath, budget: Budget = DEFAULT_BUDGET
) -> Optional[CrossPath]:
    """First right cross-path provably equal to l, by breadth-first search
    over increasing length with ties broken by declaration order."""
    col = Q.collage
    eng = engine_for(col.theory, budget)
    target = col.embed_cross(l)
    for cand in Q.right_cross_candidates(l.start, budget.max_path_length):
        if cand.end != l.end:
            continue
        if eng.prove(col.embed_cross(cand), target).is_positive:
            return cand
    return None


def check_nongenerative(
    Q: UncurriedPresentation, budget: Budget = DEFAULT_BUDGET, strict: bool = False
) -> CheckOutcome:
    """Does every short left cross-path provably equal a right cross-path?

    Strict mode is the purely syntactic criterion: every equation is either
    between right cross-paths or pairs a short left cross-path with a right
    cross-path, and every short left cross-path occurs in exactly one
    equation.  It is fully decidable.
    """
    shorts = Q.short_left_crosses()
    if strict:
        counts = {s: 0 for s in shorts}
        bad = []
        for eq in Q.eqs:
            sides = (eq.lhs, eq.rhs)
            if all(s.is_right for s in sides):
                continue
            left_sides = [s for s in sides if s.is_short_left]
            right_sides = [s for s in sides if s.is_right]
            if len(left_sides) == 1 and len(right_sides) == 1:
                counts[left_sides[0]] = counts.get(left_sides[0], 0) + 1
            else:
                bad.append(eq)
        missing = [s for s, n in counts.items() if n != 1]
        if bad or missing:
            return CheckOutcome(
                CheckStatus.FAILS,
                budget,
                witnesses=tuple(bad + missing),
                certified=True,
                detail="syntactic strict-nongenerativity scan",
            )
        return CheckOutcome(CheckStatus.HOLDS, budget, certified=True)

    found: list[tuple[CrossPath, CrossPath]] = []
    missing: list[CrossPath] = []
    impossible: list[CrossPath] = []
    for l in shorts:
        if not Q.pros_from(l.start):
            impossible.append(l)
            continue
        r = find_right_witness(Q, l, budget)
        if r is None:
            missing.append(l)
        else:
            found.append((l, r))
    if impossible:
        return CheckOutcome(
            CheckStatus.FAILS,
            budget,
            witnesses=tuple(impossible),
            certified=True,
            detail="no right cross-path exists from the source sort",
        )
    if missing:
        return CheckOutcome(
            CheckStatus.INCONCLUSIVE, budget, candidates=tuple(missing)
        )
    return CheckOutcome(
        CheckStatus.HOLDS, budget, witnesses=tuple(found), certified=True
    )


def check_conservative(
    Q: UncurriedPresentation, budget: Budget = DEFAULT_BUDGET
) -> CheckOutcome:
    """Is provable equality of right cross-paths already provable fiberwise?

    Enumerates parallel right cross-path pairs up to the length budget,
    groups them by their class in the full presentation, and re-checks
    equal pairs in the fiber instance.  A pair equal in the presentation and
    separated by a completed rewrite system of the fiber is a certified
    failure; pairs the fiber cannot resolve are reported as candidates.
    """
    col = Q.collage
    eng = engine_for(col.theory, budget)
    witnesses: list[tuple[CrossPath, CrossPath]] = []
    candidates: list[tuple[CrossPath, CrossPath]] = []
    fibers_complete = eng.rs is not None
    for c in Q.left.sorts:
        fiber = fiber_instance(Q, c)
        fcol = fiber.collage
        feng = engine_for(fcol.theory, budget)
        if feng.rs is None:
            fibers_complete = False
        # group candidates by their class in Q; same key means provably equal
        # (same normal form, or same bounded-closure class)
        groups: dict[object, list[CrossPath]] = {}
        for cp in Q.right_cross_candidates(c, budget.max_path_length):
            key = eng.class_key(col.embed_cross(cp))
            if key is not None:
                groups.setdefault(key, []).append(cp)
        for members in groups.values():
            if len(members) < 2:
                continue
            by_fiber: dict[object, CrossPath] = {}
            unknown: list[CrossPath] = []
            for cp in members:
                t = Term(fiber.gen_by_name[cp.pro.name], cp.right)
                fkey = feng.class_key(fcol.embed_term(t))
                if fkey is None:
                    unknown.append(cp)
                elif fkey not in by_fiber:
                    by_fiber[fkey] = cp
            if len(by_fiber) >= 2:
                reps = list(by_fiber.values())
                pair = (reps[0], reps[1])
                if feng.rs is not None:
                    witnesses.append(pair)
                else:
                    candidates.append(pair)
            for cp in unknown:
                candidates.append((members[0], cp))
    if witnesses:
        return CheckOutcome(
            CheckStatus.FAILS,
            budget,
            witnesses=tuple(witnesses),
            certified=True,
            detail="pairs equal in the presentation but separated in the fiber",
        )
    if candidates:
        return CheckOutcome(CheckStatus.INCONCLUSIVE, budget, candidates=tuple(candidates))
    return CheckOutcome(CheckStatus.HOLDS, budget, certified=fibers_complete)


# --------------------------------------------------------------------------
# currying
# --------------------------------------------------------------------------


def curry_with_report(
    Q: UncurriedPresentation, budget: Budget = DEFAULT_BUDGET, name: Optional[str] = None
):
    """Curry a nongenerative presentation; returns (presentation, report)."""
    name = name or f"{Q.name}_c"
    shorts = Q.short_left_crosses()
    chosen: dict[CrossPath, CrossPath] = {}
    missing = []
    for l in shorts:
        r = find_right_witness(Q, l, budget)
        if r is None:
            missing.append(l)
        else:
            chosen[l] = r
    if missing:
        raise NongenerativityUnverified(missing)
    at = {c: fiber_instance(Q, c) for c in Q.left.sorts}
    act = {}
    for f in Q.left.funs:
        c, c2 = f.source, f.target
        gmap = {}
        for pro in Q.pros_from(c2):
            l = CrossPath(Path(c, (f,)), pro, Path.identity(pro.target))
            r = chosen[l]
            gmap[at[c2].gen_by_name[pro.name]] = Term(
                at[c].gen_by_name[r.pro.name], r.right
            )
        act[f] = InstanceMorphism.make(f"{name}({f.name})", at[c2], at[c], gmap)
    P = CurriedPresentation.make(name, Q.left, Q.right, at, act)
    report = validate_curried(P, budget)
    return P, report


def curry(
    Q: UncurriedPresentation, budget: Budget = DEFAULT_BUDGET, name: Optional[str] = None
) -> CurriedPresentation:
    """Curry a nongenerative presentation; raises CurryValidationFailed when
    validation certifies a conservativity failure."""
    P, report = curry_with_report(Q, budget, name)
    if report.status is ValidationStatus.INVALID:
        bad = report.counterexample
        raise CurryValidationFailed(bad.label if bad else "?")
    return P


def roundtrip_cells(
    P: CurriedPresentation, budget: Budget = DEFAULT_BUDGET
) -> tuple[CurriedMorphism, CurriedMorphism]:
    """The generator-renaming cells between P and curry(uncurry(P))."""
    Q = uncurry(P)
    P2, _ = curry_with_report(Q, budget)
    names = _bar_names(P)
    fwd_comp = {}
    bwd_comp = {}
    for c in P.left.sorts:
        f_map = {}
        b_map = {}
        for g in P.at(c).gens:
            g2 = P2.at(c).gen_by_name[names[(c, g)]]
            f_map[g] = Term.of(g2)
            b_map[g2] = Term.of(g)
        fwd_comp[c] = InstanceMorphism.make(
            f"rt_{P.name}@{c.name}", P.at(c), P2.at(c), f_map
        )
        bwd_comp[c] = InstanceMorphism.make(
            f"rt_inv_{P.name}@{c.name}", P2.at(c), P.at(c), b_map
        )
    fwd = CurriedMorphism.make(f"rt_{P.name}", P, P2, fwd_comp)
    bwd = CurriedMorphism.make(f"rt_inv_{P.name}", P2, P, bwd_comp)
    return fwd, bwd
