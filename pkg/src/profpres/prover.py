"""Bounded provability for path equality.

Two engines back the three-valued answers:

* a bounded congruence closure over the universe of paths up to a length
  budget, seeded with all equation instances embedded in contexts and closed
  under pre-/post-composition with single symbols — always terminating, sound,
  and able to emit replayable derivations;
* an optional Knuth-Bendix completion into a terminating confluent rewrite
  system, whose normal forms decide equality exactly when completion succeeds
  within budget.

Positive answers found by closure are reported as Proved with a derivation;
when closure fails but a completed system exists the answer is Decided; with
neither, NotProvedWithinBudget.  The word problem is undecidable in general,
so nothing here ever claims disequality without a certificate.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Optional

from . import derivations as drv
from .errors import ForeignPath, NonParallel, ReplayError
from .syntax import CatPresentation, Equation, FunSym, Path, Sort, all_paths_upto


@dataclass(frozen=True)
class Budget:
    """Resource bounds for closure and completion; all positive."""

    max_path_length: int = 8
    max_closure_rounds: int = 16
    max_kb_steps: int = 500

    def __post_init__(self):
        if min(self.max_path_length, self.max_closure_rounds, self.max_kb_steps) <= 0:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Partition:
    """Symbol partition of a collage theory into left / profunctor / right."""

    left_sorts: tuple[Sort, ...]
    right_sorts: tuple[Sort, ...]
    left_funs: tuple[FunSym, ...]
    pro_funs: tuple[FunSym, ...]
    right_funs: tuple[FunSym, ...]

    @cached_property
    def left_sort_set(self) -> frozenset[Sort]:
        return frozenset(self.left_sorts)

    @cached_property
    def right_sort_set(self) -> frozenset[Sort]:
        return frozenset(self.right_sorts)

    @cached_property
    def left_fun_set(self) -> frozenset[FunSym]:
        return frozenset(self.left_funs)

    @cached_property
    def pro_fun_set(self) -> frozenset[FunSym]:
        return frozenset(self.pro_funs)

    @cached_property
    def right_fun_set(self) -> frozenset[FunSym]:
        return frozenset(self.right_funs)


@dataclass(frozen=True)
class Theory:
    """A presentation prepared for proving, with optional collage partition."""

    cat: CatPresentation
    partition: Optional[Partition] = None

    @cached_property
    def order_index(self) -> dict[FunSym, int]:
        return {f: i for i, f in enumerate(self.cat.symbol_order())}

    def shortlex_key(self, p: Path):
        return (len(p.syms), tuple(self.order_index[f] for f in p.syms))

    def owns(self, p: Path) -> bool:
        return self.cat.owns_path(p)

    # collage-specific helpers ------------------------------------------------

    def is_cross(self, p: Path) -> bool:
        part = self.partition
        return (
            part is not None
            and p.start in part.left_sort_set
            and p.end in part.right_sort_set
        )

    def is_right_cross(self, p: Path) -> bool:
        part = self.partition
        if part is None or not p.syms:
            return False
        return p.syms[0] in part.pro_fun_set and all(
            f in part.right_fun_set for f in p.syms[1:]
        )

    def is_short_left(self, p: Path) -> bool:
        part = self.partition
        return (
            part is not None
            and len(p.syms) == 2
            and p.syms[0] in part.left_fun_set
            and p.syms[1] in part.pro_fun_set
        )

    def cross_paths_upto(self, max_len: int) -> list[Path]:
        return [p for p in all_paths_upto(self.cat, max_len) if self.is_cross(p)]


def theory_of_category(cat: CatPresentation) -> Theory:
    return Theory(cat)


class Status(enum.Enum):
    PROVED = "proved"
    NOT_PROVED = "not-proved-within-budget"
    DECIDED = "decided"


@dataclass(frozen=True)
class ProofOutcome:
    """Three-valued result of a bounded provability question."""

    status: Status
    equal: Optional[bool] = None
    witness_depth: Optional[int] = None
    budget_used: Optional[Budget] = None
    derivation: Optional[drv.Derivation] = field(default=None, compare=False, repr=False)

    @property
    def is_positive(self) -> bool:
        return self.status is Status.PROVED or (
            self.status is Status.DECIDED and bool(self.equal)
        )

    @property
    def is_certified_negative(self) -> bool:
        return self.status is Status.DECIDED and not self.equal

    def describe(self) -> str:
        if self.status is Status.PROVED:
            return f"proved (depth {self.witness_depth})"
        if self.status is Status.DECIDED:
            return "decided equal" if self.equal else "decided unequal"
        return "not proved within budget"


# --------------------------------------------------------------------------
# bounded congruence closure with proof recording
# --------------------------------------------------------------------------


class Closure:
    """Union-find over a finite path universe, seeded with contexted equation
    instances and closed under single-symbol pre-/post-composition.

    Every merge carries a reason from which a derivation can be rebuilt, so
    positive answers are replayable.  `post_syms`/`pre_syms` restrict which
    symbols may extend a merged pair; passing None allows every symbol, which
    yields the full congruence on the universe.  Restricting them to the right
    and left symbols of a collage, over a cross-path universe, yields the
    specialised cross-path relation.
    """

    def __init__(
        self,
        cat: CatPresentation,
        universe: list[Path],
        rounds: int,
        post_syms: Optional[frozenset[FunSym]] = None,
        pre_syms: Optional[frozenset[FunSym]] = None,
    ):
        self.cat = cat
        self.paths = list(universe)
        self.index = {p: i for i, p in enumerate(self.paths)}
        n = len(self.paths)
        self.parent = list(range(n))
        self.rank = [0] * n
        self.pf_parent: list[Optional[int]] = [None] * n
        self.pf_edge: list[Optional[tuple]] = [None] * n
        self.stamp = 0
        self.post_syms = post_syms
        self.pre_syms = pre_syms
        self.rounds_used = 0
        self._seed()
        self._close(rounds)
        self._min_cache: dict[int, Path] = {}

    # union-find ----------------------------------------------------------

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def _union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if self.rank[ri] < self.rank[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        if self.rank[ri] == self.rank[rj]:
            self.rank[ri] += 1

    def _reroot(self, x: int):
        cur: Optional[int] = x
        carried_parent: Optional[int] = None
        carried_edge: Optional[tuple] = None
        while cur is not None:
            nxt = self.pf_parent[cur]
            nxt_edge = self.pf_edge[cur]
            self.pf_parent[cur] = carried_parent
            self.pf_edge[cur] = carried_edge
            carried_parent, carried_edge = cur, nxt_edge
            cur = nxt

    def merge(self, x: int, y: int, reason: tuple) -> bool:
        if self.find(x) == self.find(y):
            return False
        self.stamp += 1
        self._reroot(x)
        self.pf_parent[x] = y
        self.pf_edge[x] = (x, y, reason, self.stamp)
        self._union(x, y)
        return True

    # construction ----------------------------------------------------------

    def _seed(self):
        for i, eq in enumerate(self.cat.eqs):
            if not (eq.is_parallel and self.cat.owns_path(eq.lhs) and self.cat.owns_path(eq.rhs)):
                continue
            l, r = eq.lhs, eq.rhs
            if l == r:
                continue
            lsyms = l.syms
            k = len(lsyms)
            for pid, p in enumerate(self.paths):
                syms = p.syms
                if k == 0:
                    # identity-side equation: splice r at every boundary of matching sort
                    at = p.start
                    spots = []
                    if at == l.start:
                        spots.append(0)
                    for j, f in enumerate(syms):
                        at = f.target
                        if at == l.start:
                            spots.append(j + 1)
                    for j in spots:
                        q = Path(p.start, syms[:j] + r.syms + syms[j:])
                        qid = self.index.get(q)
                        if qid is not None:
                            self.merge(pid, qid, ("ax", i, syms[:j], syms[j:]))
                else:
                    for j in range(len(syms) - k + 1):
                        if syms[j : j + k] == lsyms:
                            q = Path(p.start, syms[:j] + r.syms + syms[j + k :])
                            qid = self.index.get(q)
                            if qid is not None:
                                self.merge(pid, qid, ("ax", i, syms[:j], syms[j + k :]))

    def _close(self, rounds: int):
        for rnd in range(rounds):
            changed = False
            groups: dict[tuple, list[tuple[int, int]]] = {}
            for i, p in enumerate(self.paths):
                if not p.syms:
                    continue
                last = p.syms[-1]
                if self.post_syms is None or last in self.post_syms:
                    pre = self.index.get(Path(p.start, p.syms[:-1]))
                    if pre is not None:
                        groups.setdefault((0, self.find(pre), last), []).append((i, pre))
                first = p.syms[0]
                if self.pre_syms is None or first in self.pre_syms:
                    suf = self.index.get(Path(first.target, p.syms[1:]))
                    if suf is not None:
                        groups.setdefault((1, first, self.find(suf)), []).append((i, suf))
            for key, members in groups.items():
                base_i, base_ctx = members[0]
                for j, ctx_j in members[1:]:
                    if key[0] == 0:
                        reason = ("post", base_ctx, ctx_j, key[2])
                    else:
                        reason = ("pre", key[1], base_ctx, ctx_j)
                    if self.merge(base_i, j, reason):
                        changed = True
            self.rounds_used = rnd + 1
            if not changed:
                break

    # queries ----------------------------------------------------------------

    def proves(self, p: Path, q: Path) -> bool:
        i, j = self.index.get(p), self.index.get(q)
        return i is not None and j is not None and self.find(i) == self.find(j)

    def class_min(self, i: int, key) -> Path:
        root = self.find(i)
        cached = self._min_cache.get(root)
        if cached is not None:
            return cached
        members = [self.paths[k] for k in range(len(self.paths)) if self.find(k) == root]
        best = min(members, key=key)
        self._min_cache[root] = best
        return best

    def iter_classes(self) -> Iterator[list[int]]:
        by_root: dict[int, list[int]] = {}
        for i in range(len(self.paths)):
            by_root.setdefault(self.find(i), []).append(i)
        for root in sorted(by_root):
            yield by_root[root]

    # explanations -------------------------------------------------------------

    def explain(self, i: int, j: int, limit: Optional[int] = None) -> drv.Derivation:
        if i == j:
            return drv.Refl(self.paths[i])
        chain_pos: dict[int, int] = {}
        cur: Optional[int] = i
        while cur is not None:
            chain_pos[cur] = len(chain_pos)
            cur = self.pf_parent[cur]
        cur = j
        while cur not in chain_pos:
            cur = self.pf_parent[cur]
            if cur is None:
                raise ReplayError("explain() called on unconnected nodes")
        lca = cur
        deriv: Optional[drv.Derivation] = None
        node = i
        while node != lca:
            step = self._edge_derivation(node, limit)
            deriv = step if deriv is None else drv.Trans(deriv, step)
            node = self.pf_parent[node]  # type: ignore[assignment]
        down: list[int] = []
        node = j
        while node != lca:
            down.append(node)
            node = self.pf_parent[node]  # type: ignore[assignment]
        for node in reversed(down):
            step = drv.Sym(self._edge_derivation(node, limit))
            deriv = step if deriv is None else drv.Trans(deriv, step)
        assert deriv is not None
        return deriv

    def _edge_derivation(self, node: int, limit: Optional[int]) -> drv.Derivation:
        """Derivation concluding (paths[node], paths[parent-of-node])."""
        edge = self.pf_edge[node]
        if edge is None:
            raise ReplayError("missing proof edge")
        u, v, reason, stamp = edge
        if limit is not None and stamp >= limit:
            raise ReplayError("proof forest stamp order violated")
        kind = reason[0]
        if kind == "ax":
            _, eq_index, pre_ctx, post_ctx = reason
            d: drv.Derivation = drv.Ax(eq_index)
            for f in post_ctx:
                d = drv.PostComp(d, f)
            for f in reversed(pre_ctx):
                d = drv.PreComp(f, d)
        elif kind == "post":
            _, pid, qid, f = reason
            d = drv.PostComp(self.explain(pid, qid, limit=stamp), f)
        elif kind == "pre":
            _, f, pid, qid = reason
            d = drv.PreComp(f, self.explain(pid, qid, limit=stamp))
        else:  # pragma: no cover
            raise ReplayError(f"unknown reason {kind}")
        if node == u:
            return d
        return drv.Sym(d)


# --------------------------------------------------------------------------
# Knuth-Bendix completion over typed path words
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteSystem:
    """A terminating, confluent rewrite system deciding provable equality.

    Every rule strictly decreases the shortlex order; `joined_pairs` counts
    the critical pairs checked to join during the final confluence pass.
    """

    cat: CatPresentation
    rules: tuple[tuple[Path, Path], ...]
    joined_pairs: int

    def normalize(self, p: Path) -> Path:
        if not self.cat.owns_path(p):
            raise ForeignPath(f"path {p} is not over {self.cat.name}")
        return _reduce(p, self.rules)


def normalize(rs: RewriteSystem, p: Path) -> Path:
    """Unique normal form of `p` under the completed system."""
    return rs.normalize(p)


def _find_factor(syms, needle) -> int:
    """Index of the first occurrence of `needle` in `syms`, or -1."""
    k = len(needle)
    first = needle[0]
    limit = len(syms) - k
    i = 0
    while i <= limit:
        if syms[i] == first:
            j = 1
            while j < k and syms[i + j] == needle[j]:
                j += 1
            if j == k:
                return i
        i += 1
    return -1


def _reduce(p: Path, rules) -> Path:
    syms = list(p.syms)
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            i = _find_factor(syms, lhs.syms)
            if i >= 0:
                syms[i : i + len(lhs.syms)] = list(rhs.syms)
                changed = True
                break
    return Path(p.start, tuple(syms))


def _contains(hay: Path, needle: Path) -> bool:
    return _find_factor(hay.syms, needle.syms) >= 0


def _critical_pairs(l1: Path, r1: Path, l2: Path, r2: Path) -> list[tuple[Path, Path]]:
    out = []
    s1, s2 = l1.syms, l2.syms
    n1, n2 = len(s1), len(s2)
    # proper overlap: nonempty suffix of l1 equals prefix of l2
    for k in range(1, min(n1, n2) + 1):
        if s1[n1 - k :] == s2[:k]:
            if k == n1 and k == n2:
                continue  # identical left-hand sides; containment below covers rule pairs
            u = s1[: n1 - k]
            w = s2[k:]
            out.append(
                (Path(l1.start, r1.syms + w), Path(l1.start, u + r2.syms))
            )
    # containment: l2 occurs strictly inside l1
    if n2 < n1:
        for i in range(n1 - n2 + 1):
            if s1[i : i + n2] == s2:
                out.append(
                    (Path(l1.start, s1[:i] + r2.syms + s1[i + n2 :]), r1)
                )
    return out


def complete_rewrite_system(theory: Theory, budget: Budget = DEFAULT_BUDGET) -> Optional[RewriteSystem]:
    """Run completion; None means the budget ran out before confluence."""
    cat = theory.cat
    skey = theory.shortlex_key
    rules: list[tuple[Path, Path]] = []

    pending: deque[tuple[Path, Path]] = deque()
    for eq in cat.eqs:
        if eq.is_parallel and cat.owns_path(eq.lhs) and cat.owns_path(eq.rhs):
            pending.append((eq.lhs, eq.rhs))

    # an oriented rule this long cannot fire on any path of interest and is a
    # reliable sign of divergence; give up rather than grind the step budget
    length_cutoff = 4 * budget.max_path_length
    steps = 0
    while pending:
        steps += 1
        if steps > budget.max_kb_steps:
            return None
        a, b = pending.popleft()
        a, b = _reduce(a, rules), _reduce(b, rules)
        if a == b:
            continue
        lhs, rhs = (a, b) if skey(a) > skey(b) else (b, a)
        if len(lhs.syms) > length_cutoff:
            return None
        # collapse: rules touched by the new rule go back to the equation queue
        keep = []
        for l2, r2 in rules:
            if _contains(l2, lhs) or _contains(r2, lhs):
                pending.append((l2, r2))
            else:
                keep.append((l2, r2))
        rules = keep
        new_rule = (lhs, rhs)
        for other in rules:
            pending.extend(_critical_pairs(*new_rule, *other))
            pending.extend(_critical_pairs(*other, *new_rule))
        pending.extend(_critical_pairs(*new_rule, *new_rule))
        rules.append(new_rule)

    joined = 0
    for rule1 in rules:
        for rule2 in rules:
            for u, v in _critical_pairs(*rule1, *rule2):
                if _reduce(u, rules) != _reduce(v, rules):  # pragma: no cover
                    return None
                joined += 1
    rules.sort(key=lambda lr: skey(lr[0]))
    return RewriteSystem(cat, tuple(rules), joined)


# --------------------------------------------------------------------------
# engine facade
# --------------------------------------------------------------------------


class PathEngine:
    """Provability engine for one theory at one budget.

    The completed rewrite system is attempted eagerly (it's cheap or gives
    up fast); the closure is built lazily on the first positive query.
    """

    def __init__(self, theory: Theory, budget: Budget = DEFAULT_BUDGET):
        self.theory = theory
        self.budget = budget
        self.rs = complete_rewrite_system(theory, budget)
        self._closure: Optional[Closure] = None

    @property
    def closure(self) -> Closure:
        if self._closure is None:
            universe = all_paths_upto(self.theory.cat, self.budget.max_path_length)
            self._closure = Closure(
                self.theory.cat, universe, self.budget.max_closure_rounds
            )
        return self._closure

    def prove(self, p: Path, q: Path) -> ProofOutcome:
        for side in (p, q):
            if not self.theory.owns(side):
                raise ForeignPath(f"path {side} is not over {self.theory.cat.name}")
        if p.start != q.start or p.end != q.end:
            raise NonParallel(f"{p} and {q} are not parallel")
        if p == q:
            return ProofOutcome(Status.PROVED, True, 0, self.budget, drv.Refl(p))
        cl = self.closure
        i, j = cl.index.get(p), cl.index.get(q)
        if i is not None and j is not None and cl.find(i) == cl.find(j):
            d = cl.explain(i, j)
            return ProofOutcome(Status.PROVED, True, drv.depth(d), self.budget, d)
        if self.rs is not None:
            eq = self.rs.normalize(p) == self.rs.normalize(q)
            return ProofOutcome(Status.DECIDED, eq, None, self.budget)
        return ProofOutcome(Status.NOT_PROVED, None, None, self.budget)

    def positive(self, p: Path, q: Path) -> bool:
        return self.prove(p, q).is_positive

    def class_key(self, p: Path) -> Optional[Path]:
        """A canonical representative of p's class, or None when unknown.

        With a completed system this is the normal form (which is also the
        shortlex-minimal member); otherwise the shortlex-minimal member of
        the bounded closure class, when p lies in the universe.
        """
        if self.rs is not None:
            return self.rs.normalize(p)
        cl = self.closure
        i = cl.index.get(p)
        if i is None:
            return None
        return cl.class_min(i, key=self.theory.shortlex_key)


@lru_cache(maxsize=None)
def engine_for(theory: Theory, budget: Budget = DEFAULT_BUDGET) -> PathEngine:
    return PathEngine(theory, budget)


def prove_path_eq(
    theory: Theory, p: Path, q: Path, budget: Budget = DEFAULT_BUDGET
) -> ProofOutcome:
    """Decide (semi-decide) p ~ q in the theory, within budget."""
    return engine_for(theory, budget).prove(p, q)


def cross_closure(theory: Theory, budget: Budget = DEFAULT_BUDGET) -> Closure:
    """The specialised cross-path relation of a collage theory, computed over
    the cross-path universe only: equation instances in context, closed under
    post-composition with right symbols and pre-composition with left symbols.
    Used as the second route in dual-route tests against the general closure.
    """
    part = theory.partition
    if part is None:
        raise ForeignPath("cross_closure needs a partitioned (collage) theory")
    universe = theory.cross_paths_upto(budget.max_path_length)
    return Closure(
        theory.cat,
        universe,
        budget.max_closure_rounds,
        post_syms=part.right_fun_set,
        pre_syms=part.left_fun_set,
    )


def combine_outcomes(items: list[ProofOutcome], budget: Budget) -> ProofOutcome:
    """Aggregate per-goal outcomes into one morphism-level outcome."""
    if any(o.is_certified_negative for o in items):
        return ProofOutcome(Status.DECIDED, False, None, budget)
    if all(o.is_positive for o in items):
        depths = [o.witness_depth for o in items if o.witness_depth is not None]
        return ProofOutcome(Status.PROVED, True, max(depths, default=0), budget)
    return ProofOutcome(Status.NOT_PROVED, None, None, budget)


def morphisms_equal(F, G, budget: Budget = DEFAULT_BUDGET) -> ProofOutcome:
    """Provable equality of two parallel morphisms of the same kind.

    Sort/frame data must agree exactly; generator images are compared by the
    prover.  Works for category, instance, uncurried and curried morphisms.
    Structural disagreements (e.g. differing sort maps) are certain, and are
    reported as Decided(false) even without a completed system.
    """
    from . import presentations as pres  # local import to keep layering acyclic
    from .errors import KindMismatch

    if type(F) is not type(G):
        raise KindMismatch(f"{type(F).__name__} vs {type(G).__name__}")

    from .syntax import CatMorphism

    if isinstance(F, CatMorphism):
        if F.source != G.source or F.target != G.target:
            raise NonParallel("morphisms do not share source/target")
        if F.sort_pairs != G.sort_pairs:
            return ProofOutcome(Status.DECIDED, False, None, budget)
        eng = engine_for(theory_of_category(F.target), budget)
        items = [eng.prove(p, G.fun_map[f]) for f, p in F.fun_pairs]
        return combine_outcomes(items, budget)

    if isinstance(F, pres.InstanceMorphism):
        if F.source != G.source or F.target != G.target:
            raise NonParallel("morphisms do not share source/target")
        if F.base_map.sort_pairs != G.base_map.sort_pairs:
            return ProofOutcome(Status.DECIDED, False, None, budget)
        parts: list[ProofOutcome] = []
        if F.base_map != G.base_map:
            parts.append(morphisms_equal(F.base_map, G.base_map, budget))
        eng = engine_for(F.target.collage.theory, budget)
        for (g, t1), (_, t2) in zip(F.gen_pairs, G.gen_pairs):
            a = F.target.collage.embed_term(t1)
            b = G.target.collage.embed_term(t2)
            parts.append(eng.prove(a, b))
        return combine_outcomes(parts, budget)

    if isinstance(F, pres.UncurriedMorphism):
        if F.source != G.source or F.target != G.target:
            raise NonParallel("morphisms do not share source/target")
        eng = engine_for(F.target.collage.theory, budget)
        items = [
            eng.prove(
                F.target.collage.embed_cross(a), G.target.collage.embed_cross(b)
            )
            for (_, a), (_, b) in zip(F.pro_pairs, G.pro_pairs)
        ]
        return combine_outcomes(items, budget)

    if isinstance(F, pres.CurriedMorphism):
        if F.source != G.source or F.target != G.target:
            raise NonParallel("morphisms do not share source/target")
        if F.f0.sort_pairs != G.f0.sort_pairs or F.f1.sort_pairs != G.f1.sort_pairs:
            return ProofOutcome(Status.DECIDED, False, None, budget)
        parts = []
        if F.f0 != G.f0:
            parts.append(morphisms_equal(F.f0, G.f0, budget))
        if F.f1 != G.f1:
            parts.append(morphisms_equal(F.f1, G.f1, budget))
        for (c, m1), (_, m2) in zip(F.comp_pairs, G.comp_pairs):
            parts.append(morphisms_equal(m1, m2, budget))
        return combine_outcomes(parts, budget)

    raise KindMismatch(f"unsupported morphism kind {type(F).__name__}")
