"""Profunctor-style presentations over category presentations.

Three syntactic kinds live here, plus their morphisms and validators:

* uncurried presentations: profunctor symbols from left sorts to right sorts
  with equations between parallel cross-paths; proving happens in the collage,
  the single category presentation combining both bases and the new symbols;
* instance presentations: the one-object special case (generators and terms),
  presenting set-valued actions of the base;
* curried presentations: a family of instance presentations indexed by the
  left sorts, with a contravariant instance morphism per left symbol,
  compatible with the left equations up to provable equality.

Cross-paths and terms are kept in split form (left part / symbol / right
part), which makes unique decomposition structural rather than something to
re-parse out of collage words.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence

from .errors import (
    BaseMismatch,
    CompositionMismatch,
    EndpointMismatch,
    ForeignPath,
    KindMismatch,
    NonGlobular,
    TypeMismatch,
    UnknownSort,
    UnknownSymbol,
)
from .prover import (
    Budget,
    DEFAULT_BUDGET,
    Partition,
    ProofOutcome,
    Theory,
    combine_outcomes,
    engine_for,
    theory_of_category,
)
from .syntax import (
    CatMorphism,
    CatPresentation,
    Diagnostic,
    Equation,
    FunSym,
    Path,
    Sort,
    validate_presentation,
)

TERMINAL_NAME = "1"


def terminal_presentation() -> CatPresentation:
    """The presentation with a single sort * and nothing else."""
    s = Sort("*", TERMINAL_NAME)
    return CatPresentation(TERMINAL_NAME, (s,), (), ())


@dataclass(frozen=True)
class ProSym:
    """A profunctor function symbol from a left sort to a right sort."""

    name: str
    source: Sort
    target: Sort

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.name, self.source, self.target)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class GenSym:
    """A generator of an instance presentation, typed by a base sort."""

    name: str
    sort: Sort

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.name, self.sort)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class CrossPath:
    """A cross-path in split form: left path, profunctor symbol, right path."""

    left: Path
    pro: ProSym
    right: Path

    def __post_init__(self):
        if self.left.end != self.pro.source:
            raise CompositionMismatch(
                f"left part ends at {self.left.end}, {self.pro.name} starts at {self.pro.source}"
            )
        if self.pro.target != self.right.start:
            raise CompositionMismatch(
                f"{self.pro.name} ends at {self.pro.target}, right part starts at {self.right.start}"
            )
        object.__setattr__(self, "_hash", hash((self.left, self.pro, self.right)))

    def __hash__(self):
        return self._hash

    @property
    def start(self) -> Sort:
        return self.left.start

    @property
    def end(self) -> Sort:
        return self.right.end

    @property
    def is_right(self) -> bool:
        return self.left.is_identity

    @property
    def is_short_left(self) -> bool:
        return len(self.left) == 1 and self.right.is_identity

    def __len__(self):
        return len(self.left) + 1 + len(self.right)

    def __str__(self):
        parts = [f.name for f in self.left.syms] + [self.pro.name] + [
            f.name for f in self.right.syms
        ]
        return ".".join(parts)


@dataclass(frozen=True)
class CrossEquation:
    lhs: CrossPath
    rhs: CrossPath

    @property
    def is_parallel(self) -> bool:
        return self.lhs.start == self.rhs.start and self.lhs.end == self.rhs.end

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Term:
    """A term of an instance presentation: a generator then a base path."""

    gen: GenSym
    tail: Path

    def __post_init__(self):
        if self.gen.sort != self.tail.start:
            raise TypeMismatch(
                f"generator {self.gen.name} : {self.gen.sort} cannot continue with {self.tail}"
            )
        object.__setattr__(self, "_hash", hash((self.gen, self.tail)))

    def __hash__(self):
        return self._hash

    @property
    def sort(self) -> Sort:
        return self.tail.end

    def extend(self, p: Path) -> "Term":
        return Term(self.gen, self.tail.then(p))

    def __len__(self):
        return 1 + len(self.tail)

    def __str__(self):
        if self.tail.is_identity:
            return self.gen.name
        return f"{self.gen.name}.{self.tail}"

    @staticmethod
    def of(gen: GenSym) -> "Term":
        return Term(gen, Path.identity(gen.sort))


@dataclass(frozen=True)
class TermEquation:
    lhs: Term
    rhs: Term

    @property
    def is_parallel(self) -> bool:
        return self.lhs.sort == self.rhs.sort

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


# --------------------------------------------------------------------------
# collage construction
# --------------------------------------------------------------------------


def _fresh(name: str, taken: set[str], suffix: str) -> str:
    if name not in taken:
        return name
    cand = f"{name}_{suffix}"
    while cand in taken:
        cand += "'"
    return cand


class Collage:
    """The single category presentation combining left base, profunctor
    symbols and right base, with origin tags and renaming on collision.

    Left names are kept; colliding profunctor and right names get an origin
    suffix.  Embedding/unembedding converts between split cross-paths and
    collage paths."""

    def __init__(
        self,
        owner_name: str,
        left: CatPresentation,
        right: CatPresentation,
        pros: tuple[ProSym, ...],
        cross_eqs: tuple[CrossEquation, ...],
    ):
        cname = f"|{owner_name}|"
        self.left = left
        self.right = right

        sort_names: set[str] = set()
        self.left_sort: dict[Sort, Sort] = {}
        left_sorts = []
        for s in left.sorts:
            ns = Sort(_fresh(s.name, sort_names, left.name), cname)
            sort_names.add(ns.name)
            self.left_sort[s] = ns
            left_sorts.append(ns)
        self.right_sort: dict[Sort, Sort] = {}
        right_sorts = []
        for s in right.sorts:
            ns = Sort(_fresh(s.name, sort_names, right.name), cname)
            sort_names.add(ns.name)
            self.right_sort[s] = ns
            right_sorts.append(ns)

        fun_names: set[str] = set()
        self.left_fun: dict[FunSym, FunSym] = {}
        left_funs = []
        for f in left.funs:
            nf = FunSym(
                _fresh(f.name, fun_names, left.name),
                self.left_sort[f.source],
                self.left_sort[f.target],
            )
            fun_names.add(nf.name)
            self.left_fun[f] = nf
            left_funs.append(nf)
        self.pro_fun: dict[ProSym, FunSym] = {}
        pro_funs = []
        for p in pros:
            nf = FunSym(
                _fresh(p.name, fun_names, "pro"),
                self.left_sort[p.source],
                self.right_sort[p.target],
            )
            fun_names.add(nf.name)
            self.pro_fun[p] = nf
            pro_funs.append(nf)
        self.right_fun: dict[FunSym, FunSym] = {}
        right_funs = []
        for f in right.funs:
            nf = FunSym(
                _fresh(f.name, fun_names, right.name),
                self.right_sort[f.source],
                self.right_sort[f.target],
            )
            fun_names.add(nf.name)
            self.right_fun[f] = nf
            right_funs.append(nf)

        self._unembed_fun: dict[FunSym, tuple[str, object]] = {}
        for f, nf in self.left_fun.items():
            self._unembed_fun[nf] = ("left", f)
        for p, nf in self.pro_fun.items():
            self._unembed_fun[nf] = ("pro", p)
        for f, nf in self.right_fun.items():
            self._unembed_fun[nf] = ("right", f)

        eqs: list[Equation] = []
        for eq in left.eqs:
            eqs.append(Equation(self.embed_left(eq.lhs), self.embed_left(eq.rhs)))
        for ceq in cross_eqs:
            eqs.append(Equation(self.embed_cross(ceq.lhs), self.embed_cross(ceq.rhs)))
        for eq in right.eqs:
            eqs.append(Equation(self.embed_right(eq.lhs), self.embed_right(eq.rhs)))

        order = tuple(
            f.name
            for f in (
                [self.left_fun[f] for f in left.symbol_order()]
                + pro_funs
                + [self.right_fun[f] for f in right.symbol_order()]
            )
        )
        cat = CatPresentation(
            cname,
            tuple(left_sorts + right_sorts),
            tuple(left_funs + pro_funs + right_funs),
            tuple(eqs),
            order,
        )
        self.cat = cat
        self.theory = Theory(
            cat,
            Partition(
                tuple(left_sorts),
                tuple(right_sorts),
                tuple(left_funs),
                tuple(pro_funs),
                tuple(right_funs),
            ),
        )

    # embeddings ------------------------------------------------------------

    def embed_left(self, p: Path) -> Path:
        return Path(self.left_sort[p.start], tuple(self.left_fun[f] for f in p.syms))

    def embed_right(self, p: Path) -> Path:
        return Path(self.right_sort[p.start], tuple(self.right_fun[f] for f in p.syms))

    def embed_cross(self, cp: CrossPath) -> Path:
        syms = (
            tuple(self.left_fun[f] for f in cp.left.syms)
            + (self.pro_fun[cp.pro],)
            + tuple(self.right_fun[f] for f in cp.right.syms)
        )
        return Path(self.left_sort[cp.start], syms)

    @cached_property
    def _pro_by_name(self) -> dict[str, ProSym]:
        return {p.name: p for p in self.pro_fun}

    def embed_term(self, t: Term) -> Path:
        """Terms are cross-paths whose left part is the identity at *."""
        pro = self._pro_by_name.get(t.gen.name)
        if pro is None or pro.target != t.gen.sort:
            raise ForeignPath(f"term {t} is not over this collage")
        return self.embed_cross(CrossPath(Path.identity(pro.source), pro, t.tail))

    def unembed_cross(self, p: Path) -> CrossPath:
        left_syms: list[FunSym] = []
        pro: Optional[ProSym] = None
        right_syms: list[FunSym] = []
        for f in p.syms:
            tag, orig = self._unembed_fun[f]
            if tag == "left":
                left_syms.append(orig)  # type: ignore[arg-type]
            elif tag == "pro":
                if pro is not None:
                    raise ForeignPath(f"{p} crosses twice")
                pro = orig  # type: ignore[assignment]
            else:
                right_syms.append(orig)  # type: ignore[arg-type]
        if pro is None:
            raise ForeignPath(f"{p} is not a cross-path")
        left_start = next(s for s, ns in self.left_sort.items() if ns == p.start)
        return CrossPath(
            Path(left_start, tuple(left_syms)),
            pro,
            Path(pro.target, tuple(right_syms)),
        )


# --------------------------------------------------------------------------
# presentation kinds
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class UncurriedPresentation:
    """Profunctor symbols over two bases plus cross-path equations."""

    name: str = field(compare=False)
    left: CatPresentation
    right: CatPresentation
    pros: tuple[ProSym, ...] = ()
    eqs: tuple[CrossEquation, ...] = ()

    @cached_property
    def collage(self) -> Collage:
        return Collage(self.name, self.left, self.right, self.pros, self.eqs)

    @cached_property
    def pro_by_name(self) -> dict[str, ProSym]:
        return {p.name: p for p in self.pros}

    def pros_from(self, c: Sort) -> tuple[ProSym, ...]:
        return tuple(p for p in self.pros if p.source == c)

    def short_left_crosses(self) -> list[CrossPath]:
        out = []
        for f in self.left.funs:
            for p in self.pros:
                if p.source == f.target:
                    out.append(
                        CrossPath(Path(f.source, (f,)), p, Path.identity(p.target))
                    )
        return out

    def right_cross_candidates(self, c: Sort, max_len: int) -> Iterator[CrossPath]:
        """Right cross-paths from c, by length then declaration order."""
        level = [
            CrossPath(Path.identity(c), p, Path.identity(p.target))
            for p in self.pros
            if p.source == c
        ]
        yield from level
        for _ in range(max_len - 1):
            nxt = []
            for cp in level:
                for g in self.right.funs:
                    if g.source == cp.end:
                        nxt.append(
                            CrossPath(cp.left, cp.pro, Path(cp.right.start, cp.right.syms + (g,)))
                        )
            yield from nxt
            level = nxt
            if not level:
                return

    def __str__(self):
        return f"{self.name} : {self.left.name} -/-> {self.right.name}"


@dataclass(frozen=True)
class InstancePresentation:
    """Generators typed by base sorts plus equations between parallel terms."""

    name: str = field(compare=False)
    base: CatPresentation
    gens: tuple[GenSym, ...] = ()
    eqs: tuple[TermEquation, ...] = ()

    @cached_property
    def gen_by_name(self) -> dict[str, GenSym]:
        return {g.name: g for g in self.gens}

    def as_uncurried(self) -> UncurriedPresentation:
        one = terminal_presentation()
        star = one.sorts[0]
        pros = tuple(ProSym(g.name, star, g.sort) for g in self.gens)
        eqs = []
        for eq in self.eqs:
            eqs.append(
                CrossEquation(
                    self._cross_of(eq.lhs, star, pros),
                    self._cross_of(eq.rhs, star, pros),
                )
            )
        return UncurriedPresentation(self.name, one, self.base, pros, tuple(eqs))

    def _cross_of(self, t: Term, star: Sort, pros: tuple[ProSym, ...]) -> CrossPath:
        pro = next(p for p in pros if p.name == t.gen.name)
        return CrossPath(Path.identity(star), pro, t.tail)

    @cached_property
    def collage(self) -> Collage:
        u = self.as_uncurried()
        return u.collage

    def terms_upto(self, max_len: int) -> Iterator[Term]:
        """Terms by length then declaration order; length counts the generator."""
        level = [Term.of(g) for g in self.gens]
        yield from level
        for _ in range(max_len - 1):
            nxt = []
            for t in level:
                for f in self.base.funs:
                    if f.source == t.sort:
                        nxt.append(Term(t.gen, Path(t.tail.start, t.tail.syms + (f,))))
            yield from nxt
            level = nxt
            if not level:
                return

    def __str__(self):
        return f"{self.name} on {self.base.name}"


def build_collage(P) -> Theory:
    """The collage theory of an uncurried or instance presentation."""
    if isinstance(P, (UncurriedPresentation, InstancePresentation)):
        return P.collage.theory
    raise KindMismatch(f"no collage for {type(P).__name__}")


def prove_cross_eq(
    P: UncurriedPresentation, a: CrossPath, b: CrossPath, budget: Budget = DEFAULT_BUDGET
) -> ProofOutcome:
    col = P.collage
    eng = engine_for(col.theory, budget)
    return eng.prove(col.embed_cross(a), col.embed_cross(b))


def prove_term_eq(
    I: InstancePresentation, a: Term, b: Term, budget: Budget = DEFAULT_BUDGET
) -> ProofOutcome:
    col = I.collage
    eng = engine_for(col.theory, budget)
    return eng.prove(col.embed_term(a), col.embed_term(b))


# --------------------------------------------------------------------------
# morphisms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceMorphism:
    """Generator-to-term map over a base morphism (identity when globular)."""

    name: str = field(compare=False)
    source: InstancePresentation = None  # type: ignore[assignment]
    target: InstancePresentation = None  # type: ignore[assignment]
    base_map: CatMorphism = None  # type: ignore[assignment]
    gen_pairs: tuple[tuple[GenSym, Term], ...] = ()

    @staticmethod
    def make(
        name: str,
        source: InstancePresentation,
        target: InstancePresentation,
        gen_map: Mapping[GenSym, Term],
        base_map: Optional[CatMorphism] = None,
    ) -> "InstanceMorphism":
        if base_map is None:
            if source.base != target.base:
                raise BaseMismatch(
                    f"{name}: bases differ ({source.base.name} vs {target.base.name}); "
                    "a base map is required"
                )
            base_map = CatMorphism.identity(source.base)
        if base_map.source != source.base or base_map.target != target.base:
            raise BaseMismatch(f"{name}: base map endpoints do not match the bases")
        pairs = []
        for g in source.gens:
            if g not in gen_map:
                raise UnknownSymbol(f"{name}: no image for generator {g.name}")
            img = gen_map[g]
            if target.gen_by_name.get(img.gen.name) != img.gen:
                raise UnknownSymbol(f"{name}: image of {g.name} uses foreign generator")
            if img.sort != base_map.apply_sort(g.sort):
                raise TypeMismatch(
                    f"{name}: image of {g.name} has type {img.sort}, "
                    f"expected {base_map.apply_sort(g.sort)}"
                )
            pairs.append((g, img))
        return InstanceMorphism(name, source, target, base_map, tuple(pairs))

    @staticmethod
    def identity(I: InstancePresentation) -> "InstanceMorphism":
        return InstanceMorphism.make(
            f"id_{I.name}", I, I, {g: Term.of(g) for g in I.gens}
        )

    @cached_property
    def gen_map(self) -> dict[GenSym, Term]:
        return dict(self.gen_pairs)

    @property
    def is_globular(self) -> bool:
        return self.base_map.is_identity

    def apply(self, t: Term) -> Term:
        img = self.gen_map.get(t.gen)
        if img is None:
            raise ForeignPath(f"term {t} is not over the source of {self.name}")
        return img.extend(self.base_map.apply(t.tail))

    def then(self, other: "InstanceMorphism") -> "InstanceMorphism":
        if self.target != other.source:
            raise EndpointMismatch(f"cannot compose {self.name} with {other.name}")
        return InstanceMorphism.make(
            f"{other.name}.{self.name}",
            self.source,
            other.target,
            {g: other.apply(t) for g, t in self.gen_pairs},
            base_map=self.base_map.then(other.base_map),
        )

    def __str__(self):
        return f"{self.name} : {self.source.name} -> {self.target.name}"


@dataclass(frozen=True)
class UncurriedMorphism:
    """Profunctor-symbol-to-cross-path map between parallel uncurried
    presentations (globular: both bases fixed)."""

    name: str = field(compare=False)
    source: UncurriedPresentation = None  # type: ignore[assignment]
    target: UncurriedPresentation = None  # type: ignore[assignment]
    pro_pairs: tuple[tuple[ProSym, CrossPath], ...] = ()

    @staticmethod
    def make(
        name: str,
        source: UncurriedPresentation,
        target: UncurriedPresentation,
        pro_map: Mapping[ProSym, CrossPath],
    ) -> "UncurriedMorphism":
        if source.left != target.left or source.right != target.right:
            raise _frame_mismatch(name)
        pairs = []
        for p in source.pros:
            if p not in pro_map:
                raise UnknownSymbol(f"{name}: no image for {p.name}")
            img = pro_map[p]
            if img.start != p.source or img.end != p.target:
                raise TypeMismatch(
                    f"{name}: image of {p.name} has endpoints {img.start}->{img.end}"
                )
            pairs.append((p, img))
        return UncurriedMorphism(name, source, target, tuple(pairs))

    @staticmethod
    def identity(P: UncurriedPresentation) -> "UncurriedMorphism":
        return UncurriedMorphism.make(
            f"id_{P.name}",
            P,
            P,
            {
                p: CrossPath(Path.identity(p.source), p, Path.identity(p.target))
                for p in P.pros
            },
        )

    @cached_property
    def pro_map(self) -> dict[ProSym, CrossPath]:
        return dict(self.pro_pairs)

    @property
    def is_rightward(self) -> bool:
        return all(img.is_right for _, img in self.pro_pairs)

    def apply(self, cp: CrossPath) -> CrossPath:
        img = self.pro_map.get(cp.pro)
        if img is None:
            raise ForeignPath(f"cross-path {cp} is not over the source of {self.name}")
        return CrossPath(
            cp.left.then(img.left), img.pro, img.right.then(cp.right)
        )

    def __str__(self):
        return f"{self.name} : {self.source.name} -> {self.target.name}"


def _frame_mismatch(name: str):
    from .errors import FrameMismatch

    return FrameMismatch(f"{name}: source and target presentations are not parallel")


@dataclass(frozen=True)
class CurriedPresentation:
    """Instance presentations indexed by left sorts, with a contravariant
    instance morphism per left function symbol."""

    name: str = field(compare=False)
    left: CatPresentation
    right: CatPresentation
    at_pairs: tuple[tuple[Sort, InstancePresentation], ...] = ()
    act_pairs: tuple[tuple[FunSym, InstanceMorphism], ...] = ()

    @staticmethod
    def make(
        name: str,
        left: CatPresentation,
        right: CatPresentation,
        at: Mapping[Sort, InstancePresentation],
        act: Mapping[FunSym, InstanceMorphism],
    ) -> "CurriedPresentation":
        at_pairs = []
        for c in left.sorts:
            if c not in at:
                raise UnknownSort(f"{name}: no instance assigned to sort {c}")
            inst = at[c]
            if inst.base != right:
                raise BaseMismatch(f"{name}: instance at {c} is not over {right.name}")
            at_pairs.append((c, inst))
        at_dict = dict(at_pairs)
        act_pairs = []
        for f in left.funs:
            if f not in act:
                raise UnknownSymbol(f"{name}: no action assigned to symbol {f.name}")
            m = act[f]
            if m.source != at_dict[f.target] or m.target != at_dict[f.source]:
                raise TypeMismatch(
                    f"{name}: action of {f.name} must map the instance at {f.target} "
                    f"to the instance at {f.source}"
                )
            if not m.is_globular:
                raise NonGlobular(f"{name}: action of {f.name} must fix the base")
            act_pairs.append((f, m))
        return CurriedPresentation(name, left, right, tuple(at_pairs), tuple(act_pairs))

    @cached_property
    def at_map(self) -> dict[Sort, InstancePresentation]:
        return dict(self.at_pairs)

    @cached_property
    def act_map(self) -> dict[FunSym, InstanceMorphism]:
        return dict(self.act_pairs)

    def at(self, c: Sort) -> InstancePresentation:
        try:
            return self.at_map[c]
        except KeyError:
            raise UnknownSort(f"no instance at sort {c} in {self.name}") from None

    def act(self, f: FunSym) -> InstanceMorphism:
        try:
            return self.act_map[f]
        except KeyError:
            raise UnknownSymbol(f"no action for {f} in {self.name}") from None

    def act_path(self, p: Path, t: Term) -> Term:
        """Apply the contravariant composite action of a left path.

        For p : c -> c' this maps terms of the instance at c' to terms of the
        instance at c, applying the last symbol's action first.
        """
        for f in reversed(p.syms):
            t = self.act(f).apply(t)
        return t

    def __str__(self):
        return f"{self.name} : {self.left.name} -/-> {self.right.name}"


@dataclass(frozen=True)
class CurriedMorphism:
    """A family of instance morphisms indexed by left sorts, commuting with
    the actions up to provable equality (checked by the validator)."""

    name: str = field(compare=False)
    source: CurriedPresentation = None  # type: ignore[assignment]
    target: CurriedPresentation = None  # type: ignore[assignment]
    f0: CatMorphism = None  # type: ignore[assignment]
    f1: CatMorphism = None  # type: ignore[assignment]
    comp_pairs: tuple[tuple[Sort, InstanceMorphism], ...] = ()

    @staticmethod
    def make(
        name: str,
        source: CurriedPresentation,
        target: CurriedPresentation,
        components: Mapping[Sort, InstanceMorphism],
        f0: Optional[CatMorphism] = None,
        f1: Optional[CatMorphism] = None,
    ) -> "CurriedMorphism":
        if f0 is None:
            if source.left != target.left:
                raise _frame_mismatch(name)
            f0 = CatMorphism.identity(source.left)
        if f1 is None:
            if source.right != target.right:
                raise _frame_mismatch(name)
            f1 = CatMorphism.identity(source.right)
        pairs = []
        for c in source.left.sorts:
            if c not in components:
                raise UnknownSort(f"{name}: no component at sort {c}")
            m = components[c]
            if m.source != source.at(c) or m.target != target.at(f0.apply_sort(c)):
                raise TypeMismatch(f"{name}: component at {c} has wrong endpoints")
            if m.base_map != f1:
                raise TypeMismatch(f"{name}: component at {c} must use the right base map")
            pairs.append((c, m))
        return CurriedMorphism(name, source, target, f0, f1, tuple(pairs))

    @staticmethod
    def identity(P: CurriedPresentation) -> "CurriedMorphism":
        return CurriedMorphism.make(
            f"id_{P.name}",
            P,
            P,
            {c: InstanceMorphism.identity(P.at(c)) for c in P.left.sorts},
        )

    @cached_property
    def comp_map(self) -> dict[Sort, InstanceMorphism]:
        return dict(self.comp_pairs)

    def component(self, c: Sort) -> InstanceMorphism:
        return self.comp_map[c]

    @property
    def is_globular(self) -> bool:
        return self.f0.is_identity and self.f1.is_identity

    def then(self, other: "CurriedMorphism") -> "CurriedMorphism":
        if self.target != other.source:
            raise EndpointMismatch(f"cannot compose {self.name} with {other.name}")
        comps = {}
        for c, m in self.comp_pairs:
            comps[c] = m.then(other.component(self.f0.apply_sort(c)))
        return CurriedMorphism.make(
            f"{other.name}.{self.name}",
            self.source,
            other.target,
            comps,
            f0=self.f0.then(other.f0),
            f1=self.f1.then(other.f1),
        )

    def __str__(self):
        return f"{self.name} : {self.source.name} -> {self.target.name}"


# --------------------------------------------------------------------------
# structural validators
# --------------------------------------------------------------------------


def validate_uncurried_structure(P: UncurriedPresentation) -> list[Diagnostic]:
    out = validate_presentation(P.left) + validate_presentation(P.right)
    seen: set[str] = set()
    for p in P.pros:
        if p.name in seen:
            out.append(Diagnostic("DuplicateFun", f"profunctor symbol {p.name} declared twice"))
        seen.add(p.name)
        if p.source not in P.left.sort_set:
            out.append(Diagnostic("UnknownSort", f"{p.name} starts at foreign sort {p.source}"))
        if p.target not in P.right.sort_set:
            out.append(Diagnostic("UnknownSort", f"{p.name} ends at foreign sort {p.target}"))
        for f in P.left.funs:
            if f.name == p.name and f.source == p.source:
                out.append(
                    Diagnostic(
                        "AmbiguousSymbol",
                        f"{p.name} shadows a base symbol from {p.source}",
                    )
                )
    pro_set = set(P.pros)
    for eq in P.eqs:
        for side in (eq.lhs, eq.rhs):
            if (
                side.pro not in pro_set
                or not P.left.owns_path(side.left)
                or not P.right.owns_path(side.right)
            ):
                out.append(
                    Diagnostic("UnknownSymbol", f"equation {eq} mentions foreign symbols")
                )
                break
        else:
            if not eq.is_parallel:
                out.append(
                    Diagnostic("NonParallelEquation", f"equation {eq} is not parallel")
                )
    return out


def validate_instance_structure(I: InstancePresentation) -> list[Diagnostic]:
    out = validate_presentation(I.base)
    seen: set[str] = set()
    for g in I.gens:
        if g.name in seen:
            out.append(Diagnostic("DuplicateFun", f"generator {g.name} declared twice"))
        seen.add(g.name)
        if g.sort not in I.base.sort_set:
            out.append(Diagnostic("UnknownSort", f"generator {g.name} has foreign sort {g.sort}"))
    gen_set = set(I.gens)
    for eq in I.eqs:
        for side in (eq.lhs, eq.rhs):
            if side.gen not in gen_set or not I.base.owns_path(side.tail):
                out.append(
                    Diagnostic("UnknownSymbol", f"equation {eq} mentions foreign symbols")
                )
                break
        else:
            if not eq.is_parallel:
                out.append(
                    Diagnostic("NonParallelEquation", f"equation {eq} is not parallel")
                )
    return out


def validate_curried_structure(P: CurriedPresentation) -> list[Diagnostic]:
    out = validate_presentation(P.left) + validate_presentation(P.right)
    for _, inst in P.at_pairs:
        out.extend(validate_instance_structure(inst))
    return out


# --------------------------------------------------------------------------
# semantic validation (prover-backed, three-valued, never raising)
# --------------------------------------------------------------------------


class ValidationStatus(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckItem:
    label: str
    outcome: ProofOutcome


@dataclass(frozen=True)
class ValidationReport:
    subject: str
    items: tuple[CheckItem, ...]
    budget: Budget

    @property
    def status(self) -> ValidationStatus:
        if any(i.outcome.is_certified_negative for i in self.items):
            return ValidationStatus.INVALID
        if all(i.outcome.is_positive for i in self.items):
            return ValidationStatus.VALID
        return ValidationStatus.INCONCLUSIVE

    @property
    def counterexample(self) -> Optional[CheckItem]:
        for i in self.items:
            if i.outcome.is_certified_negative:
                return i
        return None

    @property
    def unresolved(self) -> tuple[CheckItem, ...]:
        return tuple(i for i in self.items if not i.outcome.is_positive)

    def describe(self) -> str:
        lines = [f"{self.subject}: {self.status.value} ({len(self.items)} checks)"]
        for i in self.items:
            lines.append(f"  {i.label}: {i.outcome.describe()}")
        return "\n".join(lines)


def validate_morphism(F, budget: Budget = DEFAULT_BUDGET) -> ValidationReport:
    """Check that a morphism sends each source equation to a provable equality."""
    items: list[CheckItem] = []
    if isinstance(F, CatMorphism):
        eng = engine_for(theory_of_category(F.target), budget)
        for eq in F.source.eqs:
            a, b = F.apply(eq.lhs), F.apply(eq.rhs)
            items.append(CheckItem(f"{eq} -> {a} = {b}", eng.prove(a, b)))
    elif isinstance(F, InstanceMorphism):
        col = F.target.collage
        eng = engine_for(col.theory, budget)
        for eq in F.source.eqs:
            a, b = F.apply(eq.lhs), F.apply(eq.rhs)
            items.append(
                CheckItem(
                    f"{eq} -> {a} = {b}",
                    eng.prove(col.embed_term(a), col.embed_term(b)),
                )
            )
    elif isinstance(F, UncurriedMorphism):
        col = F.target.collage
        eng = engine_for(col.theory, budget)
        for eq in F.source.eqs:
            a, b = F.apply(eq.lhs), F.apply(eq.rhs)
            items.append(
                CheckItem(
                    f"{eq} -> {a} = {b}",
                    eng.prove(col.embed_cross(a), col.embed_cross(b)),
                )
            )
    else:
        raise KindMismatch(f"validate_morphism does not handle {type(F).__name__}")
    return ValidationReport(str(F), tuple(items), budget)


def validate_curried(P: CurriedPresentation, budget: Budget = DEFAULT_BUDGET) -> ValidationReport:
    """Check each action morphism, then equation-compatibility of the family."""
    items: list[CheckItem] = []
    for f, m in P.act_pairs:
        rep = validate_morphism(m, budget)
        for it in rep.items:
            items.append(CheckItem(f"act {f.name}: {it.label}", it.outcome))
    for eq in P.left.eqs:
        if not eq.is_parallel:
            continue
        inst_src = P.at(eq.lhs.end)
        inst_tgt = P.at(eq.lhs.start)
        for g in inst_src.gens:
            t = Term.of(g)
            a = P.act_path(eq.lhs, t)
            b = P.act_path(eq.rhs, t)
            out = prove_term_eq(inst_tgt, a, b, budget)
            items.append(CheckItem(f"({eq}) at {g.name}: {a} = {b}", out))
    return ValidationReport(str(P), tuple(items), budget)


def validate_curried_morphism(
    phi: CurriedMorphism, budget: Budget = DEFAULT_BUDGET
) -> ValidationReport:
    """Check the per-symbol naturality squares up to provable equality."""
    items: list[CheckItem] = []
    P, Q = phi.source, phi.target
    for f in P.left.funs:
        comp_src = phi.component(f.target)  # at c'
        comp_tgt = phi.component(f.source)  # at c
        img_path = phi.f0.apply(Path(f.source, (f,)))
        for g in P.at(f.target).gens:
            t = Term.of(g)
            a = comp_tgt.apply(P.act(f).apply(t))
            b = Q.act_path(img_path, comp_src.apply(t))
            out = prove_term_eq(Q.at(phi.f0.apply_sort(f.source)), a, b, budget)
            items.append(CheckItem(f"square ({f.name}, {g.name}): {a} = {b}", out))
    return ValidationReport(str(phi), tuple(items), budget)


# --------------------------------------------------------------------------
# fibers
# --------------------------------------------------------------------------


def fiber_instance(P: UncurriedPresentation, c: Sort) -> InstancePresentation:
    """The instance of right cross-paths out of a fixed left sort.

    Only equations with BOTH sides right cross-paths from c are kept: an
    equation side that begins with a left symbol is not a term of the fiber.
    """
    if c not in P.left.sort_set:
        raise UnknownSort(f"{c} is not a sort of {P.left.name}")
    gens = tuple(GenSym(p.name, p.target) for p in P.pros if p.source == c)
    by_name = {g.name: g for g in gens}
    eqs = []
    for eq in P.eqs:
        if (
            eq.lhs.start == c
            and eq.lhs.is_right
            and eq.rhs.is_right
        ):
            eqs.append(
                TermEquation(
                    Term(by_name[eq.lhs.pro.name], eq.lhs.right),
                    Term(by_name[eq.rhs.pro.name], eq.rhs.right),
                )
            )
    return InstancePresentation(f"{P.name}^{c.name}", P.right, gens, tuple(eqs))
