"""Core value types: sorts, function symbols, paths, equations, category
presentations and their morphisms.

All types are immutable values; structural equality is syntactic equality.
Identity paths carry their sort explicitly, so an empty symbol list is never
ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    CompositionMismatch,
    EndpointMismatch,
    ForeignPath,
    UnknownSort,
    UnknownSymbol,
)


@dataclass(frozen=True)
class Sort:
    """A sort, tagged with the name of the presentation that declares it."""

    name: str
    theory: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.name, self.theory)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Sort({self.name!r}@{self.theory!r})"


@dataclass(frozen=True)
class FunSym:
    """A typed function symbol f : source -> target."""

    name: str
    source: Sort
    target: Sort

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.name, self.source, self.target)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"FunSym({self.name!r}: {self.source!s}->{self.target!s})"


@dataclass(frozen=True)
class Path:
    """A composable, possibly empty list of function symbols.

    The empty path at sort c is the identity 1_c.
    """

    start: Sort
    syms: tuple[FunSym, ...] = ()

    def __post_init__(self):
        at = self.start
        for f in self.syms:
            if f.source != at:
                raise CompositionMismatch(
                    f"symbol {f.name} expects source {f.source}, path is at {at}"
                )
            at = f.target
        object.__setattr__(self, "_hash", hash((self.start, self.syms)))

    def __hash__(self):
        return self._hash

    @property
    def end(self) -> Sort:
        return self.syms[-1].target if self.syms else self.start

    @property
    def is_identity(self) -> bool:
        return not self.syms

    def __len__(self):
        return len(self.syms)

    def then(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise EndpointMismatch(
                f"cannot compose {self} : ...->{self.end} with {other} : {other.start}->..."
            )
        return Path(self.start, self.syms + other.syms)

    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.syms)

    def __str__(self):
        if not self.syms:
            return f"id({self.start.name})"
        return ".".join(f.name for f in self.syms)

    @staticmethod
    def identity(sort: Sort) -> "Path":
        return Path(sort, ())


def compose_paths(p: Path, q: Path) -> Path:
    """Concatenate two paths; identity paths are neutral."""
    return p.then(q)


@dataclass(frozen=True)
class Equation:
    """A pair of paths intended to be parallel.

    Parallelism is not enforced here so that validators can report it; use
    `is_parallel` or `validate_presentation`.
    """

    lhs: Path
    rhs: Path

    @property
    def is_parallel(self) -> bool:
        return self.lhs.start == self.rhs.start and self.lhs.end == self.rhs.end

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass(frozen=True)
class CatPresentation:
    """A category presentation: sorts, typed function symbols, path equations.

    `order` optionally overrides the symbol order used by completion; it lists
    function symbol names, defaulting to declaration order.
    """

    name: str
    sorts: tuple[Sort, ...] = ()
    funs: tuple[FunSym, ...] = ()
    eqs: tuple[Equation, ...] = ()
    order: tuple[str, ...] = ()

    @cached_property
    def sort_by_name(self) -> dict[str, Sort]:
        return {s.name: s for s in self.sorts}

    @cached_property
    def fun_by_name(self) -> dict[str, FunSym]:
        return {f.name: f for f in self.funs}

    @cached_property
    def sort_set(self) -> frozenset[Sort]:
        return frozenset(self.sorts)

    @cached_property
    def fun_set(self) -> frozenset[FunSym]:
        return frozenset(self.funs)

    @cached_property
    def is_finite(self) -> bool:
        return True  # all fields are finite tuples by construction

    def sort(self, name: str) -> Sort:
        try:
            return self.sort_by_name[name]
        except KeyError:
            raise UnknownSort(f"no sort {name!r} in {self.name}") from None

    def fun(self, name: str) -> FunSym:
        try:
            return self.fun_by_name[name]
        except KeyError:
            raise UnknownSymbol(f"no function symbol {name!r} in {self.name}") from None

    def funs_from(self, sort: Sort) -> tuple[FunSym, ...]:
        return tuple(f for f in self.funs if f.source == sort)

    def owns_path(self, p: Path) -> bool:
        return p.start in self.sort_set and all(f in self.fun_set for f in p.syms)

    def symbol_order(self) -> tuple[FunSym, ...]:
        if not self.order:
            return self.funs
        by_name = self.fun_by_name
        ordered = [by_name[n] for n in self.order if n in by_name]
        rest = [f for f in self.funs if f.name not in self.order]
        return tuple(ordered + rest)

    def __str__(self):
        return self.name


def trivial_presentation(name: str, sort_name: str = "*") -> CatPresentation:
    s = Sort(sort_name, name)
    return CatPresentation(name, (s,), (), ())


def typecheck_path(
    pres: CatPresentation, raw: Sequence[str], start: Sort | str
) -> Path:
    """Resolve a list of symbol names against a presentation into a Path."""
    if isinstance(start, str):
        start = pres.sort(start)
    if start not in pres.sort_set:
        raise UnknownSort(f"sort {start} is not declared in {pres.name}")
    syms = []
    at = start
    for name in raw:
        f = pres.fun_by_name.get(name)
        if f is None:
            raise UnknownSymbol(f"no function symbol {name!r} in {pres.name}")
        if f.source != at:
            raise CompositionMismatch(
                f"symbol {name} : {f.source}->{f.target} does not compose at {at}"
            )
        syms.append(f)
        at = f.target
    return Path(start, tuple(syms))


def validate_presentation(pres: CatPresentation) -> list[Diagnostic]:
    """Structural well-formedness diagnostics; empty list means valid."""
    out: list[Diagnostic] = []
    seen_sorts: set[str] = set()
    for s in pres.sorts:
        if s.name in seen_sorts:
            out.append(Diagnostic("DuplicateSort", f"sort {s.name} declared twice"))
        seen_sorts.add(s.name)
    seen_funs: set[str] = set()
    for f in pres.funs:
        if f.name in seen_funs:
            out.append(Diagnostic("DuplicateFun", f"symbol {f.name} declared twice"))
        seen_funs.add(f.name)
        for endpoint in (f.source, f.target):
            if endpoint not in pres.sort_set:
                out.append(
                    Diagnostic(
                        "UnknownSort",
                        f"symbol {f.name} refers to undeclared sort {endpoint}",
                    )
                )
    for eq in pres.eqs:
        for side in (eq.lhs, eq.rhs):
            if not pres.owns_path(side):
                out.append(
                    Diagnostic(
                        "UnknownSymbol",
                        f"equation {eq} mentions a path not over {pres.name}",
                    )
                )
                break
        else:
            if not eq.is_parallel:
                out.append(
                    Diagnostic(
                        "NonParallelEquation",
                        f"equation {eq} relates non-parallel paths "
                        f"({eq.lhs.start}->{eq.lhs.end} vs {eq.rhs.start}->{eq.rhs.end})",
                    )
                )
    for n in pres.order:
        if n not in pres.fun_by_name:
            out.append(Diagnostic("UnknownSymbol", f"order lists unknown symbol {n}"))
    return out


@dataclass(frozen=True)
class CatMorphism:
    """A morphism of category presentations: sorts to sorts, symbols to paths.

    Maps are stored as tuples in the declaration order of the source
    presentation, which makes structural equality well defined.  Semantic
    validity (equations going to provable equalities) is established by the
    prover, not assumed here.
    """

    name: str = field(compare=False)
    source: CatPresentation = None  # type: ignore[assignment]
    target: CatPresentation = None  # type: ignore[assignment]
    sort_pairs: tuple[tuple[Sort, Sort], ...] = ()
    fun_pairs: tuple[tuple[FunSym, Path], ...] = ()

    @staticmethod
    def make(
        name: str,
        source: CatPresentation,
        target: CatPresentation,
        sort_map: Mapping[Sort, Sort],
        fun_map: Mapping[FunSym, Path],
    ) -> "CatMorphism":
        sort_pairs = []
        for s in source.sorts:
            if s not in sort_map:
                raise UnknownSort(f"morphism {name}: no image for sort {s}")
            img = sort_map[s]
            if img not in target.sort_set:
                raise UnknownSort(f"morphism {name}: image sort {img} not in {target.name}")
            sort_pairs.append((s, img))
        smap = dict(sort_pairs)
        fun_pairs = []
        for f in source.funs:
            if f not in fun_map:
                raise UnknownSymbol(f"morphism {name}: no image for symbol {f.name}")
            img = fun_map[f]
            if not target.owns_path(img):
                raise ForeignPath(f"morphism {name}: image of {f.name} not over {target.name}")
            if img.start != smap[f.source] or img.end != smap[f.target]:
                raise CompositionMismatch(
                    f"morphism {name}: image of {f.name} has endpoints "
                    f"{img.start}->{img.end}, expected {smap[f.source]}->{smap[f.target]}"
                )
            fun_pairs.append((f, img))
        return CatMorphism(name, source, target, tuple(sort_pairs), tuple(fun_pairs))

    @staticmethod
    def identity(pres: CatPresentation) -> "CatMorphism":
        return CatMorphism.make(
            f"id_{pres.name}",
            pres,
            pres,
            {s: s for s in pres.sorts},
            {f: Path(f.source, (f,)) for f in pres.funs},
        )

    @cached_property
    def sort_map(self) -> dict[Sort, Sort]:
        return dict(self.sort_pairs)

    @cached_property
    def fun_map(self) -> dict[FunSym, Path]:
        return dict(self.fun_pairs)

    @property
    def is_identity(self) -> bool:
        return (
            self.source == self.target
            and all(a == b for a, b in self.sort_pairs)
            and all(len(p) == 1 and p.syms[0] == f for f, p in self.fun_pairs)
        )

    def apply_sort(self, s: Sort) -> Sort:
        try:
            return self.sort_map[s]
        except KeyError:
            raise ForeignPath(f"sort {s} is not in the source of {self.name}") from None

    def apply(self, p: Path) -> Path:
        """Homomorphic extension to paths; identities map to identities."""
        if not self.source.owns_path(p):
            raise ForeignPath(f"path {p} is not over {self.source.name}")
        out = Path.identity(self.apply_sort(p.start))
        for f in p.syms:
            out = out.then(self.fun_map[f])
        return out

    def then(self, other: "CatMorphism") -> "CatMorphism":
        """Composite morphism, applying self first."""
        if self.target != other.source:
            raise EndpointMismatch(
                f"cannot compose {self.name} : ..->{self.target.name} "
                f"with {other.name} : {other.source.name}->.."
            )
        return CatMorphism.make(
            f"{other.name}.{self.name}",
            self.source,
            other.target,
            {s: other.apply_sort(t) for s, t in self.sort_pairs},
            {f: other.apply(p) for f, p in self.fun_pairs},
        )

    def __str__(self):
        return f"{self.name} : {self.source.name} -> {self.target.name}"


def apply_morphism(mor: CatMorphism, p: Path) -> Path:
    return mor.apply(p)


def paths_from(
    pres: CatPresentation, start: Sort, max_len: int
) -> Iterable[Path]:
    """All paths out of `start` with length <= max_len, shortest first."""
    level = [Path.identity(start)]
    yield level[0]
    for _ in range(max_len):
        nxt = []
        for p in level:
            for f in pres.funs:
                if f.source == p.end:
                    q = Path(p.start, p.syms + (f,))
                    nxt.append(q)
                    yield q
        level = nxt
        if not level:
            return


def all_paths_upto(pres: CatPresentation, max_len: int) -> list[Path]:
    """All paths of length <= max_len, ordered by (length, start sort,
    declaration indexes); the canonical shortlex enumeration."""
    index = {f: i for i, f in enumerate(pres.funs)}
    out: list[Path] = []
    level: list[Path] = [Path.identity(s) for s in pres.sorts]
    out.extend(level)
    for _ in range(max_len):
        nxt: list[Path] = []
        for p in level:
            for f in pres.funs:
                if f.source == p.end:
                    nxt.append(Path(p.start, p.syms + (f,)))
        nxt.sort(key=lambda q: (pres.sorts.index(q.start), tuple(index[f] for f in q.syms)))
        out.extend(nxt)
        level = nxt
        if not level:
            break
    return out
