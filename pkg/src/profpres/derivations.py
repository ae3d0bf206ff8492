"""Derivation trees for provable equality, and an independent replay checker.

A derivation is a tree whose nodes are the six inference rules generating the
provable-equality relation of a presentation: axiom, reflexivity, symmetry,
transitivity, and post-/pre-composition with a single function symbol.  The
replay checker recomputes every conclusion from scratch and trusts nothing
cached on the nodes, so it can certify soundness of whatever search produced
the tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ReplayError
from .syntax import CatPresentation, FunSym, Path


@dataclass(frozen=True)
class Ax:
    eq_index: int


@dataclass(frozen=True)
class Refl:
    path: Path


@dataclass(frozen=True)
class Sym:
    sub: "Derivation"


@dataclass(frozen=True)
class Trans:
    first: "Derivation"
    second: "Derivation"


@dataclass(frozen=True)
class PostComp:
    sub: "Derivation"
    sym: FunSym


@dataclass(frozen=True)
class PreComp:
    sym: FunSym
    sub: "Derivation"


Derivation = Union[Ax, Refl, Sym, Trans, PostComp, PreComp]


def depth(d: Derivation) -> int:
    if isinstance(d, (Ax, Refl)):
        return 1
    if isinstance(d, Sym):
        return 1 + depth(d.sub)
    if isinstance(d, Trans):
        return 1 + max(depth(d.first), depth(d.second))
    if isinstance(d, (PostComp, PreComp)):
        return 1 + depth(d.sub)
    raise ReplayError(f"unknown derivation node {d!r}")


def rule_count(d: Derivation) -> int:
    if isinstance(d, (Ax, Refl)):
        return 1
    if isinstance(d, Sym):
        return 1 + rule_count(d.sub)
    if isinstance(d, Trans):
        return 1 + rule_count(d.first) + rule_count(d.second)
    if isinstance(d, (PostComp, PreComp)):
        return 1 + rule_count(d.sub)
    raise ReplayError(f"unknown derivation node {d!r}")


def replay(cat: CatPresentation, d: Derivation) -> tuple[Path, Path]:
    """Check a derivation against the presentation and return its conclusion.

    Raises ReplayError on any ill-formed step.  This function is the
    independent side of the soundness check: it shares no state with the
    search that produced the derivation.
    """
    if isinstance(d, Ax):
        if not 0 <= d.eq_index < len(cat.eqs):
            raise ReplayError(f"axiom index {d.eq_index} out of range")
        eq = cat.eqs[d.eq_index]
        if not (cat.owns_path(eq.lhs) and cat.owns_path(eq.rhs) and eq.is_parallel):
            raise ReplayError(f"axiom {d.eq_index} is not a well-typed equation")
        return eq.lhs, eq.rhs
    if isinstance(d, Refl):
        if not cat.owns_path(d.path):
            raise ReplayError(f"reflexivity on a foreign path {d.path}")
        return d.path, d.path
    if isinstance(d, Sym):
        l, r = replay(cat, d.sub)
        return r, l
    if isinstance(d, Trans):
        l1, r1 = replay(cat, d.first)
        l2, r2 = replay(cat, d.second)
        if r1 != l2:
            raise ReplayError(f"transitivity mismatch: {r1} vs {l2}")
        return l1, r2
    if isinstance(d, PostComp):
        l, r = replay(cat, d.sub)
        if d.sym not in cat.fun_set:
            raise ReplayError(f"post-composition with foreign symbol {d.sym}")
        if l.end != d.sym.source:
            raise ReplayError(f"post-composition of {d.sym.name} does not fit {l}")
        ext = Path(d.sym.source, (d.sym,))
        return l.then(ext), r.then(ext)
    if isinstance(d, PreComp):
        l, r = replay(cat, d.sub)
        if d.sym not in cat.fun_set:
            raise ReplayError(f"pre-composition with foreign symbol {d.sym}")
        if d.sym.target != l.start:
            raise ReplayError(f"pre-composition of {d.sym.name} does not fit {l}")
        ext = Path(d.sym.source, (d.sym,))
        return ext.then(l), ext.then(r)
    raise ReplayError(f"unknown derivation node {d!r}")
