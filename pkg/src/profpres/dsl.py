"""Textual DSL: lexer, parser, pretty-printer, and JSON export.

The concrete grammar (one entity per block, `//` and `/* */` comments,
`*` is a legal identifier):

    category NAME { sorts ID(,ID)*; (fun ID : SORT -> SORT;)*
                    (eq PATH = PATH;)* (order ID(,ID)*;)? }
    instance NAME on CAT { (gen ID : SORT;)* (eq TERM = TERM;)* }
    uncurried NAME : CAT -> CAT { (pro ID : SORT -> SORT;)* (eq CPATH = CPATH;)* }
    curried NAME : CAT -> CAT { (at SORT { ...instance body... })+
                                (act FUN { GEN -> TERM; ... })* }
    morphism NAME : A -> B { (sort ID -> ID;)* (ID -> PATH;)* }

PATH is ID('.'ID)* or id(SORT).  Cross-paths and terms are resolved
type-directedly, so base symbols and profunctor symbols may reuse names as
long as no two candidates leave the same sort.  Morphism bodies are flat
generator/symbol images; the morphism kind is inferred from the kinds of its
endpoints.  All references resolve to entities defined earlier in the file.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .errors import (
    AmbiguousSymbol,
    LexError,
    ParseError,
    ResolveError,
    SourceSpan,
)
from .presentations import (
    CrossEquation,
    CrossPath,
    CurriedMorphism,
    CurriedPresentation,
    GenSym,
    InstanceMorphism,
    InstancePresentation,
    ProSym,
    Term,
    TermEquation,
    UncurriedMorphism,
    UncurriedPresentation,
    validate_curried_structure,
    validate_instance_structure,
    validate_uncurried_structure,
)
from .syntax import (
    CatMorphism,
    CatPresentation,
    Equation,
    FunSym,
    Path,
    Sort,
    validate_presentation,
)

Entity = object  # any presentation or morphism kind


@dataclass
class Workspace:
    """Named entities parsed from one source, in declaration order."""

    entities: dict[str, Entity]
    spans: dict[str, SourceSpan]

    def __getitem__(self, name: str) -> Entity:
        return self.entities[name]

    def __contains__(self, name: str) -> bool:
        return name in self.entities

    def names(self) -> list[str]:
        return list(self.entities)


# --------------------------------------------------------------------------
# lexer
# --------------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_*][A-Za-z0-9_*']*")
_PUNCT = {
    "{": "LBRACE",
    "}": "RBRACE",
    ";": "SEMI",
    ":": "COLON",
    ",": "COMMA",
    ".": "DOT",
    "=": "EQ",
    "(": "LPAREN",
    ")": "RPAREN",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str, filename: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)

    def span(length: int) -> SourceSpan:
        return SourceSpan(filename, line, col, line, col + length)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated block comment", span(2))
            chunk = text[i : j + 2]
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                col = len(chunk) - chunk.rfind("\n")
            else:
                col += len(chunk)
            i = j + 2
            continue
        if text.startswith("->", i):
            tokens.append(Token("ARROW", "->", span(2)))
            i += 2
            col += 2
            continue
        m = _IDENT.match(text, i)
        # a bare '*' would also start a '*/' -- the ident regex handles it
        if m and not (ch == "*" and text.startswith("*/", i)):
            word = m.group(0)
            tokens.append(Token("IDENT", word, span(len(word))))
            i = m.end()
            col += len(word)
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, span(1)))
            i += 1
            col += 1
            continue
        raise LexError(f"unexpected character {ch!r}", span(1))
    tokens.append(Token("EOF", "", SourceSpan(filename, line, col, line, col)))
    return tokens


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, filename: str):
        self.tokens = _tokenize(text, filename)
        self.pos = 0
        self.entities: dict[str, Entity] = {}
        self.spans: dict[str, SourceSpan] = {}

    # token plumbing -------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str = "") -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                f"expected {what or kind}, found {tok.text!r}", tok.span
            )
        return tok

    def expect_word(self, word: str) -> Token:
        tok = self.next()
        if tok.kind != "IDENT" or tok.text != word:
            raise ParseError(f"expected {word!r}, found {tok.text!r}", tok.span)
        return tok

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.text == word

    def ident(self, what: str = "identifier") -> Token:
        return self.expect("IDENT", what)

    # entity references ------------------------------------------------------

    def lookup(self, name_tok: Token, kinds: tuple[type, ...], what: str) -> Entity:
        ent = self.entities.get(name_tok.text)
        if ent is None:
            raise ResolveError(f"unknown entity {name_tok.text!r}", name_tok.span)
        if not isinstance(ent, kinds):
            raise ResolveError(
                f"{name_tok.text!r} is not {what}", name_tok.span
            )
        return ent

    def _check(self, diags, span: SourceSpan):
        if diags:
            raise ResolveError("; ".join(str(d) for d in diags), span)

    # top level -------------------------------------------------------------

    def parse_workspace(self) -> Workspace:
        while self.peek().kind != "EOF":
            tok = self.ident("block keyword")
            if tok.text == "category":
                self._category(tok)
            elif tok.text == "instance":
                self._instance(tok)
            elif tok.text == "uncurried":
                self._uncurried(tok)
            elif tok.text == "curried":
                self._curried(tok)
            elif tok.text == "morphism":
                self._morphism(tok)
            else:
                raise ParseError(
                    f"expected a block keyword (category/instance/uncurried/"
                    f"curried/morphism), found {tok.text!r}",
                    tok.span,
                )
        return Workspace(self.entities, self.spans)

    def _register(self, name_tok: Token, entity: Entity):
        if name_tok.text in self.entities:
            raise ResolveError(f"duplicate entity name {name_tok.text!r}", name_tok.span)
        self.entities[name_tok.text] = entity
        self.spans[name_tok.text] = name_tok.span

    # paths ------------------------------------------------------------------

    def _raw_path(self) -> tuple[list[Token], Optional[Token]]:
        """Either id(SORT) (returns ([], sort token)) or a dotted symbol list."""
        first = self.ident("path")
        if first.text == "id" and self.peek().kind == "LPAREN":
            self.next()
            sort_tok = self.ident("sort name")
            self.expect("RPAREN")
            return [], sort_tok
        toks = [first]
        while self.peek().kind == "DOT":
            self.next()
            toks.append(self.ident("path symbol"))
        return toks, None

    def _cat_path(self, cat: CatPresentation, start: Optional[Sort] = None) -> Path:
        toks, id_sort = self._raw_path()
        if id_sort is not None:
            s = cat.sort_by_name.get(id_sort.text)
            if s is None:
                raise ResolveError(f"unknown sort {id_sort.text!r}", id_sort.span)
            return Path.identity(s)
        syms = []
        at = start
        for tok in toks:
            f = cat.fun_by_name.get(tok.text)
            if f is None:
                raise ResolveError(
                    f"unknown symbol {tok.text!r} in {cat.name}", tok.span
                )
            if at is not None and f.source != at:
                raise ResolveError(
                    f"symbol {tok.text!r} does not compose at sort {at}", tok.span
                )
            syms.append(f)
            at = f.target
        return Path(syms[0].source, tuple(syms))

    def _cross_path(self, P: UncurriedPresentation) -> CrossPath:
        """Type-directed resolution over left symbols, profunctor symbols and
        right symbols; ambiguity is an error."""
        toks, id_sort = self._raw_path()
        if id_sort is not None:
            raise ResolveError("a cross-path cannot be an identity", id_sort.span)
        first = toks[0]
        starts = [f for f in P.left.funs if f.name == first.text]
        starts += [p for p in P.pros if p.name == first.text]
        if not starts:
            raise ResolveError(f"unknown symbol {first.text!r}", first.span)
        if len(starts) > 1:
            raise ResolveError(f"ambiguous symbol {first.text!r}", first.span)
        left_syms: list[FunSym] = []
        pro: Optional[ProSym] = None
        right_syms: list[FunSym] = []
        at = starts[0].source
        for tok in toks:
            if pro is None:
                fun = P.left.fun_by_name.get(tok.text)
                fun = fun if fun is not None and fun.source == at else None
                p = P.pro_by_name.get(tok.text)
                p = p if p is not None and p.source == at else None
                if fun is not None and p is not None:
                    raise ResolveError(f"ambiguous symbol {tok.text!r} at {at}", tok.span)
                if fun is not None:
                    left_syms.append(fun)
                    at = fun.target
                elif p is not None:
                    pro = p
                    at = p.target
                else:
                    raise ResolveError(
                        f"no symbol {tok.text!r} leaves sort {at}", tok.span
                    )
            else:
                fun = P.right.fun_by_name.get(tok.text)
                if fun is None or fun.source != at:
                    raise ResolveError(
                        f"no right symbol {tok.text!r} leaves sort {at}", tok.span
                    )
                right_syms.append(fun)
                at = fun.target
        if pro is None:
            raise ResolveError("path does not cross to the right side", first.span)
        return CrossPath(
            Path(starts[0].source if not left_syms else left_syms[0].source, tuple(left_syms)),
            pro,
            Path(pro.target, tuple(right_syms)),
        )

    def _term(self, inst: InstancePresentation) -> Term:
        toks, id_sort = self._raw_path()
        if id_sort is not None:
            raise ResolveError("a term cannot be an identity", id_sort.span)
        gen = inst.gen_by_name.get(toks[0].text)
        if gen is None:
            raise ResolveError(
                f"unknown generator {toks[0].text!r} in {inst.name}", toks[0].span
            )
        syms = []
        at = gen.sort
        for tok in toks[1:]:
            f = inst.base.fun_by_name.get(tok.text)
            if f is None or f.source != at:
                raise ResolveError(
                    f"no base symbol {tok.text!r} leaves sort {at}", tok.span
                )
            syms.append(f)
            at = f.target
        return Term(gen, Path(gen.sort, tuple(syms)))

    # blocks -----------------------------------------------------------------

    def _category(self, kw: Token):
        name = self.ident("category name")
        self.expect("LBRACE")
        self.expect_word("sorts")
        sort_names = [self.ident("sort name")]
        while self.peek().kind == "COMMA":
            self.next()
            sort_names.append(self.ident("sort name"))
        self.expect("SEMI")
        sorts = tuple(Sort(t.text, name.text) for t in sort_names)
        by_name = {s.name: s for s in sorts}
        funs: list[FunSym] = []
        eqs_raw: list[tuple] = []
        order: tuple[str, ...] = ()
        while not self.peek().kind == "RBRACE":
            tok = self.ident("fun/eq/order")
            if tok.text == "fun":
                fname = self.ident("symbol name")
                self.expect("COLON")
                src = self.ident("sort")
                self.expect("ARROW")
                tgt = self.ident("sort")
                self.expect("SEMI")
                for st in (src, tgt):
                    if st.text not in by_name:
                        raise ResolveError(f"unknown sort {st.text!r}", st.span)
                funs.append(FunSym(fname.text, by_name[src.text], by_name[tgt.text]))
            elif tok.text == "eq":
                lhs_pos = self.pos
                eqs_raw.append((self.pos, tok.span))
                # skip to the semicolon; equations are resolved after all funs
                depth = 0
                while not (self.peek().kind == "SEMI" and depth == 0):
                    t = self.next()
                    if t.kind == "EOF":
                        raise ParseError("unterminated equation", tok.span)
                self.expect("SEMI")
            elif tok.text == "order":
                names = [self.ident("symbol name").text]
                while self.peek().kind == "COMMA":
                    self.next()
                    names.append(self.ident("symbol name").text)
                self.expect("SEMI")
                order = tuple(names)
            else:
                raise ParseError(f"expected fun/eq/order, found {tok.text!r}", tok.span)
        self.expect("RBRACE")
        tmp = CatPresentation(name.text, sorts, tuple(funs), (), order)
        eqs: list[Equation] = []
        end_pos = self.pos
        for eq_pos, _ in eqs_raw:
            self.pos = eq_pos
            lhs = self._cat_path(tmp)
            self.expect("EQ")
            rhs = self._cat_path(tmp, start=lhs.start)
            eqs.append(Equation(lhs, rhs))
        self.pos = end_pos
        cat = CatPresentation(name.text, sorts, tuple(funs), tuple(eqs), order)
        self._check(validate_presentation(cat), name.span)
        self._register(name, cat)

    def _instance_body(
        self, base: CatPresentation, inst_name: str, end_kind: str = "RBRACE"
    ) -> InstancePresentation:
        gens: list[GenSym] = []
        eq_positions: list[int] = []
        while self.peek().kind != end_kind:
            tok = self.ident("gen/eq")
            if tok.text == "gen":
                gname = self.ident("generator name")
                self.expect("COLON")
                st = self.ident("sort")
                self.expect("SEMI")
                s = base.sort_by_name.get(st.text)
                if s is None:
                    raise ResolveError(f"unknown sort {st.text!r}", st.span)
                gens.append(GenSym(gname.text, s))
            elif tok.text == "eq":
                eq_positions.append(self.pos)
                while self.peek().kind != "SEMI":
                    if self.next().kind == "EOF":
                        raise ParseError("unterminated equation", tok.span)
                self.expect("SEMI")
            else:
                raise ParseError(f"expected gen/eq, found {tok.text!r}", tok.span)
        tmp = InstancePresentation(inst_name, base, tuple(gens), ())
        eqs: list[TermEquation] = []
        end_pos = self.pos
        for eq_pos in eq_positions:
            self.pos = eq_pos
            lhs = self._term(tmp)
            self.expect("EQ")
            rhs = self._term(tmp)
            eqs.append(TermEquation(lhs, rhs))
        self.pos = end_pos
        return InstancePresentation(inst_name, base, tuple(gens), tuple(eqs))

    def _instance(self, kw: Token):
        name = self.ident("instance name")
        self.expect_word("on")
        base = self.lookup(self.ident("category name"), (CatPresentation,), "a category")
        self.expect("LBRACE")
        inst = self._instance_body(base, name.text)
        self.expect("RBRACE")
        self._check(validate_instance_structure(inst), name.span)
        self._register(name, inst)

    def _uncurried(self, kw: Token):
        name = self.ident("presentation name")
        self.expect("COLON")
        left = self.lookup(self.ident("category name"), (CatPresentation,), "a category")
        self.expect("ARROW")
        right = self.lookup(self.ident("category name"), (CatPresentation,), "a category")
        self.expect("LBRACE")
        pros: list[ProSym] = []
        eq_positions: list[int] = []
        while self.peek().kind != "RBRACE":
            tok = self.ident("pro/eq")
            if tok.text == "pro":
                pname = self.ident("symbol name")
                self.expect("COLON")
                src = self.ident("sort")
                self.expect("ARROW")
                tgt = self.ident("sort")
                self.expect("SEMI")
                s = left.sort_by_name.get(src.text)
                t = right.sort_by_name.get(tgt.text)
                if s is None:
                    raise ResolveError(f"unknown left sort {src.text!r}", src.span)
                if t is None:
                    raise ResolveError(f"unknown right sort {tgt.text!r}", tgt.span)
                pros.append(ProSym(pname.text, s, t))
            elif tok.text == "eq":
                eq_positions.append(self.pos)
                while self.peek().kind != "SEMI":
                    if self.next().kind == "EOF":
                        raise ParseError("unterminated equation", tok.span)
                self.expect("SEMI")
            else:
                raise ParseError(f"expected pro/eq, found {tok.text!r}", tok.span)
        self.expect("RBRACE")
        tmp = UncurriedPresentation(name.text, left, right, tuple(pros), ())
        eqs: list[CrossEquation] = []
        end_pos = self.pos
        for eq_pos in eq_positions:
            self.pos = eq_pos
            lhs = self._cross_path(tmp)
            self.expect("EQ")
            rhs = self._cross_path(tmp)
            eqs.append(CrossEquation(lhs, rhs))
        self.pos = end_pos
        unc = UncurriedPresentation(name.text, left, right, tuple(pros), tuple(eqs))
        self._check(validate_uncurried_structure(unc), name.span)
        self._register(name, unc)

    def _curried(self, kw: Token):
        name = self.ident("presentation name")
        self.expect("COLON")
        left = self.lookup(self.ident("category name"), (CatPresentation,), "a category")
        self.expect("ARROW")
        right = self.lookup(self.ident("category name"), (CatPresentation,), "a category")
        self.expect("LBRACE")
        at: dict[Sort, InstancePresentation] = {}
        acts: list[tuple[Token, int]] = []
        while self.peek().kind != "RBRACE":
            tok = self.ident("at/act")
            if tok.text == "at":
                st = self.ident("sort")
                c = left.sort_by_name.get(st.text)
                if c is None:
                    raise ResolveError(f"unknown sort {st.text!r}", st.span)
                if c in at:
                    raise ResolveError(f"duplicate at-block for {st.text!r}", st.span)
                self.expect("LBRACE")
                at[c] = self._instance_body(right, f"{name.text}@{c.name}")
                self.expect("RBRACE")
            elif tok.text == "act":
                ft = self.ident("symbol name")
                f = left.fun_by_name.get(ft.text)
                if f is None:
                    raise ResolveError(f"unknown symbol {ft.text!r}", ft.span)
                self.expect("LBRACE")
                acts.append((ft, self.pos))
                depth = 1
                while depth:
                    t = self.next()
                    if t.kind == "LBRACE":
                        depth += 1
                    elif t.kind == "RBRACE":
                        depth -= 1
                    elif t.kind == "EOF":
                        raise ParseError("unterminated act block", ft.span)
            else:
                raise ParseError(f"expected at/act, found {tok.text!r}", tok.span)
        self.expect("RBRACE")
        end_pos = self.pos
        for c in left.sorts:
            if c not in at:
                raise ResolveError(f"no at-block for sort {c.name}", name.span)
        act_map: dict[FunSym, InstanceMorphism] = {}
        for ft, pos in acts:
            f = left.fun_by_name[ft.text]
            src_inst, tgt_inst = at[f.target], at[f.source]
            self.pos = pos
            gen_map: dict[GenSym, Term] = {}
            while self.peek().kind != "RBRACE":
                gt = self.ident("generator name")
                g = src_inst.gen_by_name.get(gt.text)
                if g is None:
                    raise ResolveError(
                        f"unknown generator {gt.text!r} at {f.target}", gt.span
                    )
                self.expect("ARROW")
                gen_map[g] = self._term(tgt_inst)
                self.expect("SEMI")
            for g in src_inst.gens:
                if g not in gen_map:
                    raise ResolveError(
                        f"act {ft.text}: no image for generator {g.name}", ft.span
                    )
            act_map[f] = InstanceMorphism.make(
                f"{name.text}({f.name})", src_inst, tgt_inst, gen_map
            )
        self.pos = end_pos
        for f in left.funs:
            if f not in act_map:
                raise ResolveError(f"no act-block for symbol {f.name}", name.span)
        cur = CurriedPresentation.make(name.text, left, right, at, act_map)
        self._check(validate_curried_structure(cur), name.span)
        self._register(name, cur)

    def _morphism(self, kw: Token):
        name = self.ident("morphism name")
        self.expect("COLON")
        src_tok = self.ident("source entity")
        self.expect("ARROW")
        tgt_tok = self.ident("target entity")
        src = self.lookup(src_tok, (CatPresentation, InstancePresentation, UncurriedPresentation, CurriedPresentation), "a presentation")
        tgt = self.lookup(tgt_tok, (CatPresentation, InstancePresentation, UncurriedPresentation, CurriedPresentation), "a presentation")
        if type(src) is not type(tgt):
            raise ResolveError(
                f"morphism endpoints have different kinds "
                f"({type(src).__name__} vs {type(tgt).__name__})",
                name.span,
            )
        self.expect("LBRACE")
        if isinstance(src, CatPresentation):
            mor = self._cat_morphism_body(name, src, tgt)
        elif isinstance(src, InstancePresentation):
            mor = self._instance_morphism_body(name, src, tgt)
        elif isinstance(src, UncurriedPresentation):
            mor = self._uncurried_morphism_body(name, src, tgt)
        else:
            mor = self._curried_morphism_body(name, src, tgt)
        self.expect("RBRACE")
        self._register(name, mor)

    def _cat_morphism_body(self, name: Token, src: CatPresentation, tgt: CatPresentation) -> CatMorphism:
        sort_map: dict[Sort, Sort] = {}
        fun_entries: list[tuple[Token, int]] = []
        while self.peek().kind != "RBRACE":
            tok = self.ident("entry")
            if tok.text == "sort":
                a = self.ident("sort")
                self.expect("ARROW")
                b = self.ident("sort")
                self.expect("SEMI")
                sa = src.sort_by_name.get(a.text)
                sb = tgt.sort_by_name.get(b.text)
                if sa is None:
                    raise ResolveError(f"unknown sort {a.text!r}", a.span)
                if sb is None:
                    raise ResolveError(f"unknown sort {b.text!r}", b.span)
                sort_map[sa] = sb
            else:
                self.expect("ARROW")
                fun_entries.append((tok, self.pos))
                while self.peek().kind != "SEMI":
                    if self.next().kind == "EOF":
                        raise ParseError("unterminated entry", tok.span)
                self.expect("SEMI")
        for s in src.sorts:
            if s not in sort_map:
                same = tgt.sort_by_name.get(s.name)
                if same is None:
                    raise ResolveError(
                        f"no image for sort {s.name} (add a `sort` entry)", name.span
                    )
                sort_map[s] = same
        end_pos = self.pos
        fun_map: dict[FunSym, Path] = {}
        for tok, pos in fun_entries:
            f = src.fun_by_name.get(tok.text)
            if f is None:
                raise ResolveError(f"unknown symbol {tok.text!r}", tok.span)
            self.pos = pos
            img = self._cat_path(tgt, start=sort_map[f.source])
            if img.is_identity and img.start != sort_map[f.source]:
                raise ResolveError(f"image of {tok.text} starts at the wrong sort", tok.span)
            fun_map[f] = img
        self.pos = end_pos
        for f in src.funs:
            if f not in fun_map:
                raise ResolveError(f"no image for symbol {f.name}", name.span)
        return CatMorphism.make(name.text, src, tgt, sort_map, fun_map)

    def _flat_entries(self) -> list[tuple[Token, int]]:
        entries: list[tuple[Token, int]] = []
        while self.peek().kind != "RBRACE":
            tok = self.ident("entry")
            self.expect("ARROW")
            entries.append((tok, self.pos))
            while self.peek().kind != "SEMI":
                if self.next().kind == "EOF":
                    raise ParseError("unterminated entry", tok.span)
            self.expect("SEMI")
        return entries

    def _instance_morphism_body(
        self, name: Token, src: InstancePresentation, tgt: InstancePresentation
    ) -> InstanceMorphism:
        if src.base != tgt.base:
            raise ResolveError("instance morphisms require a shared base", name.span)
        entries = self._flat_entries()
        end_pos = self.pos
        gen_map: dict[GenSym, Term] = {}
        for tok, pos in entries:
            g = src.gen_by_name.get(tok.text)
            if g is None:
                raise ResolveError(f"unknown generator {tok.text!r}", tok.span)
            self.pos = pos
            gen_map[g] = self._term(tgt)
        self.pos = end_pos
        for g in src.gens:
            if g not in gen_map:
                raise ResolveError(f"no image for generator {g.name}", name.span)
        return InstanceMorphism.make(name.text, src, tgt, gen_map)

    def _uncurried_morphism_body(
        self, name: Token, src: UncurriedPresentation, tgt: UncurriedPresentation
    ) -> UncurriedMorphism:
        if src.left != tgt.left or src.right != tgt.right:
            raise ResolveError("uncurried morphisms must be globular", name.span)
        entries = self._flat_entries()
        end_pos = self.pos
        pro_map: dict[ProSym, CrossPath] = {}
        for tok, pos in entries:
            p = src.pro_by_name.get(tok.text)
            if p is None:
                raise ResolveError(f"unknown profunctor symbol {tok.text!r}", tok.span)
            self.pos = pos
            pro_map[p] = self._cross_path(tgt)
        self.pos = end_pos
        for p in src.pros:
            if p not in pro_map:
                raise ResolveError(f"no image for symbol {p.name}", name.span)
        return UncurriedMorphism.make(name.text, src, tgt, pro_map)

    def _curried_morphism_body(
        self, name: Token, src: CurriedPresentation, tgt: CurriedPresentation
    ) -> CurriedMorphism:
        if src.left != tgt.left or src.right != tgt.right:
            raise ResolveError("curried morphisms in the DSL must be globular", name.span)
        gen_home: dict[str, Sort] = {}
        for c in src.left.sorts:
            for g in src.at(c).gens:
                if g.name in gen_home:
                    raise ResolveError(
                        f"generator name {g.name!r} is not unique across sorts; "
                        "this morphism cannot be written flat",
                        name.span,
                    )
                gen_home[g.name] = c
        entries = self._flat_entries()
        end_pos = self.pos
        comp_maps: dict[Sort, dict[GenSym, Term]] = {c: {} for c in src.left.sorts}
        for tok, pos in entries:
            c = gen_home.get(tok.text)
            if c is None:
                raise ResolveError(f"unknown generator {tok.text!r}", tok.span)
            g = src.at(c).gen_by_name[tok.text]
            self.pos = pos
            comp_maps[c][g] = self._term(tgt.at(c))
        self.pos = end_pos
        comps = {}
        for c in src.left.sorts:
            for g in src.at(c).gens:
                if g not in comp_maps[c]:
                    raise ResolveError(f"no image for generator {g.name}", name.span)
            comps[c] = InstanceMorphism.make(
                f"{name.text}@{c.name}", src.at(c), tgt.at(c), comp_maps[c]
            )
        return CurriedMorphism.make(name.text, src, tgt, comps)


def parse_workspace(text: str, filename: str = "<input>") -> Workspace:
    """Parse a .prof source into a fully resolved, structurally valid
    workspace.  Semantic (prover-backed) validation is a separate step."""
    return _Parser(text, filename).parse_workspace()


def parse_path_for(entity: Entity, text: str, filename: str = "<path>"):
    """Parse one path/term/cross-path against an entity (see
    parse_equation_for)."""
    p = _Parser(text, filename)
    if isinstance(entity, CatPresentation):
        out = p._cat_path(entity)
    elif isinstance(entity, UncurriedPresentation):
        out = p._cross_path(entity)
    elif isinstance(entity, InstancePresentation):
        out = p._term(entity)
    else:
        raise ParseError(f"cannot parse paths over a {type(entity).__name__}", p.peek().span)
    p.expect("EOF", "end of path")
    return out


def parse_equation_for(entity: Entity, text: str, filename: str = "<eq>"):
    """Parse `lhs = rhs` against an entity: paths for a category, cross-paths
    for an uncurried presentation, terms for an instance."""
    p = _Parser(text, filename)
    if isinstance(entity, CatPresentation):
        lhs = p._cat_path(entity)
        p.expect("EQ")
        rhs = p._cat_path(entity, start=lhs.start)
    elif isinstance(entity, UncurriedPresentation):
        lhs = p._cross_path(entity)
        p.expect("EQ")
        rhs = p._cross_path(entity)
    elif isinstance(entity, InstancePresentation):
        lhs = p._term(entity)
        p.expect("EQ")
        rhs = p._term(entity)
    else:
        raise ParseError(
            f"cannot state equations over a {type(entity).__name__}",
            p.peek().span,
        )
    p.expect("EOF", "end of equation")
    return lhs, rhs


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def _render_path(p: Path) -> str:
    return str(p)


def render(entity: Entity) -> str:
    """Canonical text of an entity; parse(render(e)) is structurally e."""
    if isinstance(entity, CatPresentation):
        lines = [f"category {entity.name} {{"]
        lines.append("  sorts " + ", ".join(s.name for s in entity.sorts) + ";")
        for f in entity.funs:
            lines.append(f"  fun {f.name} : {f.source.name} -> {f.target.name};")
        for eq in entity.eqs:
            lines.append(f"  eq {eq.lhs} = {eq.rhs};")
        if entity.order:
            lines.append("  order " + ", ".join(entity.order) + ";")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, InstancePresentation):
        lines = [f"instance {entity.name} on {entity.base.name} {{"]
        lines.extend(_instance_body_lines(entity, indent="  "))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, UncurriedPresentation):
        lines = [
            f"uncurried {entity.name} : {entity.left.name} -> {entity.right.name} {{"
        ]
        for p in entity.pros:
            lines.append(f"  pro {p.name} : {p.source.name} -> {p.target.name};")
        for eq in entity.eqs:
            lines.append(f"  eq {eq.lhs} = {eq.rhs};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, CurriedPresentation):
        lines = [
            f"curried {entity.name} : {entity.left.name} -> {entity.right.name} {{"
        ]
        for c, inst in entity.at_pairs:
            lines.append(f"  at {c.name} {{")
            lines.extend(_instance_body_lines(inst, indent="    "))
            lines.append("  }")
        for f, m in entity.act_pairs:
            images = " ".join(f"{g.name} -> {t};" for g, t in m.gen_pairs)
            lines.append(f"  act {f.name} {{ {images} }}".replace("{  }", "{ }"))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, CatMorphism):
        lines = [
            f"morphism {entity.name} : {entity.source.name} -> {entity.target.name} {{"
        ]
        for s, img in entity.sort_pairs:
            if s.name != img.name:
                lines.append(f"  sort {s.name} -> {img.name};")
        for f, img in entity.fun_pairs:
            lines.append(f"  {f.name} -> {img};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, InstanceMorphism):
        if not entity.is_globular:
            raise ValueError("only globular instance morphisms have DSL text")
        lines = [
            f"morphism {entity.name} : {entity.source.name} -> {entity.target.name} {{"
        ]
        for g, t in entity.gen_pairs:
            lines.append(f"  {g.name} -> {t};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, UncurriedMorphism):
        lines = [
            f"morphism {entity.name} : {entity.source.name} -> {entity.target.name} {{"
        ]
        for p, cp in entity.pro_pairs:
            lines.append(f"  {p.name} -> {cp};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(entity, CurriedMorphism):
        if not entity.is_globular:
            raise ValueError("only globular curried morphisms have DSL text")
        lines = [
            f"morphism {entity.name} : {entity.source.name} -> {entity.target.name} {{"
        ]
        for c, m in entity.comp_pairs:
            for g, t in m.gen_pairs:
                lines.append(f"  {g.name} -> {t};")
        lines.append("}")
        return "\n".join(lines)
    raise ValueError(f"cannot render {type(entity).__name__}")


def _instance_body_lines(inst: InstancePresentation, indent: str) -> list[str]:
    lines = []
    for g in inst.gens:
        lines.append(f"{indent}gen {g.name} : {g.sort.name};")
    for eq in inst.eqs:
        lines.append(f"{indent}eq {eq.lhs} = {eq.rhs};")
    return lines


def render_workspace(ws: Workspace) -> str:
    return "\n\n".join(render(e) for e in ws.entities.values()) + "\n"


# --------------------------------------------------------------------------
# JSON export
# --------------------------------------------------------------------------


def _json_path(p: Path) -> dict:
    return {"start": p.start.name, "syms": list(p.names())}


def _json_term(t: Term) -> dict:
    return {"gen": t.gen.name, "path": list(t.tail.names())}


def _json_cross(cp: CrossPath) -> dict:
    return {
        "left": list(cp.left.names()),
        "pro": cp.pro.name,
        "right": list(cp.right.names()),
        "start": cp.start.name,
    }


def entity_json(entity: Entity) -> dict:
    """JSON document for an entity, with a `kind` discriminator."""
    if isinstance(entity, CatPresentation):
        doc = {
            "kind": "category",
            "name": entity.name,
            "sorts": [s.name for s in entity.sorts],
            "funs": [
                {"name": f.name, "src": f.source.name, "tgt": f.target.name}
                for f in entity.funs
            ],
            "eqs": [
                {"lhs": _json_path(eq.lhs), "rhs": _json_path(eq.rhs)}
                for eq in entity.eqs
            ],
        }
        if entity.order:
            doc["order"] = list(entity.order)
        return doc
    if isinstance(entity, InstancePresentation):
        return {
            "kind": "instance",
            "name": entity.name,
            "base": entity.base.name,
            "gens": [{"name": g.name, "sort": g.sort.name} for g in entity.gens],
            "eqs": [
                {"lhs": _json_term(eq.lhs), "rhs": _json_term(eq.rhs)}
                for eq in entity.eqs
            ],
        }
    if isinstance(entity, UncurriedPresentation):
        return {
            "kind": "uncurried",
            "name": entity.name,
            "left": entity.left.name,
            "right": entity.right.name,
            "pros": [
                {"name": p.name, "src": p.source.name, "tgt": p.target.name}
                for p in entity.pros
            ],
            "eqs": [
                {"lhs": _json_cross(eq.lhs), "rhs": _json_cross(eq.rhs)}
                for eq in entity.eqs
            ],
        }
    if isinstance(entity, CurriedPresentation):
        return {
            "kind": "curried",
            "name": entity.name,
            "left": entity.left.name,
            "right": entity.right.name,
            "at": [
                {
                    "sort": c.name,
                    "gens": [{"name": g.name, "sort": g.sort.name} for g in inst.gens],
                    "eqs": [
                        {"lhs": _json_term(eq.lhs), "rhs": _json_term(eq.rhs)}
                        for eq in inst.eqs
                    ],
                }
                for c, inst in entity.at_pairs
            ],
            "act": [
                {
                    "sym": f.name,
                    "images": [
                        {"gen": g.name, "term": _json_term(t)} for g, t in m.gen_pairs
                    ],
                }
                for f, m in entity.act_pairs
            ],
        }
    if isinstance(entity, CatMorphism):
        return {
            "kind": "morphism",
            "morphism_kind": "category",
            "name": entity.name,
            "source": entity.source.name,
            "target": entity.target.name,
            "sort_map": [
                {"from": a.name, "to": b.name} for a, b in entity.sort_pairs
            ],
            "images": [
                {"sym": f.name, "path": _json_path(p)} for f, p in entity.fun_pairs
            ],
        }
    if isinstance(entity, InstanceMorphism):
        return {
            "kind": "morphism",
            "morphism_kind": "instance",
            "name": entity.name,
            "source": entity.source.name,
            "target": entity.target.name,
            "images": [
                {"gen": g.name, "term": _json_term(t)} for g, t in entity.gen_pairs
            ],
        }
    if isinstance(entity, UncurriedMorphism):
        return {
            "kind": "morphism",
            "morphism_kind": "uncurried",
            "name": entity.name,
            "source": entity.source.name,
            "target": entity.target.name,
            "images": [
                {"sym": p.name, "cross": _json_cross(cp)} for p, cp in entity.pro_pairs
            ],
        }
    if isinstance(entity, CurriedMorphism):
        return {
            "kind": "morphism",
            "morphism_kind": "curried",
            "name": entity.name,
            "source": entity.source.name,
            "target": entity.target.name,
            "components": [
                {
                    "sort": c.name,
                    "images": [
                        {"gen": g.name, "term": _json_term(t)} for g, t in m.gen_pairs
                    ],
                }
                for c, m in entity.comp_pairs
            ],
        }
    raise ValueError(f"cannot export {type(entity).__name__}")


def export_json(entity: Entity) -> bytes:
    """Deterministic JSON bytes for an entity."""
    return (json.dumps(entity_json(entity), indent=2) + "\n").encode("utf-8")
