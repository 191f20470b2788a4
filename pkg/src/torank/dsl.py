"""Text format for models, morphisms and witnesses (.sm files).

Grammar (comments start with '#', semicolons are optional statement
terminators, whitespace is free):

    document   := block*
    block      := model | morphism | witness | mapwitness
    model      := "model" NAME "{" (gen | diff)* "}"
    gen        := "gen" NAME ":" INT
    diff       := "d" NAME "=" expr
    morphism   := "map" NAME ":" NAME "->" NAME "{" (NAME "->" expr ";"?)* "}"
    witness    := "witness" NAME "for" NAME "rank" INT "{" diff* "}"
    mapwitness := "mapwitness" NAME "for" NAME "{"
                      "source" NAME ";"?  "target" NAME ";"?
                      (NAME "->" expr ";"?)* "}"
    expr       := "-"? term (("+" | "-") term)*
    term       := RATIONAL ("*" factor ("*" factor)*)? | factor ("*" factor)*
    factor     := NAME ("^" INT)?
    RATIONAL   := INT ("/" INT)?

Inside a witness block of rank r the Borel generators t1..tr (degree 2) are
implicitly declared; those names are reserved and may not be declared by
models.  When r = 1 and the base model has no generator called "t", the name
"t" is accepted as an alias for t1.  Witness diff lines give the full Borel
image D(v); the perturbation is D(v) minus the base differential.  Morphism
blocks map unlisted generators to zero; mapwitness image lines override the
default F(v) = (embedded model-morphism image of v).

Differentials in model blocks must parse to homogeneous elements (a
positioned ParseError otherwise); witness images are deliberately left to the
Borel validator, so that degree-invalid witness candidates can be represented
and diagnosed rather than refused at parse time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .graded import (
    Element,
    Generator,
    GeneratorSet,
    NOT_HOMOGENEOUS,
)
from .model import Morphism, SullivanModel, borel_generator_set, embed_in_borel, make_borel_total
from .witness import MapRankWitness, RankWitness

KEYWORDS = {"model", "gen", "d", "map", "witness", "mapwitness", "for", "rank", "source", "target"}
_RESERVED_T = re.compile(r"^t[1-9][0-9]*$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"[0-9]+")


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(message)
        self.line = line
        self.col = col
        self.message = message

    def __str__(self):
        return f"line {self.line}, column {self.col}: {self.message}"


class Token(NamedTuple):
    kind: str  # NAME | INT | SYM | EOF
    text: str
    line: int
    col: int


_SYMBOLS = ("->", "{", "}", ":", "=", "^", "*", "+", "-", ";", "/")


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "−":  # unicode minus
            tokens.append(Token("SYM", "-", line, col))
            i += 1
            col += 1
            continue
        m = _NAME.match(text, i)
        if m:
            tokens.append(Token("NAME", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        m = _INT.match(text, i)
        if m:
            tokens.append(Token("INT", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("SYM", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(line, col, f"unexpected character {ch!r}")
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Factor(NamedTuple):
    name: str
    exp: int
    line: int
    col: int


class _Term(NamedTuple):
    coeff: Fraction
    factors: tuple[_Factor, ...]
    line: int
    col: int


@dataclass
class ModelDocument:
    models: dict[str, SullivanModel] = field(default_factory=dict)
    morphisms: dict[str, Morphism] = field(default_factory=dict)
    witnesses: dict[str, RankWitness] = field(default_factory=dict)
    map_witnesses: dict[str, MapRankWitness] = field(default_factory=dict)
    block_order: list[tuple[str, str]] = field(default_factory=list)
    witness_models: dict[str, str] = field(default_factory=dict)  # witness name -> model name
    morphism_ends: dict[str, tuple[str, str]] = field(default_factory=dict)
    map_witness_parts: dict[str, tuple[str, str, str]] = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.doc = ModelDocument()

    # ---- token plumbing --------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, tok: Token, message: str) -> ParseError:
        return ParseError(tok.line, tok.col, message)

    def expect_sym(self, sym: str) -> Token:
        tok = self.next()
        if tok.kind != "SYM" or tok.text != sym:
            raise self.error(tok, f"expected {sym!r}, found {tok.text!r}")
        return tok

    def expect_name(self, what: str = "name") -> Token:
        tok = self.next()
        if tok.kind != "NAME":
            raise self.error(tok, f"expected {what}, found {tok.text!r}")
        return tok

    def expect_int(self) -> int:
        tok = self.next()
        if tok.kind != "INT":
            raise self.error(tok, f"expected an integer, found {tok.text!r}")
        return int(tok.text)

    def at_sym(self, sym: str) -> bool:
        tok = self.peek()
        return tok.kind == "SYM" and tok.text == sym

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "NAME" and tok.text == word

    def skip_semicolons(self):
        while self.at_sym(";"):
            self.next()

    # ---- expressions -----------------------------------------------------

    def parse_rational(self) -> Fraction:
        tok = self.next()
        num = int(tok.text)
        if self.at_sym("/"):
            self.next()
            den = self.expect_int()
            if den == 0:
                raise self.error(tok, "zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def parse_factor(self) -> _Factor:
        tok = self.expect_name("generator name")
        exp = 1
        if self.at_sym("^"):
            self.next()
            exp = self.expect_int()
            if exp < 1:
                raise self.error(tok, "exponent must be positive")
        return _Factor(tok.text, exp, tok.line, tok.col)

    def parse_term(self, sign: int) -> _Term:
        tok = self.peek()
        coeff = Fraction(sign)
        factors: list[_Factor] = []
        if tok.kind == "INT":
            coeff *= self.parse_rational()
            if self.at_sym("*"):
                self.next()
                factors.append(self.parse_factor())
        elif tok.kind == "NAME":
            factors.append(self.parse_factor())
        else:
            raise self.error(tok, f"expected a term, found {tok.text!r}")
        while self.at_sym("*"):
            self.next()
            factors.append(self.parse_factor())
        return _Term(coeff, tuple(factors), tok.line, tok.col)

    def parse_expr(self) -> list[_Term]:
        terms = []
        sign = 1
        if self.at_sym("-"):
            self.next()
            sign = -1
        terms.append(self.parse_term(sign))
        while self.at_sym("+") or self.at_sym("-"):
            op = self.next()
            terms.append(self.parse_term(1 if op.text == "+" else -1))
        return terms

    def resolve_expr(self, terms: list[_Term], gens: GeneratorSet, alias: dict[str, str]) -> Element:
        total = Element.zero(gens)
        for term in terms:
            acc = Element.unit(gens, term.coeff)
            for f in term.factors:
                name = alias.get(f.name, f.name)
                try:
                    idx = gens.index(name)
                except KeyError:
                    raise self.error(Token("NAME", f.name, f.line, f.col), f"unknown generator {f.name!r}")
                g = Element.generator(gens, idx)
                for _ in range(f.exp):
                    acc = acc * g
            total = total + acc
        return total

    # ---- blocks ------------------------------------------------------------

    def check_fresh(self, table: dict, tok: Token, what: str):
        if tok.text in table:
            raise self.error(tok, f"duplicate {what} {tok.text!r}")

    def parse_model(self):
        name_tok = self.expect_name("model name")
        self.check_fresh(self.doc.models, name_tok, "model")
        self.expect_sym("{")
        gens: list[Generator] = []
        names: set[str] = set()
        diffs: list[tuple[Token, list[_Term]]] = []
        while not self.at_sym("}"):
            self.skip_semicolons()
            if self.at_sym("}"):
                break
            tok = self.peek()
            if self.at_keyword("gen"):
                self.next()
                gtok = self.expect_name("generator name")
                if gtok.text in KEYWORDS:
                    raise self.error(gtok, f"{gtok.text!r} is a keyword and cannot name a generator")
                if _RESERVED_T.match(gtok.text):
                    raise self.error(gtok, f"{gtok.text!r} is reserved for Borel generators")
                if gtok.text in names:
                    raise self.error(gtok, f"duplicate generator {gtok.text!r}")
                self.expect_sym(":")
                deg_tok = self.peek()
                deg = self.expect_int()
                if deg < 2:
                    raise self.error(deg_tok, f"generator degree must be at least 2, got {deg}")
                names.add(gtok.text)
                gens.append(Generator(gtok.text, deg))
            elif self.at_keyword("d"):
                self.next()
                gtok = self.expect_name("generator name")
                self.expect_sym("=")
                diffs.append((gtok, self.parse_expr()))
            else:
                raise self.error(tok, f"expected 'gen', 'd' or '}}', found {tok.text!r}")
        self.expect_sym("}")
        gen_set = GeneratorSet(gens)
        images: dict[str, Element] = {}
        for gtok, ast in diffs:
            if gtok.text not in names:
                raise self.error(gtok, f"unknown generator {gtok.text!r}")
            if gtok.text in images:
                raise self.error(gtok, f"duplicate differential for {gtok.text!r}")
            elem = self.resolve_expr(ast, gen_set, {})
            if elem.degree() is NOT_HOMOGENEOUS:
                raise self.error(gtok, f"non-homogeneous image for d {gtok.text}: {elem}")
            images[gtok.text] = elem
        model = SullivanModel(gen_set, images)
        self.doc.models[name_tok.text] = model
        self.doc.block_order.append(("model", name_tok.text))

    def lookup_model(self, tok: Token) -> SullivanModel:
        try:
            return self.doc.models[tok.text]
        except KeyError:
            raise self.error(tok, f"unknown model {tok.text!r}")

    def parse_morphism(self):
        name_tok = self.expect_name("map name")
        self.check_fresh(self.doc.morphisms, name_tok, "map")
        self.expect_sym(":")
        src_tok = self.expect_name("source model")
        self.expect_sym("->")
        tgt_tok = self.expect_name("target model")
        source = self.lookup_model(src_tok)
        target = self.lookup_model(tgt_tok)
        self.expect_sym("{")
        images: dict[str, Element] = {}
        while not self.at_sym("}"):
            self.skip_semicolons()
            if self.at_sym("}"):
                break
            gtok = self.expect_name("generator name")
            try:
                source.gens.index(gtok.text)
            except KeyError:
                raise self.error(gtok, f"unknown generator {gtok.text!r} in source model")
            if gtok.text in images:
                raise self.error(gtok, f"duplicate image for {gtok.text!r}")
            self.expect_sym("->")
            images[gtok.text] = self.resolve_expr(self.parse_expr(), target.gens, {})
            self.skip_semicolons()
        self.expect_sym("}")
        try:
            phi = Morphism(source, target, images)
        except ValueError as exc:
            raise self.error(name_tok, str(exc))
        self.doc.morphisms[name_tok.text] = phi
        self.doc.morphism_ends[name_tok.text] = (src_tok.text, tgt_tok.text)
        self.doc.block_order.append(("map", name_tok.text))

    @staticmethod
    def borel_alias(base: SullivanModel, r: int) -> dict[str, str]:
        if r == 1 and "t" not in base.gens.names():
            return {"t": "t1"}
        return {}

    def parse_witness(self):
        name_tok = self.expect_name("witness name")
        self.check_fresh(self.doc.witnesses, name_tok, "witness")
        if not self.at_keyword("for"):
            raise self.error(self.peek(), "expected 'for'")
        self.next()
        model_tok = self.expect_name("model name")
        base = self.lookup_model(model_tok)
        if not self.at_keyword("rank"):
            raise self.error(self.peek(), "expected 'rank'")
        self.next()
        rank_tok = self.peek()
        r = self.expect_int()
        bgens = borel_generator_set(base.gens, r)
        alias = self.borel_alias(base, r)
        self.expect_sym("{")
        images: dict[str, Element] = {}
        while not self.at_sym("}"):
            self.skip_semicolons()
            if self.at_sym("}"):
                break
            if not self.at_keyword("d"):
                raise self.error(self.peek(), f"expected 'd' or '}}', found {self.peek().text!r}")
            self.next()
            gtok = self.expect_name("generator name")
            try:
                idx = base.gens.index(gtok.text)
            except KeyError:
                raise self.error(gtok, f"unknown generator {gtok.text!r}")
            if gtok.text in images:
                raise self.error(gtok, f"duplicate differential for {gtok.text!r}")
            images[gtok.text] = self.resolve_expr(self.parse_expr(), bgens, alias)
        self.expect_sym("}")
        perts: dict[int, Element] = {}
        for gname, img in images.items():
            i = base.gens.index(gname)
            pert = img - embed_in_borel(base.images[i], bgens, r)
            if not pert.is_zero():
                perts[i] = pert
        self.doc.witnesses[name_tok.text] = RankWitness(base, r, perts)
        self.doc.witness_models[name_tok.text] = model_tok.text
        self.doc.block_order.append(("witness", name_tok.text))

    def parse_map_witness(self):
        name_tok = self.expect_name("mapwitness name")
        self.check_fresh(self.doc.map_witnesses, name_tok, "mapwitness")
        if not self.at_keyword("for"):
            raise self.error(self.peek(), "expected 'for'")
        self.next()
        map_tok = self.expect_name("map name")
        if map_tok.text not in self.doc.morphisms:
            raise self.error(map_tok, f"unknown map {map_tok.text!r}")
        f_model = self.doc.morphisms[map_tok.text]
        self.expect_sym("{")
        src_name = tgt_name = None
        entries: list[tuple[Token, list[_Term]]] = []
        while not self.at_sym("}"):
            self.skip_semicolons()
            if self.at_sym("}"):
                break
            if self.at_keyword("source"):
                self.next()
                src_name = self.expect_name("witness name")
                continue
            if self.at_keyword("target"):
                self.next()
                tgt_name = self.expect_name("witness name")
                continue
            gtok = self.expect_name("generator name")
            self.expect_sym("->")
            entries.append((gtok, self.parse_expr()))
            self.skip_semicolons()
        self.expect_sym("}")
        if src_name is None or tgt_name is None:
            raise self.error(name_tok, "mapwitness needs both a source and a target witness")
        for tok in (src_name, tgt_name):
            if tok.text not in self.doc.witnesses:
                raise self.error(tok, f"unknown witness {tok.text!r}")
        ws = self.doc.witnesses[src_name.text]
        wt = self.doc.witnesses[tgt_name.text]
        if ws.base != f_model.source:
            raise self.error(src_name, f"witness {src_name.text!r} is not for the map's source model")
        if wt.base != f_model.target:
            raise self.error(tgt_name, f"witness {tgt_name.text!r} is not for the map's target model")
        src_total = make_borel_total(ws.base, ws.r, ws.perturbations)
        tgt_total = make_borel_total(wt.base, wt.r, wt.perturbations)
        tgt_bgens = tgt_total.gens
        alias = self.borel_alias(wt.base, wt.r)
        images: dict[int, Element] = {}
        for i in range(min(ws.r, wt.r)):
            images[i] = Element.generator(tgt_bgens, i)
        for j in range(len(ws.base.gens)):
            images[j + ws.r] = embed_in_borel(f_model.images[j], tgt_bgens, wt.r)
        seen: set[str] = set()
        for gtok, ast in entries:
            try:
                j = ws.base.gens.index(gtok.text)
            except KeyError:
                raise self.error(gtok, f"unknown generator {gtok.text!r} in the source model")
            if gtok.text in seen:
                raise self.error(gtok, f"duplicate image for {gtok.text!r}")
            seen.add(gtok.text)
            images[j + ws.r] = self.resolve_expr(ast, tgt_bgens, alias)
        try:
            F = Morphism(src_total, tgt_total, images)
        except ValueError as exc:
            raise self.error(name_tok, str(exc))
        self.doc.map_witnesses[name_tok.text] = MapRankWitness(f_model, ws, wt, F)
        self.doc.map_witness_parts[name_tok.text] = (map_tok.text, src_name.text, tgt_name.text)
        self.doc.block_order.append(("mapwitness", name_tok.text))

    def parse_document(self) -> ModelDocument:
        while True:
            self.skip_semicolons()
            tok = self.peek()
            if tok.kind == "EOF":
                break
            if tok.kind != "NAME":
                raise self.error(tok, f"expected a block, found {tok.text!r}")
            if tok.text == "model":
                self.next()
                self.parse_model()
            elif tok.text == "map":
                self.next()
                self.parse_morphism()
            elif tok.text == "witness":
                self.next()
                self.parse_witness()
            elif tok.text == "mapwitness":
                self.next()
                self.parse_map_witness()
            else:
                raise self.error(tok, f"unknown block kind {tok.text!r}")
        return self.doc


def parse(text: str) -> ModelDocument:
    return _Parser(text).parse_document()


def parse_file(path) -> ModelDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# Canonical rendering (round-trips through parse on canonical-form documents)
# ---------------------------------------------------------------------------


def render_model(name: str, model: SullivanModel) -> str:
    lines = [f"model {name} {{"]
    for g in model.gens:
        lines.append(f"  gen {g.name} : {g.degree}")
    for i, g in enumerate(model.gens):
        if not model.images[i].is_zero():
            lines.append(f"  d {g.name} = {model.images[i]}")
    lines.append("}")
    return "\n".join(lines)


def render_witness(name: str, model_name: str, w: RankWitness) -> str:
    bgens = w.borel_gens()
    lines = [f"witness {name} for {model_name} rank {w.r} {{"]
    for i, g in enumerate(w.base.gens):
        pert = w.perturbations.get(i)
        if pert is not None and not pert.is_zero():
            total = embed_in_borel(w.base.images[i], bgens, w.r) + pert
            lines.append(f"  d {g.name} = {total}")
    lines.append("}")
    return "\n".join(lines)


def render_morphism(name: str, ends: tuple[str, str], phi: Morphism) -> str:
    lines = [f"map {name} : {ends[0]} -> {ends[1]} {{"]
    for i, g in enumerate(phi.source.gens):
        if not phi.images[i].is_zero():
            lines.append(f"  {g.name} -> {phi.images[i]} ;")
    lines.append("}")
    return "\n".join(lines)


def render_map_witness(name: str, parts: tuple[str, str, str], mw: MapRankWitness) -> str:
    map_name, src_name, tgt_name = parts
    lines = [f"mapwitness {name} for {map_name} {{"]
    lines.append(f"  source {src_name} ;")
    lines.append(f"  target {tgt_name} ;")
    r = mw.witness_source.r
    tgt_bgens = mw.F.target.gens
    for j, g in enumerate(mw.witness_source.base.gens):
        default = embed_in_borel(mw.f_model.images[j], tgt_bgens, mw.witness_target.r)
        if mw.F.images[j + r] != default:
            lines.append(f"  {g.name} -> {mw.F.images[j + r]} ;")
    lines.append("}")
    return "\n".join(lines)


def render_document(doc: ModelDocument) -> str:
    chunks = []
    for kind, name in doc.block_order:
        if kind == "model":
            chunks.append(render_model(name, doc.models[name]))
        elif kind == "map":
            chunks.append(render_morphism(name, doc.morphism_ends[name], doc.morphisms[name]))
        elif kind == "witness":
            chunks.append(render_witness(name, doc.witness_models[name], doc.witnesses[name]))
        else:
            chunks.append(render_map_witness(name, doc.map_witness_parts[name], doc.map_witnesses[name]))
    return "\n\n".join(chunks) + "\n"
