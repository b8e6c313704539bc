"""Surface pre-syntax and its recursive-descent parser.

The grammar is documented in docs/syntax.md.  The parser resolves nothing:
identifiers stay raw strings, and the elaborator decides whether a binder
annotation names a clock (tick abstraction) or a type, and whether a
bracketed argument is a tick or a clock.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .lexer import LexError, Span, Token, tokenize


class ParseError(Exception):
    def __init__(self, message: str, span: Span, expected: frozenset = frozenset()):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span
        self.expected = expected


# --- surface types ----------------------------------------------------------

@dataclass(frozen=True)
class STName:
    text: str
    span: Span


@dataclass(frozen=True)
class STNat:
    span: Span


@dataclass(frozen=True)
class STPi:
    var: Optional[str]
    dom: "SType"
    cod: "SType"
    span: Span


@dataclass(frozen=True)
class STSigma:
    var: Optional[str]
    dom: "SType"
    cod: "SType"
    span: Span


@dataclass(frozen=True)
class STId:
    ty: "SType"
    lhs: "STerm"
    rhs: "STerm"
    span: Span


@dataclass(frozen=True)
class STLater:
    tick: Optional[str]
    clock: str
    body: "SType"
    span: Span


@dataclass(frozen=True)
class STForall:
    clock: str
    body: "SType"
    span: Span


@dataclass(frozen=True)
class STUniv:
    clocks: tuple[str, ...]
    span: Span


@dataclass(frozen=True)
class STEl:
    clocks: tuple[str, ...]
    code: "STerm"
    span: Span


SType = Union[STName, STNat, STPi, STSigma, STId, STLater, STForall,
              STUniv, STEl]


# --- surface terms ----------------------------------------------------------

@dataclass(frozen=True)
class SName:
    text: str
    span: Span


@dataclass(frozen=True)
class SNum:
    value: int
    span: Span


@dataclass(frozen=True)
class SSuc:
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SNatRec:
    var: str
    motive: SType
    base: "STerm"
    pred: str
    ih: str
    step: "STerm"
    scrut: "STerm"
    span: Span


@dataclass(frozen=True)
class SBinder:
    names: tuple[str, ...]
    annot: Optional[SType]
    span: Span


@dataclass(frozen=True)
class SLam:
    binders: tuple[SBinder, ...]
    body: "STerm"
    span: Span


@dataclass(frozen=True)
class SClockLam:
    clocks: tuple[str, ...]
    body: "STerm"
    span: Span


@dataclass(frozen=True)
class SApp:
    fn: "STerm"
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SProj:
    which: str  # "fst" | "snd"
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SPair:
    fst: "STerm"
    snd: "STerm"
    span: Span


@dataclass(frozen=True)
class SAnnot:
    term: "STerm"
    ty: SType
    span: Span


@dataclass(frozen=True)
class SRefl:
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SJ:
    x: str
    y: str
    p: str
    motive: SType
    bx: str
    base: "STerm"
    eq: "STerm"
    span: Span


@dataclass(frozen=True)
class SBrack:
    fn: "STerm"
    arg: str     # tick or clock, resolved by the elaborator
    span: Span


@dataclass(frozen=True)
class SDiamondApp:
    fn: "STerm"
    span: Span


@dataclass(frozen=True)
class SDiamondExplicit:
    binder: str
    fn: "STerm"
    target: str
    span: Span


@dataclass(frozen=True)
class SFix:
    clock: str
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SDfix:
    clock: str
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SAxiom:
    which: str  # "cirr" | "tirr" | "pfix"
    arg: "STerm"
    span: Span


@dataclass(frozen=True)
class SCodeNat:
    span: Span


@dataclass(frozen=True)
class SCodePi:
    var: Optional[str]
    dom: "STerm"
    cod: "STerm"
    span: Span


@dataclass(frozen=True)
class SCodeSigma:
    var: Optional[str]
    dom: "STerm"
    cod: "STerm"
    span: Span


@dataclass(frozen=True)
class SCodeForall:
    clock: str
    body: "STerm"
    span: Span


@dataclass(frozen=True)
class SCodeLater:
    tick: str
    clock: str
    body: "STerm"
    span: Span


@dataclass(frozen=True)
class SIncl:
    small: tuple[str, ...]
    big: tuple[str, ...]
    code: "STerm"
    span: Span


STerm = Union[SName, SNum, SSuc, SNatRec, SLam, SClockLam, SApp, SProj,
              SPair, SAnnot, SRefl, SJ, SBrack, SDiamondApp,
              SDiamondExplicit, SFix, SDfix, SAxiom, SCodeNat, SCodePi,
              SCodeSigma, SCodeForall, SCodeLater, SIncl]


# --- declarations -----------------------------------------------------------

@dataclass(frozen=True)
class SParam:
    names: tuple[str, ...]
    annot: Union[SType, str]  # a surface type, or the marker "clock"
    span: Span


@dataclass(frozen=True)
class ClockDecl:
    name: str
    span: Span


@dataclass(frozen=True)
class DefDecl:
    name: str
    params: tuple[SParam, ...]
    is_type_def: bool
    annot: Optional[SType]       # None exactly for type definitions
    body_type: Optional[SType]
    body_term: Optional[STerm]
    span: Span


SurfaceDecl = Union[ClockDecl, DefDecl]


# ---------------------------------------------------------------------------

class _P:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str = "") -> Token:
        t = self.peek()
        if t.kind != kind:
            want = what or kind
            raise ParseError(f"expected {want}, found {t.text or 'end of input'!r}",
                             t.span, frozenset({kind}))
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        return self.expect("IDENT", what)

    # --- declarations -------------------------------------------------------

    def file(self) -> list[SurfaceDecl]:
        decls: list[SurfaceDecl] = []
        while not self.at("EOF"):
            decls.append(self.decl())
        return decls

    def decl(self) -> SurfaceDecl:
        t = self.peek()
        if t.kind == "KW_CLOCK":
            self.next()
            name = self.ident("clock name")
            return ClockDecl(name.text, t.span.merge(name.span))
        if t.kind == "KW_DEF":
            self.next()
            name = self.ident("definition name")
            params: list[SParam] = []
            while self.at("LPAREN"):
                params.append(self.param())
            self.expect("COLON")
            if self.at("KW_TYPE"):
                self.next()
                self.expect("ASSIGN")
                body = self.type_()
                return DefDecl(name.text, tuple(params), True, None,
                               body, None, t.span.merge(name.span))
            annot = self.type_()
            self.expect("ASSIGN")
            body = self.term()
            return DefDecl(name.text, tuple(params), False, annot,
                           None, body, t.span.merge(name.span))
        raise ParseError(f"expected a declaration, found {t.text!r}",
                         t.span, frozenset({"KW_DEF", "KW_CLOCK"}))

    def param(self) -> SParam:
        lp = self.expect("LPAREN")
        names = [self.ident().text]
        while self.at("IDENT"):
            names.append(self.next().text)
        self.expect("COLON")
        if self.at("KW_CLOCK"):
            self.next()
            rp = self.expect("RPAREN")
            return SParam(tuple(names), "clock", lp.span.merge(rp.span))
        ty = self.type_()
        rp = self.expect("RPAREN")
        return SParam(tuple(names), ty, lp.span.merge(rp.span))

    # --- types --------------------------------------------------------------

    def type_(self) -> SType:
        t = self.peek()
        if t.kind == "KW_FORALL":
            self.next()
            k = self.ident("clock name")
            self.expect("DOT")
            body = self.type_()
            return STForall(k.text, body, t.span.merge(body.span))
        if t.kind == "LATER" and self.peek(1).kind == "LPAREN":
            self.next()
            self.expect("LPAREN")
            tick = self.ident("tick name")
            self.expect("COLON")
            clock = self.ident("clock name")
            self.expect("RPAREN")
            self.expect("DOT")
            body = self.type_()
            return STLater(tick.text, clock.text, body, t.span.merge(body.span))
        return self.arrow_type()

    def _try_binder_group(self) -> Optional[tuple[list[str], SType, Span]]:
        """``( x y : T )`` lookahead; None if the parens are just grouping."""
        if not self.at("LPAREN"):
            return None
        save = self.pos
        lp = self.next()
        names = []
        while self.at("IDENT"):
            names.append(self.next().text)
        if not names or not self.at("COLON"):
            self.pos = save
            return None
        self.next()
        ty = self.type_()
        rp = self.expect("RPAREN")
        return names, ty, lp.span.merge(rp.span)

    def arrow_type(self) -> SType:
        group = self._try_binder_group()
        if group is not None:
            names, dom, gspan = group
            if self.at("ARROW"):
                self.next()
                cod = self.type_()
                for n in reversed(names):
                    cod = STPi(n, dom, cod, gspan.merge(cod.span))
                return cod
            if self.at("STAR2"):
                self.next()
                cod = self.prod_type()
                for n in reversed(names):
                    cod = STSigma(n, dom, cod, gspan.merge(cod.span))
                return cod
            tok = self.peek()
            raise ParseError("expected -> or ** after a binder group",
                             tok.span, frozenset({"ARROW", "STAR2"}))
        lhs = self.prod_type()
        if self.at("ARROW"):
            self.next()
            cod = self.type_()
            return STPi(None, lhs, cod, lhs.span.merge(cod.span))
        return lhs

    def prod_type(self) -> SType:
        lhs = self.later_type()
        if self.at("STAR2"):
            self.next()
            rhs = self.prod_type()
            return STSigma(None, lhs, rhs, lhs.span.merge(rhs.span))
        return lhs

    def later_type(self) -> SType:
        t = self.peek()
        if t.kind == "LATER" and self.peek(1).kind == "CARET":
            self.next()
            self.next()
            k = self.ident("clock name")
            body = self.later_type()
            return STLater(None, k.text, body, t.span.merge(body.span))
        if t.kind == "LATER":
            # |>(a:k). inside a product position
            return self.type_()
        return self.atom_type()

    def atom_type(self) -> SType:
        t = self.peek()
        if t.kind == "KW_NAT":
            self.next()
            return STNat(t.span)
        if t.kind == "KW_U":
            self.next()
            clocks, sp = self._clock_braces()
            return STUniv(clocks, t.span.merge(sp))
        if t.kind == "KW_EL":
            self.next()
            clocks, _ = self._clock_braces()
            self.expect("LPAREN")
            code = self.term()
            rp = self.expect("RPAREN")
            return STEl(clocks, code, t.span.merge(rp.span))
        if t.kind == "KW_ID":
            self.next()
            self.expect("LPAREN")
            ty = self.type_()
            self.expect("COMMA")
            lhs = self.term()
            self.expect("COMMA")
            rhs = self.term()
            rp = self.expect("RPAREN")
            return STId(ty, lhs, rhs, t.span.merge(rp.span))
        if t.kind == "IDENT":
            self.next()
            return STName(t.text, t.span)
        if t.kind == "LPAREN":
            self.next()
            ty = self.type_()
            self.expect("RPAREN")
            return ty
        raise ParseError(f"expected a type, found {t.text or 'end of input'!r}",
                         t.span,
                         frozenset({"KW_NAT", "KW_U", "KW_EL", "KW_ID",
                                    "IDENT", "LPAREN", "KW_FORALL", "LATER"}))

    def _clock_braces(self) -> tuple[tuple[str, ...], Span]:
        self.expect("LBRACE")
        names: list[str] = []
        if self.at("IDENT"):
            names.append(self.next().text)
            while self.at("COMMA"):
                self.next()
                names.append(self.ident("clock name").text)
        rb = self.expect("RBRACE")
        return tuple(names), rb.span

    # --- terms --------------------------------------------------------------

    def term(self) -> STerm:
        t = self.peek()
        if t.kind == "LAM":
            self.next()
            binders = [self.lam_binder()]
            while self.at("IDENT", "LPAREN"):
                binders.append(self.lam_binder())
            self.expect("DOT")
            body = self.term()
            return SLam(tuple(binders), body, t.span.merge(body.span))
        if t.kind == "CLOCKLAM":
            self.next()
            names = [self.ident("clock name").text]
            while self.at("IDENT"):
                names.append(self.next().text)
            self.expect("DOT")
            body = self.term()
            return SClockLam(tuple(names), body, t.span.merge(body.span))
        if t.kind == "ATPI":
            return self._code_binder(SCodePi)
        if t.kind == "ATSIG":
            return self._code_binder(SCodeSigma)
        if t.kind == "ATFORALL":
            self.next()
            k = self.ident("clock name")
            self.expect("DOT")
            body = self.term()
            return SCodeForall(k.text, body, t.span.merge(body.span))
        if t.kind == "ATLATER":
            self.next()
            self.expect("LPAREN")
            tick = self.ident("tick name")
            self.expect("COLON")
            clock = self.ident("clock name")
            self.expect("RPAREN")
            self.expect("DOT")
            body = self.term()
            return SCodeLater(tick.text, clock.text, body,
                              t.span.merge(body.span))
        return self.cons_term()

    def _code_binder(self, cls) -> STerm:
        t = self.next()
        self.expect("LPAREN")
        x = self.ident()
        self.expect("COLON")
        dom = self.term()
        self.expect("RPAREN")
        self.expect("DOT")
        cod = self.term()
        return cls(x.text, dom, cod, t.span.merge(cod.span))

    def lam_binder(self) -> SBinder:
        t = self.peek()
        if t.kind == "IDENT":
            self.next()
            return SBinder((t.text,), None, t.span)
        lp = self.expect("LPAREN")
        names = [self.ident().text]
        while self.at("IDENT"):
            names.append(self.next().text)
        self.expect("COLON")
        ty = self.type_()
        rp = self.expect("RPAREN")
        return SBinder(tuple(names), ty, lp.span.merge(rp.span))

    _BINDERISH = ("LAM", "CLOCKLAM", "ATPI", "ATSIG", "ATFORALL", "ATLATER")

    def _rhs(self, parse_fn) -> STerm:
        """Right operand of an infix: a trailing binder form extends right."""
        if self.at(*self._BINDERISH):
            return self.term()
        return parse_fn()

    def cons_term(self) -> STerm:
        lhs = self.code_arrow_term()
        if self.at("CONS"):
            self.next()
            rhs = self._rhs(self.cons_term)
            return SPair(lhs, rhs, lhs.span.merge(rhs.span))
        return lhs

    def code_arrow_term(self) -> STerm:
        lhs = self.code_prod_term()
        if self.at("ATARROW"):
            self.next()
            rhs = self._rhs(self.code_arrow_term)
            return SCodePi(None, lhs, rhs, lhs.span.merge(rhs.span))
        return lhs

    def code_prod_term(self) -> STerm:
        lhs = self.app_term()
        if self.at("ATSTAR2"):
            self.next()
            rhs = self._rhs(self.code_prod_term)
            return SCodeSigma(None, lhs, rhs, lhs.span.merge(rhs.span))
        return lhs

    def app_term(self) -> STerm:
        head = self.unary_term()
        while self.at("IDENT", "NUMBER", "LPAREN", "ATNAT", "KW_NATREC",
                      "KW_J", "KW_IN", "KW_FST", "KW_SND", "KW_SUC",
                      "KW_REFL", "KW_CIRR", "KW_TIRR", "KW_PFIX",
                      "KW_FIX", "KW_DFIX"):
            arg = self.unary_term()
            head = SApp(head, arg, head.span.merge(arg.span))
        return head

    def unary_term(self) -> STerm:
        t = self.peek()
        if t.kind in ("KW_FST", "KW_SND"):
            self.next()
            arg = self.unary_term()
            return SProj(t.text, arg, t.span.merge(arg.span))
        if t.kind == "KW_SUC":
            self.next()
            arg = self.unary_term()
            return SSuc(arg, t.span.merge(arg.span))
        if t.kind == "KW_REFL":
            self.next()
            arg = self.unary_term()
            return SRefl(arg, t.span.merge(arg.span))
        if t.kind in ("KW_CIRR", "KW_TIRR", "KW_PFIX"):
            self.next()
            arg = self.unary_term()
            return SAxiom(t.text, arg, t.span.merge(arg.span))
        if t.kind in ("KW_FIX", "KW_DFIX"):
            self.next()
            self.expect("CARET")
            k = self.ident("clock name")
            arg = self.unary_term()
            cls = SFix if t.kind == "KW_FIX" else SDfix
            return cls(k.text, arg, t.span.merge(arg.span))
        return self.postfix_term()

    def postfix_term(self) -> STerm:
        t = self.atom_term()
        while self.at("LBRACK"):
            lb = self.next()
            if self.at("DIAMOND"):
                self.next()
                rb = self.expect("RBRACK")
                t = SDiamondApp(t, t.span.merge(rb.span))
                continue
            name = self.ident("tick or clock name")
            if self.at("DOT"):
                # explicit-binder diamond:  t [k.][<> k']
                self.next()
                self.expect("RBRACK")
                self.expect("LBRACK")
                self.expect("DIAMOND", "<> in explicit diamond application")
                target = self.ident("clock name")
                rb = self.expect("RBRACK")
                t = SDiamondExplicit(name.text, t, target.text,
                                     t.span.merge(rb.span))
                continue
            rb = self.expect("RBRACK")
            t = SBrack(t, name.text, t.span.merge(rb.span))
        return t

    def atom_term(self) -> STerm:
        t = self.peek()
        if t.kind == "IDENT":
            self.next()
            return SName(t.text, t.span)
        if t.kind == "NUMBER":
            self.next()
            return SNum(int(t.text), t.span)
        if t.kind == "ATNAT":
            self.next()
            return SCodeNat(t.span)
        if t.kind == "KW_NATREC":
            self.next()
            self.expect("LPAREN")
            x = self.ident()
            self.expect("DOT")
            motive = self.type_()
            self.expect("COMMA")
            base = self.term()
            self.expect("COMMA")
            m = self.ident()
            ih = self.ident()
            self.expect("DOT")
            step = self.term()
            self.expect("COMMA")
            scrut = self.term()
            rp = self.expect("RPAREN")
            return SNatRec(x.text, motive, base, m.text, ih.text, step,
                           scrut, t.span.merge(rp.span))
        if t.kind == "KW_J":
            self.next()
            self.expect("LPAREN")
            x = self.ident()
            y = self.ident()
            p = self.ident()
            self.expect("DOT")
            motive = self.type_()
            self.expect("COMMA")
            bx = self.ident()
            self.expect("DOT")
            base = self.term()
            self.expect("COMMA")
            eq = self.term()
            rp = self.expect("RPAREN")
            return SJ(x.text, y.text, p.text, motive, bx.text, base, eq,
                      t.span.merge(rp.span))
        if t.kind == "KW_IN":
            self.next()
            self.expect("LBRACE")
            small: list[str] = []
            if self.at("IDENT"):
                small.append(self.next().text)
                while self.at("COMMA"):
                    self.next()
                    small.append(self.ident().text)
            self.expect("SEMI")
            big: list[str] = []
            if self.at("IDENT"):
                big.append(self.next().text)
                while self.at("COMMA"):
                    self.next()
                    big.append(self.ident().text)
            self.expect("RBRACE")
            self.expect("LPAREN")
            code = self.term()
            rp = self.expect("RPAREN")
            return SIncl(tuple(small), tuple(big), code, t.span.merge(rp.span))
        if t.kind == "LPAREN":
            self.next()
            inner = self.term()
            if self.at("COMMA"):
                self.next()
                snd = self.term()
                rp = self.expect("RPAREN")
                return SPair(inner, snd, t.span.merge(rp.span))
            if self.at("COLON"):
                self.next()
                ty = self.type_()
                rp = self.expect("RPAREN")
                return SAnnot(inner, ty, t.span.merge(rp.span))
            self.expect("RPAREN")
            return inner
        raise ParseError(f"expected a term, found {t.text or 'end of input'!r}",
                         t.span,
                         frozenset({"IDENT", "NUMBER", "LPAREN", "LAM",
                                    "CLOCKLAM", "KW_FIX", "KW_DFIX"}))


def parse_file(src: str, filename: str = "<input>") -> list[SurfaceDecl]:
    """Parse a whole source file into surface declarations."""
    return _P(tokenize(src, filename)).file()


def parse_term(src: str, filename: str = "<input>") -> STerm:
    p = _P(tokenize(src, filename))
    t = p.term()
    p.expect("EOF", "end of input")
    return t


def parse_type(src: str, filename: str = "<input>") -> SType:
    p = _P(tokenize(src, filename))
    t = p.type_()
    p.expect("EOF", "end of input")
    return t
