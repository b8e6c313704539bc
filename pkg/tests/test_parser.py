import pytest

from clott.elaborate import ElabEnv, elab_check, elab_infer, typecheck_file
from clott.lexer import LexError, tokenize
from clott.parser import (
    ClockDecl, DefDecl, ParseError, parse_file, parse_term,
)
from clott.pretty import pretty
from clott.syntax import alpha_eq
from clott.typecheck import Fuel
from conftest import CORPUS_FILES, corpus_path


def kinds(src):
    return [t.kind for t in tokenize(src)][:-1]  # drop EOF


def test_tokenize_dfix():
    assert kinds("dfix^k t") == ["KW_DFIX", "CARET", "IDENT", "IDENT"]


def test_tokenize_later_binder():
    assert kinds("|>(a:k).A") == ["LATER", "LPAREN", "IDENT", "COLON",
                                  "IDENT", "RPAREN", "DOT", "IDENT"]


def test_tokenize_unicode_fallbacks():
    assert kinds("▷(a:k).A") == kinds("|>(a:k).A")
    assert kinds("λx. x") == kinds("\\x. x")
    assert kinds("t[⋄]") == kinds("t[<>]")


def test_tokenize_illegal_character():
    with pytest.raises(LexError) as err:
        tokenize("⌘")
    assert err.value.span.line == 1 and err.value.span.col == 1


def test_parse_a_definition():
    decls = parse_file("def zeros : GStr := fix^k (\\x. 0 :: x)")
    assert len(decls) == 1
    assert isinstance(decls[0], DefDecl)
    assert decls[0].name == "zeros"


def test_parse_empty_file():
    assert parse_file("") == []


def test_parse_error_with_expected_set():
    with pytest.raises(ParseError) as err:
        parse_file("def = =")
    assert err.value.span.line == 1


def test_parse_clock_declaration():
    decls = parse_file("clock k0")
    assert isinstance(decls[0], ClockDecl) and decls[0].name == "k0"


def test_parse_explicit_diamond():
    t = parse_term("xs [k.][<> k0]")
    assert type(t).__name__ == "SDiamondExplicit"
    assert t.binder == "k" and t.target == "k0"


def test_parse_precedence_cons_binds_looser_than_application():
    t = parse_term("f x :: g y")
    assert type(t).__name__ == "SPair"


def test_parse_annotation_vs_pair_vs_group():
    assert type(parse_term("(x , y)")).__name__ == "SPair"
    assert type(parse_term("(x : Nat)")).__name__ == "SAnnot"
    assert type(parse_term("(x)")).__name__ == "SName"


def _roundtrip_defs(prog):
    env = ElabEnv(prog.defs, prog.tydefs, prog.defs.ambient,
                  tuple((e.name.text, "clock", e.name)
                        for e in prog.defs.ambient.entries), Fuel())
    for name in prog.defs.order:
        d = prog.defs.table[name]
        printed = pretty(d.body)
        # re-elaborate the way the definition was elaborated: against its
        # declared type
        reparsed = elab_check(env, parse_term(printed), d.ty)
        assert alpha_eq(reparsed, d.body), name
        # printing is textually idempotent on parser output
        assert pretty(reparsed) == printed, name


@pytest.mark.parametrize("filename", CORPUS_FILES)
def test_pretty_parse_roundtrip_on_corpus(filename):
    src = corpus_path(filename).read_text()
    prog = typecheck_file(parse_file(src, filename))
    assert prog.ok
    _roundtrip_defs(prog)


def test_diagnostic_format_single_line():
    from clott.lexer import Span
    s = Span("file.clott", 3, 7, 3, 9)
    assert str(s) == "file.clott:3:7"
