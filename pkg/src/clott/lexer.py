"""Tokenizer for the surface syntax.

Every Unicode operator has an ASCII fallback so source files are editable
anywhere; the lexer normalizes both spellings to the same token kind.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def merge(self, other: "Span") -> "Span":
        return Span(self.file, self.line, self.col,
                    other.end_line, other.end_col)

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


class LexError(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


KEYWORDS = {
    "clock", "def", "type", "forall", "Nat", "U", "El", "Id", "in", "fst",
    "snd", "suc", "natrec", "refl", "J", "fix", "dfix", "cirr", "tirr",
    "pfix",
}

# longest match first
_SYMBOLS = [
    ("@|>", "ATLATER"), ("@->", "ATARROW"), ("@**", "ATSTAR2"),
    (":=", "ASSIGN"), ("::", "CONS"), ("/\\", "CLOCKLAM"),
    ("|>", "LATER"), ("->", "ARROW"), ("**", "STAR2"), ("<>", "DIAMOND"),
    ("(", "LPAREN"), (")", "RPAREN"), ("{", "LBRACE"), ("}", "RBRACE"),
    ("[", "LBRACK"), ("]", "RBRACK"), (".", "DOT"), (",", "COMMA"),
    (":", "COLON"), (";", "SEMI"), ("=", "EQ"), ("\\", "LAM"),
    ("^", "CARET"),
]

_UNICODE = {
    "▷": "|>", "⋄": "<>", "λ": "\\", "Λ": "/\\",
    "∀": "forall ", "→": "->", "×": "**", "ℕ": "Nat ",
}


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c in "_'"


def tokenize(src: str, filename: str = "<input>") -> list[Token]:
    """Token stream for ``src``; raises :class:`LexError` on an illegal
    character, with its position."""
    for uni, ascii_ in _UNICODE.items():
        src = src.replace(uni, ascii_)
    toks: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(src)

    def span(l0, c0, l1, c1):
        return Span(filename, l0, c0, l1, c1)

    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("--", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == "@" and i + 1 < n and _is_ident_start(src[i + 1]):
            j = i + 1
            while j < n and _is_ident_char(src[j]):
                j += 1
            word = src[i + 1:j]
            toks.append(Token("AT" + word.upper(), src[i:j],
                              span(line, col, line, col + (j - i))))
            col += j - i
            i = j
            continue
        matched = False
        for sym, kind in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(Token(kind, sym,
                                  span(line, col, line, col + len(sym))))
                i += len(sym)
                col += len(sym)
                matched = True
                break
        if matched:
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("NUMBER", src[i:j],
                              span(line, col, line, col + (j - i))))
            col += j - i
            i = j
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(src[j]):
                j += 1
            word = src[i:j]
            kind = "KW_" + word.upper() if word in KEYWORDS else "IDENT"
            toks.append(Token(kind, word, span(line, col, line, col + (j - i))))
            col += j - i
            i = j
            continue
        raise LexError(f"illegal character {c!r}", span(line, col, line, col + 1))
    toks.append(Token("EOF", "", span(line, col, line, col)))
    return toks
