"""Text syntax for formulas.

Grammar, loosest binding first::

    formula := disj ( "->" formula )?          right-associative
    disj    := conj ( "|" conj )*              left-associative
    conj    := unary ( "&" unary )*            left-associative
    unary   := "~" unary | R<k> unary | D<k> unary | atom
    atom    := identifier | "true" | "false" | "(" formula ")"

``R<k>``/``D<k>`` are single tokens (``R1``, ``D12``); a word such as ``R1x``
is an ordinary identifier.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .formula import (
    FALSE,
    TRUE,
    And,
    Def,
    FalseLit,
    Formula,
    Implies,
    Not,
    Or,
    Prop,
    Report,
    TrueLit,
)

KEYWORDS = frozenset({"true", "false"})

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<op>[&|~()])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)
_MODAL_WORD = re.compile(r"([RD])(\d+)")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


@dataclass(frozen=True)
class Token:
    kind: str  # "->", "&", "|", "~", "(", ")", "modal", "ident", "true", "false", "eof"
    text: str
    span: SourceSpan
    agent: int = 0


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", (pos, pos + 1), "a formula token", text
            )
        span = SourceSpan(m.start(), m.end())
        if m.lastgroup == "arrow":
            tokens.append(Token("->", "->", span))
        elif m.lastgroup == "op":
            tokens.append(Token(m.group(), m.group(), span))
        elif m.lastgroup == "word":
            word = m.group()
            modal = _MODAL_WORD.fullmatch(word)
            if modal:
                index = int(modal.group(2))
                if index < 1:
                    raise ParseError(
                        f"agent index in {word!r} is not a positive integer",
                        (span.start, span.end),
                        "an agent index >= 1",
                        text,
                    )
                kind = "modal"
                tokens.append(Token(kind, modal.group(1), span, index))
            elif word in KEYWORDS:
                tokens.append(Token(word, word, span))
            else:
                tokens.append(Token("ident", word, span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(len(text), len(text))))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected, message=None):
        tok = self.current
        found = "end of input" if tok.kind == "eof" else repr(tok.text if tok.kind != "modal" else f"{tok.text}{tok.agent}")
        raise ParseError(
            message or f"unexpected {found}",
            (tok.span.start, tok.span.end),
            expected,
            self.text,
        )

    def formula(self):
        left = self.disjunction()
        if self.current.kind == "->":
            self.advance()
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.current.kind == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.current.kind == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.current
        if tok.kind == "~":
            self.advance()
            return Not(self.unary())
        if tok.kind == "modal":
            self.advance()
            body = self.unary()
            return Report(tok.agent, body) if tok.text == "R" else Def(tok.agent, body)
        return self.atom()

    def atom(self):
        tok = self.current
        if tok.kind == "ident":
            self.advance()
            return Prop(tok.text)
        if tok.kind == "true":
            self.advance()
            return TRUE
        if tok.kind == "false":
            self.advance()
            return FALSE
        if tok.kind == "(":
            self.advance()
            inner = self.formula()
            if self.current.kind != ")":
                self.fail("')'", f"unbalanced parenthesis opened at {tok.span.start}")
            self.advance()
            return inner
        self.fail("a proposition, 'true', 'false', '~', R<k>, D<k> or '('")

    def parse(self):
        result = self.formula()
        if self.current.kind != "eof":
            if self.current.kind == ")":
                self.fail("end of input", "unbalanced parenthesis")
            self.fail("end of input", "trailing input")
        return result


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula or raise :class:`ParseError`."""
    return _Parser(text).parse()


# binding strength; larger binds tighter
_PREC = {Implies: 1, Or: 2, And: 3}
_UNARY = 4
_SYMBOL = {Implies: "->", Or: "|", And: "&"}


def _prec(phi):
    return _PREC.get(type(phi), _UNARY)


def render(phi: Formula, explicit: bool = False) -> str:
    """Render ``phi`` with minimal parentheses, so that ``parse(render(phi)) == phi``.

    With ``explicit=True`` every binary subformula below the root is
    parenthesized, which makes the grouping visible (``(p & q) | r``).
    """
    return _render(phi, explicit)


def _wrap(child, needs_parens, explicit):
    text = _render(child, explicit)
    return f"({text})" if needs_parens else text


def _render(phi, explicit):
    if isinstance(phi, TrueLit):
        return "true"
    if isinstance(phi, FalseLit):
        return "false"
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Not):
        return "~" + _wrap(phi.arg, _prec(phi.arg) < _UNARY, explicit)
    if isinstance(phi, (Report, Def)):
        op = "R" if isinstance(phi, Report) else "D"
        return f"{op}{phi.agent} " + _wrap(phi.body, _prec(phi.body) < _UNARY, explicit)
    p = _PREC[type(phi)]
    lp, rp = _prec(phi.left), _prec(phi.right)
    if isinstance(phi, Implies):
        left_parens, right_parens = lp <= p, rp < p
    else:
        left_parens, right_parens = lp < p, rp <= p
    if explicit:
        left_parens = left_parens or lp < _UNARY
        right_parens = right_parens or rp < _UNARY
    left = _wrap(phi.left, left_parens, explicit)
    right = _wrap(phi.right, right_parens, explicit)
    return f"{left} {_SYMBOL[type(phi)]} {right}"
