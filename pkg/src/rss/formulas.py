"""Propositional linear-logic formulas: parsing, normalization, spaces.

ASCII grammar, tightest first:

    postfix ^        dual
    prefix  ! ?      exponentials
    infix   * par    multiplicatives (right associative)
    infix   & +      additives (right associative)
    infix   -o       implication, sugar for (dual of lhs) par rhs
    units   1 bot 0 top
    atoms   identifiers bound to named spaces

Normalization pushes duals to the atoms through the involutive
De Morgan laws, so every formula has a canonical negation-normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .connectives import cotensor, dual as space_dual, product, coproduct, tensor
from .errors import FormulaSyntaxError, UnboundAtomError
from .levels import level_space
from .spaces import PolytopeSpace, unit_space, zero_space


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Dual:
    sub: object

    def __str__(self):
        return f"{_wrap(self.sub)}^"


@dataclass(frozen=True)
class Bin:
    op: str  # "*", "par", "&", "+"
    left: object
    right: object

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Modal:
    op: str  # "!" or "?"
    sub: object

    def __str__(self):
        return f"{self.op}{_wrap(self.sub)}"


@dataclass(frozen=True)
class Unit:
    name: str  # "1", "bot", "0", "top"

    def __str__(self):
        return self.name


ONE = Unit("1")
BOT = Unit("bot")
ZERO = Unit("0")
TOP = Unit("top")


def _wrap(f):
    return f"({f})" if isinstance(f, Bin) else str(f)


_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>-o)|(?P<sym>[()*&+!?^])|(?P<word>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<digit>[01])|(?P<bad>\S))"
)

_KEYWORDS = {"par", "top", "bot"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.group("bad"):
            at = m.start("bad") if m else pos
            raise FormulaSyntaxError(
                f"unexpected character {text[at]!r}", at
            )
        if m.group("arrow"):
            tokens.append(("-o", m.start()))
        elif m.group("sym"):
            tokens.append((m.group("sym"), m.start()))
        elif m.group("word"):
            word = m.group("word")
            if word in _KEYWORDS:
                tokens.append((word, m.start()))
            else:
                tokens.append((("atom", word), m.start()))
        else:
            tokens.append((m.group("digit"), m.start()))
        pos = m.end()
    tokens.append(("end", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def where(self):
        return self.tokens[self.pos][1]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok, at = self.take()
        if tok != kind:
            raise FormulaSyntaxError(f"expected {kind!r}", at)

    def parse(self):
        f = self.parse_lolli()
        if self.peek() != "end":
            raise FormulaSyntaxError(
                f"unexpected trailing input {self.peek()!r}", self.where()
            )
        return f

    def parse_lolli(self):
        left = self.parse_additive()
        if self.peek() == "-o":
            self.take()
            right = self.parse_lolli()
            return Bin("par", Dual(left), right)
        return left

    def parse_additive(self):
        left = self.parse_multiplicative()
        if self.peek() in ("&", "+"):
            op, _ = self.take()
            right = self.parse_additive()
            return Bin(op, left, right)
        return left

    def parse_multiplicative(self):
        left = self.parse_prefix()
        if self.peek() in ("*", "par"):
            op, _ = self.take()
            return Bin(op, left, self.parse_multiplicative())
        return left

    def parse_prefix(self):
        tok = self.peek()
        if tok in ("!", "?"):
            op, _ = self.take()
            return self._duals(Modal(op, self.parse_prefix()))
        return self.parse_atomic()

    def parse_atomic(self):
        tok, at = self.take()
        if tok == "(":
            inner = self.parse_lolli()
            self.expect(")")
            return self._duals(inner)
        if tok == "1":
            return self._duals(ONE)
        if tok == "0":
            return self._duals(ZERO)
        if tok == "bot":
            return self._duals(BOT)
        if tok == "top":
            return self._duals(TOP)
        if isinstance(tok, tuple) and tok[0] == "atom":
            return self._duals(Atom(tok[1]))
        raise FormulaSyntaxError(f"expected a formula, got {tok!r}", at)

    def _duals(self, f):
        while self.peek() == "^":
            self.take()
            f = Dual(f)
        return f


def parse_formula(text: str):
    """Parse ASCII formula text into an AST."""
    return _Parser(text).parse()


_DUAL_UNIT = {"1": BOT, "bot": ONE, "0": TOP, "top": ZERO}
_DUAL_BIN = {"*": "par", "par": "*", "&": "+", "+": "&"}
_DUAL_MODAL = {"!": "?", "?": "!"}


def normalize(f):
    """Push duals to atoms; involutive."""
    if isinstance(f, Dual):
        return _negate(normalize(f.sub))
    if isinstance(f, Bin):
        return Bin(f.op, normalize(f.left), normalize(f.right))
    if isinstance(f, Modal):
        return Modal(f.op, normalize(f.sub))
    return f


def _negate(f):
    if isinstance(f, Atom):
        return Dual(f)
    if isinstance(f, Dual):
        return f.sub  # already normalized, so sub is an atom
    if isinstance(f, Unit):
        return _DUAL_UNIT[f.name]
    if isinstance(f, Bin):
        return Bin(_DUAL_BIN[f.op], _negate(f.left), _negate(f.right))
    if isinstance(f, Modal):
        return Modal(_DUAL_MODAL[f.op], _negate(f.sub))
    raise TypeError(f"not a formula: {f!r}")


def formula_dual(f):
    """Normalized dual."""
    return _negate(normalize(f))


def space_of(
    f, bindings: dict, degree: int, level: int = None, cap=None
) -> PolytopeSpace:
    """Compile a formula to its space.

    bindings map atom names to spaces; exponential subformulas become
    degree-capped graded spaces presented at the given level (the
    degree cap when omitted).
    """
    f = normalize(f)
    n = degree if level is None else level
    return _compile(f, bindings, degree, n, cap)


def _compile(f, bindings, degree, level, cap):
    if isinstance(f, Atom):
        if f.name not in bindings:
            raise UnboundAtomError(f"atom {f.name!r} has no bound space")
        return bindings[f.name]
    if isinstance(f, Dual):
        return space_dual(_compile(f.sub, bindings, degree, level, cap))
    if isinstance(f, Unit):
        if f.name in ("1", "bot"):
            return unit_space()
        return zero_space()
    if isinstance(f, Bin):
        left = _compile(f.left, bindings, degree, level, cap)
        right = _compile(f.right, bindings, degree, level, cap)
        if f.op == "*":
            return tensor(left, right, cap=cap)
        if f.op == "par":
            return cotensor(left, right, cap=cap)
        if f.op == "&":
            return product(left, right)
        if f.op == "+":
            return coproduct(left, right)
    if isinstance(f, Modal):
        sub = _compile(f.sub, bindings, degree, level, cap)
        if f.op == "?":
            return level_space(sub, degree, level, cap=cap)
        return space_dual(
            level_space(space_dual(sub), degree, level, cap=cap)
        )
    raise TypeError(f"not a formula: {f!r}")
