"""Point-free morphism expressions over named open Petri nets.

Surface syntax::

    expr   := seq
    seq    := par ((';' | '·' | '∘') par)*      lowest precedence, left-assoc
    par    := atom (('*' | '⊗') atom)*          left-assoc
    atom   := NAME
            | 'id' '[' [LABEL (',' LABEL)*] ']'
            | 'compose' '(' expr (',' expr)* ')'
            | 'otimes' '(' expr (',' expr)* ')'
            | '(' expr ')'

``f ; g`` (and ``f · g``) runs ``f`` first, then ``g``. ``g ∘ f`` is the same
composite in mathematical order. ``compose(a, b, ...)`` follows the
Lisp-style ``(compose (otimes f g) h)`` reading, i.e. ``a ; b ; ...``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import BoundaryMismatch, ExprSyntaxError, UnboundGenerator
from .finset import LabeledSet, coproduct
from .opennet import OpenPetriNet, compose, identity_open, tensor

KEYWORDS = frozenset({"id", "compose", "otimes"})


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Id:
    obj: LabeledSet

    def __init__(self, obj):
        if not isinstance(obj, LabeledSet):
            obj = LabeledSet(obj)
        object.__setattr__(self, "obj", obj)


@dataclass(frozen=True)
class Compose:
    """Diagrammatic composite: ``left`` first, then ``right``."""

    left: MorphExpr
    right: MorphExpr


@dataclass(frozen=True)
class Tensor:
    left: MorphExpr
    right: MorphExpr


MorphExpr = Union[Gen, Id, Compose, Tensor]
Environment = Mapping[str, OpenPetriNet]


# -- lexer ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<word>[^\W\d][\w']*)
  | (?P<label>[\w']+)
  | (?P<op>[;·∘*⊗(),\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # word | label | op | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError("unexpected character", line, pos - line_start + 1, text[pos])
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        else:
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ExprSyntaxError:
        tok = tok or self.tok
        return ExprSyntaxError(message, tok.line, tok.col, tok.text)

    def accept(self, *ops: str) -> _Token | None:
        if self.tok.kind == "op" and self.tok.text in ops:
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, op: str) -> _Token:
        tok = self.accept(op)
        if tok is None:
            raise self.error(f"expected {op!r}")
        return tok

    def parse(self) -> MorphExpr:
        expr = self.seq()
        if self.tok.kind != "eof":
            raise self.error("unexpected token")
        return expr

    def seq(self) -> MorphExpr:
        left = self.par()
        while True:
            op = self.accept(";", "·", "∘")
            if op is None:
                return left
            right = self.par()
            left = Compose(right, left) if op.text == "∘" else Compose(left, right)

    def par(self) -> MorphExpr:
        left = self.atom()
        while self.accept("*", "⊗"):
            left = Tensor(left, self.atom())
        return left

    def atom(self) -> MorphExpr:
        tok = self.tok
        if self.accept("("):
            expr = self.seq()
            self.expect(")")
            return expr
        if tok.kind == "word":
            self.i += 1
            if tok.text == "id":
                return self.identity()
            if tok.text in ("compose", "otimes"):
                return self.functional(tok.text)
            return Gen(tok.text)
        if tok.kind == "eof":
            raise self.error("unexpected end of expression")
        raise self.error("expected a generator, 'id[...]' or '('")

    def identity(self) -> Id:
        self.expect("[")
        labels: list[str] = []
        if not self.accept("]"):
            while True:
                tok = self.tok
                if tok.kind not in ("word", "label"):
                    raise self.error("expected an object label")
                if tok.text in labels:
                    raise self.error("duplicate label in identity object")
                labels.append(tok.text)
                self.i += 1
                if self.accept("]"):
                    break
                self.expect(",")
        return Id(LabeledSet(labels))

    def functional(self, form: str) -> MorphExpr:
        self.expect("(")
        args = [self.seq()]
        while self.accept(","):
            args.append(self.seq())
        self.expect(")")
        node = Compose if form == "compose" else Tensor
        result = args[0]
        for arg in args[1:]:
            result = node(result, arg)
        return result


def parse(text: str) -> MorphExpr:
    return _Parser(text).parse()


# -- printer ----------------------------------------------------------------

def to_text(e: MorphExpr) -> str:
    """Canonical infix form.

    Parentheses appear only where precedence or associativity demand them,
    except that a tensor operand of a composite is always bracketed, as in
    ``(f * g) ; h``.
    """
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Id):
        return "id[" + ",".join(e.obj.labels) + "]"
    if isinstance(e, Compose):
        left = to_text(e.left)
        right = to_text(e.right)
        if isinstance(e.left, Tensor):
            left = f"({left})"
        if isinstance(e.right, (Compose, Tensor)):
            right = f"({right})"
        return f"{left} ; {right}"
    if isinstance(e, Tensor):
        left = to_text(e.left)
        right = to_text(e.right)
        if isinstance(e.left, Compose):
            left = f"({left})"
        if isinstance(e.right, (Compose, Tensor)):
            right = f"({right})"
        return f"{left} * {right}"
    raise TypeError(f"not an expression: {e!r}")


# -- typing and evaluation ---------------------------------------------------

def generators(e: MorphExpr) -> Iterator[str]:
    """Generator names in left-to-right order (with repeats)."""
    if isinstance(e, Gen):
        yield e.name
    elif isinstance(e, (Compose, Tensor)):
        yield from generators(e.left)
        yield from generators(e.right)


def typecheck(e: MorphExpr, env: Environment) -> tuple[LabeledSet, LabeledSet]:
    """Return ``(domain, codomain)`` objects of ``e``."""
    if isinstance(e, Gen):
        if e.name not in env:
            raise UnboundGenerator(e.name)
        net = env[e.name]
        return net.dom_object, net.cod_object
    if isinstance(e, Id):
        return e.obj, e.obj
    if isinstance(e, Compose):
        dom, mid = typecheck(e.left, env)
        found, cod = typecheck(e.right, env)
        if mid != found:
            raise BoundaryMismatch(mid, found, to_text(e))
        return dom, cod
    if isinstance(e, Tensor):
        d1, c1 = typecheck(e.left, env)
        d2, c2 = typecheck(e.right, env)
        return coproduct(d1, d2)[0], coproduct(c1, c2)[0]
    raise TypeError(f"not an expression: {e!r}")


def evaluate(e: MorphExpr, env: Environment) -> OpenPetriNet:
    typecheck(e, env)
    return _eval(e, env)


def _eval(e: MorphExpr, env: Environment) -> OpenPetriNet:
    if isinstance(e, Gen):
        return env[e.name]
    if isinstance(e, Id):
        return identity_open(e.obj)
    if isinstance(e, Compose):
        return compose(_eval(e.left, env), _eval(e.right, env))
    return tensor(_eval(e.left, env), _eval(e.right, env))
