"""Expression and declaration language for hypersurfaces, maps and corpus entries.

Expressions use rationals, ``i``, the coordinate names ``z1..zn, w, chi1..chin,
tau`` (``z``/``chi`` are accepted when ``n = 1``), ``+ - * / ^``, ``exp``,
``sin``, ``cos``, ``log1p`` and parentheses. Division is only by units.

A document is a sequence of blocks::

    hypersurface lewy { n = 1; Q = tau + 2*i*z1*chi1; }
    map mobius { n = 1; f1 = 2*z1/(1 - 2*i*z1); g = w/(1 - 2*i*z1); ft1 = 1/2*chi1 + 1/2*tau; gt = tau; }
    entry lewy_self { source = lewy; target = lewy; map = mobius; expect verify = proved; }

Parsing keeps an AST, and printing the AST is canonical, so a document in
canonical layout re-prints byte-identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .scalar import GaussianRational
from .series import SeriesError, TruncatedSeries, VarSpace


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*(?:\.[A-Za-z_][A-Za-z_0-9]*)*)
  | (?P<str>"[^"\n]*")
  | (?P<op>[-+*/^(){};=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# expression AST


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Num, Imag, Var, Neg, BinOp, Pow, Call]

FUNCTIONS = ("exp", "sin", "cos", "log1p")
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Imag):
        return "i"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({format_expr(e.arg)})"
    if isinstance(e, Neg):
        inner = format_expr(e.arg)
        return f"-{inner}" if _prec(e.arg) >= 3 else f"-({inner})"
    if isinstance(e, Pow):
        base = format_expr(e.base)
        if _prec(e.base) < 5:
            base = f"({base})"
        return f"{base}^{e.exp}"
    p = _PREC[e.op]
    left = format_expr(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = format_expr(e.right)
    if _prec(e.right) <= p:
        right = f"({right})"
    if e.op in "+-":
        return f"{left} {e.op} {right}"
    return f"{left}{e.op}{right}"


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "str":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.advance()

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            if self.tok.kind != "num":
                raise self.error("expected an integer exponent after '^'", caret)
            return Pow(base, sign * int(self.advance().text))
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(int(t.text))
        if t.kind == "name":
            self.advance()
            if t.text == "i":
                return Imag()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r} in expression")


def parse_expr_ast(text: str) -> Expr:
    p = _Parser(tokenize(text))
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    return e


# ---------------------------------------------------------------------------
# evaluation


def variable_table(space: VarSpace, real_form: bool = False) -> dict[str, int]:
    """Names accepted in expressions.

    In a real defining function (``imw = ...``) the ``w`` slot holds ``s = Re w``
    and neither ``w`` nor ``tau`` may appear.
    """
    table = {name: k for k, name in enumerate(space.names)}
    if space.n == 1:
        table["z"] = space.z(1)
        table["chi"] = space.chi(1)
    if real_form:
        del table["w"], table["tau"]
        table["s"] = space.w
    return table


def evaluate(e: Expr, space: VarSpace, order: int, names: dict[str, int] | None = None,
             where: tuple[int, int] = (0, 0)) -> TruncatedSeries:
    names = variable_table(space) if names is None else names

    def ev(node: Expr) -> TruncatedSeries:
        if isinstance(node, Num):
            return TruncatedSeries.constant(space, node.value, order)
        if isinstance(node, Imag):
            return TruncatedSeries.constant(space, GaussianRational(0, 1), order)
        if isinstance(node, Var):
            if node.name not in names:
                raise ParseError(f"unknown variable {node.name!r} for n={space.n}", *where)
            return TruncatedSeries.var(space, names[node.name], order)
        if isinstance(node, Neg):
            return -ev(node.arg)
        if isinstance(node, Call):
            try:
                return ev(node.arg).elementary(node.fn)
            except SeriesError as exc:
                raise ParseError(str(exc), *where) from None
        if isinstance(node, Pow):
            base = ev(node.base)
            if node.exp < 0 and base.constant_term().is_zero():
                raise ParseError("negative power of a non-unit", *where)
            return base ** node.exp
        left, right = ev(node.left), ev(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right.constant_term().is_zero():
            raise ParseError(f"non-unit denominator {format_expr(node.right)!r}", *where)
        return left / right

    return ev(e)


def parse_expression(text: str, space: VarSpace, order: int, real_form: bool = False) -> TruncatedSeries:
    return evaluate(parse_expr_ast(text), space, order, variable_table(space, real_form))


# ---------------------------------------------------------------------------
# declarations


@dataclass
class Statement:
    key: str
    value: Union[Expr, int, str]
    label: str | None = None
    line: int = 0
    col: int = 0
    is_expect: bool = False


@dataclass
class Block:
    kind: str
    name: str
    statements: list[Statement] = field(default_factory=list)
    line: int = 0

    def get(self, key: str):
        for st in self.statements:
            if st.key == key and not st.is_expect:
                return st
        return None

    @property
    def expectations(self) -> list[Statement]:
        return [st for st in self.statements if st.is_expect]


@dataclass
class Document:
    blocks: list[Block]
    comments: list[str] = field(default_factory=list)

    def find(self, kind: str, name: str) -> Block | None:
        return next((b for b in self.blocks if b.kind == kind and b.name == name), None)


BLOCK_KINDS = ("hypersurface", "map", "entry")
_NAME_VALUED = {"source", "target", "map"}


def parse_document(text: str) -> Document:
    """Parse a corpus/declaration file into blocks."""
    p = _Parser(tokenize(text))
    blocks = []
    while p.tok.kind != "eof":
        head = p.expect_kind("name", "'hypersurface', 'map' or 'entry'")
        if head.text not in BLOCK_KINDS:
            raise p.error(f"unknown block kind {head.text!r}", head)
        name = p.expect_kind("name", "a block name").text
        p.expect("{")
        block = Block(head.text, name, line=head.line)
        while not (p.tok.kind == "op" and p.tok.text == "}"):
            if p.tok.kind == "eof":
                raise p.error("unterminated block")
            block.statements.append(_statement(p, block.kind))
        p.expect("}")
        blocks.append(block)
    comments = [ln for ln in text.splitlines() if ln.startswith("#")]
    return Document(blocks, comments)


def _statement(p: _Parser, kind: str) -> Statement:
    is_expect = False
    if p.tok.kind == "name" and p.tok.text == "expect" and kind == "entry":
        p.advance()
        is_expect = True
    key_tok = p.expect_kind("name", "a field name")
    p.expect("=")
    key = key_tok.text
    if is_expect:
        value_tok = p.tok
        if value_tok.kind in ("name", "num", "str"):
            p.advance()
            value = value_tok.text
            if value_tok.kind == "str":
                value = value[1:-1]
        else:
            raise p.error("expected an expected value")
        if p.tok.kind == "op" and p.tok.text == "(":
            p.advance()
            arg = p.expect_kind("num", "an integer").text
            p.expect(")")
            value = f"{value}({arg})"
        label = None
        if p.tok.kind == "str":
            label = p.advance().text[1:-1]
        p.expect(";")
        return Statement(key, value, label, key_tok.line, key_tok.col, True)
    if key == "n" or (kind == "entry" and key in _NAME_VALUED):
        tok = p.advance()
        if key == "n":
            if tok.kind != "num":
                raise p.error("n must be a positive integer", tok)
            value = int(tok.text)
        else:
            if tok.kind != "name":
                raise p.error(f"{key} must name a declared block", tok)
            value = tok.text
        p.expect(";")
        return Statement(key, value, None, key_tok.line, key_tok.col)
    value = p.expr()
    p.expect(";")
    return Statement(key, value, None, key_tok.line, key_tok.col)


def format_statement(st: Statement) -> str:
    if st.is_expect:
        text = f"expect {st.key} = "
        v = str(st.value)
        if re.fullmatch(r"[A-Za-z_0-9.]+(\(\d+\))?", v):
            text += v
        else:
            text += f'"{v}"'
        if st.label:
            text += f' "{st.label}"'
        return text + ";"
    if isinstance(st.value, (int, str)):
        return f"{st.key} = {st.value};"
    return f"{st.key} = {format_expr(st.value)};"


def format_document(doc: Document) -> str:
    """Canonical layout: header comments, then one statement per line inside blocks."""
    out = []
    if doc.comments:
        out.extend(doc.comments)
        out.append("")
    for k, block in enumerate(doc.blocks):
        if k:
            out.append("")
        out.append(f"{block.kind} {block.name} {{")
        for st in block.statements:
            out.append("  " + format_statement(st))
        out.append("}")
    return "\n".join(out) + "\n"
