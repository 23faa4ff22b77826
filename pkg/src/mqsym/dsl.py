"""Script language for the measurement algebra.

Grammar (EBNF)::

    program   := stmt* ;
    stmt      := obsdecl | jointdecl | letbind | query ;
    obsdecl   := "observable" IDENT "{" labelent ("," labelent)* "}" ;
    labelent  := IDENT (":" ["-"] NUMBER)? ;
    jointdecl := "joint" IDENT "=" IDENT ("&" IDENT)+ ;
    letbind   := "let" IDENT "=" expr ;
    query     := ("normalize"|"trace"|"verify") expr
               | "prob" "(" state "|" state ")"
               | "expect" "(" IDENT "|" state ")"
               | "spectrum" IDENT ;
    expr      := term (("+"|"-") term)* ;
    term      := postfix ("*" postfix)* ;
    postfix   := atom ("†" | "^+")* ;
    atom      := "I" | "M[" state ("<-" state)? "]" | "<" state "|" state ">"
               | NUMBER | IDENT | "(" expr ")" | "-" atom
               | ("conj"|"transpose") "(" expr ")" ;
    state     := IDENT ":" IDENT ("," IDENT)* ;

Numbers: ``3``, ``3/4``, ``1.5``, and any of those with an ``i`` suffix;
``(1+2i)`` is an ordinary parenthesized sum.  Unary minus and multi-label
states (for joint observables) are strict supersets of the base grammar.
Comments run from ``#`` to end of line.  Parsing is a pure function of the
source; the first error aborts with a precise (line, column, length) span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, Span
from .scalar import ComplexRational

KEYWORDS = frozenset({
    "observable", "joint", "let", "normalize", "trace", "verify",
    "prob", "expect", "spectrum", "conj", "transpose", "I", "M",
})

_PUNCT = frozenset("{}()[]:,|<>+-*&=")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self) -> Span:
        return (self.line, self.col, len(self.text))


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = text if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            elif j < n and source[j] == "/" and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] == "i":
                j += 1
            tokens.append(Token("NUMBER", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == "<" and i + 1 < n and source[i + 1] == "-":
            tokens.append(Token("<-", "<-", line, start_col))
            i += 2
            col += 2
            continue
        if ch == "^":
            if i + 1 < n and source[i + 1] == "+":
                tokens.append(Token("†", "^+", line, start_col))
                i += 2
                col += 2
                continue
            raise ParseError("unexpected character '^' (did you mean '^+'?)",
                             (line, start_col, 1))
        if ch == "†":
            tokens.append(Token("†", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", (line, start_col, 1))
    tokens.append(Token("EOF", "", line, col))
    return tokens


def _number_value(text: str) -> ComplexRational:
    imag = text.endswith("i")
    if imag:
        text = text[:-1]
    value = Fraction(text)
    return ComplexRational(im=value) if imag else ComplexRational(re=value)


# --- AST ------------------------------------------------------------------------
# Spans never participate in equality: two parses of equivalent sources are
# structurally identical trees.


def _span_field():
    return field(default=None, compare=False)


@dataclass(frozen=True)
class StateName:
    observable: str
    label: str | tuple[str, ...]
    span: Span | None = _span_field()


@dataclass(frozen=True)
class ObservableDecl:
    name: str
    entries: tuple[tuple[str, Fraction | None], ...]
    span: Span | None = _span_field()


@dataclass(frozen=True)
class JointDecl:
    name: str
    components: tuple[str, ...]
    span: Span | None = _span_field()


@dataclass(frozen=True)
class LetBinding:
    name: str
    expr: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class NormalizeQuery:
    expr: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class TraceQuery:
    expr: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class VerifyQuery:
    expr: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class ProbQuery:
    a: StateName
    b: StateName
    span: Span | None = _span_field()


@dataclass(frozen=True)
class ExpectQuery:
    observable: str
    b: StateName
    span: Span | None = _span_field()


@dataclass(frozen=True)
class SpectrumQuery:
    observable: str
    span: Span | None = _span_field()


@dataclass(frozen=True)
class SumNode:
    op: str  # "+" or "-"
    left: "ExprNode"
    right: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class ProductNode:
    left: "ExprNode"
    right: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class NegNode:
    child: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class AdjointNode:
    child: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class ConjugateNode:
    child: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class TransposeNode:
    child: "ExprNode"
    span: Span | None = _span_field()


@dataclass(frozen=True)
class FilterNode:
    state: StateName
    span: Span | None = _span_field()


@dataclass(frozen=True)
class SymbolNode:
    out: StateName
    in_: StateName
    span: Span | None = _span_field()


@dataclass(frozen=True)
class IdentityNode:
    span: Span | None = _span_field()


@dataclass(frozen=True)
class TFNode:
    bra: StateName
    ket: StateName
    span: Span | None = _span_field()


@dataclass(frozen=True)
class NumberNode:
    value: ComplexRational
    span: Span | None = _span_field()


@dataclass(frozen=True)
class VarRefNode:
    name: str
    span: Span | None = _span_field()


ExprNode = (SumNode | ProductNode | NegNode | AdjointNode | ConjugateNode
            | TransposeNode | FilterNode | SymbolNode | IdentityNode | TFNode
            | NumberNode | VarRefNode)

Statement = (ObservableDecl | JointDecl | LetBinding | NormalizeQuery
             | TraceQuery | VerifyQuery | ProbQuery | ExpectQuery
             | SpectrumQuery)

_STMT_STARTERS = ("observable", "joint", "let", "normalize", "trace",
                  "verify", "prob", "expect", "spectrum")

_ATOM_STARTERS = ("I", "M", "<", "NUMBER", "IDENT", "(", "-", "conj",
                  "transpose")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, *kinds: str) -> bool:
        return self.cur.kind in kinds

    def expect(self, kind: str) -> Token:
        if self.cur.kind != kind:
            self.fail((kind,))
        return self.advance()

    def fail(self, expected: tuple[str, ...]):
        tok = self.cur
        shown = " or ".join(f"'{k}'" if len(k) <= 2 else k for k in expected)
        found = "end of input" if tok.kind == "EOF" else f"{tok.text!r}"
        raise ParseError(f"expected {shown}, found {found}",
                         tok.span, expected)

    # -- grammar --------------------------------------------------------

    def program(self) -> list[Statement]:
        stmts = []
        while not self.at("EOF"):
            stmts.append(self.statement())
        return stmts

    def statement(self) -> Statement:
        k = self.cur.kind
        if k == "observable":
            return self.obsdecl()
        if k == "joint":
            return self.jointdecl()
        if k == "let":
            return self.letbind()
        if k in ("normalize", "trace", "verify"):
            tok = self.advance()
            expr = self.expr()
            node = {"normalize": NormalizeQuery, "trace": TraceQuery,
                    "verify": VerifyQuery}[tok.kind]
            return node(expr, span=tok.span)
        if k == "prob":
            tok = self.advance()
            self.expect("(")
            a = self.state()
            self.expect("|")
            b = self.state()
            self.expect(")")
            return ProbQuery(a, b, span=tok.span)
        if k == "expect":
            tok = self.advance()
            self.expect("(")
            obs = self.expect("IDENT").text
            self.expect("|")
            b = self.state()
            self.expect(")")
            return ExpectQuery(obs, b, span=tok.span)
        if k == "spectrum":
            tok = self.advance()
            obs = self.expect("IDENT").text
            return SpectrumQuery(obs, span=tok.span)
        self.fail(_STMT_STARTERS)

    def obsdecl(self) -> ObservableDecl:
        tok = self.expect("observable")
        name = self.expect("IDENT").text
        self.expect("{")
        entries = [self.labelent()]
        while self.at(","):
            self.advance()
            entries.append(self.labelent())
        self.expect("}")
        return ObservableDecl(name, tuple(entries), span=tok.span)

    def labelent(self) -> tuple[str, Fraction | None]:
        label = self.expect("IDENT").text
        if not self.at(":"):
            return (label, None)
        self.advance()
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        num = self.expect("NUMBER")
        value = _number_value(num.text)
        if value.im != 0:
            raise ParseError("eigenvalue must be a real number", num.span)
        return (label, -value.re if negative else value.re)

    def jointdecl(self) -> JointDecl:
        tok = self.expect("joint")
        name = self.expect("IDENT").text
        self.expect("=")
        components = [self.expect("IDENT").text]
        self.expect("&")
        components.append(self.expect("IDENT").text)
        while self.at("&"):
            self.advance()
            components.append(self.expect("IDENT").text)
        return JointDecl(name, tuple(components), span=tok.span)

    def letbind(self) -> LetBinding:
        tok = self.expect("let")
        name = self.expect("IDENT").text
        self.expect("=")
        return LetBinding(name, self.expr(), span=tok.span)

    def expr(self) -> ExprNode:
        node = self.term()
        while self.at("+", "-"):
            op = self.advance()
            node = SumNode(op.kind, node, self.term(), span=op.span)
        return node

    def term(self) -> ExprNode:
        node = self.postfix()
        while self.at("*"):
            tok = self.advance()
            node = ProductNode(node, self.postfix(), span=tok.span)
        return node

    def postfix(self) -> ExprNode:
        node = self.atom()
        while self.at("†"):
            tok = self.advance()
            node = AdjointNode(node, span=tok.span)
        return node

    def atom(self) -> ExprNode:
        k = self.cur.kind
        if k == "I":
            tok = self.advance()
            return IdentityNode(span=tok.span)
        if k == "M":
            tok = self.advance()
            self.expect("[")
            out = self.state()
            in_ = None
            if self.at("<-"):
                self.advance()
                in_ = self.state()
            self.expect("]")
            if in_ is None:
                return FilterNode(out, span=tok.span)
            return SymbolNode(out, in_, span=tok.span)
        if k == "<":
            tok = self.advance()
            bra = self.state()
            self.expect("|")
            ket = self.state()
            self.expect(">")
            return TFNode(bra, ket, span=tok.span)
        if k == "NUMBER":
            tok = self.advance()
            return NumberNode(_number_value(tok.text), span=tok.span)
        if k == "-":
            tok = self.advance()
            return NegNode(self.atom(), span=tok.span)
        if k == "IDENT":
            tok = self.advance()
            return VarRefNode(tok.text, span=tok.span)
        if k == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if k in ("conj", "transpose"):
            tok = self.advance()
            self.expect("(")
            node = self.expr()
            self.expect(")")
            wrapper = ConjugateNode if tok.kind == "conj" else TransposeNode
            return wrapper(node, span=tok.span)
        self.fail(_ATOM_STARTERS)

    def state(self) -> StateName:
        obs = self.expect("IDENT")
        self.expect(":")
        labels = [self.expect("IDENT").text]
        while self.at(","):
            self.advance()
            labels.append(self.expect("IDENT").text)
        label = labels[0] if len(labels) == 1 else tuple(labels)
        return StateName(obs.text, label, span=obs.span)


def parse(source: str) -> list[Statement]:
    """Parse a script into a list of statements; deterministic, whitespace
    and comment insensitive."""
    return _Parser(tokenize(source)).program()


def parse_expr(source: str) -> ExprNode:
    """Parse a single expression (the whole source must be one expression)."""
    parser = _Parser(tokenize(source))
    node = parser.expr()
    parser.expect("EOF")
    return node


# --- canonical rendering -----------------------------------------------------
# Precedence levels: 1 sum, 2 product, 3 postfix/atom.  parse(render(t))
# reproduces t structurally.


def _render_number(value: ComplexRational) -> str:
    if value.im == 0:
        if value.re < 0:
            return f"-{-value.re}"
        return str(value.re)
    if value.re == 0:
        if value.im < 0:
            return f"-{-value.im}i"
        return f"{value.im}i"
    neg, text = (value.re < 0), None
    re, im = (abs(value.re), -value.im if value.re < 0 else value.im)
    sign = "+" if im > 0 else "-"
    text = f"({re}{sign}{abs(im)}i)"
    return f"-{text}" if neg else text


def render_state(state: StateName) -> str:
    label = state.label
    if isinstance(label, tuple):
        label = ",".join(label)
    return f"{state.observable}:{label}"


def _render_expr(node: ExprNode, level: int) -> str:
    if isinstance(node, SumNode):
        text = (f"{_render_expr(node.left, 1)} {node.op} "
                f"{_render_expr(node.right, 2)}")
        return f"({text})" if level > 1 else text
    if isinstance(node, ProductNode):
        text = f"{_render_expr(node.left, 2)}*{_render_expr(node.right, 3)}"
        return f"({text})" if level > 2 else text
    if isinstance(node, NegNode):
        return f"-{_render_expr(node.child, 3)}"
    if isinstance(node, AdjointNode):
        return f"{_render_expr(node.child, 3)}†"
    if isinstance(node, ConjugateNode):
        return f"conj({_render_expr(node.child, 1)})"
    if isinstance(node, TransposeNode):
        return f"transpose({_render_expr(node.child, 1)})"
    if isinstance(node, FilterNode):
        return f"M[{render_state(node.state)}]"
    if isinstance(node, SymbolNode):
        return f"M[{render_state(node.out)}<-{render_state(node.in_)}]"
    if isinstance(node, IdentityNode):
        return "I"
    if isinstance(node, TFNode):
        return f"<{render_state(node.bra)}|{render_state(node.ket)}>"
    if isinstance(node, NumberNode):
        text = _render_number(node.value)
        # A negative literal re-parses as NegNode(NumberNode); keep the
        # structure stable by parenthesizing.
        return f"(0 - {text[1:]})" if text.startswith("-") else text
    if isinstance(node, VarRefNode):
        return node.name
    raise TypeError(f"not an expression node: {node!r}")


def render_expr_node(node: ExprNode) -> str:
    return _render_expr(node, 1)


def _render_value(value: Fraction) -> str:
    return str(value)


def render_statement(stmt: Statement) -> str:
    if isinstance(stmt, ObservableDecl):
        entries = ", ".join(
            lab if val is None else f"{lab}: {_render_value(val)}"
            for lab, val in stmt.entries)
        return f"observable {stmt.name} {{ {entries} }}"
    if isinstance(stmt, JointDecl):
        return f"joint {stmt.name} = {' & '.join(stmt.components)}"
    if isinstance(stmt, LetBinding):
        return f"let {stmt.name} = {render_expr_node(stmt.expr)}"
    if isinstance(stmt, NormalizeQuery):
        return f"normalize {render_expr_node(stmt.expr)}"
    if isinstance(stmt, TraceQuery):
        return f"trace {render_expr_node(stmt.expr)}"
    if isinstance(stmt, VerifyQuery):
        return f"verify {render_expr_node(stmt.expr)}"
    if isinstance(stmt, ProbQuery):
        return f"prob({render_state(stmt.a)} | {render_state(stmt.b)})"
    if isinstance(stmt, ExpectQuery):
        return f"expect({stmt.observable} | {render_state(stmt.b)})"
    if isinstance(stmt, SpectrumQuery):
        return f"spectrum {stmt.observable}"
    raise TypeError(f"not a statement: {stmt!r}")


def render_program(stmts: list[Statement]) -> str:
    return "\n".join(render_statement(s) for s in stmts) + "\n"
