"""Tokenizer and recursive-descent parser for the textual expression syntax.

One grammar serves scalar literals (group file entries), form literals (CLI
input) and the group file structure itself:

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | base ("^" INT)?
    base   := INT | "z" | "sqrt" "(" INT ")" | "(" expr ")" | VAR

where VAR (x0, x1, ...) is only allowed when parsing forms. Values are
evaluated directly into sparse polynomials over Q(zeta_N); a scalar is the
nvars = 0 case. Unary minus binds looser than "^", so -z^2 means -(z^2)
as in ordinary mathematical writing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .cyclotomic import CycScalar, CyclotomicField, sqrt_int
from .errors import ParseError
from .forms import Form, monomial_basis

__all__ = ["Token", "tokenize", "ExprParser", "parse_scalar", "parse_form"]

_OPS = set("+-*/^(){};,")


@dataclass(frozen=True)
class Token:
    kind: str  # INT | NAME | STRING | OP | EOF
    value: object
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
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
        start_col = col
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise ParseError("unterminated string", line, start_col)
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line, start_col)
            tokens.append(Token("STRING", text[i + 1 : j], line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word.isdigit():
                tokens.append(Token("INT", int(word), line, start_col))
            else:
                tokens.append(Token("NAME", word, line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            tokens.append(Token("OP", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", None, line, col))
    return tokens


# A sparse polynomial value: exponent tuple (length nvars) -> CycScalar.
Poly = dict


class ExprParser:
    """Evaluating parser over a token stream; reusable by the group-file
    parser, which hands over mid-stream positions."""

    def __init__(
        self,
        tokens: list[Token],
        field: CyclotomicField,
        nvars: int = 0,
        pos: int = 0,
    ) -> None:
        self.tokens = tokens
        self.field = field
        self.nvars = nvars
        self.pos = pos
        self._zero_key = (0,) * nvars

    # -- token helpers ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect_op(self, op: str) -> Token:
        t = self.next()
        if t.kind != "OP" or t.value != op:
            raise ParseError(f"expected {op!r}, got {t.value!r}", t.line, t.col)
        return t

    def _fail(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    # -- poly helpers -------------------------------------------------------

    def _const(self, s: CycScalar) -> Poly:
        return {self._zero_key: s} if s else {}

    def _add(self, a: Poly, b: Poly, sign: int) -> Poly:
        out = dict(a)
        for k, v in b.items():
            w = v if sign > 0 else -v
            cur = out.get(k)
            s = w if cur is None else cur + w
            if s:
                out[k] = s
            elif cur is not None:
                del out[k]
        return out

    def _mul(self, a: Poly, b: Poly) -> Poly:
        out: Poly = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                term = va * vb
                cur = out.get(key)
                s = term if cur is None else cur + term
                if s:
                    out[key] = s
                elif cur is not None:
                    del out[key]
        return out

    def _as_const(self, a: Poly, tok: Token, what: str) -> CycScalar:
        if not a:
            return self.field.zero
        if len(a) == 1 and self._zero_key in a:
            return a[self._zero_key]
        raise ParseError(f"{what} must be a constant", tok.line, tok.col)

    # -- grammar ---------------------------------------------------------------

    def parse_expr(self) -> Poly:
        acc = self.parse_term()
        while True:
            t = self.peek()
            if t.kind == "OP" and t.value in "+-":
                self.next()
                rhs = self.parse_term()
                acc = self._add(acc, rhs, 1 if t.value == "+" else -1)
            else:
                return acc

    def parse_term(self) -> Poly:
        acc = self.parse_factor()
        while True:
            t = self.peek()
            if t.kind == "OP" and t.value in "*/":
                self.next()
                rhs = self.parse_factor()
                if t.value == "*":
                    acc = self._mul(acc, rhs)
                else:
                    den = self._as_const(rhs, t, "divisor")
                    if not den:
                        raise ParseError("division by zero", t.line, t.col)
                    acc = self._mul(acc, self._const(den.inverse()))
            else:
                return acc

    def parse_factor(self) -> Poly:
        t = self.peek()
        if t.kind == "OP" and t.value == "-":
            self.next()
            inner = self.parse_factor()
            return {k: -v for k, v in inner.items()}
        base = self.parse_base()
        t = self.peek()
        if t.kind == "OP" and t.value == "^":
            self.next()
            e = self.next()
            if e.kind != "INT":
                raise ParseError("exponent must be an integer", e.line, e.col)
            acc = self._const(self.field.one)
            for _ in range(e.value):
                acc = self._mul(acc, base)
            return acc
        return base

    def parse_base(self) -> Poly:
        t = self.next()
        if t.kind == "INT":
            return self._const(self.field.rational(t.value))
        if t.kind == "OP" and t.value == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if t.kind == "NAME":
            name = t.value
            if name == "z":
                return self._const(self.field.zeta)
            if name == "sqrt":
                self.expect_op("(")
                arg = self.next()
                if arg.kind != "INT":
                    raise ParseError("sqrt takes an integer", arg.line, arg.col)
                self.expect_op(")")
                try:
                    return self._const(sqrt_int(self.field.N, arg.value))
                except Exception as exc:
                    raise ParseError(str(exc), t.line, t.col) from exc
            if (
                len(name) >= 2
                and name[0] == "x"
                and name[1:].isdigit()
                and self.nvars > 0
            ):
                j = int(name[1:])
                if j >= self.nvars:
                    raise ParseError(
                        f"variable {name} out of range (nvars={self.nvars})",
                        t.line,
                        t.col,
                    )
                key = tuple(1 if i == j else 0 for i in range(self.nvars))
                return {key: self.field.one}
            raise ParseError(f"unknown name {name!r}", t.line, t.col)
        raise ParseError(f"unexpected token {t.value!r}", t.line, t.col)


def parse_scalar(text: str, conductor: int) -> CycScalar:
    field = CyclotomicField(conductor)
    parser = ExprParser(tokenize(text), field, nvars=0)
    poly = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "EOF":
        raise ParseError(f"trailing input {tail.value!r}", tail.line, tail.col)
    return parser._as_const(poly, tail, "scalar expression")


def parse_form(
    text: str, conductor: int, n_plus_1: int = 4, degree: Optional[int] = None
) -> Form:
    field = CyclotomicField(conductor)
    parser = ExprParser(tokenize(text), field, nvars=n_plus_1)
    poly = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "EOF":
        raise ParseError(f"trailing input {tail.value!r}", tail.line, tail.col)
    degrees = {sum(k) for k in poly}
    if not poly:
        d = degree if degree is not None else 0
        return Form.zero(field, monomial_basis(n_plus_1, d))
    if len(degrees) > 1:
        raise ParseError(
            f"form is not homogeneous (degrees {sorted(degrees)})", tail.line, tail.col
        )
    d = degrees.pop()
    if degree is not None and d != degree:
        raise ParseError(f"expected degree {degree}, got {d}", tail.line, tail.col)
    return Form.from_exponent_dict(field, n_plus_1, d, poly)
