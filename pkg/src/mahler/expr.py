"""Text front-end for polynomials and rational functions.

Grammar::

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | atom ('^' signed-integer)?
    atom     := rational | 'i' | identifier | '(' expr ')'
    rational := digits ('/' digits)?

Implicit multiplication (``2x``) and floating literals are rejected.  ``i``
is the imaginary unit and cannot be used as a variable name.  A unary minus
applies to the whole power, so ``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .poly import GaussianRational, I, LaurentPoly, RationalFn, to_text

__all__ = ["ExprSyntaxError", "ExprZeroDivisionError", "ExprOverflowError", "parse", "to_text", "print_expr", "parse_poly"]

MAX_EXPONENT = 2 ** 31

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class ExprSyntaxError(ValueError):
    """Parse failure with the offending character offset."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class ExprZeroDivisionError(ExprSyntaxError, ZeroDivisionError):
    """Division by an expression that is identically zero."""


class ExprOverflowError(ExprSyntaxError, OverflowError):
    """Exponent outside [-2^31, 2^31]."""


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    out = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos,
                                  ("number", "identifier", "operator"))
        kind = m.lastgroup
        start = m.start(kind)
        text = m.group(kind)
        if kind == "num" and m.end() < n and src[m.end()] == ".":
            raise ExprSyntaxError("floating point literals are not allowed; use a rational",
                                  m.end(), ("rational",))
        out.append(_Tok(kind, text, start))
        pos = m.end()
    out.append(_Tok("end", "", n))
    return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.order: list[str] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _is(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def _expect(self, text: str) -> None:
        if not self._is(text):
            raise ExprSyntaxError(f"unexpected {self._describe()}", self.tok.pos, (repr(text),))
        self._advance()

    def _describe(self) -> str:
        t = self.tok
        return "end of input" if t.kind == "end" else repr(t.text)

    def parse(self) -> RationalFn:
        if self.tok.kind == "end":
            raise ExprSyntaxError("empty expression", 0, ("expression",))
        val = self.expr()
        if self.tok.kind != "end":
            expected = ("operator",) if self.tok.kind != "op" or self.tok.text == "(" else ("'+'", "'-'", "'*'", "'/'", "'^'")
            raise ExprSyntaxError(f"unexpected {self._describe()}", self.tok.pos, expected)
        return val

    def expr(self) -> RationalFn:
        val = self.term()
        while self._is("+") or self._is("-"):
            op = self._advance().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RationalFn:
        val = self.factor()
        while self._is("*") or self._is("/"):
            op = self._advance()
            rhs = self.factor()
            if op.text == "*":
                val = val * rhs
            else:
                val = _divide(val, rhs, op.pos)
        return val

    def factor(self) -> RationalFn:
        if self._is("-"):
            self._advance()
            return -self.factor()
        base = self.atom()
        if self._is("^"):
            self._advance()
            sign = 1
            if self._is("-") or self._is("+"):
                sign = -1 if self._advance().text == "-" else 1
            t = self.tok
            if t.kind != "num":
                raise ExprSyntaxError(f"unexpected {self._describe()}", t.pos, ("integer exponent",))
            self._advance()
            k = sign * int(t.text)
            if abs(k) > MAX_EXPONENT:
                raise ExprOverflowError(f"exponent {k} overflows |e| <= 2^31", t.pos)
            return _power(base, k, t.pos)
        return base

    def atom(self) -> RationalFn:
        t = self.tok
        if t.kind == "num":
            self._advance()
            value = GaussianRational(int(t.text))
            # rational literal p/q binds tighter than '*'
            if self._is("/") and self.toks[self.i + 1].kind == "num":
                nxt = self.toks[self.i + 1]
                if int(nxt.text) == 0:
                    raise ExprSyntaxError("zero denominator in rational literal", nxt.pos)
                if not (self.i + 2 < len(self.toks) and self.toks[self.i + 2].kind == "op"
                        and self.toks[self.i + 2].text == "^"):
                    self.i += 2
                    value = value / int(nxt.text)
            return RationalFn.of(LaurentPoly.constant(value))
        if t.kind == "name":
            self._advance()
            if t.text == "i":
                return RationalFn.of(LaurentPoly.constant(I))
            if t.text not in self.order:
                self.order.append(t.text)
            return RationalFn.of(LaurentPoly.var(t.text))
        if self._is("("):
            self._advance()
            val = self.expr()
            self._expect(")")
            return val
        raise ExprSyntaxError(f"unexpected {self._describe()}", t.pos,
                              ("number", "'i'", "identifier", "'('", "'-'"))


def _monomial_inverse(p: LaurentPoly) -> LaurentPoly | None:
    if p.is_monomial():
        return p ** -1
    return None


def _divide(a: RationalFn, b: RationalFn, pos: int) -> RationalFn:
    if b.is_zero():
        raise ExprZeroDivisionError("division by zero", pos)
    if b.is_polynomial():
        inv = _monomial_inverse(b.as_poly())
        if inv is not None:
            return RationalFn(a.num * inv, a.den)
    return a / b


def _power(base: RationalFn, k: int, pos: int) -> RationalFn:
    if k >= 0:
        return base ** k
    if base.is_zero():
        raise ExprZeroDivisionError("negative power of zero", pos)
    if base.is_polynomial():
        inv = _monomial_inverse(base.as_poly())
        if inv is not None:
            return RationalFn.of(inv ** (-k))
    return base ** k


def _canonical(p: RationalFn, order: list[str]) -> RationalFn:
    names = list(order)
    num = p.num.embed(names)
    den = p.den.embed(names) if not p.den.is_constant() else LaurentPoly.constant(p.den.constant_value())
    if den.is_constant():
        c = den.constant_value()
        num = num * (GaussianRational(1) / c)
        den = LaurentPoly.constant(1)
    return RationalFn(num, den)


def parse(src: str) -> RationalFn:
    """Parse expression text into a :class:`RationalFn`.

    Variables are ordered by first appearance.  Division by a constant or a
    monomial stays polynomial (Laurent); other divisions produce a proper
    rational function with numerator and denominator kept as written.
    """
    if not isinstance(src, str):
        raise TypeError("expression must be a string")
    p = _Parser(src)
    result = p.parse()
    return _canonical(result, p.order)


def parse_poly(src: str) -> LaurentPoly:
    """Parse text that must denote a Laurent polynomial."""
    r = parse(src)
    if not r.is_polynomial():
        raise ValueError(f"{src!r} is a proper rational function, expected a polynomial")
    return r.as_poly()


def print_expr(p) -> str:
    return to_text(p)
