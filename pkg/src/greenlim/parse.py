"""Parser for the polynomial text syntax.

Grammar (``e`` is the family parameter, ``z1 .. zn`` the ring variables)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*       # '/' only by a nonzero constant
    factor := atom ('^' INT)?
    atom   := INT | 'z' INT | 'e' | '(' expr ')'

Juxtaposition (``2z1``, ``z1 z2``) is rejected.
"""

from __future__ import annotations

import re

from .errors import ParseError, VariableCountMismatch
from .poly import EPS, EpsPoly, MultiPoly, drop_eps, is_eps_free

_TOKEN = re.compile(r"\s*(?:(\d+)|z(\d+)|(e)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character at %d in %r" % (pos, text))
        num, var, eps, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif var is not None:
            if int(var) < 1:
                raise ParseError("variables are numbered from z1")
            out.append(("var", var))
        elif eps is not None:
            out.append(("eps", "e"))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def max_variable_index(text: str) -> int:
    return max((int(v) for k, v in _tokenize(text) if k == "var"), default=0)


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.n = nvars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op: str) -> None:
        kind, val = self.take()
        if (kind, val) != ("op", op):
            raise ParseError("expected %r in %r" % (op, self.text))

    def parse(self) -> MultiPoly:
        if not self.toks:
            raise ParseError("empty polynomial")
        f = self.expr()
        if self.i != len(self.toks):
            kind, val = self.peek()
            if kind in ("num", "var", "eps") or (kind, val) == ("op", "("):
                raise ParseError("juxtaposition is not allowed; use '*' (%r)" % self.text)
            raise ParseError("trailing input %r in %r" % (val, self.text))
        return f

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> MultiPoly:
        f = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            g = self.factor()
            if op == "*":
                f = f * g
            else:
                if not g or not is_eps_free(g) or g.total_degree() != 0:
                    raise ParseError("division only by a nonzero constant in %r" % self.text)
                c = drop_eps(g).coefficient((0,) * self.n)
                f = f * EpsPoly.const(1 / c)
        return f

    def factor(self) -> MultiPoly:
        f = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer in %r" % self.text)
            f = f ** int(val)
        return f

    def atom(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.constant(EpsPoly.const(int(val)), self.n, EPS)
        if kind == "var":
            i = int(val) - 1
            if i >= self.n:
                raise VariableCountMismatch("z%s used in a ring of %d variables" % (val, self.n))
            return MultiPoly.var(i, self.n, EPS)
        if kind == "eps":
            return MultiPoly.constant(EpsPoly.eps(), self.n, EPS)
        if (kind, val) == ("op", "("):
            f = self.expr()
            self.expect(")")
            return f
        raise ParseError("unexpected %r in %r" % (val, self.text))


def parse_poly(text: str, nvars: int | None = None) -> MultiPoly:
    """Parse into a polynomial with Q[e] coefficients."""
    if nvars is None:
        nvars = max(max_variable_index(text), 1)
    return _Parser(text, nvars).parse()


def parse_qq(text: str, nvars: int | None = None) -> MultiPoly:
    """Parse an e-free polynomial into QQ coefficients."""
    f = parse_poly(text, nvars)
    if not is_eps_free(f):
        raise ParseError("%r depends on the parameter e" % text)
    return drop_eps(f)


def parse_eps_poly(text: str) -> EpsPoly:
    """Parse a point coordinate such as ``e^2`` or ``3*e - 1/2*e^2``."""
    f = parse_poly(text, 1)
    if any(exp != (0,) for exp in f.terms):
        raise ParseError("coordinate %r must not involve z variables" % text)
    return f.terms.get((0,), EpsPoly())
