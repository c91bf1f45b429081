"""Parser for element expressions such as ``x1^-1 + z*x1^-1*x2``.

``z`` is the root of unity, ``x<i>`` the i-th generator X^(e_i) (1-based).
Products are taken in the algebra, left to right, so ``x1^-1*x2`` is
X^(-1,0) X^(0,1), not the basis monomial X^(-1,1).  The accepted language is
a superset of what ``format_element`` prints: + - * ^ (integer exponents),
division by integers and parentheses.
"""

from __future__ import annotations

import re

from .cyclotomic import CycRat
from .torus import Bicharacter, TorusElement, monomial

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(z)|([-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("x", int(m.group(3)), start))
        elif m.group(4):
            toks.append(("z", None, start))
        else:
            toks.append((m.group(5), None, start))
        pos = m.end(0)
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, lam: Bicharacter):
        self.toks = _tokenize(text)
        self.i = 0
        self.lam = lam

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> TorusElement:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        val = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[0]!r}", tok[2])
        return val

    def sum(self) -> TorusElement:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        val = self.product()
        if sign < 0:
            val = -val
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.product()
            val = val + rhs if op == "+" else val - rhs
        return val

    def product(self) -> TorusElement:
        val = self.power()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            if op == "*":
                val = val * self.power()
            else:
                tok = self.take("int")
                if tok[1] == 0:
                    raise ParseError("division by zero", tok[2])
                val = val.scale(CycRat.from_int(self.lam.ctx, 1) / tok[1])
        return val

    def power(self) -> TorusElement:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] in ("+", "-"):
                sign = -1 if self.take()[0] == "-" else 1
            tok = self.take("int")
            exp = sign * tok[1]
            if exp < 0 and not base.is_monomial():
                raise ParseError("negative power of a non-monomial", tok[2])
            base = base ** exp
        return base

    def atom(self) -> TorusElement:
        kind, val, pos = self.take()
        lam = self.lam
        if kind == "int":
            return TorusElement.one(lam).scale(val) if val else TorusElement.zero(lam)
        if kind == "z":
            return TorusElement.one(lam).scale(lam.ctx.zeta(1))
        if kind == "x":
            if not 1 <= val <= lam.n:
                raise ParseError(f"generator x{val} outside rank {lam.n}", pos)
            return monomial(lam, tuple(int(j == val - 1) for j in range(lam.n)))
        if kind == "(":
            inner = self.sum()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {kind!r}", pos)


def parse_element(text: str, lam: Bicharacter) -> TorusElement:
    """Parse an expression into an element of the torus of ``lam``."""
    return _Parser(text, lam).parse()
