"""Exact arithmetic in Z[z] and Q(z), z a primitive ell-th root of unity.

Elements are residues modulo the ell-th cyclotomic polynomial, stored as
integer coefficient tuples of length phi(ell) (lowest degree first).
``CycRat`` adds a single positive integer denominator.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Union


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials with monic ``den``; raise if not exact."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(len(num) - dn, 1)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(ell: int) -> tuple[int, ...]:
    """Coefficients of Phi_ell, lowest degree first."""
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    poly = [-1] + [0] * (ell - 1) + [1]
    for d in range(1, ell):
        if ell % d == 0:
            poly = _poly_divmod_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class CycContext:
    """The ring Z[x]/(Phi_ell) together with cached reduction data."""

    __slots__ = ("ell", "phi", "degree", "_reduce_rows", "_zeta", "_one", "_zero")

    def __init__(self, ell: int):
        if ell < 1:
            raise ValueError("ell must be a positive integer")
        self.ell = ell
        self.phi = cyclotomic_polynomial(ell)
        self.degree = len(self.phi) - 1
        deg = self.degree
        # x^j mod Phi for deg <= j < 2*deg - 1, as coefficient lists of length deg
        rows = []
        cur = [-c for c in self.phi[:deg]]  # x^deg
        for _ in range(max(deg - 1, 0)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(deg):
                    cur[j] -= top * self.phi[j]
        self._reduce_rows = rows
        self._zero = CycInt(self, (0,) * deg)
        self._one = CycInt(self, (1,) + (0,) * (deg - 1))
        self._zeta = tuple(CycInt(self, self._reduce_monomial(k)) for k in range(ell))

    def _reduce_monomial(self, k: int) -> tuple[int, ...]:
        deg = self.degree
        coeffs = [0] * deg
        cur = [0] * deg
        cur[0] = 1
        for _ in range(k):
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(deg):
                    cur[j] -= top * self.phi[j]
        coeffs[:] = cur
        return tuple(coeffs)

    def reduce(self, coeffs) -> tuple[int, ...]:
        """Canonical residue of an integer polynomial of degree < 2*deg - 1."""
        deg = self.degree
        out = list(coeffs[:deg]) + [0] * (deg - len(coeffs[:deg]))
        for i in range(deg, len(coeffs)):
            c = coeffs[i]
            if c:
                row = self._reduce_rows[i - deg]
                for j in range(deg):
                    out[j] += c * row[j]
        return tuple(out)

    def zero(self) -> CycInt:
        return self._zero

    def one(self) -> CycInt:
        return self._one

    def zeta(self, k: int = 1) -> CycInt:
        return self._zeta[k % self.ell]

    def __eq__(self, other):
        return isinstance(other, CycContext) and other.ell == self.ell

    def __hash__(self):
        return hash(("CycContext", self.ell))

    def __repr__(self):
        return f"CycContext(ell={self.ell})"


@lru_cache(maxsize=None)
def cyc_context(ell: int) -> CycContext:
    return CycContext(ell)


def zeta_pow(ctx: CycContext, k: int) -> CycInt:
    """z^k as a canonical residue; k is taken modulo ell."""
    return ctx.zeta(k)


Scalar = Union[int, "CycInt", "CycRat", Fraction]


class CycInt:
    """Element of Z[z]; immutable."""

    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx: CycContext, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)
        self._hash = None

    @classmethod
    def from_int(cls, ctx: CycContext, n: int) -> CycInt:
        return cls(ctx, (n,) + (0,) * (ctx.degree - 1))

    @classmethod
    def from_poly(cls, ctx: CycContext, coeffs) -> CycInt:
        """Reduce an arbitrary integer polynomial in z (lowest degree first)."""
        deg = ctx.degree
        acc = [0] * deg
        for k, c in enumerate(coeffs):
            if c:
                z = ctx.zeta(k).coeffs
                for j in range(deg):
                    acc[j] += c * z[j]
        return cls(ctx, acc)

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.ctx.ell != self.ctx.ell:
                raise ValueError("context mismatch")
            return other
        if isinstance(other, int):
            return CycInt.from_int(self.ctx, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.ctx, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        deg = self.ctx.degree
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycInt(self.ctx, self.ctx.reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a cyclotomic integer")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(self.ctx, other)
        if isinstance(other, CycRat):
            return other == self
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.ctx.ell == other.ctx.ell and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            if all(c == 0 for c in self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.ctx.ell, self.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return format_poly(self.coeffs)

    def __repr__(self):
        return f"CycInt(ell={self.ctx.ell}, {format_poly(self.coeffs)})"


def format_poly(coeffs, var: str = "z") -> str:
    """Render integer coefficients as ``1 - 2*z^2`` style text."""
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


class CycRat:
    """Element of Q(z) written num/den with den > 0 and gcd(content(num), den) = 1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: CycInt, den: int = 1, *, _normalized: bool = False):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if den < 0:
                num, den = -num, -den
            g = gcd(num.content(), den)
            if g > 1:
                num = CycInt(num.ctx, tuple(c // g for c in num.coeffs))
                den //= g
            elif g == 0:
                den = 1
        self.num = num
        self.den = den
        self._hash = None

    @property
    def ctx(self) -> CycContext:
        return self.num.ctx

    @classmethod
    def from_int(cls, ctx: CycContext, n: int) -> CycRat:
        return cls(CycInt.from_int(ctx, n), 1, _normalized=True)

    @classmethod
    def from_fraction(cls, ctx: CycContext, q: Fraction) -> CycRat:
        return cls(CycInt.from_int(ctx, q.numerator), q.denominator)

    @classmethod
    def coerce(cls, ctx: CycContext, value) -> CycRat:
        if isinstance(value, CycRat):
            if value.ctx.ell != ctx.ell:
                raise ValueError("context mismatch")
            return value
        if isinstance(value, CycInt):
            if value.ctx.ell != ctx.ell:
                raise ValueError("context mismatch")
            return cls(value, 1, _normalized=True)
        if isinstance(value, int):
            return cls.from_int(ctx, value)
        if isinstance(value, Fraction):
            return cls.from_fraction(ctx, value)
        raise TypeError(f"cannot coerce {type(value).__name__} to CycRat")

    def _coerce(self, other):
        try:
            return CycRat.coerce(self.ctx, other)
        except TypeError:
            return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den == 1

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return CycRat(self.num + other.num, self.den)
        return CycRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CycRat(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def div_int(self, i: int) -> CycRat:
        return cycrat_div_by_int(self, i)

    def inverse(self) -> CycRat:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv_num, inv_den = _inverse_cycint(self.num.ctx.ell, self.num.coeffs)
        return CycRat(CycInt(self.ctx, inv_num) * self.den, inv_den)

    def __truediv__(self, other):
        if isinstance(other, int):
            return cycrat_div_by_int(self, other) if other > 0 else -cycrat_div_by_int(self, -other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return CycRat(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, CycInt, Fraction)):
            other = CycRat.coerce(self.ctx, other)
        if not isinstance(other, CycRat):
            return NotImplemented
        return (
            self.ctx.ell == other.ctx.ell
            and self.den == other.den
            and self.num.coeffs == other.num.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den)) if self.den != 1 else hash(self.num)
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def key(self) -> tuple:
        """Totally ordered canonical key."""
        return (self.num.coeffs, self.den)

    def __str__(self):
        body = format_poly(self.num.coeffs)
        if self.den == 1:
            return body
        if sum(1 for c in self.num.coeffs if c) > 1:
            body = f"({body})"
        return f"{body}/{self.den}"

    def __repr__(self):
        return f"CycRat(ell={self.ctx.ell}, {self})"


def cycrat_div_by_int(a: CycRat, i: int) -> CycRat:
    """Exact division by a positive integer, in lowest terms."""
    if i == 0:
        raise ZeroDivisionError("division by zero")
    if i < 0:
        raise ValueError("divisor must be positive")
    return CycRat(a.num, a.den * i)


@lru_cache(maxsize=4096)
def _inverse_cycint(ell: int, coeffs: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Inverse of a nonzero element of Z[z] in Q(z), as (numerator coeffs, denominator)."""
    ctx = cyc_context(ell)
    deg = ctx.degree
    a = CycInt(ctx, coeffs)
    # column j is a * z^j; solve M s = e_0 over Q
    cols = [(a * ctx.zeta(j)).coeffs for j in range(deg)]
    rows = [[Fraction(cols[j][i]) for j in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
    for c in range(deg):
        piv = next(r for r in range(c, deg) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c][c]
        rows[c] = [x / p for x in rows[c]]
        for r in range(deg):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    sol = [rows[i][deg] for i in range(deg)]
    den = 1
    for q in sol:
        den = den * q.denominator // gcd(den, q.denominator)
    return tuple(int(q * den) for q in sol), den


def to_cycrat(ctx: CycContext, value: Scalar) -> CycRat:
    return CycRat.coerce(ctx, value)
