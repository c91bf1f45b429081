"""Sparse exact arithmetic in the root-of-unity quantum torus.

The torus attached to a skew-symmetric bicharacter ``lam`` (values in
Z/ell) has basis X^f, f in Z^N, with X^f X^g = z^lam(f,g) X^(f+g), where z is
a primitive ell-th root of unity.  Elements are finite maps from exponent
tuples to nonzero ``CycRat`` coefficients.  All indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycContext, CycInt, CycRat, cyc_context, format_poly

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class Bicharacter:
    """Skew-symmetric bicharacter Z^N x Z^N -> Z/ell, entries lifted to [0, ell)."""

    ell: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be positive")
        rows = tuple(tuple(int(x) % self.ell for x in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("bicharacter matrix must be square")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValueError("bicharacter must have zero diagonal mod ell")
            for j in range(i + 1, n):
                if (rows[i][j] + rows[j][i]) % self.ell:
                    raise ValueError("bicharacter must be skew-symmetric mod ell")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]], ell: int) -> Bicharacter:
        return cls(ell, tuple(tuple(r) for r in matrix))

    @classmethod
    def zero(cls, n: int, ell: int) -> Bicharacter:
        return cls(ell, tuple((0,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def ctx(self) -> CycContext:
        return cyc_context(self.ell)

    def __call__(self, f: Sequence[int], g: Sequence[int]) -> int:
        m = self.entries
        total = 0
        for i, fi in enumerate(f):
            if fi:
                row = m[i]
                for j, gj in enumerate(g):
                    if gj:
                        total += fi * row[j] * gj
        return total % self.ell

    def signed(self) -> list[list[int]]:
        """Entries lifted to the symmetric range (-ell/2, ell/2]."""
        half = self.ell // 2
        return [[x - self.ell if x > half else x for x in row] for row in self.entries]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def restrict(self, basis: Sequence[Sequence[int]]) -> Bicharacter:
        """Gram matrix on the given vectors (a sublattice basis)."""
        return Bicharacter(
            self.ell, tuple(tuple(self(u, v) for v in basis) for u in basis)
        )


@dataclass(frozen=True)
class IndexProfile:
    """Exchangeable and inverted-frozen index sets (0-based)."""

    n: int
    ex: frozenset = field(default_factory=frozenset)
    inv: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "ex", frozenset(self.ex))
        object.__setattr__(self, "inv", frozenset(self.inv))
        if self.ex & self.inv:
            raise ValueError("exchangeable and inverted index sets must be disjoint")
        if any(not 0 <= i < self.n for i in self.ex | self.inv):
            raise ValueError("index out of range")

    @classmethod
    def all_exchangeable(cls, n: int) -> IndexProfile:
        return cls(n, frozenset(range(n)))

    @property
    def frozen(self) -> frozenset:
        return frozenset(range(self.n)) - self.ex

    @property
    def nonneg(self) -> frozenset:
        """Frozen, non-inverted positions (exponents there must be >= 0)."""
        return frozenset(range(self.n)) - self.ex - self.inv


class NotDivisible(ArithmeticError):
    """Raised by exact division when no exact quotient exists in the torus."""

    def __init__(self, message: str, remainder_lead: Exponent | None = None):
        super().__init__(message)
        self.remainder_lead = remainder_lead


def _order_key(e: Exponent):
    return (sum(e), e)


class TorusElement:
    """Finite sum of c_f X^f in the torus of ``lam``.

    Supports +, -, scalar multiplication, and * / ** inside the same torus.
    Treat instances as immutable.
    """

    __slots__ = ("lam", "terms", "_hash")

    def __init__(self, lam: Bicharacter, terms: Mapping[Exponent, object] | None = None):
        self.lam = lam
        clean = {}
        if terms:
            ctx = lam.ctx
            n = lam.n
            for f, c in terms.items():
                f = tuple(int(x) for x in f)
                if len(f) != n:
                    raise ValueError(f"exponent {f} does not have length {n}")
                c = CycRat.coerce(ctx, c)
                if not c.is_zero():
                    prev = clean.get(f)
                    clean[f] = c if prev is None else prev + c
            clean = {f: c for f, c in clean.items() if not c.is_zero()}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, lam: Bicharacter, terms: dict) -> TorusElement:
        obj = cls.__new__(cls)
        obj.lam = lam
        obj.terms = terms
        obj._hash = None
        return obj

    # construction helpers
    @classmethod
    def zero(cls, lam: Bicharacter) -> TorusElement:
        return cls._raw(lam, {})

    @classmethod
    def one(cls, lam: Bicharacter) -> TorusElement:
        return cls.monomial(lam, (0,) * lam.n)

    @classmethod
    def monomial(cls, lam: Bicharacter, f: Sequence[int], c=1) -> TorusElement:
        return cls(lam, {tuple(f): c})

    @property
    def n(self) -> int:
        return self.lam.n

    @property
    def ctx(self) -> CycContext:
        return self.lam.ctx

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def support(self) -> set[Exponent]:
        return set(self.terms)

    def coefficient(self, f: Sequence[int]) -> CycRat:
        c = self.terms.get(tuple(f))
        return c if c is not None else CycRat.from_int(self.ctx, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading_term(self) -> tuple[Exponent, CycRat]:
        f = max(self.terms, key=_order_key)
        return f, self.terms[f]

    def with_lambda(self, lam: Bicharacter) -> TorusElement:
        """Reinterpret the same coefficient map in another torus of equal rank."""
        if lam.n != self.lam.n or lam.ell != self.lam.ell:
            raise ValueError("rank/ell mismatch")
        return TorusElement._raw(lam, dict(self.terms))

    def map_terms(self, fn) -> TorusElement:
        """Apply ``fn(f, c) -> (f', c')`` termwise and re-collect."""
        out: dict = {}
        for f, c in self.terms.items():
            g, d = fn(f, c)
            _accumulate(out, g, d)
        return TorusElement._raw(self.lam, _prune(out))

    def _check(self, other: TorusElement):
        if other.lam != self.lam:
            raise ValueError("operands live in different quantum tori")

    def _coerce_scalar(self, other):
        if isinstance(other, (int, Fraction, CycInt, CycRat)):
            return CycRat.coerce(self.ctx, other)
        return None

    def __add__(self, other):
        if not isinstance(other, TorusElement):
            s = self._coerce_scalar(other)
            if s is None:
                return NotImplemented
            other = TorusElement._raw(self.lam, {(0,) * self.n: s} if s else {})
        self._check(other)
        out = dict(self.terms)
        for f, c in other.terms.items():
            _accumulate(out, f, c)
        return TorusElement._raw(self.lam, _prune(out))

    __radd__ = __add__

    def __neg__(self):
        return TorusElement._raw(self.lam, {f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TorusElement):
            s = self._coerce_scalar(other)
            if s is None:
                return NotImplemented
            return self + (-s)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> TorusElement:
        s = CycRat.coerce(self.ctx, s)
        if s.is_zero():
            return TorusElement.zero(self.lam)
        return TorusElement._raw(self.lam, {f: c * s for f, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TorusElement):
            return mul(self, other)
        s = self._coerce_scalar(other)
        if s is None:
            return NotImplemented
        return self.scale(s)

    def __rmul__(self, other):
        s = self._coerce_scalar(other)
        if s is None:
            return NotImplemented
        return self.scale(s)

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have inverses in the torus")
            return monomial_inverse(self) ** (-k)
        result = TorusElement.one(self.lam)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def __eq__(self, other):
        if isinstance(other, TorusElement):
            return self.lam == other.lam and self.terms == other.terms
        s = self._coerce_scalar(other)
        if s is None:
            return NotImplemented
        if s.is_zero():
            return not self.terms
        return self.terms == {(0,) * self.n: s}

    def same_terms(self, other: TorusElement) -> bool:
        """Coefficient-map equality ignoring which torus the element lives in."""
        return self.terms == other.terms

    def key(self) -> tuple:
        """Canonical totally ordered key (ignores the bicharacter)."""
        return tuple(sorted((f, c.key()) for f, c in self.terms.items()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"TorusElement({format_element(self)})"


def _accumulate(out: dict, f: Exponent, c: CycRat):
    prev = out.get(f)
    out[f] = c if prev is None else prev + c


def _prune(out: dict) -> dict:
    return {f: c for f, c in out.items() if not c.is_zero()}


def _times_zeta(c: CycRat, e: int) -> CycRat:
    if e == 0:
        return c
    return CycRat(c.num * c.ctx.zeta(e), c.den, _normalized=True)


def monomial(lam: Bicharacter, f: Sequence[int], c=1) -> TorusElement:
    """The element c * X^f."""
    return TorusElement.monomial(lam, f, c)


def mul(a: TorusElement, b: TorusElement, lam: Bicharacter | None = None) -> TorusElement:
    """Exact product in the torus of ``lam`` (defaults to the operands' torus)."""
    if lam is None:
        lam = a.lam
    if a.lam != lam or b.lam != lam:
        raise ValueError("rank/context mismatch")
    if not a.terms or not b.terms:
        return TorusElement.zero(lam)
    ell = lam.ell
    m = lam.entries
    n = lam.n
    zeta = lam.ctx.zeta
    out: dict = {}
    bt = list(b.terms.items())
    for f, c in a.terms.items():
        row = [sum(f[i] * m[i][j] for i in range(n) if f[i]) for j in range(n)]
        for g, d in bt:
            e = sum(row[j] * g[j] for j in range(n)) % ell
            h = tuple(x + y for x, y in zip(f, g))
            num = c.num * d.num
            if e:
                num = num * zeta(e)
            cd = CycRat(num, c.den * d.den) if (c.den != 1 or d.den != 1) else CycRat(num, 1, _normalized=True)
            prev = out.get(h)
            out[h] = cd if prev is None else prev + cd
    return TorusElement._raw(lam, _prune(out))


def monomial_inverse(a: TorusElement) -> TorusElement:
    (f, c), = a.terms.items()
    g = tuple(-x for x in f)
    # X^f X^-f = X^0, so (c X^f)^-1 = c^-1 X^-f
    return TorusElement._raw(a.lam, {g: c.inverse()})


def power(a: TorusElement, k: int) -> TorusElement:
    return a ** k


def normalized_product(lam: Bicharacter, gens: Sequence[TorusElement], f: Sequence[int]) -> TorusElement:
    """z^(-sum_{i<j} lam_ij f_i f_j) * gens[0]^f_0 * ... * gens[N-1]^f_(N-1).

    ``lam`` is the frame's bicharacter; the products are taken in the torus
    the generators live in.  With gens[i] = M(e_i) this is the frame value M(f).
    """
    if len(gens) != lam.n or len(f) != lam.n:
        raise ValueError("need one generator and one exponent per index")
    if any(x < 0 for x in f):
        raise ValueError("normalized_product needs a nonnegative exponent vector")
    n = lam.n
    corr = 0
    for i in range(n):
        for j in range(i + 1, n):
            corr += lam.entries[i][j] * f[i] * f[j]
    host = gens[0].lam
    result = TorusElement.one(host)
    for g, k in zip(gens, f):
        if k:
            result = mul(result, g ** k)
    return result.scale(host.ctx.zeta(-corr))


def exact_left_divide(u: TorusElement, w: TorusElement, lam: Bicharacter | None = None) -> TorusElement:
    """Return v with u * v == w exactly, or raise ``NotDivisible``.

    Peels leading terms in a graded-lex order.  A quotient, if it exists, has
    support inside the box [min(w) - min(u), max(w) - max(u)] coordinatewise
    (Newton polytopes add under products), so a peeled term leaving that box
    certifies that no quotient exists; this also bounds the loop.
    """
    if lam is None:
        lam = u.lam
    if u.lam != lam or w.lam != lam:
        raise ValueError("rank/context mismatch")
    if u.is_zero():
        raise ZeroDivisionError("division by the zero element")
    if w.is_zero():
        return TorusElement.zero(lam)
    n = lam.n
    us, ws = list(u.terms), list(w.terms)
    lo = [min(f[i] for f in ws) - min(f[i] for f in us) for i in range(n)]
    hi = [max(f[i] for f in ws) - max(f[i] for f in us) for i in range(n)]
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisible("support box of the quotient is empty", max(ws, key=_order_key))
    lead_u, lc_u = u.leading_term()
    lc_u_inv = lc_u.inverse()
    u_items = list(u.terms.items())
    ell = lam.ell
    zeta = lam.ctx.zeta
    rem = dict(w.terms)
    quot: dict = {}
    while rem:
        e = max(rem, key=_order_key)
        c = rem[e]
        t = tuple(x - y for x, y in zip(e, lead_u))
        if any(not (a <= x <= b) for a, x, b in zip(lo, t, hi)):
            raise NotDivisible(f"remainder term at {e} cannot be cancelled", e)
        ct = _times_zeta(c * lc_u_inv, -lam(lead_u, t))
        quot[t] = ct
        for f, d in u_items:
            h = tuple(x + y for x, y in zip(f, t))
            term = _times_zeta(d * ct, lam(f, t))
            prev = rem.get(h)
            val = -term if prev is None else prev - term
            if val.is_zero():
                rem.pop(h, None)
            else:
                rem[h] = val
        if e in rem:
            raise ArithmeticError("leading term failed to cancel")
    return TorusElement._raw(lam, quot)


def support(a: TorusElement) -> set[Exponent]:
    return set(a.terms)


def newton_vertices(a: TorusElement | Iterable[Exponent]) -> set[Exponent]:
    """Vertices of the convex hull of the support."""
    pts = sorted(set(a.terms) if isinstance(a, TorusElement) else set(map(tuple, a)))
    if len(pts) <= 2:
        return set(pts)
    if len(pts[0]) == 1:
        return {pts[0], pts[-1]}
    if len(pts[0]) == 2:
        return set(_hull_2d(pts))
    return _vertices_general(pts)


def _det(m) -> int:
    """Integer determinant by fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) // prev
        prev = a[c][c]
    return sign * a[n - 1][n - 1] if n else 1


def _rank(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c] / rows[r][c]
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def _vertices_general(pts):
    dim = len(pts[0])
    base = pts[0]
    if _rank([[x - y for x, y in zip(p, base)] for p in pts[1:]]) < dim:
        return {p for p in pts if not _in_hull(p, [q for q in pts if q != p])}
    # full-dimensional: collect facet normals from d-subsets spanning a
    # supporting hyperplane; p is a vertex iff its facet normals have rank d
    through = {p: [] for p in pts}
    seen = set()
    for sub in combinations(pts, dim):
        diffs = [[x - y for x, y in zip(q, sub[0])] for q in sub[1:]]
        normal = tuple((-1) ** i * _det([r[:i] + r[i + 1:] for r in diffs]) for i in range(dim))
        if not any(normal):
            continue
        h = sum(a * b for a, b in zip(normal, sub[0]))
        vals = [sum(a * b for a, b in zip(normal, p)) for p in pts]
        if all(v <= h for v in vals):
            pass
        elif all(v >= h for v in vals):
            normal, h = tuple(-x for x in normal), -h
        else:
            continue
        g = reduce(gcd, normal)
        normal, h = tuple(x // g for x in normal), h // g
        if normal in seen:
            continue
        seen.add(normal)
        for p in pts:
            if sum(a * b for a, b in zip(normal, p)) == h:
                through[p].append(normal)
    return {p for p in pts if len(through[p]) >= dim and _rank(through[p]) == dim}


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts):
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _solve_exact(cols: list[Sequence[int]], target: Sequence[int]):
    """Solve sum_j x_j cols[j] = target over Q; None if inconsistent or singular."""
    m = len(target)
    k = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                fac = rows[i][c]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, m)):
        return None
    return [rows[i][k] for i in range(k)]


def _in_hull(p, others) -> bool:
    """Exact convex-hull membership via Caratheodory subsets (small inputs only)."""
    dim = len(p)
    for size in range(1, min(dim + 1, len(others)) + 1):
        for sub in combinations(others, size):
            cols = [tuple(q) + (1,) for q in sub]
            sol = _solve_exact(cols, tuple(p) + (1,))
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def minkowski_sum(a: Iterable[Exponent], b: Iterable[Exponent]) -> set[Exponent]:
    bl = list(b)
    return {tuple(x + y for x, y in zip(f, g)) for f in a for g in bl}


def component_split(a: TorusElement, k: int) -> dict[int, TorusElement]:
    """Split a = sum_n X^(n e_k) * a_n with every a_n free of index k."""
    lam = a.lam
    out: dict[int, dict] = {}
    for f, c in a.terms.items():
        nk = f[k]
        g = f[:k] + (0,) + f[k + 1:]
        shift = [0] * lam.n
        shift[k] = nk
        # X^(n e_k) X^g = z^lam(n e_k, g) X^f
        coeff = _times_zeta(c, -lam(shift, g))
        out.setdefault(nk, {})[g] = coeff
    return {nk: TorusElement._raw(lam, terms) for nk, terms in out.items()}


def join_components(lam: Bicharacter, parts: Mapping[int, TorusElement], k: int) -> TorusElement:
    """Inverse of ``component_split``: sum_n X^(n e_k) * parts[n]."""
    total = TorusElement.zero(lam)
    for nk, a in parts.items():
        shift = [0] * lam.n
        shift[k] = nk
        total = total + mul(monomial(lam, shift), a.with_lambda(lam) if a.lam != lam else a)
    return total


def in_mixed_torus(a: TorusElement, idx: IndexProfile) -> bool:
    nonneg = idx.nonneg
    return all(f[j] >= 0 for f in a.terms for j in nonneg)


def in_ell_power_subring(a: TorusElement, ell: int | None = None, idx: IndexProfile | None = None) -> bool:
    if ell is None:
        ell = a.lam.ell
    if any(x % ell for f in a.terms for x in f):
        return False
    return idx is None or in_mixed_torus(a, idx)


def _format_scalar(c: CycRat) -> tuple[int, str]:
    """Sign and magnitude text of a coefficient for expression output."""
    nz = [x for x in c.num.coeffs if x]
    if len(nz) == 1 and nz[0] < 0:
        body = format_poly(tuple(-x for x in c.num.coeffs))
        sign = -1
    else:
        body = format_poly(c.num.coeffs)
        sign = 1
    if len(nz) > 1 and (c.den != 1):
        body = f"({body})"
    if c.den != 1:
        body = f"{body}/{c.den}"
    return sign, body


def format_element(a: TorusElement) -> str:
    """Render as ordered products of generators, e.g. ``x1^-1 + z*x1^-1*x2``.

    The coefficient of X^f is rescaled so that the printed ordered product
    x1^f1 * ... * xN^fN denotes exactly the same element.
    """
    if not a.terms:
        return "0"
    lam = a.lam
    n = lam.n
    pieces = []
    for f in sorted(a.terms, key=_order_key):
        c = a.terms[f]
        corr = sum(lam.entries[i][j] * f[i] * f[j] for i in range(n) for j in range(i + 1, n))
        # X^f = z^(-corr) x1^f1...xN^fN
        c = _times_zeta(c, -corr)
        factors = []
        for i, e in enumerate(f):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e:
                factors.append(f"x{i + 1}^{e}")
        nz = sum(1 for x in c.num.coeffs if x)
        sign, body = _format_scalar(c)
        if factors:
            if nz > 1 and c.den == 1:
                body = f"({body})"
            mono = "*".join(factors)
            text = mono if body == "1" else f"{body}*{mono}"
        else:
            text = f"({body})" if nz > 1 and c.den == 1 and len(a.terms) > 1 else body
        pieces.append((sign, text))
    out = []
    for i, (sign, text) in enumerate(pieces):
        if i == 0:
            out.append(text if sign > 0 else f"-{text}")
        else:
            out.append(f"+ {text}" if sign > 0 else f"- {text}")
    return " ".join(out)
