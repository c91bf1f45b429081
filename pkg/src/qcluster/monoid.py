"""Submonoids of Z^N: membership, cone geometry and the maximal-order test.

A monomial subalgebra A(Phi) is a maximal order iff Phi is integrally convex
(f in the group Phi - Phi and k f in Phi imply f in Phi) and integrally
closed (its ray set is closed among the rays of Phi - Phi).

Generator form.  A finitely generated Phi spans a rational polyhedral cone C,
and the rays of Phi are exactly the rational rays of C, a closed set, so Phi
is integrally closed.  Integral convexity is equivalent to saturation,
C intersected with Phi - Phi equal to Phi: a lattice point f of C is a
nonnegative rational combination of generators, so some k f lies in Phi.
Saturation is decided on fundamental-parallelepiped points of the simplicial
cones spanned by bases drawn from the generators; these cones cover C
(Caratheodory), so checking those finitely many points is complete.

Halfspace form.  Systems of non-strict forms L_i >= 0 cut out saturated,
closed monoids.  One strict form L_1 > 0 (for f != 0) next to non-strict
forms: if some nonzero w of the non-strict cone has L_1(w) = 0 while L_1 is
positive somewhere on that cone, the ray through w is a limit of rays of
Phi without belonging to Phi, so Phi is not integrally closed.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd, lcm
from typing import Sequence

from .lattice import lattice_basis, lattice_coordinates, rank, restricted_kernel, snf
from .torus import Bicharacter, TorusElement
from .trace_ch import CharPolyReport, verify_cayley_hamilton

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Halfspace:
    coeffs: tuple[Fraction, ...]
    strict: bool = False

    def value(self, f: Sequence[int]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, f)), Fraction(0))

    def integral(self) -> tuple[int, ...]:
        """Positive multiple with coprime integer coefficients."""
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0) or 1
        return tuple(x // g for x in ints)


@dataclass(frozen=True)
class MonoidSpec:
    n: int
    generators: tuple[Vector, ...] | None = None
    halfspaces: tuple[Halfspace, ...] | None = None

    def __post_init__(self):
        if (self.generators is None) == (self.halfspaces is None):
            raise ValueError("give exactly one of generators or halfspaces")
        if self.generators is not None:
            gens = tuple(tuple(int(x) for x in g) for g in self.generators)
            if not gens:
                raise ValueError("generator list must be nonempty")
            if any(len(g) != self.n for g in gens):
                raise ValueError("generator length differs from the rank")
            object.__setattr__(self, "generators", gens)
        else:
            hs = tuple(self.halfspaces)
            for h in hs:
                if len(h.coeffs) != self.n:
                    raise ValueError("form length differs from the rank")
                if not any(h.coeffs):
                    raise ValueError("halfspace forms must be nonzero")
            object.__setattr__(self, "halfspaces", hs)

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[int]]) -> MonoidSpec:
        gens = [tuple(g) for g in gens]
        if not gens:
            raise ValueError("generator list must be nonempty")
        return cls(len(gens[0]), tuple(gens))

    @classmethod
    def from_halfspaces(cls, n: int, forms: Sequence[tuple[Sequence, bool]]) -> MonoidSpec:
        return cls(n, halfspaces=tuple(Halfspace(tuple(Fraction(c) for c in cf), bool(s)) for cf, s in forms))


_INEQ = re.compile(r"^(.*?)(>=|>)\s*0\s*$")
_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*x(\d+)")


def parse_inequality(text: str, n: int) -> Halfspace:
    """Parse ``2*x1 - x2 >= 0`` or ``x1 + 1/2*x2 > 0``."""
    m = _INEQ.match(text.strip())
    if not m:
        raise ValueError(f"expected '<form> >= 0' or '<form> > 0': {text!r}")
    body = m.group(1).replace(" ", "")
    coeffs = [Fraction(0)] * n
    pos = 0
    for t in _TERM.finditer(body):
        if t.start() != pos:
            raise ValueError(f"cannot parse form {body!r}")
        sign = -1 if t.group(1) == "-" else 1
        c = Fraction(t.group(2)) if t.group(2) else Fraction(1)
        i = int(t.group(3))
        if not 1 <= i <= n:
            raise ValueError(f"x{i} outside rank {n}")
        if pos == 0 and not t.group(1) and t.start() != 0:
            raise ValueError(f"cannot parse form {body!r}")
        coeffs[i - 1] += sign * c
        pos = t.end()
    if pos != len(body) or pos == 0:
        raise ValueError(f"cannot parse form {body!r}")
    return Halfspace(tuple(coeffs), m.group(2) == ">")


# exact rational helpers


def _primitive(v: Sequence[Fraction]) -> Vector:
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, ints, 0) or 1
    return tuple(x // g for x in ints)


def nullspace(rows: Sequence[Sequence], n: int) -> list[Vector]:
    """Primitive integer basis of {x : rows * x = 0} in Q^n."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -a[i][free]
        basis.append(_primitive(v))
    return basis


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def cone_generators(forms: Sequence[Sequence], n: int) -> tuple[list[Vector], list[Vector]]:
    """V-description of {x : form . x >= 0 for all forms}: (extreme rays, lineality basis)."""
    forms = [tuple(Fraction(x) for x in f) for f in forms]
    lin = nullspace(forms, n)
    rays: list[Vector] = []
    need = n - 1 - len(lin)
    if need < 0:
        return rays, lin
    extra = [tuple(Fraction(x) for x in l) for l in lin]
    for sub in combinations(range(len(forms)), need):
        rows = [forms[i] for i in sub] + extra
        ns = nullspace(rows, n)
        if len(ns) != 1:
            continue
        v = ns[0]
        vals = [_dot(f, v) for f in forms]
        if all(x >= 0 for x in vals):
            cand = v
        elif all(x <= 0 for x in vals):
            cand = tuple(-x for x in v)
        else:
            continue
        if any(x for x in cand) and cand not in rays:
            rays.append(cand)
    return rays, lin


def facets(gens: Sequence[Vector], r: int) -> list[Vector]:
    """Primitive inward normals of the facets of the full-dimensional cone(gens) in R^r."""
    out: list[Vector] = []
    for sub in combinations(gens, r - 1):
        ns = nullspace(sub, r) if sub else nullspace([], r)
        if len(ns) != 1:
            continue
        w = ns[0]
        vals = [_dot(w, g) for g in gens]
        if all(x >= 0 for x in vals):
            cand = w
        elif all(x <= 0 for x in vals):
            cand = tuple(-x for x in w)
        else:
            continue
        if cand not in out:
            out.append(cand)
    return out


class _Geometry:
    """Generators expressed in a basis of Phi - Phi, with facet and lineality data."""

    def __init__(self, gens: Sequence[Vector]):
        gens = [g for g in dict.fromkeys(gens)]
        self.basis = lattice_basis(gens)
        self.r = len(self.basis)
        self.coords = [tuple(lattice_coordinates(self.basis, g)) for g in gens]
        self.nonzero = [c for c in self.coords if any(c)]
        self.facets = facets(self.nonzero, self.r) if self.r else []
        self.weight = tuple(sum(w[i] for w in self.facets) for i in range(self.r))
        self.pointed_gens = [g for g in self.nonzero if _dot(self.weight, g) > 0]
        self.lineality_gens = [g for g in self.nonzero if _dot(self.weight, g) == 0]
        self.lin_basis = lattice_basis(self.lineality_gens) if self.lineality_gens else ()

    def to_coords(self, f: Sequence[int]) -> Vector | None:
        if self.r == 0:
            return () if not any(f) else None
        c = lattice_coordinates(self.basis, f)
        return tuple(c) if c is not None else None

    def to_ambient(self, c: Sequence[int]) -> Vector:
        n = len(self.basis[0]) if self.basis else 0
        return tuple(sum(c[i] * self.basis[i][j] for i in range(self.r)) for j in range(n))

    def in_cone(self, y: Sequence[int]) -> bool:
        return all(_dot(w, y) >= 0 for w in self.facets)

    def _reduce_lin(self, y: Vector) -> Vector:
        """Canonical representative of y modulo the lineality group."""
        rem = list(y)
        for row in self.lin_basis:
            piv = next(j for j, x in enumerate(row) if x)
            q = rem[piv] // row[piv]
            rem = [a - q * b for a, b in zip(rem, row)]
        return tuple(rem)

    def member(self, y: Vector) -> tuple[bool, list[int] | None]:
        """Is y (in coordinates) a nonnegative integer combination of the generators?"""
        if not self.in_cone(y):
            return False, None
        gp = self.pointed_gens
        wts = [_dot(self.weight, g) for g in gp]
        memo: dict = {}

        def search(i: int, resid: Vector, h: int):
            key = (i, self._reduce_lin(resid))
            if key in memo:
                return memo[key]
            if i == len(gp):
                ok = h == 0 and (not any(key[1]))
                memo[key] = [] if ok else None
                return memo[key]
            res = None
            for cnt in range(h // wts[i], -1, -1):
                nxt = tuple(a - cnt * b for a, b in zip(resid, gp[i]))
                sub = search(i + 1, nxt, h - cnt * wts[i])
                if sub is not None:
                    res = [cnt] + sub
                    break
            memo[key] = res
            return res

        counts = search(0, tuple(y), _dot(self.weight, y))
        return counts is not None, counts


@dataclass
class MembershipResult:
    member: bool
    reason: str
    combination: dict | None = None

    def __bool__(self):
        return self.member


def monoid_member(m: MonoidSpec, f: Sequence[int]) -> MembershipResult:
    """Decide f in Phi for a generator-form monoid, with the combination when it holds."""
    if m.generators is None:
        return _halfspace_member(m, f)
    f = tuple(int(x) for x in f)
    if not any(f):
        return MembershipResult(True, "zero", {})
    geo = _Geometry(m.generators)
    y = geo.to_coords(f)
    if y is None:
        return MembershipResult(False, "outside_group")
    if not geo.in_cone(y):
        return MembershipResult(False, "outside_cone")
    ok, counts = geo.member(y)
    if not ok:
        return MembershipResult(False, "no_combination")
    combo = {geo.to_ambient(g): c for g, c in zip(geo.pointed_gens, counts) if c}
    return MembershipResult(True, "combination", combo)


def _halfspace_member(m: MonoidSpec, f: Sequence[int]) -> MembershipResult:
    if not any(f):
        return MembershipResult(True, "zero")
    for h in m.halfspaces:
        v = h.value(f)
        if v < 0 or (h.strict and v == 0):
            return MembershipResult(False, "violates_halfspace")
    return MembershipResult(True, "satisfies_halfspaces")


def group_closure(m: MonoidSpec) -> tuple[Vector, ...]:
    """HNF basis of the group Phi - Phi (generator form)."""
    if m.generators is None:
        raise ValueError("group closure needs generator form")
    return lattice_basis(m.generators)


def parallelepiped_points(cols: Sequence[Vector]) -> list[Vector]:
    """Integer points sum_i t_i cols[i], 0 <= t_i < 1 (cols a basis of Q^r)."""
    r = len(cols)
    mat = [[cols[j][i] for j in range(r)] for i in range(r)]
    s, u, _ = snf(mat)
    # Z^r / M Z^r is represented by U^-1 applied to the box prod [0, s_i)
    uinv = _inverse_unimodular(u)
    pts = set()
    for box in product(*[range(s[i][i]) for i in range(r)]):
        p = [sum(uinv[i][j] * box[j] for j in range(r)) for i in range(r)]
        lam = _solve(mat, p)
        frac = [x - (x.numerator // x.denominator) for x in lam]
        q = tuple(int(sum(frac[j] * cols[j][i] for j in range(r))) for i in range(r))
        pts.add(q)
    return sorted(pts)


def _inverse_unimodular(u):
    r = len(u)
    cols = [_solve(u, [int(i == j) for i in range(r)]) for j in range(r)]
    return [[int(cols[j][i]) for j in range(r)] for i in range(r)]


def _solve(mat, rhs) -> list[Fraction]:
    r = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for c in range(r):
        piv = next(i for i in range(c, r) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(r):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][r] for i in range(r)]


@dataclass
class MonoidVerdict:
    integrally_convex: bool
    integrally_closed: bool
    certificate: dict = field(default_factory=dict)

    @property
    def maximal_order(self) -> bool:
        return self.integrally_convex and self.integrally_closed

    def to_dict(self) -> dict:
        return {
            "integrally_convex": self.integrally_convex,
            "integrally_closed": self.integrally_closed,
            "maximal_order": self.maximal_order,
            "certificate": self.certificate,
        }


def saturation_holes(m: MonoidSpec) -> list[Vector]:
    """Lattice points of the cone (in Phi - Phi) on the candidate list that are not in Phi."""
    geo = _Geometry(m.generators)
    if geo.r == 0:
        return []
    holes = set()
    seen = set()
    for sub in combinations(geo.nonzero, geo.r):
        if rank(list(sub)) != geo.r:
            continue
        for p in parallelepiped_points(sub):
            if not any(p) or p in seen:
                continue
            seen.add(p)
            if not geo.member(p)[0]:
                holes.add(geo.to_ambient(p))
    return sorted(holes, key=lambda v: (sum(abs(x) for x in v), v))


def classify(m: MonoidSpec) -> MonoidVerdict:
    if m.generators is not None:
        holes = saturation_holes(m)
        if holes:
            return MonoidVerdict(False, True, {"tag": "saturation_hole", "witness": list(holes[0])})
        return MonoidVerdict(True, True, {"tag": "saturated_finitely_generated"})
    return _classify_halfspaces(m)


def _classify_halfspaces(m: MonoidSpec) -> MonoidVerdict:
    strict = [h for h in m.halfspaces if h.strict]
    plain = [h.integral() for h in m.halfspaces if not h.strict]
    if not strict:
        return MonoidVerdict(True, True, {"tag": "non_strict_halfspaces"})
    if len(strict) > 1:
        raise ValueError("systems with more than one strict form are not supported")
    l1 = strict[0].integral()
    rays, lin = cone_generators(plain, m.n)
    positive_somewhere = any(_dot(l1, v) > 0 for v in rays) or any(_dot(l1, v) != 0 for v in lin)
    if not positive_somewhere:
        return MonoidVerdict(True, True, {"tag": "trivial_monoid"})
    neg = tuple(-x for x in l1)
    rays0, lin0 = cone_generators(plain + [l1, neg], m.n)
    witness = (lin0 or rays0 or [None])[0]
    if witness is None:
        # the strict form only removes the origin-free part it already excludes
        return MonoidVerdict(True, True, {"tag": "redundant_strict_form"})
    return MonoidVerdict(True, False, {"tag": "boundary_ray_missing", "witness": list(witness)})


def ch_degree_monomial(m: MonoidSpec, lam: Bicharacter) -> int:
    """sqrt([Phi - Phi : Ker(lam restricted to Phi - Phi)])."""
    basis = group_closure(m)
    return restricted_kernel(lam, basis).pi_degree


def sublattice_reduced_trace(lam: Bicharacter, basis: Sequence[Vector]):
    ker = restricted_kernel(lam, basis)
    d = ker.pi_degree

    def tr(a: TorusElement) -> TorusElement:
        return TorusElement._raw(a.lam, {f: c * d for f, c in a.terms.items() if ker.contains(f)})

    return tr, d


def sample_elements(m: MonoidSpec, lam: Bicharacter, count: int, rng: random.Random, max_terms: int = 3) -> list[TorusElement]:
    """Random elements supported in Phi: sums of small generator combinations."""
    gens = m.generators
    out = []
    for _ in range(count):
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            f = [0] * m.n
            for _ in range(rng.randint(0, 2)):
                g = rng.choice(gens)
                f = [a + b for a, b in zip(f, g)]
            terms[tuple(f)] = rng.choice([-2, -1, 1, 2, 3])
        out.append(TorusElement(lam, terms))
    return out


def monomial_ch_verify(
    m: MonoidSpec,
    lam: Bicharacter,
    samples: Sequence[TorusElement] | int = 5,
    rng: random.Random | None = None,
) -> tuple[bool, list[CharPolyReport]]:
    """CH identity for elements of A(Phi) under the reduced trace of A(Phi - Phi)."""
    if isinstance(samples, int):
        samples = sample_elements(m, lam, samples, rng or random.Random(0))
    basis = group_closure(m)
    tr, d = sublattice_reduced_trace(lam, basis)
    reports = []
    for a in samples:
        if any(lattice_coordinates(basis, f) is None for f in a.terms):
            raise ValueError("sample is not supported in the group of the monoid")
        reports.append(verify_cayley_hamilton(a, d=d, tracer=tr))
    return all(r.is_zero for r in reports), reports
