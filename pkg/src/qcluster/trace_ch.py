"""Traces on a quantum torus and Cayley-Hamilton verification.

All traces act on elements written in one seed's coordinates (a TorusElement
whose bicharacter is that seed's).  With Ker = Ker(lam) and d = d(lam):

    regular (over the ell-th power subring)   X^f -> ell^N X^f   if f in (ell Z)^N
    regular over the full center              X^f -> d^2 X^f     if f in Ker
    reduced                                   X^f -> d X^f       if f in Ker
    standard                                  d * reduced
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Callable, Sequence

from .cyclotomic import CycRat
from .membership import SeedCoordinates, convert_edge, kernel_of
from .seed import Seed
from .torus import Bicharacter, TorusElement, monomial, mul


class TraceKind(str, Enum):
    REGULAR = "regular"
    REGULAR_CENTER = "regular_center"
    REDUCED = "reduced"
    STANDARD = "standard"


def tr_regular(a: TorusElement, ell: int | None = None) -> TorusElement:
    """Trace of left multiplication over the ell-th power subring (rank ell^N)."""
    ell = a.lam.ell if ell is None else ell
    scale = ell ** a.lam.n
    return TorusElement._raw(
        a.lam,
        {f: c * scale for f, c in a.terms.items() if all(x % ell == 0 for x in f)},
    )


def _kernel_filter(a: TorusElement, scale: int) -> TorusElement:
    ker = kernel_of(a.lam)
    return TorusElement._raw(a.lam, {f: c * scale for f, c in a.terms.items() if ker.contains(f)})


def tr_regular_center(a: TorusElement) -> TorusElement:
    """Trace of left multiplication over the full center (rank d^2)."""
    d = kernel_of(a.lam).pi_degree
    return _kernel_filter(a, d * d)


def tr_reduced(a: TorusElement) -> TorusElement:
    return _kernel_filter(a, kernel_of(a.lam).pi_degree)


def tr_standard(a: TorusElement) -> TorusElement:
    d = kernel_of(a.lam).pi_degree
    return tr_reduced(a).scale(d)


def trace(a: TorusElement, kind: TraceKind | str) -> TorusElement:
    kind = TraceKind(kind)
    if kind is TraceKind.REGULAR:
        return tr_regular(a)
    if kind is TraceKind.REGULAR_CENTER:
        return tr_regular_center(a)
    if kind is TraceKind.REDUCED:
        return tr_reduced(a)
    return tr_standard(a)


def default_degree(lam: Bicharacter, kind: TraceKind | str) -> int:
    kind = TraceKind(kind)
    if kind is TraceKind.REGULAR:
        return lam.ell ** lam.n
    d = kernel_of(lam).pi_degree
    return d if kind is TraceKind.REDUCED else d * d


def newton_sigma(psi: Sequence[TorusElement]) -> list[TorusElement]:
    """sigma_1..sigma_d from power sums: sigma_i = (1/i) sum_j (-1)^(j-1) sigma_(i-j) psi_j."""
    if not psi:
        return []
    lam = psi[0].lam
    sigma = [TorusElement.one(lam)]
    for i in range(1, len(psi) + 1):
        acc = TorusElement.zero(lam)
        for j in range(1, i + 1):
            term = mul(sigma[i - j], psi[j - 1])
            acc = acc + term if j % 2 else acc - term
        sigma.append(acc.scale(CycRat.from_int(lam.ctx, 1) / i))
    return sigma[1:]


@dataclass
class CharPolyReport:
    degree: int
    kind: str
    psi: list[TorusElement]
    sigma: list[TorusElement]
    residual: TorusElement

    @property
    def is_zero(self) -> bool:
        return self.residual.is_zero()

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "kind": self.kind,
            "psi": [str(x) for x in self.psi],
            "sigma": [str(x) for x in self.sigma],
            "residual": str(self.residual),
            "is_zero": self.is_zero,
        }


def verify_cayley_hamilton(
    a: TorusElement,
    kind: TraceKind | str = TraceKind.REDUCED,
    d: int | None = None,
    tracer: Callable[[TorusElement], TorusElement] | None = None,
) -> CharPolyReport:
    """Evaluate chi_(d,a)(a) = sum_i (-1)^i sigma_i a^(d-i) exactly.

    ``tracer`` replaces the named trace (then ``d`` is required).
    """
    kind = TraceKind(kind)
    if tracer is None:
        tracer = lambda x: trace(x, kind)  # noqa: E731
        label = kind.value
    else:
        if d is None:
            raise ValueError("a custom trace needs an explicit degree")
        label = "custom"
    if d is None:
        d = default_degree(a.lam, kind)
    if d <= 0:
        raise ValueError("degree must be positive")
    powers = [TorusElement.one(a.lam)]
    for _ in range(d):
        powers.append(mul(powers[-1], a))
    psi = [tracer(powers[i]) for i in range(1, d + 1)]
    sigma = newton_sigma(psi)
    chi = powers[d]
    for i in range(1, d + 1):
        term = mul(sigma[i - 1], powers[d - i])
        chi = chi - term if i % 2 else chi + term
    return CharPolyReport(d, label, psi, sigma, chi)


def trace_agreement(u: SeedCoordinates, k: int, kind: TraceKind | str, target: Seed | None = None) -> bool:
    """tr at A converted to B = mu_k(A) equals tr at B of u converted to B.

    Raises ``NotMember`` when u (or its trace) has no expansion at B.
    """
    at_b = convert_edge(u, k, target)
    tr_a = trace(u.element, kind)
    tr_a_at_b = convert_edge(SeedCoordinates(u.seed, tr_a), k, at_b.seed)
    return tr_a_at_b.element == trace(at_b.element, kind)


# Independent matrix route (rank 2, odd ell): clock/shift representation over the center.


def _laurent_ring(lam: Bicharacter) -> Bicharacter:
    return Bicharacter.zero(2, lam.ell)


def matrix_representation(a: TorusElement) -> list[list[TorusElement]]:
    """d x d matrix of a under X1 -> t1 U, X2 -> t2 V, entries commutative Laurent in t.

    U = diag(q^i), V the cyclic shift, q = z^(2 lam_12), so U V = q V U, matching
    X1 X2 = z^(2 lam_12) X2 X1.  X^g = z^(-lam_12 g1 g2) X1^g1 X2^g2.
    """
    lam = a.lam
    if lam.n != 2 or lam.ell % 2 == 0:
        raise ValueError("the matrix route needs rank 2 and odd ell")
    d = kernel_of(lam).pi_degree
    lam12 = lam.entries[0][1]
    ring = _laurent_ring(lam)
    z = lam.ctx.zeta
    zero = TorusElement.zero(ring)
    mat = [[zero for _ in range(d)] for _ in range(d)]
    for (g1, g2), c in a.terms.items():
        coeff = c * CycRat.coerce(lam.ctx, z(-lam12 * g1 * g2))
        # U^g1 V^g2 e_j = q^(g1 (j + g2)) e_(j + g2)
        for j in range(d):
            i = (j + g2) % d
            entry = monomial(ring, (g1, g2), coeff * CycRat.coerce(lam.ctx, z(2 * lam12 * g1 * (j + g2))))
            mat[i][j] = mat[i][j] + entry
    return mat


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def matrix_charpoly(a: TorusElement) -> list[TorusElement]:
    """Coefficients e_0..e_d of det(t I - A) = sum_i e_i t^(d-i), mapped back to the center."""
    mat = matrix_representation(a)
    d = len(mat)
    ring = mat[0][0].lam
    one = TorusElement.one(ring)
    # polynomial in t: list of ring elements, index = power of t
    entries = [[[-mat[i][j]] + ([one] if i == j else []) for j in range(d)] for i in range(d)]
    total = [TorusElement.zero(ring) for _ in range(d + 1)]
    for p in permutations(range(d)):
        prod = [one]
        for i in range(d):
            poly = entries[i][p[i]]
            new = [TorusElement.zero(ring) for _ in range(len(prod) + len(poly) - 1)]
            for x, px in enumerate(prod):
                if not px:
                    continue
                for y, py in enumerate(poly):
                    if py:
                        new[x + y] = new[x + y] + mul(px, py)
            prod = new
        sign = _perm_sign(p)
        for deg, c in enumerate(prod):
            total[deg] = total[deg] + (c if sign > 0 else -c)
    lam = a.lam
    lam12 = lam.entries[0][1]
    z = lam.ctx.zeta
    out = []
    for i in range(d + 1):
        coeff = total[d - i]
        back = {}
        for (g1, g2), c in coeff.terms.items():
            if g1 % d or g2 % d:
                raise ArithmeticError("characteristic polynomial coefficient is not central")
            # t1^g1 t2^g2 stands for X1^g1 X2^g2 = z^(lam_12 g1 g2) X^g
            back[(g1, g2)] = c * CycRat.coerce(lam.ctx, z(lam12 * g1 * g2))
        out.append(TorusElement._raw(lam, back))
    return out


def matrix_crosscheck(a: TorusElement) -> bool:
    """Matrix charpoly coefficients equal (-1)^i sigma_i from the reduced trace."""
    coeffs = matrix_charpoly(a)
    d = len(coeffs) - 1
    rep = verify_cayley_hamilton(a, TraceKind.REDUCED, d)
    for i in range(1, d + 1):
        expect = rep.sigma[i - 1] if i % 2 == 0 else -rep.sigma[i - 1]
        if coeffs[i] != expect:
            return False
    return coeffs[0] == TorusElement.one(a.lam)
