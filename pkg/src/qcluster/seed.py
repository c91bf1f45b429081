"""Root-of-unity quantum seeds and their mutation.

Frames are stored in the coordinates of the initial (root) torus.  A new
cluster variable is obtained as the exact left quotient of Q_1 by the old one,
because x_k * y_k = Q_1.  Indices are 0-based throughout; column j of
``btilde`` belongs to the j-th smallest exchangeable index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .lattice import check_compatible, check_coprime_condition, diag_entries
from .torus import (
    Bicharacter,
    IndexProfile,
    NotDivisible,
    TorusElement,
    exact_left_divide,
    monomial,
    mul,
    normalized_product,
)

IntMatrix = tuple[tuple[int, ...], ...]


def _as_matrix(m: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in m)


def mutate_btilde(btilde: Sequence[Sequence[int]], k: int, ex: Sequence[int] | None = None) -> IntMatrix:
    """Exchange-matrix mutation at the exchangeable index k (a row index)."""
    n = len(btilde)
    m = len(btilde[0]) if n else 0
    ex = list(range(m)) if ex is None else sorted(ex)
    if k not in ex:
        raise ValueError(f"index {k} is not exchangeable")
    c = ex.index(k)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            b = btilde[i][j]
            if i == k or j == c:
                row.append(-b)
            else:
                bic, bkj = btilde[i][c], btilde[k][j]
                row.append(b + (abs(bic) * bkj + bic * abs(bkj)) // 2)
        out.append(tuple(row))
    return tuple(out)


def _column(btilde: Sequence[Sequence[int]], k: int, ex: Sequence[int]) -> list[int]:
    c = sorted(ex).index(k)
    return [row[c] for row in btilde]


def mutate_lambda(lam: Bicharacter, btilde: Sequence[Sequence[int]], k: int, ex: Sequence[int] | None = None) -> Bicharacter:
    """lam' = E^T lam E, E the identity with column k replaced by ([b_ik]_+, E_kk = -1)."""
    n = lam.n
    m = len(btilde[0]) if n else 0
    ex = list(range(m)) if ex is None else sorted(ex)
    if k not in ex:
        raise ValueError(f"index {k} is not exchangeable")
    b = _column(btilde, k, ex)
    e = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        e[i][k] = -1 if i == k else max(b[i], 0)
    lm = lam.entries
    le = [[sum(lm[i][r] * e[r][j] for r in range(n)) for j in range(n)] for i in range(n)]
    out = [[sum(e[r][i] * le[r][j] for r in range(n)) for j in range(n)] for i in range(n)]
    return Bicharacter.from_matrix(out, lam.ell)


@dataclass(frozen=True)
class Seed:
    idx: IndexProfile
    btilde: IntMatrix
    lam: Bicharacter
    dvals: tuple[int, ...]
    frame: tuple[TorusElement, ...]
    path: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.idx.n

    @property
    def ell(self) -> int:
        return self.lam.ell

    @property
    def ex(self) -> list[int]:
        return sorted(self.idx.ex)

    @property
    def initial_lam(self) -> Bicharacter:
        return self.frame[0].lam

    def column(self, k: int) -> list[int]:
        return _column(self.btilde, k, self.ex)

    def frame_value(self, f: Sequence[int]) -> TorusElement:
        """M(f) for f >= 0, in initial coordinates."""
        return normalized_product(self.lam, self.frame, f)

    def key(self) -> tuple:
        return (self.btilde, self.lam.entries, self.dvals, tuple(x.key() for x in self.frame))

    def is_compatible(self) -> bool:
        return check_compatible(self.lam, self.btilde, list(self.dvals), self.ell, self.ex)

    def quasi_commutation_holds(self) -> bool:
        """frame[i] frame[j] == z^(2 lam_ij) frame[j] frame[i] for all i < j."""
        z = self.lam.ctx.zeta
        for i in range(self.n):
            for j in range(i + 1, self.n):
                a, b = self.frame[i], self.frame[j]
                if mul(a, b) != mul(b, a).scale(z(2 * self.lam.entries[i][j])):
                    return False
        return True

    def check_invariants(self) -> None:
        if not self.is_compatible():
            raise AssertionError("seed is not compatible")
        if not self.quasi_commutation_holds():
            raise AssertionError("frame does not quasi-commute according to lam")


def make_seed(
    btilde: Sequence[Sequence[int]],
    lam: Bicharacter | Sequence[Sequence[int]],
    dvals,
    ell: int | None = None,
    ex: Sequence[int] | None = None,
    inv: Sequence[int] = (),
) -> Seed:
    """Root seed: frame X^(e_i) in the torus of lam, empty path."""
    if not isinstance(lam, Bicharacter):
        if ell is None:
            raise ValueError("ell is required when lam is given as a matrix")
        lam = Bicharacter.from_matrix(lam, ell)
    n = lam.n
    btilde = _as_matrix(btilde)
    if len(btilde) != n:
        raise ValueError("btilde must have N rows")
    m = len(btilde[0]) if n else 0
    if ex is None:
        ex = range(m)
    idx = IndexProfile(n, frozenset(ex), frozenset(inv))
    if len(idx.ex) != m:
        raise ValueError("btilde must have one column per exchangeable index")
    dv = tuple(diag_entries(dvals)) if m else ()
    if not check_compatible(lam, btilde, list(dv), lam.ell, sorted(idx.ex)):
        raise ValueError("(lam, btilde, D) is not compatible")
    frame = tuple(monomial(lam, tuple(int(i == j) for j in range(n))) for i in range(n))
    return Seed(idx, btilde, lam, dv, frame, ())


def a2_seed(ell: int) -> Seed:
    """The rank-2 seed with btilde = lam = [[0, 1], [-1, 0]] and D = I."""
    b = ((0, 1), (-1, 0))
    return make_seed(b, b, (1, 1), ell)


def _check_exchangeable(s: Seed, k: int):
    if k not in s.idx.ex:
        raise ValueError(f"index {k} is frozen or out of range")


def q_element(s: Seed, k: int, n: int) -> TorusElement:
    """Q_n = z^(n lam(e_k, b+)) M(b+) + z^(-n lam(e_k, b-)) M(-b-), in initial coordinates."""
    _check_exchangeable(s, k)
    b = s.column(k)
    bp = [max(x, 0) for x in b]
    bm = [min(x, 0) for x in b]
    ek = [int(i == k) for i in range(s.n)]
    z = s.lam.ctx.zeta
    first = s.frame_value(bp).scale(z(n * s.lam(ek, bp)))
    second = s.frame_value([-x for x in bm]).scale(z(-n * s.lam(ek, bm)))
    return first + second


def new_variable(s: Seed, k: int) -> TorusElement:
    """M(-e_k + [b]_+) + M(-e_k - [b]_-), as the left quotient of Q_1 by frame[k]."""
    q1 = q_element(s, k, 1)
    try:
        return exact_left_divide(s.frame[k], q1)
    except NotDivisible as exc:  # Laurent phenomenon violated: a broken invariant
        raise AssertionError(f"exchange relation not divisible at index {k}") from exc


def mutate_seed(s: Seed, k: int, check: bool = False) -> Seed:
    _check_exchangeable(s, k)
    y = new_variable(s, k)
    frame = s.frame[:k] + (y,) + s.frame[k + 1:]
    out = Seed(
        s.idx,
        mutate_btilde(s.btilde, k, s.ex),
        mutate_lambda(s.lam, s.btilde, k, s.ex),
        s.dvals,
        frame,
        s.path + (k,),
    )
    if check:
        out.check_invariants()
    return out


def mutate_word(s: Seed, word: Sequence[int], check: bool = False) -> Seed:
    for k in word:
        s = mutate_seed(s, k, check)
    return s


def ell_power_check(s: Seed, k: int, ell: int | None = None) -> bool:
    """x_k^ell y_k^ell == prod_{b>0} (x_i^ell)^b + prod_{b<0} (x_i^ell)^-b, exactly."""
    if ell is None:
        ell = s.ell
    if ell != s.ell:
        raise ValueError("ell does not match the seed")
    if not check_coprime_condition(ell, list(s.dvals)):
        raise ValueError("the coprime condition fails; the identity is not asserted")
    _check_exchangeable(s, k)
    y = new_variable(s, k)
    lhs = mul(s.frame[k] ** ell, y ** ell)
    b = s.column(k)
    one = TorusElement.one(s.initial_lam)
    pos, neg = one, one
    for i, bi in enumerate(b):
        if bi > 0:
            pos = mul(pos, s.frame[i] ** (ell * bi))
        elif bi < 0:
            neg = mul(neg, s.frame[i] ** (-ell * bi))
    return lhs == pos + neg
