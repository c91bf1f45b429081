"""Exact integer lattice algebra: normal forms, kernels of bicharacters, compatibility.

Matrices are lists of rows of Python ints.  Sublattice bases are given as
lists of vectors (the vectors are the generators, i.e. the "columns").
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Sequence

from .torus import Bicharacter

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in zip(*m)] if m else []


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form: returns (H, U) with U unimodular and H = U * m.

    H is in row echelon form with positive pivots, entries above each pivot
    reduced into [0, pivot), and zero rows at the bottom.
    """
    h = [list(map(int, r)) for r in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant 1
            h[r], h[i] = (
                [x * s + y * t for s, t in zip(h[r], h[i])],
                [-q * s + p * t for s, t in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [x * s + y * t for s, t in zip(u[r], u[i])],
                [-q * s + p * t for s, t in zip(u[r], u[i])],
            )
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            q = h[i][c] // piv
            if q:
                h[i] = [s - q * t for s, t in zip(h[i], h[r])]
                u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def snf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns (S, U, V) with U, V unimodular and U * m * V = S.

    S is diagonal with nonnegative entries s_1 | s_2 | ... (zeros last).
    """
    s = [list(map(int, r)) for r in m]
    rows = len(s)
    cols = len(s[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        s[dst] = [a - q * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a - q * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in s:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(s[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if s[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if s[i][t]:
                    q = s[i][t] // s[t][t]
                    add_row(i, t, q)
                    if s[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    add_col(j, t, q)
                    if s[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                     if s[i][j] % s[t][t]),
                    None,
                )
                if bad is None:
                    break
                # fold the offending row in so the pivot shrinks next pass
                s[t] = [a + b for a, b in zip(s[t], s[bad[0]])]
                u[t] = [a + b for a, b in zip(u[t], u[bad[0]])]
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


@dataclass(frozen=True)
class KernelData:
    """Ker(lam) as a lattice: ``basis`` rows generate it inside the ambient lattice."""

    basis: tuple[tuple[int, ...], ...]
    index: int
    pi_degree: int

    def contains(self, f: Sequence[int]) -> bool:
        return lattice_contains(self.basis, f)


def _kernel_from_gram(gram: Sequence[Sequence[int]], ell: int) -> tuple[Matrix, int]:
    """Coefficient vectors h (as rows) spanning {h : gram * h == 0 mod ell}, and the index."""
    n = len(gram)
    s, _, v = snf(gram)
    basis_cols = []
    index = 1
    for i in range(n):
        si = s[i][i] if i < len(s) else 0
        step = ell // gcd(si, ell)
        index *= step
        basis_cols.append([v[r][i] * step for r in range(n)])
    return basis_cols, index


def _to_kernel_data(vectors: Matrix, index: int) -> KernelData:
    d = isqrt(index)
    if d * d != index:
        raise ArithmeticError(f"kernel index {index} is not a perfect square")
    h, _ = hnf(vectors)
    basis = tuple(tuple(r) for r in h if any(r))
    return KernelData(basis, index, d)


def kernel_mod_ell(lam: Bicharacter) -> KernelData:
    """Ker(lam) = {f : lam(f, g) = 0 for all g}, its index in Z^N and d = sqrt(index).

    Uses U lam V = S: lam f = 0 mod ell iff s_i h_i = 0 mod ell for h = V^-1 f.
    """
    if lam.n == 0:
        return KernelData((), 1, 1)
    vectors, index = _kernel_from_gram([list(r) for r in lam.entries], lam.ell)
    return _to_kernel_data(vectors, index)


def restricted_kernel(lam: Bicharacter, sub: Sequence[Sequence[int]]) -> KernelData:
    """Kernel of lam restricted to the sublattice spanned by ``sub`` (independent vectors).

    The basis is returned in ambient Z^N coordinates; the index is taken
    inside the sublattice.
    """
    sub = [list(map(int, v)) for v in sub]
    if not sub:
        return KernelData((), 1, 1)
    if rank(sub) != len(sub):
        raise ValueError("sublattice generators must be linearly independent")
    gram = [[lam(u, w) for w in sub] for u in sub]
    coeffs, index = _kernel_from_gram(gram, lam.ell)
    ambient = [[sum(c[i] * sub[i][j] for i in range(len(sub))) for j in range(lam.n)] for c in coeffs]
    return _to_kernel_data(ambient, index)


def rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    h, _ = hnf(vectors)
    return sum(1 for r in h if any(r))


def lattice_basis(vectors: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """HNF basis (rows) of the lattice generated by the given vectors."""
    if not vectors:
        return ()
    h, _ = hnf(vectors)
    return tuple(tuple(r) for r in h if any(r))


def lattice_contains(basis: Sequence[Sequence[int]], f: Sequence[int]) -> bool:
    """Is f in the lattice spanned by an HNF basis (echelon rows)?"""
    rem = list(f)
    for row in basis:
        piv = next((j for j, x in enumerate(row) if x), None)
        if piv is None:
            continue
        if rem[piv] % row[piv]:
            return False
        q = rem[piv] // row[piv]
        rem = [a - q * b for a, b in zip(rem, row)]
    return not any(rem)


def lattice_coordinates(basis: Sequence[Sequence[int]], f: Sequence[int]) -> list[int] | None:
    """Integer coefficients of f in an HNF basis, or None if f is outside."""
    rem = list(f)
    coords = []
    for row in basis:
        piv = next(j for j, x in enumerate(row) if x)
        if rem[piv] % row[piv]:
            return None
        q = rem[piv] // row[piv]
        coords.append(q)
        rem = [a - q * b for a, b in zip(rem, row)]
    return coords if not any(rem) else None


def diag_entries(dmat) -> list[int]:
    """Accept either a diagonal matrix or a list of its diagonal entries."""
    if dmat and isinstance(dmat[0], (list, tuple)):
        n = len(dmat)
        for i in range(n):
            if len(dmat[i]) != n:
                raise ValueError("D must be square")
            for j in range(n):
                if i != j and dmat[i][j]:
                    raise ValueError("D must be diagonal")
        entries = [int(dmat[i][i]) for i in range(n)]
    else:
        entries = [int(x) for x in dmat]
    if any(x <= 0 for x in entries):
        raise ValueError("D must have a positive diagonal")
    return entries


def check_skew_symmetrizable(btilde: Sequence[Sequence[int]], ex: Sequence[int], dvals: Sequence[int]) -> bool:
    """D * B skew-symmetric, B the principal (ex x ex) part of btilde."""
    for a, i in enumerate(ex):
        for b, _ in enumerate(ex):
            if dvals[a] * btilde[i][b] != -dvals[b] * btilde[ex[b]][a]:
                return False
    return True


def check_compatible(
    lam: Bicharacter,
    btilde: Sequence[Sequence[int]],
    dmat,
    ell: int | None = None,
    ex: Sequence[int] | None = None,
) -> bool:
    """lam^T * btilde == [D; 0] entrywise mod ell (column j belongs to index ex[j])."""
    if ell is None:
        ell = lam.ell
    n = lam.n
    if len(btilde) != n:
        raise ValueError("btilde must have N rows")
    m = len(btilde[0]) if n else 0
    if ex is None:
        ex = list(range(m))
    ex = list(ex)
    dvals = diag_entries(dmat)
    if len(dvals) != m or len(ex) != m:
        raise ValueError("D size must match the number of exchangeable indices")
    if not check_skew_symmetrizable(btilde, ex, dvals):
        raise ValueError("D * B is not skew-symmetric")
    for i in range(n):
        for j in range(m):
            val = sum(lam.entries[r][i] * btilde[r][j] for r in range(n))
            target = dvals[j] if i == ex[j] else 0
            if (val - target) % ell:
                return False
    return True


def check_coprime_condition(ell: int, dmat) -> bool:
    dvals = diag_entries(dmat) if dmat else []
    return ell % 2 == 1 and all(gcd(ell, x) == 1 for x in dvals)


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int, rng: random.Random | None):
    """One solution of rows * x == rhs over F_p (free variables random or zero)."""
    nvar = len(rows[0]) if rows else 0
    a = [[x % p for x in r] + [b % p] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(nvar):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(row[nvar] for row in a[r:]):
        return None
    x = [0] * nvar
    free = [c for c in range(nvar) if c not in pivots]
    for c in free:
        x[c] = rng.randrange(p) if rng else 0
    for i, c in enumerate(pivots):
        x[c] = (a[i][nvar] - sum(a[i][j] * x[j] for j in free)) % p
    return x


def find_compatible_lambda(
    btilde: Sequence[Sequence[int]],
    dmat,
    ell: int,
    ex: Sequence[int] | None = None,
    rng: random.Random | None = None,
) -> Bicharacter | None:
    """A bicharacter compatible with (btilde, D) mod a prime ell, or None."""
    n = len(btilde)
    m = len(btilde[0]) if n else 0
    ex = list(range(m)) if ex is None else list(ex)
    dvals = diag_entries(dmat)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    col = {pr: t for t, pr in enumerate(pairs)}
    rows, rhs = [], []
    for i in range(n):
        for j in range(m):
            # sum_r lam[r][i] * b[r][j]; lam[r][i] = +x_(r,i) if r<i, -x_(i,r) if r>i
            eq = [0] * len(pairs)
            for r in range(n):
                if r < i:
                    eq[col[(r, i)]] += btilde[r][j]
                elif r > i:
                    eq[col[(i, r)]] -= btilde[r][j]
            rows.append(eq)
            rhs.append(dvals[j] if i == ex[j] else 0)
    if not pairs:
        return Bicharacter.zero(n, ell) if not any(rhs) else None
    sol = _solve_mod_p(rows, rhs, ell, rng)
    if sol is None:
        return None
    mat = [[0] * n for _ in range(n)]
    for (i, j), x in zip(pairs, sol):
        mat[i][j] = x
        mat[j][i] = -x
    return Bicharacter.from_matrix(mat, ell)
