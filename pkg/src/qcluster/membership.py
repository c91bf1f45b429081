"""Conversion of elements between adjacent seeds and membership oracles.

An element in the coordinates of seed A is written u = sum_n x_k^n a_n with
a_n free of index k.  In the coordinates of B = mu_k(A) it is sum_m y_k^m c_m,
where c_0 = a_0, c_-n = Q_-1 Q_-3 ... Q_(-2n+1) a_n for n > 0 and
a_-m = Q_(2m-1) ... Q_3 Q_1 c_m for m > 0.  The last relation needs an exact
division; when it fails, u has no expansion in the B torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .lattice import KernelData, kernel_mod_ell
from .seed import Seed, mutate_seed
from .torus import (
    NotDivisible,
    TorusElement,
    component_split,
    exact_left_divide,
    in_ell_power_subring,
    in_mixed_torus,
    monomial,
    mul,
)


class NotMember(ArithmeticError):
    """No expansion exists in the target seed's torus.

    ``path`` is the mutation word of the seed where conversion failed (the
    target of the failing edge), ``k`` the edge label and ``power`` the m for
    which a_-m is not left divisible by Q_(2m-1)...Q_1.
    """

    def __init__(self, path: tuple[int, ...], k: int, power: int, divisor: TorusElement, dividend: TorusElement):
        self.path = path
        self.k = k
        self.power = power
        self.divisor = divisor
        self.dividend = dividend
        super().__init__(
            f"not in the torus of seed {list(path)}: Q-product for m={power} does not divide a_-{power}"
        )

    def certificate(self) -> dict:
        return {
            "seed_path": [k + 1 for k in self.path],
            "edge": self.k + 1,
            "m": self.power,
            "divisor": str(self.divisor),
            "dividend": str(self.dividend),
        }


@dataclass(frozen=True)
class SeedCoordinates:
    """An element expanded in the basis X^f of a seed's own torus (lam = seed.lam)."""

    seed: Seed
    element: TorusElement

    def __post_init__(self):
        if self.element.lam != self.seed.lam:
            raise ValueError("coordinates must live in the seed's torus")


def root_coordinates(root: Seed, u: TorusElement) -> SeedCoordinates:
    if root.path:
        raise ValueError("expected a root seed")
    return SeedCoordinates(root, u)


def q_in_coordinates(s: Seed, k: int, n: int) -> TorusElement:
    """Q_n written in the seed's own coordinates (frame values M(f) = X^f)."""
    lam = s.lam
    b = s.column(k)
    bp = [max(x, 0) for x in b]
    bm = [min(x, 0) for x in b]
    ek = [int(i == k) for i in range(s.n)]
    z = lam.ctx.zeta
    return monomial(lam, bp, z(n * lam(ek, bp))) + monomial(lam, [-x for x in bm], z(-n * lam(ek, bm)))


def convert_edge(u: SeedCoordinates, k: int, target: Seed | None = None) -> SeedCoordinates:
    """Coordinates of the same element at mu_k(seed); raises ``NotMember``."""
    a_seed = u.seed
    if k not in a_seed.idx.ex:
        raise ValueError(f"index {k} is frozen or out of range")
    b_seed = target if target is not None else mutate_seed(a_seed, k)
    lam_a, lam_b = a_seed.lam, b_seed.lam
    parts = component_split(u.element, k)
    q_cache: dict[int, TorusElement] = {}

    def q(n: int) -> TorusElement:
        if n not in q_cache:
            q_cache[n] = q_in_coordinates(a_seed, k, n)
        return q_cache[n]

    result = TorusElement.zero(lam_b)
    for n in sorted(parts):
        a_n = parts[n]
        if n == 0:
            c, m = a_n, 0
        elif n > 0:
            # c_-n = Q_-1 Q_-3 ... Q_(-2n+1) a_n
            c = a_n
            for j in range(n, 0, -1):
                c = mul(q(-2 * j + 1), c)
            m = -n
        else:
            m = -n
            # a_-m = Q_(2m-1) ... Q_3 Q_1 c_m; peel the outer factors first
            c = a_n
            try:
                for j in range(m, 0, -1):
                    c = exact_left_divide(q(2 * j - 1), c)
            except NotDivisible:
                divisor = TorusElement.one(lam_a)
                for j in range(1, m + 1):
                    divisor = mul(q(2 * j - 1), divisor)
                raise NotMember(b_seed.path, k, m, divisor, a_n) from None
        shift = [0] * b_seed.n
        shift[k] = m
        result = result + mul(monomial(lam_b, shift), c.with_lambda(lam_b))
    return SeedCoordinates(b_seed, result)


class PathConverter:
    """Converts one element along many mutation words, caching shared prefixes."""

    def __init__(self, root: Seed, u: TorusElement, seeds: dict | None = None):
        self.root = root
        self.cache: dict[tuple, SeedCoordinates | NotMember] = {(): root_coordinates(root, u)}
        self.seeds = seeds if seeds is not None else {}

    def _seed(self, path: tuple) -> Seed | None:
        s = self.seeds.get(path)
        return s if s is not None and s.path == path else None

    def convert(self, word: Sequence[int]) -> SeedCoordinates:
        word = tuple(word)
        known = next(i for i in range(len(word), -1, -1) if word[:i] in self.cache)
        cur = self.cache[word[:known]]
        for i in range(known, len(word)):
            if isinstance(cur, NotMember):
                break
            try:
                cur = convert_edge(cur, word[i], self._seed(word[: i + 1]))
            except NotMember as exc:
                cur = exc
            self.cache[word[: i + 1]] = cur
        if isinstance(cur, NotMember):
            raise cur
        return cur


def convert_path(root: Seed, u: TorusElement, word: Sequence[int]) -> SeedCoordinates:
    """Fold of ``convert_edge`` along a mutation word starting at the root."""
    return PathConverter(root, u).convert(word)


def member_mixed(root: Seed, u: TorusElement, seed: Seed) -> bool:
    """u lies in the mixed torus of ``seed`` (reached from the root by seed.path)."""
    try:
        c = convert_path(root, u, seed.path)
    except NotMember:
        return False
    return in_mixed_torus(c.element, seed.idx)


@dataclass
class MembershipReport:
    member: bool
    per_seed: list[dict] = field(default_factory=list)
    coordinates: dict = field(default_factory=dict)

    def first_failure(self) -> dict | None:
        return next((r for r in self.per_seed if not r["ok"]), None)


def member_intersection(root: Seed, u: TorusElement, theta: Iterable[Seed]) -> MembershipReport:
    """Membership in the intersection of the mixed tori of the seeds in theta."""
    theta = list(theta)
    conv = PathConverter(root, u, {s.path: s for s in theta})
    report = MembershipReport(True)
    for s in theta:
        entry = {"seed_path": [k + 1 for k in s.path], "ok": True}
        try:
            c = conv.convert(s.path)
        except NotMember as exc:
            entry.update(ok=False, reason="not_in_torus", certificate=exc.certificate())
        else:
            report.coordinates[s.path] = c
            if not in_mixed_torus(c.element, s.idx):
                entry.update(ok=False, reason="negative_frozen_exponent")
        if not entry["ok"]:
            report.member = False
        report.per_seed.append(entry)
    return report


@lru_cache(maxsize=256)
def kernel_of(lam) -> KernelData:
    return kernel_mod_ell(lam)


def member_central_subalgebra(root: Seed, u: TorusElement, theta: Sequence[Seed]) -> bool:
    """Intersection membership plus ell-th power support at the first seed of theta."""
    theta = list(theta)
    rep = member_intersection(root, u, theta)
    if not rep.member:
        return False
    s = theta[0]
    return in_ell_power_subring(rep.coordinates[s.path].element, s.ell, s.idx)


def center_test(root: Seed, u: TorusElement, theta: Sequence[Seed]) -> bool:
    """Intersection membership plus support inside Ker(lam) at the first seed of theta."""
    theta = list(theta)
    rep = member_intersection(root, u, theta)
    if not rep.member:
        return False
    s = theta[0]
    ker = kernel_of(s.lam)
    return all(ker.contains(f) for f in rep.coordinates[s.path].element.terms)
