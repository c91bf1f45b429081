import random

import pytest

from qcluster.lattice import kernel_mod_ell
from qcluster.membership import convert_edge, root_coordinates
from qcluster.monoid import (
    MonoidSpec,
    ch_degree_monomial,
    classify,
    group_closure,
    monoid_member,
    monomial_ch_verify,
    parse_inequality,
)
from qcluster.seed import a2_seed
from qcluster.torus import Bicharacter, TorusElement, monomial
from qcluster.trace_ch import trace, trace_agreement

A2 = Bicharacter.from_matrix([[0, 1], [-1, 0]], 3)
SQUARE4 = [(4, 0), (3, 1), (1, 3), (0, 4)]


def generate(gens, bound):
    """All monoid elements inside [0, bound]^N (generators nonnegative)."""
    n = len(gens[0])
    start = (0,) * n
    seen = {start}
    todo = [start]
    while todo:
        f = todo.pop()
        for g in gens:
            h = tuple(a + b for a, b in zip(f, g))
            if max(h) <= bound and h not in seen:
                seen.add(h)
                todo.append(h)
    return seen


def brute_holes(gens, fmax=10, kmax=6):
    s = tuple(sum(c) for c in zip(*gens))
    bound = kmax * fmax + 8 * max(s)
    phi = generate(gens, bound)
    n = len(gens[0])
    holes = []
    for f in _box(n, fmax):
        if f in phi:
            continue
        in_group = any(tuple(a + m * b for a, b in zip(f, s)) in phi for m in range(1, 9))
        if in_group and any(tuple(k * x for x in f) in phi for k in range(2, kmax + 1)):
            holes.append(f)
    return holes, phi


def _box(n, top):
    if n == 1:
        return [(i,) for i in range(top + 1)]
    return [(i,) + r for i in range(top + 1) for r in _box(n - 1, top)]


def test_group_closure_examples():
    assert set(group_closure(MonoidSpec.from_generators([(1, 0), (0, 1)]))) == {(1, 0), (0, 1)}
    assert group_closure(MonoidSpec.from_generators([(2,), (3,)])) == ((1,),)
    basis = group_closure(MonoidSpec.from_generators(SQUARE4))
    from qcluster.lattice import lattice_contains

    for a in range(-6, 7):
        for b in range(-6, 7):
            assert lattice_contains(basis, (a, b)) == ((a + b) % 4 == 0)


def test_group_closure_sublattice_index():
    from qcluster.lattice import det

    basis = group_closure(MonoidSpec.from_generators(SQUARE4))
    assert abs(det(basis)) == 4
    assert all((a + b) % 4 == 0 for a, b in basis)


def test_member_examples():
    m = MonoidSpec.from_generators([(2,), (3,)])
    assert not monoid_member(m, (1,))
    r = monoid_member(m, (7,))
    assert r and sum(g[0] * c for g, c in r.combination.items()) == 7
    assert not monoid_member(MonoidSpec.from_generators(SQUARE4), (2, 2))
    assert monoid_member(MonoidSpec.from_generators(SQUARE4), (4, 4))


def test_member_against_generation(rng):
    for _ in range(20):
        gens = [tuple(rng.randint(0, 4) for _ in range(2)) for _ in range(rng.randint(1, 4))]
        if not any(any(g) for g in gens):
            continue
        m = MonoidSpec.from_generators(gens)
        phi = generate(gens, 12)
        for f in _box(2, 12):
            assert bool(monoid_member(m, f)) == (f in phi)


def test_member_with_lineality():
    m = MonoidSpec.from_generators([(1, 0), (-1, 0), (0, 2)])
    assert monoid_member(m, (-5, 4))
    assert not monoid_member(m, (0, 1))
    assert not monoid_member(m, (0, -2))


def test_classify_examples():
    v = classify(MonoidSpec.from_generators([(1, 0), (0, 1)]))
    assert v.maximal_order and v.integrally_convex and v.integrally_closed
    v = classify(MonoidSpec.from_generators([(2,), (3,)]))
    assert not v.integrally_convex and not v.maximal_order
    assert v.certificate["witness"] == [1]
    v = classify(MonoidSpec.from_generators(SQUARE4))
    assert not v.integrally_convex and v.certificate["witness"] == [2, 2]
    assert v.to_dict()["maximal_order"] is False


def test_classify_halfspaces():
    hs = [parse_inequality("x1>=0", 2), parse_inequality("x2>=0", 2)]
    assert classify(MonoidSpec(2, halfspaces=tuple(hs))).maximal_order
    v = classify(MonoidSpec(2, halfspaces=(parse_inequality("x1>0", 2),)))
    assert v.integrally_convex and not v.integrally_closed
    assert v.certificate["witness"] in ([0, 1], [0, -1])
    v = classify(MonoidSpec(2, halfspaces=(parse_inequality("x1>0", 2), parse_inequality("x2>=0", 2))))
    assert not v.integrally_closed
    # x1 + x2 > 0 on the positive quadrant only removes the origin
    hs = (parse_inequality("x1>=0", 2), parse_inequality("x2>=0", 2), parse_inequality("x1+x2>0", 2))
    assert classify(MonoidSpec(2, halfspaces=hs)).maximal_order
    with pytest.raises(ValueError):
        classify(MonoidSpec(2, halfspaces=(parse_inequality("x1>0", 2), parse_inequality("x2>0", 2))))


def test_parse_inequality():
    h = parse_inequality("2*x1 - x2 >= 0", 2)
    assert h.integral() == (2, -1) and not h.strict
    h = parse_inequality("1/2*x1 + x2 > 0", 2)
    assert h.integral() == (1, 2) and h.strict
    with pytest.raises(ValueError):
        parse_inequality("x3 >= 0", 2)


def test_classify_against_brute_force():
    rng = random.Random(2024)
    cases = 0
    while cases < 100:
        gens = [tuple(rng.randint(0, 4) for _ in range(2)) for _ in range(rng.randint(1, 4))]
        if not any(any(g) for g in gens):
            continue
        cases += 1
        m = MonoidSpec.from_generators(gens)
        v = classify(m)
        holes, phi = brute_holes(gens)
        assert v.integrally_convex == (not holes), gens
        if holes:
            w = tuple(v.certificate["witness"])
            assert w not in phi


def test_unimodular_invariance():
    rng = random.Random(8)
    mats = [((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, -1), (1, 0)), ((1, -2), (0, 1))]
    for _ in range(30):
        gens = [tuple(rng.randint(0, 4) for _ in range(2)) for _ in range(rng.randint(1, 4))]
        if not any(any(g) for g in gens):
            continue
        u = rng.choice(mats)
        moved = [tuple(sum(u[i][j] * g[j] for j in range(2)) for i in range(2)) for g in gens]
        a, b = classify(MonoidSpec.from_generators(gens)), classify(MonoidSpec.from_generators(moved))
        assert a.integrally_convex == b.integrally_convex
        assert a.maximal_order == b.maximal_order


def test_ch_degree_examples():
    full = MonoidSpec.from_generators([(1, 0), (0, 1)])
    assert ch_degree_monomial(full, A2) == 3 == kernel_mod_ell(A2).pi_degree
    assert ch_degree_monomial(full, Bicharacter.zero(2, 3)) == 1
    sub = MonoidSpec.from_generators(SQUARE4)
    d = ch_degree_monomial(sub, A2)
    # brute force: index of Ker inside the sublattice, over coefficient residues mod 3
    basis = group_closure(sub)
    count = 0
    for c0 in range(3):
        for c1 in range(3):
            f = [c0 * basis[0][j] + c1 * basis[1][j] for j in range(2)]
            if all(A2(f, g) % 3 == 0 for g in basis):
                count += 1
    assert d * d * count == 9
    assert 3 % d == 0


def test_monomial_ch_verify():
    rng = random.Random(1)
    full = MonoidSpec.from_generators([(1, 0), (0, 1)])
    a = monomial(A2, (1, 0)) + monomial(A2, (0, 1))
    ok, reps = monomial_ch_verify(full, A2, [a, TorusElement.one(A2)])
    assert ok and reps[0].degree == 3 and reps[1].psi[0] == 3
    ok, _ = monomial_ch_verify(full, A2, 6, rng)
    assert ok
    ok, _ = monomial_ch_verify(MonoidSpec.from_generators(SQUARE4), A2, 4, rng)
    assert ok
    one_dim = MonoidSpec.from_generators([(2,), (3,)])
    lam0 = Bicharacter.zero(1, 3)
    ok, reps = monomial_ch_verify(one_dim, lam0, 5, rng)
    assert ok and all(r.degree == 1 for r in reps)
    with pytest.raises(ValueError):
        monomial_ch_verify(MonoidSpec.from_generators(SQUARE4), A2, [monomial(A2, (1, 0))])


def test_reduced_traces_agree_across_edge():
    # x2^a x1^b with b >= 0 lies in A(N^2) at the root and, converted, in the
    # torus of the neighbour; reduced traces agree and stay supported in N^2
    root = a2_seed(3)
    for a in range(4):
        for b in range(4):
            u = monomial(root.lam, (b, a))
            c = root_coordinates(root, u)
            assert trace_agreement(c, 1, "reduced")
            assert all(min(f) >= 0 for f in trace(u, "reduced").terms)
            other = convert_edge(c, 1)
            assert all(f[0] >= 0 for f in trace(other.element, "reduced").terms)
