"""Exchange graphs: bounded breadth-first exploration and export.

Two modes.  ``labelled`` identifies seeds only when matrices and frames agree
exactly.  ``unlabelled`` also identifies seeds that agree after permuting the
exchangeable indices (frozen indices stay fixed).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Hashable, Iterable, Sequence

from .seed import Seed, mutate_btilde, mutate_seed
from .torus import Bicharacter, NotDivisible, TorusElement, exact_left_divide, mul

MODES = ("labelled", "unlabelled")


def _index_perms(n: int, ex: Sequence[int]):
    """Permutations p of range(n) that fix frozen indices and permute ex."""
    ex = sorted(ex)
    for img in permutations(ex):
        p = list(range(n))
        for a, b in zip(ex, img):
            p[a] = b
        yield p


def _permuted_key(btilde, lam_rows, dvals, frame_keys, ex, p):
    n = len(p)
    col = {k: c for c, k in enumerate(ex)}
    bt = tuple(tuple(btilde[p[i]][col[p[k]]] for k in ex) for i in range(n))
    lam = tuple(tuple(lam_rows[p[i]][p[j]] for j in range(n)) for i in range(n))
    dv = tuple(dvals[col[p[k]]] for k in ex)
    fr = tuple(frame_keys[p[i]] for i in range(n))
    return (bt, lam, dv, fr)


def seed_key(s: Seed, mode: str = "labelled") -> tuple:
    if mode == "labelled":
        return s.key()
    if mode != "unlabelled":
        raise ValueError(f"unknown mode {mode!r}")
    ex = s.ex
    fk = [x.key() for x in s.frame]
    return min(_permuted_key(s.btilde, s.lam.entries, s.dvals, fk, ex, p) for p in _index_perms(s.n, ex))


@dataclass
class ExchangeGraph:
    """Vertices in discovery order; edges (u, v, k) with u <= v, k the 0-based label."""

    mode: str
    ex: tuple[int, ...]
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    truncated: bool = False
    frontier: deque = field(default_factory=deque)
    index: dict = field(default_factory=dict)
    _pairs: set = field(default_factory=set)
    _neighbor: Callable | None = None
    _key: Callable | None = None

    def __len__(self):
        return len(self.vertices)

    def adjacency(self) -> dict[int, set[int]]:
        adj = {i: set() for i in range(len(self.vertices))}
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def is_cycle(self) -> bool:
        n = len(self.vertices)
        if n < 3 or len(self.edges) != n:
            return False
        adj = self.adjacency()
        if any(len(v) != 2 for v in adj.values()):
            return False
        return len(_reachable(adj, 0, set(adj))) == n

    def _add(self, state, key) -> int:
        vid = len(self.vertices)
        self.vertices.append(state)
        self.index[key] = vid
        self.frontier.append(vid)
        return vid

    def _add_edge(self, u: int, v: int, k: int):
        a, b = min(u, v), max(u, v)
        pair = (a, b) if self.mode == "unlabelled" else (a, b, k)
        if pair in self._pairs:
            return
        self._pairs.add(pair)
        self.edges.append((a, b, k))

    def resume(self, max_seeds: int) -> ExchangeGraph:
        """Continue the breadth-first search with a (possibly larger) bound."""
        self.truncated = False
        pending = deque()
        while self.frontier:
            u = self.frontier.popleft()
            blocked = False
            for k in self.ex:
                nxt = self._neighbor(self.vertices[u], k)
                key = self._key(nxt)
                v = self.index.get(key)
                if v is None:
                    if len(self.vertices) >= max_seeds:
                        self.truncated = True
                        blocked = True
                        continue
                    v = self._add(nxt, key)
                self._add_edge(u, v, k)
            if blocked:
                pending.append(u)
        self.frontier = pending
        return self


def _explore(root, ex, neighbor, key, max_seeds, mode) -> ExchangeGraph:
    g = ExchangeGraph(mode=mode, ex=tuple(sorted(ex)), _neighbor=neighbor, _key=key)
    g._add(root, key(root))
    return g.resume(max_seeds)


def explore(root: Seed, max_seeds: int = 10000, mode: str = "unlabelled") -> ExchangeGraph:
    """BFS over all exchangeable mutations, deduplicated per ``mode``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if max_seeds < 1:
        raise ValueError("max_seeds must be positive")
    return _explore(root, root.ex, mutate_seed, lambda s: seed_key(s, mode), max_seeds, mode)


def _reachable(adj, start, allowed) -> set:
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for v in adj[u]:
            if v in allowed and v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def resolve_word(g: ExchangeGraph, word: Sequence[int]) -> int:
    """Vertex reached from the root by following edge labels (0-based)."""
    state = g.vertices[0]
    for k in word:
        if k not in g.ex:
            raise ValueError(f"index {k} is not exchangeable")
        state = g._neighbor(state, k)
    vid = g.index.get(g._key(state))
    if vid is None:
        raise KeyError(f"word {list(word)} leaves the explored part of the graph")
    return vid


def theta_subset(g: ExchangeGraph, selector: Iterable) -> tuple[list[int], bool]:
    """Resolve words (sequences) or vertex ids to a vertex set; also report connectivity."""
    ids = []
    for sel in selector:
        if isinstance(sel, int):
            if not 0 <= sel < len(g.vertices):
                raise KeyError(f"vertex {sel} does not exist")
            vid = sel
        else:
            vid = resolve_word(g, sel)
        if vid not in ids:
            ids.append(vid)
    if not ids:
        return ids, True
    adj = g.adjacency()
    connected = len(_reachable(adj, ids[0], set(ids))) == len(ids)
    return ids, connected


def _vertex_label(g: ExchangeGraph, vid: int) -> str:
    s = g.vertices[vid]
    if isinstance(s, Seed):
        return "; ".join(str(x) for x in s.frame)
    return "; ".join(str(x) for x in s.cluster)


def export_dot(g: ExchangeGraph) -> str:
    lines = ["graph exchange {"]
    for vid in range(len(g.vertices)):
        label = _vertex_label(g, vid).replace('"', '\\"')
        lines.append(f'  v{vid} [label="{label}"];')
    for u, v, k in g.edges:
        lines.append(f'  v{u} -- v{v} [label="{k + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_document(g: ExchangeGraph) -> dict:
    verts = []
    for vid, s in enumerate(g.vertices):
        entry = {"id": vid}
        if isinstance(s, Seed):
            entry.update(
                path=[k + 1 for k in s.path],
                frame=[str(x) for x in s.frame],
                btilde=[list(r) for r in s.btilde],
                **{"lambda": s.lam.signed()},
            )
        else:
            entry.update(path=[k + 1 for k in s.path], cluster=[str(x) for x in s.cluster])
        verts.append(entry)
    return {
        "mode": g.mode,
        "truncated": g.truncated,
        "vertices": verts,
        "edges": [{"source": u, "target": v, "k": k + 1} for u, v, k in g.edges],
    }


def export_json(g: ExchangeGraph) -> str:
    return json.dumps(graph_document(g), indent=2, sort_keys=True)


# classical shadow: ell-th powers of frame variables, read as commutative Laurent polynomials


@dataclass(frozen=True)
class ClassicalSeed:
    btilde: tuple[tuple[int, ...], ...]
    ex: tuple[int, ...]
    cluster: tuple[TorusElement, ...]
    path: tuple[int, ...] = ()

    def key(self) -> tuple:
        return (self.btilde, tuple(x.key() for x in self.cluster))


def shadow(u: TorusElement, ell: int | None = None) -> TorusElement:
    """X^(ell f) -> u^f in the commutative torus; support must lie in (ell Z)^N."""
    ell = u.lam.ell if ell is None else ell
    lam0 = Bicharacter.zero(u.lam.n, u.lam.ell)
    terms = {}
    for f, c in u.terms.items():
        if any(x % ell for x in f):
            raise ValueError(f"exponent {f} is not divisible by {ell}")
        terms[tuple(x // ell for x in f)] = c
    return TorusElement._raw(lam0, terms)


def classical_seed(s: Seed) -> ClassicalSeed:
    cluster = tuple(shadow(x ** s.ell, s.ell) for x in s.frame)
    return ClassicalSeed(s.btilde, tuple(s.ex), cluster, s.path)


def classical_mutate(c: ClassicalSeed, k: int) -> ClassicalSeed:
    """x_k x_k' = prod x_i^[b_ik]+ + prod x_i^[-b_ik]+, by exact division."""
    col = list(c.ex).index(k)
    lam0 = c.cluster[0].lam
    pos = TorusElement.one(lam0)
    neg = TorusElement.one(lam0)
    for i, row in enumerate(c.btilde):
        b = row[col]
        if b > 0:
            pos = mul(pos, c.cluster[i] ** b)
        elif b < 0:
            neg = mul(neg, c.cluster[i] ** (-b))
    try:
        new = exact_left_divide(c.cluster[k], pos + neg)
    except NotDivisible as exc:
        raise AssertionError("classical exchange relation is not Laurent") from exc
    cluster = c.cluster[:k] + (new,) + c.cluster[k + 1:]
    return ClassicalSeed(mutate_btilde(c.btilde, k, c.ex), c.ex, cluster, c.path + (k,))


def classical_key(c: ClassicalSeed, mode: str) -> tuple:
    if mode == "labelled":
        return c.key()
    n = len(c.cluster)
    fk = [x.key() for x in c.cluster]
    zero = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    ones = (1,) * len(c.ex)
    return min(_permuted_key(c.btilde, zero, ones, fk, list(c.ex), p) for p in _index_perms(n, c.ex))


def explore_classical(root: ClassicalSeed, max_seeds: int = 10000, mode: str = "unlabelled") -> ExchangeGraph:
    return _explore(root, root.ex, classical_mutate, lambda c: classical_key(c, mode), max_seeds, mode)


def shadow_isomorphism(gq: ExchangeGraph, gc: ExchangeGraph) -> dict[int, int] | None:
    """Vertex map quantum -> classical induced by taking ell-th powers, if it is a
    bijection carrying labelled edges onto labelled edges; otherwise None."""
    if gq.mode != gc.mode or len(gq) != len(gc):
        return None
    phi = {}
    for vid, s in enumerate(gq.vertices):
        target = gc.index.get(classical_key(classical_seed(s), gc.mode))
        if target is None:
            return None
        phi[vid] = target
    if len(set(phi.values())) != len(phi):
        return None
    qe = {(min(phi[u], phi[v]), max(phi[u], phi[v]), k) for u, v, k in gq.edges}
    ce = set(gc.edges)
    if gq.mode == "unlabelled":
        qe = {(u, v) for u, v, _ in qe}
        ce = {(u, v) for u, v, _ in ce}
    return phi if qe == ce else None
