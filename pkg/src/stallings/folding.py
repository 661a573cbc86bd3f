"""Quotients of involutive automata: folding, vertex identification, terminal merging.

All three share one union-find over the states.  Folding keeps, for every
class representative, a slot map ``label -> target``; when two classes merge
the smaller slot map is poured into the larger one and every clash queues a
further merge.  Output states are numbered by the smallest original state of
each class, so results do not depend on merge order.
"""
from __future__ import annotations

from typing import Iterable, Optional

from .automaton import Automaton
from .errors import MalformedInputError


class UnionFind:
    """Disjoint sets with union by size, path compression and an operation counter."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.least = list(range(n))
        self.ops = 0

    def find(self, x: int) -> int:
        self.ops += 1
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> Optional[int]:
        """Merge the classes of ``x`` and ``y``; returns the surviving root, or ``None`` if already equal."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return None
        self.ops += 1
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.least[rx] = min(self.least[rx], self.least[ry])
        return rx

    def labels(self) -> list:
        """Class number of every element, classes ordered by their least member."""
        roots = [self.find(x) for x in range(len(self.parent))]
        order = sorted({self.least[r] for r in roots})
        rank = {m: i for i, m in enumerate(order)}
        return [rank[self.least[r]] for r in roots]


def _project(a: Automaton, uf: UnionFind, edges: Iterable[tuple]) -> Automaton:
    cls = uf.labels()
    n = max(cls) + 1 if cls else 1
    new_edges = {(cls[p], x, cls[q]) for p, x, q in edges}
    terms = {cls[t] for t in a.terminals}
    return Automaton(a.alphabet, n, cls[a.initial], terms, new_edges, check=False)


def quotient(a: Automaton, pairs: Iterable[tuple]) -> Automaton:
    """Identify the given pairs of states, without folding."""
    uf = UnionFind(a.n)
    for p, q in pairs:
        _check_state(a, p)
        _check_state(a, q)
        uf.union(p, q)
    return _project(a, uf, a.edges)


def _check_state(a: Automaton, p) -> None:
    if not (isinstance(p, int) and 0 <= p < a.n):
        raise MalformedInputError(f"state {p!r} out of range")


def _fold(a: Automaton, pairs: Iterable[tuple] = (), stats: Optional[dict] = None) -> Automaton:
    if a.has_silent or not a.is_involutive:
        raise MalformedInputError("folding needs an involutive automaton without silent edges")
    uf = UnionFind(a.n)
    slots = [dict() for _ in range(a.n)]
    pending = []
    for p, q in pairs:
        _check_state(a, p)
        _check_state(a, q)
        pending.append((p, q))
    for p, x, q in a.edges:
        d = slots[p]
        t = d.get(x)
        if t is None:
            d[x] = q
        elif t != q:
            pending.append((t, q))
    find = uf.find
    while pending:
        u, v = pending.pop()
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        root = uf.union(ru, rv)
        other = rv if root == ru else ru
        big, small = slots[root], slots[other]
        if len(big) < len(small):
            big, small = small, big
        for x, t in small.items():
            s = big.get(x)
            if s is None:
                big[x] = t
            elif s != t:
                pending.append((s, t))
        slots[root] = big
        slots[other] = None
    edges = []
    for p in range(a.n):
        d = slots[p]
        if d is not None and find(p) == p:
            edges.extend((p, x, find(t)) for x, t in d.items())
    if stats is not None:
        stats["union_find_ops"] = uf.ops
    return _project(a, uf, edges)


def fold(a: Automaton, stats: Optional[dict] = None) -> Automaton:
    """Complete folding of an involutive automaton.

    ``stats``, when given, receives the number of union-find operations.
    """
    return _fold(a, (), stats)


def identify(a: Automaton, pairs: Iterable[tuple], stats: Optional[dict] = None) -> Automaton:
    """Identify the given pairs of states, then fold."""
    return _fold(a, pairs, stats)


def merge_terminals(a: Automaton) -> Automaton:
    """Identify every terminal state with the initial state, which becomes the basepoint."""
    if not a.terminals:
        raise MalformedInputError("automaton has no terminal state")
    merged = quotient(a, [(a.initial, t) for t in a.terminals])
    return Automaton(merged.alphabet, merged.n, merged.initial, (merged.initial,), merged.edges, check=False)

