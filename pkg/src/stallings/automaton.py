"""Finite automata over involutive alphabets.

An :class:`Automaton` is an immutable value: states are ``0..n-1``, there is
a single initial state, a set of terminal states and a sorted tuple of edges
``(source, label, target)``.  ``EPS`` (``-1``) labels silent edges.  Every
operation returns a new automaton.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .alphabet import InvolutiveAlphabet, Word
from .errors import MalformedInputError, NotInverseError

EPS = -1


class Automaton:
    __slots__ = ("alphabet", "n", "initial", "terminals", "edges", "_adj", "_radj")

    def __init__(self, alphabet: InvolutiveAlphabet, n: int, initial: int, terminals: Iterable[int],
                 edges: Iterable[tuple], check: bool = True):
        self.alphabet = alphabet
        self.n = n
        self.initial = initial
        self.terminals = frozenset(terminals)
        self.edges = tuple(sorted(set(edges)))
        self._adj = None
        self._radj = None
        if check:
            self._validate()

    def _validate(self):
        n, size = self.n, self.alphabet.size
        if n < 1 or not 0 <= self.initial < n:
            raise MalformedInputError("initial state out of range")
        for t in self.terminals:
            if not 0 <= t < n:
                raise MalformedInputError(f"terminal state {t} out of range")
        for p, x, q in self.edges:
            if not (0 <= p < n and 0 <= q < n):
                raise MalformedInputError(f"edge ({p}, {x}, {q}) has an endpoint out of range")
            if not (x == EPS or 0 <= x < size):
                raise MalformedInputError(f"edge label {x} outside alphabet {self.alphabet.names}")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def empty(cls, alphabet: InvolutiveAlphabet) -> "Automaton":
        """The distinguished automaton of the empty language."""
        return cls(alphabet, 1, 0, (), ())

    @classmethod
    def epsilon(cls, alphabet: InvolutiveAlphabet) -> "Automaton":
        return cls(alphabet, 1, 0, (0,), ())

    @classmethod
    def universal(cls, alphabet: InvolutiveAlphabet) -> "Automaton":
        return cls(alphabet, 1, 0, (0,), [(0, x, 0) for x in alphabet.letters])

    @classmethod
    def from_words(cls, alphabet: InvolutiveAlphabet, words: Iterable[Sequence[int]]) -> "Automaton":
        """One path per word out of a shared initial state."""
        edges, terminals, n = [], set(), 1
        for w in words:
            w = alphabet.check_word(w)
            p = 0
            for x in w:
                edges.append((p, x, n))
                p = n
                n += 1
            terminals.add(p)
        return cls(alphabet, n, 0, terminals, edges)

    @classmethod
    def flower(cls, alphabet: InvolutiveAlphabet, words: Iterable[Sequence[int]]) -> "Automaton":
        """Petal automaton: each nonempty word is a loop at the terminal basepoint 0."""
        edges, n = [], 1
        for w in words:
            w = alphabet.check_word(w)
            if not w:
                continue
            p = 0
            for i, x in enumerate(w):
                q = 0 if i == len(w) - 1 else n
                if q:
                    n += 1
                edges.append((p, x, q))
                p = q
        return cls(alphabet, n, 0, (0,), edges)

    # -- structure ------------------------------------------------------------

    def adjacency(self) -> list:
        """Per state, a dict ``label -> list of targets``."""
        if self._adj is None:
            adj = [dict() for _ in range(self.n)]
            for p, x, q in self.edges:
                adj[p].setdefault(x, []).append(q)
            self._adj = adj
        return self._adj

    def reverse_adjacency(self) -> list:
        if self._radj is None:
            radj = [dict() for _ in range(self.n)]
            for p, x, q in self.edges:
                radj[q].setdefault(x, []).append(p)
            self._radj = radj
        return self._radj

    def step(self, p: int, x: int) -> Optional[int]:
        """Target of the ``x``-edge out of ``p`` in a deterministic automaton."""
        t = self.adjacency()[p].get(x)
        return t[0] if t else None

    @property
    def has_silent(self) -> bool:
        return any(x == EPS for _, x, _ in self.edges)

    @property
    def is_deterministic(self) -> bool:
        for d in self.adjacency():
            if EPS in d:
                return False
            for ts in d.values():
                if len(ts) > 1:
                    return False
        return True

    @property
    def is_involutive(self) -> bool:
        es = set(self.edges)
        return all(x != EPS and (q, x ^ 1, p) in es for p, x, q in self.edges)

    @property
    def is_trim(self) -> bool:
        return len(_useful_states(self)) == self.n and not self.is_empty

    @property
    def is_inverse(self) -> bool:
        return (len(self.terminals) == 1 and self.is_deterministic and self.is_involutive
                and self.is_trim)

    @property
    def has_basepoint(self) -> bool:
        return self.terminals == frozenset((self.initial,))

    @property
    def is_empty(self) -> bool:
        if not self.terminals:
            return True
        seen = _forward(self, self.initial)
        return not any(t in seen for t in self.terminals)

    def accepts(self, w: Sequence[int]) -> bool:
        adj = self.adjacency()
        cur = _closure_set(self, {self.initial})
        for x in w:
            nxt = set()
            for p in cur:
                nxt.update(adj[p].get(x, ()))
            if not nxt:
                return False
            cur = _closure_set(self, nxt)
        return any(p in self.terminals for p in cur)

    def read(self, w: Sequence[int], start: Optional[int] = None) -> Optional[int]:
        """Deterministic run of ``w``; ``None`` if it gets stuck."""
        p = self.initial if start is None else start
        for x in w:
            p = self.step(p, x)
            if p is None:
                return None
        return p

    def positive_edges(self) -> list:
        return [e for e in self.edges if e[1] != EPS and not e[1] & 1]

    def __eq__(self, other):
        if not isinstance(other, Automaton):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.n == other.n and self.initial == other.initial
                and self.terminals == other.terminals and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n, self.initial, self.terminals, self.edges))

    def __repr__(self):
        return (f"Automaton(n={self.n}, initial={self.initial}, terminals={sorted(self.terminals)}, "
                f"edges={len(self.edges)})")


# -- helpers -------------------------------------------------------------------


def _forward(a: Automaton, start: int) -> set:
    adj = a.adjacency()
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for ts in adj[p].values():
            for q in ts:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
    return seen


def _useful_states(a: Automaton) -> set:
    fwd = _forward(a, a.initial)
    radj = a.reverse_adjacency()
    bwd = set(a.terminals)
    stack = list(bwd)
    while stack:
        q = stack.pop()
        for ps in radj[q].values():
            for p in ps:
                if p not in bwd:
                    bwd.add(p)
                    stack.append(p)
    return fwd & bwd


def _closure_set(a: Automaton, states: Iterable[int]) -> set:
    adj = a.adjacency()
    out = set(states)
    stack = list(out)
    while stack:
        p = stack.pop()
        for q in adj[p].get(EPS, ()):
            if q not in out:
                out.add(q)
                stack.append(q)
    return out


def eps_closures(a: Automaton) -> list:
    """Silent closure of every state, as frozensets."""
    if not a.has_silent:
        return [frozenset((p,)) for p in range(a.n)]
    return [frozenset(_closure_set(a, (p,))) for p in range(a.n)]


def renumber(a: Automaton, keep: Iterable[int], edges: Optional[Iterable[tuple]] = None) -> Automaton:
    """Sub-automaton on ``keep`` (order-preserving renumbering)."""
    keep = sorted(keep)
    if a.initial not in keep:
        return Automaton.empty(a.alphabet)
    index = {p: i for i, p in enumerate(keep)}
    src = a.edges if edges is None else edges
    new_edges = [(index[p], x, index[q]) for p, x, q in src if p in index and q in index]
    terms = [index[t] for t in a.terminals if t in index]
    return Automaton(a.alphabet, len(keep), index[a.initial], terms, new_edges, check=False)


# -- basic operations ------------------------------------------------------------


def trim(a: Automaton) -> Automaton:
    """Keep exactly the states lying on some successful path."""
    useful = _useful_states(a)
    if a.initial not in useful:
        return Automaton.empty(a.alphabet)
    return renumber(a, useful)


def involutive_closure(a: Automaton) -> Automaton:
    if a.has_silent:
        raise MalformedInputError("involutive closure needs an automaton without silent edges")
    edges = set(a.edges)
    edges.update((q, x ^ 1, p) for p, x, q in a.edges)
    return Automaton(a.alphabet, a.n, a.initial, a.terminals, edges, check=False)


def remove_silent(a: Automaton) -> Automaton:
    """Equivalent automaton without silent edges, on the same state set (then trimmed)."""
    if not a.has_silent:
        return a
    clos = eps_closures(a)
    adj = a.adjacency()
    edges = set()
    terms = set()
    for p in range(a.n):
        for r in clos[p]:
            if r in a.terminals:
                terms.add(p)
            for x, ts in adj[r].items():
                if x != EPS:
                    for q in ts:
                        edges.add((p, x, q))
    return trim(Automaton(a.alphabet, a.n, a.initial, terms, edges, check=False))


def determinize(a: Automaton) -> Automaton:
    """Subset construction; states are numbered in breadth-first discovery order."""
    adj = a.adjacency()
    clos = eps_closures(a)
    letters = a.alphabet.letters

    def close(states):
        if not a.has_silent:
            return frozenset(states)
        out = set()
        for p in states:
            out |= clos[p]
        return frozenset(out)

    start = close({a.initial})
    index = {start: 0}
    order = [start]
    edges = []
    i = 0
    while i < len(order):
        cur = order[i]
        for x in letters:
            nxt = set()
            for p in cur:
                ts = adj[p].get(x)
                if ts:
                    nxt.update(ts)
            if not nxt:
                continue
            nxt = close(nxt)
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            edges.append((i, x, j))
        i += 1
    terms = [k for k, s in enumerate(order) if not s.isdisjoint(a.terminals)]
    return trim(Automaton(a.alphabet, len(order), 0, terms, edges, check=False))


def canonical(a: Automaton) -> Automaton:
    """Breadth-first renumbering of a deterministic automaton (letters in code order)."""
    adj = a.adjacency()
    index = {a.initial: 0}
    order = [a.initial]
    i = 0
    while i < len(order):
        p = order[i]
        for x in sorted(adj[p]):
            for q in adj[p][x]:
                if q not in index:
                    index[q] = len(order)
                    order.append(q)
        i += 1
    edges = [(index[p], x, index[q]) for p, x, q in a.edges if p in index]
    terms = [index[t] for t in a.terminals if t in index]
    return Automaton(a.alphabet, len(order), 0, terms, edges, check=False)


def minimize(a: Automaton) -> Automaton:
    """Minimal trim DFA in canonical numbering (unique per language)."""
    d = a if (a.is_deterministic and not a.has_silent) else determinize(a)
    d = trim(d)
    if d.is_empty:
        return Automaton.empty(a.alphabet)
    letters = list(a.alphabet.letters)
    adj = d.adjacency()
    delta = [[(adj[p][x][0] if x in adj[p] else -1) for x in letters] for p in range(d.n)]
    cls = [1 if p in d.terminals else 0 for p in range(d.n)]
    count = len(set(cls))
    while True:
        sigs = {}
        new = []
        for p in range(d.n):
            sig = (cls[p],) + tuple(cls[q] if q >= 0 else -1 for q in delta[p])
            new.append(sigs.setdefault(sig, len(sigs)))
        stable = len(sigs) == count
        cls, count = new, len(sigs)
        if stable:
            break
    edges = {(cls[p], x, cls[q]) for p, x, q in d.edges}
    terms = {cls[t] for t in d.terminals}
    quotient = Automaton(a.alphabet, count, cls[d.initial], terms, edges, check=False)
    return canonical(quotient)


def language_key(a: Automaton) -> tuple:
    """Hashable key identifying the language of ``a``."""
    m = minimize(a)
    return (m.alphabet.names, m.n, tuple(sorted(m.terminals)), m.edges)


def relabel(a: Automaton, table: Sequence[int], alphabet: InvolutiveAlphabet) -> Automaton:
    """Rename letters through ``table`` (letter code -> code in ``alphabet``)."""
    edges = [(p, x if x == EPS else table[x], q) for p, x, q in a.edges]
    return Automaton(alphabet, a.n, a.initial, a.terminals, edges)


# -- rational operations ---------------------------------------------------------


def _disjoint(parts: Sequence[Automaton], extra_states: int = 0):
    """Offsets for placing ``parts`` side by side after ``extra_states`` fresh states."""
    offsets, n = [], extra_states
    for p in parts:
        offsets.append(n)
        n += p.n
    return offsets, n


def union(*parts: Automaton) -> Automaton:
    if not parts:
        raise ValueError("union of nothing")
    alphabet = parts[0].alphabet
    for p in parts[1:]:
        alphabet.require_same(p.alphabet)
    offsets, n = _disjoint(parts, 1)
    edges, terms = [], []
    for off, p in zip(offsets, parts):
        edges.append((0, EPS, p.initial + off))
        edges.extend((s + off, x, t + off) for s, x, t in p.edges)
        terms.extend(t + off for t in p.terminals)
    return Automaton(alphabet, n, 0, terms, edges, check=False)


def concat(*parts: Automaton) -> Automaton:
    if not parts:
        raise ValueError("concatenation of nothing")
    alphabet = parts[0].alphabet
    for p in parts[1:]:
        alphabet.require_same(p.alphabet)
    offsets, n = _disjoint(parts)
    edges = []
    for i, (off, p) in enumerate(zip(offsets, parts)):
        edges.extend((s + off, x, t + off) for s, x, t in p.edges)
        if i + 1 < len(parts):
            nxt = parts[i + 1].initial + offsets[i + 1]
            edges.extend((t + off, EPS, nxt) for t in p.terminals)
    last = parts[-1]
    terms = [t + offsets[-1] for t in last.terminals]
    return Automaton(alphabet, n, parts[0].initial + offsets[0], terms, edges, check=False)


def star(a: Automaton) -> Automaton:
    edges = [(0, EPS, a.initial + 1)]
    edges.extend((s + 1, x, t + 1) for s, x, t in a.edges)
    edges.extend((t + 1, EPS, 0) for t in a.terminals)
    return Automaton(a.alphabet, a.n + 1, 0, (0,), edges, check=False)


def inverse_language(a: Automaton) -> Automaton:
    """Automaton for ``L(a)^-1``: edges reversed and inverted, endpoints swapped."""
    edges = [(0, EPS, t + 1) for t in a.terminals]
    edges.extend((q + 1, x if x == EPS else x ^ 1, p + 1) for p, x, q in a.edges)
    return Automaton(a.alphabet, a.n + 1, 0, (a.initial + 1,), edges, check=False)


def intersection(a: Automaton, b: Automaton) -> Automaton:
    a.alphabet.require_same(b.alphabet)
    return trim(_product(remove_silent(a), remove_silent(b))[0])


def _product(a: Automaton, b: Automaton):
    """Direct product from the pair of initial states (both inputs without silent edges).

    Returns the product automaton and, per product state, its pair of component states.
    """
    adj_a, adj_b = a.adjacency(), b.adjacency()
    start = (a.initial, b.initial)
    index = {start: 0}
    order = [start]
    edges = []
    i = 0
    while i < len(order):
        p, q = order[i]
        da, db = adj_a[p], adj_b[q]
        for x, ts in da.items():
            us = db.get(x)
            if not us:
                continue
            for t in ts:
                for u in us:
                    key = (t, u)
                    j = index.get(key)
                    if j is None:
                        j = index[key] = len(order)
                        order.append(key)
                    edges.append((i, x, j))
        i += 1
    terms = [k for k, (p, q) in enumerate(order) if p in a.terminals and q in b.terminals]
    return Automaton(a.alphabet, len(order), 0, terms, edges, check=False), order


def complete(a: Automaton) -> Automaton:
    """Deterministic automaton with a transition for every (state, letter)."""
    d = a if (a.is_deterministic and not a.has_silent) else determinize(a)
    adj = d.adjacency()
    sink = d.n
    edges = list(d.edges)
    missing = False
    for p in range(d.n):
        for x in d.alphabet.letters:
            if x not in adj[p]:
                edges.append((p, x, sink))
                missing = True
    if not missing:
        return d
    edges.extend((sink, x, sink) for x in d.alphabet.letters)
    return Automaton(d.alphabet, d.n + 1, d.initial, d.terminals, edges, check=False)


def complement(a: Automaton) -> Automaton:
    c = complete(a)
    terms = [p for p in range(c.n) if p not in c.terminals]
    return trim(Automaton(c.alphabet, c.n, c.initial, terms, c.edges, check=False))


def difference(a: Automaton, b: Automaton) -> Automaton:
    a.alphabet.require_same(b.alphabet)
    return intersection(a, complement(b))


def prefix_closure(a: Automaton) -> Automaton:
    t = trim(a)
    if t.is_empty:
        return t
    return Automaton(t.alphabet, t.n, t.initial, range(t.n), t.edges, check=False)


def is_empty(a: Automaton) -> bool:
    return a.is_empty


def includes(a: Automaton, b: Automaton) -> bool:
    """Whether ``L(a) ⊆ L(b)``."""
    a.alphabet.require_same(b.alphabet)
    a = remove_silent(a)
    if a.is_empty:
        return True
    d = complete(b)
    adj_a, adj_d = a.adjacency(), d.adjacency()
    start = (a.initial, d.initial)
    seen = {start}
    stack = [start]
    while stack:
        p, q = stack.pop()
        if p in a.terminals and q not in d.terminals:
            return False
        for x, ts in adj_a[p].items():
            u = adj_d[q][x][0]
            for t in ts:
                if (t, u) not in seen:
                    seen.add((t, u))
                    stack.append((t, u))
    return True


def equivalent(a: Automaton, b: Automaton) -> bool:
    return includes(a, b) and includes(b, a)


def restrict(a: Automaton, lang: Automaton) -> Automaton:
    """``a ⊓ L``: states and edges of ``a`` lying on a successful path labelled in ``L(lang)``."""
    a.alphabet.require_same(lang.alphabet)
    if a.has_silent:
        raise MalformedInputError("restrict needs an automaton without silent edges")
    prod, pairs = _product(a, remove_silent(lang))
    useful = _useful_states(prod)
    if 0 not in useful:
        return Automaton.empty(a.alphabet)
    keep = {pairs[i][0] for i in useful}
    kept_edges = {(pairs[i][0], x, pairs[j][0]) for i, x, j in prod.edges if i in useful and j in useful}
    terms = {pairs[i][0] for i in useful if i in prod.terminals}
    sub = Automaton(a.alphabet, a.n, a.initial, terms, kept_edges, check=False)
    return renumber(sub, keep)


# -- words ------------------------------------------------------------------------


def shortest_word(a: Automaton) -> Optional[Word]:
    """Shortlex-least accepted word, or ``None`` for the empty language."""
    d = a if (a.is_deterministic and not a.has_silent) else determinize(a)
    if d.is_empty:
        return None
    adj = d.adjacency()
    parent = {d.initial: None}
    queue = deque([d.initial])
    while queue:
        p = queue.popleft()
        if p in d.terminals:
            w = []
            while parent[p] is not None:
                p, x = parent[p]
                w.append(x)
            return tuple(reversed(w))
        for x in sorted(adj[p]):
            q = adj[p][x][0]
            if q not in parent:
                parent[q] = (p, x)
                queue.append(q)
    return None


def words(a: Automaton, max_len: int) -> Iterator[Word]:
    """All accepted words of length ``<= max_len`` (shortlex order)."""
    d = a if (a.is_deterministic and not a.has_silent) else determinize(a)
    if d.is_empty:
        return
    adj = d.adjacency()
    layer = [((), d.initial)]
    for length in range(max_len + 1):
        for w, p in layer:
            if p in d.terminals:
                yield w
        if length == max_len:
            break
        nxt = []
        for w, p in layer:
            for x in sorted(adj[p]):
                nxt.append((w + (x,), adj[p][x][0]))
        layer = nxt


def geodesics(a: Automaton) -> dict:
    """Shortlex-least path label from the initial state to every reachable state."""
    adj = a.adjacency()
    best = {a.initial: ()}
    queue = deque([a.initial])
    while queue:
        p = queue.popleft()
        for x in sorted(adj[p]):
            if x == EPS:
                continue
            for q in adj[p][x]:
                if q not in best:
                    best[q] = best[p] + (x,)
                    queue.append(q)
    return best


# -- morphisms between inverse automata ---------------------------------------------


@dataclass(frozen=True)
class Morphism:
    mapping: tuple
    injective: bool
    isomorphism: bool


def find_morphism(a: Automaton, b: Automaton) -> Optional[Morphism]:
    """The unique morphism ``a -> b`` of inverse automata, if there is one."""
    for name, x in (("first", a), ("second", b)):
        if not x.is_inverse:
            raise NotInverseError(f"{name} automaton is not inverse")
    a.alphabet.require_same(b.alphabet)
    return _morphism(a, b)


def _morphism(a: Automaton, b: Automaton) -> Optional[Morphism]:
    adj_a, adj_b = a.adjacency(), b.adjacency()
    image = {a.initial: b.initial}
    stack = [a.initial]
    while stack:
        p = stack.pop()
        fp = image[p]
        for x, ts in adj_a[p].items():
            us = adj_b[fp].get(x)
            if not us:
                return None
            u = us[0]
            for q in ts:
                if q in image:
                    if image[q] != u:
                        return None
                else:
                    image[q] = u
                    stack.append(q)
    if len(image) != a.n:
        return None
    if any(image[t] not in b.terminals for t in a.terminals):
        return None
    mapping = tuple(image[p] for p in range(a.n))
    injective = len(set(mapping)) == a.n
    iso = (injective and a.n == b.n and len(a.edges) == len(b.edges)
           and {image[t] for t in a.terminals} == set(b.terminals))
    return Morphism(mapping, injective, iso)


def is_isomorphic(a: Automaton, b: Automaton) -> bool:
    """Isomorphism test for deterministic automata (initial state mapped to initial state)."""
    if a.alphabet != b.alphabet or a.n != b.n or len(a.edges) != len(b.edges):
        return False
    if not (a.is_deterministic and b.is_deterministic):
        raise NotInverseError("isomorphism test needs deterministic automata")
    if a.is_empty and b.is_empty:
        return True
    m = _morphism(trim_reachable(a), trim_reachable(b))
    return bool(m and m.isomorphism)


def trim_reachable(a: Automaton) -> Automaton:
    return renumber(a, _forward(a, a.initial))
