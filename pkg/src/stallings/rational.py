"""Free-group aware operations on rational languages.

Reduction of words, the automaton of all reduced words, Benois reduction of
automata, rational substitutions and preimages under maps to finite groups.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .alphabet import InvolutiveAlphabet, Word
from .automaton import EPS, Automaton, inverse_language, minimize, trim
from .errors import GroupTableError, MalformedInputError


def reduce_word(w: Sequence[int]) -> Word:
    """Free reduction: cancel factors ``x x^-1`` until none is left."""
    out = []
    for x in w:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != w[i + 1] ^ 1 for i in range(len(w) - 1))


def reduced_words(alphabet: InvolutiveAlphabet) -> Automaton:
    """Automaton of ``R_A``: a start state plus one state per last letter read."""
    edges = []
    for x in alphabet.letters:
        edges.append((0, x, x + 1))
        for y in alphabet.letters:
            if x != y ^ 1:
                edges.append((y + 1, x, x + 1))
    return Automaton(alphabet, alphabet.size + 1, 0, range(alphabet.size + 1), edges, check=False)


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _closure_bits(eps: list) -> list:
    n = len(eps)
    clos = [eps[p] | (1 << p) for p in range(n)]
    changed = True
    while changed:
        changed = False
        for p in range(n):
            acc = clos[p]
            for q in _bits(clos[p] & ~(1 << p)):
                acc |= clos[q]
            if acc != clos[p]:
                clos[p] = acc
                changed = True
    return clos


def benois_saturate(a: Automaton) -> tuple:
    """Silent-edge saturation: ``p -> r`` whenever ``p -x-> q ~> q' -x^-1-> r``.

    Returns the list of letter edges and the silent-closure bitmask of every state.
    """
    n, size = a.n, a.alphabet.size
    succ = [[0] * n for _ in range(size)]
    eps = [0] * n
    letter_edges = []
    for p, x, q in a.edges:
        if x == EPS:
            eps[p] |= 1 << q
        else:
            succ[x][p] |= 1 << q
            letter_edges.append((p, x, q))
    clos = _closure_bits(eps)
    while True:
        changed = False
        for p, x, q in letter_edges:
            back = succ[x ^ 1]
            tgt = 0
            for r in _bits(clos[q]):
                tgt |= back[r]
            if tgt & ~clos[p]:
                eps[p] |= tgt
                clos[p] |= tgt
                changed = True
        if not changed:
            break
        clos = _closure_bits(eps)
    return letter_edges, clos


def benois_reduce(a: Automaton, minimal: bool = True) -> Automaton:
    """Automaton for the set of reduced forms of the words of ``L(a)``."""
    alphabet = a.alphabet
    letter_edges, clos = benois_saturate(a)
    n = a.n
    out = [dict() for _ in range(n)]
    for p, x, q in letter_edges:
        out[p].setdefault(x, set()).add(q)
    term_bits = 0
    for t in a.terminals:
        term_bits |= 1 << t
    # product with R_A, reading silent closure before each letter
    start = (a.initial, 0)
    index = {start: 0}
    order = [start]
    edges = []
    terms = []
    i = 0
    while i < len(order):
        p, last = order[i]
        if clos[p] & term_bits:
            terms.append(i)
        moves = {}
        for r in _bits(clos[p]):
            for x, qs in out[r].items():
                if last and x == (last - 1) ^ 1:
                    continue
                moves.setdefault(x, set()).update(qs)
        for x in sorted(moves):
            for q in sorted(moves[x]):
                key = (q, x + 1)
                j = index.get(key)
                if j is None:
                    j = index[key] = len(order)
                    order.append(key)
                edges.append((i, x, j))
        i += 1
    res = trim(Automaton(alphabet, len(order), 0, terms, edges, check=False))
    return minimize(res) if minimal else res


@dataclass
class RationalSubstitution:
    """Letter -> language map; images are automata over ``target``.

    Missing images of inverse letters default to the inverse language of the
    image of the corresponding positive letter.
    """
    source: InvolutiveAlphabet
    target: InvolutiveAlphabet
    images: Mapping[int, Automaton] = field(default_factory=dict)

    def image(self, x: int) -> Automaton:
        img = self.images.get(x)
        if img is None and (x ^ 1) in self.images:
            img = inverse_language(self.images[x ^ 1])
            self.images = dict(self.images)
            self.images[x] = img
        if img is None:
            raise MalformedInputError(f"substitution has no image for letter {self.source.name(x)}")
        self.target.require_same(img.alphabet)
        return img


def substitute(a: Automaton, s: RationalSubstitution) -> Automaton:
    """Automaton for ``L(a)`` under ``s``: each letter edge becomes a fresh copy of its image."""
    s.source.require_same(a.alphabet)
    n = a.n
    edges = []
    for p, x, q in a.edges:
        if x == EPS:
            edges.append((p, EPS, q))
            continue
        img = s.image(x)
        off = n
        n += img.n
        edges.append((p, EPS, img.initial + off))
        edges.extend((u + off, y, v + off) for u, y, v in img.edges)
        edges.extend((t + off, EPS, q) for t in img.terminals)
    return Automaton(s.target, n, a.initial, a.terminals, edges, check=False)


class FiniteGroup:
    """A finite group given by its multiplication table (validated on construction)."""

    def __init__(self, elements: Sequence[str], identity: str, table: Sequence[Sequence]):
        self.elements = tuple(str(e) for e in elements)
        if len(set(self.elements)) != len(self.elements):
            raise GroupTableError("duplicate element names")
        self._index = {e: i for i, e in enumerate(self.elements)}
        if identity not in self._index:
            raise GroupTableError(f"identity {identity!r} is not an element")
        self.identity = self._index[identity]
        k = len(self.elements)
        rows = []
        for row in table:
            rows.append(tuple(self._to_index(v) for v in row))
        if len(rows) != k or any(len(r) != k for r in rows):
            raise GroupTableError(f"table must be {k}x{k}")
        self.table = tuple(rows)
        self._inverse = self._validate()

    def _to_index(self, v) -> int:
        if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < len(self.elements):
            return v
        if str(v) in self._index:
            return self._index[str(v)]
        raise GroupTableError(f"table entry {v!r} is not an element")

    def _validate(self) -> tuple:
        k, e, t = len(self.elements), self.identity, self.table
        names = self.elements
        for g in range(k):
            if t[e][g] != g or t[g][e] != g:
                raise GroupTableError(f"{names[e]} is not a two-sided identity for {names[g]}",
                                      witness=(names[e], names[g]))
        inverse = []
        for g in range(k):
            inv = [h for h in range(k) if t[g][h] == e and t[h][g] == e]
            if not inv:
                raise GroupTableError(f"{names[g]} has no inverse", witness=(names[g],))
            inverse.append(inv[0])
        for a in range(k):
            for b in range(k):
                ab = t[a][b]
                for c in range(k):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise GroupTableError(
                            f"not associative on ({names[a]}, {names[b]}, {names[c]})",
                            witness=(names[a], names[b], names[c]))
        return tuple(inverse)

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, name) -> int:
        return self._to_index(name)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self._inverse[g]

    def product(self, gs: Iterable[int]) -> int:
        acc = self.identity
        for g in gs:
            acc = self.table[acc][g]
        return acc

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.elements == other.elements
                and self.identity == other.identity and self.table == other.table)

    def __hash__(self):
        return hash((self.elements, self.identity, self.table))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def matched_genmap(group: FiniteGroup, alphabet: InvolutiveAlphabet, genmap: Mapping[int, int]) -> list:
    """Complete ``genmap`` (letter code -> element index) to all of the alphabet, checking it is matched."""
    full = [None] * alphabet.size
    for x, g in genmap.items():
        full[x] = g
    for x in alphabet.letters:
        if full[x] is None and full[x ^ 1] is not None:
            full[x] = group.inv(full[x ^ 1])
    for x in alphabet.letters:
        if full[x] is None:
            raise MalformedInputError(f"letter {alphabet.name(x)} has no image")
        if full[x ^ 1] != group.inv(full[x]):
            raise MalformedInputError(f"map is not matched on letter {alphabet.name(x)}")
    return full


def monoid_preimage(group: FiniteGroup, alphabet: InvolutiveAlphabet, genmap: Mapping[int, int],
                    target: Iterable[int], letters: Optional[Iterable[int]] = None) -> Automaton:
    """Automaton recognizing the words whose image lies in ``target``.

    ``letters`` restricts the edges to a subset of the alphabet (used for maps
    defined on positive letters only).
    """
    full = matched_genmap(group, alphabet, genmap)
    use = alphabet.letters if letters is None else sorted(set(letters))
    edges = [(g, x, group.mul(g, full[x])) for g in range(group.order) for x in use]
    return Automaton(alphabet, group.order, group.identity, set(target), edges)
