"""Subgroup automata over a Stallings section.

``build_stallings`` turns generator words into the core automaton of the
subgroup: glue one uniterminal automaton per generator at a common start,
close under inverse edges, merge terminals into the start, fold, then keep
identifying pairs of states joined by a path naming the identity until no
pair is left, and finally cut down to the paths labelled by the section.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .alphabet import Word, invert_word
from .automaton import (Automaton, canonical, geodesics, includes, intersection, involutive_closure,
                        is_empty, minimize, prefix_closure, restrict)
from .errors import HypothesisRefused, MalformedInputError, SectionError
from .folding import fold, identify, merge_terminals, quotient
from .rational import reduce_word
from .sections import StallingsSection


# -- uniterminal atoms -----------------------------------------------------------------


def uniterminal(a: Automaton) -> Automaton:
    """Minimal automaton of ``L(a)`` with all terminal states identified."""
    m = minimize(a)
    if m.is_empty:
        raise SectionError("cannot build a uniterminal automaton for the empty language")
    terms = sorted(m.terminals)
    return quotient(m, [(terms[0], t) for t in terms[1:]])


def reverse_uniterminal(a: Automaton) -> Automaton:
    """Swap initial and terminal state, reversing and inverting every edge."""
    (t,) = a.terminals
    edges = [(q, x ^ 1, p) for p, x, q in a.edges]
    return Automaton(a.alphabet, a.n, t, (a.initial,), edges, check=False)


def _atoms(sec: StallingsSection) -> list:
    atoms = sec.memo.get("atoms")
    if atoms is None:
        atoms = [None] * sec.alphabet.size
        for x in sec.alphabet.positive:
            atoms[x] = uniterminal(sec.letter_sections[x])
            atoms[x ^ 1] = reverse_uniterminal(atoms[x])
        sec.memo["atoms"] = atoms
    return atoms


def atomic_uniterminal(sec: StallingsSection, x: int) -> Automaton:
    """Uniterminal automaton whose reduced language lies between ``S_a`` and the preimage of ``a``."""
    if not 0 <= x < sec.alphabet.size:
        raise MalformedInputError(f"letter code {x} outside the alphabet")
    return _atoms(sec)[x]


def star_product(*parts: Automaton) -> Automaton:
    """Glue uniterminal automata end to start, in order."""
    if not parts:
        raise ValueError("star product of nothing")
    alphabet = parts[0].alphabet
    edges = []
    n = 0
    initial = None
    end = None
    for a in parts:
        alphabet.require_same(a.alphabet)
        if len(a.terminals) != 1:
            raise MalformedInputError("star product needs uniterminal automata")
        (t,) = a.terminals
        index = {}
        for p in range(a.n):
            if p == a.initial and end is not None:
                index[p] = end
            else:
                index[p] = n
                n += 1
        if initial is None:
            initial = index[a.initial]
        edges.extend((index[p], x, index[q]) for p, x, q in a.edges)
        end = index[t]
    return Automaton(alphabet, n, initial, (end,), edges, check=False)


def element_automaton(sec: StallingsSection, w: Sequence[int]) -> Automaton:
    """Folded inverse automaton whose language meets ``S`` exactly in ``S_{wπ}``.

    Built from the atoms along the reduced form of ``w``, so its size grows
    linearly with the word.
    """
    r = reduce_word(sec.alphabet.check_word(w))
    if r:
        base = star_product(*(_atoms(sec)[x] for x in r))
    else:
        base = _identity_atom(sec)
    return fold(involutive_closure(base))


def _identity_atom(sec: StallingsSection) -> Automaton:
    atom = sec.memo.get("identity_atom")
    if atom is None:
        atom = sec.memo["identity_atom"] = uniterminal(sec.s1_auto)
    return atom


def _shortest_in_product(d: Automaton, s: Automaton) -> Optional[Word]:
    adj_d, adj_s = d.adjacency(), s.adjacency()
    start = (d.initial, s.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        p, q = cur = queue.popleft()
        if p in d.terminals and q in s.terminals:
            w = []
            while parent[cur] is not None:
                cur, x = parent[cur]
                w.append(x)
            return tuple(reversed(w))
        dp, sq = adj_d[p], adj_s[q]
        for x in sorted(dp):
            if x in sq:
                nxt = (dp[x][0], sq[x][0])
                if nxt not in parent:
                    parent[nxt] = (cur, x)
                    queue.append(nxt)
    return None


def fast_witness(sec: StallingsSection, w: Sequence[int]) -> Word:
    """Shortlex-least word of ``S_{wπ}``, without computing ``S_{wπ}`` itself."""
    r = reduce_word(w)
    cache = sec.memo.setdefault("witness", {})
    s = cache.get(r)
    if s is None:
        s = _shortest_in_product(element_automaton(sec, r), sec.s_auto)
        if s is None:
            raise SectionError(f"no representative for {sec.alphabet.format(r)}")
        cache[r] = s
    return s


# -- the construction -----------------------------------------------------------------


@dataclass
class SubgroupInput:
    section: StallingsSection
    generators: tuple

    def __init__(self, section: StallingsSection, generators: Sequence[Sequence[int]]):
        self.section = section
        gens = []
        for g in generators:
            r = reduce_word(section.alphabet.check_word(g))
            if r:
                gens.append(r)
        self.generators = tuple(gens)

    @property
    def size(self) -> int:
        return sum(len(g) for g in self.generators)


@dataclass
class PipelineTrace:
    generators: tuple
    b0: Automaton
    b1: Automaton
    b2: Automaton
    b3: Automaton
    b4: Optional[Automaton] = None
    j_pairs: tuple = ()
    rounds: int = 0
    core: Optional[Automaton] = None
    stats: dict = field(default_factory=dict)

    def stages(self) -> list:
        named = [("b0", self.b0), ("b1", self.b1), ("b2", self.b2), ("b3", self.b3),
                 ("b4", self.b4), ("core", self.core)]
        return [(k, v) for k, v in named if v is not None]


def _start_graph(inp: SubgroupInput) -> Automaton:
    """B0: one uniterminal automaton per generator, all starting at state 0."""
    sec = inp.section
    atoms = _atoms(sec)
    parts = [star_product(*(atoms[x] for x in g)) for g in inp.generators]
    if not parts:
        parts = [_identity_atom(sec)]
    edges, terms, n = [], [], 1
    for a in parts:
        index = {}
        for p in range(a.n):
            if p == a.initial:
                index[p] = 0
            else:
                index[p] = n
                n += 1
        edges.extend((index[p], x, index[q]) for p, x, q in a.edges)
        terms.extend(index[t] for t in a.terminals)
    return Automaton(sec.alphabet, n, 0, terms, edges, check=False)


def build_core(inp: SubgroupInput) -> PipelineTrace:
    """Stages B0 to B3; B3 already decides membership."""
    b0 = _start_graph(inp)
    b1 = involutive_closure(b0)
    b2 = merge_terminals(b1)
    stats = {}
    b3 = canonical(fold(b2, stats))
    return PipelineTrace(inp.generators, b0, b1, b2, b3, stats={"fold_ops": stats["union_find_ops"]})


def j_pairs(b: Automaton, sec: StallingsSection) -> tuple:
    """All pairs ``p < q`` of states joined by a path whose label is the identity."""
    if not b.has_basepoint:
        raise MalformedInputError("j_pairs needs an automaton with a basepoint")
    geo = geodesics(b)
    states = sorted(geo)
    # the relation is coset equality, hence an equivalence; compare against class leaders
    leaders = []
    cls = {}
    for q in states:
        for lead in leaders:
            s = fast_witness(sec, geo[lead] + invert_word(geo[q]))
            if b.read(s) == b.initial:
                cls[q] = lead
                break
        else:
            leaders.append(q)
            cls[q] = q
    members = {}
    for q in states:
        members.setdefault(cls[q], []).append(q)
    out = []
    for group in members.values():
        for i, p in enumerate(group):
            out.extend((p, q) for q in group[i + 1:])
    return tuple(sorted(out))


def build_stallings(inp: SubgroupInput) -> PipelineTrace:
    """The core automaton of the subgroup, with every intermediate stage."""
    sec = inp.section
    trace = build_core(inp)
    b4 = trace.b3
    pairs = j_pairs(b4, sec)
    trace.j_pairs = pairs
    rounds = 0
    while pairs:
        rounds += 1
        b4 = canonical(identify(b4, pairs))
        pairs = j_pairs(b4, sec)
    trace.b4 = b4
    trace.rounds = rounds
    trace.core = canonical(restrict(b4, sec.s_auto))
    return trace


def stallings_automaton(sec: StallingsSection, generators: Sequence[Sequence[int]]) -> Automaton:
    return build_stallings(SubgroupInput(sec, generators)).core


# -- queries -----------------------------------------------------------------------------


def member(sec: StallingsSection, core: Automaton, w: Sequence[int]) -> bool:
    """Whether the element of ``w`` lies in the subgroup recognised by ``core`` (or by B3)."""
    sec.alphabet.require_same(core.alphabet)
    return not is_empty(intersection(sec.s_of_g(w), core))


def finite_index(sec: StallingsSection, core: Automaton) -> Optional[list]:
    """Coset representatives (one geodesic per state) when the index is finite, else ``None``.

    Refuses unless the section is extendable by construction.
    """
    if not sec.extendable:
        raise HypothesisRefused("finite index test needs an extendable section")
    sec.alphabet.require_same(core.alphabet)
    if not includes(sec.s_auto, prefix_closure(core)):
        return None
    geo = geodesics(core)
    return [geo[q] for q in range(core.n)]


def spanning_generators(a: Automaton) -> list:
    """Free generators read off a spanning tree of geodesics: ``u_p x u_q^-1`` per non-tree edge."""
    geo = geodesics(a)
    out = []
    for p, x, q in a.edges:
        if x & 1 or p not in geo or q not in geo:
            continue
        if geo[q] == geo[p] + (x,) or geo[p] == geo[q] + (x ^ 1,):
            continue
        out.append(reduce_word(geo[p] + (x,) + invert_word(geo[q])))
    return out


def recognize(sec: StallingsSection, a: Automaton) -> Optional[list]:
    """Generators ``X`` such that ``a`` is the core automaton of ``<X>``, or ``None``."""
    sec.alphabet.require_same(a.alphabet)
    if not (a.is_inverse and a.has_basepoint):
        return None
    target = canonical(a)
    if canonical(restrict(a, sec.s_auto)) != target:
        return None
    gens = spanning_generators(target)
    core = stallings_automaton(sec, gens)
    return gens if core == target else None
