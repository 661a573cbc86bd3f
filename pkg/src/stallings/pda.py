"""Pushdown automaton for the word problem of a group with a Stallings section.

The stack always holds a bottom marker followed by a freely reduced word.
Reading a letter ``a`` moves into a copy of the minimal automaton of
``S_a``; silent moves through that copy push the letters of a representative
onto the stack, cancelling against the top where possible.  A word is
accepted when the stack is back to the bare marker at the end of a copy.
"""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .alphabet import InvolutiveAlphabet
from .automaton import Automaton, minimize, union
from .errors import MalformedInputError
from .sections import StallingsSection

BOTTOM = -2

# transition families, in the order the construction lists them
EMPTY_WORD, FIRST_LETTER, PUSH_ON_BOTTOM, PUSH_REDUCED, NEXT_LETTER, FINISH = range(6)
FAMILY_NAMES = ("empty-word", "first-letter", "push-on-bottom", "push-reduced", "next-letter", "finish")


@dataclass(frozen=True)
class Transition:
    source: int
    letter: Optional[int]  # None for a silent move
    top: int
    target: int
    push: tuple  # replaces ``top``; written bottom to top
    family: int


@dataclass
class PdaSpec:
    """States are integers: 0 is the start, 1 the accepting state, then one block per letter."""
    alphabet: InvolutiveAlphabet
    state_names: tuple
    transitions: tuple
    letter_blocks: tuple = ()  # per letter: (offset, size, initial, terminals)
    _index: dict = field(default=None, repr=False, compare=False)

    initial = 0
    accepting = 1

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def moves(self) -> dict:
        """Transitions grouped by ``(state, top)``."""
        if self._index is None:
            index = {}
            for tr in self.transitions:
                index.setdefault((tr.source, tr.top), []).append(tr)
            self._index = index
        return self._index

    def family_counts(self) -> list:
        counts = [0] * len(FAMILY_NAMES)
        for tr in self.transitions:
            counts[tr.family] += 1
        return counts


def _letter_automata(sec: StallingsSection) -> list:
    """Minimal automata of the letter sections, with the empty word added to any that name 1."""
    out = []
    eps = Automaton.epsilon(sec.alphabet)
    for x in sec.alphabet.letters:
        a = sec.letter_sections[x]
        if not sec.contains_empty_word and sec.word_problem((x,)):
            a = union(a, eps)
        out.append(minimize(a))
    return out


def emit_pda(sec: StallingsSection) -> PdaSpec:
    alphabet = sec.alphabet
    letters = alphabet.letters
    names = ["q0", "t"]
    blocks = []
    for x, a in zip(letters, _letter_automata(sec)):
        off = len(names)
        names.extend(f"{alphabet.name(x)}.{i}" for i in range(a.n))
        blocks.append((off, a))
    stack_symbols = (BOTTOM, *letters)
    trs = [Transition(0, None, BOTTOM, 1, (), EMPTY_WORD)]
    for x, (off, a) in zip(letters, blocks):
        trs.append(Transition(0, x, BOTTOM, off + a.initial, (BOTTOM,), FIRST_LETTER))
    for off, a in blocks:
        for p, b, q in a.edges:
            trs.append(Transition(off + p, None, BOTTOM, off + q, (BOTTOM, b), PUSH_ON_BOTTOM))
            for c in letters:
                push = () if c == b ^ 1 else (c, b)
                trs.append(Transition(off + p, None, c, off + q, push, PUSH_REDUCED))
    for off, a in blocks:
        for t in sorted(a.terminals):
            for y, (off_y, a_y) in zip(letters, blocks):
                for d in stack_symbols:
                    trs.append(Transition(off + t, y, d, off_y + a_y.initial, (d,), NEXT_LETTER))
    for off, a in blocks:
        for t in sorted(a.terminals):
            trs.append(Transition(off + t, None, BOTTOM, 1, (), FINISH))
    info = tuple((off, a.n, a.initial, tuple(sorted(a.terminals))) for off, a in blocks)
    return PdaSpec(alphabet, tuple(names), tuple(trs), info)


# -- bounded search ---------------------------------------------------------------------


class Outcome(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    CUTOFF = "cutoff"


@dataclass
class PdaRun:
    outcome: Outcome
    explored: int
    pruned: int
    budget_hit: bool = False


def _check_stack(stack: tuple) -> None:
    if not stack:
        return
    assert stack[0] == BOTTOM, "stack lost its bottom marker"
    for i in range(1, len(stack)):
        assert stack[i] >= 0, "bottom marker above the bottom"
        if i > 1:
            assert stack[i] != stack[i - 1] ^ 1, "stack word is not reduced"


def pda_run(p: PdaSpec, w: Sequence[int], cutoff: int, max_configurations: Optional[int] = None) -> PdaRun:
    """Search the configurations with at most ``cutoff`` letters above the marker.

    Rejects only when the search finishes without pruning anything; a
    configuration budget, when given, also ends the search with ``cutoff``.
    Low stacks and long consumed prefixes are expanded first, which finds
    accepting runs early without changing the set of configurations explored
    by a finished search.
    """
    if cutoff < 1:
        raise MalformedInputError("cutoff must be at least 1")
    w = p.alphabet.check_word(w)
    moves = p.moves()
    n = len(w)
    start = (0, p.initial, (BOTTOM,))
    seen = {start}
    queue = [(0, 0, 0, start)]
    tick = 0
    pruned = 0
    while queue:
        if max_configurations is not None and len(seen) > max_configurations:
            return PdaRun(Outcome.CUTOFF, len(seen), pruned, budget_hit=True)
        i, state, stack = heapq.heappop(queue)[3]
        if state == p.accepting:
            if i == n:
                return PdaRun(Outcome.ACCEPT, len(seen), pruned)
            continue
        for tr in moves.get((state, stack[-1]), ()):
            j = i
            if tr.letter is not None:
                if i == n or w[i] != tr.letter:
                    continue
                j = i + 1
            new = stack[:-1] + tr.push
            if len(new) - 1 > cutoff:
                pruned += 1
                continue
            conf = (j, tr.target, new)
            if conf not in seen:
                _check_stack(new)
                seen.add(conf)
                tick += 1
                heapq.heappush(queue, (len(new), -j, tick, conf))
    return PdaRun(Outcome.CUTOFF if pruned else Outcome.REJECT, len(seen), pruned)


def pda_accepts(p: PdaSpec, w: Sequence[int], cutoff: int, max_configurations: Optional[int] = None) -> Outcome:
    return pda_run(p, w, cutoff, max_configurations).outcome


# -- text format ------------------------------------------------------------------------


def _symbol(p: PdaSpec, d: int) -> str:
    return "$" if d == BOTTOM else p.alphabet.name(d)


def pda_to_text(p: PdaSpec) -> str:
    """One transition per line: ``state input top -> state push``; ``-`` marks silent or empty."""
    for name in p.alphabet.names:
        if name == "$" or "," in name or "#" in name:
            raise MalformedInputError(f"letter name {name!r} cannot be written in the PDA text format")
    lines = [
        "# pushdown automaton; stack bottom is $, push words are written bottom to top",
        "alphabet " + " ".join(p.alphabet.names),
        f"start {p.state_names[p.initial]}",
        f"accept {p.state_names[p.accepting]}",
        "states " + " ".join(p.state_names),
    ]
    for tr in p.transitions:
        inp = "-" if tr.letter is None else p.alphabet.name(tr.letter)
        push = ",".join(_symbol(p, d) for d in tr.push) or "-"
        lines.append(f"{p.state_names[tr.source]} {inp} {_symbol(p, tr.top)} -> "
                     f"{p.state_names[tr.target]} {push}")
    return "\n".join(lines) + "\n"


def _family(source: int, letter, top: int, target: int) -> int:
    if source == PdaSpec.initial:
        return EMPTY_WORD if letter is None else FIRST_LETTER
    if target == PdaSpec.accepting:
        return FINISH
    if letter is not None:
        return NEXT_LETTER
    return PUSH_ON_BOTTOM if top == BOTTOM else PUSH_REDUCED


def pda_from_text(text: str) -> PdaSpec:
    alphabet = None
    listed = []
    ends = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "alphabet":
            alphabet = InvolutiveAlphabet(parts[1:])
        elif parts[0] in ("start", "accept") and len(parts) == 2:
            ends[parts[0]] = parts[1]
        elif parts[0] == "states":
            listed.extend(parts[1:])
        elif len(parts) == 6 and parts[3] == "->":
            rows.append((lineno, parts))
        else:
            raise MalformedInputError(f"line {lineno}: cannot parse {raw!r}")
    if alphabet is None:
        raise MalformedInputError("missing alphabet line")
    if set(ends) != {"start", "accept"} or ends["start"] == ends["accept"]:
        raise MalformedInputError("need distinct start and accept lines")
    names = {ends["start"]: 0, ends["accept"]: 1}
    order = [ends["start"], ends["accept"]]

    def state(name):
        if name not in names:
            names[name] = len(order)
            order.append(name)
        return names[name]

    for name in listed:
        state(name)

    def symbol(tok, lineno):
        if tok == "$":
            return BOTTOM
        try:
            return alphabet.code(tok)
        except MalformedInputError as exc:
            raise MalformedInputError(f"line {lineno}: {exc}") from None

    trs = []
    for lineno, (src, inp, top, _, dst, push) in rows:
        s, d = state(src), state(dst)
        letter = None if inp == "-" else symbol(inp, lineno)
        pw = () if push == "-" else tuple(symbol(t, lineno) for t in push.split(","))
        tp = symbol(top, lineno)
        trs.append(Transition(s, letter, tp, d, pw, _family(s, letter, tp, d)))
    return PdaSpec(alphabet, tuple(order), tuple(trs))
