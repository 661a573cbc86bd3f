"""Compositional descriptions of virtually free groups and their reduced forms.

A group is a tree of constructors over free and finite leaves: amalgamated
free products and HNN extensions, both over finite groups.  Every node knows
its involutive alphabet; the generators of a node are the letters of that
alphabet.  Words inside a node are tuples of letter codes of the node's own
alphabet.

Reduced forms need to decide equality in the factors.  They take word-problem
callables (``word -> bool``, true iff the word is the identity) instead of
sections, so this module does not depend on how those are computed.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Optional, Sequence, Union

from .alphabet import InvolutiveAlphabet, Word, invert_word
from .errors import SpecError
from .rational import FiniteGroup, reduce_word

WordOracle = Callable[[Word], bool]


@dataclass(frozen=True, eq=False)
class Free:
    alphabet: InvolutiveAlphabet

    def __post_init__(self):
        if len(self.alphabet) == 0:
            raise SpecError("a free group needs at least one generator")


@dataclass(frozen=True, eq=False)
class Finite:
    """A finite group with the images of the positive letters (``genmap[code] = element index``)."""
    alphabet: InvolutiveAlphabet
    group: FiniteGroup
    genmap: Mapping[int, int]

    def __post_init__(self):
        for x in self.alphabet.positive:
            if x not in self.genmap:
                raise SpecError(f"generator {self.alphabet.name(x)} has no image")
        image = set(self.genmap.values())
        if _generated(self.group, image) != set(range(self.group.order)):
            raise SpecError("generator images do not generate the group")

    def evaluate(self, w: Sequence[int]) -> int:
        g = self.group
        acc = g.identity
        for x in w:
            e = self.genmap[x & ~1]
            acc = g.mul(acc, g.inv(e) if x & 1 else e)
        return acc


@dataclass(frozen=True, eq=False)
class Amalgam:
    """``left *_H right`` where ``phi1``/``phi2`` send each element of ``h`` to a word of a factor."""
    left: "GroupSpec"
    right: "GroupSpec"
    h: FiniteGroup
    phi1: tuple  # indexed by element of h
    phi2: tuple

    @cached_property
    def alphabet(self) -> InvolutiveAlphabet:
        return self.left.alphabet.disjoint_union(self.right.alphabet)

    def factor(self, side: int) -> "GroupSpec":
        return self.right if side else self.left

    def images(self, side: int) -> tuple:
        return self.phi2 if side else self.phi1


@dataclass(frozen=True, eq=False)
class Hnn:
    """``<base, t | t h t^-1 = phi(h)>`` with ``H`` given by ``incl`` inside the base."""
    base: "GroupSpec"
    stable: str
    h: FiniteGroup
    incl: tuple
    phi: tuple

    @cached_property
    def alphabet(self) -> InvolutiveAlphabet:
        return self.base.alphabet.extended(self.stable)

    @property
    def stable_letter(self) -> int:
        return 2 * len(self.base.alphabet)


GroupSpec = Union[Free, Finite, Amalgam, Hnn]


def _generated(group: FiniteGroup, gens) -> set:
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        g = frontier.pop()
        for s in gens:
            for k in (group.mul(g, s), group.mul(g, group.inv(s))):
                if k not in seen:
                    seen.add(k)
                    frontier.append(k)
    return seen


def order(spec: GroupSpec) -> Optional[int]:
    """Order of the group, ``None`` when infinite."""
    if isinstance(spec, Free):
        return None
    if isinstance(spec, Finite):
        return spec.group.order
    if isinstance(spec, Amalgam):
        left, right = order(spec.left), order(spec.right)
        # an amalgam is finite only when it collapses onto a finite factor
        if left == spec.h.order:
            return right
        if right == spec.h.order:
            return left
        return None
    return None


# -- validation ---------------------------------------------------------------------


def _check_embedding(h: FiniteGroup, images: Sequence[Word], wp: WordOracle, what: str) -> None:
    if len(images) != h.order:
        raise SpecError(f"{what}: expected {h.order} images, got {len(images)}")
    names = h.elements
    for x in range(h.order):
        for y in range(h.order):
            xy = h.mul(x, y)
            if not wp(images[x] + images[y] + invert_word(images[xy])):
                raise SpecError(f"{what} is not a homomorphism on ({names[x]}, {names[y]})",
                                witness=(names[x], names[y]))
    for x in range(h.order):
        if x != h.identity and wp(images[x]):
            raise SpecError(f"{what} is not injective: {names[x]} maps to the identity",
                            witness=(names[x],))


def validate_glue(spec: GroupSpec, oracles: Sequence[WordOracle]) -> None:
    """Check the gluing maps of a combinator node with the word problem of its factors.

    ``oracles`` holds one callable for the base of an HNN extension, two for
    the factors of an amalgam.  Leaves need no oracle.  Raises ``SpecError``
    naming the first violated axiom.
    """
    if isinstance(spec, Amalgam):
        _check_embedding(spec.h, spec.phi1, oracles[0], "phi1")
        _check_embedding(spec.h, spec.phi2, oracles[1], "phi2")
    elif isinstance(spec, Hnn):
        _check_embedding(spec.h, spec.incl, oracles[0], "incl")
        _check_embedding(spec.h, spec.phi, oracles[0], "phi")


def validate_spec(spec: GroupSpec, oracle_for: Callable[[GroupSpec], WordOracle]) -> None:
    """Validate a whole tree; ``oracle_for(node)`` supplies the word problem of a node."""
    if isinstance(spec, Amalgam):
        validate_spec(spec.left, oracle_for)
        validate_spec(spec.right, oracle_for)
        validate_glue(spec, (oracle_for(spec.left), oracle_for(spec.right)))
    elif isinstance(spec, Hnn):
        validate_spec(spec.base, oracle_for)
        validate_glue(spec, (oracle_for(spec.base),))


def subgroup_element(word: Word, images: Sequence[Word], wp: WordOracle) -> Optional[int]:
    """The ``h`` with ``word = images[h]`` in the group of ``wp``, or ``None``."""
    for h, img in enumerate(images):
        if wp(tuple(word) + invert_word(img)):
            return h
    return None


# -- reduced forms ------------------------------------------------------------------


@dataclass(frozen=True)
class AmalgamForm:
    """Alternating syllables ``(side, word)``; side 0 is the left factor, 1 the right one."""
    syllables: tuple

    @property
    def length(self) -> int:
        return len(self.syllables)


@dataclass(frozen=True)
class HnnForm:
    """``w0 t^e1 w1 ... t^en wn`` stored as base-word segments and stable-letter exponents."""
    segments: tuple
    exponents: tuple

    @property
    def length(self) -> int:
        return len(self.exponents)


def split_syllables(spec: Amalgam, w: Sequence[int]) -> list:
    """Maximal one-factor blocks of ``w``, as ``(side, factor word)``."""
    k = len(spec.left.alphabet)
    out = []
    for x in w:
        side = int(x >= 2 * k)
        y = x - 2 * k if side else x
        if out and out[-1][0] == side:
            out[-1][1].append(y)
        else:
            out.append((side, [y]))
    return [(s, tuple(y)) for s, y in out]


def amalgam_reduced_form(w: Sequence[int], spec: Amalgam, oracles: Sequence[WordOracle]) -> AmalgamForm:
    """A reduced form of the element of ``w`` (a word over the union alphabet)."""
    member_cache = {}

    def in_h(side, word):
        key = (side, word)
        if key not in member_cache:
            member_cache[key] = subgroup_element(word, spec.images(side), oracles[side])
        return member_cache[key]

    def convert(h, side):
        return spec.images(side)[h]

    stack = []

    def push(side, word):
        word = reduce_word(word)
        while True:
            if not stack:
                stack.append((side, word))
                return
            top_side, top_word = stack[-1]
            if top_side == side:
                stack.pop()
                side, word = side, reduce_word(top_word + word)
                if not stack:
                    stack.append((side, word))
                    return
                h = in_h(side, word)
                if h is None:
                    stack.append((side, word))
                    return
                side, word = 1 - side, convert(h, 1 - side)
                continue
            h = in_h(side, word)
            if h is not None:
                side, word = top_side, convert(h, top_side)
                continue
            if len(stack) == 1:
                ht = in_h(top_side, top_word)
                if ht is not None:
                    stack.pop()
                    word = reduce_word(convert(ht, side) + word)
                    continue
            stack.append((side, word))
            return

    for side, word in split_syllables(spec, w):
        push(side, word)
    if not stack:
        stack.append((0, ()))
    return AmalgamForm(tuple(stack))


def hnn_reduced_form(w: Sequence[int], spec: Hnn, oracle: WordOracle) -> HnnForm:
    """Britton reduction of ``w`` (a word over the base alphabet plus the stable letter)."""
    t = spec.stable_letter
    segments = [[]]
    exponents = []
    for x in w:
        if x >> 1 != t >> 1:
            segments[-1].append(x)
            continue
        e = -1 if x & 1 else 1
        if exponents and exponents[-1] == -e:
            seg = reduce_word(segments[-1])
            if exponents[-1] == 1:
                h = subgroup_element(seg, spec.incl, oracle)
                repl = spec.phi[h] if h is not None else None
            else:
                h = subgroup_element(seg, spec.phi, oracle)
                repl = spec.incl[h] if h is not None else None
            if repl is not None:
                segments.pop()
                exponents.pop()
                segments[-1].extend(repl)
                continue
        exponents.append(e)
        segments.append([])
    return HnnForm(tuple(reduce_word(s) for s in segments), tuple(exponents))


# -- construction from plain data -------------------------------------------------------


def parse_h_map(h: FiniteGroup, alphabet: InvolutiveAlphabet, mapping: Mapping[str, object], what: str) -> tuple:
    """Turn ``{element name: word}`` into a tuple of words indexed by element."""
    missing = [e for e in h.elements if e not in mapping]
    if missing:
        raise SpecError(f"{what} has no image for {missing[0]}", witness=(missing[0],))
    extra = [e for e in mapping if e not in h.elements]
    if extra:
        raise SpecError(f"{what} maps unknown element {extra[0]}", witness=(extra[0],))
    return tuple(alphabet.parse(mapping[e]) for e in h.elements)


def spec_from_tree(tree: Mapping) -> GroupSpec:
    """Build a group description from the tagged-tree form used by group documents."""
    if not isinstance(tree, Mapping) or len(tree) != 1:
        raise SpecError("group node must be an object with exactly one constructor key")
    (kind, body), = tree.items()
    if kind == "free":
        gens = body.get("generators") if isinstance(body, Mapping) else body
        return Free(InvolutiveAlphabet(tuple(gens or ())))
    if kind == "finite":
        group = FiniteGroup(body["elements"], body["identity"], body["table"])
        genmap_names = body["genmap"]
        alphabet = InvolutiveAlphabet(tuple(genmap_names))
        genmap = {alphabet.letter(a): group.index(v) for a, v in genmap_names.items()}
        return Finite(alphabet, group, genmap)
    if kind == "amalgam":
        left, right = spec_from_tree(body["left"]), spec_from_tree(body["right"])
        h = _h_group(body["h"])
        spec = Amalgam(left, right, h, parse_h_map(h, left.alphabet, body["phi1"], "phi1"),
                       parse_h_map(h, right.alphabet, body["phi2"], "phi2"))
        spec.alphabet  # raises on clashing letters
        return spec
    if kind == "hnn":
        base = spec_from_tree(body["base"])
        h = _h_group(body["h"])
        spec = Hnn(base, str(body["stable"]), h, parse_h_map(h, base.alphabet, body["incl"], "incl"),
                   parse_h_map(h, base.alphabet, body["phi"], "phi"))
        spec.alphabet  # raises when the stable letter is not fresh
        return spec
    raise SpecError(f"unknown group constructor {kind!r}")


def _h_group(body: Mapping) -> FiniteGroup:
    return FiniteGroup(body["elements"], body["identity"], body["table"])


def spec_to_tree(spec: GroupSpec) -> dict:
    if isinstance(spec, Free):
        return {"free": {"generators": list(spec.alphabet.names)}}
    if isinstance(spec, Finite):
        g = spec.group
        return {"finite": {
            "elements": list(g.elements),
            "identity": g.elements[g.identity],
            "table": [[g.elements[v] for v in row] for row in g.table],
            "genmap": {spec.alphabet.name(x): g.elements[spec.genmap[x]] for x in spec.alphabet.positive},
        }}
    if isinstance(spec, Amalgam):
        return {"amalgam": {
            "left": spec_to_tree(spec.left), "right": spec_to_tree(spec.right), "h": _h_tree(spec.h),
            "phi1": _h_map_tree(spec.h, spec.left.alphabet, spec.phi1),
            "phi2": _h_map_tree(spec.h, spec.right.alphabet, spec.phi2),
        }}
    return {"hnn": {
        "base": spec_to_tree(spec.base), "stable": spec.stable, "h": _h_tree(spec.h),
        "incl": _h_map_tree(spec.h, spec.base.alphabet, spec.incl),
        "phi": _h_map_tree(spec.h, spec.base.alphabet, spec.phi),
    }}


def _h_tree(h: FiniteGroup) -> dict:
    return {"elements": list(h.elements), "identity": h.elements[h.identity],
            "table": [[h.elements[v] for v in row] for row in h.table]}


def _h_map_tree(h: FiniteGroup, alphabet: InvolutiveAlphabet, images: Sequence[Word]) -> dict:
    return {e: alphabet.format(images[i]) for i, e in enumerate(h.elements)}
