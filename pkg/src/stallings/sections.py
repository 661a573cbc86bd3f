"""Stallings sections: rational normal-form languages for virtually free groups.

A section is built bottom-up along a group description: free and finite
leaves use all reduced words, amalgams and HNN extensions are glued from the
sections of their factors.  The language ``S_g`` of representatives of an
element is computed by walking a word letter by letter through
``S_gh = reduce(S_g S_h) ∩ S``; the languages met on the way are interned, so
every element is reduced once and later walks are dictionary lookups.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .alphabet import InvolutiveAlphabet, Word, invert_word
from .automaton import (Automaton, concat, difference, equivalent, includes, intersection,
                        inverse_language, is_empty, language_key, minimize, relabel, shortest_word,
                        star, union)
from .errors import SectionError, SpecError
from .groups import (Amalgam, Finite, Free, GroupSpec, Hnn, amalgam_reduced_form, hnn_reduced_form,
                     order, validate_glue)
from .rational import (FiniteGroup, RationalSubstitution, benois_reduce, monoid_preimage,
                       reduced_words, substitute)


@dataclass
class AmalgamGlue:
    b_alphabet: InvolutiveAlphabet
    l_auto: Automaton          # L before reduction
    l_reduced: Automaton       # reduced words of L, which is also the identity class
    sprime: Automaton
    tprime: Automaton


@dataclass
class HnnGlue:
    c_alphabet: InvolutiveAlphabet
    l_auto: Automaton
    l_reduced: Automaton
    n_auto: Automaton
    alpha: RationalSubstitution


class StallingsSection:
    """A section ``S`` with the per-letter languages ``S_a`` and the identity class ``S_1``.

    ``gens`` is ``None`` when the alphabet is the alphabet of ``spec``; after a
    change of generators it holds, per positive letter, a word over the
    alphabet of ``spec`` naming the same element.
    """

    def __init__(self, spec: GroupSpec, alphabet: InvolutiveAlphabet, s_auto: Automaton,
                 s1_auto: Automaton, letter_sections: Sequence[Automaton], *, extendable: bool,
                 children: tuple = (), glue=None, gens: Optional[tuple] = None):
        for a in (s_auto, s1_auto, *letter_sections):
            alphabet.require_same(a.alphabet)
        if len(letter_sections) != alphabet.size:
            raise SectionError("one letter section per letter is required")
        self.spec = spec
        self.alphabet = alphabet
        self.s_auto = minimize(s_auto)
        self.s1_auto = minimize(s1_auto)
        self.letter_sections = tuple(minimize(a) for a in letter_sections)
        self.extendable = extendable
        self.children = children
        self.glue = glue
        self.gens = gens
        self.contains_empty_word = self.s_auto.accepts(())
        self.s1_nontrivial = language_key(self.s1_auto) != language_key(Automaton.epsilon(alphabet))
        self._lock = threading.Lock()
        self._langs = []
        self._ids = {}
        self._step = {}
        self._is_one = {}
        self.memo = {}
        self.one = self._intern(self.s1_auto)
        self._letter_ids = [self._intern(a) for a in self.letter_sections]

    # -- element cache --------------------------------------------------------------

    def _intern(self, lang: Automaton) -> int:
        key = language_key(lang)
        with self._lock:
            eid = self._ids.get(key)
            if eid is None:
                eid = self._ids[key] = len(self._langs)
                self._langs.append(minimize(lang))
            return eid

    def element(self, w: Sequence[int]) -> int:
        """Interned id of ``S_{wπ}``; equal ids mean equal elements."""
        w = self.alphabet.check_word(w)
        if not w:
            return self.one
        eid = self._letter_ids[w[0]]
        step = self._step
        for x in w[1:]:
            nxt = step.get((eid, x))
            if nxt is None:
                nxt = self._extend(eid, x)
            eid = nxt
        return eid

    def _extend(self, eid: int, x: int) -> int:
        prod = benois_reduce(concat(self._langs[eid], self.letter_sections[x]), minimal=False)
        nid = self._intern(intersection(prod, self.s_auto))
        self._step[(eid, x)] = nid
        return nid

    def language(self, eid: int) -> Automaton:
        return self._langs[eid]

    @property
    def cached_elements(self) -> int:
        return len(self._langs)

    # -- queries ----------------------------------------------------------------------

    def s_of_g(self, w: Sequence[int]) -> Automaton:
        """Minimal automaton of the representatives in ``S`` of the element of ``w``."""
        return self._langs[self.element(w)]

    def word_problem(self, w: Sequence[int]) -> bool:
        eid = self.element(w)
        ans = self._is_one.get(eid)
        if ans is None:
            ans = self._is_one[eid] = not is_empty(intersection(self._langs[eid], self.s1_auto))
        return ans

    def witness(self, w: Sequence[int]) -> Word:
        """Shortlex-least representative of the element of ``w``."""
        s = shortest_word(self.s_of_g(w))
        if s is None:
            raise SectionError(f"no representative for {self.alphabet.format(w)}")
        return s

    def s_of_rational(self, lang: Automaton) -> Automaton:
        """Representatives of all elements named by words of ``lang``."""
        self.alphabet.require_same(lang.alphabet)
        phi = RationalSubstitution(self.alphabet, self.alphabet,
                                   {x: self.letter_sections[x] for x in self.alphabet.letters})
        out = intersection(benois_reduce(substitute(lang, phi), minimal=False), self.s_auto)
        if lang.accepts(()):
            out = union(out, self.s1_auto)
        return minimize(out)

    def parse(self, text) -> Word:
        return self.alphabet.parse(text)

    def __repr__(self):
        return (f"StallingsSection(alphabet={list(self.alphabet.names)}, |S|={self.s_auto.n}, "
                f"extendable={self.extendable}, s1_nontrivial={self.s1_nontrivial})")


# -- helpers -------------------------------------------------------------------------


def word_automaton(alphabet: InvolutiveAlphabet, w: Sequence[int]) -> Automaton:
    return Automaton.from_words(alphabet, [w])


def embed(a: Automaton, alphabet: InvolutiveAlphabet) -> Automaton:
    """The same automaton read over a larger alphabet (letters matched by name)."""
    return relabel(a, a.alphabet.embedding(alphabet), alphabet)


def _identity_preimage(h: FiniteGroup, prefix: str) -> tuple:
    """Alphabet with one letter per element of ``h`` and the automaton of words multiplying to 1."""
    names = tuple(f"{prefix}{i}" for i in range(h.order))
    alphabet = InvolutiveAlphabet(names)
    genmap = {2 * i: i for i in range(h.order)}
    auto = monoid_preimage(h, alphabet, genmap, {h.identity}, letters=alphabet.positive)
    return alphabet, auto


def _check_glue_language(l_auto: Automaton, what: str) -> None:
    if not l_auto.accepts(()):
        raise SectionError(f"{what}: the empty word is missing from the glue language")
    if not equivalent(concat(l_auto, l_auto), l_auto):
        raise SectionError(f"{what}: the glue language is not closed under products")
    if not equivalent(inverse_language(l_auto), l_auto):
        raise SectionError(f"{what}: the glue language is not closed under inverses")


# -- leaves ----------------------------------------------------------------------------


def free_section(alphabet: InvolutiveAlphabet, spec: Optional[Free] = None) -> StallingsSection:
    if len(alphabet) == 0:
        raise SpecError("a free group needs at least one generator")
    spec = spec or Free(alphabet)
    letters = [word_automaton(alphabet, (x,)) for x in alphabet.letters]
    return StallingsSection(spec, alphabet, reduced_words(alphabet), Automaton.epsilon(alphabet),
                            letters, extendable=True)


def finite_section(spec: Finite) -> StallingsSection:
    alphabet, group = spec.alphabet, spec.group
    genmap = {x: spec.genmap[x] for x in alphabet.positive}

    def rep(g):
        return benois_reduce(monoid_preimage(group, alphabet, genmap, {g}))

    letters = [rep(spec.evaluate((x,))) for x in alphabet.letters]
    return StallingsSection(spec, alphabet, reduced_words(alphabet), rep(group.identity), letters,
                            extendable=True)


# -- combinators ------------------------------------------------------------------------


def amalgam_section(s: StallingsSection, t: StallingsSection, spec: Amalgam) -> StallingsSection:
    if s.gens is not None or t.gens is not None:
        raise SpecError("factor sections must use the generators of their group descriptions")
    s.alphabet.require_same(spec.left.alphabet)
    t.alphabet.require_same(spec.right.alphabet)
    validate_glue(spec, (s.word_problem, t.word_problem))
    alphabet = spec.alphabet
    h = spec.h
    s_h = [embed(s.s_of_g(spec.phi1[k]), alphabet) for k in range(h.order)]
    t_h = [embed(t.s_of_g(spec.phi2[k]), alphabet) for k in range(h.order)]

    b_alphabet, ones = _identity_preimage(h, "b")
    xi = RationalSubstitution(b_alphabet, alphabet,
                              {2 * k: union(s_h[k], t_h[k]) for k in range(h.order)})
    l_auto = substitute(ones, xi)
    _check_glue_language(l_auto, "amalgam")
    lr = benois_reduce(l_auto)

    s_all, t_all = embed(s.s_auto, alphabet), embed(t.s_auto, alphabet)
    sprime = minimize(difference(s_all, union(*s_h)))
    tprime = minimize(difference(t_all, union(*t_h)))
    eps = Automaton.epsilon(alphabet)
    v = minimize(union(
        benois_reduce(concat(lr, s_all, lr)),
        benois_reduce(concat(lr, t_all, lr)),
        benois_reduce(concat(union(eps, concat(lr, sprime)),
                             star(concat(lr, tprime, lr, sprime)),
                             union(lr, concat(lr, tprime, lr)))),
    ))
    k = len(spec.left.alphabet)
    letters = []
    for x in alphabet.letters:
        if x < 2 * k:
            part = embed(s.letter_sections[x], alphabet)
        else:
            part = embed(t.letter_sections[x - 2 * k], alphabet)
        letters.append(benois_reduce(concat(lr, part, lr)))
    extendable = (s.extendable and t.extendable
                  and order(spec.left) != h.order and order(spec.right) != h.order)
    glue = AmalgamGlue(b_alphabet, l_auto, lr, sprime, tprime)
    return StallingsSection(spec, alphabet, v, lr, letters, extendable=extendable,
                            children=(s, t), glue=glue)


def hnn_section(s: StallingsSection, spec: Hnn) -> StallingsSection:
    if s.gens is not None:
        raise SpecError("the base section must use the generators of its group description")
    s.alphabet.require_same(spec.base.alphabet)
    validate_glue(spec, (s.word_problem,))
    alphabet = spec.alphabet
    h = spec.h
    b = spec.stable_letter
    bw, bi = word_automaton(alphabet, (b,)), word_automaton(alphabet, (b ^ 1,))
    s_in = [embed(s.s_of_g(spec.incl[k]), alphabet) for k in range(h.order)]
    s_phi = [embed(s.s_of_g(spec.phi[k]), alphabet) for k in range(h.order)]

    c_alphabet, ones = _identity_preimage(h, "c")
    xi = RationalSubstitution(c_alphabet, alphabet,
                              {2 * k: union(s_in[k], concat(bi, s_phi[k], bw)) for k in range(h.order)})
    l_auto = substitute(ones, xi)
    _check_glue_language(l_auto, "HNN")
    lr = benois_reduce(l_auto)

    s_all = embed(s.s_auto, alphabet)
    stable = Automaton.from_words(alphabet, [(b,), (b ^ 1,)])
    anything = Automaton.universal(alphabet)
    forbidden = concat(anything, union(concat(bw, union(*s_in), bi), concat(bi, union(*s_phi), bw)),
                       anything)
    n_auto = minimize(difference(concat(star(concat(s_all, stable)), s_all), forbidden))
    images = {x: word_automaton(alphabet, (x,)) for x in alphabet.letters}
    images[b] = concat(bw, lr)
    images[b ^ 1] = concat(lr, bi)
    alpha = RationalSubstitution(alphabet, alphabet, images)
    v = benois_reduce(substitute(n_auto, alpha))

    s1 = embed(s.s1_auto, alphabet)
    letters = [embed(s.letter_sections[x], alphabet) for x in s.alphabet.letters]
    up = benois_reduce(concat(s1, bw, lr, s1))
    letters += [up, minimize(inverse_language(up))]
    glue = HnnGlue(c_alphabet, l_auto, lr, n_auto, alpha)
    return StallingsSection(spec, alphabet, v, s1, letters, extendable=s.extendable,
                            children=(s,), glue=glue)


def build_section(spec: GroupSpec) -> StallingsSection:
    """Section for a whole group description, built from the leaves up."""
    if isinstance(spec, Free):
        return free_section(spec.alphabet, spec)
    if isinstance(spec, Finite):
        return finite_section(spec)
    if isinstance(spec, Amalgam):
        return amalgam_section(build_section(spec.left), build_section(spec.right), spec)
    if isinstance(spec, Hnn):
        return hnn_section(build_section(spec.base), spec)
    raise SpecError(f"unknown group description {spec!r}")


# -- change of generators ------------------------------------------------------------------


def express_generators(sec: StallingsSection, new: InvolutiveAlphabet, newgen: Sequence[Word],
                       max_len: int = 8) -> list:
    """For every old letter, a reduced word over ``new`` naming the same element.

    Positive letters get the shortlex-least such word, inverse letters its inverse.

    ``newgen[i]`` is the old-alphabet word for the i-th new generator.  Raises
    ``SectionError`` when some old letter is not reached within ``max_len``.
    """
    images = []
    for x in new.letters:
        w = newgen[x >> 1]
        images.append(invert_word(w) if x & 1 else tuple(w))
    wanted = {}
    for x in sec.alphabet.positive:
        wanted.setdefault(sec.element((x,)), []).append(x)
    found = {}
    layer = [((), sec.one)]
    for length in range(max_len + 1):
        for w, eid in layer:
            for x in wanted.pop(eid, ()):
                found[x] = w
        if not wanted or length == max_len:
            break
        nxt = []
        for w, eid in layer:
            for y in new.letters:
                if w and w[-1] == y ^ 1:
                    continue
                e = eid
                for z in images[y]:
                    e = _step(sec, e, z)
                nxt.append((w + (y,), e))
        layer = nxt
    if wanted:
        missing = sorted(x for xs in wanted.values() for x in xs)
        raise SectionError("new generators do not reach "
                           + ", ".join(sec.alphabet.name(x) for x in missing))
    # inverse letters take the inverted word, so the substitution stays matched
    return [invert_word(found[x ^ 1]) if x & 1 else found[x] for x in sec.alphabet.letters]


def _step(sec: StallingsSection, eid: int, x: int) -> int:
    nxt = sec._step.get((eid, x))
    return nxt if nxt is not None else sec._extend(eid, x)


def transport(sec: StallingsSection, new: InvolutiveAlphabet, newgen: Mapping[str, object],
              expressions: Optional[Mapping[int, Word]] = None, max_len: int = 8) -> StallingsSection:
    """Section for new generators given as words over the old alphabet.

    Old letters are rewritten over the new alphabet (searched when
    ``expressions`` is omitted); ``S`` and every ``S_g`` are carried across
    by that substitution followed by free reduction.  That the new generators
    generate the group is the caller's assumption.
    """
    gen_words = [sec.alphabet.parse(newgen[n]) for n in new.names]
    if expressions is None:
        exprs = express_generators(sec, new, gen_words, max_len)
    else:
        exprs = [tuple(expressions[x]) for x in sec.alphabet.letters]
    phi = RationalSubstitution(sec.alphabet, new,
                               {x: word_automaton(new, exprs[x]) for x in sec.alphabet.letters})

    def carry(a):
        return benois_reduce(substitute(a, phi))

    letters = []
    for y in new.letters:
        w = gen_words[y >> 1]
        letters.append(carry(sec.s_of_g(invert_word(w) if y & 1 else w)))
    old_gens = sec.gens
    if old_gens is not None:
        gen_words = [_compose(old_gens, sec.alphabet, w) for w in gen_words]
    return StallingsSection(sec.spec, new, carry(sec.s_auto), carry(sec.s1_auto), letters,
                            extendable=False, children=(sec,), gens=tuple(gen_words))


def _compose(old_gens: Sequence[Word], alphabet: InvolutiveAlphabet, w: Word) -> Word:
    out = []
    for x in w:
        img = old_gens[x >> 1]
        out.extend(invert_word(img) if x & 1 else img)
    return tuple(out)


# -- validation -----------------------------------------------------------------------------


@dataclass
class Violation:
    check: str
    detail: str
    witness: tuple = ()


@dataclass
class SectionReport:
    """Outcome of the sampled axiom checks (never a proof of the second axiom)."""
    violations: list = field(default_factory=list)
    samples: int = 0
    flags: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self, alphabet: InvolutiveAlphabet) -> list:
        out = [f"samples {self.samples}"]
        out += [f"{k} {str(v).lower()}" for k, v in sorted(self.flags.items())]
        for v in self.violations:
            wit = " | ".join(alphabet.format(w) for w in v.witness)
            out.append(f"violation {v.check}: {v.detail}" + (f" [{wit}]" if wit else ""))
        out.append("ok" if self.ok else "failed")
        return out


def validate_section(sec: StallingsSection, budget: int = 200, seed: int = 0,
                     max_len: int = 4) -> SectionReport:
    report = SectionReport(flags={
        "contains_empty_word": sec.contains_empty_word,
        "extendable": sec.extendable,
        "s1_nontrivial": sec.s1_nontrivial,
    })
    bad = report.violations.append
    alphabet = sec.alphabet
    s = sec.s_auto
    if not includes(s, reduced_words(alphabet)):
        bad(Violation("reduced", "S contains a word that is not reduced", (shortest_word(
            difference(s, reduced_words(alphabet))),)))
    if not equivalent(inverse_language(s), s):
        bad(Violation("inverse", "S is not closed under inverses"))
    if not includes(sec.s1_auto, s):
        bad(Violation("identity", "S_1 is not contained in S"))
    for x in alphabet.letters:
        lx = sec.letter_sections[x]
        if lx.is_empty:
            bad(Violation("nonempty", f"letter section of {alphabet.name(x)} is empty", ((x,),)))
        if not includes(lx, s):
            bad(Violation("letter", f"letter section of {alphabet.name(x)} leaves S", ((x,),)))
        if not equivalent(inverse_language(lx), sec.letter_sections[x ^ 1]):
            bad(Violation("letter-inverse", f"letter sections of {alphabet.name(x)} and its inverse "
                          "are not mutually inverse", ((x,),)))
    if alphabet.size == 0:
        return report
    rng = random.Random(seed)
    letters = list(alphabet.letters)

    def sample():
        return tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))

    for _ in range(budget):
        u, v = sample(), sample()
        report.samples += 1
        su, sv = sec.s_of_g(u), sec.s_of_g(v)
        if su.is_empty:
            bad(Violation("nonempty", "no representative", (u,)))
            continue
        if not includes(sec.s_of_g(u + v), benois_reduce(concat(su, sv))):
            bad(Violation("product", "S_uv is not inside the reduced product S_u S_v", (u, v)))
        same = sec.word_problem(u + invert_word(v))
        if same and not equivalent(su, sv):
            bad(Violation("well-defined", "equal elements with different representative sets", (u, v)))
        if not same and not is_empty(intersection(su, sv)):
            bad(Violation("disjoint", "distinct elements share a representative", (u, v)))
        if not equivalent(sec.s_of_g(invert_word(u)), inverse_language(su)):
            bad(Violation("inverse", "representatives of u^-1 are not the inverses of those of u", (u,)))
    return report


# -- reduced-form cross-checks ------------------------------------------------------------------


def factor_oracles(sec: StallingsSection) -> tuple:
    return tuple(child.word_problem for child in sec.children)


def reduced_form(sec: StallingsSection, w: Sequence[int]):
    """Reduced form of ``w`` in a combinator section, decided by the factor sections."""
    if isinstance(sec.spec, Amalgam) and sec.gens is None:
        return amalgam_reduced_form(w, sec.spec, factor_oracles(sec))
    if isinstance(sec.spec, Hnn) and sec.gens is None:
        return hnn_reduced_form(w, sec.spec, sec.children[0].word_problem)
    raise SectionError("reduced forms exist only for amalgam and HNN sections")


def reduced_form_language(sec: StallingsSection, w: Sequence[int]) -> Automaton:
    """``S_g`` assembled syllable by syllable from a reduced form of ``g``.

    Independent of :meth:`StallingsSection.s_of_g`; used to cross-check it.
    """
    alphabet = sec.alphabet
    lr = sec.glue.l_reduced
    form = reduced_form(sec, w)
    if isinstance(sec.spec, Amalgam):
        parts = [lr]
        for side, word in form.syllables:
            parts += [embed(sec.children[side].s_of_g(word), alphabet), lr]
        return benois_reduce(concat(*parts))
    base = sec.children[0]
    b = sec.spec.stable_letter
    bw, bi = word_automaton(alphabet, (b,)), word_automaton(alphabet, (b ^ 1,))
    parts = [embed(base.s_of_g(form.segments[0]), alphabet)]
    for e, seg in zip(form.exponents, form.segments[1:]):
        parts += [concat(bw, lr) if e == 1 else concat(lr, bi), embed(base.s_of_g(seg), alphabet)]
    return benois_reduce(concat(*parts))

