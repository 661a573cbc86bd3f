import pytest
from hypothesis import given, settings, strategies as st

from conftest import section
from oracles import (free_product_identity, free_reduce, in_dinf_ab, invert, naive_member, naive_stallings_graph,
                     reduced_words_upto, z2_times_z_identity)
from stallings.alphabet import InvolutiveAlphabet
from stallings.automaton import (Automaton, difference, equivalent, includes, intersection, inverse_language,
                                 is_empty, star, words)
from stallings.groups import spec_from_tree
from stallings.pipeline import member, stallings_automaton
from stallings.rational import reduced_words
from stallings.sections import (StallingsSection, build_section, reduced_form_language, transport,
                                validate_section)


def lang(auto, n):
    return set(words(auto, n))


# -- leaves -------------------------------------------------------------------------------------


def test_free_rank_one_section():
    sec = section("f1")
    assert lang(sec.s_auto, 4) == set(reduced_words_upto(2, 4))
    assert lang(sec.s_of_g(sec.parse("a")), 4) == {(0,)}
    assert not sec.s1_nontrivial and sec.extendable


def test_free_rank_two_element_languages():
    sec = section("f2")
    assert lang(sec.s_of_g(sec.parse("a b")), 5) == {(0, 2)}
    assert lang(sec.s_of_g(sec.parse("a b^-1")), 5) == {(0, 3)}
    assert equivalent(inverse_language(sec.s_auto), sec.s_auto)


def test_z2_identity_class_is_even_powers():
    sec = section("z2")
    expected = {w for w in reduced_words_upto(2, 6) if len(w) % 2 == 0}
    assert lang(sec.s1_auto, 6) == expected
    assert sec.s1_nontrivial and sec.extendable


def test_z3_a_to_the_fourth_is_a_representative_of_a():
    sec = section("z3")
    assert sec.s_of_g(sec.parse("a")).accepts((0,) * 4)
    assert equivalent(sec.s_of_g(sec.parse("a a a")), sec.s1_auto)


def test_trivial_group_identity_class_is_everything():
    sec = build_section(spec_from_tree({"finite": {"elements": ["e"], "identity": "e", "table": [["e"]],
                                                   "genmap": {"a": "e"}}}))
    assert equivalent(sec.s1_auto, sec.s_auto)
    assert equivalent(sec.s_auto, reduced_words(sec.alphabet))


# -- combinators -----------------------------------------------------------------------------------


def test_dinf_section():
    sec = section("dinf")
    assert sec.s_auto.accepts(sec.parse("a b"))
    assert not sec.word_problem(sec.parse("a b a b"))
    assert sec.word_problem(sec.parse("a b b a"))
    assert equivalent(inverse_language(sec.s_auto), sec.s_auto)
    assert not is_empty(intersection(sec.s_of_g(sec.parse("a b b a")), sec.s1_auto))


def test_z2z3_section():
    sec = section("z2z3")
    assert sec.s_of_g(sec.parse("a b")).accepts(sec.parse("a b"))
    core = stallings_automaton(sec, [sec.parse("a b")])
    assert member(sec, core, sec.parse("a b a b a b"))


def test_hnn_section():
    sec = section("hnn")
    assert sec.s_auto.accepts(sec.parse("t"))
    assert sec.word_problem(sec.parse("t a t^-1 a"))
    assert not sec.glue.n_auto.accepts(sec.parse("t a t^-1"))


def test_rank_one_free_group_as_hnn_of_the_trivial_group():
    tree = {"hnn": {"base": {"finite": {"elements": ["e"], "identity": "e", "table": [["e"]], "genmap": {}}},
                    "stable": "t", "h": {"elements": ["e"], "identity": "e", "table": [["e"]]},
                    "incl": {"e": "1"}, "phi": {"e": "1"}}}
    sec = build_section(spec_from_tree(tree))
    assert lang(sec.s_auto, 4) == set(reduced_words_upto(2, 4))
    assert lang(sec.s_of_g(sec.parse("t")), 4) == {(0,)}


# -- queries --------------------------------------------------------------------------------------------


def test_s_of_rational_examples():
    f2, z2, dinf = section("f2"), section("z2"), section("dinf")
    assert lang(f2.s_of_rational(Automaton.from_words(f2.alphabet, [(0,)])), 4) == {(0,)}
    assert equivalent(z2.s_of_rational(star(Automaton.from_words(z2.alphabet, [(0,)]))), z2.s_auto)
    reps = dinf.s_of_rational(star(Automaton.from_words(dinf.alphabet, [dinf.parse("a b")])))
    assert not reps.accepts(dinf.parse("a")) and reps.accepts(dinf.parse("a b"))
    for w in words(reps, 6):
        assert in_dinf_ab(w)


@pytest.mark.parametrize("name, word, expected", [
    ("f2", "a a^-1", True),
    ("z3", "a a a", True),
    ("z3", "a", False),
    ("hnn", "t a t^-1 a", True),
    ("sl2", "a a b b b", True),
    ("sl2", "a a b", False),
    ("sl2", "a a a a", True),
    ("sl2", "a a b^-1 b^-1 b^-1", True),
])
def test_word_problem_examples(name, word, expected):
    sec = section(name)
    assert sec.word_problem(sec.parse(word)) is expected


def test_witness_is_a_representative():
    sec = section("dinf")
    w = sec.parse("a b b a a")
    assert sec.s_of_g(w).accepts(sec.witness(w))


# -- transport ------------------------------------------------------------------------------------------


def test_identity_renaming_keeps_the_languages():
    sec = section("f2")
    t = transport(sec, sec.alphabet, {"a": "a", "b": "b"})
    assert equivalent(t.s_auto, sec.s_auto)
    for x in sec.alphabet.letters:
        assert equivalent(t.letter_sections[x], sec.letter_sections[x])


def test_free_transport_keeps_membership():
    old = section("f2")
    xy = InvolutiveAlphabet(["x", "y"])
    new = transport(old, xy, {"x": "a", "y": "a b"})
    assert validate_section(new, budget=60).ok
    # <a^2, b^2> in new coordinates: b = x^-1 y
    gens = [new.parse("x x"), new.parse("x^-1 y x^-1 y")]
    core = stallings_automaton(new, gens)
    graph = naive_stallings_graph([old.parse("a a"), old.parse("b b")])
    subst = {0: (0,), 1: (1,), 2: (0, 2), 3: (3, 1)}
    for w in reduced_words_upto(4, 4):
        old_w = tuple(x for y in w for x in subst[y])
        assert member(new, core, w) == naive_member(graph, old_w)


def test_doubled_generator_in_z2():
    new = transport(section("z2"), InvolutiveAlphabet(["x", "y"]), {"x": "a", "y": "a"})
    assert new.word_problem(new.parse("x y^-1"))
    assert validate_section(new, budget=60).ok


# -- validation --------------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["f1", "f2", "z2", "z3", "dinf", "z2z3", "hnn", "sl2"])
def test_constructed_sections_validate(name):
    sec = section(name)
    report = validate_section(sec, budget=40, seed=1)
    assert report.ok, report.lines(sec.alphabet)
    assert report.lines(sec.alphabet)[-1] == "ok"


def test_dropping_a_representative_is_caught():
    sec = section("z2")
    a = sec.alphabet

    def drop(x, w):
        return difference(x, Automaton.from_words(a, [w]))

    letters = list(sec.letter_sections)
    letters[0], letters[1] = drop(letters[0], (0,)), drop(letters[1], (1,))
    bad = StallingsSection(sec.spec, a, sec.s_auto, sec.s1_auto, letters, extendable=True)
    report = validate_section(bad, budget=200)
    assert not report.ok
    v = report.violations[0]
    assert v.witness and all(isinstance(w, tuple) for w in v.witness)
    assert report.lines(a)[-1] == "failed"


# -- properties ---------------------------------------------------------------------------------------------

small_words = st.lists(st.integers(0, 3), max_size=8).map(tuple)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["dinf", "z2z3", "hnn", "sl2"]), small_words)
def test_element_languages_match_reduced_form_assembly(name, w):
    sec = section(name)
    assert equivalent(sec.s_of_g(w), reduced_form_language(sec, w))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["f2", "dinf", "z2z3", "hnn"]), small_words, small_words)
def test_element_languages_are_disjoint_nonempty_and_inverse(name, u, v):
    sec = section(name)
    su, sv = sec.s_of_g(u), sec.s_of_g(v)
    assert not su.is_empty
    assert equivalent(inverse_language(su), sec.s_of_g(invert(u)))
    if not sec.word_problem(u + invert(v)):
        assert is_empty(intersection(su, sv))
    else:
        assert equivalent(su, sv)
    assert includes(su, sec.s_auto)


@settings(max_examples=100, deadline=None)
@given(small_words)
def test_word_problem_matches_rewriting(w):
    assert section("dinf").word_problem(w) == free_product_identity(w, [2, 2])
    assert section("z2z3").word_problem(w) == free_product_identity(w, [2, 3])
    assert section("hnn").word_problem(w) == z2_times_z_identity(w)
    assert section("f2").word_problem(w) == (free_reduce(w) == ())
