import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import section
from oracles import (as_graph, based_isomorphic, cyclic_genmap, cyclic_table, free_product_identity, free_reduce,
                     in_a_b2_bab, in_dinf_ab, invert, naive_member, naive_stallings_graph, table_fold,
                     z2_times_z_identity)
from stallings.alphabet import InvolutiveAlphabet
from stallings.automaton import (Automaton, canonical, equivalent, includes, inverse_language, involutive_closure,
                                 restrict, words)
from stallings.errors import HypothesisRefused
from stallings.pipeline import (SubgroupInput, atomic_uniterminal, build_core, build_stallings, finite_index,
                                j_pairs, member, recognize, star_product, stallings_automaton)
from stallings.rational import benois_reduce
from stallings.sections import transport


def core_of(name, *gens):
    sec = section(name)
    return stallings_automaton(sec, [sec.parse(g) for g in gens])


# -- atoms and star products --------------------------------------------------------------------------


def test_free_atom_is_a_path():
    at = atomic_uniterminal(section("f2"), 0)
    assert at.n == 2 and set(at.edges) == {(at.initial, 0, next(iter(at.terminals)))}


def test_z2_atom_names_the_generator():
    sec = section("z2")
    at = atomic_uniterminal(sec, 0)
    assert len(at.terminals) == 1
    table, gm = cyclic_table(2), cyclic_genmap(2)
    sample = list(itertools.islice(words(at, 9), 50))
    assert len(sample) >= 10
    for w in sample:
        assert table_fold(w, table, gm, 0) == 1


def test_atoms_sit_between_letter_section_and_preimage():
    for name in ("z2", "z3", "dinf", "hnn"):
        sec = section(name)
        for x in sec.alphabet.letters:
            at = atomic_uniterminal(sec, x)
            assert len(at.terminals) == 1
            assert includes(sec.letter_sections[x], benois_reduce(at))
            for w in itertools.islice(words(at, 8), 30):
                assert sec.word_problem(w + (x ^ 1,))
        for x in sec.alphabet.positive:
            pos, neg = atomic_uniterminal(sec, x), atomic_uniterminal(sec, x ^ 1)
            assert neg.n == pos.n and equivalent(neg, inverse_language(pos))


def test_star_product_of_paths():
    sec = section("f2")
    p = star_product(atomic_uniterminal(sec, 0), atomic_uniterminal(sec, 2))
    assert p.n == 3 and set(words(p, 3)) == {(0, 2)}


def test_star_product_is_associative():
    sec = section("dinf")
    x, y, z = (atomic_uniterminal(sec, c) for c in (0, 2, 1))
    left, right = star_product(star_product(x, y), z), star_product(x, star_product(y, z))
    expected = (x.n + y.n + z.n - 2, len(x.edges) + len(y.edges) + len(z.edges))
    assert (left.n, len(left.edges)) == (right.n, len(right.edges)) == expected
    assert equivalent(left, right)


def test_z2_square_of_atom_names_the_identity():
    sec = section("z2")
    at = atomic_uniterminal(sec, 0)
    sample = list(itertools.islice(words(star_product(at, at), 10), 50))
    assert sample
    for w in sample:
        assert table_fold(w, cyclic_table(2), cyclic_genmap(2), 0) == 0


# -- stages -----------------------------------------------------------------------------------------------


def test_free_b3_is_the_classical_graph():
    sec = section("f2")
    for gens in (["a a", "b b"], ["a b a^-1 b b"], ["a^-1 b a", "a b", "b b b"]):
        words_ = [sec.parse(g) for g in gens]
        b3 = build_core(SubgroupInput(sec, words_)).b3
        assert based_isomorphic(as_graph(b3), naive_stallings_graph(words_))


def test_dinf_b3_reads_the_generator():
    sec = section("dinf")
    b3 = build_core(SubgroupInput(sec, [sec.parse("a b")])).b3
    assert b3.accepts(sec.parse("a b")) and b3.accepts(sec.parse("b^-1 a^-1"))


def test_j_pairs_on_a_z2_path():
    sec = section("z2")
    path = involutive_closure(Automaton(sec.alphabet, 3, 0, [0], [(0, 0, 1), (1, 0, 2)]))
    assert table_fold((0, 0), cyclic_table(2), cyclic_genmap(2), 0) == 0
    assert j_pairs(path, sec) == ((0, 2),)


def test_j_pairs_on_a_dinf_path():
    sec = section("dinf")
    path = involutive_closure(Automaton(sec.alphabet, 4, 0, [0], [(0, 0, 1), (1, 2, 2), (2, 2, 3)]))
    # b b names the identity, so states 1 and 3 are one coset
    assert free_product_identity((2, 2), [2, 2])
    assert j_pairs(path, sec) == ((1, 3),)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=6).map(tuple), min_size=1, max_size=3))
def test_free_cores_have_no_identity_pairs(gens):
    sec = section("f2")
    b3 = build_core(SubgroupInput(sec, gens)).b3
    assert j_pairs(b3, sec) == ()


def test_free_examples():
    core = core_of("f2", "a", "b")
    assert core.n == 1 and set(core.edges) == {(0, x, 0) for x in range(4)}
    sec = section("f2")
    gens = [sec.parse(g) for g in ("a a", "b b", "a b a b")]
    assert based_isomorphic(as_graph(stallings_automaton(sec, gens)), naive_stallings_graph(gens))


def test_dinf_membership_examples():
    sec = section("dinf")
    core = core_of("dinf", "a b")
    assert core.n == 2
    assert member(sec, core, sec.parse("a b"))
    assert not member(sec, core, sec.parse("a"))


def test_membership_examples():
    f2 = section("f2")
    core = core_of("f2", "a a", "b b")
    assert member(f2, core, f2.parse("a a b b"))
    assert not member(f2, core, f2.parse("a b"))
    hnn = section("hnn")
    core = core_of("hnn", "a")
    assert member(hnn, core, hnn.parse("a")) and not member(hnn, core, hnn.parse("t"))
    assert member(f2, core_of("f2", "a b^-1 a"), f2.parse("a b^-1 a"))


# -- finite index ----------------------------------------------------------------------------------------


def test_finite_index_examples():
    f2, dinf = section("f2"), section("dinf")
    reps = finite_index(f2, core_of("f2", "a", "b b", "b a b^-1"))
    assert sorted(reps) == [(), (2,)]
    reps = finite_index(dinf, core_of("dinf", "a b"))
    assert len(reps) == 2
    assert finite_index(f2, core_of("f2", "a a", "b b")) is None


def test_representatives_cover_the_group():
    rng = random.Random(3)
    f2, dinf = section("f2"), section("dinf")
    cases = [(f2, finite_index(f2, core_of("f2", "a", "b b", "b a b^-1")), in_a_b2_bab),
             (dinf, finite_index(dinf, core_of("dinf", "a b")), in_dinf_ab)]
    for sec, reps, inside in cases:
        for _ in range(200):
            w = tuple(rng.randrange(4) for _ in range(rng.randint(0, 10)))
            assert any(inside(w + invert(r)) for r in reps)


def test_finite_index_refuses_without_extendability():
    sec = transport(section("f2"), InvolutiveAlphabet(["x", "y"]), {"x": "a", "y": "a b"})
    core = stallings_automaton(sec, [sec.parse("x")])
    with pytest.raises(HypothesisRefused):
        finite_index(sec, core)


# -- recognition ---------------------------------------------------------------------------------------------


def test_recognize_round_trip():
    sec = section("f2")
    core = core_of("f2", "a a", "b b")
    gens = recognize(sec, core)
    assert gens is not None
    assert stallings_automaton(sec, gens) == core


def test_recognize_trivial_subgroup():
    sec = section("f2")
    assert recognize(sec, Automaton(sec.alphabet, 1, 0, [0], [])) == []


def test_recognize_rejects_an_unsaturated_cycle_over_z3():
    sec = section("z3")
    two = Automaton(sec.alphabet, 2, 0, [0], [(0, 0, 1), (1, 1, 0), (1, 0, 0), (0, 1, 1)])
    assert recognize(sec, two) is None


@pytest.mark.parametrize("name, gens", [("dinf", ["a b"]), ("z2z3", ["a b", "b a b"]), ("hnn", ["t a"]),
                                        ("sl2", ["a b"])])
def test_recognize_accepts_built_cores(name, gens):
    sec = section(name)
    core = core_of(name, *gens)
    found = recognize(sec, core)
    assert found is not None and stallings_automaton(sec, found) == core


# -- properties ----------------------------------------------------------------------------------------------------

gen_lists = st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=5).map(tuple), min_size=1, max_size=3)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["f2", "dinf", "z2z3", "hnn"]), gen_lists)
def test_stage_contracts(name, gens):
    sec = section(name)
    tr = build_stallings(SubgroupInput(sec, gens))
    stages = [tr.b0, tr.b1, tr.b2, tr.b3, tr.b4]
    for small, big in zip(stages, stages[1:]):
        for w in itertools.islice(words(small, 8), 100):
            assert big.accepts(w)
    assert j_pairs(tr.b4, sec) == ()
    assert canonical(restrict(tr.core, sec.s_auto)) == tr.core


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["dinf", "z2z3", "hnn"]), gen_lists, st.integers(0, 2 ** 16))
def test_core_contains_subgroup_representatives(name, gens, seed):
    sec = section(name)
    core = stallings_automaton(sec, gens)
    rng = random.Random(seed)
    for _ in range(10):
        h = ()
        for _ in range(rng.randint(0, 3)):
            g = rng.choice(gens)
            h += invert(g) if rng.random() < 0.5 else g
        assert includes(sec.s_of_g(h), core)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["f2", "dinf", "z2z3", "hnn"]), gen_lists, st.lists(st.integers(0, 3), max_size=8))
def test_member_via_core_and_b3_agree(name, gens, w):
    sec = section(name)
    tr = build_stallings(SubgroupInput(sec, gens))
    assert member(sec, tr.core, tuple(w)) == member(sec, tr.b3, tuple(w))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["f2", "dinf", "z2z3", "hnn"]), st.lists(st.integers(0, 3), min_size=1, max_size=5),
       st.lists(st.integers(0, 3), min_size=1, max_size=5))
def test_core_depends_only_on_the_subgroup(name, h1, h2):
    sec = section(name)
    h1, h2 = tuple(h1), tuple(h2)
    a = stallings_automaton(sec, [h1, h2])
    assert stallings_automaton(sec, [h1 + h2, h2]) == a
    assert stallings_automaton(sec, [h2, h1]) == a


@settings(max_examples=40, deadline=None)
@given(gen_lists, st.lists(st.integers(0, 3), max_size=10))
def test_free_membership_matches_classical_folding(gens, w):
    sec = section("f2")
    gens = [free_reduce(g) for g in gens]
    core = stallings_automaton(sec, gens)
    assert member(sec, core, tuple(w)) == naive_member(naive_stallings_graph(gens), tuple(w))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=10))
def test_hnn_membership_in_the_base(w):
    sec = section("hnn")
    core = core_of("hnn", "a")
    # <a> is the Z/2 factor: exactly the words with t-exponent sum zero
    inside = sum(1 if x == 2 else -1 for x in w if x >> 1 == 1) == 0
    assert member(sec, core, tuple(w)) == inside
    assert inside == (z2_times_z_identity(tuple(w)) or z2_times_z_identity(tuple(w) + (0,)))
