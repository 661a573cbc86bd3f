import json

import pytest

from conftest import TREES, cyclic, h_cyclic, section
from stallings import formats
from stallings.automaton import EPS, Automaton, equivalent, words
from stallings.cli import main
from stallings.errors import MalformedInputError, SpecError
from stallings.pda import emit_pda, pda_to_text
from stallings.pipeline import finite_index, member, stallings_automaton

NON_EXTENDABLE = {"amalgam": {"left": cyclic(2, "a"), "right": cyclic(4, "b"), "h": h_cyclic(2),
                              "phi1": {"h0": "1", "h1": "a"}, "phi2": {"h0": "1", "h1": "b b"}}}


def write_group(tmp_path, name, tree):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps({"group": tree}))
    return path


@pytest.fixture
def cli(capsys):
    def call(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return call


# -- automaton text ---------------------------------------------------------------------------------------


def test_automaton_text_round_trip():
    a = Automaton(section("f2").alphabet, 3, 0, [2], [(0, 0, 1), (1, EPS, 2), (2, 3, 0)])
    text = formats.automaton_to_text(a)
    assert "edge 1 - 2" in text and "edge 2 b^-1 0" in text
    assert formats.automaton_from_text(text) == a


def test_automaton_text_errors():
    with pytest.raises(MalformedInputError):
        formats.automaton_from_text("alphabet a\nstates two\ninitial 0\n")
    with pytest.raises(MalformedInputError):
        formats.automaton_from_text("states 1\ninitial 0\n")
    with pytest.raises(MalformedInputError):
        formats.automaton_from_text("alphabet a\nstates 1\ninitial 0\nedge 0 c 0\n")


def test_dot_draws_each_inverse_pair_once():
    core = stallings_automaton(section("f2"), [(0, 0)])
    dot = formats.automaton_to_dot(core, "core")
    assert dot.startswith('digraph "core" {')
    assert dot.count("->") == 1 + len(core.edges) // 2


# -- binary container ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(TREES))
def test_section_round_trip_preserves_languages(name):
    sec = section(name)
    back = formats.loads(formats.dump_section(sec))
    assert equivalent(back.s_auto, sec.s_auto) and equivalent(back.s1_auto, sec.s1_auto)
    assert back.extendable == sec.extendable
    for x in sec.alphabet.letters:
        assert equivalent(back.letter_sections[x], sec.letter_sections[x])
    assert formats.dump_section(back) == formats.dump_section(sec)


def test_pda_and_automaton_round_trip(tmp_path):
    p = emit_pda(section("z2"))
    formats.save(p, tmp_path / "p.bin")
    assert pda_to_text(formats.load_pda(tmp_path / "p.bin")) == pda_to_text(p)
    core = stallings_automaton(section("dinf"), [(0, 2)])
    formats.save(core, tmp_path / "c.bin")
    assert formats.load_automaton(tmp_path / "c.bin") == core


def test_container_rejects_foreign_data():
    data = formats.dump_automaton(Automaton.universal(section("f1").alphabet))
    with pytest.raises(MalformedInputError):
        formats.loads(b"JUNK" + data[4:])
    with pytest.raises(MalformedInputError):
        formats.loads(data[:4] + bytes([9]) + data[5:])
    with pytest.raises(MalformedInputError):
        formats.loads(data[:5] + bytes([42]) + data[6:])
    with pytest.raises(MalformedInputError):
        formats.loads(data[:6] + b"not zlib")


def test_wrong_kind_is_reported(tmp_path):
    formats.save(section("f1"), tmp_path / "s.bin")
    with pytest.raises(MalformedInputError):
        formats.load_automaton(tmp_path / "s.bin")


# -- group documents ---------------------------------------------------------------------------------------


def test_document_alphabet_must_match():
    with pytest.raises(SpecError):
        formats.group_from_document({"alphabet": ["a", "c"], "group": TREES["dinf"]})
    spec = formats.group_from_document({"alphabet": ["a", "b"], "group": TREES["dinf"]})
    assert list(spec.alphabet.names) == ["a", "b"]


@pytest.mark.parametrize("doc", [{}, {"group": {"finite": {"elements": ["e"]}}}, {"group": []}])
def test_malformed_documents(doc):
    with pytest.raises((MalformedInputError, SpecError)):
        formats.group_from_document(doc)


def test_cache_directory_is_used(tmp_path, monkeypatch):
    monkeypatch.setenv(formats.CACHE_ENV, str(tmp_path / "cache"))
    spec = formats.group_from_document({"group": TREES["z2z3"]})
    first = formats.section_for(spec)
    files = list((tmp_path / "cache").iterdir())
    assert len(files) == 1 and files[0].name.startswith("section-1-")
    second = formats.section_for(spec)
    assert formats.dump_section(second) == formats.dump_section(first)


# -- command line ----------------------------------------------------------------------------------------------


def test_reduce_command(cli):
    assert cli("reduce", "a a^-1 b") == (0, "b\n", "")


def test_section_build_and_queries(cli, tmp_path):
    group = write_group(tmp_path, "dinf", TREES["dinf"])
    sec = tmp_path / "dinf.sec"
    code, out, _ = cli("section", "build", group, "-o", sec)
    assert code == 0 and "extendable true" in out
    assert cli("wp", sec, "a b b a")[1] == "true\n"
    assert cli("wp", sec, "a b")[1] == "false\n"
    code, out, _ = cli("section", "validate", sec, "--budget", "20", "--seed", "3")
    assert code == 0 and out.splitlines()[-1] == "ok"

    core = tmp_path / "core.bin"
    trace = tmp_path / "trace"
    assert cli("stallings", sec, "-g", "a b", "--trace-dir", trace, "-o", core)[0] == 0
    assert {p.name for p in trace.iterdir()} >= {"b0.txt", "b3.dot", "core.txt", "trace.json"}
    assert cli("member", sec, core, "a b a b")[1] == "true\n"
    assert cli("member", sec, core, "a")[1] == "false\n"
    code, out, _ = cli("index", sec, core)
    assert out.splitlines()[0] == "2"
    code, out, _ = cli("recognize", sec, core)
    assert out.splitlines()[0] == "true"


def test_free_membership_command(cli, tmp_path):
    sec = write_group(tmp_path, "f2", TREES["f2"])
    core = tmp_path / "core.txt"
    cli("stallings", sec, "-g", "a a", "-g", "b b", "-o", core)
    assert "edge" in core.read_text()
    assert cli("member", sec, core, "a a b b")[1] == "true\n"
    assert cli("index", sec, core)[1] == "infinite\n"


def test_benois_and_dot_commands(cli, tmp_path):
    auto = tmp_path / "a.txt"
    auto.write_text("alphabet a b\nstates 3\ninitial 0\nterminal 2\nedge 0 a 1\nedge 1 a^-1 2\n")
    code, out, _ = cli("benois", auto)
    reduced = formats.automaton_from_text(out)
    assert set(words(reduced, 3)) == {()}
    code, out, _ = cli("export-dot", auto)
    assert code == 0 and out.startswith("digraph")


def test_pda_commands(cli, tmp_path):
    sec = write_group(tmp_path, "z2", TREES["z2"])
    pda = tmp_path / "z2.pda"
    assert cli("emit-pda", sec, "-o", pda)[0] == 0
    assert cli("pda-run", pda, "a a", "--cutoff", "12")[1] == "true\n"
    assert cli("pda-run", pda, "a", "--cutoff", "8")[1] == "cutoff\n"
    f2 = write_group(tmp_path, "f2", TREES["f2"])
    cli("emit-pda", f2, "-o", tmp_path / "f2.bin")
    assert cli("pda-run", tmp_path / "f2.bin", "a b a^-1 b^-1", "--cutoff", "8")[1] == "false\n"


def test_refusal_exits_with_two(cli, tmp_path):
    sec = write_group(tmp_path, "z2z4", NON_EXTENDABLE)
    core = tmp_path / "core.txt"
    assert cli("stallings", sec, "-g", "b", "-o", core)[0] == 0
    code, _, err = cli("index", sec, core)
    assert code == 2 and err.startswith("refused:")


def test_bad_input_exits_with_one(cli, tmp_path):
    sec = write_group(tmp_path, "f2", TREES["f2"])
    code, _, err = cli("wp", sec, "a c")
    assert code == 1 and err.startswith("error:")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli("wp", bad, "a")[0] == 1
    assert cli("wp", tmp_path / "missing.json", "a")[0] == 1


def test_outputs_are_deterministic(cli, tmp_path):
    group = write_group(tmp_path, "hnn", TREES["hnn"])
    outs = []
    for k in range(2):
        sec = tmp_path / f"hnn{k}.sec"
        cli("section", "build", group, "-o", sec)
        outs.append(sec.read_bytes())
        outs.append(cli("stallings", sec, "-g", "t a")[1])
        outs.append(cli("emit-pda", sec)[1])
    assert outs[:3] == outs[3:]


def test_round_trip_keeps_subgroup_answers(tmp_path):
    sec = section("dinf")
    core = stallings_automaton(sec, [(0, 2)])
    formats.save(sec, tmp_path / "s.bin")
    formats.save(core, tmp_path / "c.bin")
    sec2, core2 = formats.load(tmp_path / "s.bin"), formats.load(tmp_path / "c.bin")
    for w in words(sec.s_auto, 5):
        assert member(sec2, core2, w) == member(sec, core, w)
        assert sec2.word_problem(w) == sec.word_problem(w)
    assert finite_index(sec2, core2) == finite_index(sec, core)
