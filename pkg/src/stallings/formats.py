"""Reading and writing automata, sections, PDAs and group documents.

Automata have a line-based text form::

    alphabet a b
    states 3
    initial 0
    terminal 0 2
    edge 0 a 1
    edge 1 - 2        # '-' is a silent edge

Sections, automata and PDAs are persisted in a small binary container: a
four-byte magic, one version byte, one kind byte, then zlib-compressed JSON.
"""
from __future__ import annotations

import hashlib
import json
import os
import zlib
from pathlib import Path
from typing import Union

from .alphabet import InvolutiveAlphabet
from .automaton import EPS, Automaton
from .errors import MalformedInputError, SpecError
from .groups import spec_from_tree, spec_to_tree
from .pda import PdaSpec, pda_from_text, pda_to_text
from .rational import RationalSubstitution
from .sections import AmalgamGlue, HnnGlue, StallingsSection, build_section

MAGIC = b"STLG"
VERSION = 1
KINDS = {"automaton": 1, "section": 2, "pda": 3}
CACHE_ENV = "STALLINGS_CACHE_DIR"

PathLike = Union[str, os.PathLike]


# -- automata -----------------------------------------------------------------------------


def automaton_to_text(a: Automaton) -> str:
    lines = ["alphabet " + " ".join(a.alphabet.names), f"states {a.n}", f"initial {a.initial}"]
    lines.append("terminal " + " ".join(str(t) for t in sorted(a.terminals)))
    for p, x, q in a.edges:
        lines.append(f"edge {p} {'-' if x == EPS else a.alphabet.name(x)} {q}")
    return "\n".join(lines) + "\n"


def automaton_from_text(text: str, alphabet: InvolutiveAlphabet = None) -> Automaton:
    """Parse the text form; ``alphabet``, when given, must match the declared one."""
    declared, n, initial, terms, rows = None, None, None, [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            if key == "alphabet":
                declared = InvolutiveAlphabet(rest)
            elif key == "states" and len(rest) == 1:
                n = int(rest[0])
            elif key == "initial" and len(rest) == 1:
                initial = int(rest[0])
            elif key == "terminal":
                terms.extend(int(t) for t in rest)
            elif key == "edge" and len(rest) == 3:
                rows.append((lineno, rest))
            else:
                raise MalformedInputError(f"cannot parse {raw!r}")
        except ValueError as exc:
            raise MalformedInputError(f"line {lineno}: {exc}") from None
    if declared is None or n is None or initial is None:
        raise MalformedInputError("automaton text needs alphabet, states and initial lines")
    if alphabet is not None:
        alphabet.require_same(declared)
    edges = []
    for lineno, (p, x, q) in rows:
        try:
            edges.append((int(p), EPS if x == "-" else declared.code(x), int(q)))
        except ValueError as exc:
            raise MalformedInputError(f"line {lineno}: {exc}") from None
    return Automaton(declared, n, initial, terms, edges)


def automaton_to_dot(a: Automaton, name: str = "automaton") -> str:
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=LR;", '  start [shape=point];']
    for p in range(a.n):
        shape = "doublecircle" if p in a.terminals else "circle"
        lines.append(f"  {p} [shape={shape}];")
    lines.append(f"  start -> {a.initial};")
    for p, x, q in a.edges:
        if x != EPS and x & 1 and (q, x ^ 1, p) in a.edges:
            continue  # drawn once, along its positive twin
        label = "ε" if x == EPS else a.alphabet.name(x)
        lines.append(f"  {p} -> {q} [label={json.dumps(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _auto_tree(a: Automaton) -> dict:
    return {"alphabet": list(a.alphabet.names), "n": a.n, "initial": a.initial,
            "terminals": sorted(a.terminals), "edges": [list(e) for e in a.edges]}


def _auto_from_tree(t: dict) -> Automaton:
    return Automaton(InvolutiveAlphabet(t["alphabet"]), t["n"], t["initial"], t["terminals"],
                     [tuple(e) for e in t["edges"]])


# -- sections ------------------------------------------------------------------------------


def _glue_tree(glue) -> dict:
    if glue is None:
        return None
    if isinstance(glue, AmalgamGlue):
        return {"kind": "amalgam", "b_alphabet": list(glue.b_alphabet.names),
                "l_auto": _auto_tree(glue.l_auto), "l_reduced": _auto_tree(glue.l_reduced),
                "sprime": _auto_tree(glue.sprime), "tprime": _auto_tree(glue.tprime)}
    alpha = glue.alpha
    return {"kind": "hnn", "c_alphabet": list(glue.c_alphabet.names),
            "l_auto": _auto_tree(glue.l_auto), "l_reduced": _auto_tree(glue.l_reduced),
            "n_auto": _auto_tree(glue.n_auto),
            "alpha": {"source": list(alpha.source.names), "target": list(alpha.target.names),
                      "images": {str(x): _auto_tree(a) for x, a in sorted(alpha.images.items())}}}


def _glue_from_tree(t: dict):
    if t is None:
        return None
    if t["kind"] == "amalgam":
        return AmalgamGlue(InvolutiveAlphabet(t["b_alphabet"]), _auto_from_tree(t["l_auto"]),
                           _auto_from_tree(t["l_reduced"]), _auto_from_tree(t["sprime"]),
                           _auto_from_tree(t["tprime"]))
    al = t["alpha"]
    alpha = RationalSubstitution(InvolutiveAlphabet(al["source"]), InvolutiveAlphabet(al["target"]),
                                 {int(x): _auto_from_tree(a) for x, a in al["images"].items()})
    return HnnGlue(InvolutiveAlphabet(t["c_alphabet"]), _auto_from_tree(t["l_auto"]),
                   _auto_from_tree(t["l_reduced"]), _auto_from_tree(t["n_auto"]), alpha)


def section_to_tree(sec: StallingsSection) -> dict:
    return {
        "spec": spec_to_tree(sec.spec),
        "alphabet": list(sec.alphabet.names),
        "s": _auto_tree(sec.s_auto),
        "s1": _auto_tree(sec.s1_auto),
        "letters": [_auto_tree(a) for a in sec.letter_sections],
        "extendable": sec.extendable,
        "gens": None if sec.gens is None else [list(g) for g in sec.gens],
        "children": [section_to_tree(c) for c in sec.children],
        "glue": _glue_tree(sec.glue),
    }


def section_from_tree(t: dict) -> StallingsSection:
    try:
        return StallingsSection(
            spec_from_tree(t["spec"]), InvolutiveAlphabet(t["alphabet"]), _auto_from_tree(t["s"]),
            _auto_from_tree(t["s1"]), [_auto_from_tree(a) for a in t["letters"]],
            extendable=bool(t["extendable"]),
            children=tuple(section_from_tree(c) for c in t["children"]),
            glue=_glue_from_tree(t["glue"]),
            gens=None if t["gens"] is None else tuple(tuple(g) for g in t["gens"]))
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"malformed section data: {exc!r}") from None


# -- binary container -------------------------------------------------------------------------


def pack(kind: str, payload: dict) -> bytes:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return MAGIC + bytes([VERSION, KINDS[kind]]) + zlib.compress(body, 9)


def unpack(data: bytes) -> tuple:
    """``(kind, payload)`` of a container; rejects foreign data and unknown versions."""
    if len(data) < 6 or data[:4] != MAGIC:
        raise MalformedInputError("not a stallings container")
    if data[4] != VERSION:
        raise MalformedInputError(f"unsupported container version {data[4]}")
    kinds = {v: k for k, v in KINDS.items()}
    if data[5] not in kinds:
        raise MalformedInputError(f"unknown container kind {data[5]}")
    try:
        payload = json.loads(zlib.decompress(data[6:]))
    except (zlib.error, ValueError) as exc:
        raise MalformedInputError(f"corrupt container: {exc}") from None
    return kinds[data[5]], payload


def dump_section(sec: StallingsSection) -> bytes:
    return pack("section", section_to_tree(sec))


def dump_automaton(a: Automaton) -> bytes:
    return pack("automaton", _auto_tree(a))


def dump_pda(p: PdaSpec) -> bytes:
    return pack("pda", {"text": pda_to_text(p)})


def save(obj, path: PathLike) -> None:
    if isinstance(obj, StallingsSection):
        data = dump_section(obj)
    elif isinstance(obj, Automaton):
        data = dump_automaton(obj)
    elif isinstance(obj, PdaSpec):
        data = dump_pda(obj)
    else:
        raise TypeError(f"cannot save {type(obj).__name__}")
    Path(path).write_bytes(data)


def loads(data: bytes):
    kind, payload = unpack(data)
    if kind == "section":
        return section_from_tree(payload)
    if kind == "automaton":
        return _auto_from_tree(payload)
    return pda_from_text(payload["text"])


def load(path: PathLike):
    return loads(Path(path).read_bytes())


def load_automaton(path: PathLike) -> Automaton:
    """An automaton from a container or from the text form."""
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        obj = loads(data)
        if not isinstance(obj, Automaton):
            raise MalformedInputError(f"{path} does not hold an automaton")
        return obj
    return automaton_from_text(data.decode())


def load_pda(path: PathLike) -> PdaSpec:
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        obj = loads(data)
        if not isinstance(obj, PdaSpec):
            raise MalformedInputError(f"{path} does not hold a pushdown automaton")
        return obj
    return pda_from_text(data.decode())


# -- group documents -----------------------------------------------------------------------------


def group_from_document(doc: dict):
    """Group description from a document ``{"alphabet": [...], "group": {...}}``."""
    if not isinstance(doc, dict) or "group" not in doc:
        raise MalformedInputError("group document needs a 'group' entry")
    try:
        spec = spec_from_tree(doc["group"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInputError(f"malformed group description: {exc!r}") from None
    if "alphabet" in doc and list(doc["alphabet"]) != list(spec.alphabet.names):
        raise SpecError(f"declared alphabet {list(doc['alphabet'])} differs from the derived "
                        f"alphabet {list(spec.alphabet.names)}")
    return spec


def load_group_document(path: PathLike):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON: {exc}") from None
    return group_from_document(doc)


def _cache_path(spec) -> Path:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = json.dumps(spec_to_tree(spec), sort_keys=True).encode()
    return Path(root) / f"section-{VERSION}-{hashlib.sha256(key).hexdigest()[:24]}.bin"


def section_for(spec) -> StallingsSection:
    """Build a section, reusing the cache directory named by the environment when set."""
    path = _cache_path(spec)
    if path is not None and path.exists():
        try:
            obj = load(path)
            if isinstance(obj, StallingsSection):
                return obj
        except MalformedInputError:
            pass
    sec = build_section(spec)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(dump_section(sec))
        tmp.replace(path)
    return sec


def load_section(path: PathLike) -> StallingsSection:
    """A section from a container, or built from a group document (``.json``)."""
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        obj = loads(data)
        if not isinstance(obj, StallingsSection):
            raise MalformedInputError(f"{path} does not hold a section")
        return obj
    return section_for(load_group_document(path))
