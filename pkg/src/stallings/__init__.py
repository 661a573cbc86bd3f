"""Stallings sections, foldings and subgroup automata for virtually free groups."""
from .alphabet import InvolutiveAlphabet, invert_word
from .automaton import EPS, Automaton, canonical, minimize, language_key
from .errors import (AlphabetMismatchError, GroupTableError, HypothesisRefused, MalformedInputError,
                     NotInverseError, SectionError, SpecError, StallingsError)
from .folding import UnionFind, fold, identify, merge_terminals
from .groups import Amalgam, Finite, Free, Hnn, spec_from_tree, spec_to_tree
from .pda import Outcome, PdaSpec, emit_pda, pda_accepts, pda_run
from .pipeline import (SubgroupInput, build_stallings, finite_index, j_pairs, member, recognize,
                       stallings_automaton)
from .rational import FiniteGroup, RationalSubstitution, benois_reduce, reduce_word, substitute
from .sections import StallingsSection, build_section, transport, validate_section

__all__ = [
    "EPS", "Amalgam", "AlphabetMismatchError", "Automaton", "Finite", "FiniteGroup", "Free",
    "GroupTableError", "Hnn", "HypothesisRefused", "InvolutiveAlphabet", "MalformedInputError",
    "NotInverseError", "Outcome", "PdaSpec", "RationalSubstitution", "SectionError", "SpecError",
    "StallingsError", "StallingsSection", "SubgroupInput", "UnionFind", "benois_reduce",
    "build_section", "build_stallings", "canonical", "emit_pda", "finite_index", "fold", "identify",
    "invert_word", "j_pairs", "language_key", "member", "merge_terminals", "minimize", "pda_accepts",
    "pda_run", "recognize", "reduce_word", "spec_from_tree", "spec_to_tree", "stallings_automaton",
    "substitute", "transport", "validate_section",
]
