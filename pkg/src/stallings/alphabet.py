"""Involutive alphabets and words.

Letters are small integers: the positive letter number ``i`` is encoded as
``2*i`` and its formal inverse as ``2*i + 1``, so inversion is ``x ^ 1``.
Words are plain tuples of letter codes; the empty tuple is the empty word.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlphabetMismatchError, MalformedInputError

Word = tuple  # tuple[int, ...]

INV_SUFFIX = "^-1"


def inverse_letter(x: int) -> int:
    return x ^ 1


def invert_word(w: Sequence[int]) -> Word:
    return tuple(x ^ 1 for x in reversed(w))


@dataclass(frozen=True)
class InvolutiveAlphabet:
    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise MalformedInputError(f"duplicate letter names in {names}")
        for n in names:
            if not n or not isinstance(n, str) or any(c.isspace() for c in n) or n.endswith(INV_SUFFIX) or n in ("1", "-"):
                raise MalformedInputError(f"invalid letter name {n!r}")

    def __len__(self):
        return len(self.names)

    @property
    def size(self) -> int:
        """Number of letters in the involutive closure."""
        return 2 * len(self.names)

    @property
    def letters(self) -> range:
        return range(self.size)

    @property
    def positive(self) -> range:
        return range(0, self.size, 2)

    def letter(self, name: str, inverse: bool = False) -> int:
        try:
            i = self.names.index(name)
        except ValueError:
            raise MalformedInputError(f"letter {name!r} not in alphabet {self.names}") from None
        return 2 * i + int(inverse)

    def code(self, token: str) -> int:
        if token.endswith(INV_SUFFIX):
            return self.letter(token[: -len(INV_SUFFIX)], inverse=True)
        return self.letter(token)

    def name(self, x: int) -> str:
        base = self.names[x >> 1]
        return base + INV_SUFFIX if x & 1 else base

    def parse(self, text) -> Word:
        """Parse whitespace-separated tokens (``a b^-1``); ``1`` or ``""`` is the empty word."""
        if isinstance(text, str):
            tokens = text.split()
        else:
            tokens = list(text)
        if tokens == ["1"]:
            return ()
        return tuple(self.code(t) for t in tokens)

    def format(self, w: Sequence[int]) -> str:
        if not w:
            return "1"
        return " ".join(self.name(x) for x in w)

    def check_word(self, w: Sequence[int]) -> Word:
        w = tuple(w)
        for x in w:
            if not (isinstance(x, int) and 0 <= x < self.size):
                raise MalformedInputError(f"letter code {x!r} outside alphabet {self.names}")
        return w

    # -- combining alphabets -------------------------------------------------

    def disjoint_union(self, other: "InvolutiveAlphabet") -> "InvolutiveAlphabet":
        clash = set(self.names) & set(other.names)
        if clash:
            raise AlphabetMismatchError(f"alphabets share letters {sorted(clash)}")
        return InvolutiveAlphabet(self.names + other.names)

    def extended(self, name: str) -> "InvolutiveAlphabet":
        if name in self.names:
            raise AlphabetMismatchError(f"letter {name!r} is not fresh")
        return InvolutiveAlphabet(self.names + (name,))

    def embedding(self, target: "InvolutiveAlphabet") -> list:
        """Letter-code map from this alphabet into ``target`` (matched on names)."""
        out = []
        for x in self.letters:
            out.append(target.letter(self.names[x >> 1], bool(x & 1)))
        return out

    def require_same(self, other: "InvolutiveAlphabet") -> None:
        if self.names != other.names:
            raise AlphabetMismatchError(f"alphabet mismatch: {self.names} vs {other.names}")


def map_word(w: Iterable[int], table: Sequence[int]) -> Word:
    return tuple(table[x] for x in w)
