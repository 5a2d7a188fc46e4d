"""Words over signed generator alphabets.

A word is a flat sequence of signed letters.  Reversal, formal inversion
and palindrome certification all read the literal letter sequence; free
reduction is the only operation that rewrites it.  Palindromes are never
detected "up to reduction": reduction can destroy palindromicity, so the
certificate always refers to the unreduced word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import AlphabetMismatch, NotAPalindrome, WordSyntaxError

Letter = tuple[int, int]  # (generator index, sign), sign in {+1, -1}

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Alphabet:
    """Ordered list of distinct generator names; each name has a formal inverse.

    The order is part of the identity of the alphabet: it fixes shortlex
    tie-breaking and report determinism everywhere downstream.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not isinstance(name, str) or not _NAME.fullmatch(name):
                raise ValueError(f"bad generator name: {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names!r}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlphabetMismatch(f"unknown generator {name!r}") from None

    def extend(self, names: Iterable[str]) -> "Alphabet":
        return Alphabet(self.names + tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.names)!r})"


class Word:
    """Immutable word over an alphabet.

    Equality and palindrome checks are defined on the flat letter sequence,
    so how a word was split into power blocks never matters.  Words over
    different alphabets cannot be concatenated (hard error) to prevent
    silent index confusion when a generating set is extended.
    """

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters: Iterable[Letter] = ()):
        letters = tuple(letters)
        n = len(alphabet)
        for index, sign in letters:
            if not 0 <= index < n:
                raise ValueError(f"letter index {index} out of range for {alphabet!r}")
            if sign not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {sign!r}")
        self.alphabet = alphabet
        self.letters = letters

    @classmethod
    def from_blocks(cls, alphabet: Alphabet, blocks: Iterable[tuple[str | int, int]]) -> "Word":
        letters: list[Letter] = []
        for gen, exponent in blocks:
            index = alphabet.index(gen) if isinstance(gen, str) else gen
            if exponent == 0:
                continue
            sign = 1 if exponent > 0 else -1
            letters.extend([(index, sign)] * abs(exponent))
        return cls(alphabet, letters)

    @classmethod
    def letter(cls, alphabet: Alphabet, gen: str | int, exponent: int = 1) -> "Word":
        return cls.from_blocks(alphabet, [(gen, exponent)])

    @classmethod
    def parse(cls, alphabet: Alphabet, text: str) -> "Word":
        return _parse(alphabet, text)

    def blocks(self) -> list[tuple[int, int]]:
        """Maximal runs as (generator index, signed exponent)."""
        out: list[tuple[int, int]] = []
        for index, sign in self.letters:
            if out and out[-1][0] == index and (out[-1][1] > 0) == (sign > 0):
                out[-1] = (index, out[-1][1] + sign)
            else:
                out.append((index, sign))
        return out

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(
                f"cannot concatenate words over {self.alphabet!r} and {other.alphabet!r}"
            )
        return Word(self.alphabet, self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return invert(self) ** (-k)
        return Word(self.alphabet, self.letters * k)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet == other.alphabet
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.alphabet.names, self.letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for index, exponent in self.blocks():
            name = self.alphabet.names[index]
            parts.append(name if exponent == 1 else f"{name}^{exponent}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Word({self})"


@dataclass(frozen=True)
class PalindromeCertificate:
    """Witness that word = left . center . reverse(left), letter for letter."""

    word: Word
    left: Word
    center: Optional[Letter]

    def reconstruct(self) -> Word:
        middle = Word(self.word.alphabet, [self.center] if self.center else [])
        return self.left * middle * reverse(self.left)

    def center_str(self) -> Optional[str]:
        if self.center is None:
            return None
        index, sign = self.center
        name = self.word.alphabet.names[index]
        return name if sign > 0 else f"{name}^-1"


def reverse(w: Word) -> Word:
    """The word with its letters taken in the opposite order.

    Each letter keeps its own sign; only the order flips.  Involutive.
    """
    return Word(w.alphabet, tuple(reversed(w.letters)))


def invert(w: Word) -> Word:
    """Formal inverse: reversed order, flipped signs."""
    return Word(w.alphabet, tuple((i, -s) for i, s in reversed(w.letters)))


def reduce_free(w: Word) -> Word:
    """The unique freely reduced word; idempotent, length non-increasing."""
    stack: list[Letter] = []
    for index, sign in w.letters:
        if stack and stack[-1] == (index, -sign):
            stack.pop()
        else:
            stack.append((index, sign))
    if len(stack) == len(w.letters):
        return w
    return Word(w.alphabet, stack)


def is_palindrome(w: Word) -> Optional[PalindromeCertificate]:
    """Certificate iff w equals reverse(w) letter for letter (no reduction).

    The empty word is a palindrome with empty left part and no center.
    """
    letters = w.letters
    if letters != tuple(reversed(letters)):
        return None
    half = len(letters) // 2
    left = Word(w.alphabet, letters[:half])
    center = letters[half] if len(letters) % 2 else None
    return PalindromeCertificate(word=w, left=left, center=center)


def sandwich(u: Word, p: Word) -> Word:
    """u . p . reverse(u); a palindrome whenever p is one (enforced)."""
    if u.alphabet != p.alphabet:
        raise AlphabetMismatch("sandwich parts must share one alphabet")
    if is_palindrome(p) is None:
        raise NotAPalindrome(f"core {p} is not a palindrome")
    return u * p * reverse(u)


def relabel(w: Word, alphabet: Alphabet) -> Word:
    """The same word over another alphabet, letters matched by name."""
    names = w.alphabet.names
    return Word(alphabet, tuple((alphabet.index(names[i]), s) for i, s in w.letters))


_TOKEN = re.compile(
    r"\s*(?:(?P<star>\*)|(?P<one>1)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\^(?P<exp>-?\d+))?)"
)


def _parse(alphabet: Alphabet, text: str) -> Word:
    """Parse `x^-2 * y * x` style syntax; `*` and whitespace both separate."""
    letters: list[Letter] = []
    text = text.rstrip()
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == match.start():
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", column=pos + 1)
        if match.group("name") is not None:
            name = match.group("name")
            if name not in alphabet:
                raise WordSyntaxError(
                    f"unknown generator {name!r}", column=match.start("name") + 1
                )
            exponent = int(match.group("exp")) if match.group("exp") else 1
            index = alphabet.index(name)
            if exponent:
                sign = 1 if exponent > 0 else -1
                letters.extend([(index, sign)] * abs(exponent))
        pos = match.end()
    return Word(alphabet, letters)
