"""Restricted wreath products base-by-top.

An element is a finite-support map from top-group positions to base-group
values plus a top component.  Convention, fixed once and tested: evaluating
a word left to right with running top prefix u, a base letter deposits its
value at position u^-1.  Consequently the word  a^-1 . f . a  (a a top
letter, f a base letter) places the lamp f at the position of a, and the
product law is

    (phi, a) . (psi, b) = (p -> phi(p) * psi(p*a), a*b).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Optional

from .errors import AlphabetMismatch, GroupDefinitionError
from .groups import FiniteGroup, Group
from .words import Alphabet, Word, invert, relabel


class WreathElement:
    __slots__ = ("top", "base")

    def __init__(self, top: Any, base: dict):
        self.top = top
        self.base = base

    def __repr__(self) -> str:
        return f"WreathElement(top={self.top!r}, base={self.base!r})"


@dataclass(frozen=True)
class NormalForm:
    """Top component plus ordered (position, value) entries.

    Reassembling  top . prod_i position_i^-1 (value_i, 1) position_i
    reproduces the element exactly.
    """

    top: Any
    entries: tuple[tuple[Any, Any], ...]


class WreathProduct:
    """Handle for base wr top over the combined generating set.

    The combined alphabet lists the top generators first, then the base
    generators; the two name sets must be disjoint.
    """

    def __init__(self, top: Group, base: Group):
        overlap = set(top.alphabet.names) & set(base.alphabet.names)
        if overlap:
            raise GroupDefinitionError(
                f"top and base share generator names: {sorted(overlap)}"
            )
        self.top = top
        self.base = base
        self.alphabet = Alphabet(top.alphabet.names + base.alphabet.names)
        self._split = len(top.alphabet)

    # letter classification

    def is_top_letter(self, index: int) -> bool:
        return index < self._split

    def top_index(self, index: int) -> int:
        return index

    def base_index(self, index: int) -> int:
        return index - self._split

    def lift_top(self, word: Word) -> Word:
        return relabel(word, self.alphabet)

    def lift_base(self, word: Word) -> Word:
        return relabel(word, self.alphabet)

    # element arithmetic

    def identity(self) -> WreathElement:
        return WreathElement(self.top.identity(), {})

    def element(self, top_value: Any, lamps: Optional[Iterable] = None) -> WreathElement:
        base: dict = {}
        if lamps:
            items = lamps.items() if isinstance(lamps, dict) else lamps
            for position, value in items:
                if not self.base.is_identity(value):
                    base[position] = value
        return WreathElement(top_value, base)

    def embed_top(self, a: Any) -> WreathElement:
        return WreathElement(a, {})

    def lamp(self, position: Any, value: Any) -> WreathElement:
        return self.element(self.top.identity(), [(position, value)])

    def multiply(self, g: WreathElement, h: WreathElement) -> WreathElement:
        base = dict(g.base)
        shift = self.top.inverse(g.top)
        for position, value in h.base.items():
            p = self.top.multiply(position, shift)
            if p in base:
                merged = self.base.multiply(base[p], value)
                if self.base.is_identity(merged):
                    del base[p]
                else:
                    base[p] = merged
            else:
                base[p] = value
        return WreathElement(self.top.multiply(g.top, h.top), base)

    def inverse(self, g: WreathElement) -> WreathElement:
        base = {
            self.top.multiply(position, g.top): self.base.inverse(value)
            for position, value in g.base.items()
        }
        return WreathElement(self.top.inverse(g.top), base)

    def equal(self, g: WreathElement, h: WreathElement) -> bool:
        if not self.top.equal(g.top, h.top):
            return False
        if len(g.base) != len(h.base):
            return False
        for position, value in g.base.items():
            if position not in h.base or not self.base.equal(value, h.base[position]):
                return False
        return True

    def is_identity(self, g: WreathElement) -> bool:
        return not g.base and self.top.is_identity(g.top)

    def evaluate(self, word: Word) -> WreathElement:
        if word.alphabet != self.alphabet:
            raise AlphabetMismatch(
                f"word over {word.alphabet!r} fed to wreath product over {self.alphabet!r}"
            )
        prefix = self.top.identity()
        base: dict = {}
        for index, sign in word.letters:
            if index < self._split:
                prefix = self.top.multiply(prefix, self.top.letter_value(index, sign))
            else:
                position = self.top.inverse(prefix)
                value = self.base.letter_value(index - self._split, sign)
                if position in base:
                    merged = self.base.multiply(base[position], value)
                    if self.base.is_identity(merged):
                        del base[position]
                    else:
                        base[position] = merged
                else:
                    base[position] = value
        return WreathElement(prefix, base)

    def letter_value(self, index: int, sign: int) -> WreathElement:
        return self.evaluate(Word(self.alphabet, [(index, sign)]))

    def support(self, g: WreathElement) -> list:
        return sorted(g.base, key=self.top.canonical_key)

    # normal forms

    def normal_form(self, g: WreathElement) -> NormalForm:
        entries = [
            (self.top.multiply(position, g.top), g.base[position])
            for position in g.base
        ]
        entries.sort(key=lambda entry: self.top.canonical_key(entry[0]))
        return NormalForm(top=g.top, entries=tuple(entries))

    def assemble(self, nf: NormalForm) -> Word:
        """Word reproducing the element: top word, then conjugated lamps."""
        word = self.lift_top(self.top.element_word(nf.top))
        for position, value in nf.entries:
            conj = self.lift_top(self.top.element_word(position))
            word = word * invert(conj) * self.lift_base(self.base.element_word(value)) * conj
        return word

    # finite materialisation

    def as_finite_group(self, max_size: int = 20000) -> FiniteGroup:
        """Enumerate the whole wreath product as a finite group handle."""
        if not isinstance(self.top, FiniteGroup) or not isinstance(self.base, FiniteGroup):
            raise GroupDefinitionError("finite materialisation needs finite top and base")

        def freeze(g: WreathElement) -> tuple:
            return (g.top, tuple(sorted(g.base.items())))

        def thaw(key: tuple) -> WreathElement:
            return WreathElement(key[0], dict(key[1]))

        def mul(a: tuple, b: tuple) -> tuple:
            return freeze(self.multiply(thaw(a), thaw(b)))

        def inv(a: tuple) -> tuple:
            return freeze(self.inverse(thaw(a)))

        generators = [
            freeze(self.letter_value(i, 1)) for i in range(len(self.alphabet))
        ]
        return FiniteGroup.from_elements(
            self.alphabet.names,
            freeze(self.identity()),
            generators,
            mul,
            inv,
            max_size=max_size,
        )

    def __repr__(self) -> str:
        return f"WreathProduct(top={self.top!r}, base={self.base!r})"
