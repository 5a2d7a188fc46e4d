"""Concrete group backends with one evaluation contract.

Every backend has decidable equality and evaluates words homomorphically:
finite groups (Cayley table or permutation generators), free groups,
free abelian groups, abelianized free groups, a free-abelian x finite-abelian
product for infinite abelian groups with torsion, and the Baumslag-Solitar
one-relator family for relation experiments.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

from .errors import (
    AlphabetMismatch,
    GroupDefinitionError,
    NotGenerated,
)
from .words import Alphabet, Word, invert, reduce_free, relabel


class Group:
    """Shared backend contract: immutable handle, value-like elements."""

    alphabet: Alphabet

    def identity(self):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def equal(self, a, b) -> bool:
        return a == b

    def is_identity(self, a) -> bool:
        return self.equal(a, self.identity())

    def letter_value(self, index: int, sign: int):
        raise NotImplementedError

    def evaluate(self, word: Word):
        if word.alphabet != self.alphabet:
            raise AlphabetMismatch(
                f"word over {word.alphabet!r} fed to group over {self.alphabet!r}"
            )
        value = self.identity()
        for index, sign in word.letters:
            value = self.multiply(value, self.letter_value(index, sign))
        return value

    def element_word(self, a) -> Word:
        """A canonical representative word for the element."""
        raise NotImplementedError

    def canonical_key(self, a):
        """Sort key fixing a deterministic order on elements."""
        raise NotImplementedError

    def is_abelian(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class GeodesicTable:
    """Per element: word length and one shortlex geodesic."""

    lengths: tuple[int, ...]
    words: tuple[Word, ...]

    @property
    def max_length(self) -> int:
        return max(self.lengths)


class FiniteGroup(Group):
    """Finite group as an element list (index 0 = identity) plus Cayley table.

    When synthesised from generators the canonical element order is
    breadth-first discovery order (generators in alphabet order, positive
    sign before negative); explicit tables keep their given order.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        table: Sequence[Sequence[int]],
        generator_indices: Sequence[int],
        payloads: Optional[Sequence[Any]] = None,
        source_def: Optional[dict] = None,
    ):
        size = len(table)
        if size == 0:
            raise GroupDefinitionError("empty element list")
        rows = [list(row) for row in table]
        for row in rows:
            if len(row) != size or sorted(row) != list(range(size)):
                raise GroupDefinitionError("multiplication table is not a Latin square")
        for j in range(size):
            if sorted(rows[i][j] for i in range(size)) != list(range(size)):
                raise GroupDefinitionError("multiplication table is not a Latin square")
        if rows[0] != list(range(size)):
            raise GroupDefinitionError("element 0 must be the identity (row 0)")
        if any(rows[i][0] != i for i in range(size)):
            raise GroupDefinitionError("element 0 must be the identity (column 0)")
        generator_indices = tuple(generator_indices)
        if len(generator_indices) != len(alphabet):
            raise GroupDefinitionError("one generator per alphabet letter required")
        if any(not 0 <= g < size for g in generator_indices):
            raise GroupDefinitionError("generator index out of range")
        self.alphabet = alphabet
        self.size = size
        self._table = rows
        self._inv = [row.index(0) for row in rows]
        self.generator_indices = generator_indices
        self.payloads = tuple(payloads) if payloads is not None else None
        self.source_def = source_def
        self._geodesics: Optional[GeodesicTable] = None
        if self._closure(generator_indices) != size:
            raise GroupDefinitionError("generators do not generate the group")

    def _closure(self, gens: Sequence[int]) -> int:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                for y in (self._table[x][g], self._table[x][self._inv[g]]):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
        return len(seen)

    @classmethod
    def from_elements(
        cls,
        names: Sequence[str],
        identity: Any,
        generators: Sequence[Any],
        mul: Callable[[Any, Any], Any],
        inv: Callable[[Any], Any],
        max_size: int = 20000,
        source_def: Optional[dict] = None,
    ) -> "FiniteGroup":
        """Closure of abstract generator payloads under mul; BFS order."""
        if len(generators) != len(names):
            raise GroupDefinitionError("one generator payload per name required")
        index = {identity: 0}
        items = [identity]
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in generators:
                for y in (mul(x, g), mul(x, inv(g))):
                    if y not in index:
                        if len(items) >= max_size:
                            raise GroupDefinitionError(
                                f"closure exceeded {max_size} elements"
                            )
                        index[y] = len(items)
                        items.append(y)
                        queue.append(y)
        table = [[index[mul(a, b)] for b in items] for a in items]
        gen_indices = [index[g] for g in generators]
        return cls(Alphabet(names), table, gen_indices, payloads=items, source_def=source_def)

    @classmethod
    def from_permutations(
        cls,
        generators: "dict[str, Sequence[int]] | Iterable[tuple[str, Sequence[int]]]",
        source_def: Optional[dict] = None,
    ) -> "FiniteGroup":
        """Generators as one-line permutation images, 1-based."""
        items = list(generators.items()) if isinstance(generators, dict) else list(generators)
        if not items:
            raise GroupDefinitionError("at least one permutation generator required")
        degree = len(items[0][1])
        payloads = []
        for name, images in items:
            images = list(images)
            if sorted(images) != list(range(1, degree + 1)):
                raise GroupDefinitionError(
                    f"generator {name!r} is not a permutation of 1..{degree}"
                )
            payloads.append(tuple(i - 1 for i in images))

        def mul(p: tuple, q: tuple) -> tuple:
            return tuple(q[p[i]] for i in range(degree))

        def inv(p: tuple) -> tuple:
            out = [0] * degree
            for i, image in enumerate(p):
                out[image] = i
            return tuple(out)

        return cls.from_elements(
            [name for name, _ in items],
            tuple(range(degree)),
            payloads,
            mul,
            inv,
            source_def=source_def,
        )

    @classmethod
    def from_table(
        cls,
        names: Sequence[str],
        table: Sequence[Sequence[int]],
        generator_indices: Sequence[int],
        source_def: Optional[dict] = None,
    ) -> "FiniteGroup":
        return cls(Alphabet(names), table, generator_indices, source_def=source_def)

    def with_extra_generator(self, name: str, element_index: int) -> "FiniteGroup":
        """Same group, generating set extended by one named element."""
        if not 0 <= element_index < self.size:
            raise GroupDefinitionError(f"element index {element_index} out of range")
        return FiniteGroup(
            self.alphabet.extend([name]),
            self._table,
            self.generator_indices + (element_index,),
            payloads=self.payloads,
            source_def=None,
        )

    def identity(self) -> int:
        return 0

    def multiply(self, a: int, b: int) -> int:
        return self._table[a][b]

    def inverse(self, a: int) -> int:
        return self._inv[a]

    def letter_value(self, index: int, sign: int) -> int:
        g = self.generator_indices[index]
        return g if sign > 0 else self._inv[g]

    def geodesics(self) -> GeodesicTable:
        """Shortlex geodesics by BFS; alphabet order, '+' before '-'."""
        if self._geodesics is None:
            lengths = [-1] * self.size
            geodesic_words: list[Optional[Word]] = [None] * self.size
            lengths[0] = 0
            geodesic_words[0] = Word(self.alphabet)
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for index in range(len(self.alphabet)):
                    for sign in (1, -1):
                        y = self._table[x][self.letter_value(index, sign)]
                        if lengths[y] < 0:
                            lengths[y] = lengths[x] + 1
                            geodesic_words[y] = geodesic_words[x] * Word(
                                self.alphabet, [(index, sign)]
                            )
                            queue.append(y)
            if any(length < 0 for length in lengths):
                raise NotGenerated("generators do not generate the group")
            self._geodesics = GeodesicTable(tuple(lengths), tuple(geodesic_words))
        return self._geodesics

    def element_word(self, a: int) -> Word:
        return self.geodesics().words[a]

    def canonical_key(self, a: int) -> int:
        return a

    def is_abelian(self) -> bool:
        gens = self.generator_indices
        return all(self._table[g][h] == self._table[h][g] for g in gens for h in gens)

    def elements(self) -> range:
        return range(self.size)

    def payload_label(self, a: int) -> str:
        if self.payloads is None:
            return str(a)
        payload = self.payloads[a]
        if isinstance(payload, tuple) and all(isinstance(x, int) for x in payload):
            return str(tuple(x + 1 for x in payload))
        return str(payload)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.size}, gens={list(self.alphabet.names)})"


class FreeGroup(Group):
    """Free group; elements are freely reduced words."""

    def __init__(
        self,
        rank: Optional[int] = None,
        names: Optional[Sequence[str]] = None,
        source_def: Optional[dict] = None,
    ):
        if names is None:
            if rank is None:
                raise GroupDefinitionError("free group needs a rank or names")
            names = tuple(f"x{i + 1}" for i in range(rank))
        self.alphabet = Alphabet(names)
        self.rank = len(self.alphabet)
        self.source_def = source_def

    def identity(self) -> Word:
        return Word(self.alphabet)

    def multiply(self, a: Word, b: Word) -> Word:
        return reduce_free(a * b)

    def inverse(self, a: Word) -> Word:
        return invert(a)

    def letter_value(self, index: int, sign: int) -> Word:
        return Word(self.alphabet, [(index, sign)])

    def evaluate(self, word: Word) -> Word:
        if word.alphabet != self.alphabet:
            raise AlphabetMismatch("word over a different alphabet")
        return reduce_free(word)

    def element_word(self, a: Word) -> Word:
        return a

    def canonical_key(self, a: Word):
        return a.letters

    def is_abelian(self) -> bool:
        return self.rank <= 1

    def __repr__(self) -> str:
        return f"FreeGroup({list(self.alphabet.names)})"


class FreeAbelianGroup(Group):
    """Free abelian group; elements are integer exponent vectors."""

    _default_prefix = "t"

    def __init__(
        self,
        rank: Optional[int] = None,
        names: Optional[Sequence[str]] = None,
        source_def: Optional[dict] = None,
    ):
        if names is None:
            if rank is None:
                raise GroupDefinitionError("free abelian group needs a rank or names")
            names = tuple(f"{self._default_prefix}{i + 1}" for i in range(rank))
        self.alphabet = Alphabet(names)
        self.rank = len(self.alphabet)
        self.source_def = source_def

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def multiply(self, a, b) -> tuple[int, ...]:
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a) -> tuple[int, ...]:
        return tuple(-x for x in a)

    def letter_value(self, index: int, sign: int) -> tuple[int, ...]:
        return tuple(sign if i == index else 0 for i in range(self.rank))

    def evaluate(self, word: Word) -> tuple[int, ...]:
        if word.alphabet != self.alphabet:
            raise AlphabetMismatch("word over a different alphabet")
        sums = [0] * self.rank
        for index, sign in word.letters:
            sums[index] += sign
        return tuple(sums)

    def element_word(self, a) -> Word:
        return Word.from_blocks(self.alphabet, [(i, e) for i, e in enumerate(a) if e])

    def canonical_key(self, a):
        return a

    def is_abelian(self) -> bool:
        return True

    def infinite_order_generator_index(self) -> Optional[int]:
        return 0 if self.rank else None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.alphabet.names)})"


class AbelianizedFreeGroup(FreeAbelianGroup):
    """Abelianization of a free group, kept as its own backend tag.

    Same arithmetic as FreeAbelianGroup; generator names default to the
    free-group convention so words relabel cleanly between the two.
    """

    _default_prefix = "x"


def abelianize(word: Word) -> tuple[int, ...]:
    """Exponent sums per generator; zero exactly on the derived subgroup."""
    sums = [0] * len(word.alphabet)
    for index, sign in word.letters:
        sums[index] += sign
    return tuple(sums)


class AbelianProductGroup(Group):
    """Free abelian part times a finite abelian part.

    Models finitely generated infinite abelian groups with torsion; the
    infinite-order generators are the free part, listed first.
    """

    def __init__(
        self,
        free_rank: int,
        finite: FiniteGroup,
        free_names: Optional[Sequence[str]] = None,
        source_def: Optional[dict] = None,
    ):
        if not finite.is_abelian():
            raise GroupDefinitionError("finite part must be abelian")
        if free_names is None:
            free_names = tuple(f"t{i + 1}" for i in range(free_rank))
        if len(free_names) != free_rank:
            raise GroupDefinitionError("one name per free generator required")
        self.free_rank = free_rank
        self.finite = finite
        self.alphabet = Alphabet(tuple(free_names) + finite.alphabet.names)
        self.rank = free_rank + len(finite.alphabet)
        self.source_def = source_def

    def identity(self):
        return ((0,) * self.free_rank, 0)

    def multiply(self, a, b):
        return (
            tuple(x + y for x, y in zip(a[0], b[0])),
            self.finite.multiply(a[1], b[1]),
        )

    def inverse(self, a):
        return (tuple(-x for x in a[0]), self.finite.inverse(a[1]))

    def letter_value(self, index: int, sign: int):
        if index < self.free_rank:
            vec = tuple(sign if i == index else 0 for i in range(self.free_rank))
            return (vec, 0)
        return ((0,) * self.free_rank, self.finite.letter_value(index - self.free_rank, sign))

    def element_word(self, a) -> Word:
        free_part = Word.from_blocks(
            self.alphabet, [(i, e) for i, e in enumerate(a[0]) if e]
        )
        finite_part = relabel(self.finite.element_word(a[1]), self.alphabet)
        return free_part * finite_part

    def canonical_key(self, a):
        return (a[0], a[1])

    def is_abelian(self) -> bool:
        return True

    def infinite_order_generator_index(self) -> Optional[int]:
        return 0 if self.free_rank else None

    def __repr__(self) -> str:
        return f"AbelianProductGroup(Z^{self.free_rank} x order-{self.finite.size})"


class BaumslagSolitar(Group):
    """One-relator family <a, b | a^-1 b^n a = b^m>.

    Elements are freely reduced words; equality is decided by pinch
    reduction, which is exact for this presentation.
    """

    def __init__(self, n: int, m: int):
        if n == 0 or m == 0:
            raise GroupDefinitionError("both exponents must be nonzero")
        self.n = n
        self.m = m
        self.alphabet = Alphabet(("a", "b"))
        self.source_def = {"preset": f"BS({n},{m})"}

    def identity(self) -> Word:
        return Word(self.alphabet)

    def multiply(self, a: Word, b: Word) -> Word:
        return reduce_free(a * b)

    def inverse(self, a: Word) -> Word:
        return invert(a)

    def letter_value(self, index: int, sign: int) -> Word:
        return Word(self.alphabet, [(index, sign)])

    def evaluate(self, word: Word) -> Word:
        if word.alphabet != self.alphabet:
            raise AlphabetMismatch("word over a different alphabet")
        return reduce_free(word)

    def equal(self, a: Word, b: Word) -> bool:
        return self.is_trivial(self.multiply(a, invert(b)))

    def is_trivial(self, w: Word) -> bool:
        # Syllable form b^k0 a^e1 b^k1 ... ; pinches a^-1 b^(qn) a -> b^(qm)
        # and a b^(qm) a^-1 -> b^(qn) shrink the stable-letter count, so the
        # loop terminates; a pinch-free word with stable letters is nontrivial.
        w = reduce_free(w)
        syllables: list[list] = [["b", 0]]
        for index, sign in w.letters:
            if index == 0:
                syllables.append(["a", sign])
                syllables.append(["b", 0])
            else:
                syllables[-1][1] += sign
        changed = True
        while changed:
            changed = False
            for i in range(len(syllables) - 2):
                kind, e1 = syllables[i]
                if kind != "a":
                    continue
                _, k = syllables[i + 1]
                e2 = syllables[i + 2][1]
                if syllables[i + 2][0] != "a" or e2 != -e1:
                    continue
                if e1 == -1 and k % self.n == 0:
                    new_exp = k // self.n * self.m
                elif e1 == 1 and k % self.m == 0:
                    new_exp = k // self.m * self.n
                else:
                    continue
                syllables[i - 1][1] += new_exp + syllables[i + 3][1]
                del syllables[i : i + 4]
                changed = True
                break
        return len(syllables) == 1 and syllables[0][1] == 0

    def element_word(self, a: Word) -> Word:
        return a

    def is_abelian(self) -> bool:
        return self.n == 1 and self.m == 1

    def relation(self) -> Word:
        """The defining relator a^-1 b^n a b^-m."""
        return Word.from_blocks(self.alphabet, [("a", -1), ("b", self.n), ("a", 1), ("b", -self.m)])

    def __repr__(self) -> str:
        return f"BaumslagSolitar({self.n}, {self.m})"


@dataclass(frozen=True)
class Homomorphism:
    """Letter substitution from a free source into any backend.

    Any assignment of target words to source generators defines a
    homomorphism; single-letter images keep the exact letter pattern, so
    palindromic words stay palindromic.
    """

    source: Group
    target: Group
    images: tuple[Word, ...]

    def push_word(self, w: Word) -> Word:
        if w.alphabet != self.source.alphabet:
            raise AlphabetMismatch("word is not over the source alphabet")
        out = Word(self.target.alphabet)
        for index, sign in w.letters:
            image = self.images[index]
            out = out * (image if sign > 0 else invert(image))
        return out

    def image_of_word(self, w: Word):
        return self.target.evaluate(self.push_word(w))

    def image_of_element(self, a):
        return self.image_of_word(self.source.element_word(a))


def quotient_map(
    source: Group, target: Group, images: Sequence["Word | str"]
) -> Homomorphism:
    """Homomorphism sending each source generator to a target word."""
    if len(images) != len(source.alphabet):
        raise GroupDefinitionError("one image per source generator required")
    words = tuple(
        Word.parse(target.alphabet, im) if isinstance(im, str) else im for im in images
    )
    for w in words:
        if w.alphabet != target.alphabet:
            raise AlphabetMismatch("image word is not over the target alphabet")
    return Homomorphism(source=source, target=target, images=words)
