"""Exact ground truth for finite groups.

Palindrome representability is decided by reachability in the pair
automaton tracking (value of u, value of reverse(u)) over all words u;
every palindromic word has the shape u.c.reverse(u) with c empty or a
single signed letter, so the reachable pairs describe all palindromic
elements exactly.  Width is then a breadth-first search where one step
multiplies by any palindrome-representable element.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExhausted, NotGenerated
from .groups import FiniteGroup
from .words import Word, is_palindrome, reverse

Pair = tuple[int, int]


@dataclass
class PairAutomaton:
    """Reachable (value, reversed value) pairs with predecessor links."""

    group: FiniteGroup
    order: tuple[Pair, ...]
    parents: dict  # pair -> (previous pair, appended letter) or None
    depths: dict

    def witness(self, pair: Pair) -> Word:
        """Shortest word u with (eval(u), eval(reverse(u))) = pair."""
        letters = []
        while True:
            link = self.parents[pair]
            if link is None:
                break
            pair, letter = link
            letters.append(letter)
        return Word(self.group.alphabet, reversed(letters))


def build_pair_automaton(group: FiniteGroup) -> PairAutomaton:
    """Fixed point of (g, g*) -> (g.x, x.g*) over all signed letters."""
    start = (group.identity(), group.identity())
    parents: dict = {start: None}
    depths = {start: 0}
    order = [start]
    queue = deque([start])
    letter_values = [
        ((index, sign), group.letter_value(index, sign))
        for index in range(len(group.alphabet))
        for sign in (1, -1)
    ]
    while queue:
        pair = queue.popleft()
        g, g_star = pair
        for letter, value in letter_values:
            successor = (group.multiply(g, value), group.multiply(value, g_star))
            if successor not in parents:
                parents[successor] = (pair, letter)
                depths[successor] = depths[pair] + 1
                order.append(successor)
                queue.append(successor)
    return PairAutomaton(group=group, order=tuple(order), parents=parents, depths=depths)


@dataclass
class PalindromeSet:
    """Palindrome-representable elements with shortest palindromic witnesses."""

    group: FiniteGroup
    witnesses: dict  # element index -> palindromic Word, insertion-ordered


def palindrome_set(automaton: PairAutomaton) -> PalindromeSet:
    group = automaton.group
    centers = [None] + [
        (index, sign)
        for index in range(len(group.alphabet))
        for sign in (1, -1)
    ]
    by_depth: dict[int, list[Pair]] = {}
    for pair in automaton.order:
        by_depth.setdefault(automaton.depths[pair], []).append(pair)
    witnesses: dict[int, Word] = {}
    max_depth = max(by_depth)
    for total in range(2 * max_depth + 2):
        depth, parity = divmod(total, 2)
        if depth not in by_depth:
            continue
        for pair in by_depth[depth]:
            g, g_star = pair
            u = automaton.witness(pair)
            for center in centers:
                if (center is None) != (parity == 0):
                    continue
                if center is None:
                    element = group.multiply(g, g_star)
                    word = u * reverse(u)
                else:
                    value = group.letter_value(*center)
                    element = group.multiply(group.multiply(g, value), g_star)
                    word = u * Word(group.alphabet, [center]) * reverse(u)
                if element not in witnesses:
                    witnesses[element] = word
    return PalindromeSet(group=group, witnesses=witnesses)


def naive_palindromic_elements(
    group: FiniteGroup, max_half_length: Optional[int] = None
) -> frozenset[int]:
    """Evaluate every palindromic word up to length 2*cutoff+1, level by level.

    Plain level sets, no predecessor bookkeeping: level k holds the
    (value, reversed value) evaluations of all words of length exactly k.
    Independent of the automaton construction above.
    """
    if max_half_length is None:
        max_half_length = group.size
    letter_values = [
        group.letter_value(index, sign)
        for index in range(len(group.alphabet))
        for sign in (1, -1)
    ]
    elements: set[int] = set()
    level = {(group.identity(), group.identity())}
    for _ in range(max_half_length + 1):
        for g, g_star in level:
            elements.add(group.multiply(g, g_star))
            for value in letter_values:
                elements.add(group.multiply(group.multiply(g, value), g_star))
        level = {
            (group.multiply(g, value), group.multiply(value, g_star))
            for g, g_star in level
            for value in letter_values
        }
    return frozenset(elements)


@dataclass
class WidthReport:
    width: int
    witness: int
    distances: tuple[int, ...]

    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.distances:
            out[d] = out.get(d, 0) + 1
        return out


def palindrome_width_bfs(
    group: FiniteGroup, moves: dict
) -> tuple[list[int], list[Optional[tuple[int, int]]]]:
    """Distances from the identity where one step right-multiplies by a move.

    Returns (distances, parents); parents[x] = (previous element, move used).
    Raises NotGenerated when some element stays unreachable.
    """
    distances = [-1] * group.size
    parents: list[Optional[tuple[int, int]]] = [None] * group.size
    distances[group.identity()] = 0
    queue = deque([group.identity()])
    move_items = [m for m in moves if not group.is_identity(m)]
    while queue:
        x = queue.popleft()
        for m in move_items:
            y = group.multiply(x, m)
            if distances[y] < 0:
                distances[y] = distances[x] + 1
                parents[y] = (x, m)
                queue.append(y)
    if any(d < 0 for d in distances):
        raise NotGenerated("palindromic elements do not generate the group")
    return distances, parents


class PalindromeOracle:
    """Cached automaton, palindrome set and width search for one handle."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self._automaton: Optional[PairAutomaton] = None
        self._palindromes: Optional[PalindromeSet] = None
        self._bfs: Optional[tuple[list[int], list]] = None

    @property
    def automaton(self) -> PairAutomaton:
        if self._automaton is None:
            self._automaton = build_pair_automaton(self.group)
        return self._automaton

    @property
    def palindromes(self) -> PalindromeSet:
        if self._palindromes is None:
            self._palindromes = palindrome_set(self.automaton)
        return self._palindromes

    def _width_bfs(self) -> tuple[list[int], list]:
        if self._bfs is None:
            self._bfs = palindrome_width_bfs(self.group, self.palindromes.witnesses)
        return self._bfs

    def width(self) -> WidthReport:
        distances, _ = self._width_bfs()
        top = max(distances)
        witness = distances.index(top)
        return WidthReport(width=top, witness=witness, distances=tuple(distances))

    def decompose(self, a: int) -> list[Word]:
        """At most width palindromic words multiplying to the element."""
        _, parents = self._width_bfs()
        factors: list[Word] = []
        current = a
        while parents[current] is not None:
            previous, move = parents[current]
            factors.append(self.palindromes.witnesses[move])
            current = previous
        factors.reverse()
        return factors

    def asymmetric_relation(self, budget: Optional[int] = None) -> Optional[Word]:
        """Shortest word r with r = 1 but reverse(r) != 1, if one exists."""
        identity = self.group.identity()
        best: Optional[Pair] = None
        for pair in self.automaton.order:
            if pair[0] == identity and pair[1] != identity:
                best = pair
                break
        if best is None:
            return None
        if budget is not None and self.automaton.depths[best] > budget:
            raise BudgetExhausted(
                f"shortest asymmetric relation has length {self.automaton.depths[best]},"
                f" over budget {budget}"
            )
        return self.automaton.witness(best)


def oracle_for(group: FiniteGroup) -> PalindromeOracle:
    cached = getattr(group, "_palindrome_oracle", None)
    if cached is None:
        cached = PalindromeOracle(group)
        group._palindrome_oracle = cached
    return cached


def exact_palindromic_width(group: FiniteGroup) -> WidthReport:
    """Exact width by palindrome-move BFS; errors if not generated."""
    return oracle_for(group).width()


def decompose_top_element(group: FiniteGroup, a: int) -> list[Word]:
    return oracle_for(group).decompose(a)


@dataclass
class FactorizationCertificate:
    """Machine-checkable result of verifying factors against a target."""

    valid: bool
    product_matches: bool
    centers: tuple[Optional[str], ...]
    failing_index: Optional[int] = None
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "product_matches": self.product_matches,
            "centers": list(self.centers),
            "failing_index": self.failing_index,
            "reason": self.reason,
        }


def verify_factorization(evaluator, target, factors: Sequence[Word]) -> FactorizationCertificate:
    """Check every factor is a structural palindrome and the product matches.

    The evaluator is any handle with evaluate/multiply/identity/equal
    (a group or a wreath product); the reported reason is NotPalindrome
    with the first failing index, or ProductMismatch.
    """
    centers: list[Optional[str]] = []
    for i, factor in enumerate(factors):
        if factor.alphabet != evaluator.alphabet:
            return FactorizationCertificate(
                valid=False,
                product_matches=False,
                centers=tuple(centers),
                failing_index=i,
                reason="AlphabetMismatch",
            )
        certificate = is_palindrome(factor)
        if certificate is None:
            return FactorizationCertificate(
                valid=False,
                product_matches=False,
                centers=tuple(centers),
                failing_index=i,
                reason="NotPalindrome",
            )
        centers.append(certificate.center_str())
    product = evaluator.identity()
    for factor in factors:
        product = evaluator.multiply(product, evaluator.evaluate(factor))
    if not evaluator.equal(product, target):
        return FactorizationCertificate(
            valid=False,
            product_matches=False,
            centers=tuple(centers),
            reason="ProductMismatch",
        )
    return FactorizationCertificate(valid=True, product_matches=True, centers=tuple(centers))
