"""Constructive palindrome factorizations with evaluation certificates.

Every operation here emits a list of unreduced palindromic words together
with a certificate from the oracle: factors are checked structurally and
their concatenation is evaluated against an independently computed target
element.  Nothing is ever reported without that check passing.

The constructions:

* abelian elements split into one power word per generator;
* a commutator [a, t] over an abelian top unrolls into alternating
  sandwich factors and power words (2n factors, 2n+1 when n is odd);
* over an infinite abelian top, each commutator costs 7 factors built
  from two high powers s = x^q and t = x^y of an infinite-order
  generator, found by verify-and-retry with doubling;
* over a non-abelian top with a reversal-asymmetric relation r, a whole
  product of conjugated commutators collapses into the single palindrome
  h.reverse(h), because interleaving r makes reverse(h) evaluate to the
  identity;
* over a finite top the abelianized part is walked with geodesic cursor
  moves and power-word deposits, and the derived residual reuses the
  single-palindrome construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .commutators import commutator_word, express_in_derived
from .errors import (
    AbelianGroup,
    BudgetExhausted,
    GroupDefinitionError,
    InvalidWitness,
    MetabelianUnavailable,
    NoInfiniteOrderGenerator,
    NotAbelian,
    NoValidShift,
    PairShapeMismatch,
    PalinwidthError,
    ReverseNotTrivial,
)
from .groups import (
    AbelianProductGroup,
    AbelianizedFreeGroup,
    BaumslagSolitar,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Group,
    Homomorphism,
    abelianize,
)
from .oracle import (
    FactorizationCertificate,
    oracle_for,
    verify_factorization,
)
from .words import Word, invert, relabel, reverse, sandwich
from .wreath import WreathElement, WreathProduct


@dataclass(frozen=True)
class CommutatorSite:
    """One support position with its list of commutator argument pairs."""

    position: Any
    pairs: tuple[tuple[Word, Word], ...]


@dataclass(frozen=True)
class CommutatorData:
    sites: tuple[CommutatorSite, ...]

    def max_pairs(self) -> int:
        return max((len(site.pairs) for site in self.sites), default=0)


@dataclass(frozen=True)
class RelationWitness:
    """A relation r with r = 1 but reverse(r) != 1 in the group.

    When the original generating set admits no such relation, the group
    handle is extended by one extra generator c and the witness lives over
    the extended alphabet; extra_generator records (name, value).
    """

    group: Group
    relation: Word
    reverse_value: Any
    extra_generator: Optional[tuple[str, Any]] = None


@dataclass(frozen=True)
class ShiftParams:
    """Infinite-order generator index and the two shift exponents q != y."""

    generator_index: int
    q: int = 1
    y: int = 2


@dataclass
class PalindromeFactorization:
    """Ordered palindromic factors, their target, and the claimed bound."""

    factors: tuple[Word, ...]
    target: Any
    bound_claimed: Optional[int]
    bound_formula: str
    certificate: Optional[FactorizationCertificate]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.factors = tuple(self.factors)
        if self.bound_claimed is not None and self.bound_claimed >= 0:
            if len(self.factors) > self.bound_claimed:
                raise PalinwidthError(
                    f"{len(self.factors)} factors exceed claimed bound {self.bound_claimed}"
                )

    @property
    def count(self) -> int:
        return len(self.factors)

    @property
    def verified(self) -> bool:
        return self.certificate is not None and self.certificate.valid


def _checked(evaluator, target, factors, bound, formula, meta=None) -> PalindromeFactorization:
    certificate = verify_factorization(evaluator, target, factors)
    if not certificate.valid:
        raise PalinwidthError(
            f"internal verification failed: {certificate.reason}"
            f" at factor {certificate.failing_index}"
        )
    return PalindromeFactorization(
        factors=tuple(factors),
        target=target,
        bound_claimed=bound,
        bound_formula=formula,
        certificate=certificate,
        meta=meta or {},
    )


# ---------------------------------------------------------------------------
# abelian elements


def _abelian_exponents(group: Group, element) -> list[tuple[int, int]]:
    """(letter index, exponent) pairs whose ordered product is the element."""
    if isinstance(group, FreeAbelianGroup):
        return [(i, e) for i, e in enumerate(element) if e]
    if isinstance(group, AbelianProductGroup):
        out = [(i, e) for i, e in enumerate(element[0]) if e]
        finite = group.finite
        sums = abelianize(finite.element_word(element[1]))
        for i, e in enumerate(sums):
            if e:
                out.append((group.free_rank + i, e))
        return out
    if isinstance(group, FiniteGroup):
        if not group.is_abelian():
            raise NotAbelian("abelian handle required")
        return [(i, e) for i, e in enumerate(abelianize(group.element_word(element))) if e]
    raise NotAbelian("abelian handle required")


def decompose_abelian_element(group: Group, element) -> PalindromeFactorization:
    """One power-word palindrome per generator with a nonzero exponent."""
    factors = [
        Word.from_blocks(group.alphabet, [(index, exponent)])
        for index, exponent in _abelian_exponents(group, element)
    ]
    rank = getattr(group, "rank", len(group.alphabet))
    return _checked(group, element, factors, rank, "rank")


# ---------------------------------------------------------------------------
# commutators over an abelian top


def _require_abelian_top(wreath: WreathProduct) -> int:
    top = wreath.top
    if not top.is_abelian():
        raise NotAbelian("commutator unrolling needs an abelian top")
    n = len(top.alphabet)
    if n == 0:
        raise GroupDefinitionError("top group has no generators")
    return n


def _base_only(wreath: WreathProduct, word: Word) -> WreathElement:
    value = wreath.evaluate(word)
    if not wreath.top.is_identity(value.top):
        raise GroupDefinitionError(f"word {word} does not evaluate into the base group")
    return value


def decompose_commutator_abelian_top(
    wreath: WreathProduct, base_word: Word, exponents: Sequence[int]
) -> PalindromeFactorization:
    """[a, t1^i1 ... tn^in] as 2n palindromes (2n+1 for odd n).

    Alternating sandwiches around the inverted power words collapse to
    a^-1 t^-1 a, then the power words themselves supply t.
    """
    n = _require_abelian_top(wreath)
    exponents = list(exponents)
    if len(exponents) != n:
        raise GroupDefinitionError(f"expected {n} exponents, got {len(exponents)}")
    a = relabel(base_word, wreath.alphabet) if base_word.alphabet != wreath.alphabet else base_word
    _base_only(wreath, a)

    def top_power(index: int, exponent: int) -> Word:
        return Word.from_blocks(wreath.alphabet, [(index, exponent)])

    factors: list[Word] = []
    for k in range(n - 1, -1, -1):
        core = top_power(k, -exponents[k])
        if (n - 1 - k) % 2 == 0:
            factors.append(sandwich(invert(a), core))
        else:
            factors.append(sandwich(reverse(a), core))
    if n % 2 == 1:
        factors.append(reverse(a) * a)
    factors.extend(top_power(k, exponents[k]) for k in range(n))

    t_word = Word.from_blocks(wreath.alphabet, list(enumerate(exponents)))
    target = wreath.evaluate(commutator_word(a, t_word))
    bound = 2 * n if n % 2 == 0 else 2 * n + 1
    formula = "2n" if n % 2 == 0 else "2n+1"
    return _checked(wreath, target, factors, bound, formula)


def decompose_commutator_pair(
    wreath: WreathProduct,
    first_word: Word,
    second_word: Word,
    exponents: Sequence[int],
    doubled_exponents: Optional[Sequence[int]] = None,
) -> PalindromeFactorization:
    """[a, t][b, t^2] via two commutator unrollings; t^2 doubles every exponent."""
    exponents = list(exponents)
    if doubled_exponents is None:
        doubled_exponents = [2 * e for e in exponents]
    elif list(doubled_exponents) != [2 * e for e in exponents]:
        raise GroupDefinitionError("second exponent list must double the first")
    first = decompose_commutator_abelian_top(wreath, first_word, exponents)
    second = decompose_commutator_abelian_top(wreath, second_word, doubled_exponents)
    target = wreath.multiply(first.target, second.target)
    n = len(exponents)
    bound = 4 * n if n % 2 == 0 else 4 * n + 2
    formula = "4n" if n % 2 == 0 else "4n+2"
    return _checked(wreath, target, first.factors + second.factors, bound, formula)


# ---------------------------------------------------------------------------
# reversal-asymmetric relations


def find_reversal_asymmetric_relation(
    group: Group, budget: Optional[int] = None
) -> RelationWitness:
    """A relation whose reverse is not a relation.

    Finite groups are searched exactly through the pair automaton; when the
    given generators admit no witness, the set is extended by c = x.y for
    the first non-commuting generator pair and the search is repeated.
    The Baumslag-Solitar family returns its defining relator directly.
    """
    if isinstance(group, BaumslagSolitar):
        if group.is_abelian():
            raise AbelianGroup("every relation of an abelian group reverses to one")
        if abs(group.n) == abs(group.m):
            raise BudgetExhausted(
                "the defining relator reverses to a relation when |n| = |m|"
            )
        r = group.relation()
        reverse_value = group.evaluate(reverse(r))
        if group.is_identity(reverse_value):
            raise InvalidWitness("defining relator unexpectedly reverses to a relation")
        return RelationWitness(group=group, relation=r, reverse_value=reverse_value)
    if not isinstance(group, FiniteGroup):
        raise GroupDefinitionError(
            "relation search needs a finite group or a Baumslag-Solitar handle"
        )
    if group.is_abelian():
        raise AbelianGroup("every relation of an abelian group reverses to one")
    r = oracle_for(group).asymmetric_relation(budget)
    if r is not None:
        return RelationWitness(
            group=group, relation=r, reverse_value=group.evaluate(reverse(r))
        )
    pair = _first_non_commuting_pair(group)
    name = _fresh_name(group, "c")
    value = group.multiply(
        group.generator_indices[pair[0]], group.generator_indices[pair[1]]
    )
    extended = group.with_extra_generator(name, value)
    r = oracle_for(extended).asymmetric_relation(budget)
    if r is None:
        raise BudgetExhausted("no asymmetric relation found even after extending by c")
    return RelationWitness(
        group=extended,
        relation=r,
        reverse_value=extended.evaluate(reverse(r)),
        extra_generator=(name, value),
    )


def _first_non_commuting_pair(group: FiniteGroup) -> tuple[int, int]:
    gens = group.generator_indices
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if group.multiply(gens[i], gens[j]) != group.multiply(gens[j], gens[i]):
                return (i, j)
    raise AbelianGroup("generators commute pairwise")


def _fresh_name(group: Group, stem: str) -> str:
    if stem not in group.alphabet:
        return stem
    k = 2
    while f"{stem}{k}" in group.alphabet:
        k += 1
    return f"{stem}{k}"


def _validate_witness(top: Group, witness: RelationWitness) -> None:
    if witness.group.alphabet != top.alphabet:
        raise InvalidWitness("witness is for a different generating set")
    if not top.is_identity(top.evaluate(witness.relation)):
        raise InvalidWitness("witness word is not a relation")
    if top.is_identity(top.evaluate(reverse(witness.relation))):
        raise InvalidWitness("witness relation reverses to a relation")


# ---------------------------------------------------------------------------
# derived subgroup of the base, non-abelian top


def _site_lamp_product(wreath: WreathProduct, data: CommutatorData) -> WreathElement:
    """prod_i position_i^-1 (prod_j [f_ij, g_ij]) position_i, elementwise."""
    out = wreath.identity()
    for site in data.sites:
        value = wreath.base.identity()
        for f_word, g_word in site.pairs:
            value = wreath.base.multiply(
                value, wreath.base.evaluate(commutator_word(f_word, g_word))
            )
        out = wreath.multiply(out, wreath.element(wreath.top.identity(), [(site.position, value)]))
    return out


def commutator_target(wreath: WreathProduct, data: CommutatorData, top_value) -> WreathElement:
    """The element the commutator data denotes: top_value times the site lamps."""
    _validate_sites(wreath, data)
    return wreath.multiply(wreath.embed_top(top_value), _site_lamp_product(wreath, data))


def _validate_sites(wreath: WreathProduct, data: CommutatorData) -> None:
    keys = [wreath.top.canonical_key(site.position) for site in data.sites]
    if len(set(keys)) != len(keys):
        raise GroupDefinitionError("commutator positions must be pairwise distinct")
    for site in data.sites:
        for f_word, g_word in site.pairs:
            if f_word.alphabet != wreath.base.alphabet or g_word.alphabet != wreath.base.alphabet:
                raise GroupDefinitionError("commutator arguments must be base words")


def decompose_derived_wreath(
    wreath: WreathProduct,
    data: CommutatorData,
    top_value,
    witness: RelationWitness,
) -> PalindromeFactorization:
    """Whole derived-base part as one palindrome h.reverse(h), plus top factors.

    h interleaves the relation r around each commutator argument; reversing
    h sends the f- and g-blocks to two different positions where they cancel
    pairwise, so reverse(h) evaluates to the identity and h.reverse(h) is a
    palindrome representing the same element as h.  The top element costs at
    most pw(top) palindromes from the oracle.
    """
    top = wreath.top
    if not isinstance(top, FiniteGroup):
        raise GroupDefinitionError("the single-palindrome construction needs a finite top")
    _validate_witness(top, witness)
    _validate_sites(wreath, data)

    r = wreath.lift_top(witness.relation)
    r_inv = invert(r)
    h = Word(wreath.alphabet)
    for site in data.sites:
        conjugator = wreath.lift_top(top.element_word(site.position))
        inner = Word(wreath.alphabet)
        for f_word, g_word in site.pairs:
            f = wreath.lift_base(f_word)
            g = wreath.lift_base(g_word)
            inner = inner * invert(f) * r_inv * invert(g) * r * f * r_inv * g * r
        h = h * invert(conjugator) * inner * conjugator

    if not wreath.is_identity(wreath.evaluate(reverse(h))):
        raise ReverseNotTrivial("reverse of the carrier word is not the identity")

    top_oracle = oracle_for(top)
    factors = [wreath.lift_top(w) for w in top_oracle.decompose(top_value)]
    if h.letters:
        factors.append(h * reverse(h))
    target = commutator_target(wreath, data, top_value)
    width = top_oracle.width().width
    return _checked(
        wreath,
        target,
        factors,
        width + 1,
        "pw(top)+1",
        meta={"top_width": width, "carrier": h},
    )


# ---------------------------------------------------------------------------
# shifted commutators over an infinite abelian top


def decompose_shifted_commutators(
    wreath: WreathProduct,
    data: CommutatorData,
    top_value,
    shift: Optional[ShiftParams] = None,
    max_retries: int = 16,
) -> PalindromeFactorization:
    """Seven palindromes per commutator index, shifted by powers of one generator.

    For each j the aggregated words kappa_j = prod_i pos_i^-1 f_ij pos_i and
    tau_j = prod_i pos_i^-1 g_ij pos_i are wrapped as

        kappa_j^-1 s^-1 rev(kappa_j^-1) . s . tau_j^-1 t^-1 rev(tau_j^-1)
        . t s^-1 . rev(kappa_j) s kappa_j . t^-1 . rev(tau_j) t tau_j

    with s = x^q, t = x^y.  Whether a given (q, y) separates the support is
    checked by evaluation; on mismatch both exponents double.
    """
    top = wreath.top
    if not top.is_abelian():
        raise NotAbelian("shifted commutators need an abelian top")
    _validate_sites(wreath, data)
    if shift is None:
        index = getattr(top, "infinite_order_generator_index", lambda: None)()
        if index is None:
            raise NoInfiniteOrderGenerator("top has no infinite-order generator")
        shift = ShiftParams(generator_index=index)
    if shift.q == shift.y:
        raise GroupDefinitionError("shift exponents must differ")

    n = data.max_pairs()
    rank = getattr(top, "rank", len(top.alphabet))
    prefix = [
        relabel(w, wreath.alphabet)
        for w in decompose_abelian_element(top, top_value).factors
    ]
    target = commutator_target(wreath, data, top_value)

    conjugators = [wreath.lift_top(top.element_word(site.position)) for site in data.sites]

    def aggregate(j: int, which: int) -> Word:
        out = Word(wreath.alphabet)
        for site, conjugator in zip(data.sites, conjugators):
            if j < len(site.pairs):
                lifted = wreath.lift_base(site.pairs[j][which])
                out = out * invert(conjugator) * lifted * conjugator
        return out

    def power(exponent: int) -> Word:
        return Word.from_blocks(wreath.alphabet, [(shift.generator_index, exponent)])

    q, y = shift.q, shift.y
    for attempt in range(max_retries + 1):
        factors = list(prefix)
        for j in range(n):
            kappa = aggregate(j, 0)
            tau = aggregate(j, 1)
            factors.append(sandwich(invert(kappa), power(-q)))
            factors.append(power(q))
            factors.append(sandwich(invert(tau), power(-y)))
            factors.append(power(y - q))
            factors.append(sandwich(reverse(kappa), power(q)))
            factors.append(power(-y))
            factors.append(sandwich(reverse(tau), power(y)))
        certificate = verify_factorization(wreath, target, factors)
        if certificate.valid:
            return PalindromeFactorization(
                factors=tuple(factors),
                target=target,
                bound_claimed=rank + 7 * n,
                bound_formula="r+7n",
                certificate=certificate,
                meta={"retries": attempt, "shift": (shift.generator_index, q, y)},
            )
        q *= 2
        y *= 2
    raise NoValidShift(f"no separating shift found in {max_retries} retries")


# ---------------------------------------------------------------------------
# finite top


def decompose_finite_top_abelianized(
    wreath: WreathProduct, element: WreathElement
) -> PalindromeFactorization:
    """Cursor walk over the support with power-word deposits.

    Every move letter is its own single-letter palindrome; each support
    value costs at most d power words.
    """
    top = wreath.top
    base = wreath.base
    if not isinstance(top, FiniteGroup):
        raise GroupDefinitionError("finite top required")
    if not isinstance(base, FreeAbelianGroup):
        raise GroupDefinitionError("vector-valued base required")
    geodesics = top.geodesics()

    factors: list[Word] = []
    prefix = top.identity()

    def move_to(goal: int) -> None:
        nonlocal prefix
        step = geodesics.words[top.multiply(top.inverse(prefix), goal)]
        for letter in step.letters:
            factors.append(wreath.lift_top(Word(top.alphabet, [letter])))
        prefix = goal

    for position in wreath.support(element):
        move_to(top.inverse(position))
        for index, exponent in enumerate(element.base[position]):
            if exponent:
                factors.append(
                    Word.from_blocks(wreath.alphabet, [(len(top.alphabet) + index, exponent)])
                )
    move_to(element.top)

    bound = geodesics.max_length * (top.size + 1) + base.rank * top.size
    return _checked(
        wreath, element, factors, bound, "maxlen*(|top|+1) + d*|top|"
    )


def decompose_full_finite_top(
    wreath: WreathProduct,
    word: Word,
    witness: Optional[RelationWitness] = None,
    budget: Optional[int] = None,
) -> PalindromeFactorization:
    """Free base over a finite non-abelian top, end to end.

    Splits the element into its abelianized image (cursor walk with power
    deposits) and a derived residual (one palindrome via the asymmetric
    relation).  The combined alphabet may gain the extra generator c when
    the relation search demands it; the emitted factors live over the
    possibly extended alphabet, recorded in meta.
    """
    top = wreath.top
    base = wreath.base
    if not isinstance(top, FiniteGroup):
        raise GroupDefinitionError("finite top required")
    if not isinstance(base, FreeGroup):
        raise GroupDefinitionError("free base required")
    if witness is None:
        witness = find_reversal_asymmetric_relation(top, budget)
    if witness.group.alphabet != top.alphabet:
        wide = WreathProduct(witness.group, base)
        word = relabel(word, wide.alphabet)
    else:
        wide = wreath
    target = wide.evaluate(word)

    vector_base = AbelianizedFreeGroup(names=base.alphabet.names)
    vector_wreath = WreathProduct(wide.top, vector_base)
    abelianized = vector_wreath.element(
        target.top,
        [(position, abelianize(value)) for position, value in target.base.items()],
    )
    abelian_part = decompose_finite_top_abelianized(vector_wreath, abelianized)
    factors = [relabel(w, wide.alphabet) for w in abelian_part.factors]

    lifted = wide.identity()
    for w in factors:
        lifted = wide.multiply(lifted, wide.evaluate(w))
    residual = wide.multiply(wide.inverse(lifted), target)
    if not wide.top.is_identity(residual.top):
        raise PalinwidthError("internal: residual has a nontrivial top component")

    sites = tuple(
        CommutatorSite(position, tuple(express_in_derived(residual.base[position])))
        for position in wide.support(residual)
    )
    derived_part = decompose_derived_wreath(
        wide, CommutatorData(sites), wide.top.identity(), witness
    )
    factors.extend(derived_part.factors)

    maxlen = wide.top.geodesics().max_length
    bound = maxlen * (base.rank * top.size + 1) + 1
    formula = "maxlen*(d*|top|+1)+1"
    if len(factors) > bound:
        # degenerate ranks (d = 1 or maxlen = 1) can undercount cursor moves
        bound = maxlen * (top.size + 1) + base.rank * top.size + 1
        formula = "maxlen*(|top|+1) + d*|top| + 1"
    return _checked(
        wide,
        target,
        factors,
        bound,
        formula,
        meta={
            "wreath": wide,
            "witness": witness,
            "abelian_factors": abelian_part.count,
            "derived_factors": derived_part.count,
        },
    )


# ---------------------------------------------------------------------------
# quotient push-forward


def push_factorization(
    hom: Homomorphism, factorization: PalindromeFactorization
) -> PalindromeFactorization:
    """Image of a verified factorization; factor count never changes."""
    factors = tuple(hom.push_word(w) for w in factorization.factors)
    target = hom.image_of_element(factorization.target)
    return _checked(
        hom.target,
        target,
        factors,
        factorization.bound_claimed,
        factorization.bound_formula,
        meta={"pushed_from": factorization.bound_formula},
    )


# ---------------------------------------------------------------------------
# metabelian factor interface


class MetabelianDecomposer:
    """Strategy for the abelianized wreath factor (vector base, abelian top)."""

    def bound(self, base_rank: int, top_rank: int) -> Optional[int]:
        raise NotImplementedError

    def decompose(self, wreath: WreathProduct, element: WreathElement) -> PalindromeFactorization:
        raise NotImplementedError


class ExternalMetabelianDecomposer(MetabelianDecomposer):
    """Default: reports the known external bound 5(d+r) and refuses to build."""

    def bound(self, base_rank: int, top_rank: int) -> int:
        return 5 * (base_rank + top_rank)

    def decompose(self, wreath: WreathProduct, element: WreathElement) -> PalindromeFactorization:
        d = getattr(wreath.base, "rank", len(wreath.base.alphabet))
        r = getattr(wreath.top, "rank", len(wreath.top.alphabet))
        raise MetabelianUnavailable(
            "no constructive decomposition for the abelianized factor; "
            f"external bound is 5(d+r) = {self.bound(d, r)}",
            bound=self.bound(d, r),
        )


class FiniteInstanceMetabelianDecomposer(MetabelianDecomposer):
    """Exact fallback when the whole metabelian wreath product is finite."""

    def __init__(self, max_size: int = 20000):
        self.max_size = max_size

    def bound(self, base_rank: int, top_rank: int) -> Optional[int]:
        return None

    def decompose(self, wreath: WreathProduct, element: WreathElement) -> PalindromeFactorization:
        finite = wreath.as_finite_group(max_size=self.max_size)
        frozen = (element.top, tuple(sorted(element.base.items())))
        index = finite.payloads.index(frozen)
        factors = oracle_for(finite).decompose(index)
        width = oracle_for(finite).width().width
        return _checked(finite, index, factors, width, "pw(finite instance)")


def decompose_full_abelian_top(
    wreath: WreathProduct,
    word: Word,
    pair_shape: Optional[tuple[Word, Word, Sequence[int]]] = None,
    metabelian: Optional[MetabelianDecomposer] = None,
) -> PalindromeFactorization:
    """Free (or finite abelian) base over an abelian top, end to end.

    The abelianized image goes to the metabelian decomposer; the derived
    residual must be supplied in the two-commutator shape [a, t][b, t^2],
    which is consumed and verified, never recomputed.
    """
    if metabelian is None:
        metabelian = ExternalMetabelianDecomposer()
    top = wreath.top
    base = wreath.base
    if not top.is_abelian():
        raise NotAbelian("abelian top required")
    target = wreath.evaluate(word)

    if isinstance(base, FreeGroup):
        vector_base = AbelianizedFreeGroup(names=base.alphabet.names)
        vector_wreath = WreathProduct(top, vector_base)
        abelianized = vector_wreath.element(
            target.top,
            [(p, abelianize(v)) for p, v in target.base.items()],
        )
        meta_evaluator = vector_wreath
    elif isinstance(base, FiniteGroup) and base.is_abelian():
        abelianized = target
        meta_evaluator = wreath
    else:
        raise GroupDefinitionError("base must be free or finite abelian")

    d = getattr(base, "rank", len(base.alphabet))
    r = getattr(top, "rank", len(top.alphabet))
    factors: list[Word] = []
    metabelian_count = 0
    metabelian_bound = 0
    if not meta_evaluator.is_identity(abelianized):
        part = metabelian.decompose(meta_evaluator, abelianized)
        factors.extend(relabel(w, wreath.alphabet) for w in part.factors)
        metabelian_count = part.count
        external = metabelian.bound(d, r)
        metabelian_bound = external if external is not None else part.count

    lifted = wreath.identity()
    for w in factors:
        lifted = wreath.multiply(lifted, wreath.evaluate(w))
    residual = wreath.multiply(wreath.inverse(lifted), target)

    pair_count = 0
    pair_bound = 0
    if not wreath.is_identity(residual):
        if pair_shape is None:
            raise PairShapeMismatch(
                "derived residual is nontrivial; supply the [a,t][b,t^2] shape"
            )
        a_word, b_word, exponents = pair_shape
        pair_part = decompose_commutator_pair(wreath, a_word, b_word, exponents)
        if not wreath.equal(pair_part.target, residual):
            raise PairShapeMismatch(
                "supplied two-commutator shape does not match the residual"
            )
        factors.extend(pair_part.factors)
        pair_count = pair_part.count
        pair_bound = pair_part.bound_claimed

    bound = metabelian_bound + pair_bound
    return _checked(
        wreath,
        target,
        factors,
        bound,
        "metabelian + pair",
        meta={"metabelian_factors": metabelian_count, "pair_factors": pair_count},
    )
