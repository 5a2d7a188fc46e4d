import random

import pytest

import palinwidth.decompose as decompose_module
from palinwidth import (
    AbelianProductGroup,
    AbelianizedFreeGroup,
    CommutatorData,
    CommutatorSite,
    FiniteInstanceMetabelianDecomposer,
    FreeAbelianGroup,
    FreeGroup,
    RelationWitness,
    ShiftParams,
    Word,
    WreathProduct,
    commutator_word,
    decompose_abelian_element,
    decompose_commutator_abelian_top,
    decompose_commutator_pair,
    decompose_derived_wreath,
    decompose_finite_top_abelianized,
    decompose_full_abelian_top,
    decompose_full_finite_top,
    decompose_shifted_commutators,
    exact_palindromic_width,
    find_reversal_asymmetric_relation,
    invert,
    is_palindrome,
    push_factorization,
    quotient_map,
    reverse,
    sandwich,
    verify_factorization,
)
from palinwidth import presets
from palinwidth.errors import (
    AbelianGroup,
    BudgetExhausted,
    GroupDefinitionError,
    InvalidWitness,
    MetabelianUnavailable,
    NoInfiniteOrderGenerator,
    NoValidShift,
    PairShapeMismatch,
    ReverseNotTrivial,
)
from helpers import random_word


def f2z2():
    return WreathProduct(FreeAbelianGroup(2), FreeGroup(names=["y1", "y2"]))


def f2z1():
    return WreathProduct(FreeAbelianGroup(1), FreeGroup(names=["y1", "y2"]))


def s3_wreath():
    s3 = presets.symmetric_3()
    witness = find_reversal_asymmetric_relation(s3)
    return WreathProduct(witness.group, FreeGroup(names=["y1", "y2"])), witness


# ---------------------------------------------------------------------------
# abelian elements


def test_abelian_element_examples():
    Z2 = FreeAbelianGroup(2)
    empty = decompose_abelian_element(Z2, (0, 0))
    assert empty.factors == () and empty.verified
    fact = decompose_abelian_element(Z2, (3, -2))
    assert [str(w) for w in fact.factors] == ["t1^3", "t2^-2"]
    assert fact.verified


def test_abelian_element_random_rank_5():
    Z5 = FreeAbelianGroup(5)
    rng = random.Random(13)
    for _ in range(50):
        vector = tuple(rng.randint(-6, 6) for _ in range(5))
        fact = decompose_abelian_element(Z5, vector)
        assert fact.count <= 5 and fact.verified


def test_abelian_element_product_handle():
    group = AbelianProductGroup(1, presets.cyclic(4, "u"), free_names=["x"])
    rng = random.Random(14)
    for _ in range(50):
        value = group.evaluate(random_word(rng, group.alphabet, 10))
        fact = decompose_abelian_element(group, value)
        assert fact.count <= 2 and fact.verified


# ---------------------------------------------------------------------------
# commutators over abelian tops


def test_commutator_abelian_top_even_structure():
    wreath = f2z2()
    a = Word.parse(wreath.alphabet, "y1*y2^-1")
    fact = decompose_commutator_abelian_top(wreath, a, [3, -2])
    assert fact.count == 4 and fact.verified
    expected = [
        sandwich(invert(a), Word.parse(wreath.alphabet, "t2^2")),
        sandwich(reverse(a), Word.parse(wreath.alphabet, "t1^-3")),
        Word.parse(wreath.alphabet, "t1^3"),
        Word.parse(wreath.alphabet, "t2^-2"),
    ]
    assert list(fact.factors) == expected
    t_word = Word.parse(wreath.alphabet, "t1^3*t2^-2")
    assert wreath.equal(fact.target, wreath.evaluate(commutator_word(a, t_word)))


def test_commutator_abelian_top_odd_structure():
    wreath = f2z1()
    a = Word.parse(wreath.alphabet, "y2*y1")
    fact = decompose_commutator_abelian_top(wreath, a, [4])
    assert fact.count == 3 and fact.verified
    assert fact.factors[1] == reverse(a) * a


def test_commutator_abelian_top_empty_base_word():
    wreath = f2z2()
    fact = decompose_commutator_abelian_top(wreath, Word(wreath.alphabet), [2, 5])
    assert fact.verified
    assert wreath.is_identity(fact.target)


def test_commutator_abelian_top_errors():
    wreath = f2z2()
    with pytest.raises(GroupDefinitionError):
        decompose_commutator_abelian_top(wreath, Word(wreath.alphabet), [1])
    top_word = Word.parse(wreath.alphabet, "t1")
    with pytest.raises(GroupDefinitionError):
        decompose_commutator_abelian_top(wreath, top_word, [1, 0])


def test_commutator_pair():
    wreath = f2z2()
    a = Word.parse(wreath.alphabet, "y1")
    b = Word.parse(wreath.alphabet, "y2*y1")
    fact = decompose_commutator_pair(wreath, a, b, [1, -2])
    assert fact.count <= 8 and fact.verified
    with pytest.raises(GroupDefinitionError):
        decompose_commutator_pair(wreath, a, b, [1, -2], doubled_exponents=[2, -3])


def test_commutator_pair_trivial_words():
    wreath = f2z2()
    empty = Word(wreath.alphabet)
    fact = decompose_commutator_pair(wreath, empty, empty, [2, 1])
    assert wreath.is_identity(fact.target) and fact.verified


# ---------------------------------------------------------------------------
# relation search


def test_relation_bs12():
    witness = find_reversal_asymmetric_relation(presets.get("BS(1,2)"))
    assert str(witness.relation) == "a^-1*b*a*b^-2"
    assert witness.extra_generator is None
    group = witness.group
    assert not group.is_identity(witness.reverse_value)


def test_relation_abelian_refused():
    with pytest.raises(AbelianGroup):
        find_reversal_asymmetric_relation(presets.get("Z2xZ2"))
    with pytest.raises(AbelianGroup):
        find_reversal_asymmetric_relation(presets.get("BS(1,1)"))


def test_relation_bs_equal_exponents_refused():
    with pytest.raises(BudgetExhausted):
        find_reversal_asymmetric_relation(presets.get("BS(2,2)"))


def test_relation_s3_requires_extension():
    # frozen from the exhaustive search: S3 over {s, t} has no asymmetric
    # relation, the extension c = s*t yields the 3-letter witness s*t*c
    S3 = presets.symmetric_3()
    witness = find_reversal_asymmetric_relation(S3)
    assert witness.extra_generator is not None
    name, value = witness.extra_generator
    assert name == "c"
    assert value == S3.evaluate(Word.parse(S3.alphabet, "s*t"))
    assert str(witness.relation) == "s*t*c"
    group = witness.group
    assert group.is_identity(group.evaluate(witness.relation))
    assert not group.is_identity(group.evaluate(reverse(witness.relation)))


def test_relation_budget():
    with pytest.raises(BudgetExhausted):
        find_reversal_asymmetric_relation(presets.symmetric_3(), budget=1)


def test_relation_q8():
    # Q8 is non-abelian; either an immediate witness or one after extension
    witness = find_reversal_asymmetric_relation(presets.quaternion_8())
    group = witness.group
    assert group.is_identity(group.evaluate(witness.relation))
    assert not group.is_identity(group.evaluate(reverse(witness.relation)))


# ---------------------------------------------------------------------------
# derived wreath (single-palindrome construction)


def base_words(wreath, *texts):
    return tuple(Word.parse(wreath.base.alphabet, t) for t in texts)


def test_derived_wreath_empty():
    wreath, witness = s3_wreath()
    fact = decompose_derived_wreath(
        wreath, CommutatorData(()), wreath.top.identity(), witness
    )
    assert fact.factors == () and fact.verified


def test_derived_wreath_single_commutator():
    wreath, witness = s3_wreath()
    f, g = base_words(wreath, "y1", "y2")
    data = CommutatorData((CommutatorSite(wreath.top.identity(), ((f, g),)),))
    fact = decompose_derived_wreath(wreath, data, wreath.top.identity(), witness)
    assert fact.count == 1 and fact.verified
    carrier = fact.factors[0]
    assert is_palindrome(carrier) is not None
    value = wreath.evaluate(carrier)
    expected = wreath.base.evaluate(commutator_word(f, g))
    assert wreath.top.is_identity(value.top)
    assert wreath.base.equal(value.base[wreath.top.identity()], expected)


def test_derived_wreath_reverse_of_carrier_is_trivial():
    wreath, witness = s3_wreath()
    rng = random.Random(15)
    for _ in range(25):
        positions = rng.sample(range(wreath.top.size), rng.randint(1, 3))
        sites = tuple(
            CommutatorSite(
                p,
                tuple(
                    (random_word(rng, wreath.base.alphabet, 4),
                     random_word(rng, wreath.base.alphabet, 4))
                    for _ in range(rng.randint(1, 2))
                ),
            )
            for p in positions
        )
        fact = decompose_derived_wreath(
            wreath, CommutatorData(sites), rng.randrange(wreath.top.size), witness
        )
        assert fact.verified
        assert fact.count <= fact.bound_claimed


def test_derived_wreath_bound_is_width_plus_one():
    wreath, witness = s3_wreath()
    width = exact_palindromic_width(wreath.top).width
    f, g = base_words(wreath, "y1*y2", "y2^-1")
    data = CommutatorData((CommutatorSite(2, ((f, g),)),))
    for top_value in wreath.top.elements():
        fact = decompose_derived_wreath(wreath, data, top_value, witness)
        assert fact.count <= width + 1
        assert fact.bound_claimed == width + 1


def test_derived_wreath_rejects_bad_witness():
    wreath, _ = s3_wreath()
    bogus = RelationWitness(
        group=wreath.top,
        relation=Word.parse(wreath.top.alphabet, "s*s"),
        reverse_value=wreath.top.identity(),
    )
    with pytest.raises(InvalidWitness):
        decompose_derived_wreath(wreath, CommutatorData(()), 0, bogus)


def test_derived_wreath_reverse_check_guards_bad_relations(monkeypatch):
    # force a relation whose reverse is also a relation through validation:
    # the f- and g-blocks land on one position and stop cancelling, so the
    # reverse-evaluation guard fires
    wreath, witness = s3_wreath()
    monkeypatch.setattr(decompose_module, "_validate_witness", lambda top, w: None)
    broken = RelationWitness(
        group=witness.group,
        relation=Word.parse(witness.group.alphabet, "s*s"),
        reverse_value=witness.reverse_value,
    )
    f, g = base_words(wreath, "y1", "y2")
    data = CommutatorData((CommutatorSite(0, ((f, g),)),))
    with pytest.raises(ReverseNotTrivial):
        decompose_derived_wreath(wreath, data, 0, broken)


# ---------------------------------------------------------------------------
# shifted commutators


def sz_wreath():
    return WreathProduct(FreeAbelianGroup(1, names=["x"]), presets.symmetric_3())


def test_shifted_single_commutator():
    wreath = sz_wreath()
    f, g = base_words(wreath, "s", "t")
    data = CommutatorData((CommutatorSite((2,), ((f, g),)),))
    fact = decompose_shifted_commutators(wreath, data, (3,))
    assert fact.verified
    assert fact.count == 8  # one top power plus seven shifted factors
    assert fact.bound_claimed == 1 + 7


def test_shifted_empty_data():
    wreath = sz_wreath()
    fact = decompose_shifted_commutators(wreath, CommutatorData(()), (-2,))
    assert [str(w) for w in fact.factors] == ["x^-2"]
    assert fact.verified


def test_shifted_retries_on_collision():
    # position 1 collides with the first two shifts (y - a = a at q=1, y=2
    # and q - a = a at q=2, y=4), so at least two retries are needed
    wreath = sz_wreath()
    f, g = base_words(wreath, "s", "t")
    data = CommutatorData((CommutatorSite((1,), ((f, g),)),))
    fact = decompose_shifted_commutators(wreath, data, (0,))
    assert fact.verified
    assert fact.meta["retries"] >= 1
    with pytest.raises(NoValidShift):
        decompose_shifted_commutators(wreath, data, (0,), max_retries=0)


def test_shifted_needs_infinite_order_generator():
    finite_top = WreathProduct(presets.cyclic(3, "z"), presets.symmetric_3())
    with pytest.raises(NoInfiniteOrderGenerator):
        decompose_shifted_commutators(finite_top, CommutatorData(()), finite_top.top.identity())


def test_shifted_respects_supplied_params():
    wreath = sz_wreath()
    f, g = base_words(wreath, "s*t", "t^-1")
    data = CommutatorData((CommutatorSite((0,), ((f, g),)),))
    fact = decompose_shifted_commutators(
        wreath, data, (0,), shift=ShiftParams(generator_index=0, q=5, y=11)
    )
    assert fact.verified and fact.meta["shift"] == (0, 5, 11)


def test_shifted_abelian_product_top():
    top = AbelianProductGroup(1, presets.cyclic(2, "u"), free_names=["x"])
    wreath = WreathProduct(top, presets.symmetric_3())
    f, g = base_words(wreath, "s", "t*s")
    position = top.evaluate(Word.parse(top.alphabet, "x^-1*u"))
    data = CommutatorData((CommutatorSite(position, ((f, g),)),))
    fact = decompose_shifted_commutators(wreath, data, top.identity())
    assert fact.verified and fact.count <= 2 + 7


# ---------------------------------------------------------------------------
# finite tops


def z2s3_wreath():
    return WreathProduct(
        presets.symmetric_3(), AbelianizedFreeGroup(names=["y1", "y2"])
    )


def test_finite_top_abelianized_identity():
    wreath = z2s3_wreath()
    fact = decompose_finite_top_abelianized(wreath, wreath.identity())
    assert fact.factors == () and fact.verified


def test_finite_top_abelianized_single_lamp():
    wreath = z2s3_wreath()
    element = wreath.lamp(wreath.top.identity(), (1, 0))
    fact = decompose_finite_top_abelianized(wreath, element)
    assert fact.count == 1 and fact.verified
    assert str(fact.factors[0]) == "y1"


def test_finite_top_abelianized_random():
    wreath = z2s3_wreath()
    rng = random.Random(16)
    for _ in range(30):
        element = wreath.element(
            rng.randrange(6),
            [
                (p, (rng.randint(-3, 3), rng.randint(-3, 3)))
                for p in rng.sample(range(6), rng.randint(0, 6))
            ],
        )
        fact = decompose_finite_top_abelianized(wreath, element)
        assert fact.verified and fact.count <= fact.bound_claimed


def test_full_finite_top_trivial_cases():
    wreath = WreathProduct(presets.symmetric_3(), FreeGroup(names=["y1", "y2"]))
    empty = decompose_full_finite_top(wreath, Word(wreath.alphabet))
    assert empty.factors == () and empty.verified
    single = decompose_full_finite_top(wreath, Word.parse(wreath.alphabet, "y1"))
    assert single.count == 1 and single.verified
    assert single.meta["derived_factors"] == 0


def test_full_finite_top_random():
    wreath = WreathProduct(presets.symmetric_3(), FreeGroup(names=["y1", "y2"]))
    rng = random.Random(17)
    for _ in range(10):
        word = random_word(rng, wreath.alphabet, 30)
        fact = decompose_full_finite_top(wreath, word)
        assert fact.verified
        assert fact.count <= 2 * (2 * 6 + 1) + 1


def test_full_finite_top_abelian_top_rejected():
    wreath = WreathProduct(presets.klein_four(), FreeGroup(names=["y1", "y2"]))
    with pytest.raises(AbelianGroup):
        decompose_full_finite_top(wreath, Word(wreath.alphabet))


def test_full_finite_top_over_dihedral():
    wreath = WreathProduct(presets.dihedral_4(), FreeGroup(names=["y1", "y2"]))
    maxlen = presets.dihedral_4().geodesics().max_length
    rng = random.Random(20)
    for _ in range(10):
        word = random_word(rng, wreath.alphabet, 24)
        fact = decompose_full_finite_top(wreath, word)
        assert fact.verified
        assert fact.count <= maxlen * (2 * 8 + 1) + 1


def test_full_finite_top_rank_one_base():
    # d = 1: the residual is always trivial and cursor moves can dominate,
    # so the claimed bound may switch to the explicit construction formula
    wreath = WreathProduct(presets.symmetric_3(), FreeGroup(names=["y1"]))
    rng = random.Random(21)
    for _ in range(20):
        word = random_word(rng, wreath.alphabet, 24)
        fact = decompose_full_finite_top(wreath, word)
        assert fact.verified
        assert fact.meta["derived_factors"] == 0
        assert fact.count <= fact.bound_claimed


def test_full_finite_top_degenerate_bound_fallback():
    # every element a single letter (maxlen 1) and d = 1: moves dominate
    # deposits and the construction exceeds maxlen*(d*|top|+1)+1 = 8, so the
    # claimed bound honestly switches to the construction formula
    from palinwidth import FiniteGroup

    s3_all = FiniteGroup.from_permutations(
        [
            ("p12", [2, 1, 3]),
            ("p123", [2, 3, 1]),
            ("p132", [3, 1, 2]),
            ("p13", [3, 2, 1]),
            ("p23", [1, 3, 2]),
        ]
    )
    assert s3_all.geodesics().max_length == 1
    wreath = WreathProduct(s3_all, FreeGroup(names=["y1"]))
    y = wreath.base.evaluate(Word.parse(wreath.base.alphabet, "y1"))
    element = wreath.element(3, [(p, y) for p in range(6)])
    word = wreath.assemble(wreath.normal_form(element))
    fact = decompose_full_finite_top(wreath, word)
    assert fact.verified
    assert fact.count > 1 * (1 * 6 + 1) + 1
    assert fact.bound_formula == "maxlen*(|top|+1) + d*|top| + 1"


# ---------------------------------------------------------------------------
# quotient push-forward


def test_push_factorization():
    F = FreeGroup(2)
    rng = random.Random(18)
    targets = [presets.klein_four(), presets.symmetric_3()]
    images = {4: ["a", "b"], 6: ["s", "t"]}
    for target_group in targets:
        hom = quotient_map(F, target_group, images[target_group.size])
        for _ in range(25):
            factors = []
            for _ in range(rng.randint(0, 4)):
                u = random_word(rng, F.alphabet, 5)
                core = random_word(rng, F.alphabet, 1)
                factors.append(sandwich(u, core))
            target = F.identity()
            for word in factors:
                target = F.multiply(target, F.evaluate(word))
            fact = decompose_module.PalindromeFactorization(
                factors=tuple(factors),
                target=target,
                bound_claimed=None,
                bound_formula="ad hoc",
                certificate=verify_factorization(F, target, factors),
            )
            assert fact.verified
            pushed = push_factorization(hom, fact)
            assert pushed.verified and pushed.count == fact.count


# ---------------------------------------------------------------------------
# metabelian interface


def test_metabelian_default_refuses():
    wreath = f2z2()
    word = Word.parse(wreath.alphabet, "y1*t1")
    with pytest.raises(MetabelianUnavailable) as info:
        decompose_full_abelian_top(wreath, word)
    assert info.value.bound == 5 * (2 + 2)


def test_metabelian_finite_instance():
    wreath = WreathProduct(presets.cyclic(2, "z"), presets.cyclic(2, "y"))
    rng = random.Random(19)
    decomposer = FiniteInstanceMetabelianDecomposer()
    for _ in range(10):
        word = random_word(rng, wreath.alphabet, 8)
        fact = decompose_full_abelian_top(wreath, word, metabelian=decomposer)
        assert fact.verified


def test_full_abelian_top_pair_shape_route():
    # commutator arguments with zero exponent sums keep the abelianized
    # image trivial: the derived residual is consumed as the supplied
    # two-commutator shape with no metabelian decomposer involved
    wreath = f2z2()
    a = Word.parse(wreath.alphabet, "y1^-1*y2^-1*y1*y2")
    b = Word.parse(wreath.alphabet, "y2*y1*y2^-1*y1^-1")
    exponents = [1, -1]
    t_word = Word.parse(wreath.alphabet, "t1*t2^-1")
    t2_word = Word.parse(wreath.alphabet, "t1^2*t2^-2")
    word = commutator_word(a, t_word) * commutator_word(b, t2_word)
    fact = decompose_full_abelian_top(wreath, word, pair_shape=(a, b, exponents))
    assert fact.verified and fact.count <= 8
    assert fact.meta["metabelian_factors"] == 0
    with pytest.raises(PairShapeMismatch):
        decompose_full_abelian_top(wreath, word, pair_shape=(b, a, exponents))
    with pytest.raises(PairShapeMismatch):
        decompose_full_abelian_top(wreath, word)
