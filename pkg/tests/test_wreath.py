import random

import pytest

from palinwidth import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Word,
    WreathProduct,
    presets,
    reverse,
)
from palinwidth.errors import AlphabetMismatch, GroupDefinitionError
from helpers import random_word


def lamplighter_wreath():
    return WreathProduct(presets.cyclic(3, "z"), presets.cyclic(2, "y"))


def s3_free_wreath():
    return WreathProduct(presets.symmetric_3(), FreeGroup(names=["y1", "y2"]))


def test_name_disjointness_enforced():
    with pytest.raises(GroupDefinitionError):
        WreathProduct(FreeAbelianGroup(1, names=["a"]), FreeGroup(names=["a", "b"]))


def test_conjugation_places_lamp_at_position():
    # the convention test: a^-1 f a puts the lamp at the value of a
    from palinwidth import invert

    for wreath, top_word in [(lamplighter_wreath(), "z"), (s3_free_wreath(), "s*t")]:
        conj = wreath.lift_top(Word.parse(wreath.top.alphabet, top_word))
        a = wreath.top.evaluate(Word.parse(wreath.top.alphabet, top_word))
        base_letter = Word.letter(wreath.alphabet, len(wreath.top.alphabet))
        word = invert(conj) * base_letter * conj
        value = wreath.evaluate(word)
        assert wreath.top.is_identity(value.top)
        assert set(value.base) == {a}
        assert wreath.base.equal(value.base[a], wreath.base.letter_value(0, 1))


def test_top_only_word_has_empty_base():
    wreath = lamplighter_wreath()
    value = wreath.evaluate(Word.parse(wreath.alphabet, "z^2"))
    assert value.base == {}
    assert value.top == wreath.top.evaluate(Word.parse(wreath.top.alphabet, "z^2"))


def test_commutator_of_base_and_top_letter():
    # [f, a] = f^-1 a^-1 f a has support of size two with values f^-1 and f
    wreath = lamplighter_wreath()
    word = Word.parse(wreath.alphabet, "y^-1*z^-1*y*z")
    value = wreath.evaluate(word)
    a = wreath.top.evaluate(Word.parse(wreath.top.alphabet, "z"))
    f = wreath.base.letter_value(0, 1)
    assert wreath.top.is_identity(value.top)
    assert set(value.base) == {wreath.top.identity(), a}
    assert value.base[wreath.top.identity()] == wreath.base.inverse(f)
    assert value.base[a] == f


def test_multiply_identity_and_cancellation():
    wreath = s3_free_wreath()
    rng = random.Random(7)
    g = wreath.evaluate(random_word(rng, wreath.alphabet, 12))
    assert wreath.equal(wreath.multiply(g, wreath.identity()), g)
    assert wreath.is_identity(wreath.multiply(g, wreath.inverse(g)))
    f = wreath.base.evaluate(Word.parse(wreath.base.alphabet, "y1*y2"))
    lamp = wreath.lamp(2, f)
    anti = wreath.lamp(2, wreath.base.inverse(f))
    assert wreath.is_identity(wreath.multiply(lamp, anti))


def test_disjoint_supports_union():
    wreath = s3_free_wreath()
    f = wreath.base.evaluate(Word.parse(wreath.base.alphabet, "y1"))
    g = wreath.base.evaluate(Word.parse(wreath.base.alphabet, "y2^2"))
    product = wreath.multiply(wreath.lamp(1, f), wreath.lamp(3, g))
    assert set(product.base) == {1, 3}


def test_evaluate_multiplicative():
    rng = random.Random(8)
    for wreath in (lamplighter_wreath(), s3_free_wreath()):
        for _ in range(500):
            u = random_word(rng, wreath.alphabet, 14)
            v = random_word(rng, wreath.alphabet, 14)
            assert wreath.equal(
                wreath.evaluate(u * v),
                wreath.multiply(wreath.evaluate(u), wreath.evaluate(v)),
            )


def test_product_support_containment():
    wreath = lamplighter_wreath()
    rng = random.Random(9)
    for _ in range(100):
        g = wreath.evaluate(random_word(rng, wreath.alphabet, 10))
        h = wreath.evaluate(random_word(rng, wreath.alphabet, 10))
        product = wreath.multiply(g, h)
        shift = wreath.top.inverse(g.top)
        translated = {wreath.top.multiply(p, shift) for p in h.base}
        assert set(product.base) <= set(g.base) | translated


def test_normal_form_round_trip():
    rng = random.Random(10)
    for wreath in (lamplighter_wreath(), s3_free_wreath()):
        assert wreath.assemble(wreath.normal_form(wreath.identity())) == Word(wreath.alphabet)
        for _ in range(50):
            g = wreath.evaluate(random_word(rng, wreath.alphabet, 20))
            nf = wreath.normal_form(g)
            positions = [wreath.top.canonical_key(p) for p, _ in nf.entries]
            assert positions == sorted(positions)
            assert wreath.equal(wreath.evaluate(wreath.assemble(nf)), g)


def test_normal_form_single_lamp_at_identity():
    wreath = s3_free_wreath()
    f = wreath.base.evaluate(Word.parse(wreath.base.alphabet, "y1"))
    nf = wreath.normal_form(wreath.lamp(wreath.top.identity(), f))
    assert nf.top == wreath.top.identity()
    assert nf.entries == ((wreath.top.identity(), f),)


def test_abelian_pair_reverse_same_value_does_not_hold_in_wreath():
    # the wreath of two abelian groups is not abelian: reversal moves lamps
    wreath = lamplighter_wreath()
    word = Word.parse(wreath.alphabet, "z^-1*y*z")
    assert not wreath.equal(wreath.evaluate(word), wreath.evaluate(reverse(word)))


def test_as_finite_group():
    finite = lamplighter_wreath().as_finite_group()
    assert isinstance(finite, FiniteGroup)
    assert finite.size == 2 ** 3 * 3
    assert finite.alphabet.names == ("z", "y")
    small = WreathProduct(presets.cyclic(2, "z"), presets.cyclic(2, "y")).as_finite_group()
    assert small.size == 8
    with pytest.raises(GroupDefinitionError):
        s3_free_wreath().as_finite_group()


def test_alphabet_check_on_evaluate():
    wreath = s3_free_wreath()
    with pytest.raises(AlphabetMismatch):
        wreath.evaluate(Word.parse(FreeGroup(2).alphabet, "x1"))


def test_wreath_evaluation_matches_finite_materialisation():
    # dual route: symbolic wreath arithmetic against the enumerated table
    wreath = lamplighter_wreath()
    finite = wreath.as_finite_group()
    rng = random.Random(20)
    for _ in range(200):
        word = random_word(rng, wreath.alphabet, 16)
        symbolic = wreath.evaluate(word)
        frozen = (symbolic.top, tuple(sorted(symbolic.base.items())))
        assert finite.payloads[finite.evaluate(word)] == frozen
