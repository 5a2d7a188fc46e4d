import math
import random

import pytest

from palinwidth import (
    FiniteGroup,
    FreeGroup,
    Word,
    commutator_closure,
    commutator_word,
    express_in_derived,
    invert,
    reduce_free,
)
from palinwidth import presets
from palinwidth.errors import NotInDerivedSubgroup
from helpers import random_zero_sum_word

F = FreeGroup(2)


def fw(text: str) -> Word:
    return Word.parse(F.alphabet, text)


def test_commutator_word():
    assert commutator_word(fw("x1"), fw("x2")) == fw("x1^-1*x2^-1*x1*x2")
    assert reduce_free(commutator_word(fw("x1*x2"), fw("1"))) == fw("1")
    assert reduce_free(commutator_word(fw("x1*x2"), fw("x1*x2"))) == fw("1")


def _check_expression(word: Word):
    pairs = express_in_derived(word)
    product = Word(word.alphabet)
    for u, v in pairs:
        product = product * commutator_word(u, v)
    assert reduce_free(product * invert(word)) == Word(word.alphabet)
    assert len(pairs) <= math.ceil(len(reduce_free(word)) / 2)
    return pairs


def test_express_single_commutator():
    pairs = _check_expression(fw("x1^-1*x2^-1*x1*x2"))
    assert pairs == [(fw("x1"), fw("x2"))]


def test_express_empty():
    assert express_in_derived(fw("1")) == []


def test_express_mixed_word():
    _check_expression(fw("x1*x2*x1^-1*x2*x1*x2^-2*x1^-1"))


def test_express_rejects_nonzero_sums():
    with pytest.raises(NotInDerivedSubgroup):
        express_in_derived(fw("x1*x2"))


def test_express_random_words():
    rng = random.Random(11)
    for _ in range(100):
        word = random_zero_sum_word(rng, F.alphabet, 36)
        _check_expression(word)


def test_alternating_5_is_perfect():
    a5 = FiniteGroup.from_permutations(
        [("u", [2, 3, 4, 5, 1]), ("v", [2, 3, 1, 4, 5])]
    )
    assert a5.size == 60
    assert commutator_closure(a5) == frozenset(a5.elements())


def test_s3_commutator_closure_is_a3():
    S3 = presets.symmetric_3()
    assert len(commutator_closure(S3)) == 3
