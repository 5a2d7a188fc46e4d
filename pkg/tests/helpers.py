"""Shared generators for randomized property tests."""
import random

from palinwidth import Word, invert, reduce_free, sandwich


def random_word(rng: random.Random, alphabet, max_len: int, min_len: int = 0) -> Word:
    length = rng.randint(min_len, max_len)
    return Word(
        alphabet,
        [(rng.randrange(len(alphabet)), rng.choice((1, -1))) for _ in range(length)],
    )


def random_zero_sum_word(rng: random.Random, alphabet, max_len: int) -> Word:
    """Random word with zero exponent sum for every generator."""
    half = random_word(rng, alphabet, max_len // 2)
    tail = list(invert(half).letters)
    rng.shuffle(tail)
    return reduce_free(half * Word(alphabet, tail))


def random_palindrome(rng: random.Random, alphabet, max_half: int) -> Word:
    u = random_word(rng, alphabet, max_half)
    if rng.random() < 0.5:
        core = Word(alphabet)
    else:
        core = Word(alphabet, [(rng.randrange(len(alphabet)), rng.choice((1, -1)))])
    return sandwich(u, core)
