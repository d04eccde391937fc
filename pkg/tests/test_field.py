import random

import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from itoss.errors import ModulusMismatch, NotPrime, ZeroInverse
from itoss.field import (
    FieldElement,
    PrimeModulus,
    decode_element,
    encode_element,
    inverse,
    make_rng,
    sample_nonzero,
    sample_uniform,
)

P7 = PrimeModulus(7)
P7919 = PrimeModulus(7919)


def scan_inverse(a, p):
    return next(x for x in range(1, p) if a * x % p == 1)


def test_inverse_of_one():
    assert inverse(P7(1)) == 1


def test_inverse_matches_exhaustive_scan():
    assert inverse(P7(3)).value == scan_inverse(3, 7) == 5
    for a in range(1, 7):
        assert inverse(P7(a)).value == scan_inverse(a, 7)


def test_inverse_of_zero():
    with pytest.raises(ZeroInverse):
        inverse(P7(0))
    with pytest.raises(ZeroDivisionError):
        P7(3) / P7(0)


@given(st.integers(min_value=1, max_value=7918))
def test_inverse_property(a):
    x = P7919(a)
    assert x * inverse(x) == 1
    assert inverse(x).value == pow(a, -1, 7919)


@given(st.integers(), st.integers())
def test_ring_laws_against_int_arithmetic(a, b):
    x, y = P7919(a), P7919(b)
    assert (x + y).value == (a + b) % 7919
    assert (x - y).value == (a - b) % 7919
    assert (x * y).value == (a * b) % 7919
    assert (-x).value == (-a) % 7919
    assert x + y == y + x


def test_non_prime_modulus():
    for bad in (1, 4, 561, 7917):
        with pytest.raises(NotPrime):
            PrimeModulus(bad)


def test_mixing_moduli():
    with pytest.raises(ModulusMismatch):
        P7(1) + P7919(1)


def test_elements_are_immutable():
    x = P7(3)
    with pytest.raises(AttributeError):
        x.value = 4


def test_negative_power_uses_inverse():
    assert P7(3) ** -1 == 5
    assert P7(3) ** 6 == 1


def test_codec_round_trip():
    x = P7919(0x1EF)
    rec = encode_element(x)
    assert rec == {"p": "1eef", "v": "1ef"}
    assert decode_element(rec) == x
    with pytest.raises(ModulusMismatch):
        decode_element(rec, P7)


def test_first_two_draws_differ():
    for seed in range(20):
        rng = make_rng(seed)
        assert sample_uniform(rng, P7919) != sample_uniform(rng, P7919)


def test_same_seed_same_sequence():
    a, b = make_rng(42), make_rng(42)
    assert [sample_uniform(a, P7919) for _ in range(50)] == [sample_uniform(b, P7919) for _ in range(50)]


def test_nonzero_sampler_skips_zero():
    rng = random.Random(1)
    assert all(sample_nonzero(rng, P7) != 0 for _ in range(500))


def test_uniform_chi_square():
    p = PrimeModulus(257)
    rng = make_rng(2024)
    counts = [0] * 257
    for _ in range(100_000):
        counts[sample_uniform(rng, p).value] += 1
    assert chisquare(counts).pvalue > 0.01


def test_int_interop():
    x = P7(5)
    assert 2 + x == 0
    assert 10 - x == 5
    assert int(x) == 5
    assert isinstance(x * 3, FieldElement)
