from fractions import Fraction

import pytest

from lcslab.freealg import (
    ComponentTooLarge,
    Element,
    bracket,
    component,
    degrees_upto,
    enumerate_words,
    generators,
    multinomial,
    nested,
)


def test_words_of_degree_one_one():
    assert enumerate_words(2, (1, 1)) == [(0, 1), (1, 0)]


def test_word_count_is_multinomial():
    assert len(enumerate_words(2, (2, 1))) == 3
    assert len(enumerate_words(3, (2, 1, 1))) == multinomial((2, 1, 1)) == 12


def test_word_limit():
    with pytest.raises(ComponentTooLarge):
        enumerate_words(2, (6, 6), limit=100)


def test_bad_multidegree():
    with pytest.raises(ValueError):
        enumerate_words(2, (1, 1, 1))


def test_component_index_roundtrip():
    comp = component(3, (2, 1, 1))
    for i, w in enumerate(comp.words):
        assert comp.index(w) == i


def test_bracket_and_jacobi():
    x, y, z = generators(3)
    assert bracket(x, y) == x * y - y * x
    jac = nested(x, y, z) + nested(y, z, x) + nested(z, x, y)
    assert jac.is_zero()


def test_inhomogeneous_sum_rejected():
    x, y = generators(2)
    with pytest.raises(ValueError):
        x + x * y


def test_vector_roundtrip():
    x, y = generators(2)
    e = 3 * (x * y) - Fraction(1, 2) * (y * x)
    comp = component(2, (1, 1))
    assert Element.from_vector(e.to_vector(comp), comp) == e


def test_degrees_upto_counts():
    assert len(degrees_upto(2, 3)) == 10
