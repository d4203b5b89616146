# -*- coding: utf-8 -*-
import random

import pytest
from hypothesis import given, settings, strategies as st

from conzero.builder import build_recipe, family_constant, family_weights, random_recipe
from conzero.decomposer import (
    canonicalize, decompose, lift_zero_sum_by_prime, prime_coprime_counts,
    recipe_from_certificate, validate_shape
)
from conzero.engine import Seq, enumerate_extremal, is_extremal, window_reach
from conzero.errors import (
    CharacterizationViolated, DomainError, ModulusError, NotExtremalError,
    WeightError
)
from conzero.ring import WeightSet, units, units_pow

Z25_SQUARES = Seq(25, [20, 10, 21, 5, 15, 12, 15, 20])
Z95_CUBES = Seq(95, [38, 37, 38, 78, 76])


def test_decompose_units():
    cert = decompose(Seq(25, [10, 4, 20]), 'units')
    assert cert.p == 5
    assert cert.middle_positions == (2,)
    assert [child for child, __ in cert.children] == [Seq(5, [2]), Seq(5, [4])]
    assert [c.leaf for __, c in cert.children] == ['unit-singleton', 'unit-singleton']
    assert cert.connector_check == {'kind': 'nondivisible', 'prime': 5, 'values': [4], 'images': [4]}
    assert cert.skeleton() == (5, (2,), ((5, (), ()), (5, (), ())))


def test_decompose_squares_over_small_primes():
    cert = decompose(Z25_SQUARES, 'units^2', strict=False)
    assert cert.p == 5
    assert cert.middle_positions == (3, 6)
    assert [child.terms for child, __ in cert.children] == [(4, 2), (1, 3), (3, 4)]
    assert cert.connector_check['images'] == [1, 2]
    assert cert.connector_check['ratio'] == 2
    assert all(c.leaf == 'coset-pair' for __, c in cert.children)
    assert cert.validate(Z25_SQUARES)


def test_decompose_squares_strict_rejects_small_primes():
    with pytest.raises(DomainError):
        decompose(Z25_SQUARES, 'units^2')


def test_decompose_cubes():
    cert = decompose(Z95_CUBES, 'units^3')
    assert cert.p == 19
    assert cert.middle_positions == (2, 4)
    assert cert.connector_check['images'] == [18, 2]
    assert cert.connector_check['values'] == [37, 78]
    assert [child for child, __ in cert.children] == [Seq(5, [2]), Seq(5, [2]), Seq(5, [4])]
    assert cert.alternates == ()

    cert = decompose(Seq(95, [15, 30, 69, 25, 35]), 'units^3')
    assert cert.p == 5
    assert cert.middle_positions == (3,)
    assert [c.leaf for __, c in cert.children] == ['coset-pair', 'coset-pair']


def test_decompose_one_weight():
    cert = decompose(Seq(4, [1, 1, 1]), 'one')
    assert cert.leaf == 'prefix-sums-distinct'
    assert cert.p is None
    assert cert.validate(Seq(4, [1, 1, 1]))
    with pytest.raises(NotExtremalError):
        decompose(Seq(4, [1, 3, 1]), 'one')


def test_decompose_errors():
    with pytest.raises(DomainError):
        decompose(Seq(12, [1, 1, 1]), 'units')
    with pytest.raises(NotExtremalError):
        decompose(Seq(25, [10, 5, 20]), 'units')
    with pytest.raises(NotExtremalError):
        decompose(Seq(25, [10, 5, 20]), 'units', strict=False)
    with pytest.raises(WeightError):
        decompose(Seq(25, [10, 4, 20]), 'squares')
    with pytest.raises(ModulusError):
        decompose(Seq(25, [10, 4, 20]), 'units', ctx=75)


def test_decompose_without_structure():
    # zero-window-free but too short to split into extremal blocks
    with pytest.raises(CharacterizationViolated):
        decompose(Seq(15, [1]), 'units', strict=False)


def test_certificate_validate():
    seq = Seq(25, [10, 4, 20])
    cert = decompose(seq, 'units')
    assert cert.validate(seq)
    with pytest.raises(CharacterizationViolated):
        cert.validate(Seq(25, [10, 9, 20]))
    with pytest.raises(CharacterizationViolated):
        cert.validate(Seq(25, [15, 4, 20]))
    with pytest.raises(CharacterizationViolated):
        cert.validate(Seq(75, [10, 4, 20]))

    cert = decompose(Z95_CUBES, 'units^3')
    assert cert.validate(Z95_CUBES)
    cert.connector_check['ratio'] = 1
    with pytest.raises(CharacterizationViolated):
        cert.validate(Z95_CUBES)


def test_certificate_to_dict():
    cert = decompose(Seq(25, [10, 4, 20]), 'units')
    leaf = {
        'n': 5, 'family': 'units', 'p': 5, 'middle_positions': [],
        'connector_check': {}, 'leaf': 'unit-singleton', 'alternates': [],
        'children': [],
    }
    assert cert.to_dict() == {
        'n': 25,
        'family': 'units',
        'p': 5,
        'middle_positions': [2],
        'connector_check': {'kind': 'nondivisible', 'prime': 5, 'values': [4], 'images': [4]},
        'leaf': None,
        'alternates': [],
        'children': [
            {'sequence': [2], 'certificate': leaf},
            {'sequence': [4], 'certificate': leaf},
        ],
    }
    assert cert.to_json().startswith('{"alternates":[],"children":[')


@pytest.mark.parametrize('seq,family,strict', [
    (Seq(25, [10, 4, 20]), 'units', True),
    (Seq(75, [30, 12, 60, 38, 30, 63, 60]), 'units', True),
    (Z95_CUBES, 'units^3', True),
    (Seq(95, [15, 30, 69, 25, 35]), 'units^3', True),
    (Z25_SQUARES, 'units^2', False),
])
def test_recipe_from_certificate_rebuilds(seq, family, strict):
    cert = decompose(seq, family, strict=strict)
    recipe = recipe_from_certificate(cert, seq)
    if strict:
        assert build_recipe(recipe) == seq
    else:
        assert recipe.p == 5 and recipe.connectors == (21, 12)


def test_prime_coprime_counts():
    assert prime_coprime_counts(Z95_CUBES) == {5: 5, 19: 2}
    assert prime_coprime_counts(Seq(25, [10, 4, 20])) == {5: 1}


def test_validate_shape():
    assert validate_shape(Seq(7, [3]), 'units') == {
        'form': 'units-1', 'primes': [7], 'coefficients': {'a': [3]}}
    assert validate_shape(Seq(15, [3, 1, 3]), 'units') == {
        'form': 'units-2', 'primes': [3, 5], 'coefficients': {'a': [1], 'b': [1, 1]}}
    assert validate_shape(Seq(9, [3, 1, 3]), 'units') == {
        'form': 'units-2', 'primes': [3, 3], 'coefficients': {'a': [1], 'b': [1, 1]}}
    shape = validate_shape(Seq(75, [30, 12, 60, 38, 30, 63, 60]), 'units')
    assert shape['form'] in ('units-3-same', 'units-3-mixed')


def test_validate_shape_errors():
    with pytest.raises(DomainError):
        validate_shape(Seq(1155, [1]), 'units')
    with pytest.raises(DomainError):
        validate_shape(Seq(7, [1, 2]), 'one')
    with pytest.raises(NotExtremalError):
        validate_shape(Seq(15, [3, 3, 3]), 'units')


@pytest.mark.parametrize('n', [15, 21, 25, 35])
def test_every_units_extremal_decomposes(n):
    weights = family_weights('units', n)
    found = enumerate_extremal(n, weights, family_constant('units', n)).sequences
    assert found
    for seq in found:
        assert decompose(seq, 'units').validate(seq)
        validate_shape(seq, 'units')


@pytest.mark.parametrize('n', [55, 95])
def test_every_cubes_extremal_decomposes(n):
    weights = family_weights('units^3', n)
    result = enumerate_extremal(n, weights, family_constant('units^3', n), up_to_equivalence=True)
    for seq in result.sequences:
        assert decompose(seq, 'units^3').validate(seq)


@pytest.mark.slow
def test_every_squares_extremal_decomposes():
    weights = family_weights('units^2', 49)
    result = enumerate_extremal(49, weights, 9, up_to_equivalence=True)
    assert result.complete
    for seq in result.sequences:
        cert = decompose(seq, 'units^2')
        assert cert.p == 7 and cert.middle_positions == (3, 6)


def test_canonicalize_examples():
    canon = canonicalize(Seq(7, [2, 6, 2]), units_pow(7, 3))
    assert canon.canonical == Seq(7, [1, 3, 1])
    assert canon.orbit_size == 24
    one = WeightSet.one(4)
    assert canonicalize(Seq(4, [2, 1, 2]), one).canonical == Seq(4, [2, 1, 2])
    assert canonicalize(Seq(4, [1, 2, 2]), one).canonical == Seq(4, [1, 2, 2])
    assert canonicalize(Seq(4, ()), one) == (Seq(4, ()), 1)
    # permuting terms is not an equivalence
    group = units_pow(4, 1)
    assert canonicalize(Seq(4, [2, 1, 2]), group).canonical == Seq(4, [2, 1, 2])
    assert canonicalize(Seq(4, [1, 2, 2]), group).canonical == Seq(4, [1, 2, 2])


def test_canonicalize_rejects_mixed_moduli():
    with pytest.raises(ModulusError):
        canonicalize(Seq(7, [1]), units_pow(5, 1))
    with pytest.raises(ModulusError):
        canonicalize(Seq(5, ()), WeightSet.one(4))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_canonicalize_is_a_class_invariant(data):
    n = data.draw(st.integers(min_value=2, max_value=40), label='n')
    j = data.draw(st.integers(min_value=1, max_value=3), label='j')
    weights = units_pow(n, j)
    terms = data.draw(st.lists(st.integers(min_value=0, max_value=n - 1), max_size=4), label='terms')
    c = data.draw(st.sampled_from(units(n)), label='c')
    scales = [data.draw(st.sampled_from(weights.elements)) for __ in terms]

    seq = Seq(n, terms)
    moved = Seq(n, [(c * a * x) % n for a, x in zip(scales, terms)])
    canon = canonicalize(seq, weights)
    assert canon == canonicalize(moved, weights)
    assert not seq < canon.canonical
    assert (len(units(n)) * len(weights) ** len(terms)) % canon.orbit_size == 0


@settings(max_examples=500, deadline=None)
@given(st.data())
def test_equivalence_preserves_extremality(data):
    family, n = data.draw(st.sampled_from([
        ('units', 15), ('units', 25), ('units', 75),
        ('units^2', 49), ('units^3', 55), ('units^3', 95),
    ]), label='case')
    seed = data.draw(st.integers(min_value=0, max_value=2 ** 32), label='seed')
    weights = family_weights(family, n)
    seq = build_recipe(random_recipe(family, n, random.Random(seed)))
    c = data.draw(st.sampled_from(units(n)), label='c')
    scales = [data.draw(st.sampled_from(weights.elements)) for __ in seq]
    moved = Seq(n, [(a * x) % n for a, x in zip(scales, seq)]).scaled(c)
    assert is_extremal(moved, weights, family_constant(family, n))


@settings(max_examples=500, deadline=None)
@given(st.data())
def test_equivalence_preserves_zero_sums(data):
    n = data.draw(st.integers(min_value=2, max_value=60), label='n')
    j = data.draw(st.integers(min_value=1, max_value=3), label='j')
    weights = units_pow(n, j)
    terms = data.draw(st.lists(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=5),
                      label='terms')
    c = data.draw(st.sampled_from(units(n)), label='c')
    scales = [data.draw(st.sampled_from(weights.elements)) for __ in terms]
    seq = Seq(n, terms)
    moved = Seq(n, [(a * x) % n for a, x in zip(scales, terms)]).scaled(c)
    assert (0 in window_reach(seq, weights)) == (0 in window_reach(moved, weights))


def test_canonicalize_preserves_extremality():
    weights = units_pow(75, 1)
    seq = Seq(75, [30, 12, 60, 38, 30, 63, 60])
    assert is_extremal(canonicalize(seq, weights).canonical, weights, 8)


def test_lift_zero_sum_by_prime():
    assert lift_zero_sum_by_prime(Seq(25, [5, 10]), 5, 1) == (True, True)
    assert lift_zero_sum_by_prime(Seq(5, [0]), 5, 2) == (True, True)
    reduced, original = lift_zero_sum_by_prime(Seq(49, [7, 14]), 7, 2)
    assert original or not reduced
    with pytest.raises(DomainError):
        lift_zero_sum_by_prime(Seq(25, [5, 3]), 5, 1)
    with pytest.raises(ModulusError):
        lift_zero_sum_by_prime(Seq(25, [5]), 3, 1)
