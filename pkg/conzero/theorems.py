# -*- coding: utf-8 -*-
"""
Batch checks of the statements the library relies on.

Each check is registered under a key naming what it checks, together with
the smallest n it needs; verify_theorems() runs every check whose smallest
n fits the scope. A check returns a list of failure messages, an empty list
meaning it passed. Running out of search budget marks a check skipped.
"""
import itertools
import logging
import math
import random
import time
from collections import namedtuple

import sympy

from .builder import (
    build_recipe, family_constant, family_weights, greedy_recipe, random_recipe
)
from .decomposer import (
    canonicalize, decompose, lift_zero_sum_by_prime, prime_coprime_counts,
    recipe_from_certificate, validate_shape
)
from .engine import (
    Seq, compute_constant, crt_zero_sum_check, enumerate_extremal,
    has_zero_window, is_extremal, known_constant, prefix_sum_free,
    triple_unit_cover, window_reach
)
from .errors import BudgetExhausted, ConzeroError
from .ring import (
    WeightSet, coset_test_pair, is_unit, lift_unit, natural_map, units, units_pow
)

logger = logging.getLogger(__name__)

Budget = namedtuple('Budget', ['max_nodes', 'max_seconds'])

CHECKS = {}

SEED = 20


def register_check(key, min_n):
    """Registers func(max_n, budget) -> [failure, ...] under key"""
    def decorator(func):
        CHECKS[key] = (min_n, func)
        return func
    return decorator


def _upto(values, max_n):
    return [n for n in values if n <= max_n]


def _exact_constant(n, weights, budget):
    report = compute_constant(n, weights, max_nodes=budget.max_nodes,
                              max_seconds=budget.max_seconds)
    if not report.exact:
        raise BudgetExhausted('search for C_A(%d) with A = %s ran out of budget'
                              % (n, weights.describe()), n,
                              lower_bound=report.lower_bound)
    return report.constant


def _extremals(n, weights, constant, budget, up_to_equivalence=False):
    result = enumerate_extremal(n, weights, constant,
                                up_to_equivalence=up_to_equivalence,
                                max_nodes=budget.max_nodes,
                                max_seconds=budget.max_seconds)
    if not result.complete:
        raise BudgetExhausted('enumeration mod %d ran out of budget' % n, n,
                              partial=result.sequences)
    return result.sequences


def _random_seq(rng, n, length):
    return Seq(n, [rng.randrange(n) for __ in range(length)])


def _constant_failures(cases, budget):
    failures = []
    for n, weights, expected in cases:
        found = _exact_constant(n, weights, budget)
        if found != expected:
            failures.append('C_A(%d) with A = %s is %d, expected %d'
                            % (n, weights.describe(), found, expected))
        closed, __ = known_constant(n, weights)
        if closed is not None and closed != found:
            failures.append('closed form for n=%d, A = %s gives %d, search gives %d'
                            % (n, weights.describe(), closed, found))
    return failures


@register_check('prefix-sum-constant', min_n=2)
def _prefix_sum_constant(max_n, budget):
    cases = [(n, WeightSet.one(n), n) for n in range(2, min(max_n, 12) + 1)]
    return _constant_failures(cases, budget)


@register_check('prefix-sum-count', min_n=3)
def _prefix_sum_count(max_n, budget):
    failures = []
    for n in range(3, min(max_n, 6) + 1):
        result = enumerate_extremal(n, WeightSet.one(n), n, count_only=True,
                                    max_nodes=budget.max_nodes,
                                    max_seconds=budget.max_seconds)
        if not result.complete:
            raise BudgetExhausted('counting mod %d ran out of budget' % n, n)
        if result.count != math.factorial(n - 1):
            failures.append('%d extremal sequences mod %d, expected %d'
                            % (result.count, n, math.factorial(n - 1)))
    return failures


@register_check('prefix-sum-characterization', min_n=2)
def _prefix_sum_characterization(max_n, budget):
    failures = []
    for n in range(2, min(max_n, 6) + 1):
        one = WeightSet.one(n)
        for length in range(1, n):
            for terms in itertools.product(range(n), repeat=length):
                seq = Seq(n, terms)
                if prefix_sum_free(seq) != (has_zero_window(seq, one) is None):
                    failures.append('prefix sums and windows disagree on %s mod %d'
                                    % (seq, n))
    return failures


@register_check('nonzero-constant', min_n=2)
def _nonzero_constant(max_n, budget):
    cases = [(n, WeightSet.all_nonzero(n), 2) for n in range(2, min(max_n, 50) + 1)]
    failures = _constant_failures(cases, budget)
    for n, weights, __ in cases:
        for x in range(n):
            free = has_zero_window(Seq(n, [x]), weights) is None
            if free != is_unit(x, n):
                failures.append('(%d) mod %d: extremal=%s, unit=%s'
                                % (x, n, free, is_unit(x, n)))
    return failures


@register_check('quadratic-residue-constant', min_n=2)
def _quadratic_residue_constant(max_n, budget):
    cases = [(p, units_pow(p, 2), 2 if p == 2 else 3)
             for p in sympy.primerange(2, min(max_n, 31) + 1)]
    return _constant_failures(cases, budget)


@register_check('units-constant', min_n=9)
def _units_constant(max_n, budget):
    cases = [(n, units_pow(n, 1), 2 ** sum(sympy.factorint(n).values()))
             for n in _upto((9, 15, 21, 25, 33, 35, 49), max_n)]
    return _constant_failures(cases, budget)


@register_check('squares-constant', min_n=7)
def _squares_constant(max_n, budget):
    cases = [(n, units_pow(n, 2), 3 ** sum(sympy.factorint(n).values()))
             for n in _upto((7, 11, 13, 49, 77), max_n)]
    return _constant_failures(cases, budget)


@register_check('cubes-constant', min_n=5)
def _cubes_constant(max_n, budget):
    expected = {5: 2, 19: 3, 55: 4, 95: 6}
    cases = [(n, units_pow(n, 3), expected[n]) for n in _upto(sorted(expected), max_n)]
    return _constant_failures(cases, budget)


@register_check('cubes-mod-seven-constant', min_n=7)
def _cubes_mod_seven_constant(max_n, budget):
    return _constant_failures([(7, units_pow(7, 3), 4)], budget)


@register_check('cubes-mod-seven-equivalence', min_n=7)
def _cubes_mod_seven_equivalence(max_n, budget):
    weights = units_pow(7, 3)
    target = Seq(7, [1, 3, 1])
    failures = []
    for seq in _extremals(7, weights, 4, budget):
        canonical = canonicalize(seq, weights).canonical
        if canonical != target:
            failures.append('%s canonicalizes to %s' % (seq, canonical))
    return failures


@register_check('coset-test', min_n=2)
def _coset_test(max_n, budget):
    failures = []
    for p in sympy.primerange(2, min(max_n, 31) + 1):
        for j in (2, 3):
            weights = units_pow(p, j)
            for x, y in itertools.product(range(p), repeat=2):
                expected = has_zero_window(Seq(p, [x, y]), weights) is None
                if coset_test_pair(x, y, weights) != expected:
                    failures.append('coset test on (%d, %d) mod %d, j=%d' % (x, y, p, j))
    return failures


@register_check('crt-locality', min_n=15)
def _crt_locality(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for n in _upto((15, 21, 35, 45, 95, 105), max_n):
        for j in (1, 2, 3):
            weights = units_pow(n, j)
            for __ in range(1000):
                seq = _random_seq(rng, n, rng.randint(1, 5))
                if crt_zero_sum_check(seq, j) != (0 in window_reach(seq, weights)):
                    failures.append('CRT check disagrees on %s mod %d, j=%d' % (seq, n, j))
    return failures


def _random_with_units(rng, n, count, length):
    """A random sequence with at least `count` unit terms"""
    terms = [rng.choice(units(n)) for __ in range(count)]
    terms.extend(rng.randrange(n) for __ in range(length - count))
    rng.shuffle(terms)
    return Seq(n, terms)


@register_check('two-coprime-terms-zero-sum', min_n=3)
def _two_coprime_terms(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for q in range(3, min(max_n, 27) + 1):
        if len(sympy.factorint(q)) != 1 or q % 2 == 0:
            continue
        weights = units_pow(q, 1)
        for __ in range(200):
            seq = _random_with_units(rng, q, 2, rng.randint(2, 5))
            if 0 not in window_reach(seq, weights):
                failures.append('%s mod %d is not a unit-weighted zero-sum' % (seq, q))
    return failures


@register_check('square-three-units-zero-sum', min_n=7)
def _square_three_units(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for q in _upto((7, 11, 13, 49, 121, 169), max_n):
        weights = units_pow(q, 2)
        for __ in range(200):
            seq = _random_with_units(rng, q, 3, rng.randint(3, 6))
            if 0 not in window_reach(seq, weights):
                failures.append('%s mod %d is not a square-weighted zero-sum' % (seq, q))

    for n, terms in ((2, (1, 1, 1)), (5, (1, 1, 1)), (3, (1, 2, 1))):
        if 0 in window_reach(Seq(n, terms), units_pow(n, 2)):
            failures.append('%r mod %d should not be a zero-sum' % (terms, n))
    return failures


@register_check('cube-three-units-zero-sum', min_n=2)
def _cube_three_units(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for p in sympy.primerange(2, min(max_n, 31) + 1):
        weights = units_pow(p, 3)
        if p in (2, 7, 13):
            if 0 in window_reach(Seq(p, [1, 1, 1]), weights):
                failures.append('(1,1,1) mod %d should not be a zero-sum' % p)
            continue
        for __ in range(200):
            seq = _random_with_units(rng, p, 3, rng.randint(3, 6))
            if 0 not in window_reach(seq, weights):
                failures.append('%s mod %d is not a cube-weighted zero-sum' % (seq, p))
    return failures


@register_check('square-triple-cover', min_n=7)
def _square_triple_cover(max_n, budget):
    failures = []
    for p in _upto((7, 11, 13), max_n):
        for triple in itertools.product(units(p), repeat=3):
            if not triple_unit_cover(p, *triple):
                failures.append('%r does not cover Z_%d' % (triple, p))
    return failures


@register_check('unit-lift', min_n=2)
def _unit_lift(max_n, budget):
    failures = []
    for n in range(2, min(max_n, 200) + 1):
        squares = units_pow(n, 2)
        for m in sympy.divisors(n):
            if m < 2:
                continue
            for b in units(m):
                a = lift_unit(b, m, n)
                if natural_map(a, m, n) != b or not is_unit(a, n):
                    failures.append('lift of %d mod %d to mod %d gave %d' % (b, m, n, a))
            for b in units_pow(m, 2):
                a = lift_unit(b, m, n, square=True)
                if natural_map(a, m, n) != b or a not in squares:
                    failures.append('square lift of %d mod %d to mod %d gave %d'
                                    % (b, m, n, a))
    return failures


@register_check('divide-by-prime-lift', min_n=9)
def _divide_by_prime_lift(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for n in _upto((9, 15, 25, 27, 45, 49, 75), max_n):
        for p in sympy.primefactors(n):
            for j in (1, 2, 3):
                for __ in range(100):
                    length = rng.randint(1, 5)
                    seq = Seq(n, [p * rng.randrange(n // p) for __ in range(length)])
                    reduced, original = lift_zero_sum_by_prime(seq, p, j)
                    if reduced and not original:
                        failures.append('%s mod %d: zero-sum after dividing by %d only'
                                        % (seq, n, p))
    return failures


def _characterize(family, n, budget, up_to_equivalence=False, shapes=True):
    weights = family_weights(family, n)
    constant = family_constant(family, n)
    failures = []
    for seq in _extremals(n, weights, constant, budget, up_to_equivalence):
        try:
            cert = decompose(seq, family)
            cert.validate(seq)
            if shapes:
                validate_shape(seq, family)
        except ConzeroError as e:
            failures.append('%s mod %d: %s' % (seq, n, e))
    return failures


@register_check('units-characterization', min_n=15)
def _units_characterization(max_n, budget):
    failures = []
    for n in _upto((15, 21, 25), max_n):
        failures.extend(_characterize('units', n, budget))
    return failures


@register_check('squares-characterization', min_n=49)
def _squares_characterization(max_n, budget):
    return _characterize('units^2', 49, budget, up_to_equivalence=True)


@register_check('cubes-characterization', min_n=55)
def _cubes_characterization(max_n, budget):
    return _characterize('units^3', 55, budget, shapes=False)


@register_check('square-prime-unique', min_n=49)
def _square_prime_unique(max_n, budget):
    failures = []
    for n in _upto((49, 77), max_n):
        weights = units_pow(n, 2)
        for seq in _extremals(n, weights, family_constant('units^2', n), budget,
                              up_to_equivalence=True):
            counts = prime_coprime_counts(seq)
            structural = [p for p, count in sorted(counts.items()) if count == 2]
            if len(structural) != 1:
                failures.append('%s mod %d has structural primes %r' % (seq, n, structural))
    return failures


ROUND_TRIPS = (
    ('units', (15, 25, 75, 105)),
    ('units^2', (49, 77)),
    ('units^3', (5, 55, 95)),
)


@register_check('construction-round-trip', min_n=5)
def _construction_round_trip(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for family, moduli in ROUND_TRIPS:
        for n in _upto(moduli, max_n):
            weights = family_weights(family, n)
            constant = family_constant(family, n)
            recipes = [greedy_recipe(family, n)]
            recipes.extend(random_recipe(family, n, rng) for __ in range(3))
            for recipe in recipes:
                seq = build_recipe(recipe)
                if not is_extremal(seq, weights, constant):
                    failures.append('built %s mod %d is not extremal' % (seq, n))
                    continue
                cert = decompose(seq, family)
                cert.validate(seq)
                rebuilt = build_recipe(recipe_from_certificate(cert, seq))
                if rebuilt != seq:
                    failures.append('%s mod %d rebuilt as %s' % (seq, n, rebuilt))
                elif decompose(rebuilt, family).skeleton() != cert.skeleton():
                    failures.append('skeleton of %s mod %d changed' % (seq, n))
    return failures


@register_check('constructed-lower-bounds', min_n=75)
def _constructed_lower_bounds(max_n, budget):
    failures = []
    for family, n in (('units', 75), ('units', 105), ('units^2', 343)):
        if n > max_n:
            continue
        seq = build_recipe(greedy_recipe(family, n))
        constant = family_constant(family, n)
        if not is_extremal(seq, family_weights(family, n), constant):
            failures.append('%s mod %d does not reach the bound %d' % (seq, n, constant))
    return failures


def _random_equivalent(rng, seq, weights):
    n = seq.modulus
    scaled = Seq(n, [(rng.choice(weights.elements) * t) % n for t in seq])
    return scaled.scaled(rng.choice(units(n)))


@register_check('equivalence-preserves-extremality', min_n=15)
def _equivalence_preserves_extremality(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for family, n in (('units', 15), ('units', 25), ('units^2', 49), ('units^3', 55)):
        if n > max_n:
            continue
        weights = family_weights(family, n)
        constant = family_constant(family, n)
        for __ in range(125):
            seq = build_recipe(random_recipe(family, n, rng))
            moved = _random_equivalent(rng, seq, weights)
            if not is_extremal(moved, weights, constant):
                failures.append('%s mod %d is equivalent to %s but not extremal'
                                % (moved, n, seq))
            if canonicalize(moved, weights) != canonicalize(seq, weights):
                failures.append('%s and %s canonicalize apart' % (moved, seq))
    return failures


@register_check('equivalence-preserves-zero-sums', min_n=3)
def _equivalence_preserves_zero_sums(max_n, budget):
    rng = random.Random(SEED)
    failures = []
    for n in _upto((3, 8, 15, 25, 49, 55, 105), max_n):
        for j in (1, 2, 3):
            weights = units_pow(n, j)
            for __ in range(500):
                seq = _random_seq(rng, n, rng.randint(1, 5))
                moved = _random_equivalent(rng, seq, weights)
                if (0 in window_reach(seq, weights)) != (0 in window_reach(moved, weights)):
                    failures.append('%s and %s mod %d, j=%d disagree on zero sums'
                                    % (seq, moved, n, j))
    return failures


def verify_theorems(max_n, max_nodes=None, max_seconds=None):
    """
    Runs every registered check whose smallest n is at most max_n.

    Returns {key: {'status': 'passed' | 'failed' | 'skipped', 'failures': [...]}}
    in key order; a scope below 2 gives an empty report.
    """
    budget = Budget(max_nodes, max_seconds)
    report = {}
    for key in sorted(CHECKS):
        min_n, func = CHECKS[key]
        if max_n < min_n:
            continue

        started = time.perf_counter()
        try:
            failures = func(max_n, budget)
        except BudgetExhausted as e:
            report[key] = {'status': 'skipped', 'failures': [str(e)]}
        except ConzeroError as e:
            report[key] = {'status': 'failed', 'failures': [str(e)]}
        else:
            status = 'failed' if failures else 'passed'
            report[key] = {'status': status, 'failures': failures[:20]}

        logger.debug('%s: %s in %.2fs', key, report[key]['status'],
                     time.perf_counter() - started)
    return report
