# -*- coding: utf-8 -*-
"""
Constructions of extremal sequences.

Every recursive construction takes extremal sequences S1', S2' (and S3')
over n/p, multiplies their terms by p and glues them together with
connector terms that p does not divide:

    (p*S1', x*, p*S2')              units, and cubes with p != 1 (mod 3)
    (p*S1', x*, p*S2', x**, p*S3')  squares, and cubes with p = 1 (mod 3)

where in the three-part case the images of (x*, x**) mod p must not have a
weighted zero-sum subsequence.
"""
import math
import random

from .engine import Seq, is_extremal, known_constant, prefix_sum_free
from .errors import (
    DomainError, ModulusError, NotExtremalError, SelectorError,
    ConnectorError, InternalConsistencyError, WeightError
)
from .recipe import Recipe, FAMILIES
from .ring import as_context, coset_test_pair, units, units_pow, WeightSet

FAMILY_POWERS = {'units': 1, 'units^2': 2, 'units^3': 3}


def family_weights(family, ctx):
    ctx = as_context(ctx)
    if family == 'one':
        return WeightSet.one(ctx)
    try:
        return units_pow(ctx, FAMILY_POWERS[family])
    except KeyError:
        raise WeightError('unknown family %r' % family, ctx.n)


def family_parts(family, p):
    """Number of blocks the construction splits into at the prime p"""
    if family == 'units':
        return 2
    elif family == 'units^2':
        return 3
    return 3 if p % 3 == 1 else 2


def check_family_modulus(family, ctx):
    """Raises DomainError unless n lies in the regime the family covers"""
    ctx = as_context(ctx)
    n = ctx.n
    if family == 'one':
        return
    elif family == 'units':
        if n % 2 == 0:
            raise DomainError('units constructions need an odd modulus', n)
    elif family == 'units^2':
        if any(p < 7 for p in ctx.primes):
            raise DomainError('square constructions need every prime divisor '
                              'to be at least 7', n)
    elif family == 'units^3':
        if not ctx.is_squarefree:
            raise DomainError('cube constructions need a squarefree modulus', n)
        if math.gcd(n, 2 * 7 * 13) != 1:
            raise DomainError('cube constructions need n coprime to 2, 7 and 13', n)
    else:
        raise WeightError('unknown family %r' % family, n)


def family_constant(family, n):
    constant, __ = known_constant(as_context(n), family_weights(family, n))
    if constant is None:
        raise DomainError('no closed form for C_A(n) with A = %s' % family, n)
    return constant


def base_extremals(family, p):
    """All extremal sequences of the family over the prime p, in increasing order"""
    ctx = as_context(p)
    if not ctx.is_prime:
        raise ModulusError('base cases need a prime modulus', p)

    if family == 'one':
        raise DomainError('the one-weight family has no recursive base case', p)

    pairs = family == 'units^2' and p != 2
    if family == 'units^3':
        if p == 7:
            raise DomainError('cube extremals mod 7 have length 3', p)
        pairs = p % 3 == 1

    if not pairs:
        return [Seq(p, [x]) for x in units(ctx)]

    weights = family_weights(family, ctx)
    return [Seq(p, [x, y]) for x in units(ctx) for y in units(ctx)
            if coset_test_pair(x, y, weights)]


def build_one_weight(ctx, choices=None):
    """
    Builds a length n-1 sequence whose prefix sums are pairwise distinct.

    choices is None (take the least legal residue every time), a list of
    residues or a callable (step, legal) -> residue.
    """
    ctx = as_context(ctx)
    n = ctx.n
    sums = [0]
    seen = {0: 0}
    terms = []
    for step in range(n - 1):
        legal = [x for x in range(1, n) if (sums[-1] + x) % n not in seen]
        if choices is None:
            x = legal[0]
        elif callable(choices):
            x = choices(step, legal)
        elif step < len(choices):
            x = choices[step]
        else:
            raise SelectorError('%d choices given for %d steps' % (len(choices), n - 1), n)

        total = (sums[-1] + x) % n
        if total in seen:
            raise SelectorError(
                'choice %d at step %d repeats prefix sum %d of step %d'
                % (x, step + 1, total, seen[total]), n)
        terms.append(x % n)
        sums.append(total)
        seen[total] = step + 1

    return Seq(n, terms)


def _check_prime_divisor(ctx, p):
    if p not in ctx.primes:
        raise ModulusError('%d is not a prime divisor' % p, ctx.n)


def _check_children(family, n, p, children):
    n_child = n // p
    if n_child == 1:
        for child in children:
            if len(child):
                raise NotExtremalError('children over Z_1 must be empty', n)
        return

    weights = family_weights(family, n_child)
    constant = family_constant(family, n_child)
    for child in children:
        if child.modulus != n_child:
            raise ModulusError('child is mod %d, not mod %d'
                               % (child.modulus, n_child), n)
        if not is_extremal(child, weights, constant):
            raise NotExtremalError('child %s is not extremal' % child, n_child)


def _glue(n, p, children, connectors):
    terms = []
    for i, child in enumerate(children):
        terms.extend(p * t for t in child)
        if i < len(connectors):
            terms.append(connectors[i] % n)
    return Seq(n, terms)


def build_units(ctx, p, s1, s2, x_star):
    """(p*S1', x*, p*S2') for A = U(n), n odd"""
    ctx = as_context(ctx)
    check_family_modulus('units', ctx)
    _check_prime_divisor(ctx, p)
    if x_star % p == 0:
        raise ConnectorError('connector %d is divisible by %d' % (x_star, p), ctx.n)
    _check_children('units', ctx.n, p, (s1, s2))
    return _glue(ctx.n, p, (s1, s2), (x_star,))


def build_units_squared(ctx, p, s1, s2, s3, x_star, x_star2):
    """(p*S1', x*, p*S2', x**, p*S3') for A = U(n)^2, every prime >= 7"""
    ctx = as_context(ctx)
    check_family_modulus('units^2', ctx)
    _check_prime_divisor(ctx, p)
    if not coset_test_pair(x_star, x_star2, units_pow(p, 2)):
        raise ConnectorError('connectors (%d, %d) have a weighted zero-sum mod %d'
                             % (x_star, x_star2, p), ctx.n)
    _check_children('units^2', ctx.n, p, (s1, s2, s3))
    return _glue(ctx.n, p, (s1, s2, s3), (x_star, x_star2))


def build_units_cubed(ctx, p, children, connectors):
    """
    Three-part construction for p = 1 (mod 3), two-part otherwise, for
    A = U(n)^3 with n squarefree and coprime to 2, 7 and 13.
    """
    ctx = as_context(ctx)
    check_family_modulus('units^3', ctx)
    _check_prime_divisor(ctx, p)
    children = tuple(children)
    connectors = tuple(connectors)
    parts = family_parts('units^3', p)

    if len(children) != parts or len(connectors) != parts - 1:
        raise ConnectorError('p=%d needs %d children and %d connectors'
                             % (p, parts, parts - 1), ctx.n)
    if parts == 3:
        if not coset_test_pair(connectors[0], connectors[1], units_pow(p, 3)):
            raise ConnectorError('connectors %r have a weighted zero-sum mod %d'
                                 % (connectors, p), ctx.n)
    elif connectors[0] % p == 0:
        raise ConnectorError('connector %d is divisible by %d'
                             % (connectors[0], p), ctx.n)

    _check_children('units^3', ctx.n, p, children)
    return _glue(ctx.n, p, children, connectors)


def build_recipe(recipe):
    """Builds the sequence a recipe describes, checking every level"""
    ctx = as_context(recipe.n)
    family = recipe.family

    if recipe.is_leaf:
        seq = Seq(ctx.n, recipe.leaf)
        if family == 'one':
            if len(seq) != ctx.n - 1 or not prefix_sum_free(seq):
                raise NotExtremalError('prefix sums of %s repeat' % seq, ctx.n)
            return seq
        if not ctx.is_prime:
            raise DomainError('base cases must be over a prime', ctx.n)
        if seq not in base_extremals(family, ctx.n):
            raise NotExtremalError('%s is not a base case of %s' % (seq, family), ctx.n)
        return seq

    children = [build_recipe(child) for child in recipe.children]
    for child, sub in zip(children, recipe.children):
        if sub.n * recipe.p != ctx.n:
            raise ModulusError('child recipe is mod %d, expected %d'
                               % (sub.n, ctx.n // recipe.p), ctx.n)

    if ctx.n == recipe.p:
        children = [Seq(1, ()) for __ in range(family_parts(family, recipe.p))]

    if family == 'units':
        if len(children) != 2 or len(recipe.connectors) != 1:
            raise ConnectorError('units recipes need 2 children and 1 connector', ctx.n)
        return build_units(ctx, recipe.p, children[0], children[1], recipe.connectors[0])
    elif family == 'units^2':
        if len(children) != 3 or len(recipe.connectors) != 2:
            raise ConnectorError('square recipes need 3 children and 2 connectors', ctx.n)
        return build_units_squared(ctx, recipe.p, children[0], children[1],
                                   children[2], *recipe.connectors)
    elif family == 'units^3':
        return build_units_cubed(ctx, recipe.p, children, recipe.connectors)
    raise DomainError('family %r has no recursive construction' % family, ctx.n)


def connector_candidates(family, ctx, p):
    """Valid connectors at the prime p, lexicographically ordered"""
    ctx = as_context(ctx)
    n = ctx.n
    if family_parts(family, p) == 2:
        for x in range(n):
            if x % p:
                yield (x,)
        return

    weights = family_weights(family, p)
    for x in range(n):
        if x % p == 0:
            continue
        for y in range(n):
            if coset_test_pair(x, y, weights):
                yield (x, y)


def greedy_recipe(family, ctx):
    """Smallest prime, least base cases and least connectors at every level"""
    ctx = as_context(ctx)
    check_family_modulus(family, ctx)
    if family == 'one':
        return Recipe(family, ctx.n, leaf=build_one_weight(ctx).terms)
    if ctx.is_prime:
        return Recipe(family, ctx.n, leaf=base_extremals(family, ctx.n)[0].terms)

    p = ctx.primes[0]
    child = greedy_recipe(family, ctx.n // p)
    connectors = next(connector_candidates(family, ctx, p))
    return Recipe(family, ctx.n, p=p,
                  children=[child] * family_parts(family, p),
                  connectors=connectors)


def random_recipe(family, ctx, rng):
    """A random recipe: random prime, base cases and connectors at every level"""
    ctx = as_context(ctx)
    check_family_modulus(family, ctx)
    n = ctx.n
    if family == 'one':
        seq = build_one_weight(ctx, lambda step, legal: rng.choice(legal))
        return Recipe(family, n, leaf=seq.terms)
    if ctx.is_prime:
        return Recipe(family, n, leaf=rng.choice(base_extremals(family, n)).terms)

    p = rng.choice(ctx.primes)
    parts = family_parts(family, p)
    children = [random_recipe(family, n // p, rng) for __ in range(parts)]

    if parts == 2:
        x = rng.randrange(1, p) + p * rng.randrange(n // p)
        connectors = (x,)
    else:
        weights = family_weights(family, p)
        a = rng.randrange(1, p)
        valid = [b for b in range(1, p) if coset_test_pair(a, b, weights)]
        if not valid:
            raise InternalConsistencyError('no connector pair starts with %d mod %d'
                                           % (a, p), n)
        b = rng.choice(valid)
        connectors = (a + p * rng.randrange(n // p), b + p * rng.randrange(n // p))

    return Recipe(family, n, p=p, children=children, connectors=connectors)


def random_extremal(family, ctx, seed=None):
    """Builds the sequence of a random recipe and checks that it is extremal"""
    ctx = as_context(ctx)
    rng = random.Random(seed)
    seq = build_recipe(random_recipe(family, ctx, rng))
    constant = family_constant(family, ctx.n)
    if not is_extremal(seq, family_weights(family, ctx), constant):
        raise InternalConsistencyError('built %s is not extremal' % seq, ctx.n)
    return seq


__all__ = [
    'FAMILIES', 'family_weights', 'family_parts', 'check_family_modulus',
    'family_constant', 'base_extremals', 'build_one_weight', 'build_units',
    'build_units_squared', 'build_units_cubed', 'build_recipe',
    'connector_candidates', 'greedy_recipe', 'random_recipe', 'random_extremal',
]
