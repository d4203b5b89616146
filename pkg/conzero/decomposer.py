# -*- coding: utf-8 -*-
"""
Certificates for extremal sequences.

An extremal sequence of the units, squares or cubes family over a
composite n always has a prime p dividing every term except one middle term
(two blocks) or two evenly spaced terms (three blocks); dividing the blocks
by p gives extremal sequences over n/p. decompose() finds that structure
recursively and records it as a Certificate.
"""
import functools
import itertools
from collections import namedtuple

from .builder import (
    FAMILY_POWERS, family_weights, family_parts, family_constant,
    check_family_modulus
)
from .compat import dumps_canonical
from .engine import Seq, has_zero_window, is_extremal, window_reach, prefix_sum_free
from .errors import (
    CharacterizationViolated, DomainError, ModulusError, NotExtremalError,
    WeightError
)
from .recipe import Recipe
from .ring import (
    as_context, coset_test_pair, units, units_pow, power_residue_index,
    unit_inverse
)

EquivClass = namedtuple('EquivClass', ['canonical', 'orbit_size'])


class Certificate(object):
    """Recursive witness that a sequence has the characterized structure"""

    def __init__(self, n, family, p, middle_positions=(), children=(),
                 connector_check=None, leaf=None, alternates=()):
        self.n = n
        self.family = family
        self.p = p
        self.middle_positions = tuple(middle_positions)
        self.children = tuple(children)  # (Seq over n/p, Certificate) pairs
        self.connector_check = connector_check or {}
        self.leaf = leaf
        self.alternates = tuple(sorted(alternates))

    def __repr__(self):
        return 'Certificate(n=%d, family=%s, p=%s, middles=%r)' % (
            self.n, self.family, self.p, self.middle_positions)

    def skeleton(self):
        """The prime and middle positions at every level"""
        return (self.p, self.middle_positions,
                tuple(cert.skeleton() for __, cert in self.children))

    def to_dict(self):
        return {
            'n': self.n,
            'family': self.family,
            'p': self.p,
            'middle_positions': list(self.middle_positions),
            'connector_check': self.connector_check,
            'leaf': self.leaf,
            'alternates': list(self.alternates),
            'children': [
                {'sequence': list(seq.terms), 'certificate': cert.to_dict()}
                for seq, cert in self.children
            ],
        }

    def to_json(self, indent=None):
        return dumps_canonical(self.to_dict(), indent=indent)

    def validate(self, seq):
        """
        Re-checks the certificate against seq using only the recorded
        values; raises CharacterizationViolated on any mismatch.
        """
        if seq.modulus != self.n:
            raise CharacterizationViolated('certificate is for mod %d' % self.n, seq.modulus)

        if self.leaf is not None:
            _validate_leaf(self, seq)
            return True

        p = self.p
        middles = [i - 1 for i in self.middle_positions]
        values = self.connector_check.get('values', [])
        if [seq[i] for i in middles] != list(values):
            raise CharacterizationViolated('connector values do not match', self.n)
        for i, t in enumerate(seq):
            if i not in middles and t % p:
                raise CharacterizationViolated('term %d is not divisible by %d' % (t, p), self.n)
            if i in middles and not t % p:
                raise CharacterizationViolated('middle term %d is divisible by %d' % (t, p), self.n)
        if len(values) == 2:
            _check_ratio(self.connector_check, p)

        blocks = _blocks(seq, middles, p)
        if len(blocks) != len(self.children):
            raise CharacterizationViolated('wrong number of children', self.n)
        for block, (child, cert) in zip(blocks, self.children):
            if block != child:
                raise CharacterizationViolated('child %s does not match %s' % (child, block), self.n)
            if cert is not None:
                cert.validate(child)
        return True


def _ratio_outside(ratio, p, power):
    """ratio is outside U(p)^power iff ratio^((p-1)/index) != 1"""
    index = power_residue_index(p, power)
    return pow(ratio, (p - 1) // index, p) != 1


def _check_ratio(check, p):
    x, y = check['images']
    if not x or not y:
        raise CharacterizationViolated('connector image is zero', p)
    ratio = (x * unit_inverse(-y % p, p)) % p
    if ratio != check['ratio'] or not _ratio_outside(ratio, p, check['power']):
        raise CharacterizationViolated('connector images %r are in one coset' % (check['images'],), p)


def _validate_leaf(cert, seq):
    n = cert.n
    if cert.leaf == 'prefix-sums-distinct':
        if len(seq) != n - 1 or not prefix_sum_free(seq):
            raise CharacterizationViolated('prefix sums repeat', n)
    elif cert.leaf == 'unit-singleton':
        if len(seq) != 1 or not seq[0] % n:
            raise CharacterizationViolated('expected a single unit', n)
    elif cert.leaf == 'coset-pair':
        if len(seq) != 2 or list(seq) != cert.connector_check['values']:
            raise CharacterizationViolated('expected the recorded pair', n)
        _check_ratio(cert.connector_check, n)
    else:
        raise CharacterizationViolated('unknown leaf %r' % cert.leaf, n)


def _blocks(seq, middles, p):
    n_child = seq.modulus // p
    bounds = [-1] + list(middles) + [len(seq)]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        out.append(Seq(n_child, [t // p for t in seq.terms[lo + 1:hi]]))
    return out


def _coset_check(values, p, power):
    images = [v % p for v in values]
    check = {'kind': 'coset-pair', 'prime': p, 'power': power,
             'values': list(values), 'images': images, 'ratio': None}
    if images[0] and images[1]:
        check['ratio'] = (images[0] * unit_inverse(-images[1] % p, p)) % p
    return check


def _leaf(seq, family, p):
    power = FAMILY_POWERS[family]
    pairs = (family == 'units^2' and p != 2) or (family == 'units^3' and p % 3 == 1)
    if not pairs:
        if len(seq) != 1 or not seq[0] % p:
            raise CharacterizationViolated('%s is not a unit singleton' % seq, p)
        return Certificate(p, family, p, leaf='unit-singleton')

    if family == 'units^3' and p == 7:
        raise DomainError('cube extremals mod 7 are not pairs', p)
    if len(seq) != 2:
        raise CharacterizationViolated('%s is not a pair' % seq, p)
    check = _coset_check(seq.terms, p, power)
    if check['ratio'] is None or not _ratio_outside(check['ratio'], p, power):
        raise CharacterizationViolated('%s lies in one coset' % seq, p)
    return Certificate(p, family, p, connector_check=check, leaf='coset-pair')


def _pattern_primes(seq, family, ctx):
    """Primes p and middle indices (0-based) where p divides exactly the non-middle terms"""
    length = len(seq)
    found = []
    for p in ctx.primes:
        parts = family_parts(family, p)
        if (length + 1) % parts:
            continue
        step = (length + 1) // parts
        middles = [step * i - 1 for i in range(1, parts)]
        if all((t % p != 0) == (i in middles) for i, t in enumerate(seq)):
            found.append((p, middles))
    return found


def _decompose(seq, family, ctx, strict):
    n = ctx.n
    if ctx.is_prime:
        return _leaf(seq, family, n)

    found = _pattern_primes(seq, family, ctx)
    if not found:
        raise CharacterizationViolated('no prime divides all terms of %s but the middle ones' % seq, n)
    if family == 'units^2' and len(found) > 1 and strict:
        raise CharacterizationViolated('structural prime is not unique for %s' % seq, n)

    p, middles = found[0]
    n_child = n // p
    child_ctx = as_context(n_child)
    weights = family_weights(family, child_ctx)
    blocks = _blocks(seq, middles, p)

    values = [seq[i] for i in middles]
    if len(values) == 2:
        check = _coset_check(values, p, FAMILY_POWERS[family])
        if check['ratio'] is None or not _ratio_outside(check['ratio'], p, check['power']):
            raise CharacterizationViolated('connector images %r have a weighted zero-sum mod %d'
                                           % (check['images'], p), n)
    else:
        check = {'kind': 'nondivisible', 'prime': p, 'values': values,
                 'images': [v % p for v in values]}

    children = []
    for block in blocks:
        if has_zero_window(block, weights) is not None:
            raise CharacterizationViolated('child %s has a zero window' % block, n_child)
        children.append((block, _decompose(block, family, child_ctx, strict)))

    return Certificate(n, family, p, middle_positions=[i + 1 for i in middles],
                       children=children, connector_check=check,
                       alternates=[q for q, __ in found[1:]])


def decompose(seq, family, ctx=None, strict=True):
    """
    Extracts the recursive structure of an extremal sequence.

    strict checks that n lies in the characterized regime and that seq is
    extremal first; without it only the structure itself is extracted and
    checked, which also covers constructions over small primes.
    """
    ctx = as_context(seq.modulus if ctx is None else ctx)
    if seq.modulus != ctx.n:
        raise ModulusError('sequence is mod %d' % seq.modulus, ctx.n)

    if family == 'one':
        if len(seq) != ctx.n - 1 or not prefix_sum_free(seq):
            raise NotExtremalError('%s is not extremal' % seq, ctx.n)
        return Certificate(ctx.n, family, None, leaf='prefix-sums-distinct')
    if family not in FAMILY_POWERS:
        raise WeightError('unknown family %r' % family, ctx.n)

    if strict:
        check_family_modulus(family, ctx)
        weights = family_weights(family, ctx)
        if not is_extremal(seq, weights, family_constant(family, ctx.n)):
            raise NotExtremalError('%s is not extremal' % seq, ctx.n)
    elif has_zero_window(seq, family_weights(family, ctx)) is not None:
        raise NotExtremalError('%s has a zero window' % seq, ctx.n)

    return _decompose(seq, family, ctx, strict)


def recipe_from_certificate(cert, seq):
    """A recipe that rebuilds seq exactly"""
    if cert.leaf is not None:
        return Recipe(cert.family, cert.n, leaf=seq.terms)
    children = [recipe_from_certificate(child_cert, child)
                for child, child_cert in cert.children]
    return Recipe(cert.family, cert.n, p=cert.p, children=children,
                  connectors=cert.connector_check['values'])


def prime_coprime_counts(seq, ctx=None):
    """For every prime divisor, the number of terms it does not divide"""
    ctx = as_context(seq.modulus if ctx is None else ctx)
    return dict((p, sum(1 for t in seq if t % p)) for p in ctx.primes)


def _orderings(primes):
    return sorted(set(itertools.permutations(primes)))


def _match_units_two(seq, q1, q2):
    x1, x2, x3 = seq
    if x1 % q1 or x3 % q1 or not x2 % q1:
        return None
    b = [x1 // q1, x3 // q1]
    if any(not v % q2 for v in b):
        return None
    return {'a': [x2], 'b': b}


def _match_units_three(seq, q1, q2, q3):
    q12 = q1 * q2
    x = seq.terms
    if x[3] % q1 == 0:
        return None
    for i in (0, 2):
        if x[i] % q12 or not (x[i] // q12) % q3:
            return None
    if x[1] % q1 or not (x[1] // q1) % q2:
        return None

    a_left = [x[0] // q12, x[2] // q12]
    b_left = [x[1] // q1]

    # both halves split at q2
    if all(x[i] % q12 == 0 and (x[i] // q12) % q3 for i in (4, 6)):
        if x[5] % q1 == 0 and (x[5] // q1) % q2:
            return 'units-3-same', {
                'a': a_left + [x[4] // q12, x[6] // q12],
                'b': b_left + [x[5] // q1],
                'c': [x[3]],
            }

    # second half splits at q3
    q13 = q1 * q3
    if all(x[i] % q13 == 0 and (x[i] // q13) % q2 for i in (4, 6)):
        if x[5] % q1 == 0 and (x[5] // q1) % q3:
            return 'units-3-mixed', {
                'a': a_left + [x[5] // q1],
                'b': b_left + [x[4] // q13, x[6] // q13],
                'c': [x[3]],
            }
    return None


def _match_squares_two(seq, q1, q2):
    x = seq.terms
    middles = (2, 5)
    for i, t in enumerate(x):
        if (t % q1 != 0) != (i in middles):
            return None
    b = [x[i] // q1 for i in (0, 1, 3, 4, 6, 7)]
    q_small = units_pow(q2, 2)
    for i in (0, 2, 4):
        if not coset_test_pair(b[i], b[i + 1], q_small):
            return None
    if not coset_test_pair(x[2], x[5], units_pow(q1, 2)):
        return None
    return {'a': [x[2], x[5]], 'b': b}


def validate_shape(seq, family, ctx=None):
    """
    Matches seq against the closed forms for Omega(n) <= 3 (units) and
    Omega(n) <= 2 (squares). Returns the form name, the prime ordering
    q1, q2, ... and the coefficient lists.
    """
    ctx = as_context(seq.modulus if ctx is None else ctx)
    n = ctx.n
    primes = [p for p, e in ctx.factorization for __ in range(e)]

    if family == 'units':
        if ctx.omega > 3:
            raise DomainError('unit shapes are known for at most 3 prime factors', n)
    elif family == 'units^2':
        if ctx.omega > 2:
            raise DomainError('square shapes are known for at most 2 prime factors', n)
    else:
        raise DomainError('no closed shapes for family %r' % family, n)

    check_family_modulus(family, ctx)
    if not is_extremal(seq, family_weights(family, ctx), family_constant(family, n)):
        raise NotExtremalError('%s is not extremal' % seq, n)

    if ctx.omega == 1:
        return {'form': family + '-1', 'primes': primes,
                'coefficients': {'a': list(seq.terms)}}

    for order in _orderings(primes):
        if family == 'units' and ctx.omega == 2:
            coefficients = _match_units_two(seq, *order)
            form = 'units-2'
        elif family == 'units':
            matched = _match_units_three(seq, *order)
            form, coefficients = matched if matched else (None, None)
        else:
            coefficients = _match_squares_two(seq, *order)
            form = 'squares-2'
        if coefficients is not None:
            return {'form': form, 'primes': list(order), 'coefficients': coefficients}

    raise CharacterizationViolated('%s matches none of the closed forms' % seq, n)


def _orbit_products(weights):
    n = weights.modulus
    return [sorted(set((a * x) % n for a in weights.elements)) for x in range(n)]


@functools.lru_cache(maxsize=4096)
def canonicalize(seq, weights):
    """
    The lexicographically least sequence (c*a_1*x_1, ..., c*a_k*x_k) over
    c in U(n) and a_i in A, and the number of such sequences.

    For a fixed c the terms are independent, so the least member is the
    least over c of the termwise minima.
    """
    n = seq.modulus
    if weights.modulus != n:
        raise ModulusError('modulus mismatch: %d and %d' % (n, weights.modulus), n)
    if not len(seq):
        return EquivClass(seq, 1)

    products = _orbit_products(weights)
    best = None
    boxes = set()
    for c in units(n):
        box = tuple(tuple(sorted(set((c * y) % n for y in products[x])))
                    for x in seq)
        boxes.add(box)
        candidate = tuple(b[0] for b in box)
        if best is None or candidate < best:
            best = candidate

    if weights.is_group():
        # orbits of a group partition Z_n, so distinct boxes are disjoint
        size = 0
        for box in boxes:
            count = 1
            for b in box:
                count *= len(b)
            size += count
    else:
        members = set()
        for box in boxes:
            members.update(itertools.product(*box))
        size = len(members)

    return EquivClass(Seq(n, best), size)


def lift_zero_sum_by_prime(seq, p, j):
    """
    Divides every term of seq by p and returns (reduced, original): whether
    the reduced sequence over n/p is a U(n/p)^j-weighted zero-sum and whether
    seq is a U(n)^j-weighted zero-sum. The first implies the second.
    """
    ctx = as_context(seq.modulus)
    if p not in ctx.primes:
        raise ModulusError('%d is not a prime divisor' % p, ctx.n)
    for t in seq:
        if t % p:
            raise DomainError('%d does not divide the term %d' % (p, t), ctx.n)

    original = 0 in window_reach(seq, units_pow(ctx, j))
    n_child = ctx.n // p
    if n_child == 1:
        return True, original
    reduced_seq = Seq(n_child, [t // p for t in seq])
    reduced = 0 in window_reach(reduced_seq, units_pow(n_child, j))
    return reduced, original
