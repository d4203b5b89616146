# -*- coding: utf-8 -*-
"""
Exact arithmetic in Z_n: unit groups, their power classes, reduction maps
between moduli, unit lifting and the coset test for pairs over a prime.
"""
import functools
import math
import re
from collections import namedtuple

import sympy

from .errors import (
    ModulusError, WeightError, NotAUnitError, DomainError,
    InternalConsistencyError
)

Residue = namedtuple('Residue', ['value', 'modulus'])
CubeSplit = namedtuple('CubeSplit', ['n1', 'n2'])

WEIGHT_SYNTAX_RE = re.compile(r'^units\^([1-9][0-9]*)$')


class ZnContext(object):
    """The modulus n together with its prime factorization"""

    __slots__ = ('n', 'factorization', 'omega', '_units')

    _instances = {}

    def __init__(self, n):
        if isinstance(n, bool) or not isinstance(n, int):
            raise ModulusError('modulus must be an integer, got %r' % (n,))
        if n < 2:
            raise ModulusError('modulus must be at least 2', n)
        self.n = n
        self.factorization = tuple(sorted(
            (int(p), int(e)) for p, e in sympy.factorint(n).items()
        ))
        self.omega = sum(e for __, e in self.factorization)
        self._units = None

    @classmethod
    def of(cls, n):
        if isinstance(n, cls):
            return n
        ctx = cls._instances.get(n)
        if ctx is None:
            ctx = cls._instances[n] = cls(n)
        return ctx

    def __repr__(self):
        return 'ZnContext(%d)' % self.n

    def __eq__(self, other):
        return isinstance(other, ZnContext) and other.n == self.n

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(('ZnContext', self.n))

    @property
    def primes(self):
        return tuple(p for p, __ in self.factorization)

    @property
    def prime_powers(self):
        """The p^r with p^r || n, in increasing order of p"""
        return tuple(p ** e for p, e in self.factorization)

    @property
    def is_prime(self):
        return len(self.factorization) == 1 and self.factorization[0][1] == 1

    @property
    def is_squarefree(self):
        return all(e == 1 for __, e in self.factorization)

    @property
    def phi(self):
        return int(sympy.totient(self.n))

    def divides(self, m):
        return m >= 1 and self.n % m == 0


def as_context(n):
    return ZnContext.of(n)


def is_unit(x, n):
    return math.gcd(x % n, n) == 1


def unit_inverse(x, n):
    if not is_unit(x, n):
        raise NotAUnitError('%d is not invertible' % x, n)
    return pow(x, -1, n)


def units(ctx):
    """Returns the residues in [1, n) coprime to n, in increasing order"""
    ctx = as_context(ctx)
    if ctx._units is None:
        n = ctx.n
        ctx._units = tuple(x for x in range(1, n) if math.gcd(x, n) == 1)
    return ctx._units


class WeightSet(object):
    """
    A nonempty set of nonzero residues mod n used as weights.

    kind is one of 'explicit', 'units_pow', 'nonzero' or 'one'; the
    elements are always materialized.
    """

    __slots__ = ('modulus', 'kind', 'power', 'elements', 'members', 'mask',
                 '_stabilizer')

    def __init__(self, modulus, elements, kind='explicit', power=None):
        if isinstance(modulus, ZnContext):
            modulus = modulus.n
        elements = sorted(set(elements))
        if not elements:
            raise WeightError('weight set is empty', modulus)
        for a in elements:
            if not 0 < a < modulus:
                raise WeightError('weight %r is not in [1, n)' % (a,), modulus)
        self.modulus = modulus
        self.kind = kind
        self.power = power
        self.elements = tuple(elements)
        self.members = frozenset(elements)
        self.mask = sum(1 << a for a in elements)
        self._stabilizer = None

    @classmethod
    def explicit(cls, ctx, elements):
        return cls(as_context(ctx).n, elements)

    @classmethod
    def units_pow(cls, ctx, j):
        return units_pow(ctx, j)

    @classmethod
    def all_nonzero(cls, ctx):
        n = as_context(ctx).n
        return cls(n, range(1, n), kind='nonzero')

    @classmethod
    def one(cls, ctx):
        return cls(as_context(ctx).n, [1], kind='one')

    def __repr__(self):
        return 'WeightSet(%d, %s)' % (self.modulus, self.describe())

    def __eq__(self, other):
        return (isinstance(other, WeightSet) and
                other.modulus == self.modulus and
                other.elements == self.elements)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.modulus, self.elements))

    def __contains__(self, a):
        return a % self.modulus in self.members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def describe(self):
        """The command line spelling of this weight set"""
        if self.kind == 'one':
            return 'one'
        elif self.kind == 'nonzero':
            return 'nonzero'
        elif self.kind == 'units_pow':
            return 'units' if self.power == 1 else 'units^%d' % self.power
        return 'set:' + ','.join(str(a) for a in self.elements)

    def stabilizer(self):
        """The units c with c*A = A; multiplying a term by c keeps every reach set"""
        if self._stabilizer is None:
            n = self.modulus
            self._stabilizer = tuple(
                c for c in units(n)
                if all((c * a) % n in self.members for a in self.elements)
            )
        return self._stabilizer

    def is_group(self):
        n = self.modulus
        if any(math.gcd(a, n) != 1 for a in self.elements):
            return False
        return all((a * b) % n in self.members
                   for a in self.elements for b in self.elements)


def units_pow(ctx, j):
    """Returns U(n)^j = { x^j : x in U(n) } as a weight set"""
    if isinstance(j, bool) or not isinstance(j, int) or j < 1:
        raise WeightError('power must be a positive integer, got %r' % (j,))
    return _units_pow(as_context(ctx), j)


@functools.lru_cache(maxsize=1024)
def _units_pow(ctx, j):
    n = ctx.n
    image = set(pow(x, j, n) for x in units(ctx))
    return WeightSet(n, image, kind='units_pow', power=j)


def parse_weights(text, ctx):
    """Parses one, units, units^J, nonzero or set:a,b,..."""
    ctx = as_context(ctx)
    text = text.strip()
    if text == 'one':
        return WeightSet.one(ctx)
    elif text == 'nonzero':
        return WeightSet.all_nonzero(ctx)
    elif text == 'units':
        return units_pow(ctx, 1)

    match = WEIGHT_SYNTAX_RE.match(text)
    if match:
        return units_pow(ctx, int(match.group(1)))

    if text.startswith('set:'):
        try:
            values = [int(v) for v in text[4:].split(',')]
        except ValueError:
            raise WeightError('weights %r are not integers' % text[4:], ctx.n)
        return WeightSet.explicit(ctx, values)

    raise WeightError('unknown weight syntax %r' % text, ctx.n)


def power_residue_index(p, j):
    """Index of U(p)^j in U(p) for a prime p"""
    return math.gcd(j, p - 1)


def natural_map(x, m, n=None):
    """
    Reduces x from Z_n to Z_m for a divisor m of n.

    x may be a Residue, a sequence (anything with .terms and .modulus, the
    result has the same type) or a plain int together with n.
    """
    if hasattr(x, 'terms'):
        n = x.modulus
    elif isinstance(x, Residue):
        n = x.modulus
    elif n is None:
        raise ModulusError('natural_map needs the source modulus for %r' % (x,))

    if m < 2 or n % m != 0:
        raise ModulusError('%d does not divide %d' % (m, n), n)

    if hasattr(x, 'terms'):
        return type(x)(m, [t % m for t in x.terms])
    elif isinstance(x, Residue):
        return Residue(x.value % m, m)
    return x % m


def lift_unit(b, m, ctx, square=False):
    """
    Returns a unit a mod n with a = b (mod m).

    The preimages b, b+m, b+2m, ... below n are scanned in order; with
    square set the first preimage in U(n)^2 is returned instead.
    """
    ctx = as_context(ctx)
    n = ctx.n
    if isinstance(b, Residue):
        if b.modulus != m:
            raise ModulusError('residue is mod %d, not mod %d' % (b.modulus, m))
        b = b.value
    if m < 1 or n % m != 0:
        raise ModulusError('%d does not divide %d' % (m, n), n)

    b %= m
    if math.gcd(b, m) != 1:
        raise NotAUnitError('%d is not a unit' % b, m)

    squares = None
    if square:
        if m > 1 and b not in units_pow(m, 2):
            raise NotAUnitError('%d is not a square of a unit' % b, m)
        squares = units_pow(ctx, 2)

    for i in range(n // m):
        a = b + i * m
        if math.gcd(a, n) != 1:
            continue
        if squares is None or a in squares:
            return a

    raise InternalConsistencyError(
        'no preimage of %d mod %d is a %s mod %d'
        % (b, m, 'unit square' if square else 'unit', n), n)


def coset_test_pair(x, y, weights):
    """
    True iff the pair (x, y) over a prime p has no weighted zero-sum
    subsequence, i.e. both terms are nonzero and x, -y lie in different
    cosets of the weight subgroup.
    """
    p = weights.modulus
    if not sympy.isprime(p):
        raise ModulusError('coset test needs a prime modulus', p)
    if not weights.is_group():
        raise WeightError('coset test needs a subgroup of U(p)', p)
    x = getattr(x, 'value', x) % p
    y = getattr(y, 'value', y) % p
    if x == 0 or y == 0:
        return False
    ratio = (x * unit_inverse(-y % p, p)) % p
    return ratio not in weights.members


def cube_split(ctx):
    """Splits a squarefree n as n1*n2, n1 collecting the primes = 1 (mod 3)"""
    ctx = as_context(ctx)
    if not ctx.is_squarefree:
        raise DomainError('cube split needs a squarefree modulus', ctx.n)
    n1 = 1
    for p in ctx.primes:
        if p % 3 == 1:
            n1 *= p
    return CubeSplit(n1, ctx.n // n1)


@functools.lru_cache(maxsize=256)
def weight_orbits(weights):
    """
    Partitions Z_n into orbits of the stabilizer of the weights.

    Returns (reps, rep_of, sizes): the least element of every orbit in
    increasing order, the representative of each residue and the size of
    each orbit keyed by representative.
    """
    n = weights.modulus
    stab = weights.stabilizer()
    rep_of = [None] * n
    reps = []
    sizes = {}
    for x in range(n):
        if rep_of[x] is not None:
            continue
        orbit = set((h * x) % n for h in stab)
        for y in orbit:
            rep_of[y] = x
        reps.append(x)
        sizes[x] = len(orbit)
    return tuple(reps), tuple(rep_of), sizes


def unit_orbit_reps(ctx):
    """One residue per orbit of U(n) acting by multiplication: 0 and the proper divisors"""
    ctx = as_context(ctx)
    n = ctx.n
    return (0,) + tuple(int(d) for d in sympy.divisors(n) if d < n)
