# -*- coding: utf-8 -*-
"""
The window engine: weighted reach sets, zero-window detection and the
exhaustive search for C_A(n) and for the A-extremal sequences.

Reach sets are n-bit integers; bit r is set when r is an achievable weighted
sum of the window. Extending a window by a term x with weights A adds the
set A*x to every reachable sum.
"""
import functools
import itertools
import logging
import math
import time
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

from .errors import (
    ConzeroError, ModulusError, NotAUnitError, SequenceError
)
from .ring import (
    ZnContext, as_context, is_unit, natural_map, units_pow, cube_split,
    weight_orbits, unit_orbit_reps
)

logger = logging.getLogger(__name__)


class Seq(object):
    """An ordered sequence of residues mod n"""

    __slots__ = ('modulus', 'terms')

    def __init__(self, modulus, terms=()):
        if isinstance(modulus, ZnContext):
            modulus = modulus.n
        terms = tuple(int(t) for t in terms)
        for t in terms:
            if not 0 <= t < modulus:
                raise ModulusError('term %d is not in [0, n)' % t, modulus)
        self.modulus = modulus
        self.terms = terms

    @classmethod
    def parse(cls, text, n):
        """Parses comma separated decimal residues such as 10,4,20"""
        n = as_context(n).n
        text = text.strip()
        if not text:
            return cls(n, ())
        try:
            terms = [int(t) for t in text.split(',')]
        except ValueError:
            raise SequenceError('malformed sequence %r' % text, n)
        return cls(n, terms)

    def __repr__(self):
        return 'Seq(%d, %r)' % (self.modulus, self.terms)

    def __str__(self):
        return ','.join(str(t) for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Seq(self.modulus, self.terms[index])
        return self.terms[index]

    def __add__(self, other):
        _check_same_modulus(self.modulus, other.modulus)
        return Seq(self.modulus, self.terms + other.terms)

    def __eq__(self, other):
        return (isinstance(other, Seq) and other.modulus == self.modulus and
                other.terms == self.terms)

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return (self.modulus, self.terms) < (other.modulus, other.terms)

    def __hash__(self):
        return hash((self.modulus, self.terms))

    def scaled(self, c):
        n = self.modulus
        return Seq(n, [(c * t) % n for t in self.terms])


class ReachSet(namedtuple('ReachSet', ['modulus', 'bits'])):
    __slots__ = ()

    def __contains__(self, r):
        return bool((self.bits >> (r % self.modulus)) & 1)

    def residues(self):
        return [r for r in range(self.modulus) if (self.bits >> r) & 1]


class SearchReport(object):
    """Outcome of a C_A(n) computation"""

    def __init__(self, n, weights, status, constant, lower_bound, witness,
                 nodes_visited, elapsed, extremal_count=None, count_status=None):
        self.n = n
        self.weights = weights
        self.status = status
        self.constant = constant
        self.lower_bound = lower_bound
        self.witness = witness
        self.nodes_visited = nodes_visited
        self.elapsed = elapsed
        self.extremal_count = extremal_count
        # None when no count was asked for, else 'complete' or 'incomplete'
        self.count_status = count_status

    def __repr__(self):
        return 'SearchReport(n=%d, weights=%s, status=%s, constant=%s)' % (
            self.n, self.weights.describe(), self.status, self.constant)

    @property
    def exact(self):
        return self.status == 'exact'

    def to_dict(self):
        return {
            'n': self.n,
            'weights': self.weights.describe(),
            'status': self.status,
            'constant': self.constant,
            'lower_bound': self.lower_bound,
            'witness': list(self.witness.terms),
            'extremal_count': self.extremal_count,
            'count_status': self.count_status,
            'nodes_visited': self.nodes_visited,
        }


EnumerationResult = namedtuple(
    'EnumerationResult', ['sequences', 'count', 'complete', 'nodes_visited'])


class _OutOfBudget(Exception):
    pass


class _Saturated(Exception):
    """A zero-window-free prefix of length n - 1 was reached"""

    def __init__(self, prefix):
        Exception.__init__(self, prefix)
        self.prefix = prefix


def _check_same_modulus(n, m):
    if n != m:
        raise ModulusError('modulus mismatch: %d and %d' % (n, m), n)


def _popcount(bits):
    return bin(bits).count('1')


class _Kernel(object):
    """Precomputed A*x sets for every residue x"""

    def __init__(self, weights):
        n = self.n = weights.modulus
        self.full = (1 << n) - 1
        self.products = []
        self.masks = []
        for x in range(n):
            prods = tuple(sorted(set((a * x) % n for a in weights.elements)))
            self.products.append(prods)
            self.masks.append(sum(1 << r for r in prods))

    def rotate(self, bits, s):
        if s == 0:
            return bits
        n = self.n
        return ((bits << s) | (bits >> (n - s))) & self.full

    def extend(self, bits, x):
        prods = self.products[x]
        if len(prods) <= _popcount(bits):
            out = 0
            for s in prods:
                out |= self.rotate(bits, s)
            return out
        out = 0
        mask = self.masks[x]
        r = 0
        while bits:
            if bits & 1:
                out |= self.rotate(mask, r)
            bits >>= 1
            r += 1
        return out


@functools.lru_cache(maxsize=64)
def _kernel(weights):
    return _Kernel(weights)


def window_reach(seq, weights):
    """Returns every sum a_1 x_1 + ... + a_k x_k with a_i in A"""
    _check_same_modulus(seq.modulus, weights.modulus)
    if not len(seq):
        raise SequenceError('an empty sequence has no weighted sum',
                            seq.modulus)
    kernel = _kernel(weights)
    bits = 1
    for x in seq:
        bits = kernel.extend(bits, x)
    return ReachSet(seq.modulus, bits)


def has_zero_window(seq, weights):
    """
    Returns the first window (start, end), 0-based and inclusive, that is a
    weighted zero-sum, ordered by end and then by start; None if there is
    no such window.
    """
    _check_same_modulus(seq.modulus, weights.modulus)
    kernel = _kernel(weights)
    windows = []  # (start, reach) for the windows ending at the last term
    for end, x in enumerate(seq):
        windows = [(start, kernel.extend(bits, x)) for start, bits in windows]
        windows.append((end, kernel.masks[x]))
        for start, bits in windows:
            if bits & 1:
                return (start, end)
    return None


def is_extremal(seq, weights, constant):
    if len(seq) != constant - 1:
        return False
    return has_zero_window(seq, weights) is None


def prefix_sum_free(seq):
    """True iff the prefix sums 0, x_1, x_1 + x_2, ... are pairwise distinct"""
    n = seq.modulus
    seen = set([0])
    total = 0
    for x in seq:
        total = (total + x) % n
        if total in seen:
            return False
        seen.add(total)
    return True


def crt_zero_sum_check(seq, j):
    """
    Decides whether seq is a U(n)^j-weighted zero-sum sequence one prime
    power at a time: it is one iff every image mod p^r (p^r || n) is a
    U(p^r)^j-weighted zero-sum sequence.
    """
    ctx = as_context(seq.modulus)
    for q in ctx.prime_powers:
        local = natural_map(seq, q)
        if not 0 in window_reach(local, units_pow(q, j)):
            return False
    return True


def triple_unit_cover(ctx, x1, x2, x3):
    """True iff A*x1 + A*x2 + A*x3 is all of Z_{p^r} for A = U(p^r)^2"""
    ctx = as_context(ctx)
    if len(ctx.factorization) != 1:
        raise ModulusError('triple cover needs a prime power modulus', ctx.n)
    for x in (x1, x2, x3):
        if not is_unit(x, ctx.n):
            raise NotAUnitError('%d is not a unit' % x, ctx.n)
    seq = Seq(ctx.n, [x % ctx.n for x in (x1, x2, x3)])
    reach = window_reach(seq, units_pow(ctx, 2))
    return reach.bits == (1 << ctx.n) - 1


def known_constant(ctx, weights):
    """
    Returns (constant, statement) for the weight families whose C_A(n) has
    a closed form, or (None, None).
    """
    ctx = as_context(ctx)
    n = ctx.n
    _check_same_modulus(n, weights.modulus)

    if weights.elements == (1,):
        return n, 'prefix-sum-constant'
    if weights.elements == tuple(range(1, n)):
        return 2, 'nonzero-constant'
    if weights == units_pow(ctx, 1):
        if n % 2:
            return 2 ** ctx.omega, 'units-constant'
        return None, None
    if weights == units_pow(ctx, 2):
        if ctx.is_prime:
            return 3, 'quadratic-residue-constant'
        if all(p >= 7 for p in ctx.primes):
            return 3 ** ctx.omega, 'squares-constant'
        return None, None
    if weights == units_pow(ctx, 3):
        if n == 7:
            return 4, 'cubes-mod-seven-constant'
        if ctx.is_prime and n % 3 == 1:
            return 3, 'cubic-residue-constant'
        if ctx.is_squarefree and math.gcd(n, 2 * 7 * 13) == 1:
            split = cube_split(ctx)
            n1_omega = as_context(split.n1).omega if split.n1 > 1 else 0
            n2_omega = as_context(split.n2).omega if split.n2 > 1 else 0
            return 2 ** n2_omega * 3 ** n1_omega, 'cubes-constant'
    return None, None


def _reduce_state(masks):
    """Drops duplicate reach sets and those contained in another one"""
    kept = []
    for bits in sorted(set(masks), key=_popcount, reverse=True):
        if any(bits & ~other == 0 for other in kept):
            continue
        kept.append(bits)
    return tuple(sorted(kept))


class _Search(object):
    """
    Depth-first search over zero-window-free sequences.

    A search state is the set of reach sets of the windows ending at the
    last term; whether a term may be appended depends on nothing else, so
    results are memoized per state. The walks keep their own stack of frames
    since a search can run n - 1 terms deep.
    """

    def __init__(self, weights, max_nodes=None, deadline=None):
        self.weights = weights
        self.kernel = _kernel(weights)
        self.reps, self.rep_of, self.sizes = weight_orbits(weights)
        self.max_nodes = max_nodes
        self.deadline = deadline
        # no zero-window-free sequence is longer than n - 1
        self.ceiling = weights.modulus - 1
        self.longest_memo = {}
        self.count_memo = {}
        self.nodes = 0
        self.best_prefix = ()

    def tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _OutOfBudget()
        if self.deadline is not None and time.time() > self.deadline:
            raise _OutOfBudget()

    def step(self, state, x):
        kernel = self.kernel
        masks = [kernel.extend(bits, x) for bits in state]
        masks.append(kernel.masks[x])
        for bits in masks:
            if bits & 1:
                return None
        return _reduce_state(masks)

    def follow(self, state):
        """Replays the memoized best continuation of a state"""
        out = []
        while True:
            length, x = self.longest_memo[state]
            if x is None:
                return tuple(out)
            out.append(x)
            state = self.step(state, x)

    def _record(self, prefix, state):
        total = len(prefix) + self.longest_memo[state][0]
        if total > len(self.best_prefix):
            self.best_prefix = prefix + self.follow(state)

    def _enter(self, state, prefix):
        """The memoized length for state, or None once it is opened"""
        hit = self.longest_memo.get(state)
        if hit is not None:
            if prefix is not None:
                if len(prefix) + hit[0] >= self.ceiling:
                    raise _Saturated(prefix + self.follow(state))
                self._record(prefix, state)
            return hit[0]

        if prefix is not None:
            if len(prefix) > len(self.best_prefix):
                self.best_prefix = prefix
            if len(prefix) >= self.ceiling:
                raise _Saturated(prefix)
        self.tick()
        return None

    def longest(self, state, prefix=None):
        """
        Length of the longest legal continuation of state; prefix, when
        given, is the sequence leading to state and feeds the lower bound
        reported if the budget runs out.
        """
        known = self._enter(state, prefix)
        if known is not None:
            return known

        # frame: state, prefix, remaining reps, best, best_x, x being opened
        stack = [[state, prefix, iter(self.reps), 0, None, None]]
        length = None
        while stack:
            frame = stack[-1]
            if length is not None:
                if length + 1 > frame[3]:
                    frame[3], frame[4] = length + 1, frame[5]
                length = None
            for x in frame[2]:
                nxt = self.step(frame[0], x)
                if nxt is None:
                    continue
                sub = None if frame[1] is None else frame[1] + (x,)
                known = self._enter(nxt, sub)
                if known is None:
                    frame[5] = x
                    stack.append([nxt, sub, iter(self.reps), 0, None, None])
                    break
                if known + 1 > frame[3]:
                    frame[3], frame[4] = known + 1, x
            else:
                stack.pop()
                self.longest_memo[frame[0]] = (frame[3], frame[4])
                length = frame[3]
        return length

    def count(self, state, remaining):
        """Number of legal continuations of exactly `remaining` terms"""
        if remaining == 0:
            return 1
        hit = self.count_memo.get((state, remaining))
        if hit is not None:
            return hit
        self.tick()

        # frame: state, remaining, remaining reps, total, x being opened
        stack = [[state, remaining, iter(self.reps), 0, None]]
        total = None
        while stack:
            frame = stack[-1]
            if total is not None:
                frame[3] += self.sizes[frame[4]] * total
                total = None
            left = frame[1] - 1
            for x in frame[2]:
                nxt = self.step(frame[0], x)
                if nxt is None or self.longest(nxt) < left:
                    continue
                known = 1 if left == 0 else self.count_memo.get((nxt, left))
                if known is None:
                    self.tick()
                    frame[4] = x
                    stack.append([nxt, left, iter(self.reps), 0, None])
                    break
                frame[3] += self.sizes[x] * known
            else:
                stack.pop()
                self.count_memo[(frame[0], frame[1])] = frame[3]
                total = frame[3]
        return total

    def walk(self, state, remaining, prefix, out):
        """Collects the orbit representatives of every legal continuation"""
        if remaining == 0:
            out.append(prefix)
            return
        self.tick()

        stack = [(state, remaining, prefix, iter(self.reps))]
        while stack:
            state, remaining, prefix, reps = stack[-1]
            for x in reps:
                nxt = self.step(state, x)
                if nxt is None or self.longest(nxt) < remaining - 1:
                    continue
                if remaining == 1:
                    out.append(prefix + (x,))
                    continue
                self.tick()
                stack.append((nxt, remaining - 1, prefix + (x,), iter(self.reps)))
                break
            else:
                stack.pop()


def _search_first_terms(weights, first_terms, max_nodes, deadline):
    """Runs the search below each candidate first term; picklable for workers"""
    search = _Search(weights, max_nodes=max_nodes, deadline=deadline)
    best, witness = 0, ()
    exhausted = False
    try:
        for x in first_terms:
            state = search.step((), x)
            if state is None:
                continue
            length = 1 + search.longest(state, (x,))
            candidate = (x,) + search.follow(state)
            if length > best or (length == best and candidate < witness):
                best, witness = length, candidate
    except _Saturated as e:
        best, witness = len(e.prefix), e.prefix
    except _OutOfBudget:
        exhausted = True
    return {
        'best': best,
        'witness': witness,
        'exhausted': exhausted,
        'nodes': search.nodes,
        'lower': search.best_prefix,
    }


def compute_constant(ctx, weights, max_nodes=None, max_seconds=None,
                     workers=1, count=False):
    """
    Computes C_A(n) = 1 + the length of the longest zero-window-free
    sequence by exhaustive search.

    The first term is restricted to one residue per U(n)-orbit and every
    later term to one residue per orbit of the weight stabilizer. If the
    budget runs out the report has status 'unknown' and a lower bound
    backed by its witness; a constant is never guessed.
    """
    ctx = as_context(ctx)
    _check_same_modulus(ctx.n, weights.modulus)
    started = time.perf_counter()
    deadline = None if max_seconds is None else time.time() + max_seconds
    first_terms = unit_orbit_reps(ctx)

    if workers > 1 and len(first_terms) > 1:
        chunks = [first_terms[i::workers] for i in range(workers)]
        chunks = [chunk for chunk in chunks if chunk]
        with ProcessPoolExecutor(max_workers=len(chunks)) as executor:
            futures = [
                executor.submit(_search_first_terms, weights, chunk,
                                max_nodes, deadline)
                for chunk in chunks
            ]
            results = [future.result() for future in futures]
    else:
        results = [_search_first_terms(weights, first_terms, max_nodes, deadline)]

    nodes = sum(r['nodes'] for r in results)
    elapsed = time.perf_counter() - started

    if any(r['exhausted'] for r in results):
        candidates = [r['lower'] if r['exhausted'] else r['witness']
                      for r in results]
        lower = min(candidates, key=lambda prefix: (-len(prefix), prefix))
        logger.debug('search budget exhausted for n=%d weights=%s after %d nodes',
                     ctx.n, weights.describe(), nodes)
        return SearchReport(ctx.n, weights, 'unknown', None, len(lower) + 1,
                            Seq(ctx.n, lower), nodes, elapsed)

    best, witness = 0, ()
    for r in results:
        if r['best'] > best or (r['best'] == best and r['witness'] < witness):
            best, witness = r['best'], r['witness']

    logger.debug('n=%d weights=%s: constant %d after %d nodes',
                 ctx.n, weights.describe(), best + 1, nodes)

    report = SearchReport(ctx.n, weights, 'exact', best + 1, best + 1,
                          Seq(ctx.n, witness), nodes, elapsed)
    if count:
        result = enumerate_extremal(ctx, weights, best + 1, count_only=True,
                                    max_nodes=max_nodes, max_seconds=max_seconds)
        if result.complete:
            report.extremal_count = result.count
            report.count_status = 'complete'
        else:
            logger.debug('count budget exhausted for n=%d weights=%s', ctx.n, weights.describe())
            report.count_status = 'incomplete'
        report.nodes_visited += result.nodes_visited
    return report


def _expand(reduced, rep_of, n):
    members = {}
    for y in range(n):
        members.setdefault(rep_of[y], []).append(y)
    for terms in reduced:
        for full in itertools.product(*[members[t] for t in terms]):
            yield full


def enumerate_extremal(ctx, weights, constant, up_to_equivalence=False,
                       count_only=False, max_nodes=None, max_seconds=None):
    """
    Lists (or counts) the zero-window-free sequences of length constant - 1.

    With up_to_equivalence the result holds one canonical representative per
    A-equivalence class. A spent budget gives complete=False together with
    whatever was found.
    """
    ctx = as_context(ctx)
    _check_same_modulus(ctx.n, weights.modulus)
    if constant < 1:
        raise ConzeroError('constant must be positive', ctx.n)
    length = constant - 1
    deadline = None if max_seconds is None else time.time() + max_seconds
    search = _Search(weights, max_nodes=max_nodes, deadline=deadline)

    if count_only and not up_to_equivalence:
        try:
            total = search.count((), length)
        except _OutOfBudget:
            return EnumerationResult(None, None, False, search.nodes)
        return EnumerationResult(None, total, True, search.nodes)

    reduced = []
    complete = True
    try:
        if length == 0:
            reduced.append(())
        else:
            search.walk((), length, (), reduced)
    except _OutOfBudget:
        complete = False

    if up_to_equivalence:
        from .decomposer import canonicalize
        classes = set()
        for terms in reduced:
            classes.add(canonicalize(Seq(ctx.n, terms), weights).canonical)
        sequences = sorted(classes)
    else:
        sequences = [Seq(ctx.n, terms)
                     for terms in sorted(_expand(reduced, search.rep_of, ctx.n))]

    if count_only:
        return EnumerationResult(None, len(sequences), complete, search.nodes)
    return EnumerationResult(sequences, len(sequences), complete, search.nodes)
