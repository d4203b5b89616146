#!/usr/bin/env python
# -*- coding: utf-8 -*-
import io
import logging
import random
import sys
import time
from argparse import ArgumentParser, ArgumentTypeError, RawDescriptionHelpFormatter

from . import __version__
from .builder import (
    build_recipe, check_family_modulus, family_constant, greedy_recipe,
    random_recipe
)
from .cache import ConstantCache
from .compat import dumps_canonical
from .decomposer import (
    canonicalize, decompose as decompose_sequence, recipe_from_certificate,
    validate_shape
)
from .engine import (
    Seq, compute_constant, enumerate_extremal, has_zero_window, is_extremal,
    known_constant
)
from .errors import (
    BudgetExhausted, ConzeroError, DomainError, InternalConsistencyError,
    ModulusError, WeightError
)
from .recipe import FAMILIES, format_recipe, parse_recipe
from .ring import as_context, parse_weights
from .theorems import verify_theorems as run_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BUDGET = 2
EXIT_USAGE = 64

# the family a weight set belongs to, keyed by its command line spelling
WEIGHT_FAMILIES = {'one': 'one', 'units': 'units', 'units^2': 'units^2', 'units^3': 'units^3'}

CHARACTERIZATIONS = {
    'one': 'prefix-sum-characterization',
    'units': 'units-characterization',
    'units^2': 'squares-characterization',
    'units^3': 'cubes-characterization',
}


def _dump_payload(obj, fp, indent):
    fp.write(dumps_canonical(obj, indent=indent) + u'\n')


def _budget(job):
    return {'max_nodes': job.max_nodes, 'max_seconds': job.max_seconds}


def _cache(job):
    if job.no_cache:
        return None
    return ConstantCache(job.cache)


def _constant_for(job):
    """C_A(n) for the job's weights: closed form, then cache, then search"""
    ctx, weights = job.ctx, job.weight_set
    constant, statement = known_constant(ctx, weights)
    if constant is not None:
        return constant, statement

    store = _cache(job)
    entry = store.lookup(ctx.n, weights) if store is not None else None
    if entry is not None:
        job.timing['cache'] = 'hit'
        return entry.constant, None

    report = compute_constant(ctx, weights, workers=job.workers, **_budget(job))
    job.timing['nodes_visited'] = report.nodes_visited
    if not report.exact:
        raise BudgetExhausted('search budget exhausted before C_A(n) was known',
                              ctx.n, partial={'witness': list(report.witness.terms)},
                              lower_bound=report.lower_bound)
    if store is not None:
        store.store(report)
    return report.constant, None


def _asserted_constant(job, closed):
    """Skips the search: builds an extremal sequence and asserts the closed form"""
    ctx, weights = job.ctx, job.weight_set
    family = WEIGHT_FAMILIES.get(weights.describe())
    if family is None or closed is None:
        raise DomainError('no closed form and construction for A = %s'
                          % weights.describe(), ctx.n)

    check_family_modulus(family, ctx)
    seq = build_recipe(greedy_recipe(family, ctx))
    if not is_extremal(seq, weights, closed):
        raise InternalConsistencyError('constructed %s is not extremal' % seq, ctx.n)
    return {
        'n': ctx.n,
        'weights': weights.describe(),
        'status': 'asserted',
        'constant': closed,
        'lower_bound': len(seq) + 1,
        'witness': list(seq.terms),
        'extremal_count': None,
        'count_status': None,
    }


def constant(job):
    ctx, weights = job.ctx, job.weight_set
    job.inputs = {'n': ctx.n, 'weights': weights.describe()}
    closed, statement = known_constant(ctx, weights)

    if job.construct:
        return _asserted_constant(job, closed), statement

    store = None if job.count else _cache(job)
    entry = store.lookup(ctx.n, weights) if store is not None else None
    if entry is not None:
        job.timing['cache'] = 'hit'
        result = {
            'n': ctx.n,
            'weights': weights.describe(),
            'status': 'exact',
            'constant': entry.constant,
            'lower_bound': entry.constant,
            'witness': entry.witness,
            'extremal_count': None,
            'count_status': None,
        }
        return result, statement

    report = compute_constant(ctx, weights, workers=job.workers, count=job.count,
                              **_budget(job))
    result = report.to_dict()
    job.timing['nodes_visited'] = result.pop('nodes_visited')

    if not report.exact:
        raise BudgetExhausted('search budget exhausted', ctx.n, partial=result,
                              lower_bound=report.lower_bound)
    if closed is not None and closed != report.constant:
        raise InternalConsistencyError('search found C_A(n) = %d but the closed form gives %d'
                                       % (report.constant, closed), ctx.n)
    if store is not None:
        store.store(report)
    return result, statement


def _check_one(seq, weights, constant):
    window = has_zero_window(seq, weights)
    return {
        'sequence': list(seq.terms),
        'length': len(seq),
        'zero_window': None if window is None else list(window),
        'zero_window_free': window is None,
        'extremal': window is None and len(seq) == constant - 1,
    }


def _sequence_inputs(job):
    inputs = {'n': job.ctx.n}
    if job.file is None:
        inputs['sequence'] = str(job.sequences[0])
    else:
        inputs['sequences'] = [str(seq) for seq in job.sequences]
    return inputs


def check(job):
    job.inputs = _sequence_inputs(job)
    job.inputs['weights'] = job.weight_set.describe()
    value, statement = _constant_for(job)

    results = [_check_one(seq, job.weight_set, value) for seq in job.sequences]
    if job.file is None:
        result = results[0]
    else:
        result = {'sequences': results}
    result['constant'] = value
    return result, statement


def enumerate_(job):
    ctx, weights = job.ctx, job.weight_set
    job.inputs = {'n': ctx.n, 'weights': weights.describe()}
    value, statement = _constant_for(job)

    found = enumerate_extremal(ctx, weights, value,
                               up_to_equivalence=job.equivalence,
                               count_only=job.count_only, **_budget(job))
    job.timing['nodes_visited'] = found.nodes_visited
    result = {
        'constant': value,
        'count': found.count,
        'complete': found.complete,
        'up_to_equivalence': job.equivalence,
    }
    if not job.count_only:
        result['sequences'] = [list(seq.terms) for seq in found.sequences]

    if not found.complete:
        raise BudgetExhausted('enumeration budget exhausted', ctx.n, partial=result)
    if weights.describe() == 'one':
        statement = 'prefix-sum-count'
    return result, statement


def construct(job):
    ctx, family = job.ctx, job.family
    job.inputs = {'n': ctx.n, 'family': family, 'seed': job.seed}

    if job.recipe is not None:
        with io.open(job.recipe, 'r', encoding='utf-8') as f:
            recipe = parse_recipe(f.read())
        if recipe.n != ctx.n:
            raise ModulusError('recipe is for mod %d' % recipe.n, ctx.n)
        if recipe.family != family:
            raise WeightError('recipe is for family %s' % recipe.family, ctx.n)
        job.inputs['recipe'] = format_recipe(recipe, indent=None)
    elif job.seed is not None:
        recipe = random_recipe(family, ctx, random.Random(job.seed))
    else:
        recipe = greedy_recipe(family, ctx)

    seq = build_recipe(recipe)
    value = family_constant(family, ctx.n)
    if not is_extremal(seq, job.weight_set, value):
        raise InternalConsistencyError('built %s is not extremal' % seq, ctx.n)

    result = {
        'sequence': list(seq.terms),
        'length': len(seq),
        'constant': value,
        'extremal': True,
    }
    if job.show_recipe:
        result['recipe'] = format_recipe(recipe)
    return result, CHARACTERIZATIONS[family]


def decompose(job):
    ctx, family = job.ctx, job.family
    job.inputs = _sequence_inputs(job)
    job.inputs.update(family=family, strict=job.strict)

    results = []
    for seq in job.sequences:
        cert = decompose_sequence(seq, family, ctx, strict=job.strict)
        cert.validate(seq)
        item = {'sequence': list(seq.terms), 'certificate': cert.to_dict()}
        if job.show_recipe:
            item['recipe'] = format_recipe(recipe_from_certificate(cert, seq))
        if job.shape:
            item['shape'] = validate_shape(seq, family, ctx)
        results.append(item)

    result = results[0] if job.file is None else {'sequences': results}
    return result, CHARACTERIZATIONS[family]


def canon(job):
    job.inputs = _sequence_inputs(job)
    job.inputs['weights'] = job.weight_set.describe()

    results = []
    for seq in job.sequences:
        equiv = canonicalize(seq, job.weight_set)
        results.append({
            'sequence': list(seq.terms),
            'canonical': list(equiv.canonical.terms),
            'orbit_size': equiv.orbit_size,
        })

    result = results[0] if job.file is None else {'sequences': results}
    return result, 'equivalence-preserves-extremality'


def verify_theorems(job):
    job.inputs = {'max_n': job.max_n}
    report = run_checks(job.max_n, **_budget(job))
    failed = [key for key, entry in sorted(report.items()) if entry['status'] == 'failed']
    if failed:
        job.status = EXIT_FAILED
    return {'checks': report, 'failed': failed}, None


def run(job):
    """Runs one parsed job; returns (exit status, JSON document)"""
    job.inputs = {}
    job.timing = {}
    job.status = EXIT_OK
    statement = None
    started = time.perf_counter()

    try:
        result, statement = job._subcommand(job)
    except BudgetExhausted as e:
        job.status = EXIT_BUDGET
        result = dict(e.partial or {})
        result.update(status='unknown', error=str(e))
        if e.lower_bound is not None:
            result['lower_bound'] = e.lower_bound
    except ConzeroError as e:
        job.status = EXIT_FAILED
        result = {'error': {'type': type(e).__name__, 'message': str(e)}}
    except (IOError, OSError) as e:
        job.status = EXIT_FAILED
        result = {'error': {'type': type(e).__name__, 'message': str(e)}}

    payload = {
        'command': job.command,
        'inputs': job.inputs,
        'result': result,
        'provenance': {'paper_statement_checked': statement, 'version': __version__},
    }
    if not job.no_timing:
        timing = dict(job.timing)
        timing['elapsed'] = round(time.perf_counter() - started, 6)
        payload['timing'] = timing
    return job.status, payload


class _ArgumentParser(ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


class _SubparserHelpFormatter(RawDescriptionHelpFormatter):
    def _format_action(self, action):
        line = super(RawDescriptionHelpFormatter, self)._format_action(action)

        if action.nargs == 'A...':
            line = line.split('\n', 1)[-1]

        if line.startswith('    ') and line[4] != ' ':
            parts = filter(len, line.lstrip().partition(' '))
            line = '  ' + ' '.join(parts)

        return line


def _positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise ArgumentTypeError('%r is not an integer' % value)
    if number < 1:
        raise ArgumentTypeError('%r is not positive' % value)
    return number


def _positive_float(value):
    try:
        number = float(value)
    except ValueError:
        raise ArgumentTypeError('%r is not a number' % value)
    if number <= 0:
        raise ArgumentTypeError('%r is not positive' % value)
    return number


def _read_sequences(path, n):
    """One sequence per line; '#' starts a comment"""
    sequences = []
    with io.open(path, 'r', encoding='utf-8') as f:
        for line in f:
            line = line.split('#', 1)[0].strip()
            if line:
                sequences.append(Seq.parse(line, n))
    if not sequences:
        raise ConzeroError('%s holds no sequences' % path)
    return sequences


def _resolve(parser, job):
    """Turns the raw flags into a context, weights and sequences"""
    try:
        if getattr(job, 'n', None) is not None:
            job.ctx = as_context(job.n)
        if getattr(job, 'family', None) is not None:
            job.weights = job.family
        if getattr(job, 'weights', None) is not None:
            job.weight_set = parse_weights(job.weights, job.ctx)
        if getattr(job, 'seq', None) is not None:
            job.sequences = [Seq.parse(job.seq, job.ctx)]
        elif getattr(job, 'file', None) is not None:
            job.sequences = _read_sequences(job.file, job.ctx)
    except ConzeroError as e:
        parser.error(str(e))
    except (IOError, OSError) as e:
        parser.error('cannot read %s: %s' % (job.file, e))


def parse_args(args=None):
    parser = _ArgumentParser(
        formatter_class=_SubparserHelpFormatter,
        description='weighted zero-sum constants and extremal sequences over Z_n',
        usage='%(prog)s <command> [options]'
    )
    parser.add_argument('-V', '--version', action='version', version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(title='commands')

    def create_subparser(function, help, name=None):
        name = name or function.__name__
        prog = 'conzero ' + name
        p = subparsers.add_parser(name, prog=prog, help=help, description=help)
        p.set_defaults(_subcommand=function, command=name)
        p.add_argument('-o', '--out', type=str, help='write output to a file')
        p.add_argument('-i', '--indent', type=int, metavar='NUM', help='number of spaces to indent output')
        p.add_argument('-v', '--verbose', action='store_true', help='log progress to stderr')
        p.add_argument('--no-timing', action='store_true', help='leave out the timing block')
        return p

    def add_modulus(p):
        p.add_argument('--n', type=int, required=True, help='the modulus')

    def add_weights(p):
        p.add_argument('--weights', default='units', metavar='WEIGHTS',
                       help='one, units, units^J, nonzero or set:a,b,... (default: units)')

    def add_family(p):
        p.add_argument('-f', '--family', choices=FAMILIES, default='units',
                       help='weight family (default: units)')

    def add_sequences(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument('--seq', metavar='X1,X2,...', help='comma separated residues')
        g.add_argument('--file', metavar='PATH', help='file with one sequence per line')

    def add_budget(p):
        p.add_argument('--max-nodes', type=_positive_int, metavar='NUM', help='search node budget')
        p.add_argument('--max-seconds', type=_positive_float, metavar='SECS', help='search time budget')

    def add_cache(p):
        p.add_argument('--workers', type=_positive_int, default=1, metavar='NUM',
                       help='worker processes for the search')
        p.add_argument('--cache', metavar='PATH', help='constants cache (default: $CONZERO_CACHE)')
        p.add_argument('--no-cache', action='store_true', help='neither read nor write the cache')

    p = create_subparser(constant, 'computes C_A(n) by exhaustive search')
    add_modulus(p)
    add_weights(p)
    add_budget(p)
    add_cache(p)
    p.add_argument('--count', action='store_true', help='also count the extremal sequences')
    p.add_argument('--construct', action='store_true',
                   help='skip the search; verify a constructed extremal sequence against the closed form')

    p = create_subparser(check, 'checks sequences for zero windows and extremality')
    add_modulus(p)
    add_weights(p)
    add_sequences(p)
    add_budget(p)
    add_cache(p)

    p = create_subparser(enumerate_, 'lists or counts the extremal sequences', name='enumerate')
    add_modulus(p)
    add_weights(p)
    add_budget(p)
    add_cache(p)
    p.add_argument('--equivalence', action='store_true', help='one sequence per equivalence class')
    p.add_argument('--count-only', action='store_true', help='only count the sequences')

    p = create_subparser(construct, 'builds an extremal sequence')
    add_modulus(p)
    add_family(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument('--recipe', metavar='FILE', help='build from a recipe file')
    g.add_argument('--seed', type=int, help='build from a random recipe')
    p.add_argument('--show-recipe', action='store_true', help='include the recipe in the output')

    p = create_subparser(decompose, 'certifies the structure of extremal sequences')
    add_modulus(p)
    add_family(p)
    add_sequences(p)
    p.add_argument('--no-strict', action='store_false', dest='strict',
                   help='only check the structure, not the regime or extremality')
    p.add_argument('--shape', action='store_true', help='also match the closed forms')
    p.add_argument('--show-recipe', action='store_true', help='include a recipe that rebuilds each sequence')

    p = create_subparser(canon, 'finds the canonical member of equivalence classes')
    add_modulus(p)
    add_weights(p)
    add_sequences(p)

    p = create_subparser(verify_theorems, 'runs the statement checks up to a bound on n',
                         name='verify-theorems')
    p.add_argument('--max-n', type=int, required=True, metavar='N', help='largest modulus to check')
    add_budget(p)

    def help(job):
        command = job.topic
        if command not in parser._actions[-1].choices:
            parser.error('unknown command %r' % command)
        else:
            parser._actions[-1].choices[command].print_help()
        sys.exit(EXIT_OK)

    p = create_subparser(help, 'show help for commands')
    p.add_argument('topic', metavar='command', help='command to show help for')

    parsed = parser.parse_args(args=args)

    # this addresses a bug that was added to argparse in Python 3.3
    if not parsed.__dict__:
        parser.error('too few arguments')

    _resolve(parser, parsed)
    return parsed


def main(args=None):
    job = parse_args(args)
    if job.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr,
                            format='%(levelname)s %(name)s: %(message)s')

    status, payload = run(job)

    o = sys.stdout if job.out is None else io.open(job.out, 'w', encoding='utf-8')
    try:
        _dump_payload(payload, o, indent=job.indent)
    finally:
        if o is not sys.stdout:
            o.close()
    sys.exit(status)


if __name__ == '__main__':
    main()
