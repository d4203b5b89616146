# -*- coding: utf-8 -*-
import pytest

from conzero import __version__
from conzero.__main__ import EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from conzero.compat import json

RECIPE_75 = '\n'.join([
    '(units n=75 p=3 x=38',
    '  (units n=25 p=5 x=4 (units n=5 seq=2) (units n=5 seq=4))',
    '  (units n=25 p=5 x=21 (units n=5 seq=2) (units n=5 seq=4)))',
])


def _run(capsys, *args):
    with pytest.raises(SystemExit) as e:
        main(list(args))
    out = capsys.readouterr().out
    return e.value.code, out


def _run_json(capsys, *args):
    code, out = _run(capsys, *args)
    return code, json.loads(out)


def test_constant(capsys, tmpdir):
    cache = tmpdir.join('c.jsonl').strpath
    code, payload = _run_json(capsys, 'constant', '--n', '15', '--weights', 'units',
                              '--cache', cache)
    assert code == EXIT_OK
    assert payload['command'] == 'constant'
    assert payload['inputs'] == {'n': 15, 'weights': 'units'}
    assert payload['provenance'] == {'paper_statement_checked': 'units-constant', 'version': __version__}
    result = payload['result']
    assert result['status'] == 'exact'
    assert result['constant'] == 4
    assert len(result['witness']) == 3
    assert 'elapsed' in payload['timing']


def test_constant_cache_hit_is_byte_identical(capsys, tmpdir):
    cache = tmpdir.join('c.jsonl').strpath
    args = ('constant', '--n', '9', '--cache', cache, '--no-timing')
    code1, out1 = _run(capsys, *args)
    code2, out2 = _run(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    assert 'timing' not in json.loads(out1)
    assert len(tmpdir.join('c.jsonl').readlines()) == 1


def test_constant_with_count(capsys):
    code, payload = _run_json(capsys, 'constant', '--n', '4', '--weights', 'one', '--count',
                              '--no-timing')
    assert code == EXIT_OK
    assert payload['result']['constant'] == 4
    assert payload['result']['extremal_count'] == 6
    assert payload['result']['count_status'] == 'complete'


def test_constant_construct(capsys):
    code, payload = _run_json(capsys, 'constant', '--n', '75', '--construct', '--no-timing')
    assert code == EXIT_OK
    result = payload['result']
    assert result['status'] == 'asserted'
    assert result['constant'] == 8
    assert len(result['witness']) == 7

    code, payload = _run_json(capsys, 'constant', '--n', '12', '--construct', '--no-timing')
    assert code == EXIT_FAILED
    assert payload['result']['error']['type'] == 'DomainError'


def test_constant_budget(capsys):
    code, payload = _run_json(capsys, 'constant', '--n', '12', '--max-nodes', '1',
                              '--no-cache', '--no-timing')
    assert code == EXIT_BUDGET
    result = payload['result']
    assert result['status'] == 'unknown'
    assert result['lower_bound'] == len(result['witness']) + 1


def test_constant_deep_search_reports_budget(capsys):
    code, payload = _run_json(capsys, 'constant', '--n', '1100', '--weights', 'one',
                              '--max-seconds', '1', '--no-cache', '--no-timing')
    assert code == EXIT_BUDGET
    result = payload['result']
    assert result['status'] == 'unknown'
    assert result['lower_bound'] == len(result['witness']) + 1


def test_check(capsys):
    code, payload = _run_json(capsys, 'check', '--n', '25', '--seq', '10,4,20', '--no-timing')
    assert code == EXIT_OK
    assert payload['result'] == {
        'sequence': [10, 4, 20],
        'length': 3,
        'zero_window': None,
        'zero_window_free': True,
        'extremal': True,
        'constant': 4,
    }

    code, payload = _run_json(capsys, 'check', '--n', '25', '--seq', '10,5,20', '--no-timing')
    assert payload['result']['zero_window'] == [0, 1]
    assert payload['result']['extremal'] is False


def test_check_file(capsys, tmpdir):
    path = tmpdir.join('seqs.txt')
    path.write('# units over Z_25\n10,4,20\n\n10,21,20  # second\n1,1\n')
    code, payload = _run_json(capsys, 'check', '--n', '25', '--file', path.strpath, '--no-timing')
    assert code == EXIT_OK
    results = payload['result']['sequences']
    assert [r['extremal'] for r in results] == [True, True, False]
    assert payload['inputs']['sequences'] == ['10,4,20', '10,21,20', '1,1']


def test_enumerate(capsys):
    code, payload = _run_json(capsys, 'enumerate', '--n', '4', '--weights', 'one',
                              '--count-only', '--no-timing')
    assert code == EXIT_OK
    assert payload['result'] == {'complete': True, 'constant': 4, 'count': 6,
                                 'up_to_equivalence': False}
    assert payload['provenance']['paper_statement_checked'] == 'prefix-sum-count'

    code, payload = _run_json(capsys, 'enumerate', '--n', '7', '--weights', 'units^3',
                              '--equivalence', '--no-timing')
    assert payload['result']['sequences'] == [[1, 3, 1]]


def test_construct(capsys, tmpdir):
    code, payload = _run_json(capsys, 'construct', '--n', '95', '-f', 'units^3', '--show-recipe',
                              '--no-timing')
    assert code == EXIT_OK
    assert payload['result']['length'] == 5
    assert payload['result']['recipe'].startswith('(units^3 n=95 p=5')
    assert payload['provenance']['paper_statement_checked'] == 'cubes-characterization'

    recipe = tmpdir.join('r.txt')
    recipe.write(RECIPE_75)
    code, payload = _run_json(capsys, 'construct', '--n', '75', '--recipe', recipe.strpath,
                              '--no-timing')
    assert code == EXIT_OK
    assert payload['result']['sequence'] == [30, 12, 60, 38, 30, 63, 60]

    code, payload = _run_json(capsys, 'construct', '--n', '25', '--recipe', recipe.strpath,
                              '--no-timing')
    assert code == EXIT_FAILED
    assert payload['result']['error']['type'] == 'ModulusError'


def test_construct_with_seed_is_deterministic(capsys):
    args = ('construct', '--n', '77', '-f', 'units^2', '--seed', '5', '--no-timing')
    assert _run(capsys, *args) == _run(capsys, *args)


def test_decompose(capsys):
    code, payload = _run_json(capsys, 'decompose', '--n', '25', '-f', 'units^2',
                              '--seq', '20,10,21,5,15,12,15,20', '--no-strict', '--show-recipe',
                              '--no-timing')
    assert code == EXIT_OK
    cert = payload['result']['certificate']
    assert cert['p'] == 5
    assert cert['middle_positions'] == [3, 6]
    assert cert['connector_check']['images'] == [1, 2]
    assert payload['inputs']['strict'] is False

    code, payload = _run_json(capsys, 'decompose', '--n', '25', '-f', 'units^2',
                              '--seq', '20,10,21,5,15,12,15,20', '--no-timing')
    assert code == EXIT_FAILED
    assert payload['result']['error']['type'] == 'DomainError'


def test_decompose_shape(capsys):
    code, payload = _run_json(capsys, 'decompose', '--n', '15', '--seq', '3,1,3', '--shape',
                              '--no-timing')
    assert code == EXIT_OK
    assert payload['result']['shape']['form'] == 'units-2'
    assert payload['result']['certificate']['middle_positions'] == [2]


def test_canon(capsys):
    code, payload = _run_json(capsys, 'canon', '--n', '7', '--weights', 'units^3',
                              '--seq', '2,6,2', '--no-timing')
    assert code == EXIT_OK
    assert payload['result'] == {'sequence': [2, 6, 2], 'canonical': [1, 3, 1], 'orbit_size': 24}


def test_verify_theorems(capsys):
    code, payload = _run_json(capsys, 'verify-theorems', '--max-n', '4', '--no-timing')
    assert code == EXIT_OK
    assert payload['result']['failed'] == []
    assert payload['result']['checks']['unit-lift']['status'] == 'passed'


def test_output_file_and_indent(capsys, tmpdir):
    out = tmpdir.join('out.json')
    code, stdout = _run(capsys, 'canon', '--n', '7', '--weights', 'units^3', '--seq', '2,6,2',
                        '--no-timing', '-o', out.strpath, '-i', '4')
    assert code == EXIT_OK
    assert stdout == ''
    text = out.read()
    assert text.startswith('{\n    "command": "canon"')
    assert json.loads(text)['result']['canonical'] == [1, 3, 1]


@pytest.mark.parametrize('args', [
    ['constant'],
    ['constant', '--n', '0'],
    ['constant', '--n', '7', '--weights', 'units^0'],
    ['constant', '--n', '7', '--max-nodes', '0'],
    ['check', '--n', '7', '--seq', '1,x'],
    ['check', '--n', '7', '--seq', '9'],
    ['check', '--n', '7'],
    ['decompose', '--n', '7', '-f', 'squares', '--seq', '1'],
    ['help', 'nothing'],
    [],
])
def test_usage_errors(capsys, args):
    code, __ = _run(capsys, *args)
    assert code == EXIT_USAGE


def test_help(capsys):
    code, out = _run(capsys, 'help', 'decompose')
    assert code == EXIT_OK
    assert out.startswith('usage: conzero decompose')
