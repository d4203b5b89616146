# -*- coding: utf-8 -*-
import logging

import pytest

import conzero
from conzero.cache import ENV_VAR, ConstantCache, cache_key, default_path
from conzero.compat import json
from conzero.engine import SearchReport, Seq
from conzero.errors import ConzeroError
from conzero.ring import units_pow


def _report(n=15, constant=4, witness=(3, 1, 3), status='exact'):
    weights = units_pow(n, 1)
    return SearchReport(n, weights, status, constant, constant, Seq(n, witness), 10, 0.01)


def _write_line(path, **record):
    base = {'key': '15:units', 'n': 15, 'weights': 'units', 'constant': 4,
            'witness': [3, 1, 3], 'timestamp': 0, 'version': '0.0.0'}
    base.update(record)
    with open(path, 'a') as f:
        f.write(json.dumps(base) + '\n')


def test_cache_key():
    assert cache_key(15, units_pow(15, 1)) == '15:units'
    assert cache_key(7, units_pow(7, 3)) == '7:units^3'


def test_store_and_lookup(tmpdir):
    path = tmpdir.join('nested', 'constants.jsonl').strpath
    cache = ConstantCache(path)
    assert cache.lookup(15, units_pow(15, 1)) is None

    entry = cache.store(_report())
    assert entry.key == '15:units'
    assert entry.version == conzero.__version__
    assert tmpdir.join('nested').check(dir=1)

    found = cache.lookup(15, units_pow(15, 1))
    assert found.constant == 4
    assert found.witness == [3, 1, 3]
    assert cache.lookup(21, units_pow(21, 1)) is None
    assert len(list(cache.entries())) == 1


def test_store_rejects_unknown_constants(tmpdir):
    cache = ConstantCache(tmpdir.join('c.jsonl').strpath)
    with pytest.raises(ConzeroError):
        cache.store(_report(status='unknown'))
    assert not tmpdir.join('c.jsonl').check()


def test_lookup_prefers_the_last_entry(tmpdir):
    path = tmpdir.join('c.jsonl').strpath
    _write_line(path, witness=[3, 1, 3])
    _write_line(path, witness=[5, 1, 5])
    assert ConstantCache(path).lookup(15, units_pow(15, 1)).witness == [5, 1, 5]


def test_malformed_lines_are_skipped(tmpdir, caplog):
    path = tmpdir.join('c.jsonl').strpath
    with open(path, 'w') as f:
        f.write('not json\n\n{"key": "15:units"}\n')
    _write_line(path)

    with caplog.at_level(logging.WARNING, logger='conzero.cache'):
        found = ConstantCache(path).lookup(15, units_pow(15, 1))
    assert found.constant == 4
    assert 'skipping malformed cache line 1' in caplog.text
    assert 'skipping malformed cache line 3' in caplog.text


@pytest.mark.parametrize('record', [
    {'witness': [3, 3, 3]},
    {'witness': [3, 1]},
    {'witness': [3, 1, 30]},
    {'constant': 'four'},
    {'constant': None},
    {'constant': '4'},
    {'constant': '5'},
    {'constant': 4.0},
    {'constant': True},
])
def test_unverified_witnesses_are_rejected(tmpdir, record):
    path = tmpdir.join('c.jsonl').strpath
    _write_line(path, **record)
    assert ConstantCache(path).lookup(15, units_pow(15, 1)) is None


def test_default_path_from_environment(tmpdir, monkeypatch):
    path = tmpdir.join('env.jsonl').strpath
    monkeypatch.setenv(ENV_VAR, path)
    assert default_path() == path
    assert ConstantCache().path == path

    monkeypatch.delenv(ENV_VAR)
    assert default_path().endswith('constants.jsonl')
    assert '~' not in default_path()


def test_string_constant_invalidates_only_its_line(tmpdir, caplog):
    path = tmpdir.join('c.jsonl').strpath
    _write_line(path)
    _write_line(path, constant='5')

    with caplog.at_level(logging.WARNING, logger='conzero.cache'):
        found = ConstantCache(path).lookup(15, units_pow(15, 1))
    assert found.constant == 4
    assert "cached constant for 15:units is not an integer: '5'" in caplog.text
