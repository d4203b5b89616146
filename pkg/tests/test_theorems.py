# -*- coding: utf-8 -*-
import pytest

from conzero.errors import DomainError
from conzero.theorems import CHECKS, register_check, verify_theorems


def test_empty_scope():
    assert verify_theorems(1) == {}
    assert verify_theorems(0) == {}


def test_small_scope_passes():
    report = verify_theorems(4)
    assert sorted(report) == [
        'coset-test',
        'cube-three-units-zero-sum',
        'equivalence-preserves-zero-sums',
        'nonzero-constant',
        'prefix-sum-characterization',
        'prefix-sum-constant',
        'prefix-sum-count',
        'quadratic-residue-constant',
        'two-coprime-terms-zero-sum',
        'unit-lift',
    ]
    for key, entry in report.items():
        assert entry == {'status': 'passed', 'failures': []}, key


def test_scope_twelve_passes():
    report = verify_theorems(12)
    assert 'units-constant' in report
    assert 'crt-locality' not in report
    assert [key for key, entry in report.items() if entry['status'] != 'passed'] == []


@pytest.mark.slow
def test_full_scope_passes():
    report = verify_theorems(105)
    assert set(report) == set(CHECKS)
    assert [key for key, entry in report.items() if entry['status'] != 'passed'] == []


def test_spent_budget_skips():
    report = verify_theorems(12, max_nodes=1)
    entry = report['prefix-sum-constant']
    assert entry['status'] == 'skipped'
    assert 'ran out of budget' in entry['failures'][0]
    assert report['unit-lift']['status'] == 'passed'


def test_register_check(monkeypatch):
    monkeypatch.setattr('conzero.theorems.CHECKS', dict(CHECKS))

    @register_check('always-fails', min_n=3)
    def always_fails(max_n, budget):
        return ['failure %d' % i for i in range(30)]

    @register_check('raises', min_n=3)
    def raises(max_n, budget):
        raise DomainError('out of range', max_n)

    assert verify_theorems(2).get('always-fails') is None

    report = verify_theorems(3)
    assert report['always-fails']['status'] == 'failed'
    assert len(report['always-fails']['failures']) == 20
    assert report['raises'] == {'status': 'failed', 'failures': ['out of range (mod 3)']}
