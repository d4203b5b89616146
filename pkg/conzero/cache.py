# -*- coding: utf-8 -*-
"""
Append-only cache of computed constants, one JSON object per line.

Every entry carries its witness; lookup() re-checks that the witness is a
zero-window-free sequence of length constant - 1 before serving it, and a
line that cannot be read only invalidates itself.
"""
import io
import logging
import os
import time
from collections import namedtuple

from . import __version__
from .compat import json, dumps_canonical
from .engine import Seq, has_zero_window
from .errors import ConzeroError

logger = logging.getLogger(__name__)

ENV_VAR = 'CONZERO_CACHE'
DEFAULT_PATH = os.path.join('~', '.cache', 'conzero', 'constants.jsonl')

CacheEntry = namedtuple('CacheEntry', [
    'key', 'n', 'weights', 'constant', 'witness', 'timestamp', 'version'
])


def cache_key(n, weights):
    return '%d:%s' % (n, weights.describe())


def default_path():
    path = os.environ.get(ENV_VAR) or DEFAULT_PATH
    return os.path.expanduser(path)


class ConstantCache(object):

    def __init__(self, path=None):
        self.path = default_path() if path is None else path

    def __repr__(self):
        return 'ConstantCache(%r)' % self.path

    def entries(self):
        """Yields every readable entry in file order"""
        if not os.path.exists(self.path):
            return

        with io.open(self.path, 'r', encoding='utf-8') as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    entry = CacheEntry(**record)
                except (ValueError, TypeError) as e:
                    logger.warning('skipping malformed cache line %d in %s: %s',
                                   lineno, self.path, e)
                    continue
                yield entry

    def _verified(self, entry, weights):
        if isinstance(entry.constant, bool) or not isinstance(entry.constant, int):
            logger.warning('cached constant for %s is not an integer: %r',
                           entry.key, entry.constant)
            return False
        try:
            witness = Seq(entry.n, entry.witness)
        except (ConzeroError, TypeError, ValueError) as e:
            logger.warning('cached witness for %s is unreadable: %s', entry.key, e)
            return False
        expected = entry.constant - 1
        if len(witness) != expected:
            logger.warning('cached witness for %s has length %d, expected %d',
                           entry.key, len(witness), expected)
            return False
        if has_zero_window(witness, weights) is not None:
            logger.warning('cached witness for %s has a zero window', entry.key)
            return False
        return True

    def lookup(self, n, weights):
        """The most recent verified entry for (n, weights), or None"""
        key = cache_key(n, weights)
        found = None
        for entry in self.entries():
            if entry.key == key and self._verified(entry, weights):
                found = entry

        logger.info('cache %s for %s', 'hit' if found else 'miss', key)
        return found

    def store(self, report):
        """Appends an exact SearchReport"""
        if not report.exact:
            raise ConzeroError('only exact constants are cached', report.n)

        entry = CacheEntry(
            key=cache_key(report.n, report.weights),
            n=report.n,
            weights=report.weights.describe(),
            constant=report.constant,
            witness=list(report.witness.terms),
            timestamp=int(time.time()),
            version=__version__
        )

        dirname = os.path.dirname(self.path)
        if dirname and not os.path.isdir(dirname):
            os.makedirs(dirname)
        with io.open(self.path, 'a', encoding='utf-8') as f:
            f.write(dumps_canonical(entry._asdict()) + u'\n')

        logger.info('cached C_A(n) = %d for %s', entry.constant, entry.key)
        return entry
