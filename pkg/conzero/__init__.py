# -*- coding: utf-8 -*-
__title__ = 'conzero'
__summary__ = 'Weighted zero-sum constants over Z_n: search, constructions and certificates.'
__url__ = 'https://github.com/conzero/conzero'

__version__ = '0.1.0'

__author__ = 'conzero contributors'
__email__ = 'conzero@users.noreply.github.com'

__license__ = 'Apache 2.0'
__copyright__ = 'Copyright 2026 conzero contributors'

from .ring import ZnContext, WeightSet, units, units_pow, parse_weights
from .engine import (
    Seq, window_reach, has_zero_window, is_extremal, compute_constant,
    enumerate_extremal, known_constant
)
from .builder import build_recipe, greedy_recipe, random_extremal
from .recipe import Recipe, parse_recipe, format_recipe
from .decomposer import Certificate, decompose, canonicalize, validate_shape
from .theorems import verify_theorems

__all__ = [
    'ZnContext', 'WeightSet', 'units', 'units_pow', 'parse_weights', 'Seq',
    'window_reach', 'has_zero_window', 'is_extremal', 'compute_constant',
    'enumerate_extremal', 'known_constant', 'build_recipe', 'greedy_recipe',
    'random_extremal', 'Recipe', 'parse_recipe', 'format_recipe',
    'Certificate', 'decompose', 'canonicalize', 'validate_shape',
    'verify_theorems',
]
