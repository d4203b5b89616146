# -*- coding: utf-8 -*-
"""
Build recipes and their textual form.

A recipe is a tree of records; each record is written

    ( family key=value ... child-record ... )

with the keys n (modulus), p (the structural prime), x (the connector
terms, comma separated) and seq (the sequence of a base case). '#' starts a
comment that runs to the end of the line. For example

    (units n=75 p=3 x=38
      (units n=25 p=5 x=4
        (units n=5 seq=2)
        (units n=5 seq=4))
      (units n=25 p=5 x=21
        (units n=5 seq=2)
        (units n=5 seq=4)))
"""
from .errors import RecipeSyntaxError

FAMILIES = ('one', 'units', 'units^2', 'units^3')
KEYS = ('n', 'p', 'x', 'seq')


class Recipe(object):
    """One level of a recursive construction"""

    __slots__ = ('family', 'n', 'p', 'children', 'connectors', 'leaf')

    def __init__(self, family, n, p=None, children=(), connectors=(), leaf=None):
        self.family = family
        self.n = n
        self.p = p
        self.children = tuple(children)
        self.connectors = tuple(connectors)
        self.leaf = None if leaf is None else tuple(leaf)

    @property
    def is_leaf(self):
        return self.leaf is not None

    def __repr__(self):
        return 'Recipe(%s)' % format_recipe(self, indent=None)

    def __eq__(self, other):
        return isinstance(other, Recipe) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(format_recipe(self, indent=None))

    def to_dict(self):
        if self.is_leaf:
            return {'family': self.family, 'n': self.n, 'seq': list(self.leaf)}
        return {
            'family': self.family,
            'n': self.n,
            'p': self.p,
            'x': list(self.connectors),
            'children': [child.to_dict() for child in self.children],
        }


def _lex(text):
    """Generates (token, lineno) pairs from recipe text"""
    token = ''
    token_line = 1
    line = 1
    chars = iter(text)
    for char in chars:
        if char == '#':
            if token:
                yield (token, token_line)
                token = ''
            for char in chars:
                if char == '\n':
                    break
            line += 1
            continue

        if char.isspace() or char in ('(', ')'):
            if token:
                yield (token, token_line)
                token = ''
            if char in ('(', ')'):
                yield (char, line)
            elif char == '\n':
                line += 1
            continue

        if not token:
            token_line = line
        token += char

    if token:
        yield (token, token_line)


def _balance_parens(tokens):
    """Raises syntax errors if parentheses aren't balanced"""
    depth = 0
    line = 1

    for token, line in tokens:
        if token == ')':
            depth -= 1
        elif token == '(':
            depth += 1

        if depth < 0:
            raise RecipeSyntaxError('unexpected ")"', line)
        yield (token, line)

    if depth > 0:
        raise RecipeSyntaxError('unexpected end of recipe, expecting ")"', line)


def _parse_ints(key, value, line):
    if value == '':
        return []
    try:
        return [int(v) for v in value.split(',')]
    except ValueError:
        raise RecipeSyntaxError('%s=%s is not a list of integers' % (key, value), line)


def _parse_record(tokens, lineno):
    try:
        family, line = next(tokens)
    except StopIteration:
        raise RecipeSyntaxError('unexpected end of recipe', lineno)

    if family not in FAMILIES:
        raise RecipeSyntaxError('unknown family %r' % family, line)

    fields = {}
    children = []
    for token, line in tokens:
        if token == ')':
            break
        elif token == '(':
            children.append(_parse_record(tokens, line))
            continue

        key, sep, value = token.partition('=')
        if not sep or key not in KEYS:
            raise RecipeSyntaxError('unexpected %r' % token, line)
        if key in fields:
            raise RecipeSyntaxError('duplicate key %r' % key, line)
        fields[key] = _parse_ints(key, value, line)

    if 'n' not in fields or len(fields['n']) != 1:
        raise RecipeSyntaxError('record needs exactly one n', lineno)
    n = fields['n'][0]

    if 'seq' in fields:
        if children or 'p' in fields or 'x' in fields:
            raise RecipeSyntaxError('a seq record takes no p, x or children', lineno)
        return Recipe(family, n, leaf=fields['seq'])

    if 'p' not in fields or len(fields['p']) != 1:
        raise RecipeSyntaxError('record needs exactly one p', lineno)
    if not fields.get('x'):
        raise RecipeSyntaxError('record needs connector terms x', lineno)
    return Recipe(family, n, p=fields['p'][0], children=children,
                  connectors=fields['x'])


def parse_recipe(text):
    """Parses the textual form of a recipe"""
    tokens = _balance_parens(_lex(text))
    try:
        token, line = next(tokens)
    except StopIteration:
        raise RecipeSyntaxError('empty recipe')
    if token != '(':
        raise RecipeSyntaxError('expected "(" but found %r' % token, line)

    recipe = _parse_record(tokens, line)

    for token, line in tokens:
        raise RecipeSyntaxError('unexpected %r after the recipe' % token, line)
    return recipe


def _head(recipe):
    words = [recipe.family, 'n=%d' % recipe.n]
    if recipe.is_leaf:
        words.append('seq=' + ','.join(str(t) for t in recipe.leaf))
    else:
        words.append('p=%d' % recipe.p)
        words.append('x=' + ','.join(str(x) for x in recipe.connectors))
    return '(' + ' '.join(words)


def format_recipe(recipe, indent=2):
    """Returns the canonical text of a recipe; indent=None puts it on one line"""
    if indent is None:
        parts = [_head(recipe)]
        parts.extend(format_recipe(child, None) for child in recipe.children)
        return ' '.join(parts) + ')'

    padding = ' ' * indent

    def _format(output, recipe, depth):
        margin = padding * depth
        output += ('\n' if output else '') + margin + _head(recipe)
        for child in recipe.children:
            output = _format(output, child, depth + 1)
        return output + ')'

    return _format('', recipe, 0)
