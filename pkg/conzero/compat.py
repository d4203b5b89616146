# -*- coding: utf-8 -*-
try:
    import simplejson as json
except ImportError:
    import json

__all__ = ['json', 'dumps_canonical']


def dumps_canonical(obj, indent=None):
    """Serializes with sorted keys so equal payloads give equal bytes"""
    kwargs = {'indent': indent, 'sort_keys': True}
    if indent is None:
        kwargs['separators'] = ',', ':'
    return json.dumps(obj, **kwargs)
