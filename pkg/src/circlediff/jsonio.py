"""JSON text for series, diffeomorphisms, fields and reports.

Floats are written with 17 significant digits, keys sorted, so equal inputs
give byte-identical files and every double survives the decimal round trip.
"""

import json

import numpy as np


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _Float17(float(v))
    return v


class _Float17(float):
    def __repr__(self):
        return format(float(self), ".17g")


class _Encoder(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        # the C encoder ignores float subclasses' repr; the Python one honours it
        return json.encoder._make_iterencode(
            {}, self.default, json.encoder.py_encode_basestring_ascii, self.indent,
            lambda f: repr(f) if isinstance(f, _Float17) else float.__repr__(f),
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def dumps(obj):
    """Deterministic JSON text with 17-significant-digit floats."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True, cls=_Encoder, allow_nan=False) + "\n"


def loads(text):
    return json.loads(text)
