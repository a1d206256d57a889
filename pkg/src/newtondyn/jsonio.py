"""JSON conventions: complex numbers as [re, im], infinity as the string "inf"."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from importlib import resources

import numpy as np
import sympy as sp


def cnum(z):
    if z is None:
        return None
    if isinstance(z, str):
        return z
    if isinstance(z, sp.Basic):
        if z in (sp.zoo, sp.oo):
            return "inf"
        z = complex(z)
    z = complex(z)
    if math.isinf(abs(z)):
        return "inf"
    return [float(z.real), float(z.imag)]


def parse_cnum(v):
    if v == "inf":
        return complex(math.inf, 0)
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return cnum(o)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, sp.Basic):
        return str(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(obj, **kw):
    return json.dumps(obj, default=_default, indent=2, sort_keys=False, **kw)


def load_schema(name):
    text = resources.files("newtondyn").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


def validate(obj, name):
    import jsonschema

    jsonschema.validate(json.loads(dumps(obj)), load_schema(name))
