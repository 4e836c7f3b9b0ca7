"""Canonical JSON for reports and certificates.

Rationals become ``{"num": "p", "den": "q"}`` with decimal strings, never
floats; keys are sorted and separators fixed so identical inputs give
byte-identical output.  Floats are only written under keys that start with
``display``.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from gmpy2 import mpz

from .hypercube import MultiPoly, SymProfile
from .polycore import UniPoly


def rat(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def unrat(obj) -> Fraction:
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        den = int(obj["den"])
        if den <= 0:
            raise ValueError("denominator must be positive")
        return Fraction(int(obj["num"]), den)
    raise ValueError(f"not a rational: {obj!r}")


def uni(p: UniPoly) -> list:
    return [rat(c) for c in p.coeffs]


def ununi(obj) -> UniPoly:
    return UniPoly([unrat(c) for c in obj])


def multi(p: MultiPoly) -> dict:
    return {"n": p.n, "terms": [[list(e), rat(c)] for e, c in sorted(p.items())]}


def unmulti(obj) -> MultiPoly:
    return MultiPoly(int(obj["n"]), [(tuple(e), unrat(c)) for e, c in obj["terms"]])


def jsonable(obj, key: str = ""):
    """Convert module outputs to plain JSON values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, type(mpz(0))):
        return str(obj)
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, float):
        if not key.startswith("display"):
            raise TypeError(f"float outside a display field: {key}")
        return obj
    if isinstance(obj, UniPoly):
        return uni(obj)
    if isinstance(obj, MultiPoly):
        return multi(obj)
    if isinstance(obj, SymProfile):
        return {"n": obj.n, "values": [rat(v) for v in obj.values]}
    if isinstance(obj, dict):
        return {str(k): jsonable(v, str(k) if not key.startswith("display") else key) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, key) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v, key) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name), f.name) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(result) -> bytes:
    """Canonical bytes: sorted keys, fixed separators, trailing newline."""
    text = json.dumps(jsonable(result), sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return (text + "\n").encode("ascii")


def load(data: bytes | str):
    return json.loads(data)
