"""JSON encodings for families, exact rationals and reports.

A family file holds ``n`` and exactly one of

* ``family``: list of subsets, each a list of 1-based elements;
* ``generators`` with ``closure`` set to ``"up"`` or ``"down"``;
* ``tt``: hex string of the 2^n-bit membership bitset, bit m set iff the
  subset with mask m belongs (mask bit i-1 stands for element i).  The hex
  digits read as one integer, most significant digit first, zero padded to
  ``ceil(2^n / 4)`` digits.

Rationals are written as ``{"num": "3", "den_pow2": 5, "float": 0.09375}``
when the denominator is a power of two and ``{"num": ..., "den": ...}``
otherwise.  The float is a rendering only.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .cube import SetFamily, set_to_mask
from .dyadic import Dyadic

__all__ = [
    "rational_to_json",
    "rational_from_json",
    "family_to_json",
    "family_from_json",
    "load_family",
    "load_families",
    "to_jsonable",
    "dumps",
]

FAMILY_ENCODINGS = ("family", "generators", "tt")


def rational_to_json(x) -> dict:
    q = x.to_fraction() if isinstance(x, Dyadic) else Fraction(x)
    den = q.denominator
    out: dict[str, Any] = {"num": str(q.numerator)}
    if den & (den - 1) == 0:
        out["den_pow2"] = den.bit_length() - 1
    else:
        out["den"] = str(den)
    out["float"] = float(q)
    return out


def rational_from_json(obj: dict) -> Fraction:
    num = int(obj["num"])
    if "den_pow2" in obj:
        return Fraction(num, 1 << int(obj["den_pow2"]))
    return Fraction(num, int(obj.get("den", 1)))


def family_to_json(F: SetFamily, encoding: str = "tt") -> dict:
    """Encode F; ``generators`` stores its minimal members with ``closure: "up"``
    (F must then be increasing)."""
    if encoding == "tt":
        return {"n": F.n, "tt": F.hex()}
    if encoding == "family":
        return {"n": F.n, "family": [list(s) for s in F.to_sets()]}
    if encoding == "generators":
        if not F.is_increasing:
            raise ValueError("generator encoding needs an increasing family")
        from .search import minimal_elements

        gens = SetFamily.from_masks(F.n, minimal_elements(F))
        return {"n": F.n, "generators": [list(s) for s in gens.to_sets()], "closure": "up"}
    raise ValueError(f"unknown encoding {encoding!r}")


def _parse_sets(n: int, sets) -> list[int]:
    out = []
    for s in sets:
        if not isinstance(s, list):
            raise ValueError("each subset must be a list of elements")
        for e in s:
            if not isinstance(e, int) or isinstance(e, bool) or not 1 <= e <= n:
                raise ValueError(f"element {e!r} outside [1, {n}]")
        out.append(set_to_mask(s))
    return out


def family_from_json(obj: dict) -> SetFamily:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError("family file must be an object with key 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError("n must be a nonnegative integer")
    present = [k for k in FAMILY_ENCODINGS if k in obj]
    if len(present) != 1:
        raise ValueError(f"family file needs exactly one of {FAMILY_ENCODINGS}, got {present}")
    key = present[0]
    if key == "family":
        return SetFamily.from_masks(n, _parse_sets(n, obj["family"]))
    if key == "generators":
        gens = _parse_sets(n, obj["generators"])
        closure = obj.get("closure")
        if closure == "up":
            return SetFamily.up_closure(n, gens)
        if closure == "down":
            return SetFamily.down_closure(n, gens)
        raise ValueError("generators need closure 'up' or 'down'")
    tt = obj["tt"]
    width = max(1, ((1 << n) + 3) // 4)
    if not isinstance(tt, str) or len(tt) != width:
        raise ValueError(f"tt must be a hex string of {width} digits for n={n}")
    bits = int(tt, 16)
    if bits >> (1 << n):
        raise ValueError("tt has bits beyond 2^n")
    return SetFamily(n, bits)


def load_family(path: str | Path) -> SetFamily:
    with open(path) as fh:
        return family_from_json(json.load(fh))


def load_families(path: str | Path) -> list[SetFamily]:
    """A list of family objects, or an object with key ``families`` holding one."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("families")
    if not isinstance(data, list):
        raise ValueError("expected a list of families")
    return [family_from_json(x) for x in data]


def to_jsonable(obj) -> Any:
    """Recursively convert results into JSON-ready values."""
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (Fraction, Dyadic)):
        return rational_to_json(obj)
    if isinstance(obj, float):
        # non-finite values (vacuous ratios) are rendered as strings
        return {"float": obj if math.isfinite(obj) else str(obj)}
    if isinstance(obj, SetFamily):
        return {**family_to_json(obj, "tt"), "digest": obj.digest()}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.repr or f.name == "weights"}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
