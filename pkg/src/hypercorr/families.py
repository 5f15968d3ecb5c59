"""Named constructions, exhaustive enumerators, and tribes statistics."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .cube import (
    MAX_N,
    CubeFunction,
    SetFamily,
    correlation,
    dual,
    influences,
    popcounts,
)
from .errors import ClassViolation, ResourceLimit

__all__ = [
    "principal",
    "majority",
    "threshold",
    "TribesParams",
    "TribesStats",
    "tribes",
    "tribes_closed_form",
    "tribes_closed_form_exact",
    "tribes_exact",
    "tribe_size",
    "tribes_params_for_n",
    "FAMILY_CLASSES",
    "EnumerationCursor",
    "enumerate_families",
    "count_families",
    "random_increasing",
    "random_maximal_intersecting",
    "lift_pair",
]


def principal(n: int, i: int) -> SetFamily:
    """The dictator family ``{A : i in A}``."""
    if not 1 <= i <= n:
        raise ValueError(f"coordinate {i} outside [1, {n}]")
    h = 1 << (i - 1)
    return SetFamily.from_masks(n, (m for m in range(1 << n) if m & h))


def threshold(n: int, k: int) -> SetFamily:
    """``{A : |A| >= k}``; ``k = n + 1`` gives the empty family."""
    if not 0 <= k <= n + 1:
        raise ValueError(f"threshold {k} outside [0, {n + 1}]")
    pc = popcounts(n)
    return SetFamily.from_masks(n, np.flatnonzero(pc >= k).tolist())


def majority(n: int) -> SetFamily:
    if n % 2 == 0:
        raise ValueError("majority needs an odd number of coordinates")
    return threshold(n, (n + 1) // 2)


# --------------------------------------------------------------------------
# tribes

@dataclass(frozen=True)
class TribesParams:
    r: int
    m: int

    def __post_init__(self):
        if self.r < 1 or self.m < 1:
            raise ValueError("tribe size and tribe count must be positive")

    @property
    def n(self) -> int:
        return self.r * self.m


@dataclass(frozen=True)
class TribesStats:
    r: int
    m: int
    mode: str
    mu_A: object
    mu_B: object
    cor_AB: object
    influence_per_coord: object
    ratio_chvatal: object
    ratio_balanced: object

    def as_floats(self) -> dict:
        return {k: float(getattr(self, k)) for k in
                ("mu_A", "mu_B", "cor_AB", "influence_per_coord", "ratio_chvatal", "ratio_balanced")}


def tribes(params: TribesParams) -> tuple[SetFamily, SetFamily]:
    """Tribes family on consecutive blocks of size r, and its dual."""
    n = params.n
    if n > MAX_N:
        raise ResourceLimit(f"tribes truth table needs r*m <= {MAX_N}, got {n}")
    block = (1 << params.r) - 1
    A = SetFamily.up_closure(n, [block << (j * params.r) for j in range(params.m)])
    return A, dual(A)


def _ratios(cor, infl, mu_b):
    chv = cor / infl
    return chv, chv / (mu_b * (1 - mu_b))


def tribes_exact(params: TribesParams) -> TribesStats:
    """Statistics computed by brute force on the truth tables."""
    A, B = tribes(params)
    cor = correlation(A, B)
    infl = influences(A)
    if len(set(infl.entries)) != 1:
        raise AssertionError("tribes family should be regular")
    i0 = infl.entries[0]
    mu_b = B.measure()
    chv, bal = _ratios(cor.to_fraction(), i0.to_fraction(), mu_b.to_fraction())
    return TribesStats(params.r, params.m, "exact", A.measure(), mu_b, cor, i0, chv, bal)


def tribes_closed_form_exact(params: TribesParams) -> TribesStats:
    """The closed-form expressions evaluated in exact rational arithmetic."""
    r, m = params.r, params.m
    q = 1 - Fraction(1, 1 << r)
    mu_b = q ** m
    mu_a = 1 - mu_b
    shrink = (1 - Fraction(1, ((1 << r) - 1) ** 2)) ** m if r > 1 else Fraction(0)
    cor = -mu_b * mu_b * (shrink - 1)
    infl = Fraction(2, 1 << r) * q ** (m - 1)
    chv, bal = _ratios(cor, infl, mu_b)
    return TribesStats(r, m, "closed-form-exact", mu_a, mu_b, cor, infl, chv, bal)


def tribes_closed_form(params: TribesParams) -> TribesStats:
    """Closed-form statistics in floating point, for any r and m.

    Uses ``log1p``/``expm1`` so that large m (hundreds of tribes) stays accurate.
    """
    r, m = params.r, params.m
    mu_b = math.exp(m * math.log1p(-2.0 ** -r))
    mu_a = -math.expm1(m * math.log1p(-2.0 ** -r))
    if r > 1:
        shrink_minus_one = math.expm1(m * math.log1p(-1.0 / ((2.0 ** r - 1) ** 2)))
    else:
        shrink_minus_one = -1.0
    cor = -mu_b * mu_b * shrink_minus_one
    infl = 2.0 ** (1 - r) * math.exp((m - 1) * math.log1p(-2.0 ** -r))
    chv = cor / infl
    bal = chv / (mu_b * (1 - mu_b)) if 0 < mu_b < 1 else math.nan
    return TribesStats(r, m, "closed-form", mu_a, mu_b, cor, infl, chv, bal)


def tribe_size(n: int) -> int:
    """``floor(log2 n - log2 log2 n + log2 log2 e)``."""
    if n < 3:
        raise ValueError("tribe_size needs n >= 3")
    r = math.log2(n) - math.log2(math.log2(n)) + math.log2(math.log2(math.e))
    return max(1, math.floor(r))


def tribes_params_for_n(n: int) -> TribesParams:
    """Tribe size from :func:`tribe_size`, number of tribes ``round(n / r)``."""
    r = tribe_size(n)
    return TribesParams(r, max(1, round(n / r)))


# --------------------------------------------------------------------------
# enumeration

FAMILY_CLASSES = ("increasing", "decreasing", "increasing-intersecting", "maximal-intersecting")
_MAX_ENUM_N = 6


@lru_cache(maxsize=None)
def _monotone_table(n: int) -> tuple[int, ...]:
    """All increasing families on n points as sorted bitsets (n <= 5)."""
    if n == 0:
        return (0, 1)
    prev = _monotone_table(n - 1)
    h = 1 << (n - 1)
    arr = np.array(prev, dtype=np.uint64)
    out = []
    for f1 in prev:
        subs = arr[(arr & np.uint64(~f1 & ((1 << h) - 1))) == 0]
        out.extend(int(f0) | (f1 << h) for f0 in subs)
    return tuple(out)


def _increasing_bits(n: int, descending: bool = False) -> Iterator[int]:
    if n <= 5:
        table = _monotone_table(n)
        yield from (reversed(table) if descending else table)
        return
    prev = _monotone_table(n - 1)
    h = 1 << (n - 1)
    arr = np.array(prev, dtype=np.uint64)
    outer = reversed(prev) if descending else prev
    for f1 in outer:
        subs = arr[(arr & np.uint64(~f1 & ((1 << h) - 1))) == 0].tolist()
        if descending:
            subs.reverse()
        shifted = f1 << h
        for f0 in subs:
            yield f0 | shifted


@lru_cache(maxsize=None)
def _maximal_intersecting_bits(n: int) -> tuple[int, ...]:
    # F is increasing and antipodal on n points iff its half with element n
    # absent is an increasing intersecting family G on n-1 points; the other
    # half is then the dual of G.
    if n == 0:
        return ()
    out = []
    h = 1 << (n - 1)
    for g in _increasing_bits(n - 1):
        G = SetFamily(n - 1, g)
        if G.is_intersecting:
            out.append(g | (dual(G).bits << h))
    return tuple(sorted(out))


class EnumerationCursor:
    """Iterator over every family of one class, in ascending bitset order.

    ``position`` counts the families yielded so far.
    """

    def __init__(self, n: int, family_class: str):
        if family_class not in FAMILY_CLASSES:
            raise ValueError(f"unknown family class {family_class!r}; expected one of {FAMILY_CLASSES}")
        if n < 0 or n > _MAX_ENUM_N:
            raise ResourceLimit(f"enumeration is limited to n <= {_MAX_ENUM_N}, got {n}")
        self.n = n
        self.family_class = family_class
        self.position = 0
        self._it = self._bits()

    def _bits(self) -> Iterator[int]:
        n, cls = self.n, self.family_class
        full = (1 << (1 << n)) - 1
        if cls == "increasing":
            yield from _increasing_bits(n)
        elif cls == "decreasing":
            for b in _increasing_bits(n, descending=True):
                yield full ^ b
        elif cls == "maximal-intersecting":
            yield from _maximal_intersecting_bits(n)
        else:
            for b in _increasing_bits(n):
                if SetFamily(n, b).is_intersecting:
                    yield b

    def __iter__(self):
        return self

    def __next__(self) -> SetFamily:
        b = next(self._it)
        self.position += 1
        return SetFamily(self.n, b)

    def bits(self) -> Iterator[int]:
        """Raw bitsets, skipping SetFamily construction."""
        for b in self._it:
            self.position += 1
            yield b


def enumerate_families(n: int, family_class: str = "increasing") -> EnumerationCursor:
    return EnumerationCursor(n, family_class)


def count_families(n: int, family_class: str = "increasing") -> int:
    cur = EnumerationCursor(n, family_class)
    for _ in cur.bits():
        pass
    return cur.position


# --------------------------------------------------------------------------
# random families

def random_increasing(n: int, seed: int, model: str = "generators", *, k: int | None = None,
                      level: int | None = None, p: float = 0.5) -> SetFamily:
    """A random increasing family, deterministic in ``(n, seed, model, ...)``.

    ``model="generators"``: up-closure of ``k`` uniform random subsets
    (default ``k = n``).
    ``model="threshold"``: sets of size above ``level`` plus each set of
    size exactly ``level`` independently with probability ``p``, up-closed.
    """
    rng = random.Random(seed)
    if model == "generators":
        k = n if k is None else k
        gens = [rng.getrandbits(n) if n else 0 for _ in range(k)]
        return SetFamily.up_closure(n, gens)
    if model == "threshold":
        level = rng.randint(0, n) if level is None else level
        pc = popcounts(n).tolist()
        gens = [m for m in range(1 << n) if pc[m] > level or (pc[m] == level and rng.random() < p)]
        return SetFamily.up_closure(n, gens)
    raise ValueError(f"unknown model {model!r}")


def random_maximal_intersecting(n: int, seed: int) -> SetFamily:
    """A random increasing antipodal family, deterministic in ``(n, seed)``.

    Grows an increasing intersecting family by adding ``up(X)`` for a random
    X with neither X nor its complement present; such an X meets every
    member already present, so each step stays intersecting.
    """
    if n < 1:
        raise ValueError("maximal intersecting families need n >= 1")
    rng = random.Random(seed)
    full = (1 << n) - 1
    bits = 0
    while True:
        free = [x for x in range(1, 1 << n) if not (bits >> x & 1 or bits >> (full ^ x) & 1)]
        if not free:
            return SetFamily(n, bits)
        bits |= SetFamily.up_closure(n, [rng.choice(free)]).bits


# --------------------------------------------------------------------------
# lifting

def lift_pair(A: SetFamily, B: SetFamily) -> tuple[SetFamily, SetFamily, CubeFunction]:
    """Lift increasing A, B on ground set ``{2..n}`` to ``[n]``.

    Element j of the input cube becomes element j+1.  Returns
    ``A' = A | {S + 1 : S in A}``, ``B' = {S + 1 : S in B}`` and the
    antipodal {0, +-1}-valued f equal to 1 on B', 0 on the other sets
    containing 1, extended by ``f(X^c) = -f(X)``.
    """
    A._same(B)
    if not (A.is_increasing and B.is_increasing):
        raise ClassViolation("lift_pair requires increasing families")
    n = A.n + 1
    ia = A.indicator_array
    ib = B.indicator_array
    a_big = np.repeat(ia, 2)
    b_big = np.zeros(1 << n, dtype=np.int64)
    b_big[1::2] = ib
    f = np.zeros(1 << n, dtype=np.int64)
    f[1::2] = ib
    f[0::2] = -ib[::-1]
    A_lift = SetFamily.from_masks(n, np.flatnonzero(a_big).tolist())
    B_lift = SetFamily.from_masks(n, np.flatnonzero(b_big).tolist())
    return A_lift, B_lift, CubeFunction(n, f.tolist())

