"""Exhaustive and randomized scans, local search, and the tribes sweep."""

from __future__ import annotations

import math
import os
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cube import SetFamily, _low_masks
from .errors import ClassViolation, ResourceLimit
from .families import (
    EnumerationCursor,
    TribesParams,
    TribesStats,
    random_increasing,
    random_maximal_intersecting,
    tribes_closed_form,
    tribes_closed_form_exact,
    tribes_exact,
)
from .inequalities import REGISTRY, InequalityReport, evaluate

__all__ = [
    "SCAN_CLASSES",
    "OBJECTIVES",
    "ScanSpec",
    "ExtremalRecord",
    "scan",
    "class_members",
    "sample_family",
    "minimal_elements",
    "maximal_non_elements",
    "local_search",
    "tribes_sweep",
    "balance_tribe_count",
    "default_jobs",
]

SCAN_CLASSES = ("increasing", "decreasing", "increasing-intersecting", "maximal-intersecting",
                "balanced-increasing", "any")
OBJECTIVES = ("min-margin", "min-ratio")
_MAX_EXHAUSTIVE_N = {"any": 4}
_EXHAUSTIVE_LIMIT = 6


def default_jobs() -> int:
    """Worker count from ``HYPERCORR_JOBS``, defaulting to 1."""
    try:
        return max(1, int(os.environ.get("HYPERCORR_JOBS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def class_members(n: int, family_class: str) -> tuple[int, ...]:
    """Every family of a class as ascending bitsets."""
    if family_class not in SCAN_CLASSES:
        raise ValueError(f"unknown class {family_class!r}; expected one of {SCAN_CLASSES}")
    limit = _MAX_EXHAUSTIVE_N.get(family_class, _EXHAUSTIVE_LIMIT)
    if n > limit:
        raise ResourceLimit(f"class {family_class!r} is enumerable only for n <= {limit}")
    if family_class == "any":
        return tuple(range(1 << (1 << n)))
    if family_class == "balanced-increasing":
        half = 1 << n >> 1
        return tuple(b for b in class_members(n, "increasing") if b.bit_count() == half)
    return tuple(sorted(EnumerationCursor(n, family_class).bits()))


def _enumerable(n: int, family_class: str) -> bool:
    return n <= _MAX_EXHAUSTIVE_N.get(family_class, _EXHAUSTIVE_LIMIT)


def sample_family(n: int, family_class: str, rng: random.Random) -> SetFamily:
    """Draw one family of a class.

    For n <= 5 the draw is uniform over the enumerated class.  Above that it
    comes from generator models: random up-closures, random maximal
    intersecting families, and up-closures of subfamilies of those.
    """
    if family_class not in SCAN_CLASSES:
        raise ValueError(f"unknown class {family_class!r}")
    if family_class == "any":
        return SetFamily(n, rng.getrandbits(1 << n))
    if n <= 5:
        members = class_members(n, family_class)
        if not members:
            raise ClassViolation(f"class {family_class!r} is empty at n={n}")
        return SetFamily(n, rng.choice(members))
    seed = rng.getrandbits(64)
    if family_class == "increasing":
        return random_increasing(n, seed, k=rng.randint(1, 2 * n))
    if family_class == "decreasing":
        return random_increasing(n, seed, k=rng.randint(1, 2 * n)).complement()
    M = random_maximal_intersecting(n, seed)
    if family_class in ("maximal-intersecting", "balanced-increasing"):
        return M
    mins = minimal_elements(M)
    keep = [x for x in mins if rng.random() < 0.5]
    return SetFamily.up_closure(n, keep)


# --------------------------------------------------------------------------
# scans

@dataclass(frozen=True)
class ScanSpec:
    n: int
    a_class: str
    b_class: str | None
    checker: str
    objective: str = "min-margin"
    budget: int | None = None
    seed: int = 0
    params: tuple = ()
    jobs: int = 1

    def __post_init__(self):
        if self.checker not in REGISTRY:
            raise ValueError(f"unknown checker {self.checker!r}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        for c in (self.a_class, self.b_class):
            if c is not None and c not in SCAN_CLASSES:
                raise ValueError(f"unknown class {c!r}")
        if REGISTRY[self.checker].needs_b and self.b_class is None:
            raise ValueError(f"{self.checker} needs a B class")
        if isinstance(self.params, dict):
            object.__setattr__(self, "params", tuple(sorted(self.params.items())))
        if self.budget is None:
            for c in (self.a_class, self.b_class):
                if c is not None and not _enumerable(self.n, c):
                    raise ResourceLimit(f"exhaustive scan of {c!r} not possible at n={self.n}")

    @property
    def exhaustive(self) -> bool:
        return self.budget is None


@dataclass
class ExtremalRecord:
    checker: str
    objective: str
    best: object
    witness: tuple[SetFamily, SetFamily | None] | None
    report: InequalityReport | None
    examined: int
    vacuous: int = 0
    skipped: int = 0
    hard_failures: int = 0
    stats: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)


def _objective(rep: InequalityReport, objective: str):
    if objective == "min-margin":
        return rep.margin
    return rep.ratio


@dataclass
class _Partial:
    best: object = None
    key: tuple | None = None
    examined: int = 0
    vacuous: int = 0
    skipped: int = 0
    failures: int = 0
    ratios: list = field(default_factory=list)
    margins: list = field(default_factory=list)


def _scan_pairs(n, checker, objective, params, pairs) -> _Partial:
    acc = _Partial()
    cache: dict[int, SetFamily] = {}

    def fam(b):
        F = cache.get(b)
        if F is None:
            F = cache[b] = SetFamily(n, b)
        return F

    for a, b in pairs:
        A = fam(a)
        B = fam(b) if b is not None else None
        try:
            rep = evaluate(checker, A, B, params)
        except ClassViolation:
            acc.skipped += 1
            continue
        acc.examined += 1
        if rep.hard_failure:
            acc.failures += 1
        val = _objective(rep, objective)
        if val is None:
            acc.vacuous += 1
            continue
        if rep.ratio is not None:
            acc.ratios.append(rep.ratio)
        if rep.margin is not None:
            acc.margins.append(rep.margin)
        if acc.best is None or val < acc.best or (
                val == acc.best and _key_order((a, b)) < _key_order(acc.key)):
            acc.best, acc.key = val, (a, b)
    return acc


def _chunk_exhaustive(args):
    n, checker, objective, params, a_bits, b_bits = args
    if b_bits is None:
        pairs = ((a, None) for a in a_bits)
    else:
        pairs = ((a, b) for a in a_bits for b in b_bits)
    return _scan_pairs(n, checker, objective, params, pairs)


def _chunk_pairs(args):
    n, checker, objective, params, pairs = args
    return _scan_pairs(n, checker, objective, params, pairs)


def _merge(parts: Sequence[_Partial]) -> _Partial:
    out = _Partial()
    for p in parts:
        out.examined += p.examined
        out.vacuous += p.vacuous
        out.skipped += p.skipped
        out.failures += p.failures
        out.ratios.extend(p.ratios)
        out.margins.extend(p.margins)
        if p.best is None:
            continue
        # ties go to the lexicographically first witness in every mode
        if out.best is None or (p.best, _key_order(p.key)) < (out.best, _key_order(out.key)):
            out.best, out.key = p.best, p.key
    return out


def _key_order(key):
    a, b = key
    return (a, -1 if b is None else b)


def _run(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def scan(spec: ScanSpec) -> ExtremalRecord:
    """Minimize margin or ratio of one checker over pairs from two classes.

    Exhaustive scans visit pairs in lexicographic order of (A, B) bitsets;
    random scans draw ``budget`` pairs from a seeded generator.  Pairs whose
    class requirements fail are counted as skipped.  The result does not
    depend on ``jobs``.
    """
    n, params = spec.n, dict(spec.params)
    jobs = max(1, spec.jobs)
    if spec.exhaustive:
        a_bits = class_members(n, spec.a_class)
        b_bits = class_members(n, spec.b_class) if spec.b_class else None
        k = max(1, min(len(a_bits), 8 * jobs))
        step = -(-len(a_bits) // k)
        tasks = [(n, spec.checker, spec.objective, params, a_bits[i:i + step], b_bits)
                 for i in range(0, len(a_bits), step)]
        parts = _run(_chunk_exhaustive, tasks, jobs)
    else:
        rng = random.Random(spec.seed)
        pairs = []
        for _ in range(spec.budget):
            a = sample_family(n, spec.a_class, rng).bits
            b = sample_family(n, spec.b_class, rng).bits if spec.b_class else None
            pairs.append((a, b))
        k = max(1, min(len(pairs), 8 * jobs))
        step = max(1, -(-len(pairs) // k))
        tasks = [(n, spec.checker, spec.objective, params, pairs[i:i + step])
                 for i in range(0, len(pairs), step)]
        parts = _run(_chunk_pairs, tasks, jobs)
    acc = _merge(parts)
    witness = report = None
    if acc.key is not None:
        a, b = acc.key
        witness = (SetFamily(n, a), SetFamily(n, b) if b is not None else None)
        report = evaluate(spec.checker, witness[0], witness[1], params)
    stats = {}
    if acc.ratios:
        stats["min_ratio"] = min(acc.ratios)
        stats["median_ratio"] = statistics.median_low(sorted(acc.ratios))
    if acc.margins:
        stats["min_margin"] = min(acc.margins)
    return ExtremalRecord(spec.checker, spec.objective, acc.best, witness, report, acc.examined,
                          acc.vacuous, acc.skipped, acc.failures, stats)


# --------------------------------------------------------------------------
# local search

def minimal_elements(F: SetFamily) -> list[int]:
    """Members X of F with no member ``X - {i}``."""
    n, bits = F.n, F.bits
    covered = 0
    for k, low in enumerate(_low_masks(n)):
        covered |= (bits & low) << (1 << k)
    return SetFamily(n, bits & ~covered).masks()


def maximal_non_elements(F: SetFamily) -> list[int]:
    """Non-members X of F whose one-point extensions all lie in F."""
    n = F.n
    rest = F.complement().bits
    covered = 0
    for k, low in enumerate(_low_masks(n)):
        covered |= (rest >> (1 << k)) & low
    return SetFamily(n, rest & ~covered).masks()


def _moves(F: SetFamily) -> list[SetFamily]:
    out = [SetFamily(F.n, F.bits & ~(1 << x)) for x in minimal_elements(F)]
    out += [SetFamily(F.n, F.bits | (1 << x)) for x in maximal_non_elements(F)]
    return out


def local_search(start: tuple[SetFamily, SetFamily | None], checker: str,
                 objective: str = "min-margin", budget: int = 100, seed: int = 0,
                 params: dict | None = None, vary: str = "both") -> ExtremalRecord:
    """Greedy random descent over single-set moves that keep families increasing.

    A move removes a minimal member or adds a maximal non-member of A (or B).
    Moves leaving the checker's class, or giving a vacuous evaluation, are
    rejected; a move is accepted when the objective does not increase.
    ``budget`` counts proposed moves.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if vary not in ("A", "B", "both"):
        raise ValueError("vary must be 'A', 'B' or 'both'")
    A, B = start
    params = dict(params or {})
    rep = evaluate(checker, A, B, params)
    for F, name in ((A, "A"), (B, "B")):
        if F is not None and not F.is_increasing:
            raise ClassViolation(f"class violation: start {name} not increasing")
    val = _objective(rep, objective)
    if val is None:
        raise ClassViolation("start evaluation is vacuous for this objective")
    rng = random.Random(seed)
    trace = [val]
    examined = 1
    for _ in range(budget):
        sides = [s for s in ("A", "B") if vary in (s, "both") and (s == "A" or B is not None)]
        side = rng.choice(sides)
        moves = _moves(A if side == "A" else B)
        if not moves:
            trace.append(val)
            continue
        cand = rng.choice(moves)
        nA, nB = (cand, B) if side == "A" else (A, cand)
        try:
            nrep = evaluate(checker, nA, nB, params)
        except ClassViolation:
            trace.append(val)
            continue
        examined += 1
        nval = _objective(nrep, objective)
        if nval is not None and nval <= val:
            A, B, rep, val = nA, nB, nrep, nval
        trace.append(val)
    return ExtremalRecord(checker, objective, val, (A, B), rep, examined, trace=trace)


# --------------------------------------------------------------------------
# tribes

def balance_tribe_count(r: int) -> int:
    """The m bringing ``(1 - 2^-r)^m`` nearest 1/2, ties toward smaller m."""
    if r < 1:
        raise ValueError("tribe size must be positive")
    if r == 1:
        return 1
    x = math.log(2) / -math.log1p(-2.0 ** -r)
    best = None
    for m in range(max(1, math.floor(x) - 1), math.ceil(x) + 2):
        if r <= 16:
            d = abs((1 - Fraction(1, 1 << r)) ** m - Fraction(1, 2))
        else:
            d = abs(math.exp(m * math.log1p(-2.0 ** -r)) - 0.5)
        if best is None or d < best[0]:
            best = (d, m)
    return best[1]


def tribes_sweep(rows: Iterable[int | tuple[int, int]], mode: str = "closed-form") -> list[TribesStats]:
    """Tribes statistics for each tribe size r (m from :func:`balance_tribe_count`)
    or explicit ``(r, m)`` pair.

    ``mode="exact"`` brute-forces truth tables while ``r * m <= 24`` and uses
    the exact rational closed form beyond that.
    """
    if mode not in ("exact", "closed-form"):
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    for row in rows:
        r, m = row if isinstance(row, tuple) else (row, balance_tribe_count(row))
        p = TribesParams(r, m)
        if mode == "closed-form":
            out.append(tribes_closed_form(p))
        elif p.n <= 24:
            out.append(tribes_exact(p))
        else:
            out.append(tribes_closed_form_exact(p))
    return out
