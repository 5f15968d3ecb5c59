"""Brute-force reference implementations, written from the definitions.

Families are Python sets of frozensets of 1-based elements; nothing here
touches the package's bitset code.
"""

from fractions import Fraction
from itertools import combinations


def points(n):
    return [frozenset(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]


def to_sets(F):
    return {frozenset(s) for s in F.to_sets()}


def measure(n, fam):
    return Fraction(len(fam), 2 ** n)


def correlation(n, A, B):
    return measure(n, A & B) - measure(n, A) * measure(n, B)


def fourier(n, f):
    """f maps frozenset -> number; returns {frozenset S: f^(S)}."""
    pts = points(n)
    return {S: sum((Fraction(f[T]) * (-1) ** len(S & T) for T in pts), Fraction(0)) / 2 ** n
            for S in pts}


def indicator(n, fam):
    return {T: int(T in fam) for T in points(n)}


def influence(n, fam, k):
    boundary = sum(1 for T in fam if T ^ {k} not in fam)
    return Fraction(2 * boundary, 2 ** n)


def is_increasing(n, fam):
    return all(T | {i} in fam for T in fam for i in range(1, n + 1))


def is_decreasing(n, fam):
    return all(T - {i} in fam for T in fam for i in range(1, n + 1))


def is_intersecting(fam):
    return all(a & b for a in fam for b in fam)


def complement(n, T):
    return frozenset(range(1, n + 1)) - T


def dual(n, fam):
    return {T for T in points(n) if complement(n, T) not in fam}


def is_antipodal(n, fam):
    return all((T in fam) != (complement(n, T) in fam) for T in points(n))


def up_closure(n, gens):
    return {T for T in points(n) if any(g <= T for g in gens)}


def max_intersecting_subfamily(fam):
    """Largest intersecting subfamily by exhaustive search (small inputs only)."""
    items = sorted(fam, key=sorted)
    best = 0
    for mask in range(1 << len(items)):
        chosen = [items[i] for i in range(len(items)) if mask >> i & 1]
        if len(chosen) > best and is_intersecting(chosen):
            best = len(chosen)
    return best
