"""Exact rational simplex (phase I only) with Bland's anti-cycling rule."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def find_feasible(rows: Sequence[tuple[Sequence, str, object]], num_vars: int) -> list[Fraction] | None:
    """Find ``x >= 0`` satisfying every ``(coeffs, sense, rhs)`` row, or return None.

    ``sense`` is one of ``">="``, ``"<="``, ``"=="``.  All arithmetic is in
    :class:`~fractions.Fraction`, so the verdict is exact.
    """
    m = len(rows)
    slack_cols = {}
    ncols = num_vars
    for r, (_, sense, _) in enumerate(rows):
        if sense not in (">=", "<=", "=="):
            raise ValueError(f"bad constraint sense {sense!r}")
        if sense != "==":
            slack_cols[r] = ncols
            ncols += 1
    art0 = ncols
    ncols += m

    T: list[list[Fraction]] = []
    for r, (coeffs, sense, rhs) in enumerate(rows):
        if len(coeffs) != num_vars:
            raise ValueError("coefficient row has the wrong length")
        row = [Fraction(c) for c in coeffs] + [Fraction(0)] * (ncols - num_vars) + [Fraction(rhs)]
        if sense == ">=":
            row[slack_cols[r]] = Fraction(-1)
        elif sense == "<=":
            row[slack_cols[r]] = Fraction(1)
        if row[-1] < 0:
            row = [-v for v in row]
        row[art0 + r] = Fraction(1)
        T.append(row)
    basis = [art0 + r for r in range(m)]

    # reduced costs of the phase-I objective (sum of artificials)
    z = [Fraction(0)] * (ncols + 1)
    for row in T:
        for j in range(ncols + 1):
            if j < art0 or j == ncols:
                z[j] -= row[j]

    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        for r, row in enumerate(T):
            a = row[enter]
            if a > 0:
                key = (row[-1] / a, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:  # unbounded direction; cannot happen in phase I
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [v / piv for v in T[r]]
        for i, row in enumerate(T):
            if i != r and row[enter] != 0:
                c = row[enter]
                T[i] = [a - c * b for a, b in zip(row, T[r])]
        c = z[enter]
        z = [a - c * b for a, b in zip(z, T[r])]
        basis[r] = enter

    if -z[-1] != 0:
        return None
    x = [Fraction(0)] * num_vars
    for r, b in enumerate(basis):
        if b < num_vars:
            x[b] = T[r][-1]
    return x
