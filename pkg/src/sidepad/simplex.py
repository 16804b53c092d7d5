"""Exact phase-1 simplex over rationals.

Decides whether ``A x = b`` has a nonnegative solution and returns one.
Minimizes the sum of artificial variables with Bland's smallest-index
pivoting rule, which rules out cycling, so termination is unconditional;
all arithmetic is :class:`fractions.Fraction`, so the verdict is exact.

This backs the brute-force feasibility oracle, which must stay
structurally independent of the constructive pipeline it cross-checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError, InternalInvariantError


def feasible_nonnegative_solution(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Optional[tuple[Fraction, ...]]:
    """Return x >= 0 with ``rows @ x == rhs`` exactly, or None if none exists."""
    n_rows = len(rows)
    if n_rows != len(rhs):
        raise InputError("one right-hand side per row")
    n_vars = len(rows[0]) if n_rows else 0
    if any(len(r) != n_vars for r in rows):
        raise InputError("ragged constraint matrix")
    if n_rows == 0:
        return ()

    # Tableau: real columns, artificial identity, rhs; flip rows to b >= 0.
    tableau: list[list[Fraction]] = []
    for r in range(n_rows):
        sign = -1 if rhs[r] < 0 else 1
        row = [sign * Fraction(v) for v in rows[r]]
        row += [Fraction(0)] * n_rows
        row[n_vars + r] = Fraction(1)
        row.append(sign * Fraction(rhs[r]))
        tableau.append(row)
    basis = [n_vars + r for r in range(n_rows)]
    width = n_vars + n_rows

    # Reduced costs for minimizing the artificial sum: objective row holds
    # c_j - c_B.col_j; the last cell tracks minus the objective value.
    obj = [Fraction(0)] * (width + 1)
    for j in range(n_vars):
        obj[j] = -sum((tableau[r][j] for r in range(n_rows)), Fraction(0))
    obj[width] = -sum((tableau[r][width] for r in range(n_rows)), Fraction(0))

    while True:
        entering = next((j for j in range(width) if obj[j] < 0), None)
        if entering is None:
            break
        pivot_row = None
        best = None
        for r in range(n_rows):
            coeff = tableau[r][entering]
            if coeff > 0:
                ratio = tableau[r][width] / coeff
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[r] < basis[pivot_row])
                ):
                    best = ratio
                    pivot_row = r
        if pivot_row is None:
            raise InternalInvariantError("phase-1 objective unbounded")
        pivot = tableau[pivot_row][entering]
        tableau[pivot_row] = [v / pivot for v in tableau[pivot_row]]
        for r in range(n_rows):
            if r != pivot_row and tableau[r][entering] != 0:
                factor = tableau[r][entering]
                tableau[r] = [
                    v - factor * pv for v, pv in zip(tableau[r], tableau[pivot_row])
                ]
        if obj[entering] != 0:
            factor = obj[entering]
            obj = [v - factor * pv for v, pv in zip(obj, tableau[pivot_row])]
        basis[pivot_row] = entering

    if obj[width] != 0:
        return None

    solution = [Fraction(0)] * n_vars
    for r, var in enumerate(basis):
        if var < n_vars:
            solution[var] = tableau[r][width]
    for r in range(n_rows):
        total = sum(
            (Fraction(rows[r][j]) * solution[j] for j in range(n_vars)), Fraction(0)
        )
        if total != rhs[r]:
            raise InternalInvariantError("phase-1 solution fails its constraints")
    return tuple(solution)
