"""Feasibility: when does a scheme exist at all?

The whole decision comes down to the column sums of the conditional
matrix P_{Y|X} over supported states: a scheme exists if and only if no
column of side information is, summed over states, "claimed" more than
once.  Intuitively each signal must pair every state with a distinct
column, so column y can absorb at most total mass 1 across states.

The classic special case: X independent of Y with Y uniform over its m
supported values makes every conditional entry 1/m, so the condition
collapses to counting — feasible iff at most m supported states.  That
case is detected and reported alongside the general verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .construction import build_scheme
from .errors import InputError
from .model import (
    Instance,
    RationalLike,
    as_fraction,
    column_sums,
    conditional_y_given_x,
    instance_from_conditional,
    marginal_x,
    marginal_y,
    supp_x,
    supp_y,
)


@dataclass(frozen=True)
class ShannonCase:
    """Detection record for the independent-uniform special case."""

    independent: bool
    y_uniform: bool
    n: int
    m: int

    @property
    def applies(self) -> bool:
        return self.independent and self.y_uniform

    @property
    def feasible_by_count(self) -> bool:
        return self.n <= self.m


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict plus the exact column sums and the violating columns."""

    feasible: bool
    column_sums: tuple[Fraction, ...]
    violations: tuple[int, ...]
    shannon_case: ShannonCase


def shannon_reduce(inst: Instance) -> ShannonCase:
    """Detect whether the instance is the counting special case: X and Y
    independent and Y uniform on its support."""
    px = marginal_x(inst)
    py = marginal_y(inst)
    independent = all(
        inst.p_xy[i][j] == px[i] * py[j]
        for i in range(inst.n)
        for j in range(inst.m)
    )
    sy = supp_y(inst)
    uniform_mass = Fraction(1, len(sy))
    y_uniform = all(py[j] == uniform_mass for j in sy)
    return ShannonCase(
        independent=independent,
        y_uniform=y_uniform,
        n=len(supp_x(inst)),
        m=len(sy),
    )


def check_feasible(inst: Instance) -> FeasibilityReport:
    """Decide feasibility from the exact column sums of P_{Y|X}."""
    sums = column_sums(conditional_y_given_x(inst))
    violations = tuple(j for j, s in enumerate(sums) if s > 1)
    return FeasibilityReport(
        feasible=not violations,
        column_sums=sums,
        violations=violations,
        shannon_case=shannon_reduce(inst),
    )


def marginal_invariance_witness(
    inst: Instance, alt_px: Sequence[RationalLike]
) -> bool:
    """Demonstrate that the state marginal is irrelevant: rebuild the
    instance with a different P_X on the same support and the same
    P_{Y|X}, and report whether the feasibility verdict — and, when
    feasible, the constructed signals and weights — are unchanged.

    ``alt_px`` must be a distribution over all states that is positive
    exactly on the original support.
    """
    alt = [as_fraction(v) for v in alt_px]
    if len(alt) != inst.n:
        raise InputError(f"need {inst.n} state masses, got {len(alt)}")
    if any(v < 0 for v in alt):
        raise InputError("state masses must be nonnegative")
    if sum(alt, Fraction(0)) != 1:
        raise InputError(f"state masses sum to {sum(alt, Fraction(0))}, expected 1")
    supp = set(supp_x(inst))
    for i, v in enumerate(alt):
        if (i in supp) != (v > 0):
            raise InputError(
                "alternative state marginal must be positive exactly on the "
                "original support"
            )

    cm = conditional_y_given_x(inst)
    cond_rows = iter(cm.entries)
    full_conditional = [
        next(cond_rows) if i in supp else [Fraction(0)] * inst.m
        for i in range(inst.n)
    ]
    # Zero-mass rows pass an all-zero conditional, which the rebuild ignores.
    rebuilt = instance_from_conditional(
        alt, full_conditional, x_labels=inst.x_labels, y_labels=inst.y_labels
    )

    original = check_feasible(inst)
    other = check_feasible(rebuilt)
    if original.feasible != other.feasible:
        return False
    if not original.feasible:
        return True
    a = build_scheme(inst)
    b = build_scheme(rebuilt)
    return a.weights == b.weights and a.assignments == b.assignments
