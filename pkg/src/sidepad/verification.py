"""Exact verification of schemes.

A scheme together with an instance determines the joint distribution

    Q(x_i, y_j, z_k) = weight_k * px_i * [assignments[k][i] == j]

over real state rows i (padding rows carry no mass).  Verification
recomputes every marginal from that joint by enumeration — never from the
construction's intermediate values — and checks the three defining laws
exactly:

* consistency: Q_XY equals the instance's P_XY cell by cell;
* informativeness: whenever Q_YZ(y,z) > 0, exactly one state is possible,
  so the receiver decodes with certainty;
* secrecy: Q_XZ(x,z) == Q_Z(z) * P_X(x), i.e. the public signal alone
  carries nothing about the state.

``necessity_audit`` additionally recomputes the quantities that make a
verified scheme *certify* the column condition: the triple bound
Q_XYZ <= Q_XZ, disjointness across states of the signal sets
phi(x,y) = { z : Q(x,y,z) > 0 } for fixed y, and the per-column signal
mass sums they force to stay at or below one.

``feasibility_oracle`` answers "does any scheme exist?" by brute force —
an exact phase-1 simplex over weights on all m! permutations — sharing no
code with the constructive pipeline, so the two can cross-check each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .construction import Scheme
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    UnverifiedSchemeError,
)
from .model import Instance, conditional_y_given_x, supp_x
from .simplex import feasible_nonnegative_solution

Witness = dict[str, object]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one law: ``ok`` plus the first counterexample found
    (row-major scan order), or None when the law holds."""

    ok: bool
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class VerificationReport:
    consistency: CheckResult
    informativeness: CheckResult
    secrecy: CheckResult
    q_z: tuple[Fraction, ...]
    q_xz: tuple[tuple[Fraction, ...], ...]
    q_yz: tuple[tuple[Fraction, ...], ...]
    q_xy: tuple[tuple[Fraction, ...], ...]

    @property
    def all_ok(self) -> bool:
        return self.consistency.ok and self.informativeness.ok and self.secrecy.ok


def _q_xy(scheme: Scheme) -> tuple[tuple[Fraction, ...], ...]:
    grid = [[Fraction(0)] * scheme.m for _ in range(scheme.n)]
    for k in range(scheme.p):
        w = scheme.weights[k]
        sigma = scheme.assignments[k]
        for i in range(scheme.n):
            j = sigma[i]
            if j is not None:
                grid[i][j] += w * scheme.px[i]
    return tuple(tuple(row) for row in grid)


def _q_xz(scheme: Scheme) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(
            scheme.weights[k] * scheme.px[i]
            if scheme.assignments[k][i] is not None
            else Fraction(0)
            for k in range(scheme.p)
        )
        for i in range(scheme.n)
    )


def _q_yz(scheme: Scheme) -> tuple[tuple[Fraction, ...], ...]:
    grid = [[Fraction(0)] * scheme.p for _ in range(scheme.m)]
    for k in range(scheme.p):
        sigma = scheme.assignments[k]
        for i in range(scheme.n):
            j = sigma[i]
            if j is not None:
                grid[j][k] += scheme.weights[k] * scheme.px[i]
    return tuple(tuple(row) for row in grid)


def _q_z(scheme: Scheme) -> tuple[Fraction, ...]:
    q_xz = _q_xz(scheme)
    return tuple(
        sum((q_xz[i][k] for i in range(scheme.n)), Fraction(0))
        for k in range(scheme.p)
    )


def check_consistency(scheme: Scheme, inst: Instance) -> CheckResult:
    """Does the scheme's Q_XY reproduce the instance's P_XY exactly?

    Shapes and labels must line up (scheme states are the instance's
    supported states, in order); otherwise this is a different problem and
    :class:`DimensionMismatchError` is raised rather than a quiet fail.
    """
    supp = supp_x(inst)
    expected_x = tuple(inst.x_labels[i] for i in supp)
    if (
        scheme.m != inst.m
        or scheme.n != len(supp)
        or scheme.x_labels != expected_x
        or scheme.y_labels != inst.y_labels
    ):
        raise DimensionMismatchError(
            "scheme and instance do not share shape and labels"
        )
    got = _q_xy(scheme)
    for i in range(scheme.n):
        for j in range(scheme.m):
            want = inst.p_xy[supp[i]][j]
            if got[i][j] != want:
                return CheckResult(
                    ok=False,
                    witness={
                        "x": scheme.x_labels[i],
                        "y": scheme.y_labels[j],
                        "got": got[i][j],
                        "expected": want,
                    },
                )
    return CheckResult(ok=True)


def check_informativeness(scheme: Scheme) -> CheckResult:
    """For every (y, z) with Q_YZ > 0, is exactly one state possible?"""
    for j in range(scheme.m):
        for k in range(scheme.p):
            states = [
                i for i in range(scheme.n) if scheme.assignments[k][i] == j
            ]
            if len(states) > 1:
                return CheckResult(
                    ok=False,
                    witness={
                        "y": scheme.y_labels[j],
                        "z": scheme.z_labels[k],
                        "xs": tuple(scheme.x_labels[i] for i in states),
                    },
                )
    return CheckResult(ok=True)


def check_secrecy(scheme: Scheme) -> CheckResult:
    """Is Q_XZ(x,z) exactly Q_Z(z) * P_X(x) for every state and signal?

    States outside the scheme (zero instance mass) satisfy this vacuously;
    signals with Q_Z(z) = 0 impose no condition.
    """
    q_xz = _q_xz(scheme)
    q_z = tuple(
        sum((q_xz[i][k] for i in range(scheme.n)), Fraction(0))
        for k in range(scheme.p)
    )
    for i in range(scheme.n):
        for k in range(scheme.p):
            if q_z[k] == 0:
                continue
            want = q_z[k] * scheme.px[i]
            if q_xz[i][k] != want:
                return CheckResult(
                    ok=False,
                    witness={
                        "x": scheme.x_labels[i],
                        "z": scheme.z_labels[k],
                        "got": q_xz[i][k],
                        "expected": want,
                    },
                )
    return CheckResult(ok=True)


def verify_scheme(scheme: Scheme, inst: Instance) -> VerificationReport:
    """Run all three checks and report them with the enumerated marginals."""
    return VerificationReport(
        consistency=check_consistency(scheme, inst),
        informativeness=check_informativeness(scheme),
        secrecy=check_secrecy(scheme),
        q_z=_q_z(scheme),
        q_xz=_q_xz(scheme),
        q_yz=_q_yz(scheme),
        q_xy=_q_xy(scheme),
    )


def support_signals(scheme: Scheme, x_index: int, y_index: int) -> frozenset[int]:
    """phi(x, y): indices of signals that pair state row ``x_index`` with
    column ``y_index``.  Empty for pairs the scheme never produces."""
    if not (0 <= x_index < scheme.n and 0 <= y_index < scheme.m):
        raise DimensionMismatchError(
            f"no cell ({x_index}, {y_index}) in a {scheme.n}x{scheme.m} scheme"
        )
    return frozenset(
        k for k in range(scheme.p) if scheme.assignments[k][x_index] == y_index
    )


def decode_table(scheme: Scheme) -> dict[tuple[int, int], int]:
    """The receiver's lookup: (y column, z index) -> state row.

    Defined only for schemes passing informativeness (otherwise some cell
    would be ambiguous); keys exist exactly for the (y, z) pairs with
    positive probability, so a missing key means off-support.
    """
    info = check_informativeness(scheme)
    if not info.ok:
        raise UnverifiedSchemeError(
            f"decode table undefined: scheme fails informativeness at {info.witness}"
        )
    table: dict[tuple[int, int], int] = {}
    for k in range(scheme.p):
        for i in range(scheme.n):
            j = scheme.assignments[k][i]
            if j is not None:
                table[(j, k)] = i
    return table


@dataclass(frozen=True)
class NecessityAudit:
    """Recomputed proof obligations tying a verified scheme to the column
    condition.

    ``column_mass[j]`` is, for each supported column y_j, the total signal
    mass sum_x sum_{z in phi(x, y_j)} Q_Z(z) — the quantity that cannot
    exceed one (None for unsupported columns).
    """

    ok: bool
    triple_bound_ok: bool
    disjoint_ok: bool
    column_mass_ok: bool
    column_mass: tuple[Optional[Fraction], ...]
    witness: Optional[Witness] = None


def necessity_audit(scheme: Scheme) -> NecessityAudit:
    """Audit the three facts a verified scheme certifies (see class doc).

    Meant for schemes that already pass the three checks; it still runs on
    anything and reports whichever obligation breaks first.
    """
    q_xz = _q_xz(scheme)
    q_z = tuple(
        sum((q_xz[i][k] for i in range(scheme.n)), Fraction(0))
        for k in range(scheme.p)
    )
    phi = [
        [support_signals(scheme, i, j) for j in range(scheme.m)]
        for i in range(scheme.n)
    ]
    witness: Optional[Witness] = None

    triple_ok = True
    for i in range(scheme.n):
        for j in range(scheme.m):
            for k in phi[i][j]:
                mass = scheme.weights[k] * scheme.px[i]
                if mass > q_xz[i][k]:
                    triple_ok = False
                    witness = witness or {
                        "law": "triple_bound",
                        "x": scheme.x_labels[i],
                        "y": scheme.y_labels[j],
                        "z": scheme.z_labels[k],
                    }

    disjoint_ok = True
    for j in range(scheme.m):
        seen: dict[int, int] = {}
        for i in range(scheme.n):
            for k in phi[i][j]:
                if k in seen and seen[k] != i:
                    disjoint_ok = False
                    witness = witness or {
                        "law": "disjoint_support",
                        "y": scheme.y_labels[j],
                        "z": scheme.z_labels[k],
                        "xs": (
                            scheme.x_labels[seen[k]],
                            scheme.x_labels[i],
                        ),
                    }
                seen.setdefault(k, i)

    q_y = [
        sum(
            (
                scheme.weights[k] * scheme.px[i]
                for i in range(scheme.n)
                for k in phi[i][j]
            ),
            Fraction(0),
        )
        for j in range(scheme.m)
    ]
    column_mass: list[Optional[Fraction]] = []
    mass_ok = True
    for j in range(scheme.m):
        if q_y[j] == 0:
            column_mass.append(None)
            continue
        total = sum(
            (q_z[k] for i in range(scheme.n) for k in phi[i][j]), Fraction(0)
        )
        column_mass.append(total)
        if total > 1:
            mass_ok = False
            witness = witness or {
                "law": "column_mass",
                "y": scheme.y_labels[j],
                "mass": total,
            }

    return NecessityAudit(
        ok=triple_ok and disjoint_ok and mass_ok,
        triple_bound_ok=triple_ok,
        disjoint_ok=disjoint_ok,
        column_mass_ok=mass_ok,
        column_mass=tuple(column_mass),
        witness=witness,
    )


@dataclass(frozen=True)
class OracleReport:
    """Brute-force verdict; ``support`` lists (weight, permutation) pairs of
    a witnessing mixture when feasible, None otherwise."""

    feasible: bool
    support: Optional[tuple[tuple[Fraction, tuple[int, ...]], ...]]


def feasibility_oracle(inst: Instance, *, max_m: int = 6) -> OracleReport:
    """Decide scheme existence by exact linear programming over all m!
    permutations — no extension, no matchings, no decomposition.

    A scheme exists iff some distribution over permutations of the m
    columns reproduces every conditional row on the supported states.
    Refuses m above ``max_m`` (factorial blow-up) with
    :class:`CapExceededError`.
    """
    if inst.m > max_m:
        raise CapExceededError(
            f"oracle caps at m={max_m} columns; got {inst.m} "
            f"({inst.m}! permutation variables)"
        )
    cm = conditional_y_given_x(inst)
    if cm.n > cm.m:
        # Each signal must pair the supported states with distinct columns;
        # with more states than columns no assignment exists, mixture or not.
        return OracleReport(feasible=False, support=None)
    perms = list(itertools.permutations(range(cm.m)))
    rows = []
    rhs = []
    for i in range(cm.n):
        for j in range(cm.m):
            rows.append([Fraction(1 if perm[i] == j else 0) for perm in perms])
            rhs.append(cm.entries[i][j])
    solution = feasible_nonnegative_solution(rows, rhs)
    if solution is None:
        return OracleReport(feasible=False, support=None)
    support = tuple(
        (weight, perms[idx])
        for idx, weight in enumerate(solution)
        if weight > 0
    )
    return OracleReport(feasible=True, support=support)
