"""Core data model: exact rationals, joint distributions, conditionals.

All probability mass in this library is a :class:`fractions.Fraction`.
Fractions are kept in canonical form (reduced, positive denominator) by
the stdlib, equality is exact, and nothing here ever rounds.  Floats are
rejected at the boundary; statistical *estimates* elsewhere may be floats,
probabilities never are.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InputError

Rational = Fraction

RationalLike = Union[Fraction, int, str]

_INT_RE = re.compile(r"[+-]?\d+")
_DEN_RE = re.compile(r"\d+")
_DEC_RE = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+)")

# Labels are single whitespace-free tokens so documents stay unambiguous.
_LABEL_RE = re.compile(r"[^\s#]+")


def rat_parse(token: str) -> Fraction:
    """Parse one rational token: ``a/b``, a bare integer, or a finite decimal.

    Scientific notation, floats with exponents, and empty/garbage tokens are
    rejected with :class:`InputError`.  ``2/4`` parses to the canonical 1/2.
    """
    text = token.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        if not (_INT_RE.fullmatch(num) and _DEN_RE.fullmatch(den)):
            raise InputError(f"not a rational token: {token!r}")
        if int(den) == 0:
            raise InputError(f"zero denominator in {token!r}")
        return Fraction(int(num), int(den))
    if _INT_RE.fullmatch(text):
        return Fraction(int(text))
    if _DEC_RE.fullmatch(text):
        return Fraction(text)
    raise InputError(f"not a rational token: {token!r}")


def rat_str(value: Fraction) -> str:
    """Canonical text for a rational: ``0``, ``3``, ``1/2``.  Round-trips
    exactly through :func:`rat_parse`."""
    return str(value)


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or rational token to a Fraction.

    Floats are refused on purpose: 0.1 as a float is not one tenth, and
    silently accepting it would poison exact verification downstream.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return rat_parse(value)
    raise InputError(f"not an exact rational value: {value!r}")


def _check_label(label: object, kind: str) -> str:
    if not isinstance(label, str) or not _LABEL_RE.fullmatch(label):
        raise InputError(
            f"bad {kind} label {label!r}: labels are non-empty tokens "
            "without whitespace or '#'"
        )
    return label


@dataclass(frozen=True)
class Instance:
    """A problem instance: a finite joint distribution P_XY over labeled
    alphabets, stored as an exact n-by-m grid summing to one.

    Rows are states x (the secret), columns are side-information values y.
    Construction validates everything; instances are immutable thereafter.
    """

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]
    p_xy: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        xl = tuple(_check_label(s, "x") for s in self.x_labels)
        yl = tuple(_check_label(s, "y") for s in self.y_labels)
        if not xl or not yl:
            raise InputError("an instance needs at least one x and one y label")
        if len(set(xl)) != len(xl):
            raise InputError("duplicate x labels")
        if len(set(yl)) != len(yl):
            raise InputError("duplicate y labels")
        grid = tuple(tuple(as_fraction(v) for v in row) for row in self.p_xy)
        if len(grid) != len(xl) or any(len(row) != len(yl) for row in grid):
            raise InputError(
                f"probability grid must be {len(xl)}x{len(yl)} to match the labels"
            )
        for row in grid:
            for v in row:
                if v < 0:
                    raise InputError(f"negative probability {v}")
        total = sum(v for row in grid for v in row)
        if total != 1:
            raise InputError(f"probability mass sums to {total}, expected 1")
        object.__setattr__(self, "x_labels", xl)
        object.__setattr__(self, "y_labels", yl)
        object.__setattr__(self, "p_xy", grid)

    @property
    def n(self) -> int:
        return len(self.x_labels)

    @property
    def m(self) -> int:
        return len(self.y_labels)


def make_instance(
    x_labels: Sequence[str],
    y_labels: Sequence[str],
    p_xy: Iterable[Iterable[RationalLike]],
) -> Instance:
    """Build an :class:`Instance` from any rational-like grid (ints, tokens,
    Fractions).  Convenience wrapper used heavily in tests and examples."""
    return Instance(
        x_labels=tuple(x_labels),
        y_labels=tuple(y_labels),
        p_xy=tuple(tuple(row) for row in p_xy),
    )


def marginal_x(inst: Instance) -> tuple[Fraction, ...]:
    """P_X: exact row sums of the joint grid."""
    return tuple(sum(row, Fraction(0)) for row in inst.p_xy)


def marginal_y(inst: Instance) -> tuple[Fraction, ...]:
    """P_Y: exact column sums of the joint grid."""
    return tuple(
        sum((row[j] for row in inst.p_xy), Fraction(0)) for j in range(inst.m)
    )


def supp_x(inst: Instance) -> tuple[int, ...]:
    """Row indices with positive marginal mass, ascending."""
    return tuple(i for i, v in enumerate(marginal_x(inst)) if v > 0)


def supp_y(inst: Instance) -> tuple[int, ...]:
    """Column indices with positive marginal mass, ascending."""
    return tuple(j for j, v in enumerate(marginal_y(inst)) if v > 0)


@dataclass(frozen=True)
class ConditionalMatrix:
    """The conditional P_{Y|X} restricted to supported states.

    ``rows`` are the instance row indices it covers (exactly supp X,
    ascending); every column of the instance is retained, including
    zero-mass ones, whose conditional entries are necessarily zero.
    Each row sums to exactly one.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != len(self.rows):
            raise InputError("conditional matrix: one entry row per covered row")
        for row in self.entries:
            if len(row) != len(self.cols):
                raise InputError("conditional matrix: ragged row")
            if any(v < 0 for v in row):
                raise InputError("conditional matrix: negative entry")
            if sum(row, Fraction(0)) != 1:
                raise InputError(
                    f"conditional matrix row sums to {sum(row, Fraction(0))}, expected 1"
                )

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.cols)


def conditional_y_given_x(inst: Instance) -> ConditionalMatrix:
    """P_{Y|X}(y|x) = P_XY(x,y) / P_X(x) over supported x, all y columns."""
    px = marginal_x(inst)
    rows = supp_x(inst)
    if not rows:
        # Unreachable for a valid Instance (mass sums to 1), kept as a guard.
        raise InputError("instance has empty X support")
    entries = tuple(
        tuple(inst.p_xy[i][j] / px[i] for j in range(inst.m)) for i in rows
    )
    return ConditionalMatrix(rows=rows, cols=tuple(range(inst.m)), entries=entries)


def column_sums(cm: ConditionalMatrix) -> tuple[Fraction, ...]:
    """Exact column sums of the conditional matrix, one per y column."""
    return tuple(
        sum((row[j] for row in cm.entries), Fraction(0)) for j in range(cm.m)
    )


def instance_from_conditional(
    px: Sequence[RationalLike],
    conditional: Iterable[Iterable[RationalLike]],
    x_labels: Sequence[str] | None = None,
    y_labels: Sequence[str] | None = None,
) -> Instance:
    """Assemble an instance from a state marginal and per-state conditional
    rows: P_XY(x,y) = P_X(x) * P_{Y|X}(y|x).

    Rows with zero marginal mass get all-zero joint rows regardless of the
    conditional row supplied for them.
    """
    pxf = [as_fraction(v) for v in px]
    cond = [[as_fraction(v) for v in row] for row in conditional]
    if len(cond) != len(pxf):
        raise InputError("need one conditional row per state")
    if not cond or not cond[0]:
        raise InputError("conditional grid is empty")
    m = len(cond[0])
    grid = []
    for p, row in zip(pxf, cond):
        if len(row) != m:
            raise InputError("conditional grid is ragged")
        if p < 0:
            raise InputError(f"negative marginal mass {p}")
        if p > 0 and sum(row, Fraction(0)) != 1:
            raise InputError("conditional row of a supported state must sum to 1")
        grid.append([p * v for v in row] if p > 0 else [Fraction(0)] * m)
    xl = tuple(x_labels) if x_labels is not None else tuple(
        f"x{i+1}" for i in range(len(pxf))
    )
    yl = tuple(y_labels) if y_labels is not None else tuple(
        f"y{j+1}" for j in range(m)
    )
    return make_instance(xl, yl, grid)
