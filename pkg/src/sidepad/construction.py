"""Scheme construction.

The pipeline that turns a feasible instance into a working scheme:

1. ``extend`` pads the conditional matrix P_{Y|X} (n rows, m columns,
   column sums <= 1) to an m-by-m doubly stochastic matrix by appending
   m - n identical rows that absorb the slack of every column.
2. ``birkhoff_decompose`` peels the result into a convex combination of
   permutation matrices: repeatedly find a perfect matching on the
   positive support, subtract the minimum matched entry.
3. ``build_scheme`` names one signal per permutation; signal z_k occurs
   with probability alpha_k, and under it state row i is paired with
   column sigma_k(i).

Everything is exact rational arithmetic; the decomposition terminates in
at most m*m - 2m + 2 rounds because each subtraction zeroes at least one
positive cell while both stochasticity constraints keep holding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    CapExceededError,
    InfeasibleError,
    InputError,
    InternalInvariantError,
)
from .model import (
    ConditionalMatrix,
    Instance,
    as_fraction,
    column_sums,
    conditional_y_given_x,
    marginal_x,
)


@dataclass(frozen=True)
class ExtendedMatrix:
    """An m-by-m doubly stochastic matrix whose first ``n`` rows are a
    conditional matrix; rows n..m-1 are padding.  Validated exactly."""

    n: int
    m: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not (1 <= self.n <= self.m):
            raise InputError(f"need 1 <= n <= m, got n={self.n} m={self.m}")
        if len(self.entries) != self.m:
            raise InputError("extended matrix must be square (m rows)")
        grid = tuple(tuple(as_fraction(v) for v in row) for row in self.entries)
        for row in grid:
            if len(row) != self.m:
                raise InputError("extended matrix must be square (m columns)")
            if any(v < 0 for v in row):
                raise InputError("extended matrix entries must be nonnegative")
            if sum(row, Fraction(0)) != 1:
                raise InputError("extended matrix row does not sum to 1")
        for j in range(self.m):
            if sum((row[j] for row in grid), Fraction(0)) != 1:
                raise InputError(f"extended matrix column {j} does not sum to 1")
        object.__setattr__(self, "entries", grid)


@dataclass(frozen=True)
class Scheme:
    """A public-signal scheme.

    ``assignments[k]`` is the pairing of signal ``z_labels[k]``: row i of
    the extended matrix is paired with column ``assignments[k][i]``.  Rows
    below ``n`` are real states (in ``x_labels`` order, with masses
    ``px``); higher rows are padding and carry no probability.  ``None``
    marks an unassigned row — never produced by construction, but
    representable so that verification can diagnose broken schemes.

    Only shape constraints are enforced here.  Whether the weights sum to
    one, the assignments are bijections, and the scheme matches a given
    instance are questions for ``sidepad.verification``.
    """

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]
    z_labels: tuple[str, ...]
    px: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]
    assignments: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self) -> None:
        n, m, p = len(self.x_labels), len(self.y_labels), len(self.z_labels)
        if n < 1 or m < 1 or p < 1:
            raise InputError("scheme needs at least one state, column, and signal")
        if n > m:
            raise InputError(f"scheme needs n <= m, got n={n} m={m}")
        for labels, kind in ((self.x_labels, "x"), (self.y_labels, "y"),
                             (self.z_labels, "z")):
            if len(set(labels)) != len(labels):
                raise InputError(f"duplicate {kind} labels in scheme")
        px = tuple(as_fraction(v) for v in self.px)
        if len(px) != n or any(v <= 0 for v in px):
            raise InputError("scheme needs one positive mass per state")
        weights = tuple(as_fraction(v) for v in self.weights)
        if len(weights) != p or any(v <= 0 for v in weights):
            raise InputError("scheme needs one positive weight per signal")
        if len(self.assignments) != p:
            raise InputError("scheme needs one assignment per signal")
        assignments = []
        for sigma in self.assignments:
            row = tuple(sigma)
            if len(row) != m:
                raise InputError("each assignment must cover all m rows")
            for col in row:
                if col is not None and not (isinstance(col, int) and 0 <= col < m):
                    raise InputError(f"assignment column {col!r} out of range")
            assignments.append(row)
        object.__setattr__(self, "px", px)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "assignments", tuple(assignments))

    @property
    def n(self) -> int:
        return len(self.x_labels)

    @property
    def m(self) -> int:
        return len(self.y_labels)

    @property
    def p(self) -> int:
        return len(self.z_labels)


def extend(cm: ConditionalMatrix) -> ExtendedMatrix:
    """Pad a feasible conditional matrix to a doubly stochastic square.

    Every padding row is the same: entry j gets (1 - column_sum_j)/(m - n),
    which is nonnegative exactly when the column condition holds.  A column
    summing beyond 1 raises :class:`InfeasibleError` naming the columns.
    """
    sums = column_sums(cm)
    bad = tuple(j for j, s in enumerate(sums) if s > 1)
    if bad:
        raise InfeasibleError(
            f"column {bad[0]} sums to {sums[bad[0]]} > 1; no scheme exists",
            violations=bad,
        )
    n, m = cm.n, cm.m
    if n == m:
        if any(s != 1 for s in sums):
            # Square with every column <= 1 and total n forces equality.
            raise InternalInvariantError("square conditional not doubly stochastic")
        return ExtendedMatrix(n=n, m=m, entries=cm.entries)
    pad = tuple((1 - s) / (m - n) for s in sums)
    return ExtendedMatrix(n=n, m=m, entries=cm.entries + (pad,) * (m - n))


def perfect_matching(support: Sequence[Sequence[bool]]) -> tuple[int, ...] | None:
    """Deterministic perfect matching on a square boolean grid, or None.

    Augmenting-path search with a fixed scan order: rows are processed in
    ascending index; each row first grabs its lowest-indexed free column,
    otherwise the lowest-indexed augmenting path (columns tried ascending
    at every step) wins.  The same grid always yields the same matching.
    """
    m = len(support)
    if m == 0 or any(len(row) != m for row in support):
        raise InputError("support grid must be square and non-empty")
    col_of = [-1] * m  # row -> column
    row_of = [-1] * m  # column -> row

    def augment(i: int, visited: set[int]) -> bool:
        for j in range(m):
            if support[i][j] and j not in visited:
                visited.add(j)
                if row_of[j] == -1 or augment(row_of[j], visited):
                    row_of[j] = i
                    col_of[i] = j
                    return True
        return False

    for i in range(m):
        free = next(
            (j for j in range(m) if support[i][j] and row_of[j] == -1), None
        )
        if free is not None:
            row_of[free] = i
            col_of[i] = free
        elif not augment(i, set()):
            return None
    return tuple(col_of)


def birkhoff_decompose(
    ext: ExtendedMatrix,
) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """Exact Birkhoff decomposition: weights and permutations, in extraction
    order, with weights summing to exactly 1 and every weight positive."""
    m = ext.m
    work = [list(row) for row in ext.entries]
    terms: list[tuple[Fraction, tuple[int, ...]]] = []
    while any(v > 0 for row in work for v in row):
        sigma = perfect_matching([[v > 0 for v in row] for row in work])
        if sigma is None:
            # Birkhoff's theorem guarantees a matching on any doubly
            # stochastic residual; reaching this means corrupted arithmetic.
            raise InternalInvariantError("no perfect matching on positive residual")
        alpha = min(work[i][sigma[i]] for i in range(m))
        if alpha <= 0:
            raise InternalInvariantError("matching hit a zero entry")
        for i in range(m):
            work[i][sigma[i]] -= alpha
        terms.append((alpha, sigma))
    if sum((a for a, _ in terms), Fraction(0)) != 1:
        raise InternalInvariantError("decomposition weights do not sum to 1")
    return tuple(terms)


def build_scheme(inst: Instance) -> Scheme:
    """Construct a scheme for a feasible instance.

    Signals are labeled z1..zp in decomposition order.  Raises
    :class:`InfeasibleError` (with the witness columns) when the instance
    fails the column condition.
    """
    cm = conditional_y_given_x(inst)
    terms = birkhoff_decompose(extend(cm))
    px = marginal_x(inst)
    return Scheme(
        x_labels=tuple(inst.x_labels[i] for i in cm.rows),
        y_labels=inst.y_labels,
        z_labels=tuple(f"z{k+1}" for k in range(len(terms))),
        px=tuple(px[i] for i in cm.rows),
        weights=tuple(a for a, _ in terms),
        assignments=tuple(sigma for _, sigma in terms),
    )


def row_value_multisets_equal(cm: ConditionalMatrix) -> bool:
    """Whether all rows of the conditional matrix share one multiset of
    positive values.

    This is necessary for a deterministic scheme to exist (each signal
    must take, in every row, a cell whose value equals the signal weight),
    but it is *not* claimed sufficient; the exhaustive search is the
    ground truth.
    """
    reference = sorted(v for v in cm.entries[0] if v > 0)
    return all(
        sorted(v for v in row if v > 0) == reference for row in cm.entries[1:]
    )


@dataclass(frozen=True)
class DeterministicSearch:
    """Outcome of the deterministic-scheme search.

    ``status`` is ``"found"`` (``scheme`` set), ``"none_found"`` (the space
    was exhausted), or ``"budget_exhausted"`` (the node budget tripped
    first — inconclusive).  ``nodes`` counts cell-placement attempts.
    """

    status: str
    scheme: Optional[Scheme]
    nodes: int


class _Budget(Exception):
    pass


def find_deterministic_scheme(
    inst: Instance, *, limit: int = 1_000_000, max_m: int = 8
) -> DeterministicSearch:
    """Search for a scheme whose encoder is deterministic: every supported
    (x, y) maps to exactly one signal.

    In such a scheme each signal covers exactly one support cell per state
    row, with weight equal to that cell's conditional value; so signals
    correspond one-to-one with the support cells of the first row, and the
    search space is the ways of extending those p partial transversals,
    one disjoint column per row, value-matched to the signal weight.
    Signals are pinned to first-row cells in column order (any deterministic
    scheme is a relabeling of one found this way), and the remaining rows
    are filled by exhaustive backtracking.

    Raises :class:`CapExceededError` for m above ``max_m`` and
    :class:`InfeasibleError` for infeasible instances.
    """
    if inst.m > max_m:
        raise CapExceededError(
            f"deterministic search caps at m={max_m} columns; got {inst.m}"
        )
    cm = conditional_y_given_x(inst)
    sums = column_sums(cm)
    bad = tuple(j for j, s in enumerate(sums) if s > 1)
    if bad:
        raise InfeasibleError(
            f"column {bad[0]} sums to {sums[bad[0]]} > 1; no scheme exists",
            violations=bad,
        )
    if limit < 1:
        raise InputError(f"node budget must be >= 1, got {limit}")

    cells = [
        [(j, v) for j, v in enumerate(row) if v > 0] for row in cm.entries
    ]
    n, m = cm.n, cm.m
    first = cells[0]
    p = len(first)
    alphas = [v for _, v in first]
    used: list[set[int]] = [{j} for j, _ in first]
    chosen = [[j for j, _ in first]] + [[-1] * p for _ in range(n - 1)]
    nodes = 0

    def fill_row(i: int) -> bool:
        if i == n:
            return True
        options = cells[i]
        if len(options) != p:
            return False
        taken = [False] * p

        def place(k: int) -> bool:
            nonlocal nodes
            if k == p:
                return fill_row(i + 1)
            for t, (j, v) in enumerate(options):
                if taken[t]:
                    continue
                nodes += 1
                if nodes > limit:
                    raise _Budget
                if v != alphas[k] or j in used[k]:
                    continue
                taken[t] = True
                used[k].add(j)
                chosen[i][k] = j
                if place(k + 1):
                    return True
                taken[t] = False
                used[k].remove(j)
            return False

        return place(0)

    try:
        found = fill_row(1)
    except _Budget:
        return DeterministicSearch(status="budget_exhausted", scheme=None, nodes=nodes)
    if not found:
        return DeterministicSearch(status="none_found", scheme=None, nodes=nodes)

    assignments = []
    for k in range(p):
        sigma: list[Optional[int]] = [chosen[i][k] for i in range(n)]
        sigma.extend(sorted(set(range(m)) - used[k]))
        assignments.append(tuple(sigma))
    px = marginal_x(inst)
    scheme = Scheme(
        x_labels=tuple(inst.x_labels[i] for i in cm.rows),
        y_labels=inst.y_labels,
        z_labels=tuple(f"z{k+1}" for k in range(p)),
        px=tuple(px[i] for i in cm.rows),
        weights=tuple(alphas),
        assignments=tuple(assignments),
    )
    return DeterministicSearch(status="found", scheme=scheme, nodes=nodes)
