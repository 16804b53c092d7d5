"""Seeded sampling, encoding, decoding, and Monte Carlo checking.

Randomness contract
-------------------
:class:`RandomSource` wraps the stdlib Mersenne twister (``random.Random``,
a twisted feedback shift-register generator) seeded with an unsigned
64-bit integer.  Sub-streams are derived by hashing, not by jumping:
stream ``index`` of seed ``s`` reseeds a fresh generator with the first
8 bytes (big endian) of SHA-256 of the ASCII string ``"{s}/{index}"``.
A sharded simulation draws its samples on the fixed schedule "shard k
performs ceil-or-floor(n/shards) draws from sub-stream k", so any
(seed, n, shards) triple reproduces bit-identical results.

Exactness contract
------------------
Every discrete draw is an exact inverse transform: a probability vector
with rational masses is sampled by drawing one uniform integer below
L = lcm of the mass denominators and bisecting a table of integer
thresholds.  No floats are compared anywhere; floats appear only in the
*report* of empirical frequencies.  Events with exactly one possible
outcome consume no randomness at all.
"""

from __future__ import annotations

import hashlib
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from .construction import Scheme
from .errors import (
    DimensionMismatchError,
    InputError,
    InternalInvariantError,
    OffSupportError,
    UnverifiedSchemeError,
)
from .model import Instance, supp_x
from .verification import decode_table, verify_scheme

_SEED_LIMIT = 2**64


class RandomSource:
    """Deterministic pseudo-randomness with derivable sub-streams."""

    def __init__(self, seed: int):
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise InputError(f"seed must be an integer, got {seed!r}")
        if not 0 <= seed < _SEED_LIMIT:
            raise InputError(f"seed must be in [0, 2^64), got {seed}")
        self._seed = seed
        self._rng = random.Random(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound < 1:
            raise InputError(f"bound must be >= 1, got {bound}")
        return self._rng.randrange(bound)

    def substream(self, index: int) -> "RandomSource":
        """Independent stream number ``index`` derived from this seed."""
        if index < 0:
            raise InputError(f"substream index must be >= 0, got {index}")
        digest = hashlib.sha256(f"{self._seed}/{index}".encode("ascii")).digest()
        return RandomSource(int.from_bytes(digest[:8], "big"))


class _Sampler:
    """Exact inverse-transform sampler for a rational pmf summing to 1."""

    __slots__ = ("limit", "thresholds", "values")

    def __init__(self, pairs: Iterable[tuple[object, Fraction]]):
        items = [(value, mass) for value, mass in pairs if mass > 0]
        if not items:
            raise InternalInvariantError("sampler needs positive mass")
        self.limit = lcm(*(mass.denominator for _, mass in items))
        acc = 0
        self.thresholds: list[int] = []
        self.values: list[object] = []
        for value, mass in items:
            acc += mass.numerator * (self.limit // mass.denominator)
            self.thresholds.append(acc)
            self.values.append(value)
        if acc != self.limit:
            raise InternalInvariantError("sampler masses must sum to 1")

    def draw(self, rng: RandomSource):
        return self.values[bisect_right(self.thresholds, rng.randbelow(self.limit))]


def sample_world(inst: Instance, rng: RandomSource) -> tuple[int, int]:
    """Draw one (x row, y column) pair from the instance's joint, exactly."""
    sampler = _Sampler(
        ((i, j), inst.p_xy[i][j])
        for i in range(inst.n)
        for j in range(inst.m)
    )
    return sampler.draw(rng)  # type: ignore[return-value]


def _conditional_signals(
    scheme: Scheme, x_index: int, y_index: int
) -> Union[int, _Sampler]:
    """Encoder distribution for one supported pair: a bare signal index when
    deterministic, an exact sampler otherwise."""
    ks = [
        k for k in range(scheme.p) if scheme.assignments[k][x_index] == y_index
    ]
    if not ks:
        raise OffSupportError(
            f"pair ({scheme.x_labels[x_index]}, {scheme.y_labels[y_index]}) "
            "has zero probability under the scheme"
        )
    if len(ks) == 1:
        return ks[0]
    total = sum((scheme.weights[k] for k in ks), Fraction(0))
    return _Sampler((k, scheme.weights[k] / total) for k in ks)


def encode(scheme: Scheme, x_index: int, y_index: int, rng: RandomSource) -> int:
    """Draw a signal index for state row ``x_index`` and column ``y_index``
    with the scheme's exact conditional probabilities.

    Raises :class:`OffSupportError` for pairs the scheme gives zero mass.
    A deterministic cell returns without consuming randomness.
    """
    if not (0 <= x_index < scheme.n and 0 <= y_index < scheme.m):
        raise DimensionMismatchError(
            f"no cell ({x_index}, {y_index}) in a {scheme.n}x{scheme.m} scheme"
        )
    choice = _conditional_signals(scheme, x_index, y_index)
    if isinstance(choice, int):
        return choice
    return choice.draw(rng)  # type: ignore[return-value]


def decode(scheme: Scheme, y_index: int, z_index: int) -> int:
    """The receiver's map: (column, signal) to the unique state row.

    Raises :class:`OffSupportError` when the pair has zero probability
    (e.g. the signal's assignment sends only padding rows to that column).
    """
    if not (0 <= y_index < scheme.m and 0 <= z_index < scheme.p):
        raise DimensionMismatchError(
            f"no pair (y={y_index}, z={z_index}) in a "
            f"{scheme.m}-column, {scheme.p}-signal scheme"
        )
    table = decode_table(scheme)
    try:
        return table[(y_index, z_index)]
    except KeyError:
        raise OffSupportError(
            f"pair ({scheme.y_labels[y_index]}, {scheme.z_labels[z_index]}) "
            "has zero probability under the scheme"
        ) from None


@dataclass(frozen=True)
class SimReport:
    """Monte Carlo summary.

    ``decode_success`` is the fraction of samples whose emitted signal
    decoded back to the sampled state (vacuously 1.0 for zero samples).
    ``tv_secrecy[k]`` is the total-variation distance between the empirical
    state distribution among samples that emitted signal k and the exact
    P_X — None when signal k was observed fewer than ``min_count`` times.
    ``max_tv`` is the largest defined entry (0.0 when none is defined).
    """

    samples: int
    decode_success: float
    empirical_qz: tuple[float, ...]
    tv_secrecy: tuple[Optional[float], ...]
    max_tv: float
    min_count: int
    shards: int
    seed: int


def simulate(
    scheme: Scheme,
    inst: Instance,
    n_samples: int,
    seed: int,
    *,
    shards: int = 1,
    min_count: int = 1000,
    allow_unverified: bool = False,
) -> SimReport:
    """Run the whole loop end to end, ``n_samples`` times: sample (x, y)
    from the instance, encode, decode, and tally signal frequencies and
    per-signal state frequencies.

    The scheme is verified against the instance first and refused with
    :class:`UnverifiedSchemeError` if any law fails, because statistics
    from a broken scheme would be meaningless; ``allow_unverified=True``
    skips the value checks (shape and labels must still match) for
    deliberately poking at broken schemes.
    """
    if n_samples < 0:
        raise InputError(f"sample count must be >= 0, got {n_samples}")
    if shards < 1:
        raise InputError(f"shard count must be >= 1, got {shards}")
    if min_count < 1:
        raise InputError(f"min_count must be >= 1, got {min_count}")

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
    if not allow_unverified:
        report = verify_scheme(scheme, inst)
        if not report.all_ok:
            failed = [
                name
                for name, result in (
                    ("consistency", report.consistency),
                    ("informativeness", report.informativeness),
                    ("secrecy", report.secrecy),
                )
                if not result.ok
            ]
            raise UnverifiedSchemeError(
                f"refusing to simulate: scheme fails {', '.join(failed)} "
                "(pass allow_unverified=True to force)"
            )

    scheme_row = {inst_row: pos for pos, inst_row in enumerate(supp)}
    world = _Sampler(
        ((scheme_row[i], j), inst.p_xy[i][j])
        for i in supp
        for j in range(inst.m)
        if inst.p_xy[i][j] > 0
    )
    encoders = {
        cell: _conditional_signals(scheme, *cell) for cell in world.values
    }
    table = decode_table(scheme) if allow_unverified is False else None
    if table is None:
        # Broken schemes may lack a well-defined table; fall back to "first
        # state assigned there" so the success rate still means something.
        table = {}
        for k in range(scheme.p):
            for i in range(scheme.n):
                j = scheme.assignments[k][i]
                if j is not None:
                    table.setdefault((j, k), i)

    counts_z = [0] * scheme.p
    counts_xz = [[0] * scheme.p for _ in range(scheme.n)]
    successes = 0
    base = RandomSource(seed)
    quota, remainder = divmod(n_samples, shards)
    for shard in range(shards):
        rng = base.substream(shard)
        for _ in range(quota + (1 if shard < remainder else 0)):
            cell = world.draw(rng)
            choice = encoders[cell]
            k = choice if isinstance(choice, int) else choice.draw(rng)
            i, j = cell
            counts_z[k] += 1
            counts_xz[i][k] += 1
            if table.get((j, k)) == i:
                successes += 1

    tv: list[Optional[float]] = []
    for k in range(scheme.p):
        if counts_z[k] < min_count:
            tv.append(None)
            continue
        distance = sum(
            abs(counts_xz[i][k] / counts_z[k] - float(scheme.px[i]))
            for i in range(scheme.n)
        )
        tv.append(distance / 2)
    defined = [d for d in tv if d is not None]
    return SimReport(
        samples=n_samples,
        decode_success=(successes / n_samples) if n_samples else 1.0,
        empirical_qz=tuple(
            (c / n_samples) if n_samples else 0.0 for c in counts_z
        ),
        tv_secrecy=tuple(tv),
        max_tv=max(defined, default=0.0),
        min_count=min_count,
        shards=shards,
        seed=seed,
    )
