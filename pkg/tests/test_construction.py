"""Extension, matchings, the exact decomposition, and scheme building."""

import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import sidepad as sp
from corpus import corr23, det22, mixed23, otp2, skew22


def _conditional(inst):
    return sp.conditional_y_given_x(inst)


def test_extend_pads_worked_example():
    ext = sp.extend(_conditional(corr23()))
    assert ext.n == 2 and ext.m == 3
    assert ext.entries[2] == (F(1, 2), F(0), F(1, 2))


def test_extend_pad_row_absorbs_column_slack():
    ext = sp.extend(_conditional(mixed23()))
    assert ext.entries[2] == (F(1, 2), F(1, 6), F(1, 3))


def test_extend_square_is_identity_operation():
    cm = _conditional(det22())
    ext = sp.extend(cm)
    assert ext.entries == cm.entries


def test_extend_multiple_pad_rows_are_equal():
    inst = sp.make_instance(["x1"], ["y1", "y2", "y3"], [["1/2", "1/4", "1/4"]])
    ext = sp.extend(_conditional(inst))
    assert ext.entries[1] == ext.entries[2] == (F(1, 4), F(3, 8), F(3, 8))


def test_extend_refuses_infeasible_with_witness_columns():
    with pytest.raises(sp.InfeasibleError) as exc_info:
        sp.extend(_conditional(skew22()))
    assert exc_info.value.violations == (0,)


def test_extended_matrix_validates():
    with pytest.raises(sp.InputError):
        sp.ExtendedMatrix(n=1, m=2, entries=((F(1), F(0)),))
    with pytest.raises(sp.InputError):
        sp.ExtendedMatrix(
            n=1, m=2, entries=((F(1), F(0)), (F(1), F(0)))
        )  # column sums 2 and 0


def test_perfect_matching_identity_support():
    support = [[i == j for j in range(3)] for i in range(3)]
    assert sp.perfect_matching(support) == (0, 1, 2)


def test_perfect_matching_full_support_scans_ascending():
    support = [[True] * 3 for _ in range(3)]
    assert sp.perfect_matching(support) == (0, 1, 2)


def test_perfect_matching_uses_augmenting_path():
    # Row 1 only fits column 0, which row 0 grabbed first; the augmenting
    # path rematches row 0 onto column 1.
    support = [[True, True], [True, False]]
    assert sp.perfect_matching(support) == (1, 0)


def test_perfect_matching_none_for_empty_row():
    assert sp.perfect_matching([[False, False], [True, True]]) is None


def test_perfect_matching_none_for_column_bottleneck():
    # Three rows squeezed into two usable columns.
    support = [
        [True, True, False],
        [True, True, False],
        [True, True, False],
    ]
    assert sp.perfect_matching(support) is None


def test_perfect_matching_rejects_non_square():
    with pytest.raises(sp.InputError):
        sp.perfect_matching([[True, False]])


def test_birkhoff_of_worked_example():
    terms = sp.birkhoff_decompose(sp.extend(_conditional(corr23())))
    assert terms == ((F(1, 2), (0, 1, 2)), (F(1, 2), (1, 2, 0)))


def test_birkhoff_of_uniform_square():
    terms = sp.birkhoff_decompose(sp.extend(_conditional(otp2())))
    assert terms == ((F(1, 2), (0, 1)), (F(1, 2), (1, 0)))


def test_birkhoff_of_permutation_matrix_is_single_term():
    ext = sp.ExtendedMatrix(
        n=2, m=2, entries=((F(0), F(1)), (F(1), F(0)))
    )
    assert sp.birkhoff_decompose(ext) == ((F(1), (1, 0)),)


def test_birkhoff_is_deterministic():
    ext = sp.extend(_conditional(mixed23()))
    assert sp.birkhoff_decompose(ext) == sp.birkhoff_decompose(ext)


@st.composite
def doubly_stochastic(draw, max_m=5):
    """Random exact doubly stochastic matrices as convex combinations of
    permutation matrices (independent of the decomposition under test)."""
    m = draw(st.integers(2, max_m))
    count = draw(st.integers(1, 6))
    perms = draw(
        st.lists(st.permutations(range(m)), min_size=count, max_size=count)
    )
    raw = draw(
        st.lists(st.integers(1, 9), min_size=count, max_size=count)
    )
    total = sum(raw)
    grid = [[F(0)] * m for _ in range(m)]
    for w, perm in zip(raw, perms):
        for i in range(m):
            grid[i][perm[i]] += F(w, total)
    return sp.ExtendedMatrix(n=m, m=m, entries=tuple(tuple(r) for r in grid))


@given(doubly_stochastic())
def test_birkhoff_reconstructs_exactly(ext):
    terms = sp.birkhoff_decompose(ext)
    m = ext.m
    assert sum(alpha for alpha, _ in terms) == 1
    assert all(alpha > 0 for alpha, _ in terms)
    assert len(terms) <= m * m - 2 * m + 2
    for i in range(m):
        for j in range(m):
            mass = sum(
                (alpha for alpha, sigma in terms if sigma[i] == j), F(0)
            )
            assert mass == ext.entries[i][j]
    # each sigma is a real permutation
    for _, sigma in terms:
        assert sorted(sigma) == list(range(m))


def test_build_scheme_worked_example_structure():
    scheme = sp.build_scheme(corr23())
    assert scheme.x_labels == ("x1", "x2")
    assert scheme.y_labels == ("y1", "y2", "y3")
    assert scheme.z_labels == ("z1", "z2")
    assert scheme.px == (F(1, 2), F(1, 2))
    assert scheme.weights == (F(1, 2), F(1, 2))
    assert scheme.assignments == ((0, 1, 2), (1, 2, 0))


def test_build_scheme_xor_pad_pairing():
    scheme = sp.build_scheme(otp2())
    # z1 pairs (x1,y1),(x2,y2); z2 pairs (x1,y2),(x2,y1)
    assert scheme.assignments == ((0, 1), (1, 0))
    assert scheme.weights == (F(1, 2), F(1, 2))


def test_build_scheme_skips_zero_mass_states():
    inst = sp.make_instance(
        ["x1", "x2"], ["y1", "y2"], [["1/2", "1/2"], ["0", "0"]]
    )
    scheme = sp.build_scheme(inst)
    assert scheme.x_labels == ("x1",)
    assert scheme.px == (F(1),)
    assert sp.verify_scheme(scheme, inst).all_ok


def test_build_scheme_refuses_infeasible():
    with pytest.raises(sp.InfeasibleError) as exc_info:
        sp.build_scheme(skew22())
    assert exc_info.value.violations == (0,)


def test_row_value_multisets_condition():
    assert sp.row_value_multisets_equal(_conditional(det22()))
    assert sp.row_value_multisets_equal(_conditional(corr23()))
    assert not sp.row_value_multisets_equal(_conditional(mixed23()))


def test_deterministic_search_finds_square_witness():
    outcome = sp.find_deterministic_scheme(det22())
    assert outcome.status == "found"
    scheme = outcome.scheme
    assert scheme.weights == (F(2, 3), F(1, 3))
    assert scheme.assignments == ((0, 1), (1, 0))
    assert sp.verify_scheme(scheme, det22()).all_ok


def test_deterministic_search_on_worked_example():
    # The built scheme for the 2x3 example is itself deterministic, and the
    # search recovers exactly it.
    outcome = sp.find_deterministic_scheme(corr23())
    assert outcome.status == "found"
    assert outcome.scheme == sp.build_scheme(corr23())


def test_deterministic_search_exhausts_to_none():
    outcome = sp.find_deterministic_scheme(mixed23())
    assert outcome.status == "none_found"
    assert outcome.scheme is None
    assert outcome.nodes > 0


def test_deterministic_search_budget_exhaustion():
    outcome = sp.find_deterministic_scheme(mixed23(), limit=1)
    assert outcome.status == "budget_exhausted"
    assert outcome.scheme is None
    assert outcome.nodes >= 1


def test_deterministic_search_caps_width():
    inst = sp.make_instance(
        ["x1"], [f"y{j}" for j in range(9)], [[F(1, 9)] * 9]
    )
    with pytest.raises(sp.CapExceededError):
        sp.find_deterministic_scheme(inst)
    assert sp.find_deterministic_scheme(inst, max_m=9).status == "found"


def test_deterministic_search_refuses_infeasible():
    with pytest.raises(sp.InfeasibleError):
        sp.find_deterministic_scheme(skew22())


def test_deterministic_scheme_has_singleton_signal_sets():
    for inst in (det22(), corr23()):
        scheme = sp.find_deterministic_scheme(inst).scheme
        for i in range(scheme.n):
            for j in range(scheme.m):
                covering = sp.support_signals(scheme, i, j)
                cm = _conditional(inst)
                if cm.entries[i][j] > 0:
                    assert len(covering) == 1
                else:
                    assert not covering


@st.composite
def feasible_instances(draw, max_m=4):
    """Mixture-built instances: feasible by construction."""
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, m))
    count = draw(st.integers(1, 4))
    perms = draw(
        st.lists(st.permutations(range(m)), min_size=count, max_size=count)
    )
    raw = draw(st.lists(st.integers(1, 6), min_size=count, max_size=count))
    total = sum(raw)
    px_raw = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    px_total = sum(px_raw)
    grid = [[F(0)] * m for _ in range(n)]
    for w, perm in zip(raw, perms):
        for i in range(n):
            grid[i][perm[i]] += F(px_raw[i], px_total) * F(w, total)
    return sp.make_instance(
        [f"x{i+1}" for i in range(n)], [f"y{j+1}" for j in range(m)], grid
    )


@given(feasible_instances())
def test_built_schemes_always_verify(inst):
    scheme = sp.build_scheme(inst)
    assert sp.verify_scheme(scheme, inst).all_ok
    assert sp.necessity_audit(scheme).ok


@given(feasible_instances(max_m=3))
def test_deterministic_witness_implies_row_condition(inst):
    outcome = sp.find_deterministic_scheme(inst, limit=20000)
    if outcome.status == "found":
        assert sp.row_value_multisets_equal(_conditional(inst))
        assert sp.verify_scheme(outcome.scheme, inst).all_ok


def test_decomposition_size_bound_on_random_instances():
    rng = random.Random(4096)
    for _ in range(150):
        m = rng.randrange(2, 6)
        n = rng.randrange(1, m + 1)
        # random feasible conditional via permutation mixture
        count = rng.randrange(1, 7)
        perms = [
            tuple(rng.sample(range(m), m)) for _ in range(count)
        ]
        raw = [rng.randrange(1, 9) for _ in range(count)]
        total = sum(raw)
        grid = [[F(0)] * m for _ in range(n)]
        for w, perm in zip(raw, perms):
            for i in range(n):
                grid[i][perm[i]] += F(w, total) * F(1, n)
        inst = sp.make_instance(
            [f"x{i+1}" for i in range(n)],
            [f"y{j+1}" for j in range(m)],
            grid,
        )
        scheme = sp.build_scheme(inst)
        assert scheme.p <= m * m - 2 * m + 2
        assert sum(scheme.weights) == 1
