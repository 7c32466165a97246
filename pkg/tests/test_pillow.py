import itertools

import pytest

from surgkit.services.core import PillowError
from surgkit.services.pillow import (
    ACTION_KNOT, ACTION_PILLOWCASE, b_identity, b_search, classify_tags, classify_type, h_canonical,
    h_from_b, matches_pattern, p_sequence, pillowcase_trace, trace_endpoint,
)


def test_p_sequence_orientation():
    assert p_sequence(22, 15, [2, 2, 7, -1]).values == (22, 15, 8, 1, -1)
    assert p_sequence(22, 15, [2, 2, 8]).values == (22, 15, 8, 1)
    assert p_sequence(5, 4, [1, -4]).values == (5, 4, -1)


def test_p_sequence_rejects_wrong_value():
    with pytest.raises(PillowError):
        p_sequence(22, 13, [2, 2, 8])
    with pytest.raises(PillowError):
        p_sequence(22, 15, [])


def test_b_search_finds_a_pattern():
    pseq = p_sequence(22, 15, [2, 2, 7, -1])
    found = [s.b for s in b_search(pseq, 9)]
    assert (0, -1, 0, 1) in found
    for solution in b_search(pseq, 9):
        assert b_identity(pseq, solution.b) == 9
        assert solution.h[0] == 9 and solution.h[-1] == 0


def test_b_search_sign_flipped_for_237():
    pseq = p_sequence(28, 19, [2, 2, 9, -1])
    found = [s.b for s in b_search(pseq, -11)]
    assert (0, 1, 0, -1) in found
    assert classify_type((0, 1, 0, -1)) == "A"


@pytest.mark.parametrize("aseq, p, q, k", [
    ([2, 2, 7, -1], 22, 15, 9),
    ([2, 2, 9, -1], 28, 19, 11),
    ([6, 2, -2, -3, -3], 191, 34, 15),
])
def test_b_search_matches_exhaustive(aseq, p, q, k):
    pseq = p_sequence(p, q, aseq)
    for bound in (1, 2):
        for target in (k, -k):
            brute = sorted(
                b for b in itertools.product(range(-bound, bound + 1), repeat=len(aseq))
                if b_identity(pseq, b) == target
            )
            assert [s.b for s in b_search(pseq, target, bound)] == brute


def test_b_search_bound():
    with pytest.raises(PillowError):
        b_search(p_sequence(5, 4, [1, -4]), 2, bound=0)


def test_h_canonical_trefoil():
    pseq = p_sequence(5, 4, [1, -4])
    solution = h_canonical(pseq, 2)
    assert solution.b == (1, -2)
    assert solution.h == (2, 2, 0)
    assert h_from_b(pseq, 2, solution.b) == solution.h


def test_h_canonical_zero_intermediate():
    # [2,-3,5,1,1] = 7/3，p 序列中间出现 0
    pseq = p_sequence(7, 3, [2, -3, 5, 1, 1])
    assert pseq.values == (7, 3, -1, 0, 1, 1)
    solution = h_canonical(pseq, 2)
    assert solution.b == (1, -1, 0, 0, 0)
    assert solution.h == (2, 1, 0, 0, 0, 0)
    assert b_identity(pseq, solution.b) == 2


def test_trace_non_canonical_aseq():
    steps = pillowcase_trace(7, 3, 2, [2, -3, 5, 1, 1])
    assert len(steps) == 10
    knots = [s for s in steps if s.action == ACTION_KNOT]
    assert [s.marked_point for s in knots] == [2, 1, 0, 0, 0]
    assert trace_endpoint(steps).is_infinite()


def test_h_canonical_degenerate():
    with pytest.raises(PillowError):
        h_canonical(p_sequence(5, 4, [1, -4]), 5)


def test_classify_cde_fingerprints():
    assert classify_tags((0, -1, 0, 0, -1)) == ["CDE"]
    assert classify_tags((0, 1, 0, 0, 0, 1)) == ["CDE"]
    assert classify_type((0, -1, 0, -1, 1)) == "K"
    assert classify_type((1, 1, 1)) is None


def test_trace_trefoil():
    steps = pillowcase_trace(5, 4, 2, [1, -4])
    assert len(steps) == 4
    assert [s.action for s in steps] == [ACTION_KNOT, ACTION_PILLOWCASE] * 2
    assert sum(1 for s in steps if s.action == ACTION_PILLOWCASE) == 2
    assert trace_endpoint(steps).is_infinite()


def test_trace_numerators():
    steps = pillowcase_trace(22, 15, 9, [2, 2, 7, -1])
    numerators = [s.slope_num for s in steps if s.action == ACTION_PILLOWCASE]
    assert numerators == [22, 15, 8, 1]
    assert trace_endpoint(steps).is_infinite()


def test_trace_alternate_aseq_same_endpoint():
    short = pillowcase_trace(22, 15, 9, [2, 2, 8])
    long = pillowcase_trace(22, 15, 9, [2, 2, 7, -1])
    assert len(short) == 6 and len(long) == 8
    assert trace_endpoint(short).is_infinite() and trace_endpoint(long).is_infinite()


def test_trace_explicit_b():
    steps = pillowcase_trace(22, 15, 9, [2, 2, 7, -1], b=[0, -1, 0, 1])
    assert [s.divisor for s in steps if s.action == ACTION_KNOT] == [0, -1, 0, 1]
    with pytest.raises(PillowError):
        pillowcase_trace(22, 15, 9, [2, 2, 7, -1], b=[1, 1, 1, 0])


def test_trace_rejects_k_out_of_range():
    with pytest.raises(PillowError):
        pillowcase_trace(5, 4, 7, [1, -4])


def test_matches_pattern_padding():
    assert matches_pattern((0, 0, 0, 1, 0, 0, -1), (0, 0, 1, 0, 0, -1))
    assert matches_pattern((0, 0, -1, 0, 1), (0, -1, 0, 1))
    assert matches_pattern((0, 0, 1, 0, 0, 1), (0, -1, 0, 0, -1))
    assert matches_pattern((0, 0, 0, 1, 0, -1, 0, 0, 0), (0, 0, 1, 0, -1, 0, 0))
    assert not matches_pattern((0, 1, 0, 0, -1), (0, -1, 0, 0, -1))
    assert not matches_pattern((1, 0, 1, 0, -1), (0, -1, 0, 1))
    assert not matches_pattern((0, 0, 0), (0, 0, 0))
    assert classify_tags((0, 0, 1, 0, 0, -1)) == ["FGH"]
    assert classify_tags((0, 0, 0, 1, 0, 0, -1)) == ["CDE", "FGH"]


@pytest.mark.parametrize("p", [2, 3, 7])
def test_trace_integer_slope(p):
    # 整数斜率只需一次枕形解扭
    steps = pillowcase_trace(p, 1, 1, [p])
    pillow_steps = [s for s in steps if s.action == ACTION_PILLOWCASE]
    assert len(pillow_steps) == 1
    assert (pillow_steps[0].slope_num, pillow_steps[0].slope_den) == (p, 1)
    assert [s.marked_point for s in steps if s.action == ACTION_KNOT] == [1]
    assert trace_endpoint(steps).is_infinite()
