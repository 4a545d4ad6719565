import random
from fractions import Fraction

import pytest

from helpers import WORKED_LAMBDA, WORKED_MU, WORKED_NU, WORKED_RIGHT, WORKED_RIGHT_SEQ, worked_filling, random_filling
from lr_oracle import lr_coefficient
from lrval.combin import (
    ContainmentError,
    LRFilling,
    StripShape,
    count_integer_fillings,
    enumerate_integer_fillings,
    filling_from_sequence,
    initial_segment,
    sequence_from_filling,
    shift_filling,
    strip,
    validate_filling,
)


def conditions(F):
    return {v.condition for v in validate_filling(F)}


def test_worked_filling_is_valid_with_expected_shapes():
    F = worked_filling()
    assert validate_filling(F) == []
    assert F.nu == WORKED_NU
    assert F.lam == WORKED_LAMBDA
    assert F.edges() == (6, 3, 2, 2)
    assert F.column_sum(2, 3) == 4


def test_worked_sequence_round_trip():
    F = worked_filling()
    seq = sequence_from_filling(F)
    assert [tuple(p) for p in seq] == WORKED_RIGHT_SEQ
    assert filling_from_sequence(seq) == F


def test_row_sum_violation_is_reported():
    F = LRFilling([2, 1], [[0, 0], [1]])
    assert "LR1" in conditions(F)


def test_negative_interior_part_is_reported():
    F = LRFilling([5, 3, 0], [[1, -1, 0], [0, 0], [0]])
    assert "LR2" in conditions(F)


def test_column_strictness_violation_is_reported():
    # k_23 = 4 pushes row 3 past row 2 of the previous shape
    rows = [list(r) for r in WORKED_RIGHT]
    rows[1][1] = 4
    assert "LR3" in conditions(LRFilling(list(WORKED_MU), rows))


def test_word_condition_violation_is_reported():
    F = LRFilling([3, 3, 0], [[1, 0, 0], [1, 2], [0]])
    assert "LR4" in conditions(F)


def test_negative_edges_are_allowed():
    F = LRFilling([7, 3, -2, -4], [[Fraction(-4, 5), 0, 0, 0], [Fraction(-6, 5), 0, 0], [Fraction(-6, 5), 0], [Fraction(-6, 5)]])
    assert validate_filling(F) == []


def test_containment_error_on_bad_chain():
    with pytest.raises(ContainmentError):
        filling_from_sequence([(2, 1), (1, 1), (3, 1)])


def test_text_and_json_round_trip():
    rng = random.Random(1)
    for _ in range(20):
        F = random_filling(rng, rng.randint(1, 4))
        assert LRFilling.from_text(F.to_text()) == F
        assert LRFilling.from_json(F.to_json()) == F
    G = LRFilling([Fraction(7, 2), -1], [[Fraction(1, 3), 0], [Fraction(-5, 2)]])
    assert LRFilling.from_text(G.to_text()) == G


def test_text_errors_name_line_and_column():
    with pytest.raises(ValueError, match="line 2, column 10"):
        LRFilling.from_text("mu: 2 1\nrow 1: 3 x\nrow 2: 1\n")
    with pytest.raises(ValueError, match="line 3, column 1"):
        LRFilling.from_text("mu: 2 1\nrow 1: 3 0\nrow 9: 1\n")


def test_shift_moves_edges_only():
    F = worked_filling()
    G = shift_filling(F, -1)
    assert G.edges() == (5, 2, 1, 1)
    assert G.interior() == F.interior()
    assert G.lam == tuple(x - 1 for x in F.lam)
    H = shift_filling(F, 2, side="left")
    assert tuple(H.mu) == tuple(m + 2 for m in F.mu)
    assert H.lam == tuple(x + 4 for x in F.lam)


@pytest.mark.parametrize(
    "mu, nu, lam",
    [
        ((1, 0), (1, 0), (2, 0)),
        ((1, 0), (1, 0), (1, 1)),
        ((2, 1, 0), (2, 1, 0), (3, 2, 1)),
        ((2, 1, 0), (2, 1, 0), (4, 2, 0)),
        ((3, 1, 0), (2, 2, 0), (4, 3, 1)),
        ((2, 1, 1, 0), (2, 1, 0, 0), (3, 2, 1, 1)),
        ((3, 2, 1, 0), (2, 1, 1, 0), (4, 3, 2, 1)),
    ],
)
def test_counts_match_schur_function_oracle(mu, nu, lam):
    assert count_integer_fillings(mu, nu, lam) == lr_coefficient(mu, nu, lam)


def test_counts_match_oracle_on_random_triples():
    rng = random.Random(17)
    for _ in range(25):
        r = rng.randint(2, 3)
        F = random_filling(rng, r, cap=3, mu_cap=3)
        mu, nu, lam = tuple(F.mu), F.nu, F.lam
        n = count_integer_fillings(mu, nu, lam)
        assert n >= 1
        assert n == lr_coefficient(mu, nu, lam)
        assert n == count_integer_fillings(nu, mu, lam)


def test_enumerated_fillings_are_valid_and_distinct():
    n, fills = enumerate_integer_fillings((3, 2, 1, 0), (2, 1, 1, 0), (4, 3, 2, 1))
    assert n == len(set(fills))
    for F in fills:
        assert validate_filling(F) == []
        assert F.nu == (2, 1, 1, 0) and F.lam == (4, 3, 2, 1)


def test_enumeration_rejects_non_integer_data():
    with pytest.raises(ValueError):
        count_integer_fillings((Fraction(1, 2), 0), (1, 0), (1, 0))


def test_strip_and_initial_segment():
    F = worked_filling()
    assert strip(F, 2).rows == (0, 3, 2, 1)
    assert initial_segment(StripShape((0, 0, 1, 1)), StripShape((0, 3, 2, 1)))
    assert initial_segment(StripShape((0, 1, 2, 1)), StripShape((0, 3, 2, 1)))
    assert not initial_segment(StripShape((0, 1, 1, 1)), StripShape((0, 3, 2, 1)))
    assert initial_segment(StripShape((0, 0, 0, 0)), StripShape((0, 3, 2, 1)))
