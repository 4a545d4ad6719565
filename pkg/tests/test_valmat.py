import itertools
import random
from fractions import Fraction

import pytest

from helpers import WORKED_LAMBDA, WORKED_MU, WORKED_NU, worked_L, worked_M, worked_N, random_monomial_pair, t, ZERO
from lrval.valfield import FieldElement
from lrval.valmat import (
    DimensionError,
    IndexSet,
    PrecisionError,
    RPartition,
    SingularMatrixError,
    ValMatrix,
    det_divisor,
    diag_from_partition,
    diag_nuhat,
    diagonal,
    identity,
    interlace_bounds_check,
    interlace_check,
    invariant_partition,
    mat_mul,
    reversal,
    smith_reduce,
)


def leibniz_det(A: ValMatrix) -> FieldElement:
    """Determinant by the permutation expansion (reference for the Laplace code)."""
    r = A.r
    total = FieldElement.zero()
    for perm in itertools.permutations(range(r)):
        inversions = sum(1 for a in range(r) for b in range(a + 1, r) if perm[a] > perm[b])
        term = FieldElement.constant(-1 if inversions % 2 else 1)
        for i in range(r):
            term = term * A[i, perm[i]]
        total = total + term
    return total


def test_worked_invariant_partitions():
    M, N = worked_M(), worked_N()
    assert invariant_partition(M) == RPartition(WORKED_MU)
    assert invariant_partition(N) == RPartition(WORKED_NU)
    assert invariant_partition(mat_mul(M, N)) == RPartition(WORKED_LAMBDA)
    assert str(invariant_partition(M)) == "9 5 2 1"


def test_worked_full_determinant_order():
    assert worked_N().det().valuation() == 22
    assert worked_L().in_gl_r()


def test_determinant_against_permutation_expansion():
    rng = random.Random(4)
    for _ in range(30):
        A, B = random_monomial_pair(rng, rng.randint(1, 4), density=0.7)
        assert A.det() == leibniz_det(A)
        assert mat_mul(A, B).det() == A.det() * B.det()


def test_smith_oracle_on_worked_data():
    for A in (worked_M(), worked_N(), mat_mul(worked_M(), worked_N()), worked_L()):
        assert smith_reduce(A) == invariant_partition(A)


def test_smith_low_precision_is_reported():
    with pytest.raises(PrecisionError):
        smith_reduce(diagonal([5, 1]), precision=3)


def test_invariants_of_diagonal_and_identity():
    assert invariant_partition(identity(3)) == RPartition((0, 0, 0))
    assert invariant_partition(diagonal([1, 4, Fraction(-1, 2)])) == RPartition((4, 1, Fraction(-1, 2)))
    assert invariant_partition(diag_nuhat(WORKED_NU)) == RPartition(WORKED_NU)
    assert diag_nuhat(WORKED_NU)[0, 0] == t(2)


def test_determinantal_divisors_are_partial_sums():
    M = mat_mul(worked_M(), worked_N())
    lam = list(WORKED_LAMBDA)
    for k in range(5):
        assert det_divisor(M, k) == sum(lam[4 - k:])


def test_singular_matrix_rejected():
    S = ValMatrix([[t(1), t(2)], [t(1), t(2)]])
    with pytest.raises(SingularMatrixError):
        invariant_partition(S)


def test_invariants_unchanged_by_unimodular_multiplication():
    rng = random.Random(9)
    for _ in range(20):
        r = rng.randint(2, 4)
        A, _ = random_monomial_pair(rng, r)
        U = ValMatrix([[t(0) if i == j else (t(rng.randint(0, 3), rng.randint(-2, 2)) if i < j else ZERO)
                        for j in range(r)] for i in range(r)])
        assert invariant_partition(mat_mul(U, A)) == invariant_partition(A)
        assert invariant_partition(mat_mul(A, U.transpose())) == invariant_partition(A)


def test_interlacing_on_worked_product():
    X = mat_mul(worked_M(), worked_N())
    checked = 0
    for rows in itertools.combinations(range(1, 5), 3):
        for cols in itertools.combinations(range(1, 5), 3):
            res = interlace_check(X, rows, cols)
            assert res in (True, None)
            checked += res is True
    assert checked > 0


def test_upper_interlacing_bound_fails_for_a_corner_entry():
    A = ValMatrix([[t(5), t(0)], [t(0), ZERO]])
    assert tuple(invariant_partition(A)) == (0, 0)
    assert interlace_check(A, [1], [1]) is False
    assert interlace_bounds_check(A, [1], [1]) is True


def test_shifted_interlacing_bounds_on_random_matrices():
    rng = random.Random(12)
    checked = 0
    for _ in range(15):
        A, _ = random_monomial_pair(rng, 4)
        for s in (2, 3):
            for rows in itertools.combinations(range(1, 5), s):
                for cols in itertools.combinations(range(1, 5), s):
                    res = interlace_bounds_check(A, rows, cols)
                    assert res in (True, None)
                    checked += res is True
    assert checked > 100


def test_text_and_json_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        A, _ = random_monomial_pair(rng, rng.randint(1, 4))
        assert ValMatrix.from_text(A.to_text()) == A
        assert ValMatrix.from_json(A.to_json()) == A


def test_text_parse_errors_carry_positions():
    with pytest.raises(ValueError, match="line 1, column 1"):
        ValMatrix.from_text("size 2\n1; 0\n0; 1\n")
    with pytest.raises(ValueError, match="line 3: expected 2 entries"):
        ValMatrix.from_text("r=2\n1; 0\n1\n")
    with pytest.raises(ValueError, match=r"line 2, column 4"):
        ValMatrix.from_text("r=2\n1; t^\n0; 1\n")


def test_partition_type():
    mu = RPartition([7, 3, -2, -4])
    assert mu.hat() == (-4, -2, 3, 7)
    assert mu.size() == 4
    assert RPartition([8, 3, -2, -4]).contains(mu)
    with pytest.raises(ValueError):
        RPartition([1, 2])


def test_index_set_hat_and_bounds():
    I = IndexSet((1, 3), 4)
    assert I.hat().indices == (2, 4)
    with pytest.raises(ValueError):
        IndexSet((3, 1), 4)
    with pytest.raises(ValueError):
        IndexSet((5,), 4)


def test_reversal_conjugation_reverses_diagonal():
    P = reversal(3)
    D = diag_from_partition([3, 2, 1])
    assert mat_mul(mat_mul(P, D), P) == diagonal([1, 2, 3])


def test_minor_dimension_mismatch():
    with pytest.raises(DimensionError):
        worked_N().minor((1, 2), (1,))
