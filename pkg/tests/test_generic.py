import itertools
import random

import pytest

from helpers import WORKED_LAMBDA, WORKED_MU, WORKED_NU, worked_L, worked_M, worked_N, random_monomial_pair, t, ZERO
from lrval import generic
from lrval.generic import (
    FormKind,
    GenericityError,
    apply_orbit_move,
    form_from_matrix,
    genericity_check,
    genericity_violations,
    is_mu_admissible,
    is_nuhat_admissible,
    max_retries,
    random_orbit_move,
    to_mu_generic,
    to_mu_nuhat_generic,
    transpose_form,
)
from lrval.valmat import (
    RPartition,
    SingularMatrixError,
    ValMatrix,
    diag_from_partition,
    diag_nuhat,
    identity,
    invariant_partition,
    mat_mul,
)


def pair_invariants(M, N):
    return invariant_partition(M), invariant_partition(N), invariant_partition(mat_mul(M, N))


def test_worked_N_is_mu_generic():
    form = form_from_matrix(FormKind.MU_GENERIC, worked_N(), WORKED_MU, WORKED_NU)
    assert form.verified
    assert genericity_check(form)
    assert form.lam == RPartition(WORKED_LAMBDA)


def test_worked_L_is_mu_nuhat_generic():
    form = form_from_matrix(FormKind.MU_NUHAT_GENERIC, worked_L(), WORKED_MU, WORKED_NU)
    assert form.verified
    assert genericity_violations(form) == []


def test_repeated_unit_rows_are_not_generic():
    ones = ValMatrix([[t(0) if j >= i else ZERO for j in range(3)] for i in range(3)])
    form = form_from_matrix(FormKind.MU_GENERIC, ones, (2, 1, 0), (0, 0, 0))
    assert not form.verified
    assert not genericity_check(form)
    assert genericity_violations(form)


def test_worked_pair_keeps_the_published_N():
    form = to_mu_generic(worked_M(), worked_N(), seed=0)
    assert form.matrix == worked_N()
    assert form.verified


def test_identity_pair_gives_certified_triangular_forms():
    up = to_mu_generic(identity(3), identity(3))
    assert up.verified and up.matrix.is_upper_triangular() and up.matrix.in_gl_r()
    assert tuple(up.mu) == (0, 0, 0) and tuple(up.nu) == (0, 0, 0)
    low = to_mu_nuhat_generic(identity(3), identity(3))
    assert low.verified and low.matrix.is_lower_triangular() and low.matrix.in_gl_r()


def test_forms_preserve_pair_invariants():
    rng = random.Random(21)
    for k in range(12):
        M, N = random_monomial_pair(rng, rng.randint(1, 4))
        mu, nu, lam = pair_invariants(M, N)
        up = to_mu_generic(M, N, seed=k)
        assert pair_invariants(diag_from_partition(mu), up.matrix) == (mu, nu, lam)
        low = to_mu_nuhat_generic(M, N, seed=k)
        LD = mat_mul(low.matrix, diag_nuhat(nu))
        assert pair_invariants(diag_from_partition(mu), LD) == (mu, nu, lam)
        assert low.matrix.in_gl_r()


def test_minor_orders_independent_of_seed():
    rng = random.Random(5)
    for _ in range(6):
        M, N = random_monomial_pair(rng, 3)
        a = to_mu_generic(M, N, seed=1).matrix
        b = to_mu_generic(M, N, seed=2).matrix
        for k in range(1, 4):
            for I in itertools.combinations(range(3), k):
                for J in itertools.combinations(range(3), k):
                    if all(x <= y for x, y in zip(I, J)):
                        assert a.minor0(I, J).valuation() == b.minor0(I, J).valuation()


def test_admissibility_predicates():
    rng = random.Random(0)
    mu = RPartition((5, 3, 1))
    Q = generic._random_mu_admissible(rng, mu)
    assert is_mu_admissible(Q, mu)
    D = diag_from_partition(mu)
    Dinv = diag_from_partition([-m for m in mu])
    assert mat_mul(mat_mul(D, Q), Dinv).in_gl_r()
    T = generic._random_nuhat_admissible(rng, mu)
    assert is_nuhat_admissible(T, mu)
    bad = ValMatrix([[t(0), ZERO, ZERO], [t(0), t(0), ZERO], [ZERO, ZERO, t(0)]])
    assert not is_mu_admissible(bad, mu)


def test_orbit_moves_preserve_invariants():
    rng = random.Random(2)
    M, N = worked_M(), worked_N()
    for _ in range(3):
        move = random_orbit_move(rng, 4)
        P, Q, Qinv, Tinv = move
        assert P.in_gl_r() and Tinv.in_gl_r()
        assert mat_mul(Q, Qinv) == identity(4)
        assert pair_invariants(*apply_orbit_move(M, N, move)) == pair_invariants(M, N)


def test_transpose_form_swaps_roles_and_is_an_involution():
    form = form_from_matrix(FormKind.MU_NUHAT_GENERIC, worked_L(), WORKED_MU, WORKED_NU)
    tr = transpose_form(form)
    assert tuple(tr.mu) == WORKED_NU and tuple(tr.nu) == WORKED_MU
    assert tr.verified
    assert transpose_form(tr).matrix == form.matrix


def test_sampled_certification_budget():
    form = form_from_matrix(FormKind.MU_NUHAT_GENERIC, worked_L(), WORKED_MU, WORKED_NU)
    assert genericity_violations(form, budget=40, seed=3) == []


def test_singular_pair_rejected():
    S = ValMatrix([[t(0), t(1)], [t(0), t(1)]])
    with pytest.raises(SingularMatrixError):
        to_mu_generic(identity(2), S)


def test_retry_budget_and_diagnostics(monkeypatch):
    monkeypatch.setenv("LRVAL_MAX_RETRIES", "3")
    assert max_retries() == 3
    monkeypatch.setattr(generic, "genericity_violations", lambda form, **kw: ["forced failure"])
    M, N = random_monomial_pair(random.Random(1), 3)
    with pytest.raises(GenericityError) as info:
        to_mu_nuhat_generic(M, N, seed=4)
    assert len(info.value.diagnostics) == 3
    assert all("forced failure" in d for d in info.value.diagnostics)


def test_default_retry_budget(monkeypatch):
    monkeypatch.delenv("LRVAL_MAX_RETRIES", raising=False)
    assert max_retries() == 8
    monkeypatch.setenv("LRVAL_MAX_RETRIES", "junk")
    assert max_retries() == 8
