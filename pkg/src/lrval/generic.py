"""Reduction of matrix pairs to generic triangular forms.

Two pairs ``(M, N)`` and ``(P M Q^-1, Q N T^-1)`` with ``P, Q, T`` in
``GL_r(R)`` are equivalent.  This module finds, for a given pair,

* an upper-triangular ``N*`` with ``(D_mu, N*)`` equivalent to ``(M, N)``
  (the mu-generic form), and
* a lower-triangular ``L`` in ``GL_r(R)`` with ``(D_mu, L D_nuhat)``
  equivalent to ``(M, N)`` (the mu-nuhat-generic form),

using seeded random unit coefficients, then certifies genericity by checking
the minor inequalities explicitly.

No unit is ever inverted.  Elimination is fraction-free: to clear ``a``
against a pivot ``p = t^v u`` the target line is replaced by
``u * line - (a t^-v) * pivot_line``, an invertible operation over ``R``.
Left-hand transforms that must be transported to the other matrix of the
pair are recorded through adjugates: ``adj(X) = det(X) X^-1``, and the unit
scalar ``det(X)`` is absorbed by the right-hand factor ``T``.

Entries are truncated above a working precision only where the discarded
tail ``E`` of a matrix ``A`` with largest invariant ``a_1`` satisfies
``val(E) > a_1``: then ``A + E = A (1 + A^-1 E)`` with ``1 + A^-1 E`` in
``GL_r(R)``, so truncation stays inside the orbit.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .valfield import INFINITY, FieldElement, random_unit
from .valmat import (
    RPartition,
    SingularMatrixError,
    ValMatrix,
    contained,
    diag_from_partition,
    diag_nuhat,
    identity,
    invariant_partition,
    mat_mul,
)

__all__ = [
    "FormKind",
    "GenericForm",
    "GenericityError",
    "PreconditionError",
    "is_mu_admissible",
    "is_nuhat_admissible",
    "to_mu_generic",
    "to_mu_nuhat_generic",
    "genericity_check",
    "genericity_violations",
    "max_retries",
    "random_gl",
    "random_orbit_move",
    "apply_orbit_move",
    "transpose_form",
]

_ZERO = FieldElement.zero()
_ONE = FieldElement.one()


class GenericityError(RuntimeError):
    """Raised when no certified generic form was found within the retry budget."""

    def __init__(self, message: str, diagnostics: Sequence[str] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class PreconditionError(ValueError):
    pass


class FormKind(str, Enum):
    MU_GENERIC = "MU_GENERIC"
    MU_NUHAT_GENERIC = "MU_NUHAT_GENERIC"


@dataclass
class GenericForm:
    kind: FormKind
    matrix: ValMatrix
    mu: RPartition
    nu: Optional[RPartition]
    seed: Optional[int]
    verified: bool = False
    lam: Optional[RPartition] = None
    notes: list = field(default_factory=list)

    @property
    def r(self) -> int:
        return self.matrix.r


def max_retries() -> int:
    """Retry bound for randomized reductions (``LRVAL_MAX_RETRIES``, default 8)."""
    raw = os.environ.get("LRVAL_MAX_RETRIES", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 8


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def _require_gl(Q: ValMatrix) -> None:
    if not Q.in_gl_r():
        raise PreconditionError("matrix is not in GL_r(R)")


def is_mu_admissible(Q: ValMatrix, mu: RPartition) -> bool:
    """``||q_ij|| >= mu_j - mu_i`` for every entry, i.e. ``D_mu Q D_mu^-1`` in ``GL_r(R)``."""
    _require_gl(Q)
    r = Q.r
    return all(Q[i, j].valuation() >= mu[j] - mu[i] for i in range(r) for j in range(r))


def is_nuhat_admissible(T: ValMatrix, nu: RPartition) -> bool:
    """``||tau_ij|| >= nu_(r-i+1) - nu_(r-j+1)`` for ``i >= j``."""
    _require_gl(T)
    r = T.r
    nh = nu.hat()
    return all(T[i, j].valuation() >= nh[i] - nh[j] for i in range(r) for j in range(i + 1))


# ---------------------------------------------------------------------------
# list-of-lists helpers
# ---------------------------------------------------------------------------


def _lists(A: ValMatrix) -> list:
    return [list(row) for row in A.rows]


def _tr(x: FieldElement, prec) -> FieldElement:
    return x if prec is None else x.truncate(prec)


def _content(entries) -> Fraction:
    """gcd of numerators over lcm of denominators of all coefficients (1 if none)."""
    g, l = 0, 1
    for x in entries:
        for _, c in x.terms:
            c = Fraction(c)
            g = math.gcd(g, c.numerator)
            l = l * c.denominator // math.gcd(l, c.denominator)
    return Fraction(g, l) if g else Fraction(1)


def _primitive(entries) -> list:
    """Divide a line by its constant content.

    Scaling a row or column by a nonzero constant is a move by a constant
    diagonal matrix, which commutes with every ``D_mu``; it keeps
    coefficient growth of fraction-free elimination in check.
    """
    c = _content(entries)
    if c == 1:
        return list(entries)
    inv = 1 / c
    return [x.scale(inv) for x in entries]


def _normalize_lines(A: ValMatrix) -> ValMatrix:
    rows = [_primitive(row) for row in A.rows]
    cols = [_primitive([rows[i][j] for i in range(A.r)]) for j in range(A.r)]
    return ValMatrix([[cols[j][i] for j in range(A.r)] for i in range(A.r)])


def _min_val(rows) -> object:
    return min((x.valuation() for row in rows for x in row), default=INFINITY)


def _diagonalize_columns(A: ValMatrix, prec_work, prec_x, prec_adj):
    """Fraction-free pivoted elimination of ``A``.

    Returns ``(X, X_adj, colval)`` where ``X`` records the column operations,
    ``X_adj`` is the product of the adjugates of those operations (a unit
    multiple of ``X^-1``) and column ``j`` of ``A X`` has valuation at least
    ``colval[j]``.  Row operations are not recorded.
    """
    r = A.r
    work = [[_tr(x, prec_work) for x in row] for row in A.rows]
    X = _lists(identity(r))
    Xa = _lists(identity(r))
    act_r = list(range(r))
    act_c = list(range(r))
    colval = [None] * r
    for _ in range(r):
        best = None
        for i in act_r:
            for j in act_c:
                v = work[i][j].valuation()
                if best is None or v < best[0]:
                    best = (v, i, j)
        v, pi, pj = best
        if v is INFINITY:
            raise SingularMatrixError("matrix is singular")
        p = work[pi][pj]
        u = p.unit_part()
        # clear the pivot column with row operations (unrecorded)
        for i2 in act_r:
            if i2 == pi or not work[i2][pj]:
                continue
            c = work[i2][pj].shift(-v)
            row, prow = work[i2], work[pi]
            for col in act_c:
                row[col] = _tr(u * row[col] - c * prow[col], prec_work)
            work[i2] = _primitive(row)
        # clear the pivot row with recorded column operations
        for j2 in act_c:
            if j2 == pj or not work[pi][j2]:
                continue
            c = work[pi][j2].shift(-v)
            for i2 in act_r:
                work[i2][j2] = _ZERO if i2 == pi else _tr(u * work[i2][j2], prec_work)
            for a in range(r):
                X[a][j2] = _tr(u * X[a][j2] - c * X[a][pj], prec_x)
            # X_adj <- adj(E) X_adj
            new_pj = [_tr(u * x + c * y, prec_adj) for x, y in zip(Xa[pj], Xa[j2])]
            for k in range(r):
                if k != j2 and k != pj:
                    Xa[k] = [_tr(u * x, prec_adj) for x in Xa[k]]
            Xa[pj] = new_pj
        colval[pj] = v
        act_r.remove(pi)
        act_c.remove(pj)
    return ValMatrix(X), ValMatrix(Xa), colval


def _adapted_basis(A: ValMatrix, inv_parts: RPartition, prec_adj):
    """Columns operations ``X`` (and ``adj X``) with ``A X D^-1`` in ``GL_r(R)``.

    The returned ``colval`` is the diagonal exponent attached to each column.
    Escalates the working precision if the exact post-check fails.
    """
    top = max(inv_parts)
    low = A.min_valuation()
    slack = 1
    for _ in range(6):
        prec_work = top + slack
        prec_x = top - low + slack
        X, Xa, colval = _diagonalize_columns(A, prec_work, prec_x, prec_adj)
        AX = mat_mul(A, X)
        ok = all(AX[i, j].valuation() >= colval[j] for i in range(A.r) for j in range(A.r))
        if ok and sorted(colval, reverse=True) == list(inv_parts) and X.det().valuation() == 0:
            return X, Xa, colval
        slack *= 4
    raise ArithmeticError("column reduction did not certify; input too degenerate")


def _reduce_to_diagonal_m(M: ValMatrix, N: ValMatrix, mu: RPartition, nu: RPartition) -> ValMatrix:
    """An ``N'`` with ``(D_mu, N')`` equivalent to ``(M, N)``."""
    r = M.r
    if M == diag_from_partition(mu):
        return N
    prec_adj = nu[0] - N.min_valuation() + 1
    X, Xa, colval = _adapted_basis(M, mu, prec_adj)
    perm = sorted(range(r), key=lambda j: (-colval[j], j))
    XaN = mat_mul(Xa, N)
    return _normalize_lines(ValMatrix([XaN.rows[perm[s]] for s in range(r)]).truncate(nu[0] + 1))


def _column_form(Np: ValMatrix, nu: RPartition) -> ValMatrix:
    """An ``S`` in ``GL_r(R)`` with ``N' = S D_nuhat T`` for some ``T`` in ``GL_r(R)``."""
    r = Np.r
    if Np == diag_nuhat(nu):
        return identity(r)
    prec = nu[0] - nu[r - 1] + 1
    X2, X2a, colval = _adapted_basis(Np.transpose(), nu, prec)
    perm = sorted(range(r), key=lambda j: (colval[j], j))
    # column s of S is row perm[s] of adj(X2)
    S = ValMatrix([[X2a[perm[s], a] for s in range(r)] for a in range(r)])
    return _normalize_lines(S.truncate(prec))


# ---------------------------------------------------------------------------
# random transforms
# ---------------------------------------------------------------------------


def _const(rng: random.Random) -> FieldElement:
    """A random nonzero constant; small magnitudes keep coefficients readable."""
    return FieldElement.constant(rng.choice((1, -1)) * rng.randrange(1, 100))


def _random_mu_admissible(rng: random.Random, mu: RPartition) -> ValMatrix:
    """``Q_L Q_U`` with constant upper part and lower entries of minimal order."""
    r = len(mu)
    QL = [[_ZERO] * r for _ in range(r)]
    QU = [[_ZERO] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if i > j:
                QL[i][j] = _const(rng).shift(mu[j] - mu[i])
            elif i == j:
                QL[i][j] = _ONE
            if i <= j:
                QU[i][j] = _const(rng)
    return mat_mul(ValMatrix(QL), ValMatrix(QU))


def _random_nuhat_admissible(rng: random.Random, nu: RPartition) -> ValMatrix:
    """``T_U T_L`` with constant upper part and lower entries of minimal order."""
    r = len(nu)
    nh = nu.hat()
    TU = [[_ZERO] * r for _ in range(r)]
    TL = [[_ZERO] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if i <= j:
                TU[i][j] = _const(rng)
            if i > j:
                TL[i][j] = _const(rng).shift(nh[i] - nh[j])
            elif i == j:
                TL[i][j] = _ONE
    return mat_mul(ValMatrix(TU), ValMatrix(TL))


def _random_upper_constant(rng: random.Random, r: int) -> ValMatrix:
    return ValMatrix([[_const(rng) if i <= j else _ZERO for j in range(r)] for i in range(r)])


def _upper_triangularize(A: ValMatrix, prec) -> ValMatrix:
    """Right column operations only, working from the bottom row up."""
    r = A.r
    w = _lists(A)
    for i in range(r - 1, 0, -1):
        best = None
        for j in range(i + 1):
            v = w[i][j].valuation()
            if best is None or v <= best[0]:
                best = (v, j)
        v, jp = best
        if v is INFINITY:
            raise SingularMatrixError("matrix is singular")
        if jp != i:
            for row in w:
                row[jp], row[i] = row[i], row[jp]
        u = w[i][i].unit_part()
        for j2 in range(i):
            if not w[i][j2]:
                continue
            c = w[i][j2].shift(-v)
            for a in range(i):
                w[a][j2] = _tr(u * w[a][j2] - c * w[a][i], prec)
            w[i][j2] = _ZERO
            col = _primitive([w[a][j2] for a in range(r)])
            for a in range(r):
                w[a][j2] = col[a]
    return _normalize_lines(ValMatrix(w).truncate(prec))


def _lower_triangularize(A: ValMatrix, prec) -> ValMatrix:
    """Clear the strict upper part with upper-triangular column operations."""
    r = A.r
    w = _lists(A)
    for i in range(r - 1):
        v = w[i][i].valuation()
        if v is INFINITY or any(w[i][j].valuation() < v for j in range(i + 1, r)):
            raise ArithmeticError("diagonal pivot is not minimal in its row")
        u = w[i][i].unit_part()
        for j2 in range(i + 1, r):
            if not w[i][j2]:
                continue
            c = w[i][j2].shift(-v)
            for a in range(i + 1, r):
                w[a][j2] = _tr(u * w[a][j2] - c * w[a][i], prec)
            w[i][j2] = _ZERO
            col = _primitive([w[a][j2] for a in range(r)])
            for a in range(r):
                w[a][j2] = col[a]
    return _normalize_lines(ValMatrix(w).truncate(prec))


def _attempt_seed(seed: int, attempt: int) -> int:
    return (seed * 1_000_003 + attempt * 7_919) % (2**63)


# ---------------------------------------------------------------------------
# generic forms
# ---------------------------------------------------------------------------


def _invariants(M: ValMatrix, N: ValMatrix):
    if not (M.is_full_rank() and N.is_full_rank()):
        raise SingularMatrixError("both matrices of the pair must have full rank")
    return invariant_partition(M), invariant_partition(N), invariant_partition(mat_mul(M, N))


def _sanity(form: GenericForm) -> Optional[str]:
    """Orbit invariants that every correct form must reproduce."""
    A = form.matrix
    if form.kind is FormKind.MU_GENERIC:
        if not A.is_upper_triangular():
            return "not upper triangular"
        if invariant_partition(A) != form.nu:
            return "inv(N*) differs from inv(N)"
        if invariant_partition(mat_mul(diag_from_partition(form.mu), A)) != form.lam:
            return "inv(D_mu N*) differs from inv(MN)"
    else:
        if not A.is_lower_triangular() or not A.in_gl_r():
            return "not a lower-triangular element of GL_r(R)"
        LD = mat_mul(A, diag_nuhat(form.nu))
        if invariant_partition(mat_mul(diag_from_partition(form.mu), LD)) != form.lam:
            return "inv(D_mu L D_nuhat) differs from inv(MN)"
    return None


def _certify(form: GenericForm, diagnostics: list, label: str) -> bool:
    problem = _sanity(form)
    if problem is None:
        bad = genericity_violations(form, limit=1)
        if bad:
            problem = "genericity inequality fails: " + bad[0]
    if problem is not None:
        diagnostics.append(f"{label}: {problem}")
        return False
    form.verified = True
    return True


def to_mu_generic(M: ValMatrix, N: ValMatrix, seed: int = 0, retries: Optional[int] = None) -> GenericForm:
    """A certified upper-triangular ``N*`` with ``(D_mu, N*)`` equivalent to ``(M, N)``.

    If the pair is already of the shape ``(D_mu, upper triangular)`` and
    passes certification it is returned unchanged.
    """
    mu, nu, lam = _invariants(M, N)
    diagnostics: list = []
    if M == diag_from_partition(mu) and N.is_upper_triangular():
        form = GenericForm(FormKind.MU_GENERIC, N, mu, nu, seed, lam=lam, notes=["input already generic"])
        if _certify(form, diagnostics, "input"):
            return form
    Np = _reduce_to_diagonal_m(M, N, mu, nu)
    prec = nu[0] + 1
    for attempt in range(retries or max_retries()):
        s = _attempt_seed(seed, attempt)
        rng = random.Random(s)
        Q = _random_mu_admissible(rng, mu)
        try:
            U = _upper_triangularize(mat_mul(Q, Np).truncate(prec), prec)
        except (ArithmeticError, SingularMatrixError) as exc:
            diagnostics.append(f"seed {s}: {exc}")
            continue
        Nstar = _normalize_lines(mat_mul(U, _random_upper_constant(rng, M.r)).truncate(prec))
        form = GenericForm(FormKind.MU_GENERIC, Nstar, mu, nu, s, lam=lam)
        if _certify(form, diagnostics, f"seed {s}"):
            return form
    raise GenericityError("no certified mu-generic form within the retry budget", diagnostics)


def to_mu_nuhat_generic(M: ValMatrix, N: ValMatrix, seed: int = 0, retries: Optional[int] = None) -> GenericForm:
    """A certified lower-triangular ``L`` with ``(D_mu, L D_nuhat)`` equivalent to ``(M, N)``."""
    mu, nu, lam = _invariants(M, N)
    r = M.r
    diagnostics: list = []
    Np = _reduce_to_diagonal_m(M, N, mu, nu)
    S = _column_form(Np, nu)
    prec = nu[0] - nu[r - 1] + 1
    for attempt in range(retries or max_retries()):
        s = _attempt_seed(seed, attempt)
        rng = random.Random(s)
        Q = _random_mu_admissible(rng, mu)
        T = _random_nuhat_admissible(rng, nu)
        try:
            L = _lower_triangularize(mat_mul(mat_mul(Q, S), T).truncate(prec), prec)
        except (ArithmeticError, SingularMatrixError) as exc:
            diagnostics.append(f"seed {s}: {exc}")
            continue
        form = GenericForm(FormKind.MU_NUHAT_GENERIC, L, mu, nu, s, lam=lam)
        if _certify(form, diagnostics, f"seed {s}"):
            return form
    raise GenericityError("no certified mu-nuhat-generic form within the retry budget", diagnostics)


def form_from_matrix(kind: FormKind, matrix: ValMatrix, mu, nu, seed=None) -> GenericForm:
    """Wrap an externally supplied triangular matrix (e.g. published data) as a form.

    The form is certified (``verified``) only if it passes the same checks as
    computed forms.
    """
    mu = mu if isinstance(mu, RPartition) else RPartition(mu)
    nu = nu if isinstance(nu, RPartition) else RPartition(nu)
    if kind is FormKind.MU_GENERIC:
        lam = invariant_partition(mat_mul(diag_from_partition(mu), matrix))
    else:
        lam = invariant_partition(mat_mul(mat_mul(diag_from_partition(mu), matrix), diag_nuhat(nu)))
    form = GenericForm(kind, matrix, mu, nu, seed, lam=lam)
    _certify(form, form.notes, "supplied")
    return form


def transpose_form(form: GenericForm) -> GenericForm:
    """Swap the roles of rows and columns.

    ``(D_mu, L D_nuhat)`` is equivalent, after transposition and reversal, to
    ``(D_nu, L' D_muhat)`` with ``L' = Pi L^T Pi``; right and left fillings
    trade places.
    """
    if form.kind is not FormKind.MU_NUHAT_GENERIC:
        raise PreconditionError("only mu-nuhat-generic forms can be transposed")
    r = form.r
    L = form.matrix
    Lt = ValMatrix([[L[r - 1 - j, r - 1 - i] for j in range(r)] for i in range(r)])
    out = GenericForm(FormKind.MU_NUHAT_GENERIC, Lt, form.nu, form.mu, form.seed, lam=form.lam)
    out.verified = form.verified and not genericity_violations(out, limit=1)
    return out


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


def _index_sets(r: int, k: int) -> list:
    return list(itertools.combinations(range(r), k))


def genericity_violations(form: GenericForm, budget: Optional[int] = None, seed: int = 0, limit: Optional[int] = None) -> list:
    """Human-readable list of failed genericity conditions (empty if none).

    For the triangular shape at hand a minor ``X_IJ`` is structurally
    nonzero when ``I <= J`` componentwise (upper) or ``J <= I`` (lower).
    Conditions checked, over structurally nonzero minors only:

    * every structurally nonzero minor is nonzero;
    * (row)     ``||X_IJ|| <= ||X_HJ||`` for ``I <= H``;
    * (mu-gap)  ``||X_HJ|| <= ||X_IJ|| + |mu_I| - |mu_H|`` for ``I <= H``;
    * (col)     ``||X_IJ|| <= ||X_IH||`` for ``H <= J``;
    * (nu-gap)  ``||X_IH|| <= ||X_IJ|| + |nuhat_J| - |nuhat_H|`` for ``H <= J``
      (mu-nuhat-generic forms only).

    With ``budget`` set (default for ``r > 5``: 500) each family is checked on
    that many seeded random triples instead of exhaustively.
    """
    X = form.matrix
    r = X.r
    upper = form.kind is FormKind.MU_GENERIC
    mu = form.mu
    nh = form.nu.hat() if form.nu is not None else None
    if budget is None and r > 5:
        budget = 500
    out: list = []

    def nonzero(I, J):
        return contained(I, J) if upper else contained(J, I)

    def val(I, J):
        return X.minor0(I, J).valuation()

    def full(lst):
        return limit is not None and len(lst) >= limit

    def musize(I):
        return sum((mu[i] for i in I), 0)

    def nhsize(J):
        return sum((nh[j] for j in J), 0)

    def one_based(I):
        return tuple(i + 1 for i in I)

    rng = random.Random(seed)
    for k in range(1, r + 1):
        sets = _index_sets(r, k)
        for I in sets:
            for J in sets:
                if nonzero(I, J) and val(I, J) is INFINITY:
                    out.append(f"minor {one_based(I)}x{one_based(J)} vanishes")
                    if full(out):
                        return out
        if budget is None:
            triples = ((I, H, J) for I in sets for H in sets for J in sets)
        else:
            triples = ((rng.choice(sets), rng.choice(sets), rng.choice(sets)) for _ in range(budget))
        for A, B, C in triples:
            # row-type families: rows A <= B, columns C
            if contained(A, B) and nonzero(A, C) and nonzero(B, C):
                vi, vh = val(A, C), val(B, C)
                if not vi <= vh:
                    out.append(f"(row) I={one_based(A)} H={one_based(B)} J={one_based(C)}")
                elif not vh <= vi + musize(A) - musize(B):
                    out.append(f"(mu-gap) I={one_based(A)} H={one_based(B)} J={one_based(C)}")
            # column-type families: rows A, columns B <= C
            if contained(B, C) and nonzero(A, C) and nonzero(A, B):
                vj, vh = val(A, C), val(A, B)
                if not vj <= vh:
                    out.append(f"(col) I={one_based(A)} H={one_based(B)} J={one_based(C)}")
                elif nh is not None and not upper and not vh <= vj + nhsize(C) - nhsize(B):
                    out.append(f"(nu-gap) I={one_based(A)} H={one_based(B)} J={one_based(C)}")
            if full(out):
                return out
    return out


def genericity_check(form: GenericForm, budget: Optional[int] = None, seed: int = 0) -> bool:
    """True iff every applicable genericity condition holds (see :func:`genericity_violations`)."""
    return not genericity_violations(form, budget=budget, seed=seed, limit=1)


# ---------------------------------------------------------------------------
# random orbit moves
# ---------------------------------------------------------------------------


def _rand_ring_element(rng: random.Random, support=(0, 1, 2)) -> FieldElement:
    # at most two terms: enough to leave every variety, without blowing up supports
    k = rng.choice((0, 1, 1, 2))
    exps = sorted(rng.sample(list(support), min(k, len(support)))) if k else []
    acc = {e: rng.randrange(-9, 10) or 1 for e in exps}
    return FieldElement(acc)


def _unit_triangular(rng: random.Random, r: int, lower: bool) -> list:
    rows = [[_ZERO] * r for _ in range(r)]
    for i in range(r):
        rows[i][i] = _ONE
        for j in range(r):
            if (i > j) if lower else (i < j):
                rows[i][j] = _rand_ring_element(rng)
    return rows


def _inverse_unit_triangular(A: list, lower: bool) -> list:
    r = len(A)
    inv = [[_ONE if i == j else _ZERO for j in range(r)] for i in range(r)]
    order = range(r) if lower else range(r - 1, -1, -1)
    for i in order:
        others = range(i) if lower else range(i + 1, r)
        for j in range(r):
            acc = _ONE if i == j else _ZERO
            for k in others:
                if A[i][k] and inv[k][j]:
                    acc = acc - A[i][k] * inv[k][j]
            inv[i][j] = acc
    return inv


def random_gl(rng: random.Random, r: int) -> ValMatrix:
    """A random element of ``GL_r(R)``: lower x upper factors with unit diagonal entries."""
    L = _unit_triangular(rng, r, lower=True)
    U = _unit_triangular(rng, r, lower=False)
    for i in range(r):
        U[i][i] = random_unit(rng, [0, 1]) if rng.random() < 0.5 else FieldElement.constant(rng.choice([1, -1, 2, 3]))
    return mat_mul(ValMatrix(L), ValMatrix(U))


def random_orbit_move(rng: random.Random, r: int):
    """``(P, Q, Q^-1, T^-1)`` for a random move in ``GL_r(R)^3``.

    ``Q`` is a permuted product of unit-triangular matrices so that its
    inverse is exact; ``P`` and ``T^-1`` are arbitrary random elements.
    """
    perm = list(range(r))
    rng.shuffle(perm)
    Pi = [[_ONE if perm[i] == j else _ZERO for j in range(r)] for i in range(r)]
    PiT = [[Pi[j][i] for j in range(r)] for i in range(r)]
    L = _unit_triangular(rng, r, lower=True)
    U = _unit_triangular(rng, r, lower=False)
    Q = mat_mul(mat_mul(ValMatrix(Pi), ValMatrix(L)), ValMatrix(U))
    Qinv = mat_mul(mat_mul(ValMatrix(_inverse_unit_triangular(U, lower=False)),
                           ValMatrix(_inverse_unit_triangular(L, lower=True))), ValMatrix(PiT))
    return random_gl(rng, r), Q, Qinv, random_gl(rng, r)


def apply_orbit_move(M: ValMatrix, N: ValMatrix, move) -> tuple:
    P, Q, Qinv, Tinv = move
    return mat_mul(mat_mul(P, M), Qinv), mat_mul(mat_mul(Q, N), Tinv)
