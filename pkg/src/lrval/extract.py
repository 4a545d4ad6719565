"""Fillings from matrix pairs, and matrix pairs from fillings.

Two independent routes produce the right filling of a pair ``(M, N)``:

* determinantal: differences of orders of corner minors of a mu-generic
  upper-triangular ``N*`` (rows omitted, rightmost columns kept);
* invariant sequence: invariant partitions of
  ``D_mu L diag(1, ..., 1, t^nu_j, ..., t^nu_1)`` for ``j = 0..r`` where
  ``L`` is a mu-nuhat-generic lower-triangular matrix.

The left filling (of ``lambda/nu`` with content ``mu``) likewise has two
routes: the left invariant sequence of ``L``, and the right filling of the
transposed pair ``(N^T, M^T)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .combin import LRFilling, filling_from_sequence, shift_filling, step_problem, validate_filling
from .generic import (
    FormKind,
    GenericForm,
    PreconditionError,
    to_mu_generic,
    to_mu_nuhat_generic,
)
from .valfield import INFINITY, FieldElement, Rational, monomial
from .valmat import (
    DimensionError,
    IndexSet,
    RPartition,
    ValMatrix,
    diag_from_partition,
    diag_nuhat,
    invariant_partition,
    mat_mul,
    reversal,
)

__all__ = [
    "ColumnSide",
    "OmittedSpec",
    "InconsistencyError",
    "omitted_minor_valuation",
    "right_filling_determinantal",
    "partial_diag_product",
    "invariant_sequence_right",
    "invariant_sequence_left",
    "right_filling",
    "left_filling",
    "left_filling_determinantal",
    "matrices_from_filling",
    "word_partial_sums_check",
    "corner_orders_agree",
    "left_filling_of_form",
    "content_shift",
    "right_filling_of_form",
]


class InconsistencyError(RuntimeError):
    """An extracted object violates a property the theory guarantees."""


class ColumnSide(str, Enum):
    RIGHTMOST = "RIGHTMOST"
    LEFTMOST = "LEFTMOST"


@dataclass(frozen=True)
class OmittedSpec:
    """Rows to leave out (1-based; a formal index 0 is dropped) and which columns to keep."""

    omitted: tuple
    r: int
    column_side: ColumnSide = ColumnSide.RIGHTMOST

    def __post_init__(self):
        cleaned = tuple(sorted({int(i) for i in self.omitted if int(i) != 0}))
        if any(not 1 <= i <= self.r for i in cleaned):
            raise DimensionError(f"omitted rows must lie in 1..{self.r}")
        object.__setattr__(self, "omitted", cleaned)

    @classmethod
    def of_range(cls, p: int, q: int, r: int, column_side=ColumnSide.RIGHTMOST) -> "OmittedSpec":
        """Omit rows ``p..q`` (empty if ``p > q``, which denotes the full determinant)."""
        return cls(tuple(range(p, q + 1)), r, column_side)

    def kept_rows(self) -> tuple:
        return IndexSet(self.omitted, self.r).complement().zero_based() if self.omitted else tuple(range(self.r))

    def kept_cols(self) -> tuple:
        k = self.r - len(self.omitted)
        if self.column_side is ColumnSide.RIGHTMOST:
            return tuple(range(self.r - k, self.r))
        return tuple(range(k))


def omitted_minor_valuation(N: ValMatrix, spec: OmittedSpec):
    """Order of the minor on the kept rows and the matching corner columns."""
    if spec.r != N.r:
        raise DimensionError("spec and matrix sizes differ")
    if len(spec.omitted) >= N.r:
        raise DimensionError("cannot omit every row")
    return N.minor0(spec.kept_rows(), spec.kept_cols()).valuation()


def _om(N: ValMatrix, rows: Sequence[int]):
    return omitted_minor_valuation(N, OmittedSpec(tuple(rows), N.r))


def _om_range(N: ValMatrix, p: int, q: int):
    if max(p, 1) == 1 and q >= N.r:
        return 0  # the empty minor
    return omitted_minor_valuation(N, OmittedSpec.of_range(p, q, N.r))


def _column_partial_sum(N: ValMatrix, i: int, j: int):
    """``k_1j + ... + k_ij`` from corner minors of a mu-generic ``N``."""
    return _om_range(N, j - i, j - 1) - _om_range(N, j - i + 1, j)


def _check(F: LRFilling, what: str) -> LRFilling:
    bad = validate_filling(F)
    if bad:
        raise InconsistencyError(f"{what} is not a valid filling: " + "; ".join(str(v) for v in bad))
    return F


def right_filling_determinantal(G: GenericForm, mu: Optional[RPartition] = None) -> LRFilling:
    """Right filling of a mu-generic form from orders of corner minors."""
    if G.kind is not FormKind.MU_GENERIC:
        raise PreconditionError("a mu-generic form is required")
    mu = G.mu if mu is None else mu
    N = G.matrix
    r = N.r
    if _om(N, ()) is INFINITY:
        raise PreconditionError("matrix is singular")
    S = [[0] * (r + 1) for _ in range(r + 1)]
    for j in range(1, r + 1):
        for i in range(1, j + 1):
            S[i][j] = _column_partial_sum(N, i, j)
    parts = []
    for i in range(1, r + 1):
        row = []
        for j in range(i, r + 1):
            row.append(S[i][j] - S[i - 1][j])
        parts.append(row)
    F = LRFilling(mu, parts)
    return _check(F, "determinantal right filling")


def partial_diag_product(mu_prefix: Sequence, H: ValMatrix, nu_prefix: Sequence) -> ValMatrix:
    """``diag(t^mu_1, ..., t^mu_i, 1, ..., 1) H diag(1, ..., 1, t^nu_j, ..., t^nu_1)``."""
    r = H.r
    if len(mu_prefix) > r or len(nu_prefix) > r:
        raise DimensionError("prefix longer than the matrix size")
    left = [0] * r
    for a, m in enumerate(mu_prefix):
        left[a] = m
    right = [0] * r
    for b, n in enumerate(nu_prefix):
        right[r - 1 - b] = n
    return ValMatrix([[H[a, b].shift(left[a] + right[b]) for b in range(r)] for a in range(r)])


def _require_lform(G: GenericForm) -> None:
    if G.kind is not FormKind.MU_NUHAT_GENERIC:
        raise PreconditionError("a mu-nuhat-generic form is required")


def _chain(seq: list, what: str) -> list:
    for i, (a, b) in enumerate(zip(seq, seq[1:]), start=1):
        problem = step_problem(a, b, i)
        if problem:
            raise InconsistencyError(f"{what}, step {i}: {problem}")
    return seq


def content_shift(parts) -> Rational:
    """Smallest ``beta >= 0`` making ``parts + beta`` non-negative."""
    return max(0, -min(parts, default=0))


def invariant_sequence_right(G: GenericForm, shift=0) -> list:
    """``[inv(mu L), inv(mu L nu_1), ..., inv(mu L nu_1 ... nu_r)]``.

    The chain is read with ``nu + shift`` in place of ``nu``.  When ``nu``
    has negative parts the unshifted chain is in general not a sequence of
    any filling; :func:`right_filling_of_form` shifts by
    :func:`content_shift` and moves the edge parts back afterwards.
    """
    _require_lform(G)
    mu, nu = list(G.mu), [x + shift for x in G.nu]
    seq = [invariant_partition(partial_diag_product(mu, G.matrix, nu[:j])) for j in range(G.r + 1)]
    return _chain(seq, "right invariant sequence")


def invariant_sequence_left(G: GenericForm, shift=0) -> list:
    """``[inv(L nu), inv(mu_1 L nu), ..., inv(mu_r ... mu_1 L nu)]`` (with ``mu + shift``)."""
    _require_lform(G)
    mu, nu = [x + shift for x in G.mu], list(G.nu)
    seq = [invariant_partition(partial_diag_product(mu[:i], G.matrix, nu)) for i in range(G.r + 1)]
    return _chain(seq, "left invariant sequence")


def right_filling(M: ValMatrix, N: ValMatrix, seed: int = 0, method: str = "sequence") -> LRFilling:
    """Right filling (of ``lambda/mu`` with content ``nu``) of the pair ``(M, N)``.

    ``method`` is ``"sequence"`` (mu-nuhat-generic form) or
    ``"determinantal"`` (mu-generic form).
    """
    if method == "determinantal":
        return right_filling_determinantal(to_mu_generic(M, N, seed))
    if method != "sequence":
        raise ValueError(f"unknown method {method!r}")
    return right_filling_of_form(to_mu_nuhat_generic(M, N, seed))


def left_filling(M: ValMatrix, N: ValMatrix, seed: int = 0) -> LRFilling:
    """Left filling (of ``lambda/nu`` with content ``mu``) via the left invariant sequence."""
    G = to_mu_nuhat_generic(M, N, seed)
    return left_filling_of_form(G)


def left_filling_of_form(G: GenericForm) -> LRFilling:
    beta = content_shift(G.mu)
    F = filling_from_sequence(invariant_sequence_left(G, beta))
    return _check(shift_filling(F, -beta) if beta else F, "left sequence filling")


def right_filling_of_form(G: GenericForm) -> LRFilling:
    alpha = content_shift(G.nu)
    F = filling_from_sequence(invariant_sequence_right(G, alpha))
    return _check(shift_filling(F, -alpha) if alpha else F, "right sequence filling")


def left_filling_determinantal(M: ValMatrix, N: ValMatrix, seed: int = 0) -> LRFilling:
    """Left filling as the determinantal right filling of ``(N^T, M^T)``.

    Transposition swaps the roles of rows and columns: the pair
    ``(N^T, M^T)`` has invariants ``(nu, mu; lambda)`` and its right filling
    is the left filling of ``(M, N)``.
    """
    return right_filling_determinantal(to_mu_generic(N.transpose(), M.transpose(), seed))


def matrices_from_filling(F: LRFilling, increasing: bool = False):
    """Realize a filling: ``(D_mu, [N_1, ..., N_r], N_1 ... N_r)``.

    ``N_i`` is the identity on its first ``i - 1`` coordinates and the
    bidiagonal block with diagonal ``t^k_ii, ..., t^k_ir`` and ones above
    the diagonal on the rest.  With ``increasing=True`` every matrix is
    conjugated by the reversal permutation, which lists invariants in
    increasing order instead.
    """
    bad = validate_filling(F)
    if bad:
        raise ValueError("invalid filling: " + "; ".join(str(v) for v in bad))
    r = F.r
    one, zero = FieldElement.one(), FieldElement.zero()
    M = diag_from_partition(F.mu)
    factors = []
    for i in range(1, r + 1):
        rows = [[zero] * r for _ in range(r)]
        for a in range(r):
            if a < i - 1:
                rows[a][a] = one
            else:
                rows[a][a] = monomial(F.k(i, a + 1))
                if a + 1 < r:
                    rows[a][a + 1] = one
        factors.append(ValMatrix(rows))
    N = factors[0]
    for f in factors[1:]:
        N = mat_mul(N, f)
    if increasing:
        P = reversal(r)
        conj = lambda A: mat_mul(mat_mul(P, A), P)
        return conj(M), [conj(f) for f in factors], conj(N)
    return M, factors, N


def word_partial_sums_check(G: GenericForm, F: LRFilling) -> bool:
    """Check the telescoped partial-sum identities between ``F`` and minors of ``G``.

    For ``1 <= i <= j <= l <= r``::

        sum_{b=j..l} (k_1b + ... + k_ib) = ||(j-i)^ .. (j-1)^|| - ||(l-i+1)^ .. l^||
        k_ii + ... + k_ij              = ||(j-i+2)^ .. j^||   - ||(j-i+1)^ .. j^||

    where an empty omission range stands for the full determinant.
    """
    if G.kind is not FormKind.MU_GENERIC:
        raise PreconditionError("a mu-generic form is required")
    N = G.matrix
    r = N.r
    if F.r != r:
        return False
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            lhs2 = sum((F.k(i, s) for s in range(i, j + 1)), 0)
            if lhs2 != _om_range(N, j - i + 2, j) - _om_range(N, j - i + 1, j):
                return False
            acc = 0
            for l in range(j, r + 1):
                acc += F.column_sum(i, l)
                if acc != _om_range(N, j - i, j - 1) - _om_range(N, l - i + 1, l):
                    return False
    return True


def corner_orders_agree(N_form: GenericForm, L_form: GenericForm) -> bool:
    """Orders of ``N*`` minors on rightmost columns equal those of ``L D_nuhat`` on leftmost ones."""
    import itertools

    N = N_form.matrix
    LD = mat_mul(L_form.matrix, diag_nuhat(L_form.nu))
    r = N.r
    for k in range(1, r + 1):
        right = tuple(range(r - k, r))
        left = tuple(range(k))
        for I in itertools.combinations(range(r), k):
            if N.minor0(I, right).valuation() != LD.minor0(I, left).valuation():
                return False
    return True
