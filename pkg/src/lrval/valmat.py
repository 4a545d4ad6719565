"""Square matrices over the series field and their invariant partitions.

Ground truth for invariants is the determinantal-divisor route: ``d_k`` is
the least valuation among ``k x k`` minors and consecutive differences give
the invariant partition.  :func:`smith_reduce` is a separate elimination
algorithm kept as an oracle for it.

Index sets in the public API are 1-based, as in the mathematics; internally
rows and columns are 0-based tuples.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .valfield import (
    INFINITY,
    FieldElement,
    Rational,
    RationalLike,
    as_rational,
    format_rational,
    monomial,
    parse_field_element,
)

__all__ = [
    "RPartition",
    "IndexSet",
    "ValMatrix",
    "DimensionError",
    "SingularMatrixError",
    "PrecisionError",
    "minor",
    "det_divisor",
    "invariant_partition",
    "smith_reduce",
    "interlace_check",
    "interlace_bounds_check",
    "mat_mul",
    "diag_from_partition",
    "diag_nuhat",
    "reversal",
    "identity",
    "diagonal",
    "partition_text",
    "contained",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """A pivot valuation reached the working precision of the Smith oracle."""


# ---------------------------------------------------------------------------
# partitions and index sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RPartition:
    """A weakly decreasing tuple of exact rationals (parts may be negative)."""

    parts: tuple

    def __init__(self, parts: Iterable[RationalLike]):
        ps = tuple(as_rational(p) for p in parts)
        for a, b in zip(ps, ps[1:]):
            if a < b:
                raise ValueError(f"partition parts must be weakly decreasing: {_fmt_parts(ps)}")
        object.__setattr__(self, "parts", ps)

    def __iter__(self) -> Iterator[Rational]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def r(self) -> int:
        return len(self.parts)

    def size(self) -> Rational:
        """``|mu|``, the sum of the parts."""
        return sum(self.parts, 0)

    def sub_size(self, indices: Iterable[int]) -> Rational:
        """``|mu_I|`` for a 1-based index collection ``I``."""
        return sum((self.parts[i - 1] for i in indices), 0)

    def hat(self) -> tuple:
        """The reversed sequence ``(mu_r, ..., mu_1)`` (weakly increasing)."""
        return tuple(reversed(self.parts))

    def shifted(self, alpha: RationalLike) -> "RPartition":
        a = as_rational(alpha)
        return RPartition(p + a for p in self.parts)

    def contains(self, other: "RPartition") -> bool:
        """True iff ``other`` fits inside ``self`` row by row."""
        return len(self) == len(other) and all(a >= b for a, b in zip(self.parts, other.parts))

    def is_nonnegative(self) -> bool:
        return all(p >= 0 for p in self.parts)

    def is_integral(self) -> bool:
        return all(Fraction(p).denominator == 1 for p in self.parts)

    def __str__(self) -> str:
        return " ".join(_fmt_short(p) for p in self.parts)

    def __repr__(self) -> str:
        return f"RPartition(({', '.join(_fmt_short(p) for p in self.parts)}))"


def _fmt_short(p: Rational) -> str:
    q = Fraction(p)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_parts(ps) -> str:
    return "(" + ", ".join(_fmt_short(p) for p in ps) + ")"


@dataclass(frozen=True)
class IndexSet:
    """A strictly increasing tuple of 1-based indices inside ``1..r``."""

    indices: tuple
    r: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"index set must be strictly increasing: {idx}")
        if idx and (idx[0] < 1 or idx[-1] > self.r):
            raise ValueError(f"index set {idx} not inside 1..{self.r}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def complement(self) -> "IndexSet":
        s = set(self.indices)
        return IndexSet(tuple(i for i in range(1, self.r + 1) if i not in s), self.r)

    def hat(self) -> "IndexSet":
        """Image under ``i -> r - i + 1`` (the reversal permutation)."""
        return IndexSet(tuple(sorted(self.r - i + 1 for i in self.indices)), self.r)

    def within(self, other: "IndexSet") -> bool:
        """The componentwise order ``I <= H`` (``i_s <= h_s`` for all ``s``)."""
        return contained(self.indices, other.indices)

    def zero_based(self) -> tuple:
        return tuple(i - 1 for i in self.indices)


def contained(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise ``a_s <= b_s`` for equal-length index tuples."""
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))


def _as_zero_based(idx, r: int) -> tuple:
    if isinstance(idx, IndexSet):
        return idx.zero_based()
    t = tuple(int(i) - 1 for i in idx)
    if any(b <= a for a, b in zip(t, t[1:])) or (t and (t[0] < 0 or t[-1] >= r)):
        raise ValueError(f"bad index set {tuple(idx)} for r={r}")
    return t


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class ValMatrix:
    """An immutable ``r x r`` matrix of :class:`FieldElement` entries.

    Minors are memoised per instance; the cache is filled lazily and guarded
    by a lock so a matrix may be shared between threads.
    """

    __slots__ = ("_rows", "_r", "_minors", "_lock")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(_entry(x) for x in row) for row in rows)
        r = len(rows)
        if r == 0 or any(len(row) != r for row in rows):
            raise DimensionError("a ValMatrix must be square and non-empty")
        self._rows = rows
        self._r = r
        self._minors: dict = {((), ()): FieldElement.one()}
        self._lock = threading.Lock()

    # -- access ---------------------------------------------------------
    @property
    def r(self) -> int:
        return self._r

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return self._rows[i][j]

    def entry(self, i: int, j: int) -> FieldElement:
        """1-based entry access."""
        return self._rows[i - 1][j - 1]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, ValMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"ValMatrix(r={self._r})"

    def __matmul__(self, other: "ValMatrix") -> "ValMatrix":
        return mat_mul(self, other)

    def transpose(self) -> "ValMatrix":
        return ValMatrix(list(zip(*self._rows)))

    def map(self, fn) -> "ValMatrix":
        return ValMatrix([[fn(x) for x in row] for row in self._rows])

    def truncate(self, precision: RationalLike) -> "ValMatrix":
        p = as_rational(precision)
        return self.map(lambda x: x.truncate(p))

    def valuations(self) -> list:
        return [[x.valuation() for x in row] for row in self._rows]

    def min_valuation(self):
        return min((x.valuation() for row in self._rows for x in row), default=INFINITY)

    def is_upper_triangular(self) -> bool:
        return all(not self._rows[i][j] for i in range(self._r) for j in range(i))

    def is_lower_triangular(self) -> bool:
        return all(not self._rows[i][j] for i in range(self._r) for j in range(i + 1, self._r))

    def is_diagonal(self) -> bool:
        return self.is_upper_triangular() and self.is_lower_triangular()

    def in_ring(self) -> bool:
        """All entries have non-negative valuation."""
        return all(x.in_ring() for row in self._rows for x in row)

    def in_gl_r(self) -> bool:
        """Membership in ``GL_r(R)``: entries in the ring and a unit determinant."""
        return self.in_ring() and self.det().valuation() == 0

    # -- minors ---------------------------------------------------------
    def minor0(self, rows: tuple, cols: tuple) -> FieldElement:
        """Minor on 0-based sorted ``rows``/``cols`` (Laplace along the last row)."""
        cache = self._minors
        key = (rows, cols)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if len(rows) != len(cols):
            raise DimensionError("minor needs |I| = |J|")
        i = rows[-1]
        sub_rows = rows[:-1]
        k = len(cols)
        acc = {}
        row = self._rows[i]
        for pos, c in enumerate(cols):
            a = row[c]
            if not a:
                continue
            sub = self.minor0(sub_rows, cols[:pos] + cols[pos + 1:])
            if not sub:
                continue
            prod = a * sub
            sign = 1 if (k - 1 - pos) % 2 == 0 else -1
            for e, cf in prod.terms:
                acc[e] = acc.get(e, 0) + (cf if sign > 0 else -cf)
        value = FieldElement._from_dict(acc)
        with self._lock:
            cache[key] = value
        return value

    def minor(self, I, J) -> FieldElement:
        rows = _as_zero_based(I, self._r)
        cols = _as_zero_based(J, self._r)
        if len(rows) != len(cols):
            raise DimensionError(f"minor needs |I| = |J|, got {len(rows)} and {len(cols)}")
        return self.minor0(rows, cols)

    def minor_val0(self, rows: tuple, cols: tuple):
        return self.minor0(rows, cols).valuation()

    def det(self) -> FieldElement:
        full = tuple(range(self._r))
        return self.minor0(full, full)

    def is_full_rank(self) -> bool:
        return bool(self.det())

    # -- text format ----------------------------------------------------
    def to_text(self) -> str:
        lines = [f"r={self._r}"]
        for row in self._rows:
            lines.append("; ".join(str(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ValMatrix":
        """Parse ``r=<n>`` followed by ``n`` rows of ``;``-separated entries.

        Blank lines and ``#`` comments are ignored; errors name the line and
        column of the offending token in the original text.
        """
        lines = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1)
                 if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("line 1: empty matrix file")
        head_no, head_ln = lines[0]
        head = head_ln.replace(" ", "")
        if not head.startswith("r="):
            raise ValueError(f"line {head_no}, column 1: expected header 'r=<n>', got {head_ln!r}")
        try:
            r = int(head[2:])
        except ValueError:
            raise ValueError(f"line {head_no}, column 3: bad size in {head_ln!r}") from None
        if len(lines) != r + 1:
            last = lines[-1][0]
            raise ValueError(f"line {last}: expected {r} matrix rows, got {len(lines) - 1}")
        rows = []
        for ln_no, ln in lines[1:]:
            cells = ln.split(";")
            if len(cells) != r:
                raise ValueError(f"line {ln_no}: expected {r} entries, got {len(cells)}")
            row = []
            col = 1
            for cell in cells:
                try:
                    row.append(parse_field_element(cell))
                except ValueError as exc:
                    pos = col + len(cell) - len(cell.lstrip())
                    raise ValueError(f"line {ln_no}, column {pos}: {exc}") from None
                col += len(cell) + 1
            rows.append(row)
        return cls(rows)

    def to_json(self) -> dict:
        return {"r": self._r, "entries": [[str(x) for x in row] for row in self._rows]}

    @classmethod
    def from_json(cls, data: dict) -> "ValMatrix":
        return cls([[parse_field_element(x) for x in row] for row in data["entries"]])


def _entry(x) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, str):
        return parse_field_element(x)
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return FieldElement.constant(x)
    raise TypeError(f"cannot build a matrix entry from {type(x).__name__}")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def identity(r: int) -> ValMatrix:
    one, zero = FieldElement.one(), FieldElement.zero()
    return ValMatrix([[one if i == j else zero for j in range(r)] for i in range(r)])


def diagonal(exponents: Sequence[RationalLike]) -> ValMatrix:
    r = len(exponents)
    zero = FieldElement.zero()
    return ValMatrix([[monomial(exponents[i]) if i == j else zero for j in range(r)] for i in range(r)])


def diag_from_partition(mu: RPartition | Sequence[RationalLike]) -> ValMatrix:
    """``D_mu = diag(t^mu_1, ..., t^mu_r)``."""
    return diagonal(list(mu))


def diag_nuhat(nu: RPartition | Sequence[RationalLike]) -> ValMatrix:
    """``D_nuhat = diag(t^nu_r, ..., t^nu_1)``."""
    return diagonal(list(reversed(list(nu))))


def reversal(r: int) -> ValMatrix:
    """The permutation matrix sending ``e_i`` to ``e_(r-i+1)``."""
    one, zero = FieldElement.one(), FieldElement.zero()
    return ValMatrix([[one if i + j == r - 1 else zero for j in range(r)] for i in range(r)])


def mat_mul(a: ValMatrix, b: ValMatrix) -> ValMatrix:
    if a.r != b.r:
        raise DimensionError("matrix sizes differ")
    r = a.r
    cols = [b.column(j) for j in range(r)]
    out = []
    for row in a.rows:
        new_row = []
        for col in cols:
            acc: dict = {}
            for x, y in zip(row, col):
                if x and y:
                    for e, c in (x * y).terms:
                        acc[e] = acc.get(e, 0) + c
            new_row.append(FieldElement._from_dict(acc))
        out.append(new_row)
    return ValMatrix(out)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def minor(M: ValMatrix, I, J) -> FieldElement:
    """Exact minor of ``M`` on 1-based rows ``I`` and columns ``J``."""
    return M.minor(I, J)


def det_divisor(M: ValMatrix, k: int):
    """Least valuation over all ``k x k`` minors (``d_0 = 0``)."""
    r = M.r
    if not 0 <= k <= r:
        raise DimensionError(f"k must lie in 0..{r}")
    if k == 0:
        return 0
    best = INFINITY
    subsets = list(itertools.combinations(range(r), k))
    for rows in subsets:
        for cols in subsets:
            v = M.minor0(rows, cols).valuation()
            if v < best:
                best = v
    return best


def invariant_partition(M: ValMatrix) -> RPartition:
    """The invariant partition ``inv(M)`` via determinantal divisors."""
    r = M.r
    if not M.is_full_rank():
        raise SingularMatrixError("invariant partitions are defined for full-rank matrices only")
    d = [det_divisor(M, k) for k in range(r + 1)]
    parts = [None] * r
    for k in range(1, r + 1):
        parts[r - k] = d[k] - d[k - 1]
    return RPartition(parts)


def _lead_quotient(a: FieldElement, p: FieldElement) -> FieldElement:
    (ea, ca), (ep, cp) = a.leading_term(), p.leading_term()
    return monomial(ea - ep, Fraction(ca) / cp)


def _reduce_entry(target_row: list, pivot_row: list, col: int, precision) -> list:
    """Subtract monomial multiples of ``pivot_row`` until ``target_row[col]`` vanishes
    below ``precision``; only leading monomials are ever divided."""
    row = target_row
    piv = pivot_row[col]
    while row[col]:
        q = _lead_quotient(row[col], piv)
        row = [(x - q * y).truncate(precision) if y else x for x, y in zip(row, pivot_row)]
    return row


def smith_reduce(M: ValMatrix, precision: RationalLike | None = None) -> RPartition:
    """Invariant partition by pivoted elimination under truncation.

    Every entry is truncated at ``precision``; elimination multipliers are
    built one leading monomial at a time.  If a pivot's valuation reaches the
    precision the result cannot be trusted and :class:`PrecisionError` is
    raised.  With ``precision=None`` the precision starts just above the
    largest entry exponent and is escalated (the span above the least entry
    valuation is doubled) until two consecutive precisions agree.
    """
    if precision is not None:
        return _smith_at(M, as_rational(precision))
    if not M.is_full_rank():
        raise SingularMatrixError("smith_reduce needs a full-rank matrix")
    low = M.min_valuation()
    high = max(x.max_exponent() for row in M.rows for x in row if x)
    span = max(high - low + 1, 1)
    previous = None
    while True:
        try:
            result = _smith_at(M, low + span)
        except PrecisionError:
            result = None
        if result is not None and result == previous:
            return result
        previous = result
        span *= 2


def _smith_at(M: ValMatrix, precision) -> RPartition:
    r = M.r
    work = [[x.truncate(precision) for x in row] for row in M.rows]
    active_r = list(range(r))
    active_c = list(range(r))
    pivots = []
    for _ in range(r):
        best = None
        for i in active_r:
            for j in active_c:
                v = work[i][j].valuation()
                if best is None or v < best[0]:
                    best = (v, i, j)
        v, pi, pj = best
        if v is INFINITY or v >= precision:
            raise PrecisionError(f"pivot valuation {v} reached precision {precision}")
        pivots.append(v)
        prow = work[pi]
        for i in active_r:
            if i != pi and work[i][pj]:
                work[i] = _reduce_entry(work[i], prow, pj, precision)
        # column elimination in the pivot row, done on the transpose
        pcol = [work[i][pj] for i in range(r)]
        for j in active_c:
            if j != pj and work[pi][j]:
                col = [work[i][j] for i in range(r)]
                col = _reduce_entry(col, pcol, pi, precision)
                for i in range(r):
                    work[i][j] = col[i]
        active_r.remove(pi)
        active_c.remove(pj)
    return RPartition(sorted(pivots, reverse=True))


def interlace_check(M: ValMatrix, H_rows, H_cols) -> bool | None:
    """Check ``mu_i >= sigma_i >= mu_(i+r-s)`` for the submatrix on ``H_rows x H_cols``.

    Returns ``None`` (a skip signal, not a violation) when the submatrix is
    singular.
    """
    rows = _as_zero_based(H_rows, M.r)
    cols = _as_zero_based(H_cols, M.r)
    if len(rows) != len(cols):
        raise DimensionError("row and column index sets differ in size")
    sub = ValMatrix([[M.rows[i][j] for j in cols] for i in rows])
    if not sub.is_full_rank():
        return None
    mu = invariant_partition(M)
    sigma = invariant_partition(sub)
    r, s = M.r, len(rows)
    return all(mu[i] >= sigma[i] >= mu[i + r - s] for i in range(s))


def interlace_bounds_check(M: ValMatrix, H_rows, H_cols) -> bool | None:
    """Check ``sigma_i >= mu_(i+r-s)`` and ``sigma_i <= mu_(i-(r-s))`` (for ``i > r-s``).

    These are the bounds that hold for every square submatrix.  The upper
    bound ``mu_i >= sigma_i`` of :func:`interlace_check` can fail once rows
    and columns are both deleted: ``[[t^5, 1], [1, 0]]`` is unimodular but
    its corner entry has ``sigma = (5)``.  ``None`` for a singular submatrix.
    """
    rows = _as_zero_based(H_rows, M.r)
    cols = _as_zero_based(H_cols, M.r)
    if len(rows) != len(cols):
        raise DimensionError("row and column index sets differ in size")
    sub = ValMatrix([[M.rows[i][j] for j in cols] for i in rows])
    if not sub.is_full_rank():
        return None
    mu = invariant_partition(M)
    sigma = invariant_partition(sub)
    d = M.r - len(rows)
    return all(sigma[i] >= mu[i + d] for i in range(len(rows))) and all(
        sigma[i] <= mu[i - d] for i in range(d, len(rows))
    )


def partition_text(mu: RPartition) -> str:
    return " ".join(format_rational(p) for p in mu)
