"""Real-valued Littlewood-Richardson fillings.

A filling over the base partition ``mu`` is a triangular array ``k[i][j]``
(``1 <= i <= j <= r``).  Part ``k_ij`` is the length of the ``i``-strip in
row ``j``; ``nu_i`` is the ``i``-th row sum and ``lambda_j = mu_j + sum_s k_sj``.
Both are derived from the parts and never stored.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .valfield import Rational, RationalLike, as_rational, format_rational, parse_rational
from .valmat import RPartition

__all__ = [
    "LRFilling",
    "Violation",
    "StripShape",
    "ContainmentError",
    "ScaleError",
    "validate_filling",
    "filling_from_sequence",
    "sequence_from_filling",
    "shift_filling",
    "enumerate_integer_fillings",
    "count_integer_fillings",
    "strip",
    "initial_segment",
    "step_problem",
]


class ContainmentError(ValueError):
    pass


class ScaleError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    condition: str
    i: int
    j: int
    detail: str

    def __str__(self) -> str:
        return f"{self.condition} at (i,j)=({self.i},{self.j}): {self.detail}"


class LRFilling:
    """Immutable triangular array of parts over a base partition ``mu``.

    ``parts[i-1]`` holds row ``i`` of the array, i.e. ``(k_ii, ..., k_ir)``.
    """

    __slots__ = ("mu", "_rows")

    def __init__(self, mu: RPartition | Sequence[RationalLike], parts: Sequence[Sequence[RationalLike]]):
        mu = mu if isinstance(mu, RPartition) else RPartition(mu)
        r = len(mu)
        rows = tuple(tuple(as_rational(x) for x in row) for row in parts)
        if len(rows) != r or any(len(rows[i]) != r - i for i in range(r)):
            raise ValueError(f"a filling of size {r} needs rows of lengths {r}, {r - 1}, ..., 1")
        self.mu = mu
        self._rows = rows

    @property
    def r(self) -> int:
        return len(self.mu)

    @property
    def parts(self) -> tuple:
        return self._rows

    def k(self, i: int, j: int) -> Rational:
        """Part ``k_ij`` (1-based, ``i <= j``)."""
        if not 1 <= i <= j <= self.r:
            raise IndexError(f"no part k_{i}{j} in a filling of size {self.r}")
        return self._rows[i - 1][j - i]

    def column_sum(self, i: int, j: int) -> Rational:
        """``k_1j + ... + k_ij``."""
        return sum((self.k(s, j) for s in range(1, min(i, j) + 1)), 0)

    @property
    def nu(self) -> tuple:
        """Row sums ``nu_i = sum_j k_ij`` (not necessarily a partition on invalid data)."""
        return tuple(sum(row, 0) for row in self._rows)

    @property
    def lam(self) -> tuple:
        """``lambda_j = mu_j + sum_s k_sj``."""
        return tuple(self.mu[j - 1] + self.column_sum(j, j) for j in range(1, self.r + 1))

    def nu_partition(self) -> RPartition:
        return RPartition(self.nu)

    def lam_partition(self) -> RPartition:
        return RPartition(self.lam)

    def interior(self) -> dict:
        return {(i, j): self.k(i, j) for i in range(1, self.r + 1) for j in range(i + 1, self.r + 1)}

    def edges(self) -> tuple:
        return tuple(self.k(i, i) for i in range(1, self.r + 1))

    def is_valid(self) -> bool:
        return not validate_filling(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, LRFilling) and self.mu == other.mu and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.mu, self._rows))

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(_short(x) for x in row) for row in self._rows)
        return f"LRFilling(mu=({', '.join(_short(m) for m in self.mu)}), k=[{rows}])"

    # -- formats --------------------------------------------------------
    def to_text(self) -> str:
        lines = ["mu: " + " ".join(format_rational(m) for m in self.mu)]
        for i, row in enumerate(self._rows, start=1):
            lines.append(f"row {i}: " + " ".join(format_rational(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LRFilling":
        lines = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("line 1: empty filling file")
        n0, head = lines[0]
        if not head.strip().startswith("mu:"):
            raise ValueError(f"line {n0}, column 1: expected 'mu: ...'")
        mu = _tokens(head.split(":", 1)[1], n0, head.index(":") + 1)
        r = len(mu)
        if len(lines) != r + 1:
            raise ValueError(f"line {lines[-1][0]}: expected {r} 'row i:' lines, got {len(lines) - 1}")
        rows = []
        for expect, (n, ln) in enumerate(lines[1:], start=1):
            label, _, rest = ln.partition(":")
            if label.strip() != f"row {expect}":
                raise ValueError(f"line {n}, column 1: expected 'row {expect}:'")
            toks = _tokens(rest, n, len(label) + 1)
            if len(toks) != r - expect + 1:
                raise ValueError(f"line {n}: row {expect} needs {r - expect + 1} parts, got {len(toks)}")
            rows.append(toks)
        return cls(mu, rows)

    def to_json(self) -> dict:
        return {
            "mu": [format_rational(m) for m in self.mu],
            "rows": [[format_rational(x) for x in row] for row in self._rows],
            "nu": [format_rational(x) for x in self.nu],
            "lambda": [format_rational(x) for x in self.lam],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "LRFilling":
        if isinstance(data, str):
            data = json.loads(data)
        return cls([parse_rational(str(m)) for m in data["mu"]],
                   [[parse_rational(str(x)) for x in row] for row in data["rows"]])


def _short(x) -> str:
    q = Fraction(x)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _tokens(text: str, line: int, offset: int) -> list:
    """Rationals of a whitespace-separated field starting at 0-based ``offset``."""
    out = []
    for m in re.finditer(r"\S+", text):
        try:
            out.append(parse_rational(m.group()))
        except ValueError:
            raise ValueError(f"line {line}, column {offset + m.start() + 1}: bad rational token {m.group()!r}") from None
    return out


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_filling(F: LRFilling) -> list[Violation]:
    """List every violated condition; an empty list means ``F`` is a valid filling."""
    r, mu = F.r, F.mu
    out: list[Violation] = []
    nu, lam = F.nu, F.lam
    for a in range(r - 1):
        if nu[a] < nu[a + 1]:
            out.append(Violation("LR1", a + 1, a + 2, f"row sums nu_{a + 1}={_short(nu[a])} < nu_{a + 2}={_short(nu[a + 1])}"))
        if lam[a] < lam[a + 1]:
            out.append(Violation("LR1", a + 1, a + 2, f"lambda_{a + 1}={_short(lam[a])} < lambda_{a + 2}={_short(lam[a + 1])}"))
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            if F.k(i, j) < 0:
                out.append(Violation("LR2", i, j, f"interior part k_{i}{j}={_short(F.k(i, j))} is negative"))
    # column strictness
    for j in range(2, r + 1):
        for i in range(1, j + 1):
            lhs = mu[j - 1] + F.column_sum(i, j)
            rhs = mu[j - 2] + (F.column_sum(i - 1, j - 1) if i >= 2 else 0)
            if lhs > rhs:
                out.append(Violation("LR3", i, j, f"{_short(lhs)} > {_short(rhs)}"))
    # word condition
    for i in range(1, r):
        for j in range(i, r):
            lhs = sum((F.k(i + 1, s) for s in range(i + 1, j + 2)), 0)
            rhs = sum((F.k(i, s) for s in range(i, j + 1)), 0)
            if lhs > rhs:
                out.append(Violation("LR4", i, j, f"{_short(lhs)} > {_short(rhs)}"))
    return out


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------


def filling_from_sequence(seq: Sequence[RPartition | Sequence[RationalLike]]) -> LRFilling:
    """Read ``k_ij = lambda^(i)_j - lambda^(i-1)_j`` off a chain of partitions."""
    seq = [s if isinstance(s, RPartition) else RPartition(s) for s in seq]
    if not seq:
        raise ValueError("empty sequence")
    r = len(seq[0])
    if len(seq) != r + 1 or any(len(s) != r for s in seq):
        raise ValueError(f"a sequence for size {r} needs {r + 1} partitions of length {r}")
    for step in range(1, r + 1):
        problem = step_problem(seq[step - 1], seq[step], step)
        if problem:
            raise ContainmentError(f"step {step}: {problem}")
    rows = []
    for i in range(1, r + 1):
        rows.append([seq[i][j - 1] - seq[i - 1][j - 1] for j in range(i, r + 1)])
    return LRFilling(seq[0], rows)


def step_problem(prev: Sequence[RationalLike], cur: Sequence[RationalLike], i: int) -> str | None:
    """Why ``cur / prev`` cannot be the ``i``-strip of a filling (``None`` if it can).

    Rows above row ``i`` must not change and rows below it must not shrink.
    Row ``i`` itself carries the edge part, which may be negative, so the
    chain is a containment exactly when the edge part is non-negative.
    """
    for j in range(1, len(cur) + 1):
        d = cur[j - 1] - prev[j - 1]
        if j < i and d != 0:
            return f"row {j} changes although the {i}-strip starts at row {i}"
        if j > i and d < 0:
            return f"row {j} shrinks from {_short(prev[j - 1])} to {_short(cur[j - 1])}"
    return None


def sequence_from_filling(F: LRFilling) -> list[RPartition]:
    """The chain ``mu = lambda^(0) <= lambda^(1) <= ... <= lambda^(r) = lambda``."""
    r = F.r
    cur = list(F.mu)
    out = [RPartition(cur)]
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            cur[j - 1] += F.k(i, j)
        out.append(RPartition(cur))
    return out


def shift_filling(F: LRFilling, alpha: RationalLike, side: str = "right") -> LRFilling:
    """Add ``alpha`` to every edge part.

    ``side="right"`` keeps the base and shifts content and outer shape by
    ``alpha``.  ``side="left"`` also shifts the base ``mu`` by ``alpha``; then
    the content is unchanged and the outer shape moves by ``2 alpha``.
    """
    a = as_rational(alpha)
    rows = [[x + a if pos == 0 else x for pos, x in enumerate(row)] for row in F.parts]
    if side == "right":
        return LRFilling(F.mu, rows)
    if side == "left":
        return LRFilling(F.mu.shifted(a), rows)
    raise ValueError("side must be 'left' or 'right'")


# ---------------------------------------------------------------------------
# enumeration oracle
# ---------------------------------------------------------------------------

MAX_R = 5
MAX_SIZE = 40


def enumerate_integer_fillings(mu, nu, lam, limit: int | None = None) -> tuple[int, list[LRFilling]]:
    """All integer fillings with non-negative parts in ``LR(mu, nu; lam)``.

    Parts are chosen row of the diagram by row (``j``), and within a row by
    strip (``i``); column strictness and the word condition are checked as
    soon as their terms are known, row sums are pruned against ``nu``.
    """
    mu, nu, lam = (p if isinstance(p, RPartition) else RPartition(p) for p in (mu, nu, lam))
    r = len(mu)
    if not (len(nu) == len(lam) == r):
        raise ValueError("partitions must have equal length")
    for name, p in (("mu", mu), ("nu", nu), ("lambda", lam)):
        if not (p.is_integral() and p.is_nonnegative()):
            raise ValueError(f"{name} must consist of non-negative integers")
    if r > MAX_R or lam.size() > MAX_SIZE:
        raise ScaleError(f"enumeration limited to r <= {MAX_R} and |lambda| <= {MAX_SIZE}")
    if mu.size() + nu.size() != lam.size() or not lam.contains(mu):
        return 0, []
    mu_t = [int(x) for x in mu]
    nu_t = [int(x) for x in nu]
    lam_t = [int(x) for x in lam]
    k = [[0] * (r + 1) for _ in range(r + 1)]
    rowsum = [0] * (r + 1)   # rowsum[i] = sum of k[i][s] placed so far
    colpre = [[0] * (r + 1) for _ in range(r + 1)]  # colpre[j][i] = k_1j + ... + k_ij
    found: list[LRFilling] = []
    count = 0

    def place(j: int, i: int, remaining: int):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if i == j:
            choices = [remaining]
        else:
            choices = range(remaining + 1)
        for v in choices:
            if v < 0 or rowsum[i] + v > nu_t[i - 1]:
                continue
            c = colpre[j][i - 1] + v
            # column strictness against the previous diagram row
            if j >= 2 and mu_t[j - 1] + c > mu_t[j - 2] + (colpre[j - 1][i - 1] if i >= 2 else 0):
                continue
            # word condition: strip i through row j vs strip i-1 through row j-1
            if i >= 2 and rowsum[i] + v > rowsum_upto(i - 1, j - 1):
                continue
            k[i][j] = v
            colpre[j][i] = c
            rowsum[i] += v
            if i == j:
                if j == r:
                    if all(rowsum[s] == nu_t[s - 1] for s in range(1, r + 1)):
                        count += 1
                        found.append(LRFilling(mu_t, [[k[a][b] for b in range(a, r + 1)] for a in range(1, r + 1)]))
                else:
                    place(j + 1, 1, lam_t[j] - mu_t[j])
            else:
                place(j, i + 1, remaining - v)
            rowsum[i] -= v
            k[i][j] = 0
            colpre[j][i] = 0

    def rowsum_upto(i: int, j: int) -> int:
        return sum(k[i][s] for s in range(i, j + 1))

    place(1, 1, lam_t[0] - mu_t[0])
    return count, found


def count_integer_fillings(mu, nu, lam) -> int:
    return enumerate_integer_fillings(mu, nu, lam)[0]


# ---------------------------------------------------------------------------
# strips
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StripShape:
    """Row lengths of one strip; ``rows[j-1]`` is the length in diagram row ``j``."""

    rows: tuple

    def __init__(self, rows: Iterable[RationalLike]):
        object.__setattr__(self, "rows", tuple(as_rational(x) for x in rows))

    def __len__(self) -> int:
        return len(self.rows)

    def size(self) -> Rational:
        return sum(self.rows, 0)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.rows)


def strip(F: LRFilling, i: int) -> StripShape:
    """The ``i``-strip of ``F`` as row lengths over all ``r`` diagram rows."""
    r = F.r
    return StripShape([F.k(i, j) if j >= i else 0 for j in range(1, r + 1)])


def initial_segment(S1: StripShape, S2: StripShape) -> bool:
    """True iff ``S1`` is an initial segment of ``S2``.

    That is, for some row ``j``: identical parts below ``j``, empty above ``j``,
    and row ``j`` of ``S1`` no longer than row ``j`` of ``S2``.
    """
    if len(S1) != len(S2):
        raise ValueError("strips of different sizes")
    if not (S1.is_nonnegative() and S2.is_nonnegative()):
        raise ValueError("initial segments are defined for non-negative strips only")
    n = len(S1)
    for j in range(n):  # row j (0-based) is the partial row
        if all(S1.rows[a] == 0 for a in range(j)) and S1.rows[j] <= S2.rows[j] and all(
            S1.rows[b] == S2.rows[b] for b in range(j + 1, n)
        ):
            return True
    return all(x == 0 for x in S1.rows)
