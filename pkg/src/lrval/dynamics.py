"""Deformation of fillings when one part of mu (or nu) is decreased.

Setting ``mu(beta) = (mu_1, ..., mu_l, beta, 0, ..., 0)`` and keeping a
mu-nuhat-generic ``L`` fixed, the ``(l+1)``-strip of the left filling is the
skew shape ``inv(D_mu(beta) L D_nuhat) / inv(D_mu(0) L D_nuhat)``.  As
``beta`` decreases the strip shrinks one row at a time, moving down the
rows; the rows and the parameter values at which the moving row changes
are read off a mu-generic matrix of the truncated pair.

Three routes compute the same breakpoints:

* ``formula``: the recursion ``beta_i = max_{j > j_(i-1)} ||a_jj|| - ||a_(l+1),j||``
  on an upper-triangular mu-generic ``N = (a_ij)``;
* ``exact``: each ``k x k`` determinantal divisor of the deformed product
  is ``min(A_k, beta + B_k)`` (minors avoiding / using the deformed row),
  so the invariant partition is piecewise linear with known kinks;
* ``search``: binary search on sampled shapes (used as a cross-check).

The nu side is the mu side of the transposed form.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable, Optional, Sequence

from .combin import (
    LRFilling,
    StripShape,
    filling_from_sequence,
    sequence_from_filling,
    validate_filling,
)
from .extract import (
    left_filling,
    left_filling_of_form,
    matrices_from_filling,
    partial_diag_product,
    right_filling,
    right_filling_of_form,
)
from .generic import (
    FormKind,
    GenericForm,
    PreconditionError,
    apply_orbit_move,
    random_orbit_move,
    to_mu_generic,
    transpose_form,
)
from .valfield import INFINITY, as_rational
from .valmat import (
    ValMatrix,
    diag_from_partition,
    diag_nuhat,
    invariant_partition,
    mat_mul,
)

__all__ = [
    "Side",
    "Segment",
    "DeformationTrace",
    "NegativePartsError",
    "TheoremViolation",
    "sweep",
    "strip_at",
    "search_breakpoints",
    "stability_check_same",
    "stability_check_below",
    "bijection_right_to_left",
    "bijection_left_to_right",
    "switching_case",
    "scalar_shift_pair",
    "minimal_nonnegative_shift",
    "frame_filling",
    "frame_parameters",
    "formula_partition",
]

MU = "MU"
NU = "NU"


class Side:
    MU = MU
    NU = NU


class NegativePartsError(ValueError):
    """Sweeps need nonnegative fillings; shift the pair first (see scalar_shift_pair)."""


class TheoremViolation(RuntimeError):
    """Two realizations of one filling produced different partner fillings."""


@dataclass(frozen=True)
class Segment:
    upper: object
    lower: object
    row: int
    strip_upper: StripShape
    strip_lower: StripShape


@dataclass
class DeformationTrace:
    side: str
    index: int
    beta0: object
    breakpoints: list  # [(beta_k, j_k)] from the explicit recursion, beta_0 first
    segments: list = field(default_factory=list)
    endpoints: tuple = ()
    exact_breakpoints: list = field(default_factory=list)

    def effective_breakpoints(self) -> list:
        """Breakpoints whose parameter interval is non-empty: ``[(upper, row)]``."""
        return [(s.upper, s.row) for s in self.segments]

    def to_json(self) -> dict:
        from .valfield import format_rational

        return {
            "side": self.side,
            "index": self.index,
            "beta0": format_rational(self.beta0),
            "breakpoints": [{"beta": format_rational(b), "row": j} for b, j in self.breakpoints],
            "segments": [
                {
                    "upper": format_rational(s.upper),
                    "lower": format_rational(s.lower),
                    "row": s.row,
                    "strip_upper": [format_rational(x) for x in s.strip_upper.rows],
                    "strip_lower": [format_rational(x) for x in s.strip_lower.rows],
                }
                for s in self.segments
            ],
        }


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _oriented(L_form: GenericForm, side: str) -> GenericForm:
    if L_form.kind is not FormKind.MU_NUHAT_GENERIC:
        raise PreconditionError("a mu-nuhat-generic form is required")
    if side == MU:
        return L_form
    if side == NU:
        return transpose_form(L_form)
    raise ValueError(f"side must be MU or NU, not {side!r}")


def _require_nonnegative(L_form: GenericForm) -> None:
    F = right_filling_of_form(L_form)
    G = left_filling_of_form(L_form)
    for name, X in (("right", F), ("left", G)):
        if any(v < 0 for row in X.parts for v in row) or any(v < 0 for v in X.mu):
            raise NegativePartsError(
                f"the {name} filling has negative parts; apply scalar_shift_pair to make it nonnegative"
            )


class _ExactStrip:
    """Exact strip shapes for the deformation of row ``l1`` (1-based) of ``mu``."""

    def __init__(self, G: GenericForm, l1: int):
        r = G.r
        self.r = r
        mu = list(G.mu)
        self.base_mu = mu[: l1 - 1]
        H0 = partial_diag_product(self.base_mu, G.matrix, list(G.nu))
        self.base = invariant_partition(H0)
        row = l1 - 1
        self.A = [0] * (r + 1)
        self.B = [0] * (r + 1)
        for k in range(1, r + 1):
            a = b = INFINITY
            for rows in itertools.combinations(range(r), k):
                for cols in itertools.combinations(range(r), k):
                    v = H0.minor0(rows, cols).valuation()
                    if row in rows:
                        b = min(b, v)
                    else:
                        a = min(a, v)
            self.A[k], self.B[k] = a, b

    def divisor(self, k: int, beta):
        if k == 0:
            return 0
        return min(self.A[k], self.B[k] + beta)

    def partition(self, beta) -> tuple:
        d = [self.divisor(k, beta) for k in range(self.r + 1)]
        return tuple(d[self.r - i] - d[self.r - i - 1] for i in range(self.r))

    def strip(self, beta) -> StripShape:
        return StripShape([x - y for x, y in zip(self.partition(beta), self.base)])

    def kinks(self) -> set:
        out = set()
        for k in range(1, self.r + 1):
            if self.A[k] is not INFINITY and self.B[k] is not INFINITY:
                out.add(self.A[k] - self.B[k])
        return out


def _moving_rows(s_hi: StripShape, s_lo: StripShape) -> list:
    return [i + 1 for i, (x, y) in enumerate(zip(s_hi.rows, s_lo.rows)) if x != y]


def _formula_breakpoints(G: GenericForm, l1: int) -> tuple:
    """``[(beta_i, j_i)]`` and the mu-generic matrix they were read from."""
    r = G.r
    mu = list(G.mu)
    mu_trunc = mu[:l1] + [0] * (r - l1)
    D = diag_from_partition(mu_trunc)
    LD = mat_mul(G.matrix, diag_nuhat(G.nu))
    Nform = to_mu_generic(D, LD, seed=G.seed or 0)
    a = Nform.matrix
    beta0 = mu[l1 - 1]
    out = [(beta0, l1)]
    j_prev = l1
    while True:
        cands = []
        for j in range(j_prev + 1, r + 1):
            top = a[l1 - 1, j - 1].valuation()
            if top is INFINITY:
                continue
            cands.append((a[j - 1, j - 1].valuation() - top, j))
        if not cands:
            break
        b = max(c[0] for c in cands)
        if b <= 0:
            break
        j = max(c[1] for c in cands if c[0] == b)
        out.append((b, j))
        j_prev = j
    return out, a, mu_trunc


def _formula_partition(a: ValMatrix, mu_trunc, l1: int, bps: list, beta) -> tuple:
    """Diagonal orders of the reduced deformed matrix, sorted."""
    r = a.r
    kappa = 0
    for idx in range(len(bps)):
        if beta <= bps[idx][0]:
            kappa = idx
    js = [j for _, j in bps]
    orders = []
    for tau in range(1, r + 1):
        diag = a[tau - 1, tau - 1].valuation()
        if tau < l1:
            orders.append(mu_trunc[tau - 1] + diag)
        elif tau in js[:kappa]:
            p = js.index(tau)
            orders.append(a[l1 - 1, tau - 1].valuation() + bps[p + 1][0])
        elif tau == js[kappa]:
            orders.append(a[l1 - 1, tau - 1].valuation() + beta)
        else:
            orders.append(diag)
    return tuple(sorted(orders, reverse=True))


def strip_at(L_form: GenericForm, side: str, index: int, beta) -> StripShape:
    """Exact ``index``-strip when the chosen part is set to ``beta``."""
    G = _oriented(L_form, side)
    return _ExactStrip(G, index).strip(as_rational(beta))


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def sweep(L_form: GenericForm, side: str, strip_index: int, check_nonnegative: bool = True) -> DeformationTrace:
    """Trace the ``strip_index``-strip as the corresponding part decreases to 0.

    ``side`` is ``MU`` (the strip of the left filling, i.e. part ``mu_l+1``)
    or ``NU`` (the strip of the right filling, part ``nu_s+1``).  Later parts
    of the deformed partition play no role (they are set to zero), so any
    ``strip_index`` in ``1..r`` is accepted.
    """
    if check_nonnegative:
        _require_nonnegative(L_form)
    G = _oriented(L_form, side)
    r = G.r
    if not 1 <= strip_index <= r:
        raise ValueError(f"strip index must lie in 1..{r}")
    l1 = strip_index
    beta0 = list(G.mu)[l1 - 1]
    if beta0 < 0:
        raise NegativePartsError("the deformed part is negative")
    ex = _ExactStrip(G, l1)
    trace = DeformationTrace(side, l1, beta0, [])
    if beta0 == 0:
        return trace
    bps, a, mu_trunc = _formula_breakpoints(G, l1)
    trace.breakpoints = bps
    # segments from the recursion: (beta_(k+1), beta_k] moves row j_k
    for k, (b, j) in enumerate(bps):
        lower = bps[k + 1][0] if k + 1 < len(bps) else 0
        if lower >= b:
            continue
        trace.segments.append(Segment(b, lower, j, ex.strip(b), ex.strip(lower)))
    # exact route: kinks of the piecewise-linear divisors
    pts = sorted({p for p in ex.kinks() if 0 < p < beta0} | {beta0, 0}, reverse=True)
    exact = []
    for hi, lo in zip(pts, pts[1:]):
        rows = _moving_rows(ex.strip(hi), ex.strip(lo))
        if not rows:
            continue
        if len(rows) != 1:
            raise RuntimeError(f"strip changed in several rows {rows} on ({lo}, {hi}]")
        if exact and exact[-1][1] == rows[0]:
            continue
        exact.append((hi, rows[0]))
    trace.exact_breakpoints = exact
    trace.endpoints = (ex.strip(beta0), ex.strip(0))
    trace._formula = (a, mu_trunc)  # type: ignore[attr-defined]
    return trace


def formula_partition(trace: DeformationTrace, beta) -> tuple:
    """Invariant partition at ``beta`` predicted by the recursion (not by minors)."""
    a, mu_trunc = trace._formula  # type: ignore[attr-defined]
    return _formula_partition(a, mu_trunc, trace.index, trace.breakpoints, as_rational(beta))


def search_breakpoints(shape: Callable, beta0, resolution=Fraction(1, 1024)) -> list:
    """Locate where the moving row changes by bisection on sampled shapes.

    ``shape(beta)`` returns a :class:`StripShape`.  Returns ``[(beta, row)]``
    with each ``beta`` within ``resolution`` of the true change point.
    """
    resolution = Fraction(resolution)
    h = resolution / 4

    def row_at(x):
        # rows move in increasing order as beta falls, so on a window that
        # straddles a change point the first moving row is the current one
        rows = _moving_rows(shape(x), shape(x - h)) if x - h >= 0 else []
        return rows[0] if rows else None

    out = []
    cur = Fraction(beta0)
    row = row_at(cur)
    out.append((cur, row))
    while cur > h:
        if row_at(h) == row:
            break
        lo, hi = h, cur
        while hi - lo > resolution:
            mid = (lo + hi) / 2
            if row_at(mid) == row:
                hi = mid
            else:
                lo = mid
        row = row_at(lo)
        out.append((hi, row))
        cur = lo
    return [(b, j) for b, j in out if j is not None]


# ---------------------------------------------------------------------------
# stability statements
# ---------------------------------------------------------------------------


def stability_check_same(L_form: GenericForm, sigma: int, alpha) -> bool:
    """Strips ``1..sigma`` agree for ``nu`` and ``nu* = (nu_1..nu_sigma, alpha, 0, ...)``."""
    alpha = as_rational(alpha)
    nu = list(L_form.nu)
    r = L_form.r
    if not 0 <= sigma < r or not 0 < alpha <= nu[sigma]:
        raise ValueError("need 0 <= sigma < r and 0 < alpha <= nu_(sigma+1)")
    nu_star = nu[:sigma] + [alpha] + [0] * (r - sigma - 1)
    D = diag_from_partition(L_form.mu)
    F = right_filling(D, mat_mul(L_form.matrix, diag_nuhat(nu)), seed=L_form.seed or 0, method="determinantal")
    Fs = right_filling(D, mat_mul(L_form.matrix, diag_nuhat(nu_star)), seed=L_form.seed or 0, method="determinantal")
    return all(F.k(i, j) == Fs.k(i, j) for i in range(1, sigma + 1) for j in range(i, r + 1))


def stability_check_below(L_form: GenericForm, ell: int, beta) -> bool:
    """Right-filling parts in rows below the changed region do not move.

    ``mu`` is truncated to ``(mu_1, ..., mu_(ell+1), 0, ...)`` and
    ``mu* = (mu_1, ..., mu_ell, beta, 0, ...)``.  ``kappa`` is the lowest row
    in which ``inv(D_mu L D_nuhat)`` changes; the check compares ``k_ij`` and
    ``k*_ij`` for ``j > kappa``.
    """
    beta = as_rational(beta)
    r = L_form.r
    mu = list(L_form.mu)
    if not 0 <= ell < r:
        raise ValueError(f"ell must lie in 0..{r - 1}")
    top = mu[ell]
    if not 0 < beta <= top:
        raise ValueError(f"beta must lie in (0, {top}]")
    mu_trunc = mu[: ell + 1] + [0] * (r - ell - 1)
    mu_star = mu[:ell] + [beta] + [0] * (r - ell - 1)
    LD = mat_mul(L_form.matrix, diag_nuhat(L_form.nu))
    lam = invariant_partition(mat_mul(diag_from_partition(mu_trunc), LD))
    lam_star = invariant_partition(mat_mul(diag_from_partition(mu_star), LD))
    changed = [i + 1 for i in range(r) if lam[i] != lam_star[i]]
    kappa = max(changed) if changed else ell + 1
    seed = L_form.seed or 0
    F = right_filling(diag_from_partition(mu_trunc), LD, seed=seed, method="determinantal")
    Fs = right_filling(diag_from_partition(mu_star), LD, seed=seed, method="determinantal")
    return all(F.k(i, j) == Fs.k(i, j) for j in range(kappa + 1, r + 1) for i in range(1, j + 1))


# ---------------------------------------------------------------------------
# the left/right bijection
# ---------------------------------------------------------------------------


def _realizations(M: ValMatrix, N: ValMatrix, trials: int, seed: int):
    rng = random.Random(seed)
    yield M, N
    for _ in range(trials - 1):
        yield apply_orbit_move(M, N, random_orbit_move(rng, M.r))


def bijection_right_to_left(F: LRFilling, trials: int = 5, seed: int = 0) -> LRFilling:
    """Left filling shared by every matrix pair whose right filling is ``F``."""
    bad = validate_filling(F)
    if bad:
        raise ValueError("invalid filling: " + "; ".join(str(v) for v in bad))
    M, _, N = matrices_from_filling(F)
    results = []
    for t, (A, B) in enumerate(_realizations(M, N, trials, seed)):
        results.append(left_filling(A, B, seed=seed + t))
    if any(G != results[0] for G in results[1:]):
        raise TheoremViolation("realizations of one right filling gave different left fillings")
    return results[0]


def bijection_left_to_right(G: LRFilling, trials: int = 5, seed: int = 0) -> LRFilling:
    """Inverse map: right filling shared by every pair whose left filling is ``G``.

    ``G`` is realized as the right filling of some ``(A, B)``; the transposed
    pair ``(B^T, A^T)`` then has left filling ``G``.
    """
    bad = validate_filling(G)
    if bad:
        raise ValueError("invalid filling: " + "; ".join(str(v) for v in bad))
    A, _, B = matrices_from_filling(G)
    M, N = B.transpose(), A.transpose()
    results = []
    for t, (X, Y) in enumerate(_realizations(M, N, trials, seed)):
        results.append(right_filling(X, Y, seed=seed + t, method="determinantal"))
    if any(F != results[0] for F in results[1:]):
        raise TheoremViolation("realizations of one left filling gave different right fillings")
    return results[0]


def _last_nonzero(parts: Sequence) -> int:
    idx = 0
    for i, p in enumerate(parts, start=1):
        if p != 0:
            idx = i
    return idx


def switching_case(F: LRFilling, seed: int = 0) -> Optional[int]:
    """Which case of the switching argument the last strips of ``F`` fall into.

    With ``l+1`` and ``s+1`` the last nonzero indices of ``mu`` and ``nu``:
    ``S = lambda^(s)``, the ``mu_(l+1)``-strip of the left filling over
    ``(nu_1, ..., nu_s)`` occupies ``[S_j - m_j, S_j]`` in row ``j``, and the
    first block ``P_1`` of the ``nu_(s+1)``-strip starts at ``S_j*`` in the
    lowest row ``j*`` it meets.  Case 2 when ``P_1`` sits directly under a
    block of the ``mu``-strip, Case 1 otherwise.  ``None`` when either strip
    is empty or the data has negative parts.
    """
    r = F.r
    if any(v < 0 for row in F.parts for v in row) or any(v < 0 for v in F.mu):
        return None
    l1 = _last_nonzero(F.mu)
    s1 = _last_nonzero(F.nu)
    if l1 == 0 or s1 == 0:
        return None
    seq = sequence_from_filling(F)
    S = list(seq[s1 - 1])
    trunc = LRFilling(F.mu, [list(F.parts[i]) if i < s1 - 1 else [0] * (r - i) for i in range(r)])
    G = bijection_right_to_left(trunc, trials=1, seed=seed)
    m = [G.k(l1, j) if j >= l1 else 0 for j in range(1, r + 1)]
    rows = [j for j in range(s1, r + 1) if F.k(s1, j) > 0]
    if not rows:
        return None
    js = max(rows)
    if js >= 2:
        above = js - 1
        if m[above - 1] > 0 and S[above - 1] - m[above - 1] <= S[js - 1] < S[above - 1]:
            return 2
    return 1


# ---------------------------------------------------------------------------
# scalar shifts
# ---------------------------------------------------------------------------


def scalar_shift_pair(M: ValMatrix, N: ValMatrix, alpha, beta) -> tuple:
    """``(t^beta M, t^alpha N)``: right edges move by ``alpha``, left edges by ``beta``."""
    alpha, beta = as_rational(alpha), as_rational(beta)
    return M.map(lambda x: x.shift(beta)), N.map(lambda x: x.shift(alpha))


def _ceil_half(x) -> Fraction:
    return Fraction(ceil(Fraction(x) * 2), 2)


def minimal_nonnegative_shift(M: ValMatrix, N: ValMatrix, seed: int = 0) -> tuple:
    """Least ``(alpha, beta)`` on the half-integer grid making both fillings nonnegative.

    Shifting moves only edge parts, so the bound is ``-min k_ii`` (right
    filling) and ``-min m_ii`` (left filling), rounded up to the grid.
    """
    F = right_filling(M, N, seed=seed, method="determinantal")
    G = left_filling(M, N, seed=seed)
    alpha = _ceil_half(-min(F.edges()))
    beta = _ceil_half(-min(G.edges()))
    return alpha, beta


def frame_filling(L_form: GenericForm, side: str, index: int, beta) -> LRFilling:
    """The filling drawn at parameter ``beta`` of a sweep.

    Strips before ``index`` are the undeformed ones, strip ``index`` is the
    deformed one and later strips are empty.  On the ``MU`` side this is a
    filling of ``lambda/nu`` with content ``mu``, on the ``NU`` side one of
    ``lambda/mu`` with content ``nu``.
    """
    G = _oriented(L_form, side)
    r = G.r
    mu = list(G.mu)
    deformed = mu[: index - 1] + [as_rational(beta)]
    seq = [invariant_partition(partial_diag_product(deformed[:i], G.matrix, list(G.nu))) for i in range(index + 1)]
    seq += [seq[-1]] * (r - index)
    return filling_from_sequence(seq)


def frame_parameters(trace: DeformationTrace) -> list:
    """Parameter values worth drawing: each breakpoint, segment midpoints and 0."""
    pts = {trace.beta0, Fraction(0)}
    for s in trace.segments:
        pts.add(s.upper)
        pts.add(s.lower)
        pts.add((Fraction(s.upper) + Fraction(s.lower)) / 2)
    return sorted(pts, reverse=True)
