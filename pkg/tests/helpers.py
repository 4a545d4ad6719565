"""Shared fixtures data and random generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from lrval.combin import LRFilling, validate_filling
from lrval.valfield import FieldElement, monomial
from lrval.valmat import ValMatrix, diagonal

DATA = Path(__file__).parent / "data"

t = monomial
ZERO = FieldElement.zero()

WORKED_MU = (9, 5, 2, 1)
WORKED_NU = (11, 6, 3, 2)
WORKED_LAMBDA = (15, 10, 8, 6)
WORKED_RIGHT = [[6, 2, 2, 1], [3, 2, 1], [2, 1], [2]]
WORKED_LEFT = [[4, 2, 2, 1], [2, 2, 1], [1, 1], [1]]
WORKED_RIGHT_SEQ = [(9, 5, 2, 1), (15, 7, 4, 2), (15, 10, 6, 3), (15, 10, 8, 4), (15, 10, 8, 6)]
WORKED_LEFT_SEQ = [(11, 6, 3, 2), (15, 8, 5, 3), (15, 10, 7, 4), (15, 10, 8, 5), (15, 10, 8, 6)]


def worked_M() -> ValMatrix:
    return diagonal(list(WORKED_MU))


def worked_N() -> ValMatrix:
    return ValMatrix([
        [t(6), t(3), t(2), t(2)],
        [ZERO, t(5), t(4, 2), t(3) + t(4, 2)],
        [ZERO, ZERO, t(6), t(4) + t(5) + t(6)],
        [ZERO, ZERO, ZERO, t(5)],
    ])


def worked_L() -> ValMatrix:
    one = t(0)
    return ValMatrix([
        [one, ZERO, ZERO, ZERO],
        [t(2, 2) + t(1), one, ZERO, ZERO],
        [t(4) + t(3) + t(2), t(2) + t(1), one, ZERO],
        [t(3), t(2), t(1), one],
    ])


def worked_filling() -> LRFilling:
    return LRFilling(list(WORKED_MU), WORKED_RIGHT)


def random_filling(rng: random.Random, r: int, cap: int = 12, mu_cap: int = 12) -> LRFilling:
    """A random nonnegative integer filling, built part by part.

    Each part is drawn among the values that keep the filling valid when
    all later parts are zero (zero parts never break validity), so the
    sampler only relies on the validator.
    """
    mu = sorted((rng.randint(0, mu_cap) for _ in range(r)), reverse=True)
    rows = [[0] * (r - i) for i in range(r)]
    for i in range(r):
        for j in range(i, r):
            choices = []
            for v in range(cap + 1):
                rows[i][j - i] = v
                if not validate_filling(LRFilling(mu, rows)):
                    choices.append(v)
            # favour small parts so later strips keep some room
            rows[i][j - i] = rng.choice(choices[: max(1, len(choices) // 2 + 1)])
    F = LRFilling(mu, rows)
    assert not validate_filling(F)
    return F


def random_monomial_pair(rng: random.Random, r: int, density: float = 0.8):
    """Random full-rank pair with entries ``c t^e``, ``e`` in ``{0, 1/2, ..., 10}``."""
    def mat():
        while True:
            rows = [
                [t(Fraction(rng.randint(0, 20), 2), rng.choice([-3, -2, -1, 1, 2, 3])) if rng.random() < density else ZERO
                 for _ in range(r)]
                for _ in range(r)
            ]
            A = ValMatrix(rows)
            if not A.det().is_zero():
                return A

    return mat(), mat()


def check_sweep(L_form, side: str, index: int, rng: random.Random, samples: int = 50) -> int:
    """Assert the sweep properties of one strip; returns the number of segments.

    * effective breakpoints from the recursion equal the kinks found from
      exact minors, and moving rows strictly increase;
    * bisection on sampled shapes finds the same rows within 1/1024;
    * at ``samples`` random parameters the strips shrink by initial segments
      and the recursion predicts the same partitions as direct extraction.
    """
    from lrval.combin import initial_segment, sequence_from_filling
    from lrval.dynamics import formula_partition, frame_filling, search_breakpoints, strip_at, sweep

    trace = sweep(L_form, side, index)
    eff = trace.effective_breakpoints()
    assert eff == trace.exact_breakpoints, (eff, trace.exact_breakpoints)
    rows = [j for _, j in eff]
    assert rows == sorted(set(rows))
    for s in trace.segments:
        assert initial_segment(s.strip_lower, s.strip_upper)
    if trace.beta0 == 0:
        return 0
    shape = lambda b: strip_at(L_form, side, index, b)
    found = search_breakpoints(shape, trace.beta0)
    assert [j for _, j in found] == rows, (found, eff)
    for (b, j), (e, k) in zip(found, eff):
        assert abs(Fraction(b) - Fraction(e)) <= Fraction(1, 1024)
    beta0 = Fraction(trace.beta0)
    pts = sorted({beta0 * Fraction(rng.randint(0, 1000), 1000) for _ in range(samples)} | {beta0}, reverse=True)
    prev = None
    for b in pts:
        cur = shape(b)
        if prev is not None:
            assert initial_segment(cur, prev), (b, cur, prev)
        prev = cur
    for b in pts[:: max(1, len(pts) // 8)]:
        direct = sequence_from_filling(frame_filling(L_form, side, index, b))[index]
        assert tuple(formula_partition(trace, b)) == tuple(direct)
    return len(trace.segments)
