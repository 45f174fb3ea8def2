"""Score bounds, guarantee intervals, and staircase error-bound paths.

Given one solved weight vector ``w`` at regularization value ``ct`` together
with its objective subgradient ``g``, every validation score ``w*_C . x`` is
bracketed for all C > 0 by two affine-in-C envelopes built from the quadruple

    alpha = (||w||*||x|| + w.x) / 2      gamma = (||g||*||x|| + g.x) / 2
    beta  = (||w||*||x|| - w.x) / 2      delta = (||g||*||x|| - g.x) / 2

as

    lower(C) = alpha - (C/ct)*(beta + gamma)     for C >= ct
               -beta + (C/ct)*(alpha - gamma)    for C <= ct
    upper(C) = -beta + (C/ct)*(alpha + delta)    for C >= ct
               alpha - (C/ct)*(beta - delta)     for C <= ct

Both branch pairs agree at C = ct, where they give w.x - gamma and
w.x + delta.  Whenever an envelope keeps a validation score on the wrong
(right) side of zero, the instance is guaranteed misclassified (correctly
classified) on an interval of C values around ct; counting those guarantees
yields piecewise-constant lower/upper bounds on the validation error as
functions of C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabeledInstance
from .errors import DataError

__all__ = [
    "BoundCoefficients",
    "ScoreBoundLine",
    "GuaranteeInterval",
    "StaircaseBound",
    "SolutionBounds",
    "coefficients",
    "score_bounds",
    "misclassified_interval",
    "correct_interval",
    "point_bounds",
    "lower_bound_path",
    "upper_bound_path",
]


@dataclass(frozen=True)
class BoundCoefficients:
    """The (alpha, beta, gamma, delta) quadruple for one (solution, instance) pair."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    @property
    def score(self):
        return self.alpha - self.beta

    @property
    def score_lb_at_ct(self):
        return self.score - self.gamma

    @property
    def score_ub_at_ct(self):
        return self.score + self.delta


def _instance_vector(x, dim):
    if isinstance(x, LabeledInstance):
        return x.dense(dim)
    return np.asarray(x, dtype=np.float64)


def coefficients(solution, x):
    """Bound coefficients for validation input ``x`` (LabeledInstance or array)."""
    xv = _instance_vector(x, solution.weights.shape[0])
    xn = float(np.linalg.norm(xv))
    if xn == 0.0:
        raise DataError("all-zero validation input has no usable score bounds")
    s = float(solution.weights @ xv)
    gx = float(solution.g @ xv)
    return BoundCoefficients(
        alpha=0.5 * (solution.norm_w * xn + s),
        beta=0.5 * (solution.norm_w * xn - s),
        gamma=0.5 * (solution.norm_g * xn + gx),
        delta=0.5 * (solution.norm_g * xn - gx),
    )


@dataclass(frozen=True)
class ScoreBoundLine:
    """Affine score envelopes around c_tilde; each piece is (intercept, slope)."""

    lb_left: tuple
    lb_right: tuple
    ub_left: tuple
    ub_right: tuple
    c_tilde: float

    @classmethod
    def from_coefficients(cls, co, c_tilde):
        a, b, g, d = co.alpha, co.beta, co.gamma, co.delta
        return cls(
            lb_left=(-b, (a - g) / c_tilde),
            lb_right=(a, -(b + g) / c_tilde),
            ub_left=(a, -(b - d) / c_tilde),
            ub_right=(-b, (a + d) / c_tilde),
            c_tilde=c_tilde,
        )

    def evaluate(self, C):
        if C >= self.c_tilde:
            lb = self.lb_right[0] + self.lb_right[1] * C
            ub = self.ub_right[0] + self.ub_right[1] * C
        else:
            lb = self.lb_left[0] + self.lb_left[1] * C
            ub = self.ub_left[0] + self.ub_left[1] * C
        return lb, ub


def score_bounds(solution, x, C):
    """(lower, upper) bracket of the optimal score w*_C . x, from one solution."""
    if not C > 0:
        raise DataError("C must be > 0")
    line = ScoreBoundLine.from_coefficients(coefficients(solution, x), solution.c)
    return line.evaluate(C)


@dataclass(frozen=True)
class GuaranteeInterval:
    """C-interval on which one validation instance's outcome is guaranteed."""

    lo: float
    hi: float
    kind: str  # "misclassified" | "correct"
    instance_index: int = 0
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, C):
        above = C > self.lo or (self.lo_closed and C == self.lo)
        below = C < self.hi or (self.hi_closed and C == self.hi)
        return above and below


def _ratio(num, den, ct, empty_value):
    """num/den * ct with the zero-denominator limit mapped to ``empty_value``."""
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.full(num.shape, empty_value, dtype=np.float64)
    ok = den > 0.0
    np.divide(num, den, out=out, where=ok)
    out[ok] *= ct
    return out


class SolutionBounds:
    """Vectorized bound quantities for one solution against a validation set.

    Ratio conventions: guarantees that never expire map to breakpoint +inf on
    the right of c_tilde and 0 on the left.  Membership in the guarantee sets
    uses strict comparisons against exact 0.0 for misclassification and
    non-strict for correctness (scores of exactly zero count as correct).
    """

    def __init__(self, solution, validation):
        self.solution = solution
        self.validation = validation
        self.n_prime = validation.n
        ct = solution.c
        self.c_tilde = ct
        xn = validation.row_norms()
        s = validation.X @ solution.weights
        gx = validation.X @ solution.g
        wn, gn = solution.norm_w, solution.norm_g
        self.alpha = 0.5 * (wn * xn + s)
        self.beta = 0.5 * (wn * xn - s)
        self.gamma = 0.5 * (gn * xn + gx)
        self.delta = 0.5 * (gn * xn - gx)
        self.score = s
        lb0 = s - self.gamma
        ub0 = s + self.delta
        pos = validation.y > 0
        self.P = pos & (ub0 < 0.0)
        self.N = ~pos & (lb0 > 0.0)
        self.P_ok = pos & (lb0 >= 0.0)
        self.N_ok = ~pos & (ub0 <= 0.0)
        # Right-of-ct / left-of-ct expiry breakpoints of the four envelopes.
        self.r1 = _ratio(self.beta, self.alpha + self.delta, ct, np.inf)
        self.r2 = _ratio(self.alpha, self.beta + self.gamma, ct, np.inf)
        self.l1 = _ratio(self.alpha, self.beta - self.delta, ct, 0.0)
        self.l2 = _ratio(self.beta, self.alpha - self.gamma, ct, 0.0)

    # -- point bounds at c_tilde (counts are exact integers) ---------------

    @property
    def miss_count(self):
        return int(self.P.sum() + self.N.sum())

    @property
    def correct_count(self):
        return int(self.P_ok.sum() + self.N_ok.sum())

    def point_bounds(self):
        lb = self.miss_count / self.n_prime
        ub = (self.n_prime - self.correct_count) / self.n_prime
        return lb, ub

    # -- guarantee intervals -----------------------------------------------

    def _member_spans(self, miss):
        """(lo, hi) per member instance; each span strictly brackets c_tilde."""
        if miss:
            mask1, mask2 = self.P, self.N
        else:
            mask1, mask2 = self.N_ok, self.P_ok
        lo = np.concatenate([self.l1[mask1], self.l2[mask2]])
        hi = np.concatenate([self.r1[mask1], self.r2[mask2]])
        # Membership proves the guarantee at c_tilde itself; roundoff in the
        # ratios must not detach a span from it.
        return np.minimum(lo, self.c_tilde), np.maximum(hi, self.c_tilde)

    def lower_staircase(self, c_min, c_max):
        lo, hi = self._member_spans(miss=True)
        return StaircaseBound.from_spans(lo, hi, self.n_prime, "lower", c_min, c_max)

    def upper_staircase(self, c_min, c_max):
        lo, hi = self._member_spans(miss=False)
        return StaircaseBound.from_spans(lo, hi, self.n_prime, "upper", c_min, c_max)

    # -- breakpoint multisets driving the search algorithms -----------------

    def gamma_set(self):
        """Right-going expiry points of the misclassification guarantees, ascending."""
        vals = np.concatenate([self.r1[self.P], self.r2[self.N]])
        return np.sort(vals[np.isfinite(vals)])

    def delta_set(self):
        """Left-going expiry points of the misclassification guarantees, descending."""
        vals = np.concatenate([self.l1[self.P], self.l2[self.N]])
        return -np.sort(-vals[vals > 0.0])

    def lambda_set(self):
        """Right-going expiry points of both guarantee families, ascending."""
        vals = np.concatenate(
            [self.r1[self.P | self.N_ok], self.r2[self.N | self.P_ok]]
        )
        return np.sort(vals[np.isfinite(vals)])


def _single_instance_intervals(solution, x, y, index, miss, c_min, c_max):
    co = coefficients(solution, x)
    ct = solution.c
    a, b, g, d = co.alpha, co.beta, co.gamma, co.delta

    def ratio(num, den, empty):
        return num / den * ct if den > 0 else empty

    if miss:
        member = (co.score_ub_at_ct < 0.0) if y > 0 else (co.score_lb_at_ct > 0.0)
        closed = False
        kind = "misclassified"
    else:
        member = (co.score_lb_at_ct >= 0.0) if y > 0 else (co.score_ub_at_ct <= 0.0)
        closed = True
        kind = "correct"
    if not member:
        return []
    if (y > 0) == miss:
        lo, hi = ratio(a, b - d, 0.0), ratio(b, a + d, np.inf)
    else:
        lo, hi = ratio(b, a - g, 0.0), ratio(a, b + g, np.inf)
    lo, hi = min(lo, ct), max(hi, ct)
    out = []
    # membership itself proves the guarantee at ct, so the left piece is
    # closed there; the far endpoints follow the strict/non-strict sign tests
    for raw_lo, raw_hi, lo_c, hi_c in (
        (lo, ct, closed, True),
        (ct, hi, False, closed),
    ):
        clo, chi = max(raw_lo, c_min), min(raw_hi, c_max)
        if clo > raw_lo:
            lo_c = True  # strictly interior point of the raw interval
        if chi < raw_hi:
            hi_c = True
        if clo < chi or (clo == chi and lo_c and hi_c):
            out.append(
                GuaranteeInterval(clo, chi, kind, index, lo_closed=lo_c, hi_closed=hi_c)
            )
    return out


def misclassified_interval(solution, x, y, c_min=0.0, c_max=np.inf, index=0):
    """Open C-intervals (left/right of c_tilde) with guaranteed misclassification."""
    return _single_instance_intervals(solution, x, y, index, True, c_min, c_max)


def correct_interval(solution, x, y, c_min=0.0, c_max=np.inf, index=0):
    """Half-open C-intervals with guaranteed correct classification."""
    return _single_instance_intervals(solution, x, y, index, False, c_min, c_max)


def point_bounds(solution, validation):
    """(lower, upper) bracket of the validation error at the solution's own C."""
    return SolutionBounds(solution, validation).point_bounds()


class StaircaseBound:
    """Piecewise-constant guarantee count over C, on the window [c_min, c_max].

    ``counts[k]`` holds for the open segment (breakpoints[k-1], breakpoints[k]);
    evaluation exactly at a breakpoint uses the segment to its left.  ``value``
    is count/n for direction "lower" and 1 - count/n for direction "upper".
    """

    def __init__(self, breakpoints, counts, n_prime, direction, c_min, c_max):
        self.breakpoints = np.asarray(breakpoints, dtype=np.float64)
        self.counts = np.asarray(counts, dtype=np.int64)
        if self.counts.shape[0] != self.breakpoints.shape[0] + 1:
            raise DataError("counts length must be breakpoints length + 1")
        self.n_prime = int(n_prime)
        if direction not in ("lower", "upper"):
            raise DataError(f"unknown direction {direction!r}")
        self.direction = direction
        self.c_min = float(c_min)
        self.c_max = float(c_max)

    @classmethod
    def from_spans(cls, lo, hi, n_prime, direction, c_min, c_max):
        lo = np.maximum(np.asarray(lo, dtype=np.float64), c_min)
        hi = np.minimum(np.asarray(hi, dtype=np.float64), c_max)
        keep = lo < hi
        lo, hi = lo[keep], hi[keep]
        ends = np.concatenate([lo, hi])
        inner = np.unique(ends[(ends > c_min) & (ends < c_max)])
        nseg = inner.shape[0] + 1
        delta = np.zeros(nseg + 1, dtype=np.int64)
        start = np.searchsorted(inner, lo, side="right")
        stop = np.searchsorted(inner, hi, side="right")
        np.add.at(delta, start, 1)
        np.add.at(delta, np.where(hi < c_max, stop, nseg), np.where(hi < c_max, -1, 0))
        counts = np.cumsum(delta[:nseg])
        return cls(inner, counts, n_prime, direction, c_min, c_max)

    def count_at(self, C):
        idx = np.searchsorted(self.breakpoints, C, side="left")
        return self.counts[idx]

    def value_at(self, C):
        cnt = self.count_at(C)
        if self.direction == "lower":
            return cnt / self.n_prime
        return (self.n_prime - cnt) / self.n_prime

    def min_count_on(self, lo=None, hi=None):
        lo = self.c_min if lo is None else lo
        hi = self.c_max if hi is None else hi
        k0 = int(np.searchsorted(self.breakpoints, lo, side="left"))
        k1 = int(np.searchsorted(self.breakpoints, hi, side="left"))
        return int(self.counts[k0:k1 + 1].min())

    def _refined_counts(self, union_bps):
        edges = np.concatenate([[-np.inf], union_bps])
        idx = np.searchsorted(self.breakpoints, edges, side="right")
        return self.counts[idx]

    @staticmethod
    def merge(staircases, reduce="max"):
        """Segment-wise max (bound tightening) or sum (fold aggregation)."""
        if not staircases:
            raise DataError("nothing to merge")
        first = staircases[0]
        union = np.unique(np.concatenate([s.breakpoints for s in staircases]))
        stacked = np.stack([s._refined_counts(union) for s in staircases])
        if reduce == "max":
            counts = stacked.max(axis=0)
            n_prime = first.n_prime
        elif reduce == "sum":
            counts = stacked.sum(axis=0)
            n_prime = sum(s.n_prime for s in staircases)
        else:
            raise DataError(f"unknown reduce {reduce!r}")
        return StaircaseBound(
            union, counts, n_prime, first.direction, first.c_min, first.c_max
        )

    def segment_table(self):
        """(breakpoint, value_left, value_right) rows for CSV emission."""
        vals = self.counts / self.n_prime
        if self.direction == "upper":
            vals = (self.n_prime - self.counts) / self.n_prime
        return [
            (float(b), float(vals[i]), float(vals[i + 1]))
            for i, b in enumerate(self.breakpoints)
        ]

    def to_json_dict(self):
        vals = self.counts / self.n_prime
        if self.direction == "upper":
            vals = (self.n_prime - self.counts) / self.n_prime
        return {
            "breakpoints": [float(b) for b in self.breakpoints],
            "values": [float(v) for v in vals],
        }


def lower_bound_path(solutions, validation, c_min, c_max):
    """Best (pointwise max) validation-error lower bound from several solutions."""
    if not solutions:
        raise DataError("need at least one solution")
    if validation.n < 1:
        raise DataError("validation set is empty")
    parts = [
        SolutionBounds(sol, validation).lower_staircase(c_min, c_max)
        for sol in solutions
    ]
    return StaircaseBound.merge(parts, reduce="max")


def upper_bound_path(solution, validation, c_min, c_max):
    """Validation-error upper bound staircase from a single solution."""
    if validation.n < 1:
        raise DataError("validation set is empty")
    return SolutionBounds(solution, validation).upper_staircase(c_min, c_max)
