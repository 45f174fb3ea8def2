"""Search and certification algorithms over the regularization range.

Everything here manipulates exact integer guarantee counts (misclassified /
correctly classified validation instances) and exact rational targets, so the
step formulas and the emitted certificates are free of float bookkeeping
drift.  A "group" is the set of per-fold solutions sharing one C value; the
holdout setting is the one-fold special case and k-fold CV sums fold counts.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import SolutionBounds, StaircaseBound
from .errors import ConfigError, SolverError
from .loss import LossKind
from .solver import SolverConfig, solve

__all__ = [
    "SearchConfig",
    "Certificate",
    "SolvedPoint",
    "BreakpointSet",
    "RegPath",
    "CertifiedSearch",
    "certify",
    "next_c",
    "find_approx_parameter",
    "find_approx_parameter_tricked",
    "track_path",
    "cv_certify",
    "grid_strategy",
    "bound_guided_strategy",
]


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (str, int)):
        return Fraction(x)
    return Fraction(str(float(x)))  # decimal literal semantics for floats


@dataclass
class SearchConfig:
    """Range, target quality, and speed-up knobs for the search algorithms."""

    c_min: float = 1e-3
    c_max: float = 1e3
    epsilon: object = "0.1"  # allowed validation-error slack; exact rational
    trick1_grid_size: int = 4  # m; 0 disables the coarse initial grid
    trick2_rho: object = "1.5"  # overstep factor; 1 disables the trial overstep
    min_step: float = 1e-6  # path mode: floor on consecutive C spacing
    solution_mode: str = "approximate"  # "exact" | "approximate"
    max_solves: int = 200000
    max_recursion_depth: int = 64
    final_full_merge: bool = False  # certificate path merges all solutions

    def __post_init__(self):
        if not (0.0 < self.c_min < self.c_max):
            raise ConfigError("need 0 < c_min < c_max")
        self.epsilon = _as_fraction(self.epsilon)
        if not (0 <= self.epsilon <= 1):
            raise ConfigError("epsilon must lie in [0, 1]")
        self.trick2_rho = _as_fraction(self.trick2_rho)
        if self.trick2_rho < 1:
            raise ConfigError("trick2_rho must be >= 1")
        if self.trick1_grid_size < 0:
            raise ConfigError("trick1_grid_size must be >= 0")
        if not self.min_step > 0:
            raise ConfigError("min_step must be > 0")
        if self.solution_mode not in ("exact", "approximate"):
            raise ConfigError(f"unknown solution_mode {self.solution_mode!r}")
        if self.epsilon == 0:
            # approximate solutions cannot certify a zero gap
            self.solution_mode = "exact"


@dataclass(frozen=True)
class BreakpointSet:
    """Guarantee-expiry C values of one group: rightward, leftward, both-bound."""

    gamma_set: np.ndarray  # ascending
    delta_set: np.ndarray  # descending
    lambda_set: np.ndarray  # ascending


@dataclass
class SolvedPoint:
    c: float
    lb: float
    ub: float
    iterations: int
    converged: bool = True


@dataclass
class Certificate:
    """Outcome of a certification or search run."""

    mode: str
    c_best: float
    ev_best: float
    certified_epsilon: float
    epsilon_target: float
    c_min: float
    c_max: float
    solved: list
    lower_bound_path: StaircaseBound
    total_solver_iterations: int
    wall_time: float
    seed: int | None = None
    warnings: list = field(default_factory=list)
    ev_best_count: int = 0
    n_total: int = 0
    certified_epsilon_exact: Fraction = Fraction(0)

    @property
    def solved_cs(self):
        return [p.c for p in self.solved]

    def to_json_dict(self):
        return {
            "mode": self.mode,
            "c_best": self.c_best,
            "ev_best": self.ev_best,
            "certified_epsilon": self.certified_epsilon,
            "epsilon_target": self.epsilon_target,
            "c_range": [self.c_min, self.c_max],
            "solved": [
                {"c": p.c, "lb": p.lb, "ub": p.ub, "iterations": p.iterations}
                for p in self.solved
            ],
            "lower_bound_path": self.lower_bound_path.to_json_dict(),
            "solver": {
                "total_iterations": self.total_solver_iterations,
                "warnings": list(self.warnings),
            },
            "seed": self.seed,
        }


class _Group:
    """Per-fold solutions at one shared C with aggregated exact counts."""

    def __init__(self, c, solutions, datas, cfg):
        self.c = float(c)
        self.solutions = solutions
        self.datas = datas
        self.cfg = cfg
        self.n_total = sum(d.n_prime for d in datas)
        self.miss_count = sum(d.miss_count for d in datas)
        self.correct_count = sum(d.correct_count for d in datas)
        self.ub_count = self.n_total - self.correct_count
        self.iterations = sum(s.iterations for s in solutions)
        self.converged = all(s.converged for s in solutions)
        self._lower = None
        self._upper = None

    @property
    def point_lb(self):
        return self.miss_count / self.n_total

    @property
    def point_ub(self):
        return self.ub_count / self.n_total

    def solved_point(self):
        return SolvedPoint(
            c=self.c,
            lb=self.point_lb,
            ub=self.point_ub,
            iterations=self.iterations,
            converged=self.converged,
        )

    def gamma_multiset(self):
        return np.sort(np.concatenate([d.gamma_set() for d in self.datas]))

    def delta_multiset(self):
        vals = np.concatenate([d.delta_set() for d in self.datas])
        return -np.sort(-vals)

    def lambda_multiset(self):
        return np.sort(np.concatenate([d.lambda_set() for d in self.datas]))

    def breakpoint_set(self):
        return BreakpointSet(
            gamma_set=self.gamma_multiset(),
            delta_set=self.delta_multiset(),
            lambda_set=self.lambda_multiset(),
        )

    def lower_staircase(self):
        if self._lower is None:
            parts = [d.lower_staircase(self.cfg.c_min, self.cfg.c_max) for d in self.datas]
            self._lower = parts[0] if len(parts) == 1 else StaircaseBound.merge(parts, "sum")
        return self._lower

    def upper_staircase(self):
        if self._upper is None:
            parts = [d.upper_staircase(self.cfg.c_min, self.cfg.c_max) for d in self.datas]
            self._upper = parts[0] if len(parts) == 1 else StaircaseBound.merge(parts, "sum")
        return self._upper


# -- step formulas (exact count arithmetic) -----------------------------------


def _kth_or_inf(sorted_vals, k):
    if k > len(sorted_vals):
        return math.inf
    return float(sorted_vals[k - 1])


def _step_right(grp, ebest_count, eps):
    """First C > grp.c where 'best minus lower bound <= eps' can fail.

    Returns (c_next, pathological).  c_next is +inf when the guarantee holds
    through every larger C; pathological flags a vacuous-but-violated bound,
    which cannot happen when the solver met its point-gap target.  Expiries
    at or before grp.c (degenerate borderline guarantees) are treated as
    already expired so the step always makes strict progress.
    """
    gam = grp.gamma_multiset()
    expired = int(np.searchsorted(gam, grp.c, side="right"))
    gam = gam[expired:]
    miss = grp.miss_count - expired
    k = math.floor(Fraction(miss - ebest_count) + eps * grp.n_total) + 1
    if k <= 0:
        # the bound is already below 'best - eps' just right of grp.c (a
        # guarantee expired exactly here); jumping to the next expiry would
        # skip an uncovered stretch, so the caller must probe immediately
        return grp.c, True
    return _kth_or_inf(gam, k), False


def _step_left(grp, ebest_count, eps):
    """Mirror of _step_right toward smaller C; 0.0 when covered to the left end."""
    dlt = grp.delta_multiset()  # descending
    expired = int(np.searchsorted(-dlt, -grp.c, side="right"))
    dlt = dlt[expired:]
    miss = grp.miss_count - expired
    k = math.floor(Fraction(miss - ebest_count) + eps * grp.n_total) + 1
    if k <= 0:
        return grp.c, True
    if k > len(dlt):
        return 0.0, False
    return float(dlt[k - 1]), False


def _step_right_path(grp, eps):
    """First C > grp.c where the group's own upper-lower gap can exceed eps."""
    lam = grp.lambda_multiset()
    expired = int(np.searchsorted(lam, grp.c, side="right"))
    lam = lam[expired:]
    gap_count = grp.n_total - grp.miss_count - grp.correct_count + expired
    k = math.floor(eps * grp.n_total - gap_count) + 1
    if k <= 0:
        return grp.c, True
    return _kth_or_inf(lam, k), False


# -- certificate assembly ------------------------------------------------------


def _coverage_lower_path(coverage, groups_in_order, cfg, n_total, full_merge):
    if full_merge or not coverage:
        stairs = [g.lower_staircase() for g in groups_in_order]
        return StaircaseBound.merge(stairs, "max")
    pieces = []
    for lo, hi, grps in coverage:
        st = (
            grps[0].lower_staircase()
            if len(grps) == 1
            else StaircaseBound.merge([g.lower_staircase() for g in grps], "max")
        )
        pieces.append((lo, hi, st))
    edges = set()
    for lo, hi, st in pieces:
        edges.update((lo, hi))
        edges.update(b for b in st.breakpoints.tolist() if cfg.c_min < b < cfg.c_max)
    edges.discard(cfg.c_min)
    edges.discard(cfg.c_max)
    bps = np.array(sorted(edges))
    seg_edges = np.concatenate([[cfg.c_min], bps, [cfg.c_max]])
    reps = 0.5 * (seg_edges[:-1] + seg_edges[1:])
    counts = np.zeros(reps.shape[0], dtype=np.int64)
    for lo, hi, st in pieces:
        inside = (reps >= lo) & (reps <= hi)
        if inside.any():
            vals = st.count_at(reps[inside])
            np.maximum.at(counts, np.where(inside)[0], vals)
    return StaircaseBound(bps, counts, n_total, "lower", cfg.c_min, cfg.c_max)


def _build_certificate(mode, cfg, seed, groups_in_order, coverage, ebest_count,
                       c_best, n_total, warnings, t0, full_merge):
    path = _coverage_lower_path(coverage, groups_in_order, cfg, n_total, full_merge)
    certified = Fraction(ebest_count - path.min_count_on(), n_total)
    return Certificate(
        mode=mode,
        c_best=c_best,
        ev_best=ebest_count / n_total,
        certified_epsilon=float(certified),
        epsilon_target=float(cfg.epsilon),
        c_min=cfg.c_min,
        c_max=cfg.c_max,
        solved=[g.solved_point() for g in groups_in_order],
        lower_bound_path=path,
        total_solver_iterations=sum(g.iterations for g in groups_in_order),
        wall_time=time.perf_counter() - t0,
        seed=seed,
        warnings=list(warnings),
        ev_best_count=ebest_count,
        n_total=n_total,
        certified_epsilon_exact=certified,
    )


class CertifiedSearch:
    """Engine running the search algorithms over one or more (train, valid) folds."""

    def __init__(self, folds, kind=None, config=None, solver_config=None, seed=None):
        if not folds:
            raise ConfigError("need at least one (train, validation) fold")
        self.folds = list(folds)
        self.kind = kind or LossKind()
        self.cfg = config or SearchConfig()
        self.solver_cfg = solver_config or SolverConfig()
        self.seed = seed
        self.n_total = sum(valid.n for _, valid in self.folds)
        self.groups = {}  # c -> _Group, solve cache
        self.solve_order = []
        self.coverage = []  # (lo, hi, [groups]) claims at level ebest - eps
        self.warnings = []
        self.ebest_count = self.n_total  # E_v = 1
        self.c_best = self.cfg.c_min
        env = os.environ.get("CERTREG_THREADS", "")
        try:
            self.threads = max(1, int(env)) if env else 1
        except ValueError:
            raise ConfigError(f"CERTREG_THREADS must be an integer, got {env!r}") from None

    # -- solving ---------------------------------------------------------------

    def _warm_start(self, fold_idx, c):
        """Closest already-trained solution in log scale, per fold."""
        best = None
        best_dist = math.inf
        for grp in self.solve_order:
            dist = abs(math.log10(grp.c) - math.log10(c))
            if dist < best_dist:
                best_dist = dist
                best = grp.solutions[fold_idx]
        return best

    def _solve_fold(self, fold_idx, c):
        train, valid = self.folds[fold_idx]
        mode = self.cfg.solution_mode
        eps = float(self.cfg.epsilon) if mode == "approximate" else None
        return solve(
            train,
            valid,
            self.kind,
            c,
            config=self.solver_cfg,
            mode=mode,
            epsilon=eps,
            warm_start=self._warm_start(fold_idx, c),
        )

    def solve_at(self, c):
        c = float(c)
        if c in self.groups:
            return self.groups[c]
        if len(self.solve_order) >= self.cfg.max_solves:
            raise SolverError(f"exceeded max_solves={self.cfg.max_solves}")
        k = len(self.folds)
        if self.threads > 1 and k > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=min(self.threads, k)) as pool:
                sols = list(pool.map(lambda i: self._solve_fold(i, c), range(k)))
        else:
            sols = [self._solve_fold(i, c) for i in range(k)]
        grp = _Group(c, sols, [s.bound_data for s in sols], self.cfg)
        self.groups[c] = grp
        self.solve_order.append(grp)
        return grp

    def _require_converged(self, grp):
        if not grp.converged:
            raise SolverError(
                f"solver did not reach its quality target at C={grp.c:.6g}; "
                "no certificate can be issued (raise max_iterations or epsilon)"
            )

    def _offer_best(self, grp):
        if grp.ub_count < self.ebest_count:
            self.ebest_count = grp.ub_count
            self.c_best = grp.c

    def step_right(self, grp, eps=None):
        return _step_right(grp, self.ebest_count, self.cfg.epsilon if eps is None else eps)

    def step_left(self, grp):
        return _step_left(grp, self.ebest_count, self.cfg.epsilon)

    # -- algorithms --------------------------------------------------------------

    def run_certify(self, c_list):
        """Solve the given C values, then certify the resulting solution set."""
        if len(c_list) == 0:
            raise ConfigError("certify needs at least one C value")
        for c in c_list:
            if not (self.cfg.c_min <= c <= self.cfg.c_max):
                raise ConfigError(f"C={c} outside [{self.cfg.c_min}, {self.cfg.c_max}]")
        t0 = time.perf_counter()
        for c in c_list:
            grp = self.solve_at(c)
            if not grp.converged:
                self.warnings.append(f"solution at C={grp.c:.6g} did not converge")
            self._offer_best(grp)
        self.coverage = [(self.cfg.c_min, self.cfg.c_max, list(self.solve_order))]
        return self._certificate("certify", t0, full_merge=True)

    def _plain_advance(self, c, grp, seg_end):
        """Plain-eps step from grp; records coverage, returns the next C to
        solve or None when the guarantee extends through seg_end."""
        nxt, patho = self.step_right(grp)
        if patho:
            self.warnings.append(
                f"bound guarantee expires immediately right of C={c:.6g}; "
                "probing with a 1.05x step"
            )
            nxt = 1.05 * c
            self.coverage.append((c, min(nxt, seg_end), [grp]))
            return nxt if nxt <= seg_end else None
        if nxt > seg_end:
            self.coverage.append((c, seg_end, [grp]))
            return None
        if nxt <= c:  # float-degenerate expiry ratio; force progress
            nxt = float(np.nextafter(c, math.inf))
        self.coverage.append((c, min(nxt, seg_end), [grp]))
        return nxt

    def run_find(self):
        t0 = time.perf_counter()
        c = self.cfg.c_min
        grp = None
        while c <= self.cfg.c_max:
            grp = self.solve_at(c)
            self._require_converged(grp)
            self._offer_best(grp)
            nxt = self._plain_advance(c, grp, self.cfg.c_max)
            if nxt is None:
                break
            c = nxt
        return self._certificate("find", t0, full_merge=self.cfg.final_full_merge)

    def run_find_tricked(self):
        t0 = time.perf_counter()
        cfg = self.cfg
        m = cfg.trick1_grid_size
        if m >= 1:
            s = (math.log10(cfg.c_max) - math.log10(cfg.c_min)) / m
            coarse = [10 ** (math.log10(cfg.c_min) + h * s) for h in range(m)]
        else:
            coarse = [cfg.c_min]
        coarse_groups = []
        for cb in coarse:
            grp = self.solve_at(cb)
            self._require_converged(grp)
            self._offer_best(grp)
            coarse_groups.append(grp)
        edges = [g.c for g in coarse_groups] + [cfg.c_max]
        aggressive = cfg.trick2_rho > 1
        for h, grp0 in enumerate(coarse_groups):
            c, grp = grp0.c, grp0
            seg_end = edges[h + 1]
            while c <= seg_end:
                c_tmp = None
                trial = False
                if aggressive:
                    cand, patho = self.step_right(grp, cfg.trick2_rho * cfg.epsilon)
                    if not patho and c < cand <= seg_end:
                        c_tmp, trial = cand, True  # overstep, then check
                if c_tmp is None:
                    c_tmp = self._plain_advance(c, grp, seg_end)
                    if c_tmp is None:
                        break
                grp_tmp = self.solve_at(c_tmp)
                self._require_converged(grp_tmp)
                self._offer_best(grp_tmp)
                if trial:
                    self.recursive_check(grp, grp_tmp)
                c, grp = c_tmp, grp_tmp
        return self._certificate("find-tricked", t0, full_merge=cfg.final_full_merge)

    def recursive_check(self, grp_l, grp_r, depth=0):
        """Bisection repair until the two end guarantees overlap on [C_L, C_R].

        Returns the number of extra solves performed.
        """
        if depth > self.cfg.max_recursion_depth:
            raise SolverError(
                f"recursive check exceeded depth {self.cfg.max_recursion_depth} "
                f"on [{grp_l.c:.6g}, {grp_r.c:.6g}]"
            )
        c_r, _ = self.step_right(grp_l)
        c_l, _ = self.step_left(grp_r)
        # c_l == c_r is fine: the single seam point evaluates to the segment on
        # its left, which the left group's guarantee still covers
        if c_l <= c_r:
            self.coverage.append((grp_l.c, grp_r.c, [grp_l, grp_r]))
            return 0
        mid = 0.5 * (c_l + c_r)
        if not (grp_l.c < mid < grp_r.c):
            # ends are float-adjacent; any real dip in between stays visible to
            # the certificate through the merged path, so record and move on
            self.warnings.append(
                f"guarantee seam near C={grp_r.c:.6g} is below float resolution"
            )
            self.coverage.append((grp_l.c, grp_r.c, [grp_l, grp_r]))
            return 0
        grp_m = self.solve_at(mid)
        self._require_converged(grp_m)
        self._offer_best(grp_m)
        extra = 1
        extra += self.recursive_check(grp_l, grp_m, depth + 1)
        extra += self.recursive_check(grp_m, grp_r, depth + 1)
        return extra

    def run_path(self):
        if len(self.folds) != 1:
            raise ConfigError("path tracking works on a single train/validation pair")
        t0 = time.perf_counter()
        cfg = self.cfg
        c = cfg.c_min
        breakpoints = []
        sols = []
        while c <= cfg.c_max:
            grp = self.solve_at(c)
            self._require_converged(grp)
            self._offer_best(grp)
            nxt, patho = _step_right_path(grp, cfg.epsilon)
            if patho:
                self.warnings.append(
                    f"own bound gap already exceeds epsilon at C={c:.6g}; "
                    "advancing by the minimum step"
                )
            nxt = max(nxt, c + cfg.min_step)
            breakpoints.append(c)
            sols.append(grp)
            self.coverage.append((c, min(nxt, cfg.c_max), [grp]))
            c = nxt
        if breakpoints and breakpoints[-1] == cfg.c_max:
            self.warnings.append("final path segment is the single point c_max")
        breakpoints.append(cfg.c_max)
        cert = self._certificate("path", t0, full_merge=False)
        return RegPath(
            breakpoints=breakpoints,
            solutions=[g.solutions[0] for g in sols],
            groups=sols,
            certificate=cert,
        )

    def merged_upper_path(self):
        """Tightest (min over groups) error upper bound; for reporting/plots."""
        stairs = [g.upper_staircase() for g in self.solve_order]
        return StaircaseBound.merge(stairs, "max")  # max correct-count = min error

    def _certificate(self, mode, t0, full_merge):
        return _build_certificate(
            mode, self.cfg, self.seed, self.solve_order, self.coverage,
            self.ebest_count, self.c_best, self.n_total, self.warnings, t0,
            full_merge,
        )


@dataclass
class RegPath:
    """Piecewise-constant weight path: solutions[t] holds on [breakpoints[t], breakpoints[t+1])."""

    breakpoints: list
    solutions: list
    groups: list = field(default_factory=list, repr=False)
    certificate: Certificate | None = None

    def segment_index(self, C):
        idx = int(np.searchsorted(np.asarray(self.breakpoints[1:-1]), C, side="right"))
        return min(idx, len(self.solutions) - 1)

    def weights_at(self, C):
        return self.solutions[self.segment_index(C)].weights

    def __iter__(self):  # allow (breakpoints, solutions) unpacking
        yield self.breakpoints
        yield self.solutions


# -- module-level operations -----------------------------------------------------


def _group_from_solution(sol, validation, cfg):
    data = sol.bound_data
    if data is None or data.validation is not validation:
        data = SolutionBounds(sol, validation)
    return _Group(sol.c, [sol], [data], cfg)


def certify(solutions, validation, config=None, seed=None):
    """Approximation level of an externally produced solution list (one fold).

    ev_best is the smallest per-solution error upper bound; the lower-bound
    path is the pointwise best over all solutions; their difference is the
    certified approximation level.
    """
    cfg = config or SearchConfig()
    if not solutions:
        raise ConfigError("certify needs at least one solution")
    t0 = time.perf_counter()
    groups = []
    warnings = []
    ebest_count = validation.n
    c_best = cfg.c_min
    for sol in solutions:
        if not (cfg.c_min <= sol.c <= cfg.c_max):
            raise ConfigError(f"solution C={sol.c} outside [{cfg.c_min}, {cfg.c_max}]")
        grp = _group_from_solution(sol, validation, cfg)
        if not grp.converged:
            warnings.append(f"solution at C={grp.c:.6g} is flagged non-converged")
        groups.append(grp)
        if grp.ub_count < ebest_count:
            ebest_count = grp.ub_count
            c_best = grp.c
    coverage = [(cfg.c_min, cfg.c_max, list(groups))]
    return _build_certificate(
        "certify", cfg, seed, groups, coverage, ebest_count, c_best,
        validation.n, warnings, t0, full_merge=True,
    )


def next_c(solution, ev_best, epsilon, config=None, validation=None):
    """Next C to solve after ``solution`` given the current best; +inf means done."""
    cfg = config or SearchConfig()
    data = solution.bound_data
    if data is None:
        if validation is None:
            raise ConfigError("need bound data or an explicit validation set")
        data = SolutionBounds(solution, validation)
    grp = _Group(solution.c, [solution], [data], cfg)
    ebest_count = int(round(ev_best * grp.n_total))
    if abs(ebest_count - ev_best * grp.n_total) > 1e-9:
        raise ConfigError("ev_best must be a multiple of 1/n' (a count fraction)")
    nxt, _ = _step_right(grp, ebest_count, _as_fraction(epsilon))
    if nxt > cfg.c_max:
        return math.inf
    return nxt


def find_approx_parameter(train, validation, config=None, kind=None,
                          solver_config=None, seed=None):
    """Search upward from c_min until the best found C is epsilon-approximate."""
    search = CertifiedSearch([(train, validation)], kind, config, solver_config, seed)
    return search.run_find()


def find_approx_parameter_tricked(train, validation, config=None, kind=None,
                                  solver_config=None, seed=None):
    """Like find_approx_parameter, with the coarse-grid and overstep speed-ups."""
    search = CertifiedSearch([(train, validation)], kind, config, solver_config, seed)
    return search.run_find_tricked()


def track_path(train, validation, config=None, kind=None, solver_config=None,
               seed=None):
    """Piecewise-constant weight path whose validation error tracks the optimum."""
    search = CertifiedSearch([(train, validation)], kind, config, solver_config, seed)
    return search.run_path()


def cv_certify(dataset, k, config=None, mode="find", kind=None, solver_config=None,
               seed=0, c_list=None):
    """Run the chosen algorithm under k-fold cross-validation.

    The per-C lower bound sums per-fold guaranteed-misclassification counts;
    the certificate bounds the k-fold CV error at c_best against the best
    achievable over [c_min, c_max].
    """
    from .data import split_kfold

    folds = split_kfold(dataset, k, seed=seed)
    for kappa, (train, _) in enumerate(folds):
        if len(np.unique(train.y)) < 2:
            import warnings as _warnings

            _warnings.warn(f"fold {kappa}: training part has a single class")
    search = CertifiedSearch(folds, kind, config, solver_config, seed)
    if mode == "find":
        return search.run_find()
    if mode == "tricked":
        return search.run_find_tricked()
    if mode == "certify":
        if c_list is None or len(c_list) == 0:
            raise ConfigError("cv certify mode needs a C list")
        return search.run_certify(c_list)
    raise ConfigError(f"unknown cv mode {mode!r}")


def grid_strategy(config, T):
    """T log-evenly spaced C values spanning [c_min, c_max] inclusively."""
    if T < 1:
        raise ConfigError("T must be >= 1")
    if T == 1:
        return np.array([config.c_min])
    return np.logspace(math.log10(config.c_min), math.log10(config.c_max), T)


def bound_guided_strategy(staircase, c_min=None, c_max=None):
    """Log-midpoint of the leftmost segment where the lower-bound path is minimal."""
    c_min = staircase.c_min if c_min is None else c_min
    c_max = staircase.c_max if c_max is None else c_max
    bps = staircase.breakpoints
    inner = bps[(bps > c_min) & (bps < c_max)]
    edges = np.concatenate([[c_min], inner, [c_max]])
    reps = 0.5 * (edges[:-1] + edges[1:])
    vals = staircase.count_at(reps)
    k = int(np.argmin(vals))
    return 10 ** (0.5 * (math.log10(edges[k]) + math.log10(edges[k + 1])))
