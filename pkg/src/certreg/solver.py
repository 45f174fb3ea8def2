"""Training-problem solvers producing bound-ready approximate solutions.

Two regimes per solve:

* ``exact``       -- drive the objective subgradient norm below a tolerance
                     relative to (1 + ||w||), so the score-bound slack terms
                     vanish within tolerance.
* ``approximate`` -- stop as soon as the validation-error point-bound gap at
                     this C falls below ``gap_target_fraction * epsilon``; much
                     cheaper and sufficient for the search algorithms.

Smooth losses (huber_hinge, logistic) use monotone gradient descent with a
Barzilai-Borwein initial step and Armijo backtracking.  Pure hinge uses dual
coordinate descent on the box-constrained dual and reports the best primal
iterate seen; its subgradient uses the canonical kink selection, so exact-mode
certification is attainable only when the optimum has no margin-1 support
vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import SimpleNamespace

import numpy as np

from . import bounds as _bounds
from .errors import ConfigError, DataError
from .loss import LossKind, margin_slopes, margin_values

__all__ = ["SolverConfig", "ApproxSolution", "solve"]

_DENSE_LIMIT = 4_000_000  # n*d above which feature matrices stay sparse
_HINGE = LossKind("hinge")


@dataclass
class SolverConfig:
    """Iteration budget, stopping rules, and line-search constants."""

    max_iterations: int = 20000
    gap_target_fraction: float = 0.1
    exact_tolerance: float = 1e-6  # relative to 1 + ||w||
    gap_check_every: int = 10
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 60

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if not (0.0 < self.gap_target_fraction < 1.0):
            raise ConfigError("gap_target_fraction must lie in (0, 1)")
        if not self.exact_tolerance > 0:
            raise ConfigError("exact_tolerance must be > 0")


@dataclass
class ApproxSolution:
    """A solved weight vector at one C with its bound-relevant byproducts."""

    c: float
    weights: np.ndarray
    g: np.ndarray
    norm_w: float
    norm_g: float
    validation_point_bounds: tuple  # (lb, ub) fractions at this C
    miss_count: int
    correct_count: int
    n_prime: int
    is_exact: bool
    converged: bool
    iterations: int
    objective_value: float
    objective_trace: list = field(default_factory=list, repr=False)
    dual: np.ndarray | None = field(default=None, repr=False)
    bound_data: object = field(default=None, repr=False)


def _features(train):
    if train.n * train.dim <= _DENSE_LIMIT:
        return train.dense_features()
    return train.X


def _point_gap(w, g, c, validation):
    sol = SimpleNamespace(
        c=c,
        weights=w,
        g=g,
        norm_w=float(np.linalg.norm(w)),
        norm_g=float(np.linalg.norm(g)),
    )
    lb, ub = _bounds.SolutionBounds(sol, validation).point_bounds()
    return ub - lb


class _Stopper:
    """Shared stopping logic; ``check`` returns True when iteration may end."""

    def __init__(self, mode, gap_target, config, c, validation):
        self.mode = mode
        self.gap_target = gap_target
        self.config = config
        self.c = c
        self.validation = validation
        self.reason = None

    def check(self, w, g, it, fval):
        if not np.isfinite(fval):
            raise DataError("objective became non-finite during iteration")
        gnorm = float(np.linalg.norm(g))
        exact_tol = self.config.exact_tolerance * (1.0 + float(np.linalg.norm(w)))
        if gnorm <= exact_tol:
            self.reason = "exact"
            return True
        if self.mode == "approximate" and (
            it % self.config.gap_check_every == 0 or it >= self.config.max_iterations
        ):
            if _point_gap(w, g, self.c, self.validation) <= self.gap_target:
                self.reason = "gap"
                return True
        return False


def _smooth_descent(X, y, kind, c, w0, config, stopper, trace):
    """Monotone BB/Armijo descent; returns (w, g, fval, iterations, converged)."""
    w = w0.copy()
    Xw = X @ w
    m = y * Xw
    fval = 0.5 * float(w @ w) + c * float(margin_values(kind, m).sum())
    g = w + c * (X.T @ (margin_slopes(kind, m) * y))
    t = 1.0 / (1.0 + c)
    trace.append(fval)
    it = 0
    stall = 0
    while it < config.max_iterations:
        if stopper.check(w, g, it, fval):
            return w, g, fval, it, True
        d = -g
        Xd = X @ d
        ww = float(w @ w)
        wd = float(w @ d)
        dd = float(d @ d)
        gnorm2 = dd
        # Armijo backtracking on the 1-d restriction; each trial costs O(n).
        step = t
        f_try = None
        accepted = False
        for _ in range(config.max_backtracks):
            m_try = y * (Xw + step * Xd)
            f_try = (
                0.5 * (ww + 2.0 * step * wd + step * step * dd)
                + c * float(margin_values(kind, m_try).sum())
            )
            if f_try <= fval - config.armijo_c * step * gnorm2:
                accepted = True
                break
            step *= config.backtrack_factor
        if not accepted:
            # objective progress has hit float resolution; hand over to the caller
            return w, g, fval, it, stopper.check(w, g, config.max_iterations, fval)
        decrease = fval - f_try
        w = w + step * d
        Xw = Xw + step * Xd
        m = y * Xw
        g_new = w + c * (X.T @ (margin_slopes(kind, m) * y))
        sy = float((step * d) @ (g_new - g))
        if sy > 0:
            t = min(max(step * step * dd / sy, 1e-10), 1e10)
        g = g_new
        fval = f_try
        trace.append(fval)
        it += 1
        if decrease <= 1e-13 * (1.0 + abs(fval)):
            stall += 1
            if stall >= 50:  # grinding at float resolution; caller may polish
                return w, g, fval, it, stopper.check(w, g, config.max_iterations, fval)
        else:
            stall = 0
    converged = stopper.check(w, g, it, fval)
    return w, g, fval, it, converged


def _margin_curvatures(kind, m):
    if kind.name == "huber_hinge":
        h = kind.huber_width
        return np.where((m < 1.0) & (m >= 1.0 - h), 1.0 / h, 0.0)
    # logistic
    s = 0.5 * (1.0 + np.tanh(0.5 * m))
    return s * (1.0 - s)


def _newton_polish(X, y, kind, c, w, config, max_steps=100):
    """Drive ||g|| to the exact tolerance once first-order progress has
    hit float resolution; accepts steps on gradient-norm decrease."""
    dense = isinstance(X, np.ndarray)
    d = w.shape[0]

    def grad(wv):
        mv = y * (X @ wv)
        return np.asarray(wv + c * (X.T @ (margin_slopes(kind, mv) * y))).ravel(), mv

    g, m = grad(w)
    steps = 0
    for _ in range(max_steps):
        gn = float(np.linalg.norm(g))
        if gn <= config.exact_tolerance * (1.0 + float(np.linalg.norm(w))):
            break
        cw = _margin_curvatures(kind, m)
        if dense:
            H = np.eye(d) + c * (X.T @ (X * cw[:, None]))
        else:
            H = np.eye(d) + c * np.asarray((X.T @ X.multiply(cw[:, None])).todense())
        direction = np.linalg.solve(H, -g)
        t, accepted = 1.0, False
        for _ in range(config.max_backtracks):
            w_try = w + t * direction
            g_try, m_try = grad(w_try)
            if float(np.linalg.norm(g_try)) < gn:
                w, g, m = w_try, g_try, m_try
                accepted = True
                break
            t *= 0.5
        steps += 1
        if not accepted:
            break
    fval = 0.5 * float(w @ w) + c * float(margin_values(kind, m).sum())
    return w, g, fval, steps


def _hinge_objective_grad(X, y, w, c):
    m = y * (X @ w)
    fval = 0.5 * float(w @ w) + c * float(margin_values(_HINGE, m).sum())
    g = np.asarray(w + c * (X.T @ (margin_slopes(_HINGE, m) * y))).ravel()
    return fval, g


def _dual_cd_hinge(X, y, c, alpha0, config, stopper, trace):
    """Cyclic dual coordinate descent; tracks and reports the best primal iterate."""
    n = X.shape[0]
    if isinstance(X, np.ndarray):
        rows = X
        sq = (X * X).sum(axis=1)
    else:
        rows = [np.asarray(X.getrow(i).todense()).ravel() for i in range(n)]
        sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
    alpha = np.zeros(n) if alpha0 is None else np.clip(alpha0, 0.0, c)
    w = np.asarray(X.T @ (alpha * y)).ravel() if alpha.any() else np.zeros(X.shape[1])
    fval, g = _hinge_objective_grad(X, y, w, c)
    best = (fval, w.copy(), g, alpha.copy())
    trace.append(fval)
    sweep = 0
    while sweep < config.max_iterations:
        if stopper.check(best[1], best[2], sweep, best[0]):
            return best[1], best[2], best[0], sweep, True, best[3]
        for i in range(n):
            if sq[i] == 0.0:
                continue
            xi = rows[i]
            m_i = y[i] * float(xi @ w)
            delta = min(max(alpha[i] + (1.0 - m_i) / sq[i], 0.0), c) - alpha[i]
            if delta != 0.0:
                alpha[i] += delta
                w += delta * y[i] * xi
        fval, g = _hinge_objective_grad(X, y, w, c)
        if fval <= best[0]:
            best = (fval, w.copy(), g, alpha.copy())
        trace.append(best[0])
        sweep += 1
    converged = stopper.check(best[1], best[2], sweep, best[0])
    return best[1], best[2], best[0], sweep, converged, best[3]


def solve(
    train,
    validation,
    kind,
    c,
    config=None,
    mode="approximate",
    epsilon=None,
    warm_start=None,
    record_trace=False,
):
    """Solve the training problem at C=``c`` well enough for its intended use.

    ``warm_start`` may be a weight vector or a previous ApproxSolution (for
    hinge the latter carries the dual variables).  If the iteration budget
    runs out before the target is met, the solution is returned with
    ``converged=False`` and the caller decides.
    """
    config = config or SolverConfig()
    if mode not in ("exact", "approximate"):
        raise ConfigError(f"unknown solve mode {mode!r}")
    if mode == "approximate":
        if epsilon is None or not epsilon > 0:
            raise ConfigError("approximate mode needs epsilon > 0")
        gap_target = config.gap_target_fraction * float(epsilon)
    else:
        gap_target = None
    if not c > 0:
        raise ConfigError("C must be > 0")
    c = float(c)
    X = _features(train)
    y = train.y.astype(np.float64)
    d = train.dim
    trace = []
    stopper = _Stopper(mode, gap_target, config, c, validation)

    if kind.name == "hinge":
        alpha0 = warm_start.dual if isinstance(warm_start, ApproxSolution) else None
        w, g, fval, iters, converged, alpha = _dual_cd_hinge(
            X, y, c, alpha0, config, stopper, trace
        )
    else:
        if isinstance(warm_start, ApproxSolution):
            w0 = np.asarray(warm_start.weights, dtype=np.float64)
        elif warm_start is not None:
            w0 = np.asarray(warm_start, dtype=np.float64)
        else:
            w0 = np.zeros(d)
        if w0.shape != (d,):
            raise DataError(f"warm start must have shape ({d},)")
        if not np.all(np.isfinite(w0)):
            raise DataError("warm start contains non-finite values")
        w, g, fval, iters, converged = _smooth_descent(
            X, y, kind, c, w0, config, stopper, trace
        )
        if not converged:
            # first-order progress capped by float resolution; curvature steps
            # can still push the subgradient norm to the requested tolerance
            w, g, fval, extra = _newton_polish(X, y, kind, c, w, config)
            iters += extra
            converged = stopper.check(w, g, config.max_iterations, fval)
        alpha = None

    gnorm = float(np.linalg.norm(g))
    sol = ApproxSolution(
        c=c,
        weights=np.asarray(w, dtype=np.float64),
        g=np.asarray(g, dtype=np.float64),
        norm_w=float(np.linalg.norm(w)),
        norm_g=gnorm,
        validation_point_bounds=(0.0, 1.0),
        miss_count=0,
        correct_count=0,
        n_prime=validation.n,
        is_exact=gnorm <= config.exact_tolerance * (1.0 + float(np.linalg.norm(w))),
        converged=converged,
        iterations=iters,
        objective_value=fval,
        objective_trace=trace if record_trace else [],
        dual=alpha,
    )
    sb = _bounds.SolutionBounds(sol, validation)
    sol.validation_point_bounds = sb.point_bounds()
    sol.miss_count = sb.miss_count
    sol.correct_count = sb.correct_count
    sol.bound_data = sb
    return sol
