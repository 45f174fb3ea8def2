import numpy as np
import pytest
import scipy.sparse as sp

from certreg import Dataset, LossKind, SolverConfig, solve
from certreg.errors import ConfigError
from certreg.loss import margin_values

from .conftest import make_problem
from .oracles import solve_hinge_cvxpy, solve_huber_exact, ternary_search_1d

HUBER = LossKind("huber_hinge")
HINGE = LossKind("hinge")


def two_point_line():
    X = sp.csr_matrix(np.array([[1.0], [-1.0]]))
    return Dataset(X, [1, 1])


def test_hinge_1d_matches_ternary_search_oracle():
    train = two_point_line()
    C = 0.8

    def f(w):
        m = np.array([w, -w])
        return 0.5 * w * w + C * margin_values(HINGE, m).sum()

    w_star, f_star = ternary_search_1d(f, -5.0, 5.0)
    sol = solve(train, train, HINGE, C, mode="exact")
    assert sol.is_exact and sol.converged
    assert sol.objective_value == pytest.approx(f_star, rel=1e-6, abs=1e-9)
    assert abs(sol.weights[0] - w_star) <= 1e-4


def test_hinge_exact_mode_matches_generic_convex_solver():
    # separable pair with small C: the optimum sits strictly inside the linear
    # loss region, so the canonical subgradient vanishes at it
    X = np.array([[0.5, 0.2], [-0.6, -0.1]])
    train = Dataset(sp.csr_matrix(X), [1, -1])
    C = 0.3
    sol = solve(train, train, HINGE, C, mode="exact")
    assert sol.converged and sol.norm_g <= 1e-6 * (1 + sol.norm_w)
    _, f_ref = solve_hinge_cvxpy(X, np.array([1.0, -1.0]), C)
    assert sol.objective_value == pytest.approx(f_ref, rel=1e-6)


def test_huber_exact_mode_matches_oracle(rng):
    train, valid = make_problem(21)
    X = train.dense_features()
    for C in (0.05, 1.0, 40.0):
        sol = solve(train, valid, HUBER, C, mode="exact")
        assert sol.converged
        assert sol.norm_g <= 1e-6 * (1 + sol.norm_w)
        w_ref = solve_huber_exact(X, train.y.astype(float), C, g_tol=1e-10)
        f_ref = 0.5 * w_ref @ w_ref + C * margin_values(HUBER, train.y * (X @ w_ref)).sum()
        assert sol.objective_value == pytest.approx(f_ref, rel=1e-6)
        assert np.linalg.norm(sol.weights - w_ref) <= 1e-5 * (1 + np.linalg.norm(w_ref))


def test_objective_trace_monotone(rng):
    train, valid = make_problem(22)
    sol = solve(train, valid, HUBER, 5.0, mode="exact", record_trace=True)
    trace = np.array(sol.objective_trace)
    assert len(trace) >= 2
    assert (np.diff(trace) <= 1e-12).all()


def test_hinge_trace_monotone(rng):
    train, valid = make_problem(23)
    sol = solve(train, valid, HINGE, 0.7, mode="approximate", epsilon=0.5, record_trace=True)
    trace = np.array(sol.objective_trace)
    assert (np.diff(trace) <= 1e-12).all()


def test_exact_solution_satisfies_variational_inequality(rng):
    train, valid = make_problem(24)
    sol = solve(train, valid, HUBER, 2.0, mode="exact")
    tol = 1e-6 * (1 + sol.norm_w)
    for _ in range(100):
        z = sol.weights + rng.normal(size=train.dim, scale=3.0)
        lhs = float(sol.g @ (sol.weights - z))
        assert lhs <= tol * np.linalg.norm(sol.weights - z) + 1e-12


def test_approximate_mode_meets_gap_target(rng):
    for seed in (31, 32, 33):
        train, valid = make_problem(seed)
        eps = 0.2
        sol = solve(train, valid, HUBER, 3.0, mode="approximate", epsilon=eps)
        assert sol.converged
        lb, ub = sol.validation_point_bounds
        assert ub - lb <= 0.1 * eps + 1e-12


def test_warm_start_reduces_iterations(rng):
    cold_wins = []
    for seed in range(40, 60):
        train, valid = make_problem(seed)
        c1, c2 = 2.0, 2.6
        base = solve(train, valid, HUBER, c1, mode="exact")
        cold = solve(train, valid, HUBER, c2, mode="exact")
        warm = solve(train, valid, HUBER, c2, mode="exact", warm_start=base)
        cold_wins.append(warm.iterations - cold.iterations)
    assert np.median(cold_wins) < 0  # warm start strictly cheaper in the median


def test_not_converged_flag(rng):
    train, valid = make_problem(61)
    cfg = SolverConfig(max_iterations=1, exact_tolerance=1e-14)
    sol = solve(train, valid, HUBER, 900.0, config=cfg, mode="exact")
    assert not sol.converged


def test_solution_point_bounds_ordered(rng):
    train, valid = make_problem(62)
    sol = solve(train, valid, HUBER, 1.0, mode="approximate", epsilon=0.3)
    lb, ub = sol.validation_point_bounds
    assert 0.0 <= lb <= ub <= 1.0
    assert sol.miss_count + sol.correct_count <= sol.n_prime


def test_solve_rejects_bad_arguments(rng):
    train, valid = make_problem(63)
    with pytest.raises(ConfigError):
        solve(train, valid, HUBER, 1.0, mode="approximate")  # epsilon missing
    with pytest.raises(ConfigError):
        solve(train, valid, HUBER, -1.0, mode="exact")
    with pytest.raises(ConfigError):
        solve(train, valid, HUBER, 1.0, mode="sloppy")
