import math

import numpy as np
import pytest

from certreg import ConfigError, DataError, LossKind, loss_subgradient, loss_value
from certreg.loss import margin_slopes, margin_values, objective_and_subgradient

from .conftest import make_problem
from .oracles import solve_huber_exact

KINDS = [LossKind("hinge"), LossKind("huber_hinge"), LossKind("logistic")]
SMOOTH = [LossKind("huber_hinge"), LossKind("logistic"), LossKind("huber_hinge", huber_width=0.35)]


def test_hinge_values():
    k = LossKind("hinge")
    assert loss_value(k, 1, 1.0) == 0.0
    assert loss_value(k, 1, 0.0) == 1.0
    assert loss_value(k, -1, 0.5) == 1.5


def test_logistic_value_at_zero():
    assert loss_value(LossKind("logistic"), 1, 0.0) == pytest.approx(math.log(2.0), abs=1e-15)


def test_hinge_subgradients():
    k = LossKind("hinge")
    assert loss_subgradient(k, 1, 0.0) == -1.0
    assert loss_subgradient(k, 1, 2.0) == 0.0
    assert loss_subgradient(k, 1, 1.0) == 0.0  # canonical choice at the kink
    assert loss_subgradient(k, -1, 0.0) == 1.0


def test_huber_hinge_piecewise_midpoint_matches_fd():
    h = 0.8
    k = LossKind("huber_hinge", huber_width=h)
    z = 1.0 - h / 2  # middle of the quadratic blend, y=+1
    step = 1e-6
    fd = (loss_value(k, 1, z + step) - loss_value(k, 1, z - step)) / (2 * step)
    assert loss_subgradient(k, 1, z) == pytest.approx(fd, abs=1e-6)
    assert loss_subgradient(k, 1, z) == pytest.approx(-0.5, abs=1e-12)


def test_huber_hinge_region_values():
    k = LossKind("huber_hinge", huber_width=1.0)
    assert loss_value(k, 1, 2.0) == 0.0
    assert loss_value(k, 1, 0.5) == pytest.approx(0.125)
    assert loss_value(k, 1, -1.0) == pytest.approx(1.0 - (-1.0) - 0.5)


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.name)
def test_convexity_probe(kind, rng):
    for _ in range(300):
        y = int(rng.choice([-1, 1]))
        z1, z2 = rng.normal(scale=3.0, size=2)
        t = float(rng.random())
        mid = loss_value(kind, y, t * z1 + (1 - t) * z2)
        chord = t * loss_value(kind, y, z1) + (1 - t) * loss_value(kind, y, z2)
        assert mid <= chord + 1e-12


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.name)
def test_subgradient_inequality(kind, rng):
    for _ in range(300):
        y = int(rng.choice([-1, 1]))
        z1, z2 = rng.normal(scale=3.0, size=2)
        xi = loss_subgradient(kind, y, z1)
        assert loss_value(kind, y, z2) >= loss_value(kind, y, z1) + xi * (z2 - z1) - 1e-12


@pytest.mark.parametrize("kind", SMOOTH, ids=lambda k: f"{k.name}-{k.huber_width}")
def test_smooth_subgradient_matches_fd(kind, rng):
    for _ in range(100):
        y = int(rng.choice([-1, 1]))
        z = float(rng.normal(scale=3.0))
        step = 1e-6
        fd = (loss_value(kind, y, z + step) - loss_value(kind, y, z - step)) / (2 * step)
        assert loss_subgradient(kind, y, z) == pytest.approx(fd, abs=1e-6)


def test_margin_helpers_vectorized():
    k = LossKind("huber_hinge")
    m = np.array([-2.0, 0.5, 1.5])
    assert margin_values(k, m).shape == (3,)
    assert margin_slopes(k, m).tolist() == [-1.0, -0.5, 0.0]


def test_rejects_bad_labels_and_kinds():
    with pytest.raises(DataError):
        loss_value(LossKind("hinge"), 0, 1.0)
    with pytest.raises(ConfigError):
        LossKind("quadratic")
    with pytest.raises(ConfigError):
        LossKind("huber_hinge", huber_width=0.0)


def test_objective_at_origin_closed_form(rng):
    train, _ = make_problem(7)
    w = np.zeros(train.dim)
    state = objective_and_subgradient(LossKind("hinge"), train, w, 2.5)
    assert state.objective_value == pytest.approx(2.5 * train.n)
    expect = 2.5 * sum(-train.y[i] * train.dense_features()[i] for i in range(train.n))
    assert np.allclose(state.subgradient, expect, atol=1e-12)
    assert state.subgradient_norm == pytest.approx(np.linalg.norm(expect))


def test_objective_value_recomputable(rng):
    train, _ = make_problem(8)
    kind = LossKind("logistic")
    w = rng.normal(size=train.dim)
    state = objective_and_subgradient(kind, train, w, 0.7)
    margins = train.y * (train.dense_features() @ w)
    direct = 0.5 * w @ w + 0.7 * margin_values(kind, margins).sum()
    assert state.objective_value == pytest.approx(direct, rel=1e-9)


@pytest.mark.parametrize("kind", [LossKind("huber_hinge"), LossKind("logistic")], ids=lambda k: k.name)
def test_objective_gradient_matches_central_differences(kind, rng):
    train, _ = make_problem(9, n_train=5, d=3)
    w = rng.normal(size=train.dim)
    state = objective_and_subgradient(kind, train, w, 1.3)

    def f(v):
        return objective_and_subgradient(kind, train, v, 1.3).objective_value

    for i in range(train.dim):
        e = np.zeros(train.dim)
        e[i] = 1e-6
        fd = (f(w + e) - f(w - e)) / 2e-6
        assert state.subgradient[i] == pytest.approx(fd, abs=1e-5)


def test_exact_optimum_has_vanishing_subgradient():
    train, _ = make_problem(11, n_train=15, d=3)
    X = train.dense_features()
    w_star = solve_huber_exact(X, train.y.astype(float), 2.0, g_tol=1e-10)
    state = objective_and_subgradient(LossKind("huber_hinge"), train, w_star, 2.0)
    assert state.subgradient_norm <= 1e-9


def test_non_finite_weights_rejected():
    train, _ = make_problem(12)
    w = np.full(train.dim, np.nan)
    with pytest.raises(DataError):
        objective_and_subgradient(LossKind("hinge"), train, w, 1.0)
