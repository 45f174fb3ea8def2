"""Convex margin losses and the regularized training objective.

The objective minimized everywhere in this package is

    F(w) = 0.5*||w||^2 + C * sum_i loss(y_i, w.x_i),      C > 0,

and its (sub)gradient is  g(w) = w + C * sum_i xi_i(w)  where xi_i is the
chosen subgradient of the i-th loss term.  All losses are convex and
subdifferentiable in the score argument; the subgradient selection below is
the package-wide canonical one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError

__all__ = [
    "LossKind",
    "ObjectiveState",
    "loss_value",
    "loss_subgradient",
    "margin_values",
    "margin_slopes",
    "objective_and_subgradient",
]

_VARIANTS = ("hinge", "huber_hinge", "logistic")


@dataclass(frozen=True)
class LossKind:
    """A loss variant plus its smoothing parameter where applicable.

    huber_hinge is the smoothed hinge with transition width h (default 1):

        m >= 1        ->  0
        1-h <= m < 1  ->  (1 - m)^2 / (2h)     (quadratic blend)
        m < 1-h       ->  1 - m - h/2          (linear tail)

    with m = y*z the margin.  It is convex and C^1; h -> 0 recovers hinge.
    """

    name: str = "huber_hinge"
    huber_width: float = 1.0

    def __post_init__(self):
        if self.name not in _VARIANTS:
            raise ConfigError(f"unknown loss {self.name!r}, expected one of {_VARIANTS}")
        if self.name == "huber_hinge" and not self.huber_width > 0:
            raise ConfigError("huber_width must be > 0")

    @property
    def differentiable(self):
        return self.name != "hinge"


def margin_values(kind, m):
    """Loss as a function of the margin m = y*z, vectorized."""
    m = np.asarray(m, dtype=np.float64)
    if kind.name == "hinge":
        return np.maximum(0.0, 1.0 - m)
    if kind.name == "huber_hinge":
        h = kind.huber_width
        return np.where(
            m >= 1.0,
            0.0,
            np.where(m >= 1.0 - h, (1.0 - m) ** 2 / (2.0 * h), 1.0 - m - h / 2.0),
        )
    # logistic: log(1 + exp(-m)), computed stably
    return np.logaddexp(0.0, -m)


def margin_slopes(kind, m):
    """Canonical d/dm of the margin loss; 0 at the hinge kink."""
    m = np.asarray(m, dtype=np.float64)
    if kind.name == "hinge":
        return np.where(m < 1.0, -1.0, 0.0)
    if kind.name == "huber_hinge":
        h = kind.huber_width
        return np.where(m >= 1.0, 0.0, np.where(m >= 1.0 - h, -(1.0 - m) / h, -1.0))
    # logistic: -sigmoid(-m), via tanh for stability at large |m|
    return -0.5 * (1.0 - np.tanh(0.5 * m))


def loss_value(kind, y, z):
    """loss(y, z) for a single score; y must be +-1."""
    if y not in (-1, 1):
        raise DataError(f"y must be +-1, got {y}")
    return float(margin_values(kind, y * z))


def loss_subgradient(kind, y, z):
    """Canonical element of the score subdifferential of loss(y, .) at z."""
    if y not in (-1, 1):
        raise DataError(f"y must be +-1, got {y}")
    return float(y * margin_slopes(kind, y * z))


@dataclass
class ObjectiveState:
    """Objective value and subgradient of F at (w, C) on a training set."""

    weights: np.ndarray
    C: float
    objective_value: float
    subgradient: np.ndarray
    subgradient_norm: float


def objective_and_subgradient(kind, train, w, C):
    """Evaluate F(w) and g(w) = w + C * sum_i xi_i(w) on ``train``.

    Summation order over instances is fixed (ascending index), so results are
    bit-stable across runs.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (train.dim,):
        raise DataError(f"weights must have shape ({train.dim},), got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise DataError("weights contain non-finite values")
    if not C > 0:
        raise ConfigError("C must be > 0")
    scores = train.X @ w
    m = train.y * scores
    value = 0.5 * float(w @ w) + C * float(margin_values(kind, m).sum())
    xi = margin_slopes(kind, m) * train.y
    g = w + C * (train.X.T @ xi)
    return ObjectiveState(
        weights=w,
        C=C,
        objective_value=value,
        subgradient=g,
        subgradient_norm=float(np.linalg.norm(g)),
    )
