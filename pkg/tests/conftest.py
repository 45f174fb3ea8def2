import numpy as np
import pytest
import scipy.sparse as sp

from certreg import Dataset


def make_dataset(rng, n, d, teacher=None, noise=0.6, flip=0.12):
    """Gaussian features, noisy linear teacher labels, ~flip fraction flipped.

    The label noise makes the validation-error curve genuinely C-dependent.
    """
    teacher = rng.normal(size=d) if teacher is None else teacher
    X = rng.normal(size=(n, d)) + 0.3 * rng.choice([-1.0, 1.0], size=(n, 1)) * teacher
    y = np.where(X @ teacher + noise * rng.normal(size=n) > 0, 1, -1)
    flips = rng.random(n) < flip
    y = np.where(flips, -y, y)
    return Dataset(sp.csr_matrix(X), y)


def make_problem(seed, n_train=None, n_valid=None, d=None):
    """One (train, valid) pair with shared teacher; both classes in train."""
    rng = np.random.default_rng(seed)
    for _ in range(50):
        dd = int(rng.integers(2, 6)) if d is None else d
        nt = int(rng.integers(10, 31)) if n_train is None else n_train
        nv = int(rng.integers(10, 31)) if n_valid is None else n_valid
        teacher = rng.normal(size=dd)
        train = make_dataset(rng, nt, dd, teacher)
        valid = make_dataset(rng, nv, dd, teacher)
        if len(np.unique(train.y)) == 2:
            return train, valid
    raise AssertionError("could not draw a two-class training set")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
