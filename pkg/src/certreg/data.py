"""Dataset handling: libsvm text ingestion, [-1, 1] feature scaling, splits.

Instances are sparse feature vectors with labels in {-1, +1}.  Datasets are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, DataError, ParseError

__all__ = [
    "LabeledInstance",
    "Dataset",
    "SplitSpec",
    "FeatureScaler",
    "parse_libsvm",
    "serialize_libsvm",
    "standardize",
    "split",
    "split_holdout",
    "split_kfold",
]


@dataclass(frozen=True)
class LabeledInstance:
    """One sparse instance: 1-based strictly increasing indices and a +-1 label."""

    indices: tuple  # 1-based feature indices, strictly increasing
    values: tuple
    label: int

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise DataError(f"label must be -1 or +1, got {self.label}")
        prev = 0
        for idx in self.indices:
            if idx <= prev:
                raise DataError(f"feature indices must be strictly increasing, got {self.indices}")
            prev = idx

    def dense(self, dim):
        x = np.zeros(dim)
        for i, v in zip(self.indices, self.values):
            x[i - 1] = v
        return x

    @property
    def is_zero(self):
        return all(v == 0.0 for v in self.values)


class Dataset:
    """Ordered collection of labeled sparse instances with a fixed dimension."""

    def __init__(self, X, y, dim=None):
        X = sp.csr_matrix(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.shape[0] != y.shape[0]:
            raise DataError(f"feature/label count mismatch: {X.shape[0]} vs {y.shape[0]}")
        if X.shape[0] < 1:
            raise DataError("dataset must contain at least one instance")
        if not np.all(np.isin(y, (-1, 1))):
            raise DataError("labels must all be -1 or +1")
        if dim is not None:
            if dim < X.shape[1]:
                raise DataError(f"declared dimension {dim} < max feature index {X.shape[1]}")
            X = sp.csr_matrix((X.data, X.indices, X.indptr), shape=(X.shape[0], dim))
        self.X = X
        self.y = y
        self._dense = None
        self._row_norms = None

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    def dense_features(self):
        """Dense (n, dim) view, cached; intended for small datasets."""
        if self._dense is None:
            self._dense = np.asarray(self.X.todense())
        return self._dense

    def row_norms(self):
        if self._row_norms is None:
            sq = np.asarray(self.X.multiply(self.X).sum(axis=1)).ravel()
            self._row_norms = np.sqrt(sq)
        return self._row_norms

    def instance(self, i):
        row = self.X.getrow(i)
        return LabeledInstance(
            indices=tuple(int(j) + 1 for j in row.indices),
            values=tuple(float(v) for v in row.data),
            label=int(self.y[i]),
        )

    def subset(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.X[indices], self.y[indices], dim=self.dim)

    def zero_rows(self):
        """Indices of instances whose feature vector is entirely zero."""
        nnz = np.diff(self.X.indptr)
        explicit_zero = np.asarray(np.abs(self.X).sum(axis=1)).ravel() == 0.0
        return np.where((nnz == 0) | explicit_zero)[0]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.y, other.y)
            and (self.X != other.X).nnz == 0
        )


@dataclass
class SplitSpec:
    """How to carve a dataset into train/validation views."""

    mode: str = "holdout"  # "holdout" | "kfold"
    holdout_fraction: float = 0.5  # fraction assigned to validation
    k: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("holdout", "kfold"):
            raise ConfigError(f"unknown split mode {self.mode!r}")
        if self.mode == "holdout" and not (0.0 < self.holdout_fraction < 1.0):
            raise ConfigError("holdout_fraction must lie in (0, 1)")
        if self.mode == "kfold" and self.k < 2:
            raise ConfigError("k must be >= 2")


def _parse_label(tok, zero_one, lineno):
    try:
        val = float(tok)
    except ValueError:
        raise ParseError(f"unparseable label {tok!r}", lineno) from None
    if zero_one:
        if val == 0.0:
            return -1
        if val == 1.0:
            return 1
        raise ParseError(f"label must be 0 or 1 under 0/1 mapping, got {tok!r}", lineno)
    if val == 1.0:
        return 1
    if val == -1.0:
        return -1
    raise ParseError(f"label must be +-1, got {tok!r}", lineno)


def parse_libsvm(source, zero_one_labels=False, dimension=None, reject_zero_rows=False):
    """Parse libsvm text ("label idx:val idx:val ...") into a Dataset.

    ``source`` may be a string or a text stream.  Lines end with LF or CRLF;
    '#' comments are not supported and raise.  With ``zero_one_labels`` the
    labels 0/1 are mapped to -1/+1; otherwise only +-1 is accepted.
    ``dimension`` may declare a dimension >= the max observed index.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    rows, cols, vals, labels = [], [], [], []
    max_idx = 0
    n = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if "#" in line:
            raise ParseError("comments are not supported", lineno)
        if not line.strip():
            raise ParseError("blank line", lineno)
        toks = line.split()
        labels.append(_parse_label(toks[0], zero_one_labels, lineno))
        prev_idx = 0
        row_nnz = 0
        for tok in toks[1:]:
            idx_s, _, val_s = tok.partition(":")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"malformed feature {tok!r}", lineno) from None
            if idx < 1:
                raise ParseError(f"feature index must be >= 1, got {idx}", lineno)
            if idx <= prev_idx:
                raise ParseError(f"feature indices must be strictly increasing, got {idx} after {prev_idx}", lineno)
            prev_idx = idx
            rows.append(n)
            cols.append(idx - 1)
            vals.append(val)
            if val != 0.0:
                row_nnz += 1
        if reject_zero_rows and row_nnz == 0:
            raise ParseError("all-zero instance not allowed here", lineno)
        max_idx = max(max_idx, prev_idx)
        n += 1
    if n == 0:
        raise ParseError("empty input")
    dim = max_idx if dimension is None else dimension
    if dim < max_idx:
        raise DataError(f"declared dimension {dim} < max feature index {max_idx}")
    dim = max(dim, 1)
    X = sp.csr_matrix((vals, (rows, cols)), shape=(n, dim))
    return Dataset(X, labels, dim=dim)


def serialize_libsvm(dataset):
    """Inverse of parse_libsvm; emits shortest round-tripping float literals."""
    out = []
    X = dataset.X
    for i in range(dataset.n):
        parts = ["+1" if dataset.y[i] > 0 else "-1"]
        start, end = X.indptr[i], X.indptr[i + 1]
        for j, v in zip(X.indices[start:end], X.data[start:end]):
            parts.append(f"{int(j) + 1}:{float(v)!r}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


@dataclass
class FeatureScaler:
    """Per-column affine map x -> a*x + b fitted on a training set."""

    a: np.ndarray
    b: np.ndarray

    def transform(self, dataset):
        # The offset makes implicit zeros nonzero, so the result is dense-backed.
        Xd = dataset.dense_features() * self.a + self.b
        return Dataset(sp.csr_matrix(Xd), dataset.y, dim=dataset.dim)


def fit_standardizer(dataset):
    """Fit the per-column map sending observed min -> -1 and max -> +1.

    Implicit zeros of the sparse storage count as observed values.  Constant
    columns map to 0.
    """
    X = dataset.X.tocsc()
    n, d = X.shape
    col_min = np.zeros(d)
    col_max = np.zeros(d)
    for j in range(d):
        colvals = X.data[X.indptr[j]:X.indptr[j + 1]]
        lo = colvals.min() if colvals.size else 0.0
        hi = colvals.max() if colvals.size else 0.0
        if colvals.size < n:  # implicit zeros present
            lo = min(lo, 0.0)
            hi = max(hi, 0.0)
        col_min[j], col_max[j] = lo, hi
    spread = col_max - col_min
    const = spread == 0.0
    a = np.where(const, 0.0, 2.0 / np.where(const, 1.0, spread))
    b = np.where(const, 0.0, -1.0 - a * col_min)
    return FeatureScaler(a=a, b=b)


def standardize(dataset):
    """Rescale each feature column to [-1, 1]; returns (scaled, scaler).

    The scaler holds training-set parameters so a validation set can be
    rescaled consistently (its values may then leave [-1, 1]).
    """
    scaler = fit_standardizer(dataset)
    return scaler.transform(dataset), scaler


def _check_validation(valid, what):
    zeros = valid.zero_rows()
    if zeros.size:
        raise DataError(
            f"{what} contains all-zero instance(s) at position(s) {zeros.tolist()}; "
            "such instances are always scored as correct and are rejected"
        )


def split_holdout(dataset, fraction=0.5, seed=0):
    """Shuffle deterministically and carve off a validation part."""
    n = dataset.n
    n_valid = int(round(n * fraction))
    n_valid = min(max(n_valid, 1), n - 1)
    order = np.random.default_rng(seed).permutation(n)
    train = dataset.subset(np.sort(order[n_valid:]))
    valid = dataset.subset(np.sort(order[:n_valid]))
    _check_validation(valid, "validation split")
    return train, valid


def split_kfold(dataset, k, seed=0):
    """Deterministic k disjoint folds of near-equal size covering the dataset.

    Returns k (train, validation) pairs; pair kappa validates on fold kappa and
    trains on the complement.  The first (n mod k) folds have one extra item.
    """
    n = dataset.n
    if k > n:
        raise ConfigError(f"k={k} exceeds dataset size {n}")
    if k < 2:
        raise ConfigError("k must be >= 2")
    order = np.random.default_rng(seed).permutation(n)
    base, extra = divmod(n, k)
    folds = []
    pos = 0
    for kappa in range(k):
        size = base + (1 if kappa < extra else 0)
        folds.append(np.sort(order[pos:pos + size]))
        pos += size
    pairs = []
    for kappa in range(k):
        mask = np.ones(n, dtype=bool)
        mask[folds[kappa]] = False
        train = dataset.subset(np.where(mask)[0])
        valid = dataset.subset(folds[kappa])
        _check_validation(valid, f"fold {kappa}")
        pairs.append((train, valid))
    return pairs


def split(dataset, spec):
    """Dispatch on SplitSpec: (train, valid) for holdout, list of pairs for kfold."""
    if spec.mode == "holdout":
        return split_holdout(dataset, spec.holdout_fraction, spec.seed)
    return split_kfold(dataset, spec.k, spec.seed)
