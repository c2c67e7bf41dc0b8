"""Dataset loading, synthetic data generation, and column standardization.

The on-disk dataset format is a plain UTF-8 CSV: one header row, every
feature cell a decimal float, and the class label (any token) in the last
column. Labels are re-encoded to contiguous integers 0..n_classes-1 in
order of first appearance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """A dataset file or parameter set failed validation."""


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix with integer class labels.

    X has shape (n_instances, n_features); y holds labels in
    [0, n_classes) with every class occurring at least once.
    """

    name: str
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.X, dtype=np.float64))
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.int64))
        if X.ndim != 2:
            raise DatasetError("X must be a 2-D matrix")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise DatasetError("y length must match the number of instances")
        if X.shape[0] < 2:
            raise DatasetError("dataset needs at least 2 instances")
        if X.shape[1] < 1:
            raise DatasetError("dataset needs at least 1 feature")
        if not np.all(np.isfinite(X)):
            raise DatasetError(f"non-finite value in dataset {self.name!r}")
        classes = np.unique(y)
        if classes.size < 2:
            raise DatasetError("dataset needs at least 2 classes")
        if classes[0] != 0 or classes[-1] != classes.size - 1:
            raise DatasetError("labels must be contiguous integers starting at 0")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_instances(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.y.max()) + 1


def encode_labels(tokens) -> np.ndarray:
    """Re-encode arbitrary label tokens to 0..n_classes-1 by first appearance."""
    seen: dict = {}
    out = np.empty(len(tokens), dtype=np.int64)
    for i, tok in enumerate(tokens):
        if tok not in seen:
            seen[tok] = len(seen)
        out[i] = seen[tok]
    return out


def load_dataset(path, name: str) -> Dataset:
    """Load a dataset CSV (header row, label in the last column).

    Rejects missing files, non-numeric feature cells, non-finite values,
    fewer than 2 classes, and any class with fewer than 2 instances
    (stratified folds would be impossible downstream).
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"dataset file not found: {path}")
    rows = []
    labels = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise DatasetError(f"{path}: need a header row with at least one feature column")
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise DatasetError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
            try:
                rows.append([float(cell) for cell in row[:-1]])
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: non-numeric feature cell") from None
            labels.append(row[-1])
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    X = np.asarray(rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise DatasetError(f"{path}: non-finite value")
    y = encode_labels(labels)
    counts = np.bincount(y)
    if counts.size < 2:
        raise DatasetError(f"{path}: fewer than 2 classes")
    if counts.min() < 2:
        raise DatasetError(f"{path}: every class needs at least 2 instances")
    return Dataset(name=name, X=X, y=y)


def write_dataset(dataset: Dataset, path) -> None:
    """Write a dataset in the CSV format accepted by load_dataset."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(dataset.n_features)] + ["label"])
        for i in range(dataset.n_instances):
            # repr round-trips float64 exactly
            writer.writerow([repr(float(v)) for v in dataset.X[i]] + [int(dataset.y[i])])


def make_synthetic(
    n_instances: int,
    n_features: int,
    n_informative: int,
    n_classes: int,
    seed: int,
    name: str | None = None,
) -> Dataset:
    """Generate a deterministic synthetic classification dataset.

    Informative columns are class-conditional Gaussians (unit variance,
    class means spaced 2.0 apart); the remaining columns are standard
    normal noise. Instances are balanced across classes with any
    remainder assigned round-robin.
    """
    if not 1 <= n_informative <= n_features:
        raise DatasetError("need 1 <= n_informative <= n_features")
    if n_classes < 2:
        raise DatasetError("need n_classes >= 2")
    if n_instances < 2 * n_classes:
        raise DatasetError("need n_instances >= 2 * n_classes")
    rng = np.random.default_rng(seed)
    y = np.arange(n_instances, dtype=np.int64) % n_classes
    X = np.empty((n_instances, n_features), dtype=np.float64)
    X[:, :n_informative] = rng.standard_normal((n_instances, n_informative)) + 2.0 * y[:, None]
    if n_features > n_informative:
        X[:, n_informative:] = rng.standard_normal((n_instances, n_features - n_informative))
    if name is None:
        name = f"synthetic_{n_instances}x{n_features}_i{n_informative}_c{n_classes}_s{seed}"
    return Dataset(name=name, X=X, y=y)


def standardize(X: np.ndarray, stats=None):
    """Standardize columns to zero mean and unit sample std (ddof=1).

    In fit mode (stats=None) the statistics are computed from X; in
    transform mode the given (mean, std) pair is applied. Columns whose
    std is 0 are shifted by their mean and left unscaled; the recorded
    std stays 0. Returns (transformed matrix, (mean, std)).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.size == 0:
        raise DatasetError("X must be a non-empty 2-D matrix")
    if stats is None:
        mean = X.mean(axis=0)
        if X.shape[0] > 1:
            std = X.std(axis=0, ddof=1)
        else:
            std = np.zeros(X.shape[1])
    else:
        mean, std = stats
        mean = np.asarray(mean, dtype=np.float64)
        std = np.asarray(std, dtype=np.float64)
        if mean.shape != (X.shape[1],) or std.shape != (X.shape[1],):
            raise DatasetError("standardization stats do not match the matrix width")
    divisor = np.where(std > 0, std, 1.0)
    return (X - mean) / divisor, (mean, std)
