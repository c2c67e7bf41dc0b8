import numpy as np
import pytest

from fsbench import Dataset, DatasetError, load_dataset, make_synthetic, standardize, write_dataset
from fsbench.learners import forest_fit, forest_predict
from fsbench.runner import RunnerError, stratified_folds


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_reencodes_labels_by_first_appearance(tmp_path):
    path = _write(tmp_path, "f0,f1,label\n1,2,a\n3,4,a\n5,6,b\n7,8,b\n")
    ds = load_dataset(path, "tiny")
    assert ds.n_features == 2  # label column excluded
    assert ds.y.tolist() == [0, 0, 1, 1]
    np.testing.assert_array_equal(ds.X, [[1, 2], [3, 4], [5, 6], [7, 8]])


def test_load_reencoding_is_first_appearance_not_lexicographic(tmp_path):
    path = _write(tmp_path, "f0,label\n1,z\n2,z\n3,a\n4,a\n")
    ds = load_dataset(path, "tiny")
    assert ds.y.tolist() == [0, 0, 1, 1]


def test_load_rejects_nan_cell(tmp_path):
    path = _write(tmp_path, "f0,f1,label\n1,nan,a\n3,4,a\n5,6,b\n7,8,b\n")
    with pytest.raises(DatasetError, match="non-finite"):
        load_dataset(path, "bad")


def test_load_rejects_non_numeric_cell(tmp_path):
    path = _write(tmp_path, "f0,f1,label\n1,x,a\n3,4,b\n")
    with pytest.raises(DatasetError, match="non-numeric"):
        load_dataset(path, "bad")


def test_load_rejects_missing_file(tmp_path):
    with pytest.raises(DatasetError, match="not found"):
        load_dataset(tmp_path / "nope.csv", "nope")


def test_load_rejects_single_class(tmp_path):
    path = _write(tmp_path, "f0,label\n1,a\n2,a\n")
    with pytest.raises(DatasetError, match="2 classes"):
        load_dataset(path, "bad")


def test_load_rejects_class_with_single_instance(tmp_path):
    path = _write(tmp_path, "f0,label\n1,a\n2,a\n3,a\n4,b\n")
    with pytest.raises(DatasetError, match="at least 2 instances"):
        load_dataset(path, "bad")


def test_validation_split_between_load_and_folds(tmp_path):
    # small classes pass loading; requesting more folds than members fails later
    path = _write(tmp_path, "f0,label\n1,a\n2,a\n3,a\n4,b\n5,b\n")
    ds = load_dataset(path, "small")
    assert ds.n_classes == 2
    with pytest.raises(RunnerError, match="fold construction impossible"):
        stratified_folds(ds.y, cv=5, seed=0)


def test_round_trip_is_identity(tmp_path):
    ds = make_synthetic(30, 5, 2, 3, seed=4)
    path = tmp_path / "rt.csv"
    write_dataset(ds, path)
    back = load_dataset(path, ds.name)
    np.testing.assert_array_equal(back.X, ds.X)
    np.testing.assert_array_equal(back.y, ds.y)


def test_zero_variance_column_passes_validation():
    X = np.ones((4, 2))
    X[:, 1] = [1, 2, 3, 4]
    ds = Dataset(name="const", X=X, y=np.array([0, 0, 1, 1]))
    assert ds.n_features == 2


def test_make_synthetic_is_deterministic():
    a = make_synthetic(100, 10, 3, 2, seed=7)
    b = make_synthetic(100, 10, 3, 2, seed=7)
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.y, b.y)


def test_make_synthetic_all_informative_boundary():
    ds = make_synthetic(100, 10, 10, 2, seed=1)
    # every column carries class signal: class-1 mean is about 2 above class-0
    gaps = ds.X[ds.y == 1].mean(axis=0) - ds.X[ds.y == 0].mean(axis=0)
    assert np.all(gaps > 1.0)


def test_make_synthetic_balanced_with_round_robin_remainder():
    ds = make_synthetic(11, 4, 2, 3, seed=0)
    counts = np.bincount(ds.y)
    assert counts.tolist() == [4, 4, 3]


def test_make_synthetic_rejects_bad_parameters():
    with pytest.raises(DatasetError):
        make_synthetic(100, 5, 6, 2, seed=0)  # informative > features
    with pytest.raises(DatasetError):
        make_synthetic(100, 5, 2, 1, seed=0)  # single class
    with pytest.raises(DatasetError):
        make_synthetic(3, 5, 2, 2, seed=0)  # too few instances


def test_informative_columns_beat_noise_columns():
    ds = make_synthetic(1000, 50, 5, 3, seed=3)
    folds = stratified_folds(ds.y, 5, seed=0)
    accs = {"informative": [], "noise": []}
    for cols, tag in ((np.arange(5), "informative"), (np.arange(45, 50), "noise")):
        for f in range(5):
            test_idx = folds[f]
            train_idx = np.concatenate([folds[g] for g in range(5) if g != f])
            model = forest_fit(ds.X[np.ix_(train_idx, cols)], ds.y[train_idx], seed=f, n_trees=30)
            pred = forest_predict(model, ds.X[np.ix_(test_idx, cols)])
            accs[tag].append(np.mean(pred == ds.y[test_idx]))
    assert np.mean(accs["informative"]) > np.mean(accs["noise"])


def test_standardize_fit_basic():
    X = np.array([[1.0], [2.0], [3.0]])
    Xs, (mean, std) = standardize(X)
    assert mean[0] == 2.0 and std[0] == 1.0  # sample std, ddof=1
    np.testing.assert_allclose(Xs[:, 0], [-1.0, 0.0, 1.0])


def test_standardize_constant_column():
    X = np.full((3, 1), 5.0)
    Xs, (mean, std) = standardize(X)
    np.testing.assert_array_equal(Xs, np.zeros((3, 1)))
    assert std[0] == 0.0


def test_standardize_transform_mode_uses_train_stats():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(6, 3)) * 4 + 1
    train, test = X[:4], X[4:]
    _, stats = standardize(train)
    test_std, _ = standardize(test, stats)
    assert abs(test_std[:, 0].mean()) > 1e-12  # test mean generally nonzero


def test_standardize_fit_then_transform_reproduces():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(10, 4))
    fit_out, stats = standardize(X)
    transform_out, _ = standardize(X, stats)
    np.testing.assert_array_equal(fit_out, transform_out)


def test_standardize_rejects_mismatched_stats():
    X = np.ones((3, 2))
    with pytest.raises(DatasetError, match="stats"):
        standardize(X, (np.zeros(3), np.ones(3)))
