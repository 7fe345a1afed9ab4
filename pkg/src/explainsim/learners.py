"""Synthetic tabular datasets and a small roster of trainable models.

Every model exposes ``predict``; classifiers add ``predict_proba``. Models
are plain frozen dataclasses holding their fitted arrays, so a fitted model
can be shared freely between explainer workers.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy import linalg, special

from .exceptions import ConvergenceWarning, DataError, NumericalWarning
from .ranking import default_feature_names
from .stats import make_rng

__all__ = [
    "Dataset",
    "SplitDataset",
    "TrainedModel",
    "REGRESSION_KINDS",
    "CLASSIFICATION_KINDS",
    "make_regression",
    "make_classification",
    "split_and_standardize",
    "fit",
    "predict",
    "predict_proba",
    "linear_model",
]

REGRESSION_KINDS = ("dummy", "ols", "ridge", "knn")
CLASSIFICATION_KINDS = ("dummy", "logistic", "knn", "gaussian_nb")


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    task: str
    feature_names: tuple[str, ...]
    seed: int | None = None
    coef: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.task not in ("regression", "classification"):
            raise DataError(f"unknown task {self.task!r}")
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise DataError("X must be n x p with one target per row")
        if self.X.shape[0] < 4 or self.X.shape[1] < 1:
            raise DataError("dataset needs n >= 4 rows and p >= 1 features")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise DataError("dataset contains non-finite values")
        if self.task == "classification" and np.unique(self.y).size < 2:
            raise DataError("classification data needs at least 2 classes")

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([*self.feature_names, "target"])
            y = self.y.astype(int) if self.task == "classification" else self.y
            for row, target in zip(self.X.tolist(), y.tolist()):
                w.writerow([*map(repr, row), repr(target)])


@dataclass(frozen=True)
class SplitDataset:
    X_train: np.ndarray
    y_train: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray
    mean: np.ndarray
    scale: np.ndarray
    constant: np.ndarray
    task: str
    feature_names: tuple[str, ...]

    @property
    def n_features(self) -> int:
        return self.X_train.shape[1]

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale


def make_regression(
    n: int = 100,
    p: int = 20,
    n_informative: int = 5,
    noise_sd: float = 0.0,
    seed: int = 0,
) -> Dataset:
    """Linear regression data ``y = X w + noise`` with sparse ``w``.

    ``X`` has iid standard normal entries. ``n_informative`` weights drawn
    uniform(0, 100) sit at random positions; the rest are zero. The weight
    vector is kept on ``Dataset.coef``.
    """
    if n < 4 or p < 1 or not 1 <= n_informative <= p or noise_sd < 0:
        raise DataError("invalid shape parameters for make_regression")
    rng = make_rng(seed)
    X = rng.standard_normal((n, p))
    w = np.zeros(p)
    informative = rng.choice(p, size=n_informative, replace=False)
    w[informative] = rng.uniform(0.0, 100.0, size=n_informative)
    y = X @ w
    if noise_sd > 0:
        y = y + noise_sd * rng.standard_normal(n)
    return Dataset(X, y, "regression", default_feature_names(p), seed, w)


def make_classification(
    n: int = 100,
    p: int = 20,
    n_informative: int = 5,
    n_classes: int = 2,
    class_sep: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Gaussian blobs around hypercube vertices.

    Each class gets a centroid at a random vertex of ``[-class_sep,
    class_sep]^n_informative`` (distinct vertices when enough exist). Class
    sizes are balanced with the remainder going to the lowest labels, and
    the rows are shuffled.
    """
    if n_classes < 2 or p < 1 or not 1 <= n_informative <= p or n < 2 * n_classes:
        raise DataError("invalid shape parameters for make_classification")
    rng = make_rng(seed)
    n_vertices = 2**n_informative if n_informative < 63 else None
    if n_vertices is not None and n_classes <= n_vertices:
        codes = rng.choice(n_vertices, size=n_classes, replace=False)
        bits = (codes[:, None] >> np.arange(n_informative)) & 1
    else:
        bits = rng.integers(0, 2, size=(n_classes, n_informative))
    centroids = class_sep * (2.0 * bits - 1.0)

    counts = np.full(n_classes, n // n_classes)
    counts[: n % n_classes] += 1
    y = np.repeat(np.arange(n_classes), counts)
    X = rng.standard_normal((n, p))
    X[:, :n_informative] += centroids[y]
    informative = rng.permutation(p)[:n_informative]
    cols = np.empty(p, dtype=int)
    rest = np.setdiff1d(np.arange(p), informative)
    cols[informative] = np.arange(n_informative)
    cols[rest] = np.arange(n_informative, p)
    X = X[:, cols]
    order = rng.permutation(n)
    return Dataset(X[order], y[order], "classification", default_feature_names(p), seed)


def split_and_standardize(ds: Dataset, test_fraction: float = 0.2, seed: int = 0) -> SplitDataset:
    """Shuffle-split and standardize features with train-set statistics."""
    if not 0 < test_fraction < 1:
        raise DataError("test_fraction must lie strictly between 0 and 1")
    n = ds.X.shape[0]
    n_test = int(round(n * test_fraction))
    if n_test < 1 or n - n_test < 2:
        raise DataError(f"split of {n} rows at {test_fraction} is too small")
    order = make_rng(seed).permutation(n)
    test, train = order[:n_test], order[n_test:]
    X_train, X_test = ds.X[train], ds.X[test]
    mean = X_train.mean(axis=0)
    sd = X_train.std(axis=0)
    constant = sd < 1e-12
    scale = np.where(constant, 1.0, sd)
    if ds.task == "classification" and np.unique(ds.y[train]).size < 2:
        raise DataError("training split contains a single class")
    return SplitDataset(
        (X_train - mean) / scale, ds.y[train].copy(),
        (X_test - mean) / scale, ds.y[test].copy(),
        mean, scale, constant, ds.task, ds.feature_names,
    )


@dataclass(frozen=True)
class TrainedModel:
    """A fitted model. ``params`` holds the kind-specific arrays."""

    kind: str
    task: str
    params: Mapping[str, Any]
    n_features: int
    classes: np.ndarray | None = None
    converged: bool = True

    def predict(self, X) -> np.ndarray:
        return predict(self, X)

    def predict_proba(self, X) -> np.ndarray:
        return predict_proba(self, X)

    def output(self, X, target_class: int | None = None) -> np.ndarray:
        """Scalar model output: prediction for regression, class probability
        for classification."""
        if self.task == "regression":
            return self.predict(X)
        proba = self.predict_proba(X)
        return proba[:, target_class]


def linear_model(coef, intercept: float = 0.0) -> TrainedModel:
    """A regression model ``f(x) = coef @ x + intercept`` with given weights."""
    coef = np.asarray(coef, dtype=float)
    return TrainedModel("ols", "regression", {"coef": coef, "intercept": float(intercept)}, coef.size)


def _with_intercept(X: np.ndarray) -> np.ndarray:
    return np.hstack([np.ones((X.shape[0], 1)), X])


def _fit_ridge(X, y, lam):
    # intercept is left unpenalized
    xm, ym = X.mean(axis=0), y.mean()
    Xc = X - xm
    A = Xc.T @ Xc + lam * np.eye(X.shape[1])
    coef = linalg.solve(A, Xc.T @ (y - ym), assume_a="pos")
    return coef, float(ym - xm @ coef)


def _fit_ols(X, y):
    Xa = _with_intercept(X)
    Q, R = linalg.qr(Xa, mode="economic")
    diag = np.abs(np.diag(R))
    if diag.min() <= max(Xa.shape) * np.finfo(float).eps * diag.max():
        warnings.warn("singular design; falling back to ridge with lambda=1e-8", NumericalWarning)
        return _fit_ridge(X, y, 1e-8)
    beta = linalg.solve_triangular(R, Q.T @ y)
    return beta[1:], float(beta[0])


_PROBA_EPS = 1e-15


def _softmax(Z):
    return np.exp(Z - special.logsumexp(Z, axis=1, keepdims=True))


def _fit_logistic(X, y, n_classes, l2=1e-6, max_iter=50, tol=1e-8):
    """Multinomial logistic regression by Newton / IRLS.

    The last class is the reference with its column of the ``(p + 1) x K``
    parameter matrix fixed at zero, which makes the model identifiable. The
    L2 term applies to the non-intercept weights. Returns the iterate with
    the lowest penalized loss and whether the tolerance was met.
    """
    n, p = X.shape
    Xa = _with_intercept(X)
    K = n_classes
    q = p + 1
    Y = np.eye(K)[y]
    W = np.zeros((q, K))
    pen = np.full(q, l2)
    pen[0] = 0.0

    def loss(W):
        Z = Xa @ W
        nll = -np.sum(Y * (Z - special.logsumexp(Z, axis=1, keepdims=True)))
        return nll + 0.5 * np.sum(pen[:, None] * W**2)

    best, best_loss = W, loss(W)
    converged = False
    for _ in range(max_iter):
        P = _softmax(Xa @ W)
        grad = (Xa.T @ (P - Y) + pen[:, None] * W)[:, :K - 1].reshape(-1, order="F")
        H = np.empty((q * (K - 1), q * (K - 1)))
        for a in range(K - 1):
            for b in range(a, K - 1):
                s = P[:, a] * ((a == b) - P[:, b])
                block = (Xa * s[:, None]).T @ Xa
                if a == b:
                    block += np.diag(pen)
                H[a * q:(a + 1) * q, b * q:(b + 1) * q] = block
                H[b * q:(b + 1) * q, a * q:(a + 1) * q] = block.T
        step = np.zeros((q, K))
        step[:, :K - 1] = np.linalg.lstsq(H, grad, rcond=None)[0].reshape((q, K - 1), order="F")
        # halve the step until the penalized loss does not increase
        t, current = 1.0, loss(W)
        while t > 1e-6 and loss(W - t * step) > current:
            t *= 0.5
        W_new = W - t * step
        change = np.max(np.abs(W_new - W))
        W = W_new
        cur = loss(W)
        if cur <= best_loss:
            best, best_loss = W, cur
        if change < tol:
            converged = True
            break
    return best, converged


def fit(kind: str, split: SplitDataset, **hyperparams) -> TrainedModel:
    """Fit a built-in model on the standardized training partition.

    Kinds: ``dummy``, ``ols``, ``ridge`` (``lam``, default 1.0), ``knn``
    (``k``, default 5), ``logistic`` (``max_iter``, default 50), ``gaussian_nb``.
    """
    X, y, task = split.X_train, split.y_train, split.task
    p = X.shape[1]
    allowed = REGRESSION_KINDS if task == "regression" else CLASSIFICATION_KINDS
    if kind not in allowed:
        raise ValueError(f"model kind {kind!r} is not available for {task}")
    classes = None
    if task == "classification":
        classes = np.unique(y)
        y = np.searchsorted(classes, y)
    K = None if classes is None else classes.size

    if kind == "dummy":
        if task == "regression":
            params = {"value": float(y.mean())}
        else:
            params = {"prior": np.bincount(y, minlength=K) / y.size}
    elif kind == "ols":
        coef, intercept = _fit_ols(X, y)
        params = {"coef": coef, "intercept": intercept}
    elif kind == "ridge":
        coef, intercept = _fit_ridge(X, y, float(hyperparams.get("lam", 1.0)))
        params = {"coef": coef, "intercept": intercept}
    elif kind == "knn":
        k = int(hyperparams.get("k", 5))
        if not 1 <= k <= X.shape[0]:
            raise ValueError(f"k={k} out of range for {X.shape[0]} training rows")
        params = {"k": k, "X": X.copy(), "y": y.copy(), "n_classes": K}
    elif kind == "logistic":
        W, converged = _fit_logistic(X, y, K, max_iter=int(hyperparams.get("max_iter", 50)))
        if not converged:
            warnings.warn("IRLS did not converge; returning best iterate", ConvergenceWarning)
        return TrainedModel(kind, task, {"W": W}, p, classes, converged)
    elif kind == "gaussian_nb":
        theta = np.stack([X[y == c].mean(axis=0) for c in range(K)])
        var = np.stack([X[y == c].var(axis=0) for c in range(K)])
        params = {
            "theta": theta,
            "var": np.maximum(var, 1e-9),
            "log_prior": np.log(np.bincount(y, minlength=K) / y.size),
        }
    return TrainedModel(kind, task, params, p, classes)


def _check_X(model: TrainedModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"expected {model.n_features} features, got array of shape {X.shape}"
        )
    return X


def _knn_neighbors(params, X):
    d2 = np.sum((X[:, None, :] - params["X"][None, :, :]) ** 2, axis=2)
    return np.argsort(d2, axis=1, kind="stable")[:, : params["k"]]


def _class_index_proba(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    prm = model.params
    n = X.shape[0]
    if model.kind == "dummy":
        return np.tile(prm["prior"], (n, 1))
    if model.kind == "logistic":
        # keep saturated rows strictly inside (0, 1)
        P = np.clip(_softmax(_with_intercept(X) @ prm["W"]), _PROBA_EPS, 1.0 - _PROBA_EPS)
        return P / P.sum(axis=1, keepdims=True)
    if model.kind == "knn":
        labels = prm["y"][_knn_neighbors(prm, X)]
        K = prm["n_classes"]
        counts = (labels[:, :, None] == np.arange(K)).sum(axis=1)
        return counts / prm["k"]
    if model.kind == "gaussian_nb":
        theta, var = prm["theta"], prm["var"]
        jll = -0.5 * (
            np.sum(np.log(2 * np.pi * var), axis=1)[None, :]
            + np.sum((X[:, None, :] - theta[None]) ** 2 / var[None], axis=2)
        ) + prm["log_prior"][None, :]
        return _softmax(jll)
    raise ValueError(f"unknown classifier kind {model.kind!r}")


def predict_proba(model: TrainedModel, X) -> np.ndarray:
    if model.task != "classification":
        raise ValueError("predict_proba is only defined for classifiers")
    return _class_index_proba(model, _check_X(model, X))


def predict(model: TrainedModel, X) -> np.ndarray:
    X = _check_X(model, X)
    prm = model.params
    if model.task == "classification":
        # argmax picks the lowest label on ties
        return model.classes[np.argmax(_class_index_proba(model, X), axis=1)]
    if model.kind == "dummy":
        return np.full(X.shape[0], prm["value"])
    if model.kind in ("ols", "ridge"):
        return X @ prm["coef"] + prm["intercept"]
    if model.kind == "knn":
        return prm["y"][_knn_neighbors(prm, X)].mean(axis=1)
    raise ValueError(f"unknown regressor kind {model.kind!r}")
