"""Local surrogate (LIME-style) and KernelSHAP explainers.

Both work in the standardized feature space of a :class:`SplitDataset` and
query the model only through :meth:`TrainedModel.output`. For classifiers
the explained function is the probability of the class the model predicts
at the explained instance.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, NumericalWarning
from .learners import SplitDataset, TrainedModel
from .ranking import ImportanceRecord
from .stats import make_rng

__all__ = [
    "ExplainerConfig",
    "LimeFit",
    "lime_fit",
    "lime_explain",
    "shapley_kernel_weight",
    "kernel_shap_values",
    "kernel_shap_explain",
    "exact_linear_shap",
    "explain",
    "EXPLAINER_ALIASES",
]

EXPLAINER_ALIASES = {"lime": "lime", "shap": "kernel_shap", "kernel_shap": "kernel_shap"}
# stream tags keep per-instance seeds distinct between explainer kinds
_KIND_TAG = {"lime": 1, "kernel_shap": 2}
_BACKGROUND_TAG = 3


@dataclass(frozen=True)
class ExplainerConfig:
    """Settings for one explainer.

    ``kernel_width=None`` means ``0.75 * sqrt(p)``. ``background`` is either
    ``"train_mean"`` or an integer ``k``: average the model over ``k``
    training rows drawn without replacement. ``exhaustive`` makes
    KernelSHAP enumerate every coalition (testing aid, ``p <= 16``).
    """

    kind: str = "lime"
    n_samples: int | None = None
    kernel_width: float | None = None
    ridge_strength: float = 1.0
    background: str | int = "train_mean"
    seed: int = 0
    exhaustive: bool = False
    name: str | None = None

    def __post_init__(self):
        try:
            kind = EXPLAINER_ALIASES[self.kind]
        except KeyError:
            raise ValueError(f"unknown explainer kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        if self.n_samples is None:
            object.__setattr__(self, "n_samples", 1000 if kind == "lime" else 2048)
        if self.n_samples < 10:
            raise ValueError("n_samples must be at least 10")
        if self.kernel_width is not None and self.kernel_width <= 0:
            raise ValueError("kernel_width must be positive")
        if self.ridge_strength < 0:
            raise ValueError("ridge_strength must be non-negative")
        if self.background != "train_mean" and not (
            isinstance(self.background, int) and self.background >= 1
        ):
            raise ValueError("background must be 'train_mean' or a positive int")

    @property
    def label(self) -> str:
        return self.name or ("shap" if self.kind == "kernel_shap" else self.kind)


def _target_class(model: TrainedModel, x: np.ndarray) -> int | None:
    if model.task == "regression":
        return None
    return int(np.argmax(model.predict_proba(x[None, :])[0]))


def _check_instance(split: SplitDataset, instance) -> np.ndarray:
    x = np.asarray(instance, dtype=float).reshape(-1)
    if x.size != split.n_features or not np.all(np.isfinite(x)):
        raise DataError(f"instance must hold {split.n_features} finite features")
    return x


@dataclass(frozen=True)
class LimeFit:
    coef: np.ndarray
    intercept: float
    r2: float


def lime_fit(
    model: TrainedModel,
    split: SplitDataset,
    instance,
    config: ExplainerConfig,
    rng: np.random.Generator | None = None,
) -> LimeFit:
    """Weighted ridge surrogate of the model around ``instance``.

    Perturbations are ``x + eps`` with standard normal ``eps``; each gets
    weight ``exp(-|eps|^2 / width^2)``. The intercept is not penalized.
    """
    x = _check_instance(split, instance)
    p = x.size
    rng = rng if rng is not None else make_rng(config.seed)
    width = config.kernel_width or 0.75 * math.sqrt(p)
    eps = rng.standard_normal((config.n_samples, p))
    Z = x + eps
    w = np.exp(-np.sum(eps**2, axis=1) / width**2)
    if w.sum() <= 1e-12 * w.size:
        raise DataError("kernel width too small")
    target = model.output(Z, _target_class(model, x))
    if np.ptp(target) == 0:
        # constant model; centering would leave rounding noise
        return LimeFit(np.zeros(p), float(target[0]), 1.0)

    wn = w / w.sum()
    z_bar = wn @ Z
    t_bar = wn @ target
    Zc = Z - z_bar
    tc = target - t_bar
    A = (Zc * wn[:, None]).T @ Zc + (config.ridge_strength / w.sum()) * np.eye(p)
    coef = np.linalg.solve(A, (Zc * wn[:, None]).T @ tc)
    intercept = float(t_bar - z_bar @ coef)
    resid = tc - Zc @ coef
    ss_tot = float(wn @ tc**2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(wn @ resid**2) / ss_tot
    return LimeFit(coef, intercept, r2)


def lime_explain(
    model: TrainedModel,
    split: SplitDataset,
    instance,
    config: ExplainerConfig,
    instance_id: int = 0,
) -> ImportanceRecord:
    rng = make_rng(config.seed, instance_id, _KIND_TAG["lime"])
    res = lime_fit(model, split, instance, config, rng)
    return ImportanceRecord(config.label, instance_id, res.coef, split.feature_names)


def shapley_kernel_weight(p: int, s: int) -> float:
    """Shapley kernel ``(p - 1) / (C(p, s) * s * (p - s))`` for a size-``s`` coalition."""
    if not 1 <= s <= p - 1:
        raise ValueError("constraint coalition: size must lie in 1..p-1")
    return (p - 1) / (math.comb(p, s) * s * (p - s))


def _background(split: SplitDataset, config: ExplainerConfig) -> np.ndarray:
    if config.background == "train_mean":
        return split.X_train.mean(axis=0, keepdims=True)
    k = min(int(config.background), split.X_train.shape[0])
    rng = make_rng(config.seed, _BACKGROUND_TAG)
    return split.X_train[rng.choice(split.X_train.shape[0], size=k, replace=False)]


def _sample_coalitions(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    sizes = np.arange(1, p)
    # total kernel mass of all size-s coalitions is (p-1)/(s(p-s))
    mass = 1.0 / (sizes * (p - sizes))
    drawn = rng.choice(sizes, size=n, p=mass / mass.sum())
    keys = rng.random((n, p))
    # the s smallest keys of a row form a uniform s-subset
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
    return (ranks < drawn[:, None]).astype(float)


def _all_coalitions(p: int) -> tuple[np.ndarray, np.ndarray]:
    masks = np.array(list(itertools.product((0.0, 1.0), repeat=p)))[1:-1]
    sizes = masks.sum(axis=1).astype(int)
    weights = np.array([shapley_kernel_weight(p, s) for s in sizes])
    return masks, weights


def kernel_shap_values(
    f,
    x: np.ndarray,
    background: np.ndarray,
    masks: np.ndarray,
    weights: np.ndarray | None = None,
) -> tuple[np.ndarray, float]:
    """Attributions from a weighted regression over coalition ``masks``.

    ``f`` maps an ``(m, p)`` array to ``m`` outputs. Returns ``(phi, base)``
    with ``base`` the mean output over the background rows and
    ``phi.sum() == f(x) - base`` by construction.
    """
    p = x.size
    fx = float(f(x[None, :])[0])
    fb = f(background)
    base = float(np.mean(fb))
    delta = fx - base
    if p == 1:
        return np.array([delta]), base
    m = masks.shape[0]
    nb = background.shape[0]
    hybrid = masks[:, None, :] * x + (1.0 - masks[:, None, :]) * background[None, :, :]
    out = f(hybrid.reshape(m * nb, p))
    if np.ptp(np.concatenate([[fx], fb, out])) == 0:
        return np.zeros(p), base
    v = out.reshape(m, nb).mean(axis=1) - base
    w = np.ones(m) if weights is None else weights
    # efficiency constraint: phi_last = delta - sum(phi_rest)
    D = masks[:, :-1] - masks[:, -1:]
    y = v - masks[:, -1] * delta
    A = (D * w[:, None]).T @ D
    b = (D * w[:, None]).T @ y
    if np.linalg.matrix_rank(A) < p - 1:
        warnings.warn("rank-deficient coalition design; adding 1e-10 ridge", NumericalWarning)
        A = A + 1e-10 * np.eye(p - 1)
    rest = np.linalg.solve(A, b)
    return np.append(rest, delta - rest.sum()), base


def kernel_shap_explain(
    model: TrainedModel,
    split: SplitDataset,
    instance,
    config: ExplainerConfig,
    instance_id: int = 0,
) -> ImportanceRecord:
    x = _check_instance(split, instance)
    p = x.size
    cls = _target_class(model, x)

    def f(X):
        return model.output(X, cls)

    masks, weights = np.zeros((0, p)), None
    if p == 1:
        pass
    elif config.exhaustive:
        if p > 16:
            raise ValueError("exhaustive enumeration is limited to p <= 16")
        masks, weights = _all_coalitions(p)
    else:
        rng = make_rng(config.seed, instance_id, _KIND_TAG["kernel_shap"])
        masks = _sample_coalitions(p, config.n_samples, rng)
    phi, _ =kernel_shap_values(f, x, _background(split, config), masks, weights)
    return ImportanceRecord(config.label, instance_id, phi, split.feature_names)


def exact_linear_shap(w, mu, x) -> np.ndarray:
    """Closed-form Shapley values ``w * (x - mu)`` of a linear model."""
    w, mu, x = (np.asarray(a, dtype=float).reshape(-1) for a in (w, mu, x))
    if not w.size == mu.size == x.size:
        raise ValueError("w, mu and x must have equal length")
    return w * (x - mu)


def explain(
    model: TrainedModel,
    split: SplitDataset,
    instance,
    config: ExplainerConfig,
    instance_id: int = 0,
) -> ImportanceRecord:
    if config.kind == "lime":
        return lime_explain(model, split, instance, config, instance_id)
    return kernel_shap_explain(model, split, instance, config, instance_id)

