"""Explainer-agreement study: regression vs. classification.

For every (task, model kind, repetition) cell a fresh dataset is generated,
split and standardized, the model is fitted, and every test row is
explained by a reference and a comparison explainer. The per-instance rank
similarities are averaged into one number per cell. The two task samples
are then summarized, density-estimated and compared with a pooled t-test.

All randomness is derived from ``master_seed`` and the cell coordinates,
so results do not depend on execution order or worker count.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import io as xio
from .exceptions import DataError, ExplainSimError
from .explainers import EXPLAINER_ALIASES, ExplainerConfig, explain
from .learners import (
    SplitDataset,
    TrainedModel,
    fit,
    make_classification,
    make_regression,
    split_and_standardize,
)
from .metrics import BOUNDED_SIMILARITIES, compare_rankings
from .plots import bar_chart_svg, density_svg
from .ranking import ImportanceRecord, rank_features
from .stats import DensityCurve, SummaryStats, TTestResult, kde, pooled_ttest, summarize

__all__ = [
    "StudyConfig",
    "RunResult",
    "StudyResult",
    "ExplanationError",
    "compare_explainers",
    "cell_seeds",
    "run_study",
    "emit_reports",
    "load_config",
]

log = logging.getLogger(__name__)

TASKS = ("regression", "classification")
_STAT_ROWS = ("minmax", "mean", "variance", "skewness", "kurtosis")


class ExplanationError(ExplainSimError):
    def __init__(self, instance_id: int, cause: Exception):
        super().__init__(f"instance {instance_id}: {cause}")
        self.instance_id = instance_id


@dataclass(frozen=True)
class StudyConfig:
    regression_models: tuple[str, ...] = ("dummy", "ols", "ridge", "knn")
    classification_models: tuple[str, ...] = ("dummy", "logistic", "knn", "gaussian_nb")
    reps: int = 3
    n: int = 100
    p: int = 20
    n_informative: int = 5
    n_classes: int = 2
    class_sep: float = 1.0
    noise_sd: float = 0.0
    test_fraction: float = 0.2
    reference: str = "lime"
    comparison: str = "shap"
    lime_samples: int = 1000
    shap_samples: int = 2048
    metric: str = "shreyan"
    symmetric: bool = False
    alpha: float = 0.05
    master_seed: int = 0
    out_dir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if not self.regression_models or not self.classification_models:
            raise ValueError("each task needs at least one model kind")
        if self.metric not in BOUNDED_SIMILARITIES:
            raise ValueError(
                f"study metric must be one of {BOUNDED_SIMILARITIES}, got {self.metric!r}"
            )
        for name in (self.reference, self.comparison):
            if name not in EXPLAINER_ALIASES:
                raise ValueError(f"unknown explainer {name!r}")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.reference == self.comparison:
            log.info("reference and comparison explainer are the same (%s)", self.reference)

    def models(self, task: str) -> tuple[str, ...]:
        return self.regression_models if task == "regression" else self.classification_models

    def explainer_config(self, which: str, seed: int) -> ExplainerConfig:
        kind = self.reference if which == "reference" else self.comparison
        cfg = ExplainerConfig(kind=kind, seed=seed)
        n = self.lime_samples if cfg.kind == "lime" else self.shap_samples
        return replace(cfg, n_samples=n)


def _parse_value(raw: str, kind: type):
    raw = raw.strip()
    if kind is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind is tuple:
        return tuple(s.strip() for s in raw.split(",") if s.strip())
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    return raw or None


def load_config(path, **overrides) -> StudyConfig:
    """Read a flat ``key = value`` config file.

    Blank lines and lines starting with ``#`` are ignored. Model lists are
    comma-separated. Unknown keys are an error.
    """
    types = {
        "regression_models": tuple, "classification_models": tuple,
        "reps": int, "n": int, "p": int, "n_informative": int, "n_classes": int,
        "class_sep": float, "noise_sd": float, "test_fraction": float,
        "reference": str, "comparison": str, "lime_samples": int, "shap_samples": int,
        "metric": str, "symmetric": bool, "alpha": float, "master_seed": int,
        "out_dir": str, "jobs": int,
    }
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, raw = line.partition("=")
            key = key.strip()
            if not sep or key not in types:
                raise DataError(f"{path}: line {lineno}: unrecognized entry {line!r}")
            try:
                values[key] = _parse_value(raw, types[key])
            except ValueError as e:
                raise DataError(f"{path}: line {lineno}: {e}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    return StudyConfig(**values)


@dataclass(frozen=True)
class RunResult:
    model_kind: str
    task: str
    rep: int
    values: np.ndarray
    reference_records: tuple[ImportanceRecord, ...] = field(default=(), repr=False)
    comparison_records: tuple[ImportanceRecord, ...] = field(default=(), repr=False)

    @property
    def average(self) -> float:
        return float(np.mean(self.values))


@dataclass
class StudyResult:
    config: StudyConfig
    runs: list[RunResult]
    failures: list[tuple[str, str, int, str]]
    summaries: dict[str, SummaryStats | None]
    densities: dict[str, DensityCurve | None]
    ttest: TTestResult | None

    def data(self, task: str) -> np.ndarray:
        return np.array([r.average for r in self.runs if r.task == task])

    @property
    def reg_data(self) -> np.ndarray:
        return self.data("regression")

    @property
    def class_data(self) -> np.ndarray:
        return self.data("classification")

    def verdict(self) -> str:
        if self.ttest is None:
            return "no test performed"
        if self.ttest.reject_null:
            return (
                f"reject H0 at alpha={self.ttest.alpha}: mean explainer similarity "
                "differs between regression and classification"
            )
        return (
            f"fail to reject H0 at alpha={self.ttest.alpha}: no evidence of a difference "
            "in mean explainer similarity between regression and classification"
        )


def compare_explainers(
    model: TrainedModel,
    split: SplitDataset,
    reference: ExplainerConfig,
    comparison: ExplainerConfig,
    instances: np.ndarray | None = None,
    metric: str = "shreyan",
    symmetric: bool = False,
    task: str | None = None,
    rep: int = 0,
) -> RunResult:
    """Explain each instance with both explainers and score rank agreement.

    ``instances`` defaults to every test row; instance ids are row indices.
    """
    X = split.X_test if instances is None else np.atleast_2d(np.asarray(instances, dtype=float))
    if X.shape[0] == 0:
        raise DataError("no instances to explain")
    values, refs, cmps = [], [], []
    for i, x in enumerate(X):
        try:
            a = explain(model, split, x, reference, i)
            b = explain(model, split, x, comparison, i)
            values.append(
                compare_rankings(rank_features(a), rank_features(b), metric, symmetric)
            )
        except ExplainSimError as e:
            raise ExplanationError(i, e) from e
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
            raise ExplanationError(i, e) from e
        refs.append(a)
        cmps.append(b)
    return RunResult(
        model.kind, task or split.task, rep, np.array(values), tuple(refs), tuple(cmps)
    )


def cell_seeds(master_seed: int, task_index: int, model_index: int, rep: int) -> dict[str, int]:
    """Seeds for one study cell.

    Each cell owns a child stream of ``master_seed`` keyed by its
    coordinates; the dataset seed is its first 64-bit word.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(task_index, model_index, rep))
    words = ss.generate_state(3, dtype=np.uint64)
    return {"dataset": int(words[0]), "split": int(words[1]), "explainer": int(words[2])}


def _cells(config: StudyConfig):
    for t, task in enumerate(TASKS):
        for m, kind in enumerate(config.models(task)):
            for rep in range(config.reps):
                yield t, task, m, kind, rep


def _run_cell(config: StudyConfig, t: int, task: str, m: int, kind: str, rep: int):
    seeds = cell_seeds(config.master_seed, t, m, rep)
    try:
        if task == "regression":
            ds = make_regression(
                config.n, config.p, config.n_informative, config.noise_sd, seeds["dataset"]
            )
        else:
            ds = make_classification(
                config.n, config.p, config.n_informative, config.n_classes,
                config.class_sep, seeds["dataset"],
            )
        split = split_and_standardize(ds, config.test_fraction, seeds["split"])
        model = fit(kind, split)
        return compare_explainers(
            model, split,
            config.explainer_config("reference", seeds["explainer"]),
            config.explainer_config("comparison", seeds["explainer"]),
            metric=config.metric, symmetric=config.symmetric, task=task, rep=rep,
        )
    except (ExplainSimError, ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
        log.warning("cell %s/%s/rep %d failed: %s", task, kind, rep, e)
        return (task, kind, rep, str(e))


def _run_cell_star(args):
    return _run_cell(*args)


def run_study(config: StudyConfig) -> StudyResult:
    """Run every cell, then summarize, density-estimate and t-test."""
    jobs = [(config, *cell) for cell in _cells(config)]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_run_cell_star, jobs))
    else:
        outcomes = [_run_cell_star(j) for j in jobs]
    runs = [o for o in outcomes if isinstance(o, RunResult)]
    failures = [o for o in outcomes if not isinstance(o, RunResult)]

    result = StudyResult(config, runs, failures, {}, {}, None)
    for task in TASKS:
        sample = result.data(task)
        result.summaries[task] = summarize(sample) if sample.size >= 2 else None
        try:
            result.densities[task] = kde(sample)
        except DataError as e:
            log.info("no density for %s: %s", task, e)
            result.densities[task] = None
    try:
        result.ttest = pooled_ttest(result.reg_data, result.class_data, config.alpha)
    except DataError as e:
        log.warning("t-test skipped: %s", e)
    return result


def _stat_cell(s: SummaryStats | None, row: str) -> str:
    if s is None:
        return ""
    if row == "minmax":
        return f"({s.minmax[0]!r}, {s.minmax[1]!r})"
    return repr(float(getattr(s, row)))


def emit_reports(result: StudyResult, out_dir, svg: bool = True) -> list[Path]:
    """Write the study outputs into ``out_dir``.

    CSV and JSON files are deterministic for a given config; SVG charts are
    convenience renderings.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create output directory {out}: {e}") from e
    written = [
        xio.write_rows(
            out / "summary.csv",
            ["statistic", "Regression", "Classification"],
            (
                [row] + [_stat_cell(result.summaries.get(t), row) for t in TASKS]
                for row in _STAT_ROWS
            ),
        ),
        xio.write_rows(
            out / "runs.csv",
            ["task", "model", "rep", "average", "n_instances"],
            ([r.task, r.model_kind, r.rep, r.average, r.values.size] for r in result.runs),
        ),
        xio.write_rows(
            out / "instances.csv",
            ["task", "model", "rep", "instance_id", "value"],
            (
                [r.task, r.model_kind, r.rep, i, float(v)]
                for r in result.runs
                for i, v in enumerate(r.values)
            ),
        ),
        xio.write_rows(
            out / "failures.csv", ["task", "model", "rep", "error"], result.failures
        ),
    ]
    for task in TASKS:
        curve = result.densities.get(task)
        if curve is not None:
            written.append(xio.write_density_csv(curve, out / f"density_{task}.csv"))
    if result.ttest is not None:
        written.append(xio.write_ttest_json(result.ttest, out / "ttest.json"))
    if svg:
        written.extend(_emit_svgs(result, out))
    return written


def _emit_svgs(result: StudyResult, out: Path) -> list[Path]:
    paths = []
    svg_dir = out / "svg"
    svg_dir.mkdir(exist_ok=True)
    for r in result.runs:
        if r.rep == 0:
            paths.append(
                bar_chart_svg(
                    r.values,
                    svg_dir / f"instances_{r.task}_{r.model_kind}.svg",
                    f"{r.task} / {r.model_kind}: per-instance similarity (mean {r.average:.3f})",
                )
            )
    curves = {
        t.capitalize(): (c.grid, c.density) for t, c in result.densities.items() if c is not None
    }
    paths.append(density_svg(curves, svg_dir / "densities.svg", "Similarity by task"))
    return paths
