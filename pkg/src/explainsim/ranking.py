"""Ranked feature lists and their conversion to permutation form.

Explainers emit signed importance scores per feature. Comparing two
explainers means sorting each score vector into a ranked list, then
relabelling features by their position under a *reference* list so the
reference becomes the identity permutation ``[1, 2, ..., x]`` and the other
list becomes an arbitrary permutation of ``1..x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .exceptions import RankingError

__all__ = [
    "ImportanceRecord",
    "RankedList",
    "as_permutation",
    "rank_features",
    "canonicalize_pair",
    "invert",
    "default_feature_names",
]


def default_feature_names(p: int) -> tuple[str, ...]:
    return tuple(f"f{i}" for i in range(p))


@dataclass(frozen=True)
class ImportanceRecord:
    """Signed importance scores produced by one explainer for one instance.

    ``scores[i]`` belongs to the feature at column ``i``; ``feature_names``
    gives the display name of each column.
    """

    explainer: str
    instance_id: int
    scores: np.ndarray
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float).reshape(-1)
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        names = tuple(self.feature_names) or default_feature_names(scores.size)
        if len(names) != scores.size:
            raise RankingError(
                f"{len(names)} feature names given for {scores.size} scores"
            )
        if len(set(names)) != len(names):
            raise RankingError("duplicate feature names")
        object.__setattr__(self, "feature_names", names)

    def __eq__(self, other):
        if not isinstance(other, ImportanceRecord):
            return NotImplemented
        return (
            self.explainer == other.explainer
            and self.instance_id == other.instance_id
            and self.feature_names == other.feature_names
            and np.array_equal(self.scores, other.scores)
        )

    __hash__ = None

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.feature_names, self.scores.tolist()))


@dataclass(frozen=True)
class RankedList:
    """Feature identifiers ordered from most to least important."""

    items: tuple[Hashable, ...]

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise RankingError("no features")
        if len(set(items)) != len(items):
            raise RankingError("ranked list contains duplicate features")
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def as_permutation(values: Sequence[int]) -> np.ndarray:
    """Validate ``values`` as a bijection on ``1..x`` and return it as ints."""
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise RankingError("permutation must be a non-empty 1-d sequence")
    if not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise RankingError("permutation entries must be integers")
        arr = as_int
    arr = arr.astype(np.int64, copy=False)
    if not np.array_equal(np.sort(arr), np.arange(1, arr.size + 1)):
        raise RankingError(f"not a permutation of 1..{arr.size}: {arr.tolist()}")
    return arr


def rank_features(record: ImportanceRecord, by_absolute: bool = True) -> RankedList:
    """Sort the record's features by descending importance.

    Magnitude is used when ``by_absolute`` is true, the signed score
    otherwise. Ties go to the lower column index.
    """
    scores = record.scores
    if scores.size == 0:
        raise RankingError("no features")
    if not np.all(np.isfinite(scores)):
        raise RankingError("invalid importance")
    key = np.abs(scores) if by_absolute else scores
    # lexsort: last key is primary; index keeps ties stable
    order = np.lexsort((np.arange(scores.size), -key))
    return RankedList(tuple(record.feature_names[i] for i in order))


def canonicalize_pair(
    reference: RankedList, other: RankedList
) -> tuple[np.ndarray, np.ndarray]:
    """Relabel both lists by feature position in ``reference``.

    Returns the identity permutation and ``other`` rewritten in those labels.

    >>> canonicalize_pair(RankedList("ABCDE"), RankedList("BACED"))[1].tolist()
    [2, 1, 3, 5, 4]
    """
    if len(reference) != len(other) or set(reference.items) != set(other.items):
        raise RankingError("incomparable rankings")
    label = {feat: pos for pos, feat in enumerate(reference.items, start=1)}
    ref = np.arange(1, len(reference) + 1, dtype=np.int64)
    oth = np.fromiter((label[f] for f in other.items), dtype=np.int64, count=len(other))
    return ref, oth


def invert(p: Sequence[int]) -> np.ndarray:
    """Inverse permutation ``q`` with ``q[p[i]] = i`` (1-based)."""
    p = as_permutation(p)
    q = np.empty_like(p)
    q[p - 1] = np.arange(1, p.size + 1)
    return q
