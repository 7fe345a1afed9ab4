"""Similarity and distance metrics between two rank permutations.

All functions take two permutations of ``1..x`` of equal length. Position
``n`` (1-based) in either vector carries weight ``x - n + 1`` in the
position-weighted measures, so disagreement near the top of a ranking
costs more than disagreement near the bottom.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .exceptions import NumericAssertionError, RankingError
from .ranking import RankedList, as_permutation, canonicalize_pair, invert

__all__ = [
    "METRICS",
    "d_max",
    "weighted_difference",
    "shreyan_similarity",
    "spearman_distance",
    "kendall_tau",
    "weighted_kendall_tau",
    "pearson_similarity_normalized",
    "position_weights",
    "compare_rankings",
]


def position_weights(x: int) -> np.ndarray:
    """Weights ``x, x-1, ..., 1`` for positions ``1..x``."""
    return np.arange(x, 0, -1, dtype=float)


def _pair(r, r_star) -> tuple[np.ndarray, np.ndarray]:
    r = as_permutation(r)
    r_star = as_permutation(r_star)
    if r.size != r_star.size:
        raise RankingError("incomparable rankings")
    return r, r_star


def d_max(x: int) -> float:
    """Closed-form upper bound of :func:`weighted_difference` for length ``x``.

    >>> d_max(5)
    1.6
    """
    if x < 1:
        raise RankingError("empty ranking")
    return _d_max_numerator(x) / x**2


def _d_max_numerator(x: int) -> int:
    half = x // 2
    total = sum((x - n + 1) * (x - 2 * n + 1) for n in range(1, half + 1))
    total += half * sum(x - n + 1 for n in range(half + 1, x + 1))
    return total


def weighted_difference(r: Sequence[int], r_star: Sequence[int]) -> float:
    """Position-weighted sum of absolute rank differences, scaled by ``x**2``."""
    r, r_star = _pair(r, r_star)
    x = r.size
    # integer arithmetic keeps the numerator exact
    num = int(np.dot(np.arange(x, 0, -1), np.abs(r - r_star)))
    return num / x**2


def shreyan_similarity(
    r: Sequence[int], r_star: Sequence[int], symmetric: bool = False
) -> float:
    """Shreyan Distance: ``1 - d / d_max(x)``; 1 means identical rankings.

    ``r`` and ``r_star`` are read as ranked lists (position ``n`` holds item
    ``r[n]``) with ``r`` as the reference: items are relabelled by their
    position in ``r`` before ``d`` is taken, so for ``r`` equal to the
    identity this is exactly ``1 - weighted_difference(r, r_star) / d_max``.
    A single-item ranking scores 1.0. With ``symmetric=True`` the result
    is the mean over both choices of reference.

    Raises :class:`NumericAssertionError` if ``d`` exceeds ``d_max``. The
    closed form is the true maximum only for x <= 9 and x in {11, 13, 15};
    for other lengths a few near-reversed rankings go past it.
    """
    r, r_star = _pair(r, r_star)
    if symmetric:
        return 0.5 * (_shreyan(r, r_star) + _shreyan(r_star, r))
    return _shreyan(r, r_star)


def _shreyan(r: np.ndarray, r_star: np.ndarray) -> float:
    x = r.size
    if x == 1:
        return 1.0
    relabelled = invert(r)[r_star - 1]
    num = int(np.dot(np.arange(x, 0, -1), np.abs(relabelled - np.arange(1, x + 1))))
    # exact integer comparison of d against d_max
    max_num = _d_max_numerator(x)
    if num > max_num:
        raise NumericAssertionError(
            f"weighted difference {num / x**2} exceeds d_max({x}) = {max_num / x**2}"
        )
    return 1.0 - num / max_num


def spearman_distance(r: Sequence[int], r_star: Sequence[int]) -> float:
    """Sum of squared positionwise rank differences."""
    r, r_star = _pair(r, r_star)
    return float(np.sum((r - r_star) ** 2))


def _concordance(r: np.ndarray, r_star: np.ndarray) -> np.ndarray:
    """Upper-triangle matrix of +1/-1 pair concordance signs (0 elsewhere)."""
    s = np.sign(r[:, None] - r[None, :]) * np.sign(r_star[:, None] - r_star[None, :])
    return np.triu(s, k=1)


def kendall_tau(r: Sequence[int], r_star: Sequence[int]) -> float:
    """Kendall's tau-a over all position pairs."""
    r, r_star = _pair(r, r_star)
    x = r.size
    if x < 2:
        raise RankingError("undefined for fewer than 2 items")
    return float(_concordance(r, r_star).sum()) / (x * (x - 1) / 2)


def _additive_weight(i: np.ndarray, j: np.ndarray, x: int) -> np.ndarray:
    return (x - i + 1) + (x - j + 1)


def weighted_kendall_tau(
    r: Sequence[int],
    r_star: Sequence[int],
    weigher: Callable[[np.ndarray, np.ndarray, int], np.ndarray] | None = None,
) -> float:
    """Kendall's tau with pair weights over reference positions.

    The default weight of pair ``(i, j)`` is ``(x-i+1) + (x-j+1)``. A custom
    ``weigher(i, j, x)`` receives 1-based position index arrays.
    """
    r, r_star = _pair(r, r_star)
    x = r.size
    if x < 2:
        raise RankingError("undefined for fewer than 2 items")
    weigher = weigher or _additive_weight
    i, j = np.triu_indices(x, k=1)
    w = np.broadcast_to(np.asarray(weigher(i + 1, j + 1, x), dtype=float), i.shape)
    s = _concordance(r, r_star)[i, j]
    return float(np.dot(w, s) / w.sum())


def pearson_similarity_normalized(r: Sequence[int], r_star: Sequence[int]) -> float:
    """Pearson correlation of the two rank vectors mapped to ``[0, 1]``."""
    r, r_star = _pair(r, r_star)
    if r.size < 2:
        raise RankingError("undefined for fewer than 2 items")
    a = r - r.mean()
    b = r_star - r_star.mean()
    rho = float(np.dot(a, b) / np.sqrt(np.dot(a, a) * np.dot(b, b)))
    return (min(1.0, max(-1.0, rho)) + 1.0) / 2.0


METRICS: dict[str, Callable[[Sequence[int], Sequence[int]], float]] = {
    "shreyan": shreyan_similarity,
    "spearman": spearman_distance,
    "kendall": kendall_tau,
    "wkendall": weighted_kendall_tau,
    "pearson": pearson_similarity_normalized,
}

# metrics whose values lie in [0, 1] with 1 meaning identical
BOUNDED_SIMILARITIES = ("shreyan", "pearson")


def compare_rankings(
    reference: RankedList,
    other: RankedList,
    metric: str = "shreyan",
    symmetric: bool = False,
) -> float:
    """Canonicalize two ranked lists (``reference`` first) and score them."""
    try:
        fn = METRICS[metric]
    except KeyError:
        raise ValueError(
            f"unknown metric {metric!r}; choose from {sorted(METRICS)}"
        ) from None
    ref, oth = canonicalize_pair(reference, other)
    if symmetric:
        back_ref, back = canonicalize_pair(other, reference)
        return 0.5 * (fn(ref, oth) + fn(back_ref, back))
    return fn(ref, oth)
