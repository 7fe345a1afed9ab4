"""
What does agreement look like by chance?
========================================

Draw pairs of independent random orderings of nine features and look at
the spread of the similarity scores. This is the baseline any pair of
explainers should beat.
"""

import numpy as np

from explainsim.stats import kde, sample_metric_distribution, summarize

shreyan, pearson = sample_metric_distribution(x=9, n_samples=1000, seed=0)

s = summarize(shreyan)
print(f"shreyan: median {np.median(shreyan):.3f}, mean {s.mean:.3f}, skew {s.skewness:.3f}")
print(f"pearson (rescaled to [0, 1]): mean {pearson.mean():.3f}")

# the density estimate peaks below one half and has a longer right tail
curve = kde(shreyan)
print(f"mode near {curve.mode():.3f}, area {curve.integral():.4f}")

# coarse text histogram
counts, edges = np.histogram(shreyan, bins=12, range=(0, 1))
for c, lo in zip(counts, edges):
    print(f"{lo:4.2f} {'#' * (c // 5)}")
