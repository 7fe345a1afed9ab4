"""
Do two groups of similarity scores differ?
==========================================

A pooled two-sample t-test needs only the first two moments and the sample size of each group.
"""

import numpy as np

from explainsim.stats import pooled_ttest, ttest_from_summary

# summary statistics for two groups of models
res = ttest_from_summary(0.649809, 0.013377, 114, 0.692116, 0.010448, 75, alpha=0.05)
print(f"t = {res.t:.4f}, df = {res.df:g}, p = {res.p_two_sided:.4f}, reject = {res.reject_null}")

# the same test from raw samples
rng = np.random.default_rng(1)
a = rng.normal(0.65, 0.11, size=30)
b = rng.normal(0.69, 0.10, size=30)
print(pooled_ttest(a, b).as_dict())
