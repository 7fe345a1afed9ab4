"""
Comparing two feature rankings
==============================

Two explainers hand back importance scores; we only care about the order
they put the features in. Swapping the two most important features should
cost more than swapping the two least important ones.
"""

from explainsim import RankedList, compare_rankings, shreyan_similarity, spearman_distance

# a reference ranking and a few alternatives
reference = [1, 2, 3, 4, 5]
alternatives = {
    "swap top two": [2, 1, 3, 4, 5],
    "swap bottom two": [1, 2, 3, 5, 4],
    "both swaps": [2, 1, 3, 5, 4],
    "reversed": [5, 4, 3, 2, 1],
}

# Spearman's distance cannot tell the first two apart, the position weights can
for label, other in alternatives.items():
    print(f"{label:16s} shreyan={shreyan_similarity(reference, other):.3f} "
          f"spearman={spearman_distance(reference, other):g}")

# feature names work too; the first list is taken as the reference order
a = RankedList(("age", "income", "tenure", "region", "channel"))
b = RankedList(("income", "age", "tenure", "channel", "region"))
for metric in ("shreyan", "kendall", "wkendall", "pearson"):
    print(f"{metric:9s} {compare_rankings(a, b, metric):.4f}")

# the measure is not symmetric in general: it depends on which list is the reference
r, s = [1, 2, 3], [2, 3, 1]
print(shreyan_similarity(r, s), shreyan_similarity(s, r), shreyan_similarity(r, s, symmetric=True))
