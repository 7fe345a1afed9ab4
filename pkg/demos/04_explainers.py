"""
LIME and KernelSHAP on a model we understand
============================================

On a linear model the Shapley values are known in closed form, so we can
see how close both explainers get and whether they rank the features the
same way.
"""

import numpy as np

from explainsim import ExplainerConfig, compare_rankings, rank_features
from explainsim.explainers import exact_linear_shap, kernel_shap_explain, lime_explain
from explainsim.learners import fit, linear_model, make_classification, make_regression, split_and_standardize

split = split_and_standardize(make_regression(100, 6, 3, seed=3), 0.2, seed=3)
w = np.array([2.0, -1.0, 0.5, 0.0, 0.25, -3.0])
model = linear_model(w)
x = split.X_test[0]

lime = lime_explain(model, split, x, ExplainerConfig("lime", seed=0))
shap = kernel_shap_explain(model, split, x, ExplainerConfig("shap", seed=0))
exact = exact_linear_shap(w, split.X_train.mean(axis=0), x)

np.set_printoptions(precision=3, suppress=True)
print("LIME coefficients ", lime.scores)   # estimates w itself
print("KernelSHAP values ", shap.scores)   # estimates w * (x - mean)
print("exact Shapley     ", exact)

# the two explainers answer different questions, so their rankings can disagree
print(rank_features(lime).items)
print(rank_features(shap).items)
print("similarity", compare_rankings(rank_features(lime), rank_features(shap)))

# on a classifier both explain the probability of the predicted class
csplit = split_and_standardize(make_classification(100, 6, 3, seed=4), 0.2, seed=4)
nb = fit("gaussian_nb", csplit)
xc = csplit.X_test[0]
print(lime_explain(nb, csplit, xc, ExplainerConfig("lime")).scores)
print(kernel_shap_explain(nb, csplit, xc, ExplainerConfig("shap")).scores)
