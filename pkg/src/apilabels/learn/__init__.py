"""From-scratch learners behind a binary-relevance wrapper."""

from apilabels.learn.dummy import DummyModel, predict_dummy, train_dummy
from apilabels.learn.forest import ForestModel, ForestParams, predict_forest, train_forest
from apilabels.learn.logreg import (
    LogregModel,
    LogregParams,
    loss_and_gradient,
    predict_logreg,
    predict_proba_logreg,
    train_logreg,
)
from apilabels.learn.mlknn import MlknnModel, predict_mlknn, train_mlknn
from apilabels.learn.relevance import (
    BASE_KINDS,
    BinaryRelevanceModel,
    binary_relevance_predict,
    binary_relevance_train,
    load_model,
    save_model,
)
from apilabels.learn.tree import TreeNode, TreeParams, entropy, predict_tree, train_tree

__all__ = [
    "BASE_KINDS",
    "BinaryRelevanceModel",
    "DummyModel",
    "ForestModel",
    "ForestParams",
    "LogregModel",
    "LogregParams",
    "MlknnModel",
    "TreeNode",
    "TreeParams",
    "binary_relevance_predict",
    "binary_relevance_train",
    "entropy",
    "load_model",
    "loss_and_gradient",
    "predict_dummy",
    "predict_forest",
    "predict_logreg",
    "predict_mlknn",
    "predict_proba_logreg",
    "predict_tree",
    "save_model",
    "train_dummy",
    "train_forest",
    "train_logreg",
    "train_mlknn",
    "train_tree",
]
