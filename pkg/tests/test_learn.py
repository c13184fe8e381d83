"""From-scratch learners: trees, forests, logistic regression, MLkNN,
the uniform baseline, and the binary-relevance wrapper."""

from __future__ import annotations

import json

import numpy as np
import pytest

from apilabels.errors import DataError, UserError
from apilabels.learn import (
    ForestParams,
    LogregParams,
    TreeParams,
    binary_relevance_predict,
    binary_relevance_train,
    entropy,
    load_model,
    predict_dummy,
    predict_forest,
    predict_logreg,
    predict_mlknn,
    predict_proba_logreg,
    predict_tree,
    save_model,
    train_dummy,
    train_forest,
    train_logreg,
    train_mlknn,
    train_tree,
)
from apilabels.learn.logreg import loss_and_gradient


class TestEntropy:
    def test_uniform_binary(self):
        assert entropy((3, 3)) == pytest.approx(1.0)

    def test_pure_node(self):
        assert entropy((4, 0)) == 0.0

    def test_quarter_split(self):
        assert entropy((1, 3)) == pytest.approx(0.8113, abs=1e-4)

    def test_zero_total_rejected(self):
        with pytest.raises(ValueError):
            entropy((0, 0))


class TestDecisionTree:
    def test_separable_single_split(self):
        X = np.array([[0.0], [0.0], [1.0], [1.0]])
        y = np.array([0, 0, 1, 1], dtype=np.uint8)
        root = train_tree(X, y)
        assert root.feature == 0 and root.threshold == pytest.approx(0.5)
        assert root.left.counts == (2, 0) and root.right.counts == (0, 2)
        assert predict_tree(root, X).tolist() == [0, 0, 1, 1]

    def test_split_gain_is_one_bit(self):
        # entropy(2,2) - 0 = 1.0 measured through the kernel
        from apilabels import kernels

        X = np.array([[0.0], [0.0], [1.0], [1.0]])
        y = np.array([0, 0, 1, 1], dtype=np.uint8)
        _, _, gain = kernels.best_split(
            X, y, np.arange(4, dtype=np.int64), np.array([0], dtype=np.int64), 1
        )
        assert gain == pytest.approx(1.0)

    def test_constant_features_make_leaf(self):
        X = np.ones((6, 2))
        y = np.array([0, 1, 0, 1, 0, 1], dtype=np.uint8)
        root = train_tree(X, y)
        assert root.is_leaf and root.counts == (3, 3)

    def test_max_depth_respected(self, rng):
        X = rng.normal(size=(100, 3))
        y = (rng.random(100) < 0.5).astype(np.uint8)
        root = train_tree(X, y, TreeParams(max_depth=2))
        assert root.depth() <= 2

    def test_leaf_tie_predicts_positive(self):
        from apilabels.learn.tree import TreeNode

        leaf = TreeNode(counts=(2, 2))
        assert predict_tree(leaf, np.zeros((1, 1)))[0] == 1

    def test_serialization_round_trip(self, rng):
        from apilabels.learn.tree import TreeNode

        X = rng.normal(size=(50, 4))
        y = (X[:, 0] > 0).astype(np.uint8)
        root = train_tree(X, y)
        clone = TreeNode.from_dict(json.loads(json.dumps(root.to_dict())))
        assert np.array_equal(predict_tree(clone, X), predict_tree(root, X))


class TestForest:
    def test_degenerate_forest_equals_lone_tree(self, rng):
        X = rng.normal(size=(60, 5))
        y = (X[:, 2] > 0.2).astype(np.uint8)
        lone = train_tree(X, y)
        forest = train_forest(
            X, y, ForestParams(n_estimators=1, bootstrap=False, max_features=None), seed=3
        )
        assert np.array_equal(predict_forest(forest, X), predict_tree(lone, X))

    def test_fixed_seed_bit_identical_serialization(self, rng):
        X = rng.normal(size=(50, 4))
        y = (X[:, 1] > 0).astype(np.uint8)
        a = train_forest(X, y, ForestParams(n_estimators=8), seed=11)
        b = train_forest(X, y, ForestParams(n_estimators=8), seed=11)
        assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)

    def test_parallel_training_matches_sequential(self, rng):
        X = rng.normal(size=(60, 4))
        y = (X[:, 0] + X[:, 3] > 0).astype(np.uint8)
        sequential = train_forest(X, y, ForestParams(n_estimators=6), seed=2, n_jobs=1)
        threaded = train_forest(X, y, ForestParams(n_estimators=6), seed=2, n_jobs=3)
        assert json.dumps(sequential.to_dict()) == json.dumps(threaded.to_dict())

    def test_separable_training_accuracy(self, rng):
        X = rng.normal(size=(120, 2))
        y = (X[:, 0] > 0).astype(np.uint8)
        forest = train_forest(X, y, ForestParams(n_estimators=20), seed=5)
        accuracy = (predict_forest(forest, X) == y).mean()
        assert accuracy >= 0.99

    def test_tree_count_and_depth_invariants(self, rng):
        X = rng.normal(size=(80, 3))
        y = (rng.random(80) < 0.4).astype(np.uint8)
        params = ForestParams(n_estimators=12, max_depth=4)
        forest = train_forest(X, y, params, seed=1)
        assert len(forest.trees) == 12
        assert all(tree.depth() <= 4 for tree in forest.trees)


class TestLogreg:
    def test_linearly_separable(self):
        X = np.array([[-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0]])
        y = np.array([0, 0, 0, 1, 1, 1], dtype=np.uint8)
        model = train_logreg(X, y, LogregParams(lr=0.5, epochs=800, l2=1e-5))
        assert np.array_equal(predict_logreg(model, X), y)

    def test_all_negative_labels(self, rng):
        X = rng.normal(size=(40, 3))
        y = np.zeros(40, dtype=np.uint8)
        model = train_logreg(X, y)
        assert (predict_proba_logreg(model, X) < 0.5).all()

    def test_gradient_matches_finite_differences(self, rng):
        X = rng.normal(size=(25, 6))
        y = (rng.random(25) < 0.5).astype(float)
        w = rng.normal(size=6) * 0.5
        b = float(rng.normal())
        l2 = 1e-3
        _, grad_w, grad_b = loss_and_gradient(X, y, w, b, l2)
        eps = 1e-6
        for i in range(6):
            wp, wm = w.copy(), w.copy()
            wp[i] += eps
            wm[i] -= eps
            fd = (loss_and_gradient(X, y, wp, b, l2)[0] - loss_and_gradient(X, y, wm, b, l2)[0]) / (2 * eps)
            assert abs(fd - grad_w[i]) <= 1e-5 * max(1.0, abs(grad_w[i]))
        fd_b = (loss_and_gradient(X, y, w, b + eps, l2)[0] - loss_and_gradient(X, y, w, b - eps, l2)[0]) / (2 * eps)
        assert abs(fd_b - grad_b) <= 1e-5 * max(1.0, abs(grad_b))

    def test_divergence_reported(self):
        from apilabels.errors import DivergenceError

        X = np.array([[1e8], [-1e8]])
        y = np.array([1.0, 0.0])
        with pytest.raises(DivergenceError, match="smaller learning rate"):
            train_logreg(X, y, LogregParams(lr=1e12, epochs=50, l2=1.0))


class TestMlknn:
    def test_prior_formula(self, rng):
        X = rng.normal(size=(8, 2))
        Y = np.ones((8, 1), dtype=np.uint8)
        model = train_mlknn(X, Y, k=3)
        assert model.prior1[0] == pytest.approx(9 / 10)

    def test_prior_never_exactly_zero(self, rng):
        X = rng.normal(size=(8, 2))
        Y = np.zeros((8, 1), dtype=np.uint8)
        model = train_mlknn(X, Y, k=3)
        assert model.prior1[0] == pytest.approx(1 / 10)

    def test_posteriors_sum_to_one(self, rng):
        X = rng.normal(size=(40, 3))
        Y = (rng.random((40, 5)) < 0.3).astype(np.uint8)
        model = train_mlknn(X, Y, k=6)
        assert np.allclose(model.posterior1.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(model.posterior0.sum(axis=1), 1.0, atol=1e-9)

    def test_separated_clusters_recovered(self, rng):
        a = rng.normal(size=(20, 2)) + np.array([10.0, 10.0])
        b = rng.normal(size=(20, 2)) - np.array([10.0, 10.0])
        X = np.vstack([a, b])
        Y = np.zeros((40, 2), dtype=np.uint8)
        Y[:20, 0] = 1
        Y[20:, 1] = 1
        model = train_mlknn(X, Y, k=5)
        held_out = np.array([[11.0, 9.0], [-9.0, -11.0]])
        assert predict_mlknn(model, held_out).tolist() == [[1, 0], [0, 1]]

    def test_k_bound(self, rng):
        with pytest.raises(UserError):
            train_mlknn(rng.normal(size=(5, 2)), np.zeros((5, 1), dtype=np.uint8), k=5)


class TestDummy:
    def test_same_seed_same_predictions(self):
        model = train_dummy(np.zeros((5, 4), dtype=np.uint8), seed=21)
        X = np.zeros((50, 3))
        assert np.array_equal(predict_dummy(model, X), predict_dummy(model, X))

    def test_positive_rate_close_to_half(self):
        model = train_dummy(np.zeros((5, 3), dtype=np.uint8), seed=2)
        predictions = predict_dummy(model, np.zeros((10000, 1)))
        rates = predictions.mean(axis=0)
        assert np.all(np.abs(rates - 0.5) < 0.02)

    def test_expected_hamming_loss_half(self, rng):
        from apilabels.evaluation import hamming_loss

        truth = (rng.random((10000, 3)) < 0.3).astype(np.uint8)
        model = train_dummy(truth, seed=7)
        loss = hamming_loss(truth, predict_dummy(model, np.zeros((10000, 2)))[:, :3])
        assert abs(loss - 0.5) < 0.03


class TestBinaryRelevance:
    def _dataset(self, rng, n=80, labels=3):
        X = rng.normal(size=(n, 6))
        Y = np.zeros((n, labels), dtype=np.uint8)
        for j in range(labels):
            Y[:, j] = (X[:, j] > 0).astype(np.uint8)
        return X, Y

    def test_one_model_per_label(self, rng):
        X, Y = self._dataset(rng)
        model = binary_relevance_train(X, Y, ["a", "b", "c"], "tree")
        assert len(model.models) == 3

    def test_column_permutation_permutes_predictions(self, rng):
        X, Y = self._dataset(rng)
        base = binary_relevance_train(X, Y, ["a", "b", "c"], "tree", seed=4)
        perm = [2, 0, 1]
        permuted = binary_relevance_train(
            X, Y[:, perm], [["a", "b", "c"][j] for j in perm], "tree", seed=4
        )
        p_base = binary_relevance_predict(base, X)
        p_perm = binary_relevance_predict(permuted, X)
        for out_col, in_col in enumerate(perm):
            assert np.array_equal(p_perm[:, out_col], p_base[:, in_col])

    def test_per_label_equals_isolated_training(self, rng):
        from apilabels.learn.relevance import _label_seed
        from apilabels.learn import ForestParams

        X, Y = self._dataset(rng, labels=2)
        model = binary_relevance_train(X, Y, ["a", "b"], "forest", {"n_estimators": 5}, seed=9)
        predictions = binary_relevance_predict(model, X)
        for j in range(2):
            isolated = train_forest(X, Y[:, j], ForestParams(n_estimators=5), seed=_label_seed(9, j))
            assert np.array_equal(predictions[:, j], predict_forest(isolated, X))

    def test_adding_label_does_not_change_others(self, rng):
        X, Y = self._dataset(rng, labels=3)
        two = binary_relevance_train(X, Y[:, :2], ["a", "b"], "forest", {"n_estimators": 4}, seed=6)
        three = binary_relevance_train(X, Y, ["a", "b", "c"], "forest", {"n_estimators": 4}, seed=6)
        assert np.array_equal(
            binary_relevance_predict(two, X), binary_relevance_predict(three, X)[:, :2]
        )

    def test_constant_negative_label_guard(self, rng):
        X, Y = self._dataset(rng, labels=2)
        Y[:, 1] = 0
        with pytest.raises(DataError):
            binary_relevance_train(X, Y, ["a", "b"], "tree")

    def test_parallel_matches_sequential(self, rng):
        X, Y = self._dataset(rng)
        a = binary_relevance_train(X, Y, ["a", "b", "c"], "forest", {"n_estimators": 4}, seed=2, n_jobs=1)
        b = binary_relevance_train(X, Y, ["a", "b", "c"], "forest", {"n_estimators": 4}, seed=2, n_jobs=3)
        assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)

    @pytest.mark.parametrize("kind", ["tree", "forest", "logreg", "mlknn", "dummy"])
    def test_model_file_round_trip(self, rng, tmp_path, kind):
        X, Y = self._dataset(rng, n=40, labels=2)
        params = {"n_estimators": 3} if kind == "forest" else ({"k": 3} if kind == "mlknn" else {})
        model = binary_relevance_train(X, Y, ["a", "b"], kind, params, seed=8)
        save_model(tmp_path / "m.json", model, extra={"note": 1})
        loaded, extra = load_model(tmp_path / "m.json")
        assert extra["note"] == 1
        assert extra["params_hash"]
        assert np.array_equal(
            binary_relevance_predict(loaded, X), binary_relevance_predict(model, X)
        )
