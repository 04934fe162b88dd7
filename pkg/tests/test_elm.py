import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from aspectsent.elm import ElmClassifier
from oracles import activations_scalar, predict_scalar, ridge_cost, ridge_gd


def identity_fixture(alpha):
    """n_hidden = n_features = 1, unit weight, zero bias, linear activation:
    the activation matrix equals the input and fit reduces to plain ridge."""
    model = ElmClassifier(n_hidden=1, activation="identity", alpha=alpha, random_state=0)
    model.hidden_weights_ = np.array([[1.0]])
    model.hidden_biases_ = np.array([0.0])
    model.n_features_in_ = 1
    return model


class TestInit:
    def test_deterministic(self):
        a = ElmClassifier(n_hidden=3, random_state=9).init_hidden(2)
        b = ElmClassifier(n_hidden=3, random_state=9).init_hidden(2)
        np.testing.assert_array_equal(a.hidden_weights_, b.hidden_weights_)
        np.testing.assert_array_equal(a.hidden_biases_, b.hidden_biases_)

    def test_shapes(self):
        model = ElmClassifier(n_hidden=3).init_hidden(2)
        assert model.hidden_weights_.shape == (3, 2)
        assert model.hidden_biases_.shape == (3,)

    def test_range(self):
        model = ElmClassifier(n_hidden=200, random_state=4).init_hidden(50)
        assert np.all(np.abs(model.hidden_weights_) <= 1.0)
        assert np.all(np.abs(model.hidden_biases_) <= 1.0)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            ElmClassifier(n_hidden=0).init_hidden(2)
        with pytest.raises(ValueError):
            ElmClassifier(activation="relu").init_hidden(2)
        with pytest.raises(ValueError):
            ElmClassifier(alpha=-1.0).init_hidden(2)
        with pytest.raises(ValueError):
            ElmClassifier(threshold=1.0).init_hidden(2)


class TestActivationMatrix:
    def test_sigmoid_at_zero(self):
        model = ElmClassifier(n_hidden=3, activation="sigmoid")
        model.hidden_weights_ = np.zeros((3, 2))
        model.hidden_biases_ = np.zeros(3)
        H = model.hidden_activations(np.ones((4, 2)))
        np.testing.assert_array_equal(H, np.full((4, 3), 0.5))

    def test_tanh_at_zero(self):
        model = ElmClassifier(n_hidden=3, activation="tanh")
        model.hidden_weights_ = np.zeros((3, 2))
        model.hidden_biases_ = np.zeros(3)
        H = model.hidden_activations(np.ones((4, 2)))
        np.testing.assert_array_equal(H, np.zeros((4, 3)))

    @pytest.mark.parametrize("activation", ["sigmoid", "tanh"])
    def test_matches_scalar_oracle(self, activation):
        rng = np.random.default_rng(8)
        model = ElmClassifier(n_hidden=3, activation=activation, random_state=1).init_hidden(4)
        X = rng.uniform(-2, 2, size=(4, 4))
        H = model.hidden_activations(X)
        expected = activations_scalar(
            model.hidden_weights_.tolist(), model.hidden_biases_.tolist(), X.tolist(), activation
        )
        np.testing.assert_allclose(H, expected, atol=1e-12, rtol=0)

    def test_dimension_mismatch(self):
        model = ElmClassifier(n_hidden=3).init_hidden(4)
        with pytest.raises(ValueError, match="features"):
            model.hidden_activations(np.ones((2, 5)))

    def test_requires_initialized_layer(self):
        with pytest.raises(NotFittedError):
            ElmClassifier().hidden_activations(np.ones((2, 2)))


class TestFit:
    def test_identity_interpolation_lambda_zero(self):
        model = identity_fixture(alpha=0.0)
        model.fit([[1.0], [-1.0]], [1.0, -1.0])
        np.testing.assert_allclose(model.output_weights_, [1.0], atol=1e-12, rtol=0)

    def test_identity_ridge_hand_solution(self):
        # (X'X + 1)^-1 X'y with X = [1, -1]', y = [1, -1]: 2/3
        model = identity_fixture(alpha=1.0)
        model.fit([[1.0], [-1.0]], [1.0, -1.0])
        np.testing.assert_allclose(model.output_weights_, [2.0 / 3.0], atol=1e-12, rtol=0)

    def test_matches_gradient_descent_oracle(self):
        rng = np.random.default_rng(0)
        X = rng.uniform(-1, 1, size=(50, 10))
        y = rng.uniform(-1, 1, size=50)
        model = ElmClassifier(n_hidden=25, alpha=1e-3, random_state=2)
        model.fit(X, y)
        H = model.hidden_activations(X)
        oracle = ridge_gd(H, y, 1e-3)
        np.testing.assert_allclose(model.output_weights_, oracle, atol=1e-4, rtol=0)

    def test_rank_deficient_lambda_zero_uses_min_norm(self):
        # duplicated hidden neuron: H has rank 1; pinv picks the minimum norm w
        model = ElmClassifier(n_hidden=2, activation="identity", alpha=0.0)
        model.hidden_weights_ = np.array([[1.0], [1.0]])
        model.hidden_biases_ = np.zeros(2)
        model.n_features_in_ = 1
        model.fit([[1.0], [2.0]], [2.0, 4.0])
        np.testing.assert_allclose(model.output_weights_, [1.0, 1.0], atol=1e-10)

    def test_nonfinite_rejected(self):
        model = ElmClassifier(n_hidden=2)
        with pytest.raises(ValueError):
            model.fit([[np.inf, 0.0]], [1.0])

    def test_hidden_layer_unchanged_by_fit(self):
        rng = np.random.default_rng(5)
        model = ElmClassifier(n_hidden=8, random_state=3).init_hidden(4)
        weights_before = model.hidden_weights_.copy()
        biases_before = model.hidden_biases_.copy()
        model.fit(rng.normal(size=(30, 4)), rng.normal(size=30))
        np.testing.assert_array_equal(model.hidden_weights_, weights_before)
        np.testing.assert_array_equal(model.hidden_biases_, biases_before)

    def test_normal_equation_residual(self):
        rng = np.random.default_rng(7)
        X = rng.uniform(-1, 1, size=(40, 6))
        y = rng.uniform(-1, 1, size=40)
        model = ElmClassifier(n_hidden=12, alpha=0.5, random_state=1).fit(X, y)
        H = model.hidden_activations(X)
        lhs = (H.T @ H + 0.5 * np.eye(12)) @ model.output_weights_
        rhs = H.T @ y
        assert np.max(np.abs(lhs - rhs)) <= 1e-8 * (1 + np.max(np.abs(rhs)))

    def test_solution_is_local_minimum(self):
        rng = np.random.default_rng(11)
        X = rng.uniform(-1, 1, size=(30, 5))
        y = rng.uniform(-1, 1, size=30)
        model = ElmClassifier(n_hidden=10, alpha=0.01, random_state=2).fit(X, y)
        H = model.hidden_activations(X)
        w = model.output_weights_
        base = ridge_cost(H, y, 0.01, w)
        for _ in range(100):
            delta = rng.normal(size=w.shape)
            delta *= 1e-3 / np.linalg.norm(delta)
            assert ridge_cost(H, y, 0.01, w + delta) >= base

    def test_ridge_shrinkage_monotone(self):
        rng = np.random.default_rng(13)
        X = rng.uniform(-1, 1, size=(40, 6))
        y = rng.uniform(-1, 1, size=40)
        norms = []
        for alpha in (0.01, 0.1, 1.0, 10.0):
            model = ElmClassifier(n_hidden=12, alpha=alpha, random_state=6).fit(X, y)
            norms.append(np.linalg.norm(model.output_weights_))
        assert norms == sorted(norms, reverse=True)

    def test_full_determinism(self):
        rng = np.random.default_rng(17)
        X = rng.uniform(-1, 1, size=(25, 4))
        y = rng.integers(0, 2, size=25).astype(float)
        a = ElmClassifier(n_hidden=9, alpha=1e-3, random_state=21).fit(X, y)
        b = ElmClassifier(n_hidden=9, alpha=1e-3, random_state=21).fit(X, y)
        np.testing.assert_array_equal(a.output_weights_, b.output_weights_)


class TestPredict:
    def test_cancellation(self):
        model = ElmClassifier(n_hidden=2, activation="identity", alpha=0.0)
        model.hidden_weights_ = np.eye(2)
        model.hidden_biases_ = np.zeros(2)
        model.n_features_in_ = 2
        model.output_weights_ = np.array([0.5, -0.5])
        assert model.decision_function([[1.0, 1.0]])[0] == 0.0

    def test_single_term(self):
        model = ElmClassifier(n_hidden=1, activation="identity")
        model.hidden_weights_ = np.array([[1.0]])
        model.hidden_biases_ = np.array([0.0])
        model.n_features_in_ = 1
        model.output_weights_ = np.array([1.0])
        assert model.decision_function([[0.5]])[0] == 0.5

    def test_matches_scalar_oracle(self):
        rng = np.random.default_rng(23)
        X = rng.uniform(-1, 1, size=(10, 5))
        y = rng.uniform(-1, 1, size=10)
        model = ElmClassifier(n_hidden=7, alpha=1e-2, random_state=3).fit(X, y)
        x = rng.uniform(-1, 1, size=(1, 5))
        expected = predict_scalar(
            model.output_weights_.tolist(), model.hidden_activations(x)[0].tolist()
        )
        np.testing.assert_allclose(model.decision_function(x)[0], expected, atol=1e-12, rtol=0)

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            ElmClassifier().decision_function([[1.0]])


class TestClassify:
    def make(self, score):
        model = ElmClassifier(n_hidden=1, activation="identity", threshold=0.5)
        model.hidden_weights_ = np.array([[1.0]])
        model.hidden_biases_ = np.array([0.0])
        model.n_features_in_ = 1
        model.output_weights_ = np.array([1.0])
        return model, [[score]]

    def test_above_threshold(self):
        model, x = self.make(0.7)
        assert model.predict(x)[0] == 1

    def test_below_threshold(self):
        model, x = self.make(0.2)
        assert model.predict(x)[0] == 0

    def test_exactly_at_threshold_is_positive(self):
        model, x = self.make(0.5)
        assert model.predict(x)[0] == 1


class TestSklearnCompat:
    def test_clone_and_cross_val(self):
        from sklearn.base import clone
        from sklearn.model_selection import cross_val_score

        rng = np.random.default_rng(0)
        X = np.vstack([rng.normal(-1, 0.5, (30, 6)), rng.normal(1, 0.5, (30, 6))])
        y = np.array([0] * 30 + [1] * 30)
        clf = ElmClassifier(n_hidden=20, alpha=1e-2, random_state=1)
        assert clone(clf).get_params() == clf.get_params()
        scores = cross_val_score(clf, X, y, cv=3)
        assert scores.shape == (3,)
        assert scores.min() >= 0.9


class TestPersistence:
    def test_roundtrip_predictions_bit_exact(self, tmp_path):
        rng = np.random.default_rng(29)
        X = rng.uniform(-1, 1, size=(30, 6))
        y = rng.integers(0, 2, size=30).astype(float)
        model = ElmClassifier(n_hidden=11, alpha=1e-3, random_state=8).fit(X, y)
        path = tmp_path / "elm.json"
        model.save(path)
        loaded = ElmClassifier.load(path)
        Xnew = rng.uniform(-1, 1, size=(20, 6))
        np.testing.assert_array_equal(
            loaded.decision_function(Xnew), model.decision_function(Xnew)
        )
        np.testing.assert_array_equal(loaded.predict(Xnew), model.predict(Xnew))

    def test_unfitted_layer_roundtrip(self, tmp_path):
        model = ElmClassifier(n_hidden=4, random_state=2).init_hidden(3)
        path = tmp_path / "elm.json"
        model.save(path)
        loaded = ElmClassifier.load(path)
        np.testing.assert_array_equal(loaded.hidden_weights_, model.hidden_weights_)
        assert not hasattr(loaded, "output_weights_")
