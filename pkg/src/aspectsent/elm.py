"""Extreme learning machine: random hidden layer, closed-form output weights.

The hidden layer is drawn once from a seeded uniform distribution and never
adjusted. Training reduces to linear least squares on the hidden activations:
with ridge, the symmetric positive-definite normal equations are solved by a
Cholesky factorization; without, the minimum-norm solution comes from an
SVD-based pseudo-inverse. That closed-form solve is the entire appeal of the
model — no iterative optimization, no learning-rate tuning.
"""

from __future__ import annotations

import json

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array, check_X_y

ACTIVATIONS = {
    "sigmoid": expit,
    "tanh": np.tanh,
    # linear pass-through: with identity hidden weights the activation matrix
    # equals the input, which turns fit into plain ridge — invaluable for
    # validating the solver against hand-derived solutions.
    "identity": lambda z: z,
}

FORMAT_VERSION = 1


class ElmClassifier(BaseEstimator, ClassifierMixin):
    """Binary classifier with a fixed random hidden layer.

    Parameters
    ----------
    n_hidden : int
        Hidden neuron count.
    activation : {"sigmoid", "tanh", "identity"}
        Hidden-layer nonlinearity.
    alpha : float
        Ridge weight on the output-layer least squares. 0 selects the exact
        minimum-norm pseudo-inverse solution instead.
    threshold : float
        Decision threshold in (0, 1); scores >= threshold predict class 1.
    random_state : int
        Seeds the hidden weights/biases (i.i.d. uniform on [-1, 1]).

    Attributes
    ----------
    hidden_weights_ : ndarray of shape (n_hidden, n_features)
    hidden_biases_ : ndarray of shape (n_hidden,)
    output_weights_ : ndarray of shape (n_hidden,)
        Absent until fit. The output unit carries no bias.
    """

    def __init__(
        self,
        n_hidden: int = 100,
        activation: str = "sigmoid",
        alpha: float = 1e-3,
        threshold: float = 0.5,
        random_state: int = 0,
    ):
        self.n_hidden = n_hidden
        self.activation = activation
        self.alpha = alpha
        self.threshold = threshold
        self.random_state = random_state

    def _validate_params_(self):
        if self.n_hidden < 1:
            raise ValueError(f"n_hidden must be >= 1, got {self.n_hidden}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(
                f"unknown activation {self.activation!r}; choose from {sorted(ACTIVATIONS)}"
            )
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")

    def init_hidden(self, n_features: int) -> "ElmClassifier":
        """Draw the hidden layer for ``n_features`` inputs.

        Weights and biases are i.i.d. uniform on [-1, 1] from the seeded
        generator. fit calls this automatically when needed; calling it
        yourself lets you inspect activations before training, and the layer
        is then reused (never redrawn) by fit.
        """
        self._validate_params_()
        if n_features < 1:
            raise ValueError(f"n_features must be >= 1, got {n_features}")
        rng = np.random.default_rng(self.random_state)
        self.hidden_weights_ = rng.uniform(-1.0, 1.0, size=(self.n_hidden, n_features))
        self.hidden_biases_ = rng.uniform(-1.0, 1.0, size=self.n_hidden)
        self.n_features_in_ = n_features
        return self

    def hidden_activations(self, X) -> np.ndarray:
        """Activation matrix: entry (i, j) is neuron j's response to row i."""
        if not hasattr(self, "hidden_weights_"):
            raise NotFittedError("hidden layer not initialized; call init_hidden or fit")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.hidden_weights_.shape[1]:
            raise ValueError(
                f"X has {X.shape[1]} features, hidden layer expects {self.hidden_weights_.shape[1]}"
            )
        return ACTIVATIONS[self.activation](X @ self.hidden_weights_.T + self.hidden_biases_)

    def fit(self, X, y) -> "ElmClassifier":
        """Solve for the output weights.

        With ``alpha > 0``: (H'H + alpha*I) w = H'y via Cholesky. With
        ``alpha = 0``: w = pinv(H) y through a rank-revealing (SVD) least
        squares, which also handles rank-deficient activation matrices.
        Targets are real-valued; use 1.0/0.0 for the sentiment task.
        """
        self._validate_params_()
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("X and y must be finite")
        if not hasattr(self, "hidden_weights_") or self.hidden_weights_.shape[1] != X.shape[1]:
            self.init_hidden(X.shape[1])
        H = self.hidden_activations(X)
        if self.alpha > 0:
            gram = H.T @ H
            gram[np.diag_indices_from(gram)] += self.alpha
            self.output_weights_ = cho_solve(cho_factor(gram), H.T @ y)
        else:
            self.output_weights_, *_ = np.linalg.lstsq(H, y, rcond=None)
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X) -> np.ndarray:
        """Raw network output: weighted sum of hidden activations, no bias."""
        if not hasattr(self, "output_weights_"):
            raise NotFittedError("model is not fitted; call fit first")
        return self.hidden_activations(X) @ self.output_weights_

    def predict(self, X) -> np.ndarray:
        """Binary labels: 1 where the raw score reaches the threshold."""
        return (self.decision_function(X) >= self.threshold).astype(int)

    def save(self, path) -> None:
        if not hasattr(self, "hidden_weights_"):
            raise NotFittedError("nothing to save; initialize or fit the model first")
        payload = {
            "format_version": FORMAT_VERSION,
            "params": self.get_params(),
            "n_features": int(self.hidden_weights_.shape[1]),
            "hidden_weights": self.hidden_weights_.tolist(),
            "hidden_biases": self.hidden_biases_.tolist(),
            "output_weights": (
                self.output_weights_.tolist() if hasattr(self, "output_weights_") else None
            ),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)

    @classmethod
    def load(cls, path) -> "ElmClassifier":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {payload.get('format_version')!r}")
        model = cls(**payload["params"])
        model.hidden_weights_ = np.asarray(payload["hidden_weights"], dtype=np.float64)
        model.hidden_biases_ = np.asarray(payload["hidden_biases"], dtype=np.float64)
        model.n_features_in_ = int(payload["n_features"])
        if payload["output_weights"] is not None:
            model.output_weights_ = np.asarray(payload["output_weights"], dtype=np.float64)
            model.classes_ = np.array([0, 1])
        return model
