"""Classifier evaluation: metrics, an iterative linear baseline, paired folds.

The baseline is a primal sub-gradient SVM (hinge loss + L2, Pegasos-style
step sizes), trained sample by sample. That makes it a fair foil for the
closed-form hidden-layer solve: both consume the same document vectors, and
the wall-time ratio between their fits is itself one of the quantities under
test.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array, check_X_y

from .elm import ElmClassifier
from .util import fmt_float, subseed


def _check_pair(pred, gold):
    pred = np.asarray(pred)
    gold = np.asarray(gold)
    if pred.shape != gold.shape or pred.ndim != 1:
        raise ValueError(f"prediction/gold length mismatch: {pred.shape} vs {gold.shape}")
    if pred.size == 0:
        raise ValueError("empty prediction sequence")
    return pred, gold


def accuracy(pred, gold) -> float:
    pred, gold = _check_pair(pred, gold)
    return float(np.mean(pred == gold))


def macro_f1(pred, gold) -> float:
    """Unweighted mean of the two per-class F1 scores.

    Conventions: a class absent from both sequences scores 1 (nothing to
    get wrong); a class with zero precision+recall denominator scores 0.
    """
    pred, gold = _check_pair(pred, gold)
    f1s = []
    for cls in (0, 1):
        tp = int(np.sum((pred == cls) & (gold == cls)))
        fp = int(np.sum((pred == cls) & (gold != cls)))
        fn = int(np.sum((pred != cls) & (gold == cls)))
        if tp == 0 and fp == 0 and fn == 0:
            f1s.append(1.0)
            continue
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        if precision + recall == 0.0:
            f1s.append(0.0)
        else:
            f1s.append(2 * precision * recall / (precision + recall))
    return float(np.mean(f1s))


class SubgradientSVM(BaseEstimator, ClassifierMixin):
    """Primal hinge-loss SVM trained by per-sample sub-gradient descent.

    Step sizes follow a shifted 1/(reg * t) schedule, 1 / (1 + reg * t):
    same asymptotics, but the first steps stay bounded, which matters for
    the unregularized bias (a raw 1/(reg * t) schedule kicks it to 1/reg
    on step one and then crawls back harmonically). The bias is updated on
    margin violations but not shrunk. Sample order is reshuffled each epoch
    from the seeded generator, so runs are reproducible.
    """

    def __init__(self, epochs: int = 50, reg: float = 1e-3, random_state: int = 0):
        self.epochs = epochs
        self.reg = reg
        self.random_state = random_state

    def fit(self, X, y) -> "SubgradientSVM":
        if self.reg <= 0:
            raise ValueError(f"reg must be > 0, got {self.reg}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        X, y = check_X_y(X, y, dtype=np.float64)
        if not np.isfinite(X).all():
            raise ValueError("X must be finite")
        signs = np.where(np.asarray(y) > 0, 1.0, -1.0)
        rng = np.random.default_rng(self.random_state)
        w = np.zeros(X.shape[1])
        b = 0.0
        t = 0
        start = time.perf_counter()
        for _ in range(self.epochs):
            for i in rng.permutation(X.shape[0]):
                t += 1
                eta = 1.0 / (1.0 + self.reg * t)
                margin = signs[i] * (X[i] @ w + b)
                w *= 1.0 - eta * self.reg
                if margin < 1.0:
                    w += eta * signs[i] * X[i]
                    b += eta * signs[i]
        self.train_time_ = time.perf_counter() - start
        self.coef_ = w
        self.intercept_ = b
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X) -> np.ndarray:
        if not hasattr(self, "coef_"):
            raise NotFittedError("model is not fitted; call fit first")
        X = check_array(X, dtype=np.float64)
        return X @ self.coef_ + self.intercept_

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(int)


def student_t_p_value(t_stat: float, dof: int) -> float:
    """Two-sided p for Student's t, via the regularized incomplete beta.

    P(|T| >= t) = I_x(dof/2, 1/2) with x = dof / (dof + t^2).
    """
    if dof < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {dof}")
    if math.isinf(t_stat):
        return 0.0
    x = dof / (dof + t_stat * t_stat)
    return float(betainc(dof / 2.0, 0.5, x))


@dataclass
class TTestResult:
    t_stat: float
    p_value: float
    dof: int
    degenerate_variance: bool = False


def paired_t(diffs) -> TTestResult:
    """Paired t-test over per-fold metric differences.

    Zero variance with a nonzero mean has no finite statistic; that case is
    reported as p = 0 with the degenerate flag set. All-zero differences
    give t = 0, p = 1.
    """
    diffs = np.asarray(diffs, dtype=np.float64)
    k = diffs.size
    if k < 2:
        raise ValueError("need at least two paired differences")
    mean = float(diffs.mean())
    sd = float(diffs.std(ddof=1))
    dof = k - 1
    if sd == 0.0:
        if mean == 0.0:
            return TTestResult(0.0, 1.0, dof)
        return TTestResult(math.copysign(math.inf, mean), 0.0, dof, degenerate_variance=True)
    t_stat = mean / (sd / math.sqrt(k))
    return TTestResult(t_stat, student_t_p_value(t_stat, dof), dof)


@dataclass
class FoldResult:
    fold_index: int
    accuracy: float
    macro_f1: float
    train_time: float


@dataclass
class ComparisonResult:
    """Paired k-fold comparison; differences are (ELM - baseline) accuracy."""

    elm_folds: list
    baseline_folds: list
    t_stat: float
    p_value: float
    speed_ratio: float  # mean baseline train time / mean ELM train time
    degenerate_variance: bool

    def summary(self) -> dict:
        def agg(folds):
            return {
                "mean_accuracy": float(np.mean([f.accuracy for f in folds])),
                "mean_macro_f1": float(np.mean([f.macro_f1 for f in folds])),
                "mean_train_time": float(np.mean([f.train_time for f in folds])),
            }

        return {"elm": agg(self.elm_folds), "baseline": agg(self.baseline_folds)}


def kfold_indices(n: int, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded shuffled k-fold split; returns (train, test) index pairs."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < k:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    out = []
    for i in range(k):
        test = folds[i]
        train = np.concatenate([folds[j] for j in range(k) if j != i])
        out.append((train, test))
    return out


def kfold_compare(
    X,
    y,
    k: int = 10,
    elm_params: dict | None = None,
    baseline_params: dict | None = None,
    seed: int = 0,
) -> ComparisonResult:
    """Train and evaluate both classifiers on the same seeded folds.

    Folds run serially so the wall-time ratio is meaningful. Per-fold model
    seeds derive from the top-level seed, keeping the whole comparison
    reproducible (timings aside).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    elm_params = dict(elm_params or {})
    baseline_params = dict(baseline_params or {})
    elm_folds: list[FoldResult] = []
    base_folds: list[FoldResult] = []
    for i, (train, test) in enumerate(kfold_indices(len(y), k, seed)):
        fold_elm_params = dict(elm_params)
        fold_elm_params.setdefault("random_state", subseed(seed, "elm", i))
        elm = ElmClassifier(**fold_elm_params)
        start = time.perf_counter()
        elm.fit(X[train], y[train])
        elm_time = time.perf_counter() - start
        pred = elm.predict(X[test])
        elm_folds.append(
            FoldResult(i, accuracy(pred, y[test]), macro_f1(pred, y[test]), elm_time)
        )

        fold_base_params = dict(baseline_params)
        fold_base_params.setdefault("random_state", subseed(seed, "baseline", i))
        baseline = SubgradientSVM(**fold_base_params)
        baseline.fit(X[train], y[train])
        pred = baseline.predict(X[test])
        base_folds.append(
            FoldResult(i, accuracy(pred, y[test]), macro_f1(pred, y[test]), baseline.train_time_)
        )

    diffs = [e.accuracy - b.accuracy for e, b in zip(elm_folds, base_folds)]
    ttest = paired_t(diffs)
    mean_elm_time = float(np.mean([f.train_time for f in elm_folds]))
    mean_base_time = float(np.mean([f.train_time for f in base_folds]))
    speed_ratio = mean_base_time / mean_elm_time if mean_elm_time > 0 else math.inf
    return ComparisonResult(
        elm_folds, base_folds, ttest.t_stat, ttest.p_value, speed_ratio, ttest.degenerate_variance
    )


def write_eval_report(result: ComparisonResult, path) -> None:
    """TSV: per-fold rows, one summary row per model, t/p/speed trailer."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("model\tfold\taccuracy\tmacro_f1\ttrain_time\n")
        for name, folds in (("elm", result.elm_folds), ("baseline", result.baseline_folds)):
            for f in folds:
                fh.write(
                    f"{name}\t{f.fold_index}\t{fmt_float(f.accuracy)}\t"
                    f"{fmt_float(f.macro_f1)}\t{fmt_float(f.train_time)}\n"
                )
        summary = result.summary()
        for name in ("elm", "baseline"):
            s = summary[name]
            fh.write(
                f"{name}\tmean\t{fmt_float(s['mean_accuracy'])}\t"
                f"{fmt_float(s['mean_macro_f1'])}\t{fmt_float(s['mean_train_time'])}\n"
            )
        fh.write(
            f"# t={fmt_float(result.t_stat)}\tp={fmt_float(result.p_value)}\t"
            f"speed_ratio={fmt_float(result.speed_ratio)}\t"
            f"degenerate_variance={result.degenerate_variance}\t"
            f"protocol=seeded {len(result.elm_folds)}-fold, "
            f"accuracy differences elm-baseline\n"
        )
