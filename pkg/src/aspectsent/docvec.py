"""Fixed-length review embeddings via distributed bag-of-words paragraph vectors.

Each document owns a trainable vector that is pushed, by logistic negative
sampling, to score its own words above noise words drawn from the unigram^0.75
distribution. Word vectors here are *output* vectors only (no word input
embeddings), which is all the distributed bag-of-words variant needs. The
result is a compact feature vector per review for the downstream classifier.
"""

from __future__ import annotations

import json

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .util import subseed

FORMAT_VERSION = 1


class Vocab:
    """Word -> (index, count) table with a minimum-frequency cutoff.

    Indices are dense 0..V-1, assigned by descending count then
    lexicographic order, so a given corpus always produces the same table.
    Emoticons count as ordinary words.
    """

    def __init__(self, counts: dict[str, int], min_count: int = 2):
        kept = {w: c for w, c in counts.items() if c >= min_count}
        ordered = sorted(kept.items(), key=lambda item: (-item[1], item[0]))
        self.min_count = int(min_count)
        self._index = {w: i for i, (w, _) in enumerate(ordered)}
        self._counts = dict(kept)
        self._words = [w for w, _ in ordered]

    @classmethod
    def from_docs(cls, docs, min_count: int = 2) -> "Vocab":
        counts: dict[str, int] = {}
        for doc in docs:
            for sentence in doc.tokens:
                for token in sentence:
                    counts[token] = counts.get(token, 0) + 1
        return cls(counts, min_count)

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def index(self, word: str) -> int:
        return self._index[word]

    def count(self, word: str) -> int:
        return self._counts[word]

    @property
    def words(self) -> list[str]:
        return list(self._words)

    def noise_cdf(self, power: float = 0.75) -> np.ndarray:
        """Cumulative distribution of the smoothed unigram noise table."""
        counts = np.array([self._counts[w] for w in self._words], dtype=np.float64)
        weights = counts**power
        return np.cumsum(weights / weights.sum())


def _doc_word_indices(doc, vocab: Vocab) -> list[int]:
    return [
        vocab.index(tok)
        for sentence in doc.tokens
        for tok in sentence
        if tok in vocab
    ]


def pair_loss(doc_vec: np.ndarray, u_pos: np.ndarray, u_neg: np.ndarray) -> float:
    """Negative-sampling logistic loss for one (document, word, noise) triple."""
    loss = -np.log(expit(doc_vec @ u_pos))
    loss -= np.log(expit(-(u_neg @ doc_vec))).sum()
    return float(loss)


def pair_grads(doc_vec, u_pos, u_neg):
    """Analytic gradients of :func:`pair_loss` w.r.t. all three arguments."""
    g_pos = expit(doc_vec @ u_pos) - 1.0
    g_neg = expit(u_neg @ doc_vec)
    grad_doc = g_pos * u_pos + g_neg @ u_neg
    grad_pos = g_pos * doc_vec
    grad_neg = np.outer(g_neg, doc_vec)
    return grad_doc, grad_pos, grad_neg


class Doc2VecEmbedder(BaseEstimator):
    """Learn document vectors with distributed bag-of-words negative sampling.

    Parameters
    ----------
    dims : int
        Embedding width. 50 is plenty for desk-scale corpora; raise to 300
        for production-sized ones.
    epochs : int
        Full passes over the corpus.
    negative : int
        Noise words per (document, word) pair. The draws are distinct from
        each other and from the target word (capped at vocabulary size - 1).
    alpha, min_alpha : float
        Learning rate, decayed linearly from ``alpha`` to ``min_alpha``
        across epochs. The 0.1 default is deliberately hot: at desk-scale
        corpus sizes each vector only receives a few hundred updates, and
        smaller rates barely move it off its initialization.
    min_count : int
        Words rarer than this are dropped from the vocabulary.
    seed : int
        Seeds vector initialization and noise sampling. Training is
        single-threaded, so one seed pins the whole run.

    Attributes
    ----------
    vocab_ : Vocab
    doc_vectors_ : ndarray of shape (n_docs, dims)
    word_vectors_ : ndarray of shape (vocab_size, dims)
        Output vectors of the vocabulary words.
    doc_ids_ : list of str
    epoch_losses_ : list of float
        Mean pair loss per epoch, evaluated before each update.
    """

    def __init__(
        self,
        dims: int = 50,
        epochs: int = 20,
        negative: int = 5,
        alpha: float = 0.1,
        min_alpha: float = 0.0001,
        min_count: int = 2,
        seed: int = 0,
    ):
        self.dims = dims
        self.epochs = epochs
        self.negative = negative
        self.alpha = alpha
        self.min_alpha = min_alpha
        self.min_count = min_count
        self.seed = seed

    def _check_fitted(self):
        if not hasattr(self, "doc_vectors_"):
            raise NotFittedError("model is not trained; call fit first")

    def _epoch_alpha(self, epoch: int, total: int) -> float:
        if total <= 1:
            return self.alpha
        frac = epoch / (total - 1)
        return self.alpha + (self.min_alpha - self.alpha) * frac

    def _sample_negatives(self, rng, cdf, exclude: int, k: int) -> np.ndarray:
        out: list[int] = []
        seen = {exclude}
        while len(out) < k:
            draws = np.searchsorted(cdf, rng.random(k), side="right")
            for c in draws:
                c = int(c)
                if c not in seen:
                    seen.add(c)
                    out.append(c)
                    if len(out) == k:
                        break
        return np.asarray(out, dtype=np.intp)

    def fit(self, docs, y=None):
        if self.dims < 1 or self.epochs < 1 or self.negative < 1:
            raise ValueError("dims, epochs and negative must all be >= 1")
        docs = list(docs)
        vocab = Vocab.from_docs(docs, self.min_count)
        if len(vocab) == 0:
            raise ValueError("empty vocabulary; corpus too small for min_count")
        rng = np.random.default_rng(self.seed)
        n_docs = len(docs)
        span = 0.5 / self.dims
        doc_vectors = rng.uniform(-span, span, size=(n_docs, self.dims))
        word_vectors = rng.uniform(-span, span, size=(len(vocab), self.dims))
        cdf = vocab.noise_cdf()
        k = min(self.negative, max(len(vocab) - 1, 0))
        encoded = [_doc_word_indices(d, vocab) for d in docs]

        epoch_losses: list[float] = []
        for epoch in range(self.epochs):
            lr = self._epoch_alpha(epoch, self.epochs)
            total_loss = 0.0
            n_pairs = 0
            for di, word_indices in enumerate(encoded):
                v = doc_vectors[di]
                for wi in word_indices:
                    neg = self._sample_negatives(rng, cdf, wi, k)
                    u_pos = word_vectors[wi]
                    u_neg = word_vectors[neg]
                    total_loss += pair_loss(v, u_pos, u_neg)
                    n_pairs += 1
                    grad_doc, grad_pos, grad_neg = pair_grads(v, u_pos, u_neg)
                    v -= lr * grad_doc
                    word_vectors[wi] -= lr * grad_pos
                    word_vectors[neg] -= lr * grad_neg
            epoch_losses.append(total_loss / max(n_pairs, 1))

        self.vocab_ = vocab
        self.doc_vectors_ = doc_vectors
        self.word_vectors_ = word_vectors
        self.doc_ids_ = [d.id for d in docs]
        self._doc_index = {d.id: i for i, d in enumerate(docs)}
        self.epoch_losses_ = epoch_losses
        return self

    def vector_for(self, doc_id: str) -> np.ndarray:
        """Trained vector of a document seen during fit."""
        self._check_fitted()
        try:
            return self.doc_vectors_[self._doc_index[doc_id]].copy()
        except KeyError:
            raise KeyError(f"document {doc_id!r} was not in the training set") from None

    def infer(self, doc, steps: int | None = None, seed: int | None = None) -> np.ndarray:
        """Embed an unseen document with word vectors frozen.

        Runs ``steps`` gradient passes (default: 2x the training epochs) over
        the document's in-vocabulary words, updating only the fresh document
        vector. Raises ValueError for documents with no known words.
        """
        self._check_fitted()
        word_indices = _doc_word_indices(doc, self.vocab_)
        if not word_indices:
            raise ValueError(f"document {doc.id!r} has no known words")
        if steps is None:
            steps = 2 * self.epochs
        if seed is None:
            seed = subseed(self.seed, "infer", doc.id)
        rng = np.random.default_rng(seed)
        span = 0.5 / self.dims
        v = rng.uniform(-span, span, size=self.dims)
        cdf = self.vocab_.noise_cdf()
        k = min(self.negative, max(len(self.vocab_) - 1, 0))
        for step in range(steps):
            lr = self._epoch_alpha(step, steps)
            for wi in word_indices:
                neg = self._sample_negatives(rng, cdf, wi, k)
                grad_doc, _, _ = pair_grads(v, self.word_vectors_[wi], self.word_vectors_[neg])
                v -= lr * grad_doc
        return v

    def transform(self, docs) -> np.ndarray:
        """Vectors for a document sequence: trained ones where available,
        inferred otherwise."""
        self._check_fitted()
        rows = []
        for doc in docs:
            if doc.id in self._doc_index:
                rows.append(self.doc_vectors_[self._doc_index[doc.id]])
            else:
                rows.append(self.infer(doc))
        return np.array(rows)

    def fit_transform(self, docs, y=None) -> np.ndarray:
        return self.fit(docs).doc_vectors_.copy()

    def save(self, path) -> None:
        self._check_fitted()
        payload = {
            "format_version": FORMAT_VERSION,
            "dims": self.dims,
            "n_docs": len(self.doc_ids_),
            "vocab_size": len(self.vocab_),
            "params": self.get_params(),
            "doc_ids": self.doc_ids_,
            "vocab": {w: [self.vocab_.index(w), self.vocab_.count(w)] for w in self.vocab_.words},
            "doc_vectors": self.doc_vectors_.tolist(),
            "word_vectors": self.word_vectors_.tolist(),
            "epoch_losses": self.epoch_losses_,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)

    @classmethod
    def load(cls, path) -> "Doc2VecEmbedder":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {payload.get('format_version')!r}")
        model = cls(**payload["params"])
        counts = {w: c for w, (_, c) in payload["vocab"].items()}
        vocab = Vocab(counts, model.min_count)
        # sanity: rebuilt indices must match the stored ones
        for w, (idx, _) in payload["vocab"].items():
            if vocab.index(w) != idx:
                raise ValueError(f"{path}: vocabulary index mismatch for {w!r}")
        model.vocab_ = vocab
        model.doc_vectors_ = np.asarray(payload["doc_vectors"], dtype=np.float64)
        model.word_vectors_ = np.asarray(payload["word_vectors"], dtype=np.float64)
        model.doc_ids_ = list(payload["doc_ids"])
        model._doc_index = {d: i for i, d in enumerate(model.doc_ids_)}
        model.epoch_losses_ = list(payload["epoch_losses"])
        return model
