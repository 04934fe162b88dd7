"""Aspect-sentiment company profiling from employee reviews.

The pipeline: merge a sentiment lexicon, split reviews into auto-labeled
pros/cons documents, learn document embeddings, train a random-hidden-layer
classifier with a closed-form solve, score every aspect mention through a
four-tier cascade, and average the scores into one embedding per company for
similarity, ranking and projection reports.
"""

from .aspects import AspectCatalog, AspectMention, default_catalog, extract, load_catalog
from .cascade import AspectScore, CascadeContext, Tier, assign, score_corpus
from .corpus import (
    RawReview,
    ReviewDoc,
    ingest,
    preprocess,
    shuffle_docs,
    split_pros_cons,
    tokenize,
)
from .docvec import Doc2VecEmbedder, Vocab
from .elm import ElmClassifier
from .evaluate import SubgradientSVM, accuracy, kfold_compare, macro_f1, paired_t
from .lexicon import Lexicon, LexiconEntry, Source, load_entries, merge
from .profiles import (
    CompanyEmbedding,
    build_embeddings,
    cosine,
    project_2d,
    rank_by_aspect,
    similarity_report,
)
from .synth import SynthConfig, generate_corpus, synth_corpus
from .syntax import DepArc, ParsedSentence, Relation, heuristic_parse, modifiers_of, read_conllu

__version__ = "0.1.0"

__all__ = [
    "AspectCatalog",
    "AspectMention",
    "AspectScore",
    "CascadeContext",
    "CompanyEmbedding",
    "DepArc",
    "Doc2VecEmbedder",
    "ElmClassifier",
    "Lexicon",
    "LexiconEntry",
    "ParsedSentence",
    "RawReview",
    "Relation",
    "ReviewDoc",
    "Source",
    "SubgradientSVM",
    "SynthConfig",
    "Tier",
    "Vocab",
    "accuracy",
    "assign",
    "build_embeddings",
    "cosine",
    "default_catalog",
    "extract",
    "generate_corpus",
    "heuristic_parse",
    "ingest",
    "kfold_compare",
    "load_catalog",
    "load_entries",
    "macro_f1",
    "merge",
    "modifiers_of",
    "paired_t",
    "preprocess",
    "project_2d",
    "rank_by_aspect",
    "read_conllu",
    "score_corpus",
    "shuffle_docs",
    "similarity_report",
    "split_pros_cons",
    "synth_corpus",
    "tokenize",
]
