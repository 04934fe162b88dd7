"""Four-tier polarity scoring for aspect mentions.

Tiers fall through in a fixed order; the first one that can produce a value
wins and is recorded on the score:

1. modifier lookup — dictionary polarity of the mention's dependency-attached
   trigger words (averaged when several triggers are found);
2. context pattern — mean dictionary polarity inside a five-token window
   around the mention, sign-flipped when the window contains a negation;
3. classifier-adjusted lookup — the mention word's own dictionary polarity,
   kept when the review classifies positive and negated otherwise;
4. semi-random — a uniform draw whose sign follows the review classification,
   used only when the mention word is missing from the dictionary.

The review-level classification is computed at most once per document and
only when some mention actually reaches tier 3.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum

from .aspects import AspectMention, extract
from .lexicon import Lexicon
from .syntax import ParsedSentence, heuristic_parse, modifiers_of
from .util import subseed

DEFAULT_NEGATIONS = frozenset(
    {"not", "no", "never", "n't", "without", "hardly", "lack", "lacking"}
)

DEFAULT_WINDOW = 5


class Tier(Enum):
    MODIFIER_LOOKUP = "modifier_lookup"
    CONTEXT_PATTERN = "context_pattern"
    ELM_LOOKUP = "elm_lookup"
    ELM_SEMI_RANDOM = "elm_semi_random"


@dataclass(frozen=True)
class AspectScore:
    mention: AspectMention
    score: float
    tier: Tier


@dataclass
class CascadeContext:
    """Everything the cascade needs besides the document itself.

    ``parses`` optionally maps doc id to pre-parsed sentences (e.g. read from
    CoNLL-U); without it the built-in heuristic parser runs per sentence.
    """

    lexicon: Lexicon
    elm: object = None
    docvec: object = None
    negation_terms: frozenset = DEFAULT_NEGATIONS
    window: int = DEFAULT_WINDOW
    window_placement: str = "centered"
    seed: int = 0
    parses: dict | None = None
    infer_steps: int | None = None

    def __post_init__(self):
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.window_placement not in ("centered", "leading"):
            raise ValueError(
                f"window_placement must be 'centered' or 'leading', got {self.window_placement!r}"
            )


def _mention_span(mention: AspectMention) -> range:
    return range(mention.token_index, mention.token_index + mention.n_tokens)


def score_by_modifiers(
    sentence: ParsedSentence, mention: AspectMention, lexicon: Lexicon
) -> float | None:
    """Tier 1: mean dictionary polarity of the mention's trigger words.

    Triggers are tokens linked to any token of the mention by an amod,
    advmod or nsubj arc (either direction). Returns None when no trigger
    carries a dictionary polarity.
    """
    trigger_indices: set[int] = set()
    for index in _mention_span(mention):
        trigger_indices.update(modifiers_of(sentence, index))
    trigger_indices -= set(_mention_span(mention))
    polarities = []
    for index in sorted(trigger_indices):
        polarity = lexicon.lookup(sentence.tokens[index])
        if polarity is not None:
            polarities.append(polarity)
    if not polarities:
        return None
    return sum(polarities) / len(polarities)


def context_window(
    n_tokens: int, center: int, window: int, placement: str = "centered"
) -> tuple[int, int]:
    """Bounds of a ``window``-token span containing ``center``.

    With "centered" placement the span straddles the anchor token; with
    "leading" the anchor opens the span. Either way the span slides inward
    at sentence boundaries so it keeps its full width whenever the sentence
    allows.
    """
    left = 0 if placement == "leading" else (window - 1) // 2
    lo = center - left
    hi = lo + window
    if lo < 0:
        hi -= lo
        lo = 0
    if hi > n_tokens:
        lo -= hi - n_tokens
        hi = n_tokens
        lo = max(lo, 0)
    return lo, hi


def score_by_context(
    tokens,
    mention: AspectMention,
    lexicon: Lexicon,
    negation_terms=DEFAULT_NEGATIONS,
    window: int = DEFAULT_WINDOW,
    placement: str = "centered",
) -> float | None:
    """Tier 2: mean dictionary polarity of the window around the mention.

    One or more negation terms anywhere in the window flip the sign once.
    Returns None when no non-mention token in the window is polar.
    """
    head = mention.token_index + mention.n_tokens - 1
    lo, hi = context_window(len(tokens), head, window, placement)
    span = set(_mention_span(mention))
    polarities = []
    negated = False
    for i in range(lo, hi):
        if tokens[i].lower() in negation_terms:
            negated = True
        if i in span:
            continue
        polarity = lexicon.lookup(tokens[i])
        if polarity is not None:
            polarities.append(polarity)
    if not polarities:
        return None
    mean = sum(polarities) / len(polarities)
    return -mean if negated else mean


def review_elm_output(doc, ctx: CascadeContext) -> int:
    """Review-level classification: 1 positive, 0 negative.

    Uses the document's trained vector when the embedder saw it during fit,
    otherwise infers a fresh one (which fails for all-unknown-word docs).
    """
    if ctx.docvec is None or ctx.elm is None:
        raise ValueError("cascade context has no trained classifier models")
    try:
        vector = ctx.docvec.vector_for(doc.id)
    except KeyError:
        vector = ctx.docvec.infer(
            doc, steps=ctx.infer_steps, seed=subseed(ctx.seed, "infer", doc.id)
        )
    return int(ctx.elm.predict(vector.reshape(1, -1))[0])


def score_by_elm_lookup(aspect_word: str, e_out: int, lexicon: Lexicon) -> float | None:
    """Tier 3: dictionary polarity of the aspect word, classifier-adjusted."""
    polarity = lexicon.lookup(aspect_word)
    if polarity is None:
        return None
    return e_out * polarity + (1 - e_out) * (-1 * polarity)


def score_semi_random(e_out: int, rng: random.Random) -> float:
    """Tier 4: uniform draw in (0, 1) for positive reviews, (-1, 0) otherwise.

    Open intervals: a zero draw would erase the sign, so zeros are rejected
    (a measure-zero event under float64 anyway).
    """
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u if e_out == 1 else -u


def mention_rng(seed: int, doc_id: str, mention_index: int) -> random.Random:
    """Per-mention generator, derived so scoring order cannot matter."""
    return random.Random(subseed(seed, doc_id, mention_index))


def _clamp(x: float) -> float:
    return max(-1.0, min(1.0, x))


def assign(doc, mentions, ctx: CascadeContext) -> list[AspectScore]:
    """Score every mention of one document through the tier cascade."""
    if ctx.parses is not None and doc.id in ctx.parses:
        parses = ctx.parses[doc.id]
        if len(parses) != len(doc.tokens):
            raise ValueError(
                f"document {doc.id!r}: {len(parses)} pre-parsed sentences "
                f"for {len(doc.tokens)} tokenized sentences"
            )
    else:
        parses = [heuristic_parse(sentence) for sentence in doc.tokens]
    scores: list[AspectScore] = []
    e_out: int | None = None
    for mi, mention in enumerate(mentions):
        tokens = doc.tokens[mention.sentence_index]
        parsed = parses[mention.sentence_index]
        value = score_by_modifiers(parsed, mention, ctx.lexicon)
        tier = Tier.MODIFIER_LOOKUP
        if value is None:
            value = score_by_context(
                tokens, mention, ctx.lexicon, ctx.negation_terms, ctx.window,
                ctx.window_placement,
            )
            tier = Tier.CONTEXT_PATTERN
        if value is None:
            if e_out is None:
                e_out = review_elm_output(doc, ctx)
            value = score_by_elm_lookup(mention.head_word, e_out, ctx.lexicon)
            tier = Tier.ELM_LOOKUP
        if value is None:
            value = score_semi_random(e_out, mention_rng(ctx.seed, doc.id, mi))
            tier = Tier.ELM_SEMI_RANDOM
        scores.append(AspectScore(mention, _clamp(value), tier))
    return scores


@dataclass
class CascadeStats:
    total_mentions: int = 0
    tier_counts: dict = field(
        default_factory=lambda: {tier.value: 0 for tier in Tier}
    )
    covered_aspect_words: int = 0

    @property
    def fallback_rate(self) -> float:
        if self.total_mentions == 0:
            return 0.0
        return self.tier_counts[Tier.ELM_SEMI_RANDOM.value] / self.total_mentions

    @property
    def aspect_word_coverage(self) -> float:
        if self.total_mentions == 0:
            return 1.0
        return self.covered_aspect_words / self.total_mentions

    def as_dict(self) -> dict:
        return {
            "total_mentions": self.total_mentions,
            "tier_counts": dict(self.tier_counts),
            "fallback_rate": self.fallback_rate,
            "aspect_word_coverage": self.aspect_word_coverage,
        }


def score_corpus(docs, catalog, ctx: CascadeContext):
    """Extract and score every mention in a corpus.

    Returns the scores plus tier statistics, including the semi-random
    fallback rate and how much of the mentioned aspect vocabulary the
    dictionary covers.
    """
    all_scores: list[AspectScore] = []
    stats = CascadeStats()
    for doc in docs:
        mentions = extract(doc, catalog)
        if not mentions:
            continue
        for score in assign(doc, mentions, ctx):
            stats.total_mentions += 1
            stats.tier_counts[score.tier.value] += 1
            if score.mention.head_word in ctx.lexicon:
                stats.covered_aspect_words += 1
            all_scores.append(score)
    return all_scores, stats


def write_scores(scores, docs, path) -> None:
    """Line-delimited score records: doc_id, company, aspect, score, tier."""
    company_of = {doc.id: doc.company for doc in docs}
    with open(path, "w", encoding="utf-8") as fh:
        for s in scores:
            record = {
                "doc_id": s.mention.doc_id,
                "company": company_of.get(s.mention.doc_id, ""),
                "aspect": s.mention.aspect_name,
                "score": s.score,
                "tier": s.tier.value,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_scores(path) -> list[dict]:
    rows: list[dict] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
    return rows
