"""Review ingestion and preprocessing.

Raw reviews arrive as JSON-lines records with a pros and a cons field. Each
side becomes its own labeled sub-review (pros -> 1, cons -> 0), which is what
makes the corpus auto-labeled. Preprocessing strips URLs and hashtags but
keeps emoticons, since they carry sentiment signal the models can use.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .util import splitmix64

DEFAULT_EMOTICONS = (":)", ":(", ":D", ":-)", ":-(", ";)", ":/", "<3")

_URL_RE = re.compile(r"(?:\w+://\S+|www\.\S+)")
_HASHTAG_RE = re.compile(r"#\w+")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_TRAILING_PUNCT = ".,!?;:"


@dataclass
class RawReview:
    id: str
    company: str
    sector: str = ""
    pros: str = ""
    cons: str = ""
    body: str = ""


@dataclass
class ReviewDoc:
    """One labeled sub-review: preprocessed text plus sentence token lists."""

    id: str
    company: str
    sector: str
    text: str
    tokens: list[list[str]] = field(default_factory=list)
    label: int | None = None


_REVIEW_FIELDS = {"id", "company", "sector", "pros", "cons", "body"}
_OPTIONAL_FIELDS = ("sector", "pros", "cons", "body")


def ingest(path) -> list[RawReview]:
    """Parse a JSON-lines review file into RawReview records.

    Required keys per record: ``id`` and ``company``. ``sector``, ``pros``,
    ``cons`` and ``body`` default to empty strings; unknown keys are ignored.
    Duplicate ids and malformed records raise ValueError naming the line.
    """
    reviews: list[RawReview] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise ValueError(f"{path}: line {lineno}: record is not an object")
            rid = record.get("id")
            if not isinstance(rid, str) or not rid:
                raise ValueError(f"{path}: line {lineno}: missing or non-string 'id'")
            if rid in seen:
                raise ValueError(f"{path}: line {lineno}: duplicate review id {rid!r}")
            company = record.get("company")
            if not isinstance(company, str) or not company:
                raise ValueError(
                    f"{path}: record {rid!r} (line {lineno}): missing or non-string 'company'"
                )
            values = {}
            for key in _OPTIONAL_FIELDS:
                value = record.get(key, "")
                if not isinstance(value, str):
                    raise ValueError(
                        f"{path}: record {rid!r} (line {lineno}): field {key!r} must be a string"
                    )
                values[key] = value
            seen.add(rid)
            reviews.append(RawReview(id=rid, company=company, **values))
    return reviews


def write_reviews(reviews, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reviews:
            record = {
                "id": r.id,
                "company": r.company,
                "sector": r.sector,
                "pros": r.pros,
                "cons": r.cons,
                "body": r.body,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def preprocess(text: str) -> str:
    """Remove URLs and hashtags, collapse whitespace; emoticons survive."""
    text = _URL_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(" ", text)
    return " ".join(text.split())


def _split_word(raw: str, emoticons: set[str]) -> list[str]:
    # Detach trailing punctuation one character at a time, stopping as soon
    # as the remainder is an emoticon so tokens like ":)" never split.
    tail: list[str] = []
    while len(raw) > 1 and raw not in emoticons and raw[-1] in _TRAILING_PUNCT:
        tail.append(raw[-1])
        raw = raw[:-1]
    out = [raw] if raw else []
    out.extend(reversed(tail))
    return out


def tokenize(text: str, emoticons=DEFAULT_EMOTICONS) -> list[list[str]]:
    """Split text into sentences, then whitespace words.

    Sentences end at ``.``, ``!`` or ``?`` followed by whitespace (or end of
    text). Trailing punctuation becomes its own token.
    """
    emo = set(emoticons)
    sentences: list[list[str]] = []
    for chunk in _SENTENCE_SPLIT_RE.split(text):
        words: list[str] = []
        for raw in chunk.split():
            words.extend(_split_word(raw, emo))
        if words:
            sentences.append(words)
    return sentences


def split_pros_cons(raw: RawReview, emoticons=DEFAULT_EMOTICONS) -> list[ReviewDoc]:
    """Derive labeled sub-reviews from one raw review.

    A side yields a document only if some text survives preprocessing; the
    pros side is labeled 1 and gets the ``-pos`` id suffix, the cons side 0
    and ``-neg``. The unlabeled body text is intentionally not split off:
    only pros/cons carry trustworthy labels.
    """
    docs: list[ReviewDoc] = []
    for side, suffix, label in ((raw.pros, "-pos", 1), (raw.cons, "-neg", 0)):
        text = preprocess(side)
        if not text:
            continue
        docs.append(
            ReviewDoc(
                id=raw.id + suffix,
                company=raw.company,
                sector=raw.sector,
                text=text,
                tokens=tokenize(text, emoticons),
                label=label,
            )
        )
    return docs


def shuffle_docs(docs, seed: int) -> list:
    """Deterministic Fisher-Yates shuffle driven by splitmix64.

    The generator and the ``value % (i + 1)`` index rule are part of the
    contract: any implementation seeded with the same 64-bit value produces
    the same permutation.
    """
    out = list(docs)
    stream = splitmix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = next(stream) % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def write_docs(docs, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            record = {
                "id": d.id,
                "company": d.company,
                "sector": d.sector,
                "text": d.text,
                "tokens": d.tokens,
                "label": d.label,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_docs(path) -> list[ReviewDoc]:
    docs: list[ReviewDoc] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
            try:
                docs.append(
                    ReviewDoc(
                        id=record["id"],
                        company=record["company"],
                        sector=record.get("sector", ""),
                        text=record.get("text", ""),
                        tokens=[list(s) for s in record.get("tokens", [])],
                        label=record.get("label"),
                    )
                )
            except KeyError as exc:
                raise ValueError(f"{path}: line {lineno}: missing field {exc}") from None
    return docs
