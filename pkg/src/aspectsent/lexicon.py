"""Sentiment lexicon: load term/polarity sources, merge with priority, look up.

Two sources are merged into one dictionary. Weak entries (absolute polarity
below the threshold, default 0.25) are dropped from both sides first; when a
term survives in both, the primary source's polarity wins. The loaders accept
any pre-collapsed signed-score resource in TSV form, e.g. a SentiWordNet-style
file as primary and a SenticNet-style file as secondary.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

DEFAULT_THRESHOLD = 0.25


class Source(Enum):
    PRIMARY = "primary"
    SECONDARY = "secondary"


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    polarity: float
    source: Source


def load_entries(path, source: Source) -> list[LexiconEntry]:
    """Read one ``term<TAB>polarity`` per line into tagged entries.

    Terms are lowercased here so later lookups can be case-insensitive.
    ``#``-prefixed lines and blank lines are skipped. No magnitude threshold
    is applied at this stage; that happens in :func:`merge`.
    """
    entries: list[LexiconEntry] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(
                    f"{path}: line {lineno}: expected 'term<TAB>polarity', got {line!r}"
                )
            term = parts[0].strip().lower()
            if not term or any(ch.isspace() for ch in term):
                raise ValueError(f"{path}: line {lineno}: bad term {parts[0]!r}")
            try:
                polarity = float(parts[1])
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: polarity {parts[1]!r} is not a number"
                ) from None
            if not -1.0 <= polarity <= 1.0:
                raise ValueError(
                    f"{path}: line {lineno}: polarity {polarity!r} outside [-1, 1]"
                )
            entries.append(LexiconEntry(term, polarity, source))
    return entries


class Lexicon:
    """Immutable term -> signed polarity table with source provenance.

    Every stored entry satisfies ``abs(polarity) >= threshold``. Lookups
    lowercase the query term; there is no stemming, so only surface forms
    match. Emoticons are legal terms.
    """

    def __init__(self, entries: dict[str, LexiconEntry], threshold: float = DEFAULT_THRESHOLD):
        if threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {threshold}")
        for term, entry in entries.items():
            if abs(entry.polarity) < threshold:
                raise ValueError(
                    f"entry {term!r} has |polarity| {abs(entry.polarity)} below threshold {threshold}"
                )
        self._entries = dict(entries)
        self.threshold = float(threshold)

    def lookup(self, term: str) -> float | None:
        """Polarity of ``term`` (case-insensitive exact match) or None."""
        entry = self._entries.get(term.lower())
        return entry.polarity if entry is not None else None

    def entry(self, term: str) -> LexiconEntry | None:
        return self._entries.get(term.lower())

    def __contains__(self, term: str) -> bool:
        return term.lower() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        for term in sorted(self._entries):
            yield self._entries[term]

    def save_tsv(self, path) -> None:
        """Write ``term<TAB>polarity<TAB>source`` rows, sorted by term.

        The threshold is recorded on a leading comment line so the file
        round-trips through :func:`load_merged_tsv`.
        """
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# threshold={self.threshold!r}\n")
            for entry in self:
                fh.write(f"{entry.term}\t{entry.polarity!r}\t{entry.source.value}\n")


def merge(
    primary: Iterable[LexiconEntry],
    secondary: Iterable[LexiconEntry],
    threshold: float = DEFAULT_THRESHOLD,
) -> Lexicon:
    """Combine two tagged entry lists into one lexicon.

    Entries with ``abs(polarity) < threshold`` are dropped from both sides
    (strictly below: a polarity sitting exactly on the threshold is kept).
    A term present in both surviving sides keeps the primary pair. Within
    one side, a repeated term keeps its last occurrence.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    merged: dict[str, LexiconEntry] = {}
    for entry in secondary:
        if abs(entry.polarity) >= threshold:
            merged[entry.term] = entry
    for entry in primary:
        if abs(entry.polarity) >= threshold:
            merged[entry.term] = entry
    return Lexicon(merged, threshold)


def load_merged_tsv(path) -> Lexicon:
    """Load a lexicon previously written by :meth:`Lexicon.save_tsv`."""
    entries: dict[str, LexiconEntry] = {}
    threshold = 0.0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.lstrip().startswith("# threshold="):
                threshold = float(line.split("=", 1)[1])
                continue
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected 'term<TAB>polarity<TAB>source'"
                )
            term = parts[0].strip().lower()
            try:
                polarity = float(parts[1])
                source = Source(parts[2])
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            entries[term] = LexiconEntry(term, polarity, source)
    return Lexicon(entries, threshold)
