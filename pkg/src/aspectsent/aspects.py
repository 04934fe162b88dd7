"""The aspect catalog and gazetteer-style mention extraction.

The default catalog ships 30 named aspects (job, salary, location, ...) whose
order fixes the dimensions of every company embedding. Each aspect carries a
set of matchable surface terms; mentions are found by scanning token windows
of up to three words, longest match first. The catalog file also records each
aspect's characteristic modifier vocabulary for documentation, but only the
``terms`` list is ever matched against text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

MAX_TERM_TOKENS = 3

DEFAULT_CATALOG_RESOURCE = "aspects30.json"


@dataclass(frozen=True)
class AspectMention:
    aspect_name: str
    doc_id: str
    sentence_index: int
    token_index: int
    matched_term: str

    @property
    def n_tokens(self) -> int:
        return len(self.matched_term.split())

    @property
    def head_word(self) -> str:
        """Last token of the matched term; what dictionary lookups use."""
        return self.matched_term.split()[-1]


class AspectCatalog:
    """Ordered aspect list; the order defines embedding dimension indices."""

    def __init__(self, aspects: list[tuple[str, set[str]]]):
        names = [name for name, _ in aspects]
        if len(set(names)) != len(names):
            dupe = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate aspect name {dupe!r}")
        self._names = names
        self._index = {name: i for i, name in enumerate(names)}
        self._terms: list[frozenset[str]] = []
        term_to_aspect: dict[str, str] = {}
        for name, terms in aspects:
            if not terms:
                raise ValueError(f"aspect {name!r} has an empty term set")
            normalized = set()
            for term in terms:
                term = " ".join(term.lower().split())
                if not term:
                    raise ValueError(f"aspect {name!r} has an empty term")
                if len(term.split()) > MAX_TERM_TOKENS:
                    raise ValueError(
                        f"aspect {name!r}: term {term!r} longer than {MAX_TERM_TOKENS} tokens"
                    )
                if term in term_to_aspect and term_to_aspect[term] != name:
                    raise ValueError(
                        f"term {term!r} claimed by both {term_to_aspect[term]!r} and {name!r}"
                    )
                term_to_aspect[term] = name
                normalized.add(term)
            self._terms.append(frozenset(normalized))
        self._term_to_aspect = term_to_aspect

    @property
    def names(self) -> list[str]:
        return list(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown aspect {name!r}") from None

    def terms_of(self, name: str) -> frozenset[str]:
        return self._terms[self.index_of(name)]

    def aspect_of_term(self, term: str) -> str | None:
        return self._term_to_aspect.get(term)


def load_catalog(path) -> AspectCatalog:
    """Load a catalog file: ``{"aspects": [{"name":..., "terms": [...]}]}``."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON: {exc}") from None
    return _catalog_from_data(data, str(path))


def _catalog_from_data(data, origin: str) -> AspectCatalog:
    if not isinstance(data, dict) or not isinstance(data.get("aspects"), list):
        raise ValueError(f"{origin}: expected an object with an 'aspects' list")
    aspects: list[tuple[str, set[str]]] = []
    for i, item in enumerate(data["aspects"]):
        if not isinstance(item, dict):
            raise ValueError(f"{origin}: aspects[{i}] is not an object")
        name = item.get("name")
        terms = item.get("terms")
        if not isinstance(name, str) or not name:
            raise ValueError(f"{origin}: aspects[{i}] missing 'name'")
        if not isinstance(terms, list) or not terms:
            raise ValueError(f"{origin}: aspect {name!r} missing non-empty 'terms'")
        aspects.append((name, set(map(str, terms))))
    try:
        return AspectCatalog(aspects)
    except ValueError as exc:
        raise ValueError(f"{origin}: {exc}") from None


def default_catalog() -> AspectCatalog:
    """The packaged 30-aspect catalog."""
    text = resources.files("aspectsent.data").joinpath(DEFAULT_CATALOG_RESOURCE).read_text("utf-8")
    return _catalog_from_data(json.loads(text), DEFAULT_CATALOG_RESOURCE)


def extract(doc, catalog: AspectCatalog) -> list[AspectMention]:
    """Locate catalog-term mentions in a tokenized document.

    The scan is left to right per sentence; at each position the longest
    matching window (up to three tokens) wins and its tokens are consumed,
    so one token never yields more than one mention.
    """
    mentions: list[AspectMention] = []
    for si, sentence in enumerate(doc.tokens):
        lowered = [t.lower() for t in sentence]
        i = 0
        while i < len(lowered):
            matched = None
            for n in range(min(MAX_TERM_TOKENS, len(lowered) - i), 0, -1):
                phrase = " ".join(lowered[i : i + n])
                aspect = catalog.aspect_of_term(phrase)
                if aspect is not None:
                    matched = (aspect, phrase, n)
                    break
            if matched is None:
                i += 1
                continue
            aspect, phrase, n = matched
            mentions.append(AspectMention(aspect, doc.id, si, i, phrase))
            i += n
    return mentions


def corpus_frequency(docs, catalog: AspectCatalog) -> dict[str, int]:
    """Mention counts per aspect across a corpus; absent aspects count 0."""
    counts = {name: 0 for name in catalog.names}
    for doc in docs:
        for mention in extract(doc, catalog):
            counts[mention.aspect_name] += 1
    return counts
