"""Dependency arcs over tokenized sentences.

Sentences come pre-parsed (CoNLL-U) or through a small built-in heuristic
parser. Either way, downstream code only cares about three relations —
adjectival modifier, adverbial modifier and nominal subject — because those
are the arcs that connect an aspect word to its opinion trigger.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Relation(Enum):
    AMOD = "amod"
    ADVMOD = "advmod"
    NSUBJ = "nsubj"
    OTHER = "other"


TRIGGER_RELATIONS = (Relation.AMOD, Relation.ADVMOD, Relation.NSUBJ)

# Coarse part-of-speech tags used throughout.
ADJ, ADV, NOUN, VERB, NEG, OTHER = "ADJ", "ADV", "NOUN", "VERB", "NEG", "OTHER"

COPULAS = frozenset({"is", "are", "was", "were", "be", "been", "seems", "looks"})

_NEGATION_WORDS = frozenset({"not", "no", "never", "n't"})

_CLOSED_CLASS = frozenset(
    """the a an of in on at for with to from and or but as by about into over
    under this that these those it its we they he she you i me us our their
    his her your them there here what which who when while because if then
    than such much many some any all both each few more most other
    only own same can will just should now""".split()
)

# Common review-domain adjectives the suffix rules would miss (or mis-tag:
# "friendly" would hit the -ly adverb rule). Checked before suffixes.
_ADJ_WORDS = frozenset(
    """good great excellent fantastic wonderful amazing brilliant nice fine
    decent solid fair generous supportive friendly helpful rewarding modern
    competitive flexible interesting boring terrible bad poor awful horrible
    toxic low high long short hard easy tough stressful rigid chaotic weak
    unfair outdated slow disorganized old new big small political conservative
    stodgy proprietary entrenched adequate standard typical normal usual
    reasonable affordable comfortable healthy strong happy unhappy positive
    negative free full busy quiet calm mean dirty clean smart talented
    mundane dull secure stable unstable cheap expensive""".split()
)

_ADV_WORDS = frozenset(
    """very really truly quite too so extremely highly mostly fairly pretty
    rather somewhat incredibly absolutely barely hardly always often
    sometimes usually rarely never""".split()
)

_VERB_WORDS = COPULAS | frozenset(
    """have has had get gets got make makes go goes do does did feel feels
    offer offers provide provides give gives take takes happen happens
    keep keeps let lets allow allows""".split()
)

_ADJ_SUFFIXES = ("ous", "ful", "ive", "less", "ish")


def tag_tokens(tokens, overrides: dict[str, str] | None = None) -> list[str]:
    """Coarse POS tags from closed-class lists and a few suffix rules.

    Unknown open-class words default to NOUN, which is the right bias for
    review text where aspect words are nouns. ``overrides`` maps lowercased
    words to tags and wins over every rule.
    """
    tags: list[str] = []
    for token in tokens:
        word = token.lower()
        if overrides and word in overrides:
            tags.append(overrides[word])
        elif not any(ch.isalnum() for ch in word):
            tags.append(OTHER)  # punctuation and emoticons
        elif word in _NEGATION_WORDS:
            tags.append(NEG)
        elif word in _CLOSED_CLASS:
            tags.append(OTHER)
        elif word in _VERB_WORDS:
            tags.append(VERB)
        elif word in _ADJ_WORDS:
            tags.append(ADJ)
        elif word in _ADV_WORDS or (word.endswith("ly") and len(word) > 3):
            tags.append(ADV)
        elif word.endswith(_ADJ_SUFFIXES) and len(word) > 4:
            tags.append(ADJ)
        else:
            tags.append(NOUN)
    return tags


@dataclass(frozen=True)
class DepArc:
    relation: Relation
    head: int
    dep: int

    def __post_init__(self):
        if self.head == self.dep:
            raise ValueError(f"arc cannot connect token {self.head} to itself")


@dataclass
class ParsedSentence:
    tokens: list[str]
    tags: list[str]
    arcs: list[DepArc] = field(default_factory=list)

    def __post_init__(self):
        if len(self.tags) != len(self.tokens):
            raise ValueError(
                f"{len(self.tags)} tags for {len(self.tokens)} tokens"
            )
        for arc in self.arcs:
            n = len(self.tokens)
            if not (0 <= arc.head < n and 0 <= arc.dep < n):
                raise ValueError(f"arc {arc} out of bounds for {n} tokens")


def heuristic_parse(tokens, tags=None) -> ParsedSentence:
    """Fallback parser producing only the trigger relations.

    Rules: an ADJ immediately before a NOUN modifies it; an ADV immediately
    before an ADJ modifies it; the nearest NOUNs on either side of a copular
    verb are linked as subject (dep) and predicate nominal (head).
    """
    tokens = list(tokens)
    if tags is None:
        tags = tag_tokens(tokens)
    tags = list(tags)
    if len(tags) != len(tokens):
        raise ValueError(f"{len(tags)} tags for {len(tokens)} tokens")
    arcs: list[DepArc] = []
    for i in range(len(tokens) - 1):
        if tags[i] == ADJ and tags[i + 1] == NOUN:
            arcs.append(DepArc(Relation.AMOD, head=i + 1, dep=i))
        elif tags[i] == ADV and tags[i + 1] == ADJ:
            arcs.append(DepArc(Relation.ADVMOD, head=i + 1, dep=i))
    seen = {(a.relation, a.head, a.dep) for a in arcs}
    for c, token in enumerate(tokens):
        if tags[c] != VERB or token.lower() not in COPULAS:
            continue
        left = next((i for i in range(c - 1, -1, -1) if tags[i] == NOUN), None)
        right = next((i for i in range(c + 1, len(tokens)) if tags[i] == NOUN), None)
        if left is None or right is None:
            continue
        key = (Relation.NSUBJ, right, left)
        if key not in seen:
            seen.add(key)
            arcs.append(DepArc(Relation.NSUBJ, head=right, dep=left))
    return ParsedSentence(tokens, tags, arcs)


def modifiers_of(sentence: ParsedSentence, index: int) -> list[int]:
    """Token indices connected to ``index`` by a trigger relation.

    Both arc directions count: the aspect can be the head (adjectival
    modifiers) or the dependent (subject of a predicate nominal). Results
    come back in token order without duplicates.
    """
    if not 0 <= index < len(sentence.tokens):
        raise IndexError(f"token index {index} out of range")
    found: set[int] = set()
    for arc in sentence.arcs:
        if arc.relation not in TRIGGER_RELATIONS:
            continue
        if arc.head == index:
            found.add(arc.dep)
        elif arc.dep == index:
            found.add(arc.head)
    return sorted(found)


_UPOS_TO_COARSE = {
    "ADJ": ADJ,
    "ADV": ADV,
    "NOUN": NOUN,
    "PROPN": NOUN,
    "VERB": VERB,
    "AUX": VERB,
}

_DEPREL_TO_RELATION = {
    "amod": Relation.AMOD,
    "advmod": Relation.ADVMOD,
    "nsubj": Relation.NSUBJ,
}


def read_conllu(path) -> list[ParsedSentence]:
    """Read CoNLL-U sentences, keeping FORM, UPOS, HEAD and DEPREL.

    Relation subtypes ("nsubj:pass") map to their base relation; anything
    outside the three trigger relations becomes OTHER. A PART token with
    lemma "not" is tagged NEG. Multi-word-token ranges and empty nodes are
    skipped, as is standard when working with the basic tree.
    """
    sentences: list[ParsedSentence] = []
    tokens: list[str] = []
    tags: list[str] = []
    # (head_1based, relation) per token; resolved to arcs at sentence end
    heads: list[tuple[int, Relation]] = []

    def flush(lineno):
        if not tokens:
            return
        arcs = []
        for dep_index, (head, relation) in enumerate(heads):
            if head <= 0:
                continue
            if head > len(tokens):
                raise ValueError(f"{path}: line {lineno}: HEAD {head} out of range")
            if head - 1 == dep_index:
                raise ValueError(f"{path}: line {lineno}: token heads itself")
            arcs.append(DepArc(relation, head=head - 1, dep=dep_index))
        sentences.append(ParsedSentence(list(tokens), list(tags), arcs))
        tokens.clear()
        tags.clear()
        heads.clear()

    with open(path, "r", encoding="utf-8") as fh:
        lineno = 0
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ValueError(
                    f"{path}: line {lineno}: expected 10 tab-separated columns, got {len(cols)}"
                )
            tok_id, form, lemma, upos = cols[0], cols[1], cols[2], cols[3]
            if "-" in tok_id or "." in tok_id:
                continue
            if upos == "PART" and lemma.lower() == "not":
                tag = NEG
            else:
                tag = _UPOS_TO_COARSE.get(upos, OTHER)
            if cols[6] in ("_", ""):
                head = 0
            else:
                try:
                    head = int(cols[6])
                except ValueError:
                    raise ValueError(
                        f"{path}: line {lineno}: HEAD {cols[6]!r} is not an integer"
                    ) from None
            deprel = cols[7].split(":", 1)[0]
            relation = _DEPREL_TO_RELATION.get(deprel, Relation.OTHER)
            tokens.append(form)
            tags.append(tag)
            heads.append((head, relation))
        flush(lineno)
    return sentences


def write_conllu(sentences, path) -> None:
    """Write sentences back out with the columns this module consumes.

    Each token carries at most one incoming arc here; tokens without one are
    attached to the root. Round-tripping preserves tokens, coarse tags and
    arcs.
    """
    coarse_to_upos = {ADJ: "ADJ", ADV: "ADV", NOUN: "NOUN", VERB: "VERB", OTHER: "X"}
    with open(path, "w", encoding="utf-8") as fh:
        for sentence in sentences:
            incoming: dict[int, DepArc] = {}
            for arc in sentence.arcs:
                incoming.setdefault(arc.dep, arc)
            for i, (form, tag) in enumerate(zip(sentence.tokens, sentence.tags)):
                if tag == NEG:
                    upos, lemma = "PART", "not"
                else:
                    upos, lemma = coarse_to_upos[tag], "_"
                arc = incoming.get(i)
                if arc is None:
                    head, deprel = 0, "root"
                else:
                    head, deprel = arc.head + 1, arc.relation.value
                    if deprel == "other":
                        deprel = "dep"
                fh.write(
                    "\t".join(
                        [str(i + 1), form, lemma, upos, "_", "_", str(head), deprel, "_", "_"]
                    )
                    + "\n"
                )
            fh.write("\n")
