"""Deterministic synthetic review corpora with known ground truth.

Reviews are assembled from sentence templates that pair a catalog aspect term
with an opinion trigger of known polarity: positive triggers on the pros side,
negative on the cons side. Labels, per-aspect mention counts and planted
polarities are therefore known by construction, which is what desk-scale
tests need. Optional knobs plant sentences that exercise the later scoring
tiers (non-lexicon modifiers, lexicon-uncovered aspect words, negations).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .corpus import RawReview
from .lexicon import LexiconEntry, Source

POSITIVE_TRIGGERS = {
    "great": 0.8,
    "excellent": 0.9,
    "good": 0.6,
    "fantastic": 0.9,
    "wonderful": 0.85,
    "generous": 0.7,
    "supportive": 0.65,
    "friendly": 0.7,
    "solid": 0.4,
    "rewarding": 0.75,
    "helpful": 0.6,
    "modern": 0.45,
    "fair": 0.5,
}

NEGATIVE_TRIGGERS = {
    "terrible": -0.9,
    "bad": -0.6,
    "poor": -0.7,
    "awful": -0.85,
    "toxic": -0.9,
    "low": -0.4,
    "stressful": -0.75,
    "rigid": -0.5,
    "chaotic": -0.65,
    "weak": -0.5,
    "unfair": -0.7,
    "outdated": -0.55,
    "slow": -0.4,
    "horrible": -0.95,
}

# Aspect surface terms the generator plants; all exist in the default catalog.
GENERATOR_ASPECT_TERMS = {
    "Salary": ("salary", "pay", "compensation"),
    "Employees/Co-workers": ("colleagues", "coworkers", "people"),
    "Working time": ("hours", "schedule"),
    "Management": ("management", "managers"),
    "Office culture": ("culture", "environment"),
    "Location": ("location", "commute"),
    "Work life": ("work life balance", "workload"),
    "Perks/Benefits": ("perks", "benefits"),
    "Job opportunities": ("opportunities",),
    "Job training": ("training", "onboarding"),
    "Vacation": ("vacation", "holidays"),
    "Leadership": ("leadership", "executives"),
    "Career development": ("career", "promotions"),
    "Personal growth": ("growth",),
    "Company support": ("support", "supervisors"),
    "Flexibility": ("freedom", "autonomy"),
    "Performance": ("productivity", "skills"),
    "Job respect": ("respect", "recognition"),
    "Work projects": ("projects", "products"),
    "Stress": ("pressure", "deadlines"),
    "Employee communication": ("communication", "feedback"),
    "Technology": ("tools",),
    "Politics": ("politics",),
}

# Planted lexicon polarity for aspect head words themselves (tier-3 fodder).
ASPECT_WORD_POLARITY = 0.3

# Modifiers deliberately kept out of the companion lexicon.
MILD_MODIFIERS = ("adequate", "standard", "typical", "usual")

# Aspect terms (also catalog terms) the companion lexicon never covers, with
# equally uncovered modifiers: these sentences can only be scored by the
# semi-random fallback.
UNCOVERED_SENTENCES = (("technology", "proprietary"), ("bureaucracy", "entrenched"))

FILLER_SENTENCES = (
    "Plenty of meetings happen every week.",
    "Days move quickly around here.",
    "Things vary from quarter to quarter.",
)

SECTORS = ("tech", "finance", "energy", "hospitality")


@dataclass
class SynthConfig:
    sectors: tuple = SECTORS
    aspect_terms: dict = field(default_factory=lambda: dict(GENERATOR_ASPECT_TERMS))
    pos_triggers: dict = field(default_factory=lambda: dict(POSITIVE_TRIGGERS))
    neg_triggers: dict = field(default_factory=lambda: dict(NEGATIVE_TRIGGERS))
    sentences_per_side: tuple = (2, 3)
    filler_rate: float = 0.0
    mild_rate: float = 0.0
    oov_rate: float = 0.0
    negation_rate: float = 0.0
    # company index pairs forced to share an aspect profile
    twin_pairs: tuple = ()
    profile_choices: tuple = (0.85, 0.5, 0.15)


@dataclass
class SynthTruth:
    """What the generator planted, for oracle-style assertions."""

    mention_counts: dict            # aspect name -> planted mention count
    company_polarities: dict        # (company, aspect) -> list of planted scores
    profiles: dict                  # company -> {aspect: p(pros side)}
    companies: list
    uncovered_mentions: int         # mentions only the random fallback can score


def _company_names(n: int) -> list[str]:
    return [f"Company{i:03d}" for i in range(n)]


def _weighted_choice(rng: random.Random, items: list, weights: list):
    total = sum(weights)
    x = rng.random() * total
    acc = 0.0
    for item, w in zip(items, weights):
        acc += w
        if x < acc:
            return item
    return items[-1]


def _polar_sentence(rng, term: str, trigger: str) -> str:
    forms = (
        f"{trigger.capitalize()} {term}.",
        f"The {term} is {trigger}.",
        f"Very {trigger} {term}.",
        f"{trigger.capitalize()} {term} overall.",
    )
    return forms[rng.randrange(len(forms))]


def generate_corpus(
    n_companies: int,
    reviews_per_company: int,
    config: SynthConfig | None = None,
    seed: int = 0,
) -> tuple[list[RawReview], SynthTruth]:
    """Build a corpus plus the ground truth that went into it."""
    if n_companies < 1 or reviews_per_company < 1:
        raise ValueError("need at least one company and one review per company")
    cfg = config or SynthConfig()
    rng = random.Random(seed)
    companies = _company_names(n_companies)
    aspects = sorted(cfg.aspect_terms)

    profiles: dict[str, dict[str, float]] = {}
    for name in companies:
        profiles[name] = {a: rng.choice(cfg.profile_choices) for a in aspects}
    for i, j in cfg.twin_pairs:
        profiles[companies[j]] = dict(profiles[companies[i]])

    truth = SynthTruth(
        mention_counts={},
        company_polarities={},
        profiles=profiles,
        companies=list(companies),
        uncovered_mentions=0,
    )

    def plant(company, aspect, polarity):
        truth.mention_counts[aspect] = truth.mention_counts.get(aspect, 0) + 1
        if polarity is not None:
            truth.company_polarities.setdefault((company, aspect), []).append(polarity)

    def make_sentence(company: str, positive: bool) -> str:
        r = rng.random()
        if r < cfg.filler_rate:
            return FILLER_SENTENCES[rng.randrange(len(FILLER_SENTENCES))]
        if r < cfg.filler_rate + cfg.oov_rate:
            term, modifier = UNCOVERED_SENTENCES[rng.randrange(len(UNCOVERED_SENTENCES))]
            aspect = "Technology" if term == "technology" else "Politics"
            plant(company, aspect, None)
            truth.uncovered_mentions += 1
            return f"The {term} is {modifier}."
        profile = profiles[company]
        weights = [profile[a] if positive else 1.0 - profile[a] for a in aspects]
        if sum(weights) <= 0:
            weights = [1.0] * len(aspects)
        aspect = _weighted_choice(rng, aspects, weights)
        term = rng.choice(cfg.aspect_terms[aspect])
        r2 = rng.random()
        if r2 < cfg.mild_rate:
            modifier = MILD_MODIFIERS[rng.randrange(len(MILD_MODIFIERS))]
            plant(company, aspect, ASPECT_WORD_POLARITY if positive else -ASPECT_WORD_POLARITY)
            return f"The {term} is {modifier}."
        if r2 < cfg.mild_rate + cfg.negation_rate:
            # "is not <opposite trigger>": net polarity matches the side.
            # Single-token terms keep the trigger inside the context window.
            short = [t for t in cfg.aspect_terms[aspect] if " " not in t]
            if short:
                term = short[0] if term not in short else term
            pool = cfg.neg_triggers if positive else cfg.pos_triggers
            trigger = rng.choice(sorted(pool))
            plant(company, aspect, -pool[trigger])
            return f"The {term} is not {trigger}."
        pool = cfg.pos_triggers if positive else cfg.neg_triggers
        trigger = rng.choice(sorted(pool))
        plant(company, aspect, pool[trigger])
        return _polar_sentence(rng, term, trigger)

    reviews: list[RawReview] = []
    for ci, company in enumerate(companies):
        sector = cfg.sectors[ci % len(cfg.sectors)]
        for k in range(reviews_per_company):
            lo, hi = cfg.sentences_per_side
            pros = " ".join(
                make_sentence(company, True) for _ in range(rng.randint(lo, hi))
            )
            cons = " ".join(
                make_sentence(company, False) for _ in range(rng.randint(lo, hi))
            )
            reviews.append(
                RawReview(
                    id=f"{company}-r{k:04d}",
                    company=company,
                    sector=sector,
                    pros=pros,
                    cons=cons,
                )
            )
    return reviews, truth


def synth_corpus(
    n_companies: int,
    reviews_per_company: int,
    config: SynthConfig | None = None,
    seed: int = 0,
) -> list[RawReview]:
    """Generator entry point when the ground truth is not needed."""
    reviews, _ = generate_corpus(n_companies, reviews_per_company, config, seed)
    return reviews


def companion_lexicon_entries(
    config: SynthConfig | None = None,
) -> tuple[list[LexiconEntry], list[LexiconEntry]]:
    """Primary/secondary lexicon entries matching a generator config.

    Primary carries every trigger plus a mild positive score for each planted
    aspect head word (so dictionary lookups of aspect words succeed); the
    uncovered sentence vocabulary is deliberately absent. Secondary repeats a
    few terms with different values to exercise merge priority and adds
    emoticons.
    """
    cfg = config or SynthConfig()
    primary: dict[str, float] = {}
    primary.update(cfg.pos_triggers)
    primary.update(cfg.neg_triggers)
    uncovered = {term for term, _ in UNCOVERED_SENTENCES}
    for terms in cfg.aspect_terms.values():
        for term in terms:
            head = term.split()[-1]
            if head not in uncovered and head not in primary:
                primary[head] = ASPECT_WORD_POLARITY
    secondary = {
        "good": 0.5,
        "bad": -0.5,
        "delightful": 0.7,
        "dreadful": -0.8,
        ":)": 0.6,
        ":(": -0.6,
    }
    to_entries = lambda mapping, src: [
        LexiconEntry(term, polarity, src) for term, polarity in sorted(mapping.items())
    ]
    return to_entries(primary, Source.PRIMARY), to_entries(secondary, Source.SECONDARY)
