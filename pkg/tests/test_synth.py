import pytest

from aspectsent.aspects import extract
from aspectsent.corpus import split_pros_cons, tokenize
from aspectsent.lexicon import merge
from aspectsent.synth import (
    SynthConfig,
    companion_lexicon_entries,
    generate_corpus,
    synth_corpus,
)


class TestCardinalityAndDeterminism:
    def test_review_count(self):
        reviews = synth_corpus(2, 3, seed=42)
        assert len(reviews) == 6
        assert len({r.company for r in reviews}) == 2

    def test_byte_identical_under_seed(self):
        a = synth_corpus(3, 4, seed=42)
        b = synth_corpus(3, 4, seed=42)
        assert a == b

    def test_different_seed_differs(self):
        assert synth_corpus(3, 4, seed=1) != synth_corpus(3, 4, seed=2)

    def test_ids_unique(self):
        reviews = synth_corpus(4, 5, seed=0)
        assert len({r.id for r in reviews}) == len(reviews)

    def test_invalid_sizes_rejected(self):
        with pytest.raises(ValueError):
            synth_corpus(0, 3)
        with pytest.raises(ValueError):
            synth_corpus(3, 0)


class TestPlantedStructure:
    def test_every_pros_sentence_has_catalog_term(self, catalog):
        reviews = synth_corpus(3, 5, seed=9)
        for review in reviews:
            for sentence in tokenize(review.pros):
                doc = type("D", (), {"id": "x", "tokens": [sentence]})()
                assert extract(doc, catalog), sentence

    def test_labels_by_construction(self):
        reviews = synth_corpus(2, 4, seed=3)
        for review in reviews:
            for doc in split_pros_cons(review):
                assert doc.label == (1 if doc.id.endswith("-pos") else 0)

    def test_twins_share_profiles(self):
        config = SynthConfig(twin_pairs=((0, 1),))
        _, truth = generate_corpus(4, 3, config, seed=5)
        companies = truth.companies
        assert truth.profiles[companies[0]] == truth.profiles[companies[1]]
        assert truth.profiles[companies[0]] != truth.profiles[companies[2]]

    def test_uncovered_mentions_tracked(self):
        config = SynthConfig(oov_rate=0.2)
        _, truth = generate_corpus(4, 10, config, seed=6)
        assert truth.uncovered_mentions > 0
        total = sum(truth.mention_counts.values())
        assert truth.uncovered_mentions < total

    def test_sectors_cycle(self):
        reviews = synth_corpus(5, 1, seed=0)
        sectors = {r.company: r.sector for r in reviews}
        assert len(set(sectors.values())) >= 2


class TestCompanionLexicon:
    def test_covers_triggers_with_exact_polarities(self):
        config = SynthConfig()
        primary, secondary = companion_lexicon_entries(config)
        lexicon = merge(primary, secondary, 0.25)
        assert lexicon.lookup("great") == config.pos_triggers["great"]
        assert lexicon.lookup("terrible") == config.neg_triggers["terrible"]

    def test_aspect_heads_covered_but_uncovered_terms_absent(self):
        primary, secondary = companion_lexicon_entries()
        lexicon = merge(primary, secondary, 0.25)
        assert lexicon.lookup("salary") is not None
        assert lexicon.lookup("balance") is not None  # head of the 3-gram term
        assert lexicon.lookup("technology") is None
        assert lexicon.lookup("bureaucracy") is None

    def test_primary_priority_exercised(self):
        primary, secondary = companion_lexicon_entries()
        lexicon = merge(primary, secondary, 0.25)
        # "good" exists in both with different values; primary must win
        assert lexicon.lookup("good") == SynthConfig().pos_triggers["good"]
