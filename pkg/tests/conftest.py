import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aspectsent.aspects import default_catalog
from aspectsent.lexicon import Lexicon, LexiconEntry, Source


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


def make_lexicon(mapping, threshold=0.25, source=Source.PRIMARY):
    entries = {
        term: LexiconEntry(term, polarity, source) for term, polarity in mapping.items()
    }
    return Lexicon(entries, threshold)


@pytest.fixture
def tiny_lexicon():
    return make_lexicon(
        {
            "great": 0.8,
            "good": 0.6,
            "solid": 0.4,
            "bad": -0.6,
            "terrible": -0.9,
            "salary": 0.3,
            "perks": 0.3,
        }
    )
