from __future__ import annotations

import pytest

from reqdsl import default_lexicons, load_bundled_corpus


@pytest.fixture(scope="session")
def lexicons():
    return default_lexicons()


@pytest.fixture(scope="session")
def corpus():
    return load_bundled_corpus()
