import os
import pathlib

import pytest


@pytest.fixture
def corpus():
    env = os.environ.get("HK_CORPUS_DIR")
    if env:
        return pathlib.Path(env)
    return pathlib.Path(__file__).resolve().parents[2] / "corpus"
