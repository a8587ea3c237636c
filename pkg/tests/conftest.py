import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from raredx import Document, build_index


@pytest.fixture
def zebra_docs():
    return [Document("d1", "zebra stripes"), Document("d2", "horse mane")]


@pytest.fixture
def zebra_index(zebra_docs):
    return build_index(zebra_docs)
