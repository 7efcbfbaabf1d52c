import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from venuenet.corpus import parse_jsonl


def corpus_from_lines(*lines: str, source: str = "metadata-corpus"):
    data = "\n".join(lines).encode("utf-8")
    return parse_jsonl(io.BytesIO(data), source=source)


@pytest.fixture
def small_corpus():
    """Three venues, five papers, mixed internal and external references."""
    return corpus_from_lines(
        '{"venue_key": "v1", "name": "Journal One", "kind": "journal"}',
        '{"venue_key": "v2", "name": "Conf Two", "kind": "conference"}',
        '{"venue_key": "v3", "name": "Journal Three", "kind": "journal"}',
        '{"id": "p1", "title": "Graph mining basics", "authors": ["Ada Lovelace", "Alan Turing"], "venue": "v1", "year": 1990, "refs": ["p3", "ext shared classic"]}',
        '{"id": "p2", "title": "More graph mining", "authors": ["Ada Lovelace"], "venue": "v1", "year": 1995, "refs": ["p3", "ext shared classic"]}',
        '{"id": "p3", "title": "Foundations", "authors": ["Grace Hopper"], "venue": "v2", "year": 1985, "refs": ["ext other work"]}',
        '{"id": "p4", "title": "Applications", "authors": ["Grace Hopper", "Alan Turing"], "venue": "v2", "year": 2000, "refs": ["p1", "ext shared classic"]}',
        '{"id": "p5", "title": "Unrelated topic", "authors": ["John McCarthy"], "venue": "v3", "year": 2000, "refs": ["ext niche reference"]}',
    )
