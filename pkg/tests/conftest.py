import json
from pathlib import Path

import pytest

from recast.ingest import parse_cascades

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle_cascades():
    """The bundled hand-built suite of 20 small cascades."""
    with open(DATA_DIR / "oracle_cascades.jsonl") as fh:
        corpus, rejections = parse_cascades(fh)
    assert len(corpus) == 20 and not rejections
    return corpus


def make_cascade(cascade_id, times, followers, users=None):
    """Cascade dict -> parsed Cascade, for inline test construction."""
    users = users or [f"{cascade_id}u{i}" for i in range(len(times))]
    record = {
        "cascade_id": cascade_id,
        "events": [
            {
                "post_id": f"{cascade_id}p{i}",
                "user_id": users[i],
                "t": times[i],
                "followers": followers[i],
            }
            for i in range(len(times))
        ],
    }
    corpus, rejections = parse_cascades([json.dumps(record)])
    assert not rejections, rejections
    return corpus[0]
