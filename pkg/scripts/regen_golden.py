"""Rewrite tests/golden/ from the bundled corpus.

Run only after an intentional change to the rendered output, then review
the diff before committing.
"""

import os
from pathlib import Path

from ssm_loom import fixture_corpus
from ssm_loom.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
STAMP = "2000-01-01T00:00:00+00:00"

if __name__ == "__main__":
    os.environ["SSM_LOOM_SEED_METADATA"] = STAMP
    corpus = str(fixture_corpus())
    for args in (
        ["aggregate", "--corpus", corpus, "--out", str(GOLDEN)],
        ["forest", "--corpus", corpus, "--out", str(GOLDEN)],
        ["forest", "--corpus", corpus, "--out", str(GOLDEN), "--format", "text"],
    ):
        assert main(args) == 0
