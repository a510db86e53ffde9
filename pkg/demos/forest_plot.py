"""
Forest plot of the aggregated effects
=====================================

Writes forest.svg to the working directory and prints the text rendering of the
first effect group.
"""

from pathlib import Path

from ssm_loom import IntensityThresholds, aggregate, fixture_corpus, render_forest
from ssm_loom.io import load_corpus, load_glossary, load_joins

root = fixture_corpus()
corpus = load_corpus(root)
agg = aggregate(corpus.models, load_glossary(root / "glossary.json"), load_joins(root / "joins.json"))

out = Path("forest.svg")
out.write_bytes(render_forest(corpus.models, agg))
print("wrote", out)

text = render_forest(corpus.models, agg, format="text").decode()
print("\n".join(text.splitlines()[:26]))

# stricter thresholds move the band rules inward
strict = IntensityThresholds(0.02, 0.10, 0.30)
svg = render_forest(corpus.models, agg, strict).decode()
print([line.split('"')[3] for line in svg.splitlines() if 'class="threshold"' in line])
