"""
Aggregating the bundled corpus
==============================

Load the 19 evidence models, check them, pool every effect and print the
summary table, first for everything and then per quantization method.
"""

from ssm_loom import aggregate, aggregate_by, fixture_corpus, render_summary, validate_model
from ssm_loom.io import load_corpus, load_glossary, load_joins

root = fixture_corpus()
corpus = load_corpus(root)
glossary = load_glossary(root / "glossary.json")
joins = load_joins(root / "joins.json")

bad = [m.id for m in corpus.models if not validate_model(m, glossary).valid]
print(len(corpus.models), "models,", len(bad), "invalid")

agg = aggregate(corpus.models, glossary, joins)
print(render_summary(agg).decode())

# the same corpus one level down: only models sharing a method are pooled
groups = aggregate_by(corpus.models, "quantizationMethod", glossary, joins)
for name, g in groups.items():
    if len(g.inputs) > 1:
        print("==", name, g.inputs)
        print(render_summary(g).decode())
