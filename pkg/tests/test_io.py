import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssm_loom.aggregation import aggregate
from ssm_loom.belief import EffectStatistics, IntensityThresholds
from ssm_loom.io import (
    ParseError,
    aggregated_from_dict,
    aggregated_to_dict,
    dumps,
    glossary_from_dict,
    glossary_to_dict,
    joins_from_dict,
    joins_to_dict,
    load_corpus,
    load_glossary,
    load_model,
    load_questionnaire,
    model_from_dict,
    model_to_dict,
    read_json,
    thresholds_from_dict,
    thresholds_to_dict,
)
from ssm_loom.model import ConceptKind, Effect, EvidenceModel, Relation, RelationKind, ValueConcept
from ssm_loom.scale import HypothesisSet

names = st.text(st.characters(min_codepoint=32, max_codepoint=0x24F), min_size=1, max_size=12)
concepts = st.builds(
    ValueConcept,
    names,
    st.sampled_from([ConceptKind.ARCHETYPE, ConceptKind.CONTEXTUAL_ASPECT]),
    st.lists(st.builds(Relation, st.sampled_from(list(RelationKind)), names), max_size=2).map(tuple),
)
stats = st.lists(st.floats(-1, 1), min_size=1, max_size=6).map(EffectStatistics.from_improvements)


@st.composite
def effects(draw):
    s = draw(st.none() | stats)
    return Effect(
        draw(names),
        HypothesisSet(draw(st.integers(1, 127))),
        draw(st.floats(0, 1)),
        0 if s is None else s.sample_count,
        s,
        draw(st.booleans()),
    )


models = st.builds(
    EvidenceModel,
    names,
    names,
    st.builds(ValueConcept, names, st.just(ConceptKind.CAUSE)),
    st.lists(concepts, max_size=4).map(tuple),
    st.lists(effects(), max_size=4).map(tuple),
    names,
    st.dictionaries(names, names | st.integers(), max_size=3),
)


@given(models)
def test_model_round_trip(m):
    doc = json.loads(dumps(model_to_dict(m)))
    assert model_from_dict(doc) == m


def test_fixture_files_round_trip(corpus):
    for m in corpus.models:
        assert model_from_dict(model_to_dict(m)) == m


def test_camel_case_fields(corpus):
    d = model_to_dict(corpus.models[0])
    assert {"id", "studyId", "cause", "context", "effects"} <= set(d)
    assert "sampleCount" in d["effects"][0]


def test_glossary_and_joins_round_trip(glossary, joins):
    assert glossary_from_dict(glossary_to_dict(glossary)) == glossary
    assert joins_from_dict(joins_to_dict(joins)) == joins


def test_thresholds_round_trip():
    t = IntensityThresholds(0.02, 0.1, 0.4)
    assert thresholds_from_dict(thresholds_to_dict(t)) == t
    with pytest.raises(ValueError):
        thresholds_from_dict({"tIndifferent": 0.3, "tWeak": 0.1, "tModerate": 0.5})


def test_aggregated_round_trip(corpus, glossary, joins):
    agg = aggregate(corpus.models, glossary, joins)
    assert aggregated_from_dict(json.loads(dumps(aggregated_to_dict(agg)))) == agg


def test_parse_error_has_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "id": "x",\n  oops\n}')
    with pytest.raises(ParseError) as info:
        read_json(p)
    assert info.value.line == 3
    assert str(info.value).startswith(f"{p}:3:")


def test_missing_file_and_field(tmp_path):
    with pytest.raises(ParseError):
        read_json(tmp_path / "absent.json")
    p = tmp_path / "m.json"
    p.write_text('{"id": "x"}')
    with pytest.raises(ParseError, match="missing field"):
        load_model(p)
    p.write_text('{"entries": {"A": {"definition": ""}}}')
    with pytest.raises(ParseError, match="empty definition"):
        load_glossary(p)


def test_bad_notation_is_parse_error(tmp_path, corpus):
    d = model_to_dict(corpus.models[0])
    d["effects"][0]["hypothesis"] = "{IF,XX}"
    p = tmp_path / "m.json"
    p.write_text(dumps(d))
    with pytest.raises(ParseError, match="XX"):
        load_model(p)


def test_corpus_loading(tmp_path, corpus_dir):
    assert load_corpus(tmp_path).models == ()
    with pytest.raises(ParseError):
        load_corpus(tmp_path / "nope")
    (tmp_path / "models").mkdir()
    src = (corpus_dir / "models" / "S2-INT8-F.json").read_text()
    (tmp_path / "models" / "a.json").write_text(src)
    (tmp_path / "models" / "b.json").write_text(src)
    with pytest.raises(ParseError, match="duplicate"):
        load_corpus(tmp_path)


def test_questionnaire_answers(corpus_dir):
    questions, answers = load_questionnaire(corpus_dir / "questionnaire.json")
    assert len(questions) == 10
    assert sorted(answers) == ["S1", "S2", "S3", "S4", "S5", "S6"]
