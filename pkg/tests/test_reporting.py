import csv
import io
import xml.etree.ElementTree as ET

import pytest

from ssm_loom.aggregation import AggregatedModel, AggregationRecord, aggregate
from ssm_loom.belief import DEFAULT_THRESHOLDS, EffectStatistics, IntensityThresholds
from ssm_loom.model import ConceptKind, Effect, EvidenceModel, ValueConcept
from ssm_loom.reporting import (
    SUMMARY_COLUMNS,
    NothingToRender,
    RowKind,
    band_extent,
    build_forest,
    format_conflict,
    format_difference,
    render_forest,
    render_summary,
    x_position,
)
from ssm_loom.scale import HypothesisSet

SVG = "{http://www.w3.org/2000/svg}"
CAUSE = ValueConcept("Model quantization", ConceptKind.CAUSE)
STAMP = "2000-01-01T00:00:00+00:00"


def record(name="Accuracy", intensity="WN", belief=0.90, conflict=0.41, difference=0.24, studies=5, models=17):
    return AggregationRecord(
        name, tuple(f"S{i}" for i in range(1, studies + 1)), models, HypothesisSet.of(intensity),
        belief, conflict, difference,
    )


def agg_of(*records, inputs=("M1",)):
    return AggregatedModel(CAUSE, (), tuple(records), tuple(inputs))


def one_model(mean, ci=None, name="Inference energy consumption"):
    stats = None if mean is None else EffectStatistics((mean,), mean, 0.0, ci or (mean, mean))
    h = HypothesisSet.of("SP")
    m = EvidenceModel("M1", "S1", CAUSE, (), (Effect(name, h, 0.37, 1 if stats else 0, stats),))
    rec = AggregationRecord(name, ("S1",), 1, h, 0.37, 0.0, 0.0, (("M1", name),))
    return m, agg_of(rec)


# summary table


def test_accuracy_row():
    text = render_summary(agg_of(record())).decode()
    row = " ".join(text.splitlines()[2].split())
    assert row == "Accuracy S1, S2, S3, S4, S5 5 17 WN 90% 0.41 24%"


def test_zero_conflict_dash():
    assert format_conflict(0.0) == "-"
    assert format_conflict(0.5) == "0.50"
    text = render_summary(agg_of(record("Storage size", "SP", 0.99, 0.0, 0.05))).decode()
    assert text.splitlines()[2].split()[-2] == "-"


@pytest.mark.parametrize("d, s", [(0.24, "24%"), (-0.17142857, "-17%"), (0.05, "5%"), (0.003, "0.3%"),
                                  (0.0, "0%"), (-0.0001, "0%"), (0.0996, "10%")])
def test_difference_format(d, s):
    assert format_difference(d) == s


def test_header_only_when_empty():
    text = render_summary(agg_of()).decode()
    assert len(text.splitlines()) == 2
    rows = list(csv.reader(io.StringIO(render_summary(agg_of(), "csv").decode())))
    assert rows == [list(SUMMARY_COLUMNS)]


def test_csv_summary():
    data = render_summary(agg_of(record()), "csv")
    assert data.endswith(b"\r\n")
    rows = list(csv.reader(io.StringIO(data.decode())))
    assert rows[1] == ["Accuracy", "S1, S2, S3, S4, S5", "5", "17", "WN", "90%", "0.41", "24%"]


# forest geometry


def test_affine_positions():
    assert x_position(0.0) == 650.0
    assert x_position(0.05) == pytest.approx(660.5, abs=1e-9)
    assert x_position(-0.5) == pytest.approx(545.0, abs=1e-9)
    assert x_position(3.0) == x_position(1.0)


def test_band_extents():
    assert band_extent(HypothesisSet.of("IF"), DEFAULT_THRESHOLDS) == (-0.05, 0.05)
    assert band_extent(HypothesisSet.of("PO", "SP"), DEFAULT_THRESHOLDS) == (0.2, 1.0)
    assert band_extent(HypothesisSet.of("SN"), DEFAULT_THRESHOLDS) == (-1.0, -0.5)


def test_aggregated_if_row():
    m, agg = one_model(0.01)
    rec = agg.records[0]
    agg = agg_of(AggregationRecord(rec.effect_name, rec.study_ids, 1, HypothesisSet.of("IF"), 0.37, 0.0, 0.0,
                                   rec.sources))
    doc = build_forest([m], agg, generated=STAMP)
    row = doc.groups[0].rows[-1]
    assert row.kind is RowKind.AGGREGATED
    assert row.mean == 0.0 and row.ci95 == (-0.05, 0.05)


def test_square_right_of_sp_rule():
    m, agg = one_model(0.5718)
    root = ET.fromstring(render_forest([m], agg, generated=STAMP))
    square = root.find(f".//{SVG}rect[@class='mean']")
    cx = float(square.get("x")) + 3.5
    assert cx == pytest.approx(770.08, abs=1e-9)
    sp_rule = root.find(f".//{SVG}line[@data-value='0.5']")
    assert cx > float(sp_rule.get("x1")) == 755.0


def test_missing_stats_marker():
    m, agg = one_model(None)
    svg = render_forest([m], agg, generated=STAMP).decode()
    assert "no raw data" in svg
    assert "no raw data" in render_forest([m], agg, format="text", generated=STAMP).decode()


def test_nothing_to_render():
    with pytest.raises(NothingToRender, match="nothing to render"):
        render_forest([], agg_of(record()))


def test_fixture_svg_well_formed(corpus, glossary, joins):
    agg = aggregate(corpus.models, glossary, joins)
    data = render_forest(corpus.models, agg, generated=STAMP)
    root = ET.fromstring(data)
    groups = root.findall(f".//{SVG}g[@class='effect']")
    assert len(groups) == 10
    assert len(root.findall(f".//{SVG}polygon[@class='aggregated-point']")) == 10
    zero = root.find(f".//{SVG}line[@id='zero-rule']")
    assert zero.get("x1") == "650.00"
    rules = {r.get("data-value"): float(r.get("x1")) for r in root.findall(f".//{SVG}line[@class='threshold']")}
    for v, x in rules.items():
        assert x == pytest.approx(650 + 210 * float(v), abs=1e-9)


def test_thresholds_in_output(corpus, glossary, joins):
    agg = aggregate(corpus.models, glossary, joins)
    t = IntensityThresholds(0.02, 0.1, 0.3)
    svg = render_forest(corpus.models, agg, t, generated=STAMP).decode()
    assert "thresholds=0.02,0.1,0.3" in svg
    assert 'data-value="0.3"' in svg


def test_pinned_stamp(monkeypatch, corpus, glossary, joins):
    monkeypatch.setenv("SSM_LOOM_SEED_METADATA", STAMP)
    agg = aggregate(corpus.models, glossary, joins)
    a = render_forest(corpus.models, agg)
    b = render_forest(corpus.models, agg)
    assert a == b and STAMP.encode() in a


def test_text_forest(corpus, glossary, joins):
    agg = aggregate(corpus.models, glossary, joins)
    text = render_forest(corpus.models, agg, format="text", generated=STAMP).decode()
    assert "Aggregated" in text
    with pytest.raises(ValueError):
        render_forest(corpus.models, agg, format="png")
