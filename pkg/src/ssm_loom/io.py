"""JSON documents for models, glossaries, join maps and run configuration.

Field names on disk are lowerCamelCase; see ``docs/schema.md``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .aggregation import AggregatedModel, AggregationRecord, Join, JoinMap
from .belief import Answer, EffectStatistics, IntensityThresholds, Question, StudyType
from .model import (
    ConceptKind,
    Effect,
    EvidenceModel,
    Glossary,
    GlossaryEntry,
    Relation,
    RelationKind,
    ValueConcept,
)
from .scale import hypothesis_from_notation

__all__ = [
    "ParseError",
    "StudyInfo",
    "Corpus",
    "read_json",
    "write_json",
    "dumps",
    "model_to_dict",
    "model_from_dict",
    "glossary_to_dict",
    "glossary_from_dict",
    "joins_to_dict",
    "joins_from_dict",
    "thresholds_to_dict",
    "thresholds_from_dict",
    "aggregated_to_dict",
    "aggregated_from_dict",
    "load_model",
    "load_glossary",
    "load_joins",
    "load_thresholds",
    "load_questions",
    "load_questionnaire",
    "load_corpus",
]


class ParseError(ValueError):
    """A document could not be read or does not match its schema."""

    def __init__(self, source: str | Path, message: str, line: int | None = None, column: int | None = None):
        where = str(source)
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.source = str(source)
        self.line = line
        self.column = column


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, exc.strerror or str(exc)) from None
    except UnicodeDecodeError as exc:
        raise ParseError(path, f"not UTF-8 ({exc.reason} at byte {exc.start})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, exc.lineno, exc.colno) from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def _parsed(path: str | Path, fn, doc):
    try:
        return fn(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        msg = f"missing field {exc.args[0]!r}" if isinstance(exc, KeyError) else str(exc)
        raise ParseError(path, msg) from None


# -- evidence models ---------------------------------------------------------


def _concept_to_dict(c: ValueConcept) -> dict:
    return {
        "name": c.name,
        "kind": c.kind.value,
        "relations": [{"kind": r.kind.value, "target": r.target} for r in c.relations],
    }


def _concept_from_dict(d: Mapping) -> ValueConcept:
    return ValueConcept(
        name=d["name"],
        kind=ConceptKind(d["kind"]),
        relations=tuple(Relation(RelationKind(r["kind"]), r["target"]) for r in d.get("relations", ())),
    )


def stats_to_dict(s: EffectStatistics) -> dict:
    return {
        "improvements": list(s.improvements),
        "mean": s.mean,
        "iqr": s.iqr,
        "ci95": list(s.ci95),
        "sampleCount": s.sample_count,
    }


def stats_from_dict(d: Mapping) -> EffectStatistics:
    improvements = tuple(float(v) for v in d["improvements"])
    if "sampleCount" in d and int(d["sampleCount"]) != len(improvements):
        raise ValueError(f"stats sampleCount {d['sampleCount']} does not match {len(improvements)} improvements")
    if "mean" not in d:
        return EffectStatistics.from_improvements(improvements)
    lo, hi = d["ci95"]
    return EffectStatistics(improvements, float(d["mean"]), float(d["iqr"]), (float(lo), float(hi)))


def _effect_to_dict(e: Effect) -> dict:
    out: dict[str, Any] = {
        "name": e.name,
        "hypothesis": e.hypothesis.notation(),
        "belief": e.belief,
        "sampleCount": e.sample_count,
        "stats": None if e.stats is None else stats_to_dict(e.stats),
    }
    if e.synthetic:
        out["synthetic"] = True
    return out


def _effect_from_dict(d: Mapping) -> Effect:
    stats = d.get("stats")
    return Effect(
        name=d["name"],
        hypothesis=hypothesis_from_notation(d["hypothesis"]),
        belief=float(d["belief"]),
        sample_count=int(d.get("sampleCount", 0)),
        stats=None if stats is None else stats_from_dict(stats),
        synthetic=bool(d.get("synthetic", False)),
    )


def model_to_dict(m: EvidenceModel) -> dict:
    out = {
        "id": m.id,
        "studyId": m.study_id,
        "cause": _concept_to_dict(m.cause),
        "context": [_concept_to_dict(c) for c in m.context],
        "effects": [_effect_to_dict(e) for e in m.effects],
        "provenance": m.provenance,
    }
    if m.metadata:
        out["metadata"] = dict(m.metadata)
    return out


def model_from_dict(d: Mapping) -> EvidenceModel:
    return EvidenceModel(
        id=d["id"],
        study_id=d["studyId"],
        cause=_concept_from_dict(d["cause"]),
        context=tuple(_concept_from_dict(c) for c in d.get("context", ())),
        effects=tuple(_effect_from_dict(e) for e in d.get("effects", ())),
        provenance=d.get("provenance", ""),
        metadata=d.get("metadata", {}),
    )


def load_model(path: str | Path) -> EvidenceModel:
    return _parsed(path, model_from_dict, read_json(path))


# -- glossary, joins, thresholds --------------------------------------------


def glossary_to_dict(g: Glossary) -> dict:
    return {
        "entries": {
            term: {"definition": e.definition, "synonyms": list(e.synonyms)} for term, e in g.entries.items()
        }
    }


def glossary_from_dict(d: Mapping) -> Glossary:
    return Glossary(
        {
            term: GlossaryEntry(e["definition"], tuple(e.get("synonyms", ())))
            for term, e in d["entries"].items()
        }
    )


def load_glossary(path: str | Path) -> Glossary:
    return _parsed(path, glossary_from_dict, read_json(path))


def joins_to_dict(j: JoinMap) -> dict:
    return {
        "joins": [{"canonicalName": x.canonical_name, "members": list(x.members)} for x in j.joins],
        "drops": list(j.drops),
        "keepUnmerged": list(j.keep_unmerged),
    }


def joins_from_dict(d: Mapping) -> JoinMap:
    return JoinMap(
        joins=tuple(Join(x["canonicalName"], tuple(x["members"])) for x in d.get("joins", ())),
        drops=tuple(d.get("drops", ())),
        keep_unmerged=tuple(d.get("keepUnmerged", ())),
    )


def load_joins(path: str | Path) -> JoinMap:
    return _parsed(path, joins_from_dict, read_json(path))


def thresholds_to_dict(t: IntensityThresholds) -> dict:
    return {"tIndifferent": t.t_indifferent, "tWeak": t.t_weak, "tModerate": t.t_moderate}


def thresholds_from_dict(d: Mapping) -> IntensityThresholds:
    base = IntensityThresholds()
    return IntensityThresholds(
        float(d.get("tIndifferent", base.t_indifferent)),
        float(d.get("tWeak", base.t_weak)),
        float(d.get("tModerate", base.t_moderate)),
    )


def load_thresholds(path: str | Path) -> IntensityThresholds:
    return _parsed(path, thresholds_from_dict, read_json(path))


# -- questionnaires ----------------------------------------------------------


def _questions_from_dict(d: Mapping) -> tuple[Question, ...]:
    return tuple(Question(q["id"], q.get("text", ""), float(q.get("weight", 1.0))) for q in d["questions"])


def load_questions(path) -> tuple[Question, ...]:
    """Question list of a questionnaire document (answers, if any, ignored)."""
    if isinstance(path, (str, Path)):
        return _parsed(path, _questions_from_dict, read_json(path))
    # importlib.resources traversable
    return _questions_from_dict(json.loads(path.read_text(encoding="utf-8")))


def load_questionnaire(path: str | Path) -> tuple[tuple[Question, ...], dict[str, dict[str, Answer]]]:
    """Questions plus per-study answers: ``{"answers": {studyId: {qid: answer}}}``."""

    def parse(d: Mapping):
        questions = _questions_from_dict(d)
        answers = {
            sid: {qid: Answer(a) for qid, a in by_q.items()} for sid, by_q in d.get("answers", {}).items()
        }
        return questions, answers

    return _parsed(path, parse, read_json(path))


# -- aggregated models -------------------------------------------------------


def _record_to_dict(r: AggregationRecord) -> dict:
    return {
        "effectName": r.effect_name,
        "studyIds": list(r.study_ids),
        "modelCount": r.model_count,
        "sources": [{"modelId": mid, "effect": name} for mid, name in r.sources],
        "intensity": r.intensity.notation(),
        "belief": r.belief,
        "conflict": r.conflict,
        "difference": r.difference,
    }


def _record_from_dict(d: Mapping) -> AggregationRecord:
    return AggregationRecord(
        effect_name=d["effectName"],
        study_ids=tuple(d["studyIds"]),
        model_count=int(d["modelCount"]),
        intensity=hypothesis_from_notation(d["intensity"]),
        belief=float(d["belief"]),
        conflict=float(d["conflict"]),
        difference=float(d["difference"]),
        sources=tuple((x["modelId"], x["effect"]) for x in d.get("sources", ())),
    )


def aggregated_to_dict(a: AggregatedModel) -> dict:
    out = {
        "cause": _concept_to_dict(a.cause),
        "context": [_concept_to_dict(c) for c in a.context],
        "unmerged": list(a.unmerged),
        "records": [_record_to_dict(r) for r in a.records],
        "inputs": list(a.inputs),
    }
    if a.group is not None:
        out["group"] = a.group
    return out


def aggregated_from_dict(d: Mapping) -> AggregatedModel:
    return AggregatedModel(
        cause=_concept_from_dict(d["cause"]),
        context=tuple(_concept_from_dict(c) for c in d.get("context", ())),
        records=tuple(_record_from_dict(r) for r in d["records"]),
        inputs=tuple(d["inputs"]),
        unmerged=tuple(d.get("unmerged", ())),
        group=d.get("group"),
    )


# -- corpus ------------------------------------------------------------------


@dataclass(frozen=True)
class StudyInfo:
    """Per-study metadata; ``data_quality`` is descriptive only."""

    id: str
    study_type: StudyType
    primary_belief: float | None = None
    theoretical_structures: int | None = None
    year: int | None = None
    data_quality: str = ""
    citation: str = ""


def _study_from_dict(d: Mapping) -> StudyInfo:
    return StudyInfo(
        id=d["id"],
        study_type=StudyType(d["studyType"]),
        primary_belief=None if d.get("primaryBelief") is None else float(d["primaryBelief"]),
        theoretical_structures=d.get("theoreticalStructures"),
        year=d.get("year"),
        data_quality=d.get("dataQuality", ""),
        citation=d.get("citation", ""),
    )


def study_to_dict(s: StudyInfo) -> dict:
    return {
        "id": s.id,
        "studyType": s.study_type.value,
        "primaryBelief": s.primary_belief,
        "theoreticalStructures": s.theoretical_structures,
        "year": s.year,
        "dataQuality": s.data_quality,
        "citation": s.citation,
    }


@dataclass(frozen=True)
class Corpus:
    models: tuple[EvidenceModel, ...]
    studies: Mapping[str, StudyInfo] = field(default_factory=dict)
    root: Path | None = None


def load_corpus(root: str | Path) -> Corpus:
    """Read ``<root>/studies.json`` (optional) and every ``<root>/models/*.json``.

    Models are returned sorted by id; duplicate ids are a parse error.
    """
    root = Path(root)
    if not root.is_dir():
        raise ParseError(root, "corpus directory does not exist")
    studies: dict[str, StudyInfo] = {}
    studies_path = root / "studies.json"
    if studies_path.exists():
        doc = read_json(studies_path)
        for s in _parsed(studies_path, lambda d: [_study_from_dict(x) for x in d["studies"]], doc):
            studies[s.id] = s
    model_dir = root / "models"
    paths: Iterable[Path] = sorted(model_dir.glob("*.json")) if model_dir.is_dir() else ()
    models: dict[str, EvidenceModel] = {}
    for p in paths:
        m = load_model(p)
        if m.id in models:
            raise ParseError(p, f"duplicate model id {m.id!r}")
        models[m.id] = m
    return Corpus(tuple(models[k] for k in sorted(models)), studies, root)
