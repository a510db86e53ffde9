"""Compatibility checks, concept joins and per-effect DST pooling."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .dst import SimpleSupport, TotalConflictError, combine_all, decide_intensity, from_simple_support
from .model import ConceptKind, Effect, EvidenceModel, Glossary, Relation, ValueConcept, normalize_term
from .scale import HypothesisSet

__all__ = [
    "Join",
    "JoinMap",
    "Verdict",
    "CompatibilityReport",
    "AggregationRecord",
    "AggregatedModel",
    "IncompatibleModelsError",
    "check_compatibility",
    "pool_effect",
    "aggregate",
    "aggregate_by",
]

UNGROUPED = "(unspecified)"


def _key(name: str) -> str:
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class Join:
    canonical_name: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class JoinMap:
    """Researcher decisions about concepts that do not line up across models.

    ``joins`` merge differently named concepts under one name, ``drops``
    exclude concepts (or effects) from aggregation, and ``keep_unmerged``
    carries single-model concepts into the aggregated context without
    merging them.  A name may appear in only one of the three.
    """

    joins: tuple[Join, ...] = ()
    drops: tuple[str, ...] = ()
    keep_unmerged: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        owner: dict[str, str] = {}

        def claim(name: str, where: str) -> None:
            k = _key(name)
            if k in owner:
                raise ValueError(f"concept {name!r} appears in both {owner[k]} and {where}")
            owner[k] = where

        for j in self.joins:
            for m in j.members:
                claim(m, f"join {j.canonical_name!r}")
        for d in self.drops:
            claim(d, "drops")
        for k in self.keep_unmerged:
            claim(k, "keepUnmerged")

    def target(self, name: str) -> str | None:
        k = _key(name)
        for j in self.joins:
            if any(_key(m) == k for m in j.members):
                return j.canonical_name
        return None

    def is_dropped(self, name: str) -> bool:
        k = _key(name)
        return any(_key(d) == k for d in self.drops)

    def is_kept_unmerged(self, name: str) -> bool:
        k = _key(name)
        return any(_key(d) == k for d in self.keep_unmerged)


EMPTY_JOINS = JoinMap()


class _Resolver:
    """Glossary normalization followed by the join map."""

    def __init__(self, glossary: Glossary, joins: JoinMap):
        self.glossary = glossary
        self.joins = joins

    def __call__(self, raw: str) -> tuple[str, bool]:
        """Return the resolved name and whether a join was needed to get there."""
        canon = normalize_term(raw, self.glossary).term
        for candidate in (raw, canon):
            target = self.joins.target(candidate)
            if target is not None:
                return normalize_term(target, self.glossary).term, True
        return canon, False

    def dropped(self, raw: str) -> bool:
        return self.joins.is_dropped(raw) or self.joins.is_dropped(self(raw)[0])

    def kept_unmerged(self, raw: str) -> bool:
        return self.joins.is_kept_unmerged(raw) or self.joins.is_kept_unmerged(self(raw)[0])


class Verdict(str, Enum):
    COMPATIBLE = "compatible"
    COMPATIBLE_AFTER_JOIN = "compatible-after-join"
    INCOMPATIBLE = "incompatible"


@dataclass(frozen=True)
class CompatibilityReport:
    pair: tuple[str, str]
    verdict: Verdict
    matched_concepts: tuple[str, ...] = ()
    joined_concepts: tuple[str, ...] = ()
    unmatched_concepts: tuple[str, ...] = ()

    def describe(self) -> str:
        a, b = self.pair
        lines = [f"{a} vs {b}: {self.verdict.value}"]
        for label, names in (
            ("matched", self.matched_concepts),
            ("joined", self.joined_concepts),
            ("unmatched", self.unmatched_concepts),
        ):
            if names:
                lines.append(f"  {label}: {', '.join(names)}")
        return "\n".join(lines)


def _resolved_context(model: EvidenceModel, resolve: _Resolver) -> dict[str, bool]:
    out: dict[str, bool] = {}
    for c in model.context:
        if resolve.dropped(c.name):
            continue
        name, joined = resolve(c.name)
        out[name] = out.get(name, False) or joined
    return out


def check_compatibility(
    a: EvidenceModel,
    b: EvidenceModel,
    glossary: Glossary,
    joins: JoinMap = EMPTY_JOINS,
) -> CompatibilityReport:
    """Pairwise compatibility of two evidence models.

    Only the causes decide the verdict.  Contextual concepts that exist in
    just one model are listed as unmatched; they can be kept unmerged or
    dropped later and never block aggregation.
    """
    resolve = _Resolver(glossary, joins)
    cause_a, joined_a = resolve(a.cause.name)
    cause_b, joined_b = resolve(b.cause.name)
    ctx_a = _resolved_context(a, resolve)
    ctx_b = _resolved_context(b, resolve)

    matched, joined = [], []
    if cause_a == cause_b:
        (joined if joined_a or joined_b else matched).append(cause_a)
    for name in sorted(set(ctx_a) & set(ctx_b)):
        (joined if ctx_a[name] or ctx_b[name] else matched).append(name)
    unmatched = sorted(set(ctx_a) ^ set(ctx_b))
    if cause_a != cause_b:
        unmatched = sorted({cause_a, cause_b, *unmatched})
        verdict = Verdict.INCOMPATIBLE
    elif joined:
        verdict = Verdict.COMPATIBLE_AFTER_JOIN
    else:
        verdict = Verdict.COMPATIBLE
    return CompatibilityReport((a.id, b.id), verdict, tuple(matched), tuple(joined), tuple(unmatched))


@dataclass(frozen=True)
class AggregationRecord:
    effect_name: str
    study_ids: tuple[str, ...]
    model_count: int
    intensity: HypothesisSet
    belief: float
    conflict: float
    difference: float
    # (model id, effect name as written in that model)
    sources: tuple[tuple[str, str], ...] = ()

    @property
    def study_count(self) -> int:
        return len(self.study_ids)

    @property
    def model_ids(self) -> tuple[str, ...]:
        return tuple(mid for mid, _ in self.sources)


@dataclass(frozen=True)
class AggregatedModel:
    """Result of synthesizing compatible evidence models.

    ``context`` holds concepts shared by at least two inputs (after joins),
    or every concept when there is a single input.  ``unmerged`` lists
    single-model concepts carried along because the join map keeps them.
    """

    cause: ValueConcept
    context: tuple[ValueConcept, ...]
    records: tuple[AggregationRecord, ...]
    inputs: tuple[str, ...]
    unmerged: tuple[str, ...] = ()
    group: str | None = None

    def record(self, effect_name: str) -> AggregationRecord:
        for r in self.records:
            if r.effect_name == effect_name:
                return r
        raise KeyError(effect_name)


class IncompatibleModelsError(ValueError):
    def __init__(self, report: CompatibilityReport):
        super().__init__(f"models {report.pair[0]} and {report.pair[1]} have incompatible causes")
        self.report = report


def pool_effect(
    effect_name: str,
    inputs: Sequence[tuple[Effect, str]],
    study_ids: Mapping[str, str] | None = None,
) -> AggregationRecord:
    """Combine one effect's evidence across models with Dempster's rule.

    Each input ``(effect, model_id)`` becomes a simple support function on its
    hypothesis with mass equal to its belief.  ``study_ids`` maps model ids to
    study ids for the record (model ids are used when absent).
    """
    if not inputs:
        raise ValueError(f"no evidence to pool for {effect_name!r}")
    masses = [from_simple_support(SimpleSupport(e.hypothesis, e.belief)) for e, _ in inputs]
    model_ids = tuple(mid for _, mid in inputs)
    try:
        result = combine_all(masses)
    except TotalConflictError as exc:
        raise TotalConflictError(
            f"total conflict pooling {effect_name!r} from models {', '.join(model_ids)}", model_ids
        ) from exc
    intensity, belief = decide_intensity(result.combined)
    peak = max(e.belief for e, _ in inputs)
    studies = sorted({(study_ids or {}).get(mid, mid) for mid in model_ids})
    return AggregationRecord(
        effect_name=effect_name,
        study_ids=tuple(studies),
        model_count=len(inputs),
        intensity=intensity,
        belief=belief,
        conflict=result.conflict,
        difference=belief - peak,
        sources=tuple(sorted((mid, e.name) for e, mid in inputs)),
    )


def aggregate(
    models: Iterable[EvidenceModel],
    glossary: Glossary,
    joins: JoinMap = EMPTY_JOINS,
    group: str | None = None,
) -> AggregatedModel:
    """Synthesize evidence models into one aggregated model.

    Every pair must share a cause (after normalization and joins), otherwise
    :class:`IncompatibleModelsError` names the first offending pair.  Effects
    are grouped by resolved name, pooled independently, and returned sorted by
    effect name.
    """
    models = sorted(models, key=lambda m: m.id)
    if not models:
        raise ValueError("no models to aggregate")
    for a, b in itertools.combinations(models, 2):
        report = check_compatibility(a, b, glossary, joins)
        if report.verdict is Verdict.INCOMPATIBLE:
            raise IncompatibleModelsError(report)

    resolve = _Resolver(glossary, joins)
    study_of = {m.id: m.study_id for m in models}

    groups: dict[str, list[tuple[Effect, str]]] = defaultdict(list)
    for m in models:
        for e in m.effects:
            if resolve.dropped(e.name):
                continue
            groups[resolve(e.name)[0]].append((e, m.id))
    records = tuple(pool_effect(name, groups[name], study_of) for name in sorted(groups))

    seen: dict[str, set[str]] = defaultdict(set)
    first: dict[str, ValueConcept] = {}
    for m in models:
        for c in m.context:
            if resolve.dropped(c.name):
                continue
            name = resolve(c.name)[0]
            seen[name].add(m.id)
            first.setdefault(name, c)
    context, unmerged = [], []
    for name in sorted(seen):
        if len(models) == 1 or len(seen[name]) > 1:
            c = first[name]
            relations = tuple(Relation(r.kind, resolve(r.target)[0]) for r in c.relations)
            context.append(ValueConcept(name, c.kind, relations))
        elif resolve.kept_unmerged(name) or resolve.kept_unmerged(first[name].name):
            unmerged.append(name)

    cause_name = resolve(models[0].cause.name)[0]
    return AggregatedModel(
        cause=ValueConcept(cause_name, ConceptKind.CAUSE),
        context=tuple(context),
        records=records,
        inputs=tuple(m.id for m in models),
        unmerged=tuple(unmerged),
        group=group,
    )


def aggregate_by(
    models: Iterable[EvidenceModel],
    key: str,
    glossary: Glossary,
    joins: JoinMap = EMPTY_JOINS,
) -> dict[str, AggregatedModel]:
    """One aggregated model per distinct ``metadata[key]`` value.

    Models without the key land in the ``"(unspecified)"`` group.
    """
    buckets: dict[str, list[EvidenceModel]] = defaultdict(list)
    for m in models:
        buckets[str(m.metadata.get(key, UNGROUPED))].append(m)
    return {g: aggregate(buckets[g], glossary, joins, group=g) for g in sorted(buckets)}
