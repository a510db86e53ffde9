"""Evidence models, the concept glossary, and structural validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping, NamedTuple

from .belief import EffectStatistics
from .scale import HypothesisSet

__all__ = [
    "ConceptKind",
    "RelationKind",
    "Relation",
    "ValueConcept",
    "Effect",
    "EvidenceModel",
    "GlossaryEntry",
    "Glossary",
    "NormalizedTerm",
    "Violation",
    "ValidationReport",
    "normalize_term",
    "validate_model",
]


class ConceptKind(str, Enum):
    ARCHETYPE = "archetype"
    CAUSE = "cause"
    CONTEXTUAL_ASPECT = "contextual-aspect"


class RelationKind(str, Enum):
    IS_A = "is-a"
    PART_OF = "part-of"
    PROPERTY_OF = "property-of"


@dataclass(frozen=True)
class Relation:
    kind: RelationKind
    target: str


@dataclass(frozen=True)
class ValueConcept:
    name: str
    kind: ConceptKind
    relations: tuple[Relation, ...] = ()


@dataclass(frozen=True)
class Effect:
    """A variable concept influenced by the cause.

    ``synthetic`` marks effects whose numbers were made up for the fixture
    corpus rather than read from a primary study.
    """

    name: str
    hypothesis: HypothesisSet
    belief: float
    sample_count: int = 0
    stats: EffectStatistics | None = None
    synthetic: bool = False


@dataclass(frozen=True)
class EvidenceModel:
    """One theoretical structure extracted from a primary study."""

    id: str
    study_id: str
    cause: ValueConcept
    context: tuple[ValueConcept, ...] = ()
    effects: tuple[Effect, ...] = ()
    provenance: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    @property
    def concepts(self) -> tuple[ValueConcept, ...]:
        return (self.cause, *self.context)

    def effect(self, name: str) -> Effect:
        for e in self.effects:
            if e.name == name:
                return e
        raise KeyError(name)


@dataclass(frozen=True)
class GlossaryEntry:
    definition: str
    synonyms: tuple[str, ...] = ()


def _key(term: str) -> str:
    return " ".join(term.split()).casefold()


class NormalizedTerm(NamedTuple):
    term: str
    glossed: bool


class Glossary:
    """Canonical terms with definitions and accepted synonyms.

    Lookup is case-insensitive and ignores surrounding/repeated whitespace.
    Raises ``ValueError`` if a definition is empty or a synonym is claimed by
    two canonical terms.
    """

    def __init__(self, entries: Mapping[str, GlossaryEntry]):
        self._entries = MappingProxyType(dict(entries))
        lookup: dict[str, str] = {}
        for term, entry in self._entries.items():
            if not entry.definition.strip():
                raise ValueError(f"glossary term {term!r} has an empty definition")
            k = _key(term)
            if k in lookup and lookup[k] != term:
                raise ValueError(f"glossary term {term!r} collides with {lookup[k]!r}")
            lookup[k] = term
        for term, entry in self._entries.items():
            for syn in entry.synonyms:
                k = _key(syn)
                owner = lookup.get(k)
                if owner is not None and owner != term:
                    raise ValueError(f"synonym {syn!r} of {term!r} already belongs to {owner!r}")
                lookup[k] = term
        self._lookup = lookup

    @property
    def entries(self) -> Mapping[str, GlossaryEntry]:
        return self._entries

    def canonical(self, raw: str) -> str | None:
        return self._lookup.get(_key(raw))

    def __contains__(self, raw: object) -> bool:
        return isinstance(raw, str) and _key(raw) in self._lookup

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Glossary):
            return dict(self._entries) == dict(other._entries)
        return NotImplemented


def normalize_term(raw: str, glossary: Glossary) -> NormalizedTerm:
    """Map ``raw`` onto its canonical glossary term.

    Unknown terms come back unchanged with ``glossed=False``.
    """
    canon = glossary.canonical(raw)
    if canon is None:
        return NormalizedTerm(raw, False)
    return NormalizedTerm(canon, True)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    model_id: str
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


def _find_cycle(edges: Mapping[str, list[str]]) -> list[str] | None:
    white, grey, black = 0, 1, 2
    color = {n: white for n in edges}
    stack: list[str] = []

    def visit(n: str) -> list[str] | None:
        color[n] = grey
        stack.append(n)
        for t in edges.get(n, ()):
            c = color.get(t, white)
            if c == grey:
                return stack[stack.index(t):] + [t]
            if c == white and t in edges:
                found = visit(t)
                if found:
                    return found
        stack.pop()
        color[n] = black
        return None

    for n in sorted(edges):
        if color[n] == white:
            found = visit(n)
            if found:
                return found
    return None


def validate_model(model: EvidenceModel, glossary: Glossary) -> ValidationReport:
    """Check the structural rules of an evidence model.

    Violations are returned as data; nothing is raised and the model is not
    touched.
    """
    out: list[Violation] = []

    def add(code: str, message: str) -> None:
        out.append(Violation(code, message))

    concepts = model.concepts
    causes = [c for c in concepts if c.kind is ConceptKind.CAUSE]
    if len(causes) > 1:
        add("multiple causes", "more than one cause concept: " + ", ".join(c.name for c in causes))
    elif not causes:
        add("missing cause", f"cause concept {model.cause.name!r} is not of kind 'cause'")

    names = [c.name for c in concepts]
    seen: set[str] = set()
    for n in names:
        if n in seen:
            add("duplicate concept", f"concept {n!r} appears more than once")
        seen.add(n)

    edges: dict[str, list[str]] = {n: [] for n in names}
    for c in concepts:
        for r in c.relations:
            if r.target not in seen:
                add("dangling relation", f"{c.name!r} {r.kind.value} {r.target!r}: target not in model")
            elif r.kind in (RelationKind.IS_A, RelationKind.PART_OF):
                edges[c.name].append(r.target)
    cycle = _find_cycle(edges)
    if cycle:
        add("cycle in structural relations", " -> ".join(cycle))

    effect_names: set[str] = set()
    for e in model.effects:
        if e.name in effect_names:
            add("duplicate effect", f"effect {e.name!r} appears more than once")
        effect_names.add(e.name)
        if not 0.0 <= e.belief <= 1.0:
            add("belief out of range", f"effect {e.name!r} has belief {e.belief!r}")
        if e.stats is not None:
            if e.sample_count < 1:
                add("missing sample count", f"effect {e.name!r} has statistics but sampleCount {e.sample_count}")
            elif e.sample_count != e.stats.sample_count:
                add("sample count mismatch",
                    f"effect {e.name!r}: sampleCount {e.sample_count} vs {e.stats.sample_count} improvements")
            if not e.stats.is_consistent():
                add("inconsistent statistics", f"effect {e.name!r}: summary does not match improvements")
        elif e.sample_count < 0:
            add("negative sample count", f"effect {e.name!r} has sampleCount {e.sample_count}")

    for n in [*names, *(e.name for e in model.effects)]:
        if n not in glossary:
            add("unglossed term", f"{n!r} is not in the glossary")

    return ValidationReport(model.id, tuple(out))
