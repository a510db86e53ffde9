"""From raw measurements and study quality to effect hypotheses and beliefs."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .scale import HypothesisSet, Intensity

__all__ = [
    "Polarity",
    "MeasurementSeries",
    "EffectStatistics",
    "IntensityThresholds",
    "DEFAULT_THRESHOLDS",
    "StudyType",
    "Answer",
    "Question",
    "QualityQuestionnaire",
    "BeliefAssessment",
    "relative_improvements",
    "intensity_band",
    "intensity_from_stats",
    "base_belief",
    "dispersion_discount",
    "final_belief",
    "assess",
    "read_series_csv",
]

Z95 = 1.96


class Polarity(str, Enum):
    HIGHER_IS_BETTER = "higher-is-better"
    LOWER_IS_BETTER = "lower-is-better"

    def flipped(self) -> "Polarity":
        if self is Polarity.HIGHER_IS_BETTER:
            return Polarity.LOWER_IS_BETTER
        return Polarity.HIGHER_IS_BETTER


@dataclass(frozen=True)
class MeasurementSeries:
    """Baseline/treated metric pairs, one per configuration of a study."""

    effect_name: str
    polarity: Polarity
    pairs: tuple[tuple[float, float], ...]
    units: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "polarity", Polarity(self.polarity))
        object.__setattr__(self, "pairs", tuple((float(b), float(t)) for b, t in self.pairs))
        if not self.pairs:
            raise ValueError(f"series {self.effect_name!r} has no measurement pairs")


@dataclass(frozen=True)
class EffectStatistics:
    improvements: tuple[float, ...]
    mean: float
    iqr: float
    ci95: tuple[float, float]

    @property
    def sample_count(self) -> int:
        return len(self.improvements)

    @classmethod
    def from_improvements(cls, improvements: Iterable[float]) -> "EffectStatistics":
        """Summarize relative improvements.

        IQR uses linearly interpolated quartiles (R type 7); the 95% interval
        is the normal approximation ``mean +/- 1.96 s / sqrt(n)`` and collapses
        to the mean when n = 1.
        """
        x = np.asarray(tuple(float(v) for v in improvements), dtype=float)
        if x.size == 0:
            raise ValueError("no improvements to summarize")
        mean = math.fsum(x) / x.size
        q1, q3 = np.percentile(x, [25.0, 75.0], method="linear")
        if x.size > 1:
            half = Z95 * float(np.std(x, ddof=1)) / math.sqrt(x.size)
        else:
            half = 0.0
        return cls(tuple(x.tolist()), mean, float(q3 - q1), (mean - half, mean + half))

    def is_consistent(self, tol: float = 1e-9) -> bool:
        ref = EffectStatistics.from_improvements(self.improvements)
        return (
            abs(ref.mean - self.mean) <= tol
            and abs(ref.iqr - self.iqr) <= tol
            and all(abs(a - b) <= tol for a, b in zip(ref.ci95, self.ci95))
        )

    def negated(self) -> "EffectStatistics":
        return EffectStatistics(
            tuple(-v for v in self.improvements), -self.mean, self.iqr, (-self.ci95[1], -self.ci95[0])
        )


def relative_improvements(series: MeasurementSeries) -> EffectStatistics:
    """Polarity-adjusted fractional change per pair, then summarized.

    ``+0.10`` means the treated value is 10% better than its baseline.
    """
    out = []
    for i, (base, treated) in enumerate(series.pairs):
        if base == 0.0:
            raise ValueError(f"series {series.effect_name!r}: pair {i} ({base}, {treated}) has a zero baseline")
        if series.polarity is Polarity.HIGHER_IS_BETTER:
            out.append((treated - base) / abs(base))
        else:
            out.append((base - treated) / abs(base))
    return EffectStatistics.from_improvements(out)


@dataclass(frozen=True)
class IntensityThresholds:
    """Band edges for |mean improvement|, symmetric around zero.

    Below ``t_indifferent`` is IF; up to ``t_weak`` weak; up to
    ``t_moderate`` moderate (PO/NE); anything above is strong.
    """

    t_indifferent: float = 0.05
    t_weak: float = 0.20
    t_moderate: float = 0.50

    def __post_init__(self) -> None:
        if not 0.0 < self.t_indifferent < self.t_weak < self.t_moderate:
            raise ValueError(
                "thresholds must satisfy 0 < tIndifferent < tWeak < tModerate, got "
                f"{self.t_indifferent}, {self.t_weak}, {self.t_moderate}"
            )

    def band_edges(self, point: Intensity) -> tuple[float, float]:
        """Improvement interval covered by a scale point; strong bands stop at +/-1."""
        ti, tw, tm = self.t_indifferent, self.t_weak, self.t_moderate
        upper = {Intensity.IF: (-ti, ti), Intensity.WP: (ti, tw), Intensity.PO: (tw, tm), Intensity.SP: (tm, 1.0)}
        if point >= Intensity.IF:
            return upper[point]
        lo, hi = upper[point.mirrored()]
        return (-hi, -lo)


DEFAULT_THRESHOLDS = IntensityThresholds()


def intensity_band(value: float, thresholds: IntensityThresholds = DEFAULT_THRESHOLDS) -> Intensity:
    mag = abs(value)
    if mag < thresholds.t_indifferent:
        level = 0
    elif mag < thresholds.t_weak:
        level = 1
    elif mag < thresholds.t_moderate:
        level = 2
    else:
        level = 3
    return Intensity(3 + level if value > 0 else 3 - level)


def intensity_from_stats(stats: EffectStatistics, thresholds: IntensityThresholds = DEFAULT_THRESHOLDS) -> HypothesisSet:
    """Intensity of the mean; widened to every band the 95% CI touches.

    With a tight interval this is a singleton; an interval straddling one
    band edge gives a two-point range such as ``{PO,SP}``.
    """
    centre = intensity_band(stats.mean, thresholds)
    low = min(centre, intensity_band(stats.ci95[0], thresholds))
    high = max(centre, intensity_band(stats.ci95[1], thresholds))
    return HypothesisSet.span(low, high)


class StudyType(str, Enum):
    UNSYSTEMATIC = "unsystematic"
    OBSERVATIONAL = "observational"
    QUASI_EXPERIMENT = "quasi-experiment"
    RANDOMIZED_CONTROLLED_TRIAL = "randomized-controlled-trial"

    @property
    def belief_range(self) -> tuple[float, float]:
        return _GRADE[self]


_GRADE = {
    StudyType.UNSYSTEMATIC: (0.0, 0.25),
    StudyType.OBSERVATIONAL: (0.25, 0.50),
    StudyType.QUASI_EXPERIMENT: (0.50, 0.75),
    StudyType.RANDOMIZED_CONTROLLED_TRIAL: (0.75, 1.00),
}


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not self.weight > 0:
            raise ValueError(f"question {self.id!r} needs a positive weight")


@dataclass(frozen=True)
class QualityQuestionnaire:
    """A weighted yes/no/not-applicable checklist answered for one study."""

    questions: tuple[Question, ...]
    answers: Mapping[str, Answer] = field(default_factory=dict)

    def __post_init__(self) -> None:
        answers = {k: Answer(v) for k, v in dict(self.answers).items()}
        ids = [q.id for q in self.questions]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate question ids")
        unknown = sorted(set(answers) - set(ids))
        if unknown:
            raise ValueError(f"answers for unknown questions: {', '.join(unknown)}")
        missing = [i for i in ids if i not in answers]
        if missing:
            raise ValueError(f"unanswered questions: {', '.join(missing)}")
        object.__setattr__(self, "answers", MappingProxyType(answers))

    def with_answers(self, answers: Mapping[str, Answer | str]) -> "QualityQuestionnaire":
        return QualityQuestionnaire(self.questions, {k: Answer(v) for k, v in answers.items()})

    @property
    def score(self) -> float:
        """Weighted share of "yes" among applicable questions (0 if none apply)."""
        yes = math.fsum(q.weight for q in self.questions if self.answers[q.id] is Answer.YES)
        applicable = math.fsum(q.weight for q in self.questions if self.answers[q.id] is not Answer.NOT_APPLICABLE)
        if applicable == 0.0:
            return 0.0
        return yes / applicable


def base_belief(study_type: StudyType | str, quality: QualityQuestionnaire | float) -> float:
    """GRADE sub-range lower bound plus a quarter of the quality score.

    ``quality`` may be a questionnaire or an already computed score in [0, 1].
    """
    study_type = StudyType(study_type)
    score = quality.score if isinstance(quality, QualityQuestionnaire) else float(quality)
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"quality score must be in [0, 1], got {score!r}")
    lo, _ = study_type.belief_range
    return lo + 0.25 * score


def dispersion_discount(stats: EffectStatistics) -> float:
    """``1 - exp(-0.1 * |IQR / mean|)``.

    A zero mean gives 0 when the IQR is also zero and 1 otherwise (the limit).
    """
    if stats.iqr == 0.0:
        return 0.0
    if stats.mean == 0.0:
        return 1.0
    return -math.expm1(-0.1 * abs(stats.iqr / stats.mean))


def final_belief(base: float, discount: float) -> float:
    return base * (1.0 - discount)


@dataclass(frozen=True)
class BeliefAssessment:
    study_type: StudyType
    quality_score: float
    base_belief: float
    discount: float
    final_belief: float

    def __post_init__(self) -> None:
        lo, hi = StudyType(self.study_type).belief_range
        if not lo <= self.base_belief <= hi:
            raise ValueError(f"base belief {self.base_belief} outside {self.study_type.value} range [{lo}, {hi}]")
        if abs(self.final_belief - self.base_belief * (1.0 - self.discount)) > 1e-12:
            raise ValueError("final belief must equal base_belief * (1 - discount)")


def assess(
    study_type: StudyType | str,
    quality: QualityQuestionnaire | float,
    stats: EffectStatistics | None,
) -> BeliefAssessment:
    """Belief for one effect of one study.

    ``stats=None`` is accepted for studies that only report summary numbers;
    no dispersion is known, so no discount is applied.
    """
    study_type = StudyType(study_type)
    score = quality.score if isinstance(quality, QualityQuestionnaire) else float(quality)
    base = base_belief(study_type, score)
    discount = 0.0 if stats is None else dispersion_discount(stats)
    return BeliefAssessment(study_type, score, base, discount, final_belief(base, discount))


def read_series_csv(
    path: str | Path,
    effect_name: str,
    polarity: Polarity | str,
    units: str = "",
) -> MeasurementSeries:
    """Load a ``baseline,treated`` CSV file (header row required)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["baseline", "treated"]:
            raise ValueError(f"{path}: expected header 'baseline,treated', got {reader.fieldnames!r}")
        pairs: list[tuple[float, float]] = []
        for lineno, row in enumerate(reader, start=2):
            try:
                pairs.append((float(row["baseline"]), float(row["treated"])))
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{lineno}: non-numeric row {row!r}") from None
    return MeasurementSeries(effect_name, Polarity(polarity), tuple(pairs), units)


def default_questions() -> tuple[Question, ...]:
    """The generic ten-question instrument shipped with the package."""
    from importlib.resources import files

    from .io import load_questions

    return load_questions(files("ssm_loom.data").joinpath("questionnaire.json"))
