"""Evidence synthesis with Dempster-Shafer belief functions.

Evidence models extracted from primary studies carry effects on a
seven-point intensity scale with a belief value.  Beliefs are estimated
from study type, a quality questionnaire and result dispersion; effects are
pooled across models with Dempster's rule and reported as summary tables
and an adapted forest plot.
"""

from importlib.resources import files as _files
from pathlib import Path as _Path

from .aggregation import (
    AggregatedModel,
    AggregationRecord,
    CompatibilityReport,
    IncompatibleModelsError,
    Join,
    JoinMap,
    Verdict,
    aggregate,
    aggregate_by,
    check_compatibility,
    pool_effect,
)
from .belief import (
    DEFAULT_THRESHOLDS,
    Answer,
    BeliefAssessment,
    EffectStatistics,
    IntensityThresholds,
    MeasurementSeries,
    Polarity,
    QualityQuestionnaire,
    Question,
    StudyType,
    assess,
    base_belief,
    default_questions,
    dispersion_discount,
    intensity_from_stats,
    read_series_csv,
    relative_improvements,
)
from .dst import (
    CombinationResult,
    MassFunction,
    SimpleSupport,
    TotalConflictError,
    belief_of,
    combine,
    combine_all,
    decide_intensity,
    discount_mass,
    from_simple_support,
    plausibility_of,
    vacuous,
)
from .model import (
    ConceptKind,
    Effect,
    EvidenceModel,
    Glossary,
    GlossaryEntry,
    Relation,
    RelationKind,
    ValidationReport,
    ValueConcept,
    normalize_term,
    validate_model,
)
from .reporting import render_forest, render_summary
from .scale import THETA, HypothesisSet, Intensity, NotationError, hypothesis_from_notation

__version__ = "0.1.0"


def fixture_corpus() -> _Path:
    """Directory of the bundled 19-model example corpus."""
    return _Path(str(_files("ssm_loom.data").joinpath("corpus")))
