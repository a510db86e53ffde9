"""
From measurements to a belief value
===================================

Six baseline/treated energy measurements go through relative improvement,
intensity, dispersion discount and the study-type prior.
"""

from ssm_loom import (
    StudyType,
    assess,
    dispersion_discount,
    fixture_corpus,
    intensity_from_stats,
    read_series_csv,
    relative_improvements,
)
from ssm_loom.belief import QualityQuestionnaire
from ssm_loom.io import load_questionnaire

# energy is lower-is-better, so a drop counts as an improvement
series = read_series_csv(
    fixture_corpus() / "measurements" / "S2-inference-energy.csv",
    "Inference energy consumption",
    "lower-is-better",
    "J",
)
stats = relative_improvements(series)
print("improvements:", [round(v, 4) for v in stats.improvements])
print("mean %.4f  IQR %.4f  95%% CI (%.4f, %.4f)" % (stats.mean, stats.iqr, *stats.ci95))

# the mean and its interval pick a point (or range) on the seven-point scale
print("intensity:", intensity_from_stats(stats))

# the corpus ships this study's checklist answers; 14 of 25 weighted points
questions, answers = load_questionnaire(fixture_corpus() / "questionnaire.json")
quality = QualityQuestionnaire(questions, answers["S2"])
print("quality score:", quality.score)

# observational studies live in [0.25, 0.50]; dispersion then discounts the prior
a = assess(StudyType.OBSERVATIONAL, quality, stats)
print("base %.4f  discount %.6f  final %.6f" % (a.base_belief, dispersion_discount(stats), a.final_belief))
