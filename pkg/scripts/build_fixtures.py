"""Regenerate the bundled example corpus under src/ssm_loom/data/corpus.

Study-level metadata (study type, primary belief, number of theoretical
structures, year, data quality) reproduces the six selected quantization
studies.  Effect-level measurements are SYNTHETIC: seeded draws around
plausible means, except two anchors (S1's first inference-energy value of
57.18% and S2's six measurement pairs in measurements/).  Beliefs and
intensities are then derived with the package's own estimation pipeline.

Run from the repository root:  python scripts/build_fixtures.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ssm_loom.belief import (
    DEFAULT_THRESHOLDS,
    EffectStatistics,
    QualityQuestionnaire,
    StudyType,
    assess,
    default_questions,
    intensity_from_stats,
    read_series_csv,
    relative_improvements,
)
from ssm_loom.aggregation import Join, JoinMap
from ssm_loom.io import StudyInfo, glossary_to_dict, joins_to_dict, model_to_dict, study_to_dict, write_json
from ssm_loom.model import (
    ConceptKind,
    Effect,
    EvidenceModel,
    Glossary,
    GlossaryEntry,
    Relation,
    RelationKind,
    ValueConcept,
)
from ssm_loom.scale import hypothesis_from_notation

ROOT = Path(__file__).resolve().parents[1] / "src" / "ssm_loom" / "data" / "corpus"
SEED = 20250207

CAUSE = "Model quantization"

STUDIES = [
    StudyInfo("S1", StudyType.OBSERVATIONAL, 0.37, 5, 2022, "Comparative",
              "Paul et al. (2022), energy-efficient respiratory anomaly detection"),
    StudyInfo("S2", StudyType.OBSERVATIONAL, 0.39, 1, 2022, "Comparative",
              "Sathish et al. (2022), verifiable energy-efficient medical image analysis"),
    StudyInfo("S3", StudyType.QUASI_EXPERIMENT, 0.64, 8, 2022, "Comparative",
              "Tao et al. (2022), experimental energy consumption analysis of bird call classification"),
    StudyInfo("S4", StudyType.UNSYSTEMATIC, 0.18, 2, 2024, "Comparative (Bar chart)",
              "Geens et al. (2024), energy cost modelling"),
    StudyInfo("S5", StudyType.QUASI_EXPERIMENT, 0.74, 1, 2025, "Precise",
              "Gonzalez et al. (2025), impact of ML optimization"),
    StudyInfo("S6", StudyType.QUASI_EXPERIMENT, 0.71, 2, 2025, "Precise",
              "Alizadeh et al. (2025), language models for software engineering"),
]


GLOSSARY = {
    CAUSE: ("Mapping model parameters and/or activations to a lower numeric precision.", ["Quantization"]),
    "DL model": ("A deep learning model under study.", ["Large Language Model", "Deep learning model", "Neural network", "CNN"]),
    "Dataset": ("Data on which the model is evaluated.", []),
    "Application domain": ("Task or system the DL model serves.", []),
    "Quantization precision": ("Numeric format targeted by quantization.", ["Target precision"]),
    "Quantized components": ("Parts of the model whose values are quantized.", []),
    "Quantization timing": ("When quantization is applied relative to training.", []),
    "Hardware platform": ("Device on which inference runs.", []),
    "Respiratory anomaly detection system": ("Classifier of respiratory sounds on wearable devices.", []),
    "Medical imaging system": ("Medical image classification or segmentation system.", []),
    "Thorax disease classification system": ("Chest X-ray disease classifier.", []),
    "Liver disease segmentation system": ("Liver CT segmentation model.", []),
    "Bird call classification system": ("Audio classifier of bird calls.", []),
    "Image classification system": ("General-purpose image classifier.", []),
    "Code generation system": ("Language model generating source code.", ["Code generation"]),
    "Energy cost model": ("Analytical estimate of hardware energy cost.", []),
    "Quantization-aware training": ("Quantization integrated into training.", ["QAT"]),
    "Post-training quantization": ("Quantization applied after full-precision training.", ["PTQ"]),
    "Weights": ("Model weights are quantized.", []),
    "Activations": ("Model activations are quantized.", []),
    "Weights and activations": ("Both weights and activations are quantized.", []),
    "Fixed-point precision": ("Fixed-point formats such as Q0.8.", []),
    "Integer precision": ("Integer formats such as INT8 or INT4.", ["INT precision"]),
    "Wearable device": ("Battery-powered body-worn hardware.", []),
    "GPU": ("Graphics processing unit.", ["Graphics card"]),
    "Accuracy": ("Share of correct predictions.", []),
    "F1 score": ("Harmonic mean of precision and recall.", []),
    "Storage size": ("Size of the stored model.", ["Model storage size", "Model size"]),
    "GPU utilization": ("Share of time the GPU is busy.", []),
    "GPU memory utilization": ("GPU memory in use.", []),
    "GPU power draw": ("Power drawn by the GPU.", []),
    "GPU energy consumption": ("Energy consumed by the GPU.", []),
    "Inference latency": ("Time to produce one prediction.", ["Latency"]),
    "Inference power draw": ("Power drawn while predicting.", []),
    "Inference energy consumption": ("Energy consumed while predicting.", []),
    "Sustainability": ("Environmental sustainability of the DL system.", []),
}

JOINS = JoinMap(
    joins=(Join("Medical imaging system", ("Thorax disease classification system", "Liver disease segmentation system")),),
    drops=("Energy cost model",),
    keep_unmerged=("Code generation system", "Image classification system"),
)

# (yes question ids) per study; all questions applicable.  Scores 12/25, 14/25,
# 14/25, 18/25, 24/25, 21/25 reproduce the primary beliefs.
ANSWERS_YES = {
    "S1": {"q1", "q2", "q3", "q6"},          # 4+3+3+2 = 12
    "S2": {"q1", "q2", "q3", "q7", "q9"},    # 4+3+3+2+2 = 14
    "S3": {"q1", "q2", "q4", "q5", "q10"},   # 4+3+3+3+1 = 14
    "S4": {"q1", "q2", "q3", "q4", "q5", "q6"},  # 18
    "S5": {"q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9"},  # 24
    "S6": {"q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "q10"},  # 21
}


def concept(name, kind, *rels):
    return ValueConcept(name, ConceptKind(kind), tuple(Relation(RelationKind(k), t) for k, t in rels))


def context_for(domain, timing, components, precision_family, hardware=None, extra=()):
    out = [
        concept("DL model", "archetype", ("part-of", "Application domain")),
        concept("Application domain", "archetype"),
        concept("Quantization precision", "archetype", ("property-of", CAUSE)),
        concept("Quantized components", "archetype", ("property-of", CAUSE)),
        concept(domain, "contextual-aspect", ("is-a", "Application domain")),
        concept(precision_family, "contextual-aspect", ("is-a", "Quantization precision")),
        concept(components, "contextual-aspect", ("is-a", "Quantized components")),
    ]
    if timing:
        out.insert(4, concept("Quantization timing", "archetype", ("property-of", CAUSE)))
        out.append(concept(timing, "contextual-aspect", ("is-a", "Quantization timing")))
    if hardware:
        out.insert(4, concept("Hardware platform", "archetype", ("property-of", "DL model")))
        out.append(concept(hardware, "contextual-aspect", ("is-a", "Hardware platform")))
    out.extend(extra)
    return tuple(out)


COMPONENT = {"W": "Weights", "A": "Activations", "F": "Weights and activations"}


def model_specs():
    """(model id, study, method label, components, precision family, {effect: (mean, sd) | hypothesis})."""
    specs = []
    # S1: FP64 -> fixed point, both components, QAT, single model/dataset.
    s1_storage = {"Q0.2": 0.969, "Q0.4": 0.938, "Q0.8": 0.875, "Q0.16": 0.75, "Q0.32": 0.5}
    s1_acc = {"Q0.2": -0.31, "Q0.4": -0.12, "Q0.8": -0.035, "Q0.16": -0.008, "Q0.32": 0.002}
    s1_iec = {"Q0.2": 0.5718, "Q0.4": 0.48, "Q0.8": 0.41, "Q0.16": 0.27, "Q0.32": 0.12}
    for q in ("Q0.2", "Q0.4", "Q0.8", "Q0.16", "Q0.32"):
        specs.append((f"S1-{q}-F", "S1", f"FP64->{q} (F)", "F", "Fixed-point precision", 1, {
            "Accuracy": s1_acc[q], "Storage size": s1_storage[q], "Inference energy consumption": s1_iec[q],
        }))
    specs.append(("S2-INT8-F", "S2", "FP32->INT8 (F)", "F", "Integer precision", 6, {
        "Accuracy": (-0.015, 0.012), "Storage size": (0.75, 0.004), "Inference energy consumption": "csv",
    }))
    s3_methods = [("Q0.8", "W"), ("Q0.8", "A"), ("Q0.8", "F"), ("Q0.16", "W"), ("Q0.16", "A"), ("Q0.16", "F"),
                  ("Q0.8W-Q0.16A", "F"), ("Q0.16W-Q0.8A", "F")]
    for prec, comp in s3_methods:
        strong = 1.0 if "0.8" in prec.split("-")[0] else 0.6
        act_only = comp == "A"
        specs.append((f"S3-{prec}-{comp}", "S3", f"FP32->{prec} ({comp})", comp, "Fixed-point precision", 5, {
            "Accuracy": (-0.06 * strong, 0.02),
            "F1 score": (-0.05 * strong + 0.02, 0.03),
            "Storage size": (0.01, 0.005) if act_only else (0.75 * strong if strong == 1.0 else 0.5, 0.01),
            "Inference latency": (0.04 + 0.05 * strong, 0.02),
            "Inference power draw": (0.08 + 0.06 * strong, 0.03),
            "Inference energy consumption": (0.10 + 0.15 * strong, 0.04),
        }))
    for prec in ("INT1", "INT4"):
        specs.append((f"S4-{prec}-W", "S4", f"FP32->{prec} (W)", "W", "Integer precision", 1, {
            "Inference latency": "SP" if prec == "INT1" else "PO",
            "Inference energy consumption": "SP" if prec == "INT1" else "{PO,SP}",
        }))
    specs.append(("S5-INT8-F", "S5", "FP32->INT8 (F)", "F", "Integer precision", 28, {
        "Accuracy": (-0.03, 0.05), "Storage size": (0.74, 0.02), "GPU utilization": (0.01, 0.06),
        "GPU power draw": (0.09, 0.05), "GPU energy consumption": (0.42, 0.12), "Inference latency": (0.55, 0.1),
        "Inference power draw": (0.26, 0.08), "Inference energy consumption": (0.61, 0.09),
    }))
    for prec, storage in (("INT4", 0.72), ("INT8", 0.46)):
        specs.append((f"S6-{prec}-W", "S6", f"FP16->{prec} (W)", "W", "Integer precision", 18, {
            "Accuracy": (-0.07 if prec == "INT4" else -0.02, 0.05), "Storage size": (storage, 0.02),
            "GPU utilization": (-0.02, 0.08), "GPU memory utilization": (0.5, 0.12),
            "GPU power draw": (0.12, 0.06), "GPU energy consumption": (0.38 if prec == "INT4" else 0.31, 0.1),
            "Inference latency": (0.2 if prec == "INT4" else 0.12, 0.1),
        }))
    return specs


DOMAIN = {
    "S1": ("Respiratory anomaly detection system", "Quantization-aware training", "Wearable device"),
    "S2": ("Thorax disease classification system", "Post-training quantization", None),
    "S3": ("Bird call classification system", "Quantization-aware training", None),
    "S4": ("Energy cost model", None, None),
    "S5": ("Image classification system", "Post-training quantization", "GPU"),
    "S6": ("Code generation system", "Post-training quantization", "GPU"),
}


def main() -> None:
    rng = np.random.default_rng(SEED)
    questions = default_questions()
    studies = {s.id: s for s in STUDIES}
    quality = {
        sid: QualityQuestionnaire(questions, {q.id: ("yes" if q.id in yes else "no") for q in questions})
        for sid, yes in ANSWERS_YES.items()
    }
    for sid, q in quality.items():
        b = assess(studies[sid].study_type, q, None).final_belief
        assert abs(b - studies[sid].primary_belief) < 1e-12, (sid, b)

    glossary = Glossary({k: GlossaryEntry(d, tuple(s)) for k, (d, s) in GLOSSARY.items()})
    for p in (ROOT / "models").glob("*.json"):
        p.unlink()

    s2_series = read_series_csv(ROOT / "measurements" / "S2-inference-energy.csv",
                                "Inference energy consumption", "lower-is-better", "J")
    for mid, sid, method, comp, family, n, effects in model_specs():
        domain, timing, hardware = DOMAIN[sid]
        extra = ()
        if sid == "S2":
            extra = (concept("Liver disease segmentation system", "contextual-aspect", ("is-a", "Application domain")),)
        ctx = context_for(domain, timing, COMPONENT[comp], family, hardware, extra)
        out = []
        for name, plan in effects.items():
            if isinstance(plan, str) and plan != "csv":
                # S4 reports bar charts only: intensity read off the chart, no dispersion
                a = assess(studies[sid].study_type, quality[sid], None)
                out.append(Effect(name, hypothesis_from_notation(plan), a.final_belief, 1, None, True))
                continue
            if plan == "csv":
                stats = relative_improvements(s2_series)
                synthetic = False
            elif isinstance(plan, tuple):
                mean, sd = plan
                stats = EffectStatistics.from_improvements(np.round(rng.normal(mean, sd, n), 4))
                synthetic = True
            else:
                stats = EffectStatistics.from_improvements([plan])
                synthetic = True
            a = assess(studies[sid].study_type, quality[sid], stats)
            out.append(Effect(name, intensity_from_stats(stats, DEFAULT_THRESHOLDS), a.final_belief,
                              stats.sample_count, stats, synthetic))
        m = EvidenceModel(
            id=mid, study_id=sid, cause=concept(CAUSE, "cause"), context=ctx, effects=tuple(out),
            provenance=studies[sid].citation,
            metadata={"quantizationMethod": method, "synthetic": "effect measurements are synthetic"
                      if any(e.synthetic for e in out) else "S2 measurement pairs bundled"},
        )
        write_json(ROOT / "models" / f"{mid}.json", model_to_dict(m))

    write_json(ROOT / "studies.json", {"studies": [study_to_dict(s) for s in STUDIES]})
    write_json(ROOT / "glossary.json", glossary_to_dict(glossary))
    write_json(ROOT / "joins.json", joins_to_dict(JOINS))
    write_json(ROOT / "questionnaire.json", {
        "questions": [{"id": q.id, "weight": q.weight, "text": q.text} for q in questions],
        "answers": {sid: {q.id: q_.answers[q.id].value for q in questions} for sid, q_ in quality.items()},
    })
    print(f"wrote {len(list((ROOT / 'models').glob('*.json')))} models to {ROOT}")


if __name__ == "__main__":
    main()
