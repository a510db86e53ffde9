"""``ssm-loom`` command line: validate, beliefs, aggregate, forest.

Exit status is 0 on success, 1 for domain errors (invalid models,
incompatible causes, total conflict, missing questionnaire answers) and 2
for unreadable or malformed input and unwritable output.
"""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .aggregation import EMPTY_JOINS, AggregatedModel, IncompatibleModelsError, JoinMap, aggregate, aggregate_by
from .belief import DEFAULT_THRESHOLDS, IntensityThresholds, QualityQuestionnaire, assess
from .dst import TotalConflictError
from .io import (
    Corpus,
    ParseError,
    aggregated_to_dict,
    dumps,
    load_corpus,
    load_glossary,
    load_joins,
    load_questionnaire,
    load_thresholds,
    read_json,
    thresholds_from_dict,
)
from .model import Glossary, validate_model
from .reporting import NothingToRender, render_forest, render_summary

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class DomainError(Exception):
    pass


@dataclass
class RunConfig:
    corpus_dir: Path
    glossary_path: Path
    join_map_path: Path | None = None
    thresholds: IntensityThresholds = DEFAULT_THRESHOLDS
    questionnaire_path: Path | None = None
    output_dir: Path | None = None
    group_by_key: str | None = None
    format: str = "svg"


_CONFIG_KEYS = {
    "corpus": "corpus",
    "glossary": "glossary",
    "joins": "joins",
    "thresholds": "thresholds",
    "questionnaire": "questionnaire",
    "out": "out",
    "groupBy": "group_by",
    "format": "format",
}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge an optional ``--config`` JSON file with flags; flags win."""
    values: dict = {}
    # config-file paths are relative to the config file, flag paths to the cwd
    base: dict[str, Path] = {}
    if args.config:
        doc = read_json(args.config)
        if not isinstance(doc, dict):
            raise ParseError(args.config, "config must be a JSON object")
        for k, v in doc.items():
            if k not in _CONFIG_KEYS:
                raise ParseError(args.config, f"unknown config key {k!r}")
            values[_CONFIG_KEYS[k]] = v
            base[_CONFIG_KEYS[k]] = Path(args.config).parent
    for k in set(_CONFIG_KEYS.values()):
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
            base.pop(k, None)

    def path(key: str) -> Path | None:
        v = values.get(key)
        if v is None:
            return None
        return base.get(key, Path()) / v

    corpus = path("corpus")
    if corpus is None:
        raise ParseError("<arguments>", "--corpus is required")
    glossary = path("glossary") or corpus / "glossary.json"
    joins = path("joins")
    if joins is None and (corpus / "joins.json").exists():
        joins = corpus / "joins.json"
    questionnaire = path("questionnaire")
    if questionnaire is None and (corpus / "questionnaire.json").exists():
        questionnaire = corpus / "questionnaire.json"

    thresholds = DEFAULT_THRESHOLDS
    t = values.get("thresholds")
    if isinstance(t, dict):
        try:
            thresholds = thresholds_from_dict(t)
        except ValueError as exc:
            raise ParseError(args.config or "<arguments>", str(exc)) from None
    elif t is not None:
        thresholds = load_thresholds(path("thresholds"))

    return RunConfig(
        corpus_dir=corpus,
        glossary_path=glossary,
        join_map_path=joins,
        thresholds=thresholds,
        questionnaire_path=questionnaire,
        output_dir=path("out"),
        group_by_key=values.get("group_by"),
        format=values.get("format") or "svg",
    )


def _load(config: RunConfig) -> tuple[Corpus, Glossary, JoinMap]:
    glossary = load_glossary(config.glossary_path)
    corpus = load_corpus(config.corpus_dir)
    joins = load_joins(config.join_map_path) if config.join_map_path else EMPTY_JOINS
    return corpus, glossary, joins


def _write(out_dir: Path, name: str, data: bytes) -> Path:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / name
        target.write_bytes(data)
    except OSError as exc:
        raise ParseError(out_dir, f"cannot write output: {exc.strerror or exc}") from None
    return target


def _slug(group: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "-", group).strip("-") or "group"


def cmd_validate(config: RunConfig, out=sys.stdout) -> int:
    corpus, glossary, _ = _load(config)
    invalid = 0
    for m in corpus.models:
        report = validate_model(m, glossary)
        if report.valid:
            print(f"{m.id}: valid", file=out)
        else:
            invalid += 1
            print(f"{m.id}: {len(report.violations)} violation(s)", file=out)
            for v in report.violations:
                print(f"  - {v.code}: {v.message}", file=out)
    n = len(corpus.models)
    if invalid:
        print(f"{invalid} of {n} models invalid", file=out)
        return EXIT_DOMAIN
    print(f"{n} models valid", file=out)
    return EXIT_OK


BELIEF_COLUMNS = ("studyId", "modelId", "effect", "studyType", "qualityScore", "baseBelief", "discount", "finalBelief")


def cmd_beliefs(config: RunConfig, out=sys.stdout) -> int:
    corpus, _, _ = _load(config)
    if config.questionnaire_path is None:
        raise ParseError(config.corpus_dir, "no questionnaire given and no questionnaire.json in the corpus")
    questions, answers = load_questionnaire(config.questionnaire_path)
    rows = []
    for m in corpus.models:
        study = corpus.studies.get(m.study_id)
        if study is None:
            raise DomainError(f"study {m.study_id} (model {m.id}) has no entry in studies.json")
        if m.study_id not in answers:
            raise DomainError(f"study {m.study_id} has no questionnaire answers")
        try:
            quality = QualityQuestionnaire(questions, answers[m.study_id])
        except ValueError as exc:
            raise DomainError(f"study {m.study_id}: {exc}") from None
        for e in m.effects:
            a = assess(study.study_type, quality, e.stats)
            rows.append(
                (m.study_id, m.id, e.name, a.study_type.value,
                 f"{a.quality_score:.4f}", f"{a.base_belief:.4f}", f"{a.discount:.4f}", f"{a.final_belief:.4f}")
            )
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c) for i, c in enumerate(BELIEF_COLUMNS)]
    print("  ".join(c.ljust(w) for c, w in zip(BELIEF_COLUMNS, widths)).rstrip(), file=out)
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip(), file=out)
    if config.output_dir is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(BELIEF_COLUMNS)
        w.writerows(rows)
        _write(config.output_dir, "beliefs.csv", buf.getvalue().encode("utf-8"))
    return EXIT_OK


def _aggregate(config: RunConfig) -> tuple[Corpus, dict[str | None, AggregatedModel]]:
    corpus, glossary, joins = _load(config)
    if not corpus.models:
        raise DomainError("no models")
    bad = [m.id for m in corpus.models if not validate_model(m, glossary).valid]
    if bad:
        raise DomainError(f"invalid models: {', '.join(bad)} (run 'validate' for details)")
    if config.group_by_key:
        return corpus, dict(aggregate_by(corpus.models, config.group_by_key, glossary, joins))
    return corpus, {None: aggregate(corpus.models, glossary, joins)}


def cmd_aggregate(config: RunConfig, out=sys.stdout) -> int:
    _, results = _aggregate(config)
    for group, agg in results.items():
        if group is not None:
            print(f"== {config.group_by_key} = {group} ({len(agg.inputs)} models)", file=out)
        out.write(render_summary(agg, "text").decode("utf-8"))
        if config.output_dir is not None:
            suffix = "" if group is None else "-" + _slug(group)
            _write(config.output_dir, f"aggregated{suffix}.json", dumps(aggregated_to_dict(agg)).encode("utf-8"))
            _write(config.output_dir, f"summary{suffix}.txt", render_summary(agg, "text"))
            _write(config.output_dir, f"summary{suffix}.csv", render_summary(agg, "csv"))
    if config.group_by_key:
        print(f"{len(results)} groups", file=out)
    return EXIT_OK


def cmd_forest(config: RunConfig, out=sys.stdout) -> int:
    corpus, results = _aggregate(config)
    fmt = config.format
    if fmt not in ("svg", "text"):
        raise ParseError("<arguments>", f"unknown format {fmt!r} (expected svg or text)")
    ext = "svg" if fmt == "svg" else "txt"
    for group, agg in results.items():
        members = [m for m in corpus.models if m.id in set(agg.inputs)]
        data = render_forest(members, agg, config.thresholds, fmt)
        if config.output_dir is None:
            out.write(data.decode("utf-8"))
        else:
            suffix = "" if group is None else "-" + _slug(group)
            target = _write(config.output_dir, f"forest{suffix}.{ext}", data)
            print(f"wrote {target}", file=out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "beliefs": cmd_beliefs,
    "aggregate": cmd_aggregate,
    "forest": cmd_forest,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssm-loom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("validate", "check evidence models against the structural rules"),
        ("beliefs", "compute base belief, discount and final belief per effect"),
        ("aggregate", "pool effects across models and print the summary table"),
        ("forest", "render the adapted forest plot"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON run configuration; flags override it")
        p.add_argument("--corpus", help="corpus directory (studies.json + models/*.json)")
        p.add_argument("--glossary", help="glossary JSON (default: <corpus>/glossary.json)")
        p.add_argument("--joins", help="join map JSON (default: <corpus>/joins.json if present)")
        p.add_argument("--thresholds", help="intensity threshold overrides JSON")
        p.add_argument("--questionnaire", help="questionnaire with per-study answers JSON")
        p.add_argument("--out", help="output directory")
        p.add_argument("--group-by", dest="group_by", help="metadata key to aggregate by, e.g. quantizationMethod")
        p.add_argument("--format", choices=("svg", "text"), help="forest plot format (default svg)")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        config = build_config(args)
        return COMMANDS[args.command](config, out=out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IncompatibleModelsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(exc.report.describe(), file=out)
        return EXIT_DOMAIN
    except (DomainError, TotalConflictError, NothingToRender) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
