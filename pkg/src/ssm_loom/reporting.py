"""Adapted forest plot and aggregation summary table.

Forest plot geometry is fixed: improvements are clamped to [-100%, +100%]
and mapped affinely onto a 420 px plot strip whose 0% rule sits at
x = 650.  Aggregated rows have no measured mean; their marker sits at the
centre of the aggregated intensity's band range and the whisker spans it.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Sequence
from xml.sax.saxutils import escape, quoteattr

from .aggregation import AggregatedModel, AggregationRecord
from .belief import DEFAULT_THRESHOLDS, IntensityThresholds
from .model import EvidenceModel
from .scale import HypothesisSet

__all__ = [
    "RowKind",
    "ForestRow",
    "ForestGroup",
    "ReportDocument",
    "NothingToRender",
    "METADATA_ENV",
    "generation_stamp",
    "band_extent",
    "x_position",
    "build_forest",
    "render_forest",
    "render_summary",
    "format_belief",
    "format_conflict",
    "format_difference",
]

METADATA_ENV = "SSM_LOOM_SEED_METADATA"

# SVG geometry (px)
WIDTH = 900
PLOT_LEFT = 440.0
PLOT_RIGHT = 860.0
ZERO_X = (PLOT_LEFT + PLOT_RIGHT) / 2
UNIT_PX = (PLOT_RIGHT - PLOT_LEFT) / 2
LABEL_X = 12
SAMPLES_X = 350
BELIEF_X = 410
TOP = 70
ROW_H = 20
GROUP_GAP = 8
BOTTOM = 50
CLAMP = 1.0

# text geometry (characters)
TEXT_LABEL_W = 34
TEXT_PLOT_W = 61


class NothingToRender(ValueError):
    pass


class RowKind(str, Enum):
    EVIDENCE = "evidence"
    AGGREGATED = "aggregated"


@dataclass(frozen=True)
class ForestRow:
    label: str
    sample_count: int
    belief: float
    mean: float | None
    ci95: tuple[float, float] | None
    kind: RowKind = RowKind.EVIDENCE


@dataclass(frozen=True)
class ForestGroup:
    effect: str
    rows: tuple[ForestRow, ...]


@dataclass(frozen=True)
class ReportDocument:
    title: str
    groups: tuple[ForestGroup, ...]
    thresholds: IntensityThresholds
    metadata: dict = field(default_factory=dict)


def generation_stamp() -> str:
    """Timestamp for report metadata; pinned by ``SSM_LOOM_SEED_METADATA``."""
    pinned = os.environ.get(METADATA_ENV)
    if pinned:
        return pinned
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def band_extent(h: HypothesisSet, thresholds: IntensityThresholds) -> tuple[float, float]:
    """Improvement interval from the lowest to the highest member's band."""
    return thresholds.band_edges(h.low)[0], thresholds.band_edges(h.high)[1]


def x_position(value: float) -> float:
    v = max(-CLAMP, min(CLAMP, value))
    return ZERO_X + UNIT_PX * v


def build_forest(
    models: Sequence[EvidenceModel],
    agg: AggregatedModel,
    thresholds: IntensityThresholds = DEFAULT_THRESHOLDS,
    title: str | None = None,
    generated: str | None = None,
) -> ReportDocument:
    if not models:
        raise NothingToRender("nothing to render")
    by_id = {m.id: m for m in models}
    groups = []
    for rec in agg.records:
        rows = []
        total = 0
        for mid, effect_name in rec.sources:
            model = by_id.get(mid)
            if model is None:
                continue
            e = model.effect(effect_name)
            total += e.sample_count
            if e.stats is None:
                rows.append(ForestRow(mid, e.sample_count, e.belief, None, None))
            else:
                rows.append(ForestRow(mid, e.sample_count, e.belief, e.stats.mean, e.stats.ci95))
        if not rows:
            continue
        lo, hi = band_extent(rec.intensity, thresholds)
        rows.append(
            ForestRow(
                f"Aggregated {rec.intensity.notation()}",
                total,
                rec.belief,
                (lo + hi) / 2,
                (lo, hi),
                RowKind.AGGREGATED,
            )
        )
        groups.append(ForestGroup(rec.effect_name, tuple(rows)))
    if not groups:
        raise NothingToRender("nothing to render")
    if title is None:
        title = f"Effects of {agg.cause.name}"
        if agg.group is not None:
            title += f" ({agg.group})"
    meta = {"generated": generated or generation_stamp(), "inputs": len(agg.inputs)}
    return ReportDocument(title, tuple(groups), thresholds, meta)


def _f(x: float) -> str:
    return f"{x:.2f}"


def _threshold_values(t: IntensityThresholds) -> list[float]:
    return [-t.t_moderate, -t.t_weak, -t.t_indifferent, t.t_indifferent, t.t_weak, t.t_moderate]


def _svg(doc: ReportDocument) -> str:
    n_rows = sum(1 + len(g.rows) for g in doc.groups)
    plot_top = TOP
    plot_bottom = TOP + n_rows * ROW_H + (len(doc.groups) - 1) * GROUP_GAP
    height = plot_bottom + BOTTOM
    t = doc.thresholds
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}" font-family="Helvetica, Arial, sans-serif" font-size="12">',
        f"<title>{escape(doc.title)}</title>",
        "<desc>generated={}; thresholds={},{},{}</desc>".format(
            escape(str(doc.metadata.get("generated", ""))), t.t_indifferent, t.t_weak, t.t_moderate
        ),
        f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
        f'<text x="{LABEL_X}" y="24" font-size="15" font-weight="bold">{escape(doc.title)}</text>',
        f'<text x="{LABEL_X}" y="{TOP - 12}" font-weight="bold">Effect / evidence</text>',
        f'<text x="{SAMPLES_X}" y="{TOP - 12}" font-weight="bold" text-anchor="end">Samples</text>',
        f'<text x="{BELIEF_X}" y="{TOP - 12}" font-weight="bold" text-anchor="end">Belief</text>',
    ]
    out.append('<g id="threshold-rules" stroke="#c8c8c8" stroke-width="1" stroke-dasharray="3,3">')
    for v in _threshold_values(t):
        x = _f(x_position(v))
        out.append(f'<line class="threshold" data-value="{v:g}" x1="{x}" y1="{plot_top}" x2="{x}" y2="{plot_bottom}"/>')
    out.append("</g>")
    zx = _f(x_position(0.0))
    out.append(f'<line id="zero-rule" x1="{zx}" y1="{plot_top}" x2="{zx}" y2="{plot_bottom}" stroke="black" stroke-width="1"/>')
    axis_y = plot_bottom + 4
    out.append(f'<line x1="{_f(PLOT_LEFT)}" y1="{axis_y}" x2="{_f(PLOT_RIGHT)}" y2="{axis_y}" stroke="black"/>')
    for v in (-1.0, -0.5, 0.0, 0.5, 1.0):
        x = _f(x_position(v))
        out.append(f'<line x1="{x}" y1="{axis_y}" x2="{x}" y2="{axis_y + 4}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{axis_y + 16}" text-anchor="middle">{v * 100:+.0f}%</text>'.replace("+0%", "0%"))
    out.append(
        f'<text x="{_f(ZERO_X)}" y="{axis_y + 32}" text-anchor="middle">Relative improvement</text>'
    )

    y = plot_top
    for gi, g in enumerate(doc.groups):
        if gi:
            y += GROUP_GAP
        out.append(f'<g class="effect" id={quoteattr("effect-" + g.effect.replace(" ", "-"))}>')
        out.append(f'<text x="{LABEL_X}" y="{y + 14}" font-weight="bold">{escape(g.effect)}</text>')
        y += ROW_H
        for r in g.rows:
            cy = y + ROW_H / 2
            agg = r.kind is RowKind.AGGREGATED
            weight = ' font-style="italic"' if agg else ""
            out.append(f'<text x="{LABEL_X + 12}" y="{y + 14}"{weight}>{escape(r.label)}</text>')
            out.append(f'<text x="{SAMPLES_X}" y="{y + 14}" text-anchor="end">{r.sample_count}</text>')
            out.append(f'<text x="{BELIEF_X}" y="{y + 14}" text-anchor="end">{format_belief(r.belief)}</text>')
            if r.mean is None or r.ci95 is None:
                out.append(
                    f'<text class="no-data" x="{_f(PLOT_LEFT + 4)}" y="{y + 14}" fill="#888888" '
                    f'font-style="italic">no raw data</text>'
                )
            elif agg:
                x1, x2, cx = x_position(r.ci95[0]), x_position(r.ci95[1]), x_position(r.mean)
                out.append(
                    f'<line class="aggregated-ci" x1="{_f(x1)}" y1="{_f(cy)}" x2="{_f(x2)}" y2="{_f(cy)}" '
                    f'stroke="#1f4e9c" stroke-width="3"/>'
                )
                pts = f"{_f(cx - 6)},{_f(cy)} {_f(cx)},{_f(cy - 6)} {_f(cx + 6)},{_f(cy)} {_f(cx)},{_f(cy + 6)}"
                out.append(f'<polygon class="aggregated-point" points="{pts}" fill="#1f4e9c"/>')
            else:
                x1, x2, cx = x_position(r.ci95[0]), x_position(r.ci95[1]), x_position(r.mean)
                out.append(
                    f'<line class="ci" x1="{_f(x1)}" y1="{_f(cy)}" x2="{_f(x2)}" y2="{_f(cy)}" stroke="black"/>'
                )
                out.append(
                    f'<rect class="mean" x="{_f(cx - 3.5)}" y="{_f(cy - 3.5)}" width="7" height="7" fill="black"/>'
                )
            y += ROW_H
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _col(value: float) -> int:
    v = max(-CLAMP, min(CLAMP, value))
    return round((v + CLAMP) / (2 * CLAMP) * (TEXT_PLOT_W - 1))


def _text(doc: ReportDocument) -> str:
    t = doc.thresholds
    base = [" "] * TEXT_PLOT_W
    for v in _threshold_values(t):
        base[_col(v)] = ":"
    base[_col(0.0)] = "|"
    lines = [
        doc.title,
        f"generated: {doc.metadata.get('generated', '')}",
        f"thresholds: {t.t_indifferent:g} / {t.t_weak:g} / {t.t_moderate:g}",
        "",
        f"{'Effect / evidence':<{TEXT_LABEL_W}} {'n':>5} {'belief':>6}  "
        + "-100%".ljust(TEXT_PLOT_W // 2 - 1) + "0%" + "+100%".rjust(TEXT_PLOT_W // 2 - 1),
    ]
    for g in doc.groups:
        lines.append(g.effect)
        for r in g.rows:
            strip = list(base)
            if r.mean is None or r.ci95 is None:
                note = "no raw data"
                strip[1 : 1 + len(note)] = list(note)
            else:
                a, b = _col(r.ci95[0]), _col(r.ci95[1])
                fill = "=" if r.kind is RowKind.AGGREGATED else "-"
                for i in range(a, b + 1):
                    strip[i] = fill
                strip[_col(r.mean)] = "*" if r.kind is RowKind.AGGREGATED else "#"
            label = ("  " + r.label)[:TEXT_LABEL_W]
            lines.append(
                f"{label:<{TEXT_LABEL_W}} {r.sample_count:>5} {format_belief(r.belief):>6}  " + "".join(strip).rstrip()
            )
        lines.append("")
    return "\n".join(lines)


def render_forest(
    models: Sequence[EvidenceModel],
    agg: AggregatedModel,
    thresholds: IntensityThresholds = DEFAULT_THRESHOLDS,
    format: str = "svg",
    generated: str | None = None,
) -> bytes:
    """Render the adapted forest plot as SVG or monospace text (UTF-8 bytes)."""
    doc = build_forest(models, agg, thresholds, generated=generated)
    if format == "svg":
        return _svg(doc).encode("utf-8")
    if format == "text":
        return _text(doc).encode("utf-8")
    raise ValueError(f"unknown forest format {format!r}")


def format_belief(b: float) -> str:
    return f"{b * 100:.0f}%"


def format_conflict(k: float) -> str:
    if abs(k) < 1e-12:
        return "-"
    return f"{k:.2f}"


def format_difference(d: float) -> str:
    """Whole percent, or one decimal below 10%; negatives keep their sign."""
    pct = d * 100
    text = f"{pct:.0f}" if abs(pct) >= 9.95 else f"{pct:.1f}".removesuffix(".0")
    if text in ("-0", "-0.0"):
        text = "0"
    return text + "%"


SUMMARY_COLUMNS = (
    "Effect",
    "Study Id.",
    "Number of studies",
    "#Evidence models",
    "Intensity",
    "Belief",
    "Conflict",
    "Difference",
)


def _summary_rows(records: Iterable[AggregationRecord]) -> list[list[str]]:
    return [
        [
            r.effect_name,
            ", ".join(r.study_ids),
            str(r.study_count),
            str(r.model_count),
            r.intensity.notation(),
            format_belief(r.belief),
            format_conflict(r.conflict),
            format_difference(r.difference),
        ]
        for r in records
    ]


def render_summary(agg: AggregatedModel, format: str = "text") -> bytes:
    """Aggregation table: one row per effect record."""
    rows = _summary_rows(agg.records)
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(SUMMARY_COLUMNS)
        w.writerows(rows)
        return buf.getvalue().encode("utf-8")
    if format != "text":
        raise ValueError(f"unknown summary format {format!r}")
    table = [list(SUMMARY_COLUMNS), *rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(SUMMARY_COLUMNS))]
    lines = []
    for n, r in enumerate(table):
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return ("\n".join(lines) + "\n").encode("utf-8")
