"""Corpus-level statistics over exported evaluation sequences.

corpus_report reads a JSONL export (one EvaluationSequence per line) and
computes the study-style aggregates: satisfaction rate, per-sequence trend
(Mann-Kendall) and stationarity (ADF) calls over three derived series, the
ratio-vs-rating rank correlation, pairwise rating-level rank-sum tests on
reduction ratio, and a second-order fit of quality against ratio.  Output is
deterministic: identical input bytes yield identical report bytes.

Series derived per sequence (sequences of >= 4 iterations only):

- mean rating per iteration,
- rating variance per iteration,
- machine-estimated optimal reduction ratio per iteration, read from the
  exploit-slot variant (the model's current argmax).

A sequence counts as satisfied when it terminated satisfied, or when the
offline satisfaction rule fired during a fixed-length run (recorded by the
runner in metadata["satisfied_at"]).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..service.records import STATE_SATISFIED, EvaluationSequence, load_sequences
from .stats import adf_test, kendall_tau, mann_kendall, mann_whitney_u

SERIES_NAMES = ("mean_rating", "rating_variance", "optimal_ratio")
MIN_SERIES_LENGTH = 4


def sequence_satisfied(seq: EvaluationSequence) -> bool:
    if seq.terminal_state == STATE_SATISFIED:
        return True
    return seq.metadata.get("satisfied_at") is not None


def derive_series(seq: EvaluationSequence) -> dict[str, list[float]]:
    mean_rating = []
    rating_variance = []
    optimal_ratio = []
    for record in seq.iterations:
        rated = [v.rating for v in record.variants if v.rating is not None]
        if rated:
            mean_rating.append(float(np.mean(rated)))
            rating_variance.append(float(np.var(rated)))
        exploit = [v for v in record.variants if v.role == "exploit"]
        if exploit:
            optimal_ratio.append(float(exploit[0].reduction_ratio))
    return {
        "mean_rating": mean_rating,
        "rating_variance": rating_variance,
        "optimal_ratio": optimal_ratio,
    }


@dataclass
class SequenceRow:
    session_id: str
    length: int
    terminal_state: str
    satisfied: bool
    satisfied_at: object
    # per series: (S, p, trend) or None; (stat, band, stationary) or a marker
    mk: dict = field(default_factory=dict)
    adf: dict = field(default_factory=dict)


@dataclass
class CorpusStats:
    n_sequences: int = 0
    n_satisfied: int = 0
    n_analyzable: int = 0
    rows: list = field(default_factory=list)
    mk_counts: dict = field(default_factory=dict)
    adf_counts: dict = field(default_factory=dict)
    tau_ratio_rating: tuple | None = None
    n_rated_variants: int = 0
    pairwise_u: list = field(default_factory=list)
    quality_fit: tuple | None = None
    rating_hist: np.ndarray = field(default_factory=lambda: np.zeros((0, 6), dtype=int))

    @property
    def satisfaction_rate(self) -> float:
        return self.n_satisfied / self.n_sequences if self.n_sequences else 0.0


def analyze_sequence(seq: EvaluationSequence, alpha: float = 0.05) -> SequenceRow:
    row = SequenceRow(
        session_id=seq.session_id,
        length=len(seq),
        terminal_state=seq.terminal_state,
        satisfied=sequence_satisfied(seq),
        satisfied_at=seq.metadata.get("satisfied_at"),
    )
    series = derive_series(seq)
    for name in SERIES_NAMES:
        values = series[name]
        if len(values) < MIN_SERIES_LENGTH:
            row.mk[name] = None
            row.adf[name] = None
            continue
        row.mk[name] = mann_kendall(values, alpha=alpha)
        try:
            row.adf[name] = adf_test(values)
        except ValueError:
            row.adf[name] = "constant"
    return row


def corpus_report(sequences, alpha: float = 0.05) -> CorpusStats:
    """Aggregate a corpus (a path to JSONL, or EvaluationSequence list)."""
    if isinstance(sequences, (str, Path)):
        with open(sequences, encoding="utf-8") as fh:
            sequences = load_sequences(fh)
    sequences = list(sequences)

    stats = CorpusStats(n_sequences=len(sequences))
    stats.mk_counts = {name: {"increasing": 0, "decreasing": 0, "none": 0}
                       for name in SERIES_NAMES}
    stats.adf_counts = {name: {"stationary": 0, "nonstationary": 0, "constant": 0}
                        for name in SERIES_NAMES}

    ratios, ratings, qualities = [], [], []
    max_len = max((len(s) for s in sequences), default=0)
    hist = np.zeros((max_len, 6), dtype=int)

    for seq in sequences:
        row = analyze_sequence(seq, alpha=alpha)
        stats.rows.append(row)
        stats.n_satisfied += row.satisfied
        if any(row.mk[name] is not None for name in SERIES_NAMES):
            stats.n_analyzable += 1
        for name in SERIES_NAMES:
            if row.mk[name] is not None:
                stats.mk_counts[name][row.mk[name][2]] += 1
            if row.adf[name] == "constant":
                stats.adf_counts[name]["constant"] += 1
            elif row.adf[name] is not None:
                key = "stationary" if row.adf[name][2] else "nonstationary"
                stats.adf_counts[name][key] += 1
        for record in seq.iterations:
            for variant in record.variants:
                if variant.rating is None:
                    continue
                hist[record.index - 1, variant.rating] += 1
                ratios.append(float(variant.reduction_ratio))
                ratings.append(int(variant.rating))
                qualities.append(float(variant.quality_mean))

    stats.rating_hist = hist
    stats.n_rated_variants = len(ratings)

    if len(ratings) >= 2:
        try:
            stats.tau_ratio_rating = kendall_tau(ratios, ratings)
        except ValueError:
            stats.tau_ratio_rating = None

    levels = sorted(set(ratings))
    for i, level_a in enumerate(levels):
        for level_b in levels[i + 1:]:
            sample_a = [r for r, g in zip(ratios, ratings) if g == level_a]
            sample_b = [r for r, g in zip(ratios, ratings) if g == level_b]
            u, p = mann_whitney_u(sample_a, sample_b)
            stats.pairwise_u.append(
                (level_a, level_b, u, p, len(sample_a), len(sample_b)))

    if len(set(ratios)) >= 3:
        design = np.column_stack([np.ones(len(ratios)), ratios,
                                  np.square(ratios)])
        coef, _, _, _ = np.linalg.lstsq(design, np.asarray(qualities),
                                        rcond=None)
        stats.quality_fit = tuple(float(c) for c in coef)

    return stats


# -- renderers ---------------------------------------------------------------

def _fmt(value, digits=6) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def render_text(stats: CorpusStats, alpha: float = 0.05) -> str:
    lines = []
    lines.append("evaluation corpus report")
    lines.append("=" * 56)
    lines.append(f"sequences: {stats.n_sequences}")
    lines.append(f"satisfied: {stats.n_satisfied} "
                 f"(rate {_fmt(stats.satisfaction_rate, 4)})")
    lines.append(f"analyzable (>= {MIN_SERIES_LENGTH} iterations): "
                 f"{stats.n_analyzable}")
    lines.append("")
    lines.append(f"trend and stationarity calls (alpha={_fmt(alpha, 3)}; "
                 "ADF: constant, lag 0)")
    for name in SERIES_NAMES:
        mk = stats.mk_counts[name]
        adf = stats.adf_counts[name]
        lines.append(f"  {name}:")
        lines.append(f"    mann-kendall: increasing {mk['increasing']}, "
                     f"decreasing {mk['decreasing']}, none {mk['none']}")
        lines.append(f"    adf: stationary {adf['stationary']}, "
                     f"non-stationary {adf['nonstationary']}, "
                     f"constant {adf['constant']}")
    lines.append("")
    if stats.tau_ratio_rating is not None:
        tau, p = stats.tau_ratio_rating
        lines.append(f"kendall tau, reduction ratio vs rating over "
                     f"{stats.n_rated_variants} rated variants: "
                     f"tau={_fmt(tau)}, p={_fmt(p)}")
    else:
        lines.append("kendall tau, reduction ratio vs rating: undefined "
                     f"({stats.n_rated_variants} rated variants)")
    lines.append("")
    lines.append("mann-whitney U on reduction ratio between rating levels")
    if stats.pairwise_u:
        lines.append("  a b        U          p     n_a   n_b")
        for level_a, level_b, u, p, n_a, n_b in stats.pairwise_u:
            lines.append(f"  {level_a} {level_b} {u:>8.1f} {p:>10.4g} "
                         f"{n_a:>5d} {n_b:>5d}")
    else:
        lines.append("  (not enough rating levels)")
    lines.append("")
    if stats.quality_fit is not None:
        c0, c1, c2 = stats.quality_fit
        lines.append("quality vs reduction ratio, second-order OLS:")
        lines.append(f"  quality = {_fmt(c0)} + {_fmt(c1)}*r + {_fmt(c2)}*r^2")
        lines.append(f"  quadratic coefficient negative: "
                     f"{_fmt(bool(c2 < 0))}")
    else:
        lines.append("quality vs reduction ratio fit: not enough spread")
    lines.append("")
    lines.append("per-sequence table: report.csv; "
                 "rating histogram over iterations: rating_hist.csv")
    return "\n".join(lines) + "\n"


def render_csv(stats: CorpusStats) -> str:
    header = ["session_id", "length", "terminal_state", "satisfied",
              "satisfied_at"]
    for name in SERIES_NAMES:
        header += [f"{name}_mk_s", f"{name}_mk_p", f"{name}_mk_trend",
                   f"{name}_adf_stat", f"{name}_adf_band",
                   f"{name}_adf_stationary"]
    lines = [",".join(header)]
    for row in stats.rows:
        cells = [row.session_id, str(row.length), row.terminal_state,
                 _fmt(row.satisfied), _fmt(row.satisfied_at)]
        for name in SERIES_NAMES:
            mk = row.mk[name]
            cells += ([_fmt(mk[0]), _fmt(mk[1], 10), mk[2]] if mk is not None
                      else ["", "", ""])
            adf = row.adf[name]
            if adf is None:
                cells += ["", "", ""]
            elif adf == "constant":
                cells += ["", "constant", ""]
            else:
                cells += [_fmt(adf[0], 10), adf[1], _fmt(adf[2])]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render_rating_hist_csv(stats: CorpusStats) -> str:
    lines = ["iteration," + ",".join(f"rating_{r}" for r in range(6))]
    for index, counts in enumerate(stats.rating_hist, start=1):
        lines.append(f"{index}," + ",".join(str(int(c)) for c in counts))
    return "\n".join(lines) + "\n"


def write_report(stats: CorpusStats, out_dir, alpha: float = 0.05) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "report.txt": render_text(stats, alpha=alpha),
        "report.csv": render_csv(stats),
        "rating_hist.csv": render_rating_hist_csv(stats),
    }
    for name, content in paths.items():
        (out / name).write_text(content, encoding="utf-8")
    return {name: out / name for name in paths}
