"""Score post-processing: percentiles, weighted aggregates, distributions,
quadrant classification, productivity ratios, and dataset eligibility."""

import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import DataError, DmuInput, EfficiencyScores

Triple = tuple[float, float, float]  # (te, ae, ce)


@dataclass(frozen=True)
class PercentileScore:
    score: float
    r_pct: float


@dataclass(frozen=True)
class AggregateScores:
    """Cost-weighted average scores of a group of SDS rows."""

    te: float
    ae: float
    ce: float
    total_weight: float
    te_pct: float | None = None
    ae_pct: float | None = None
    ce_pct: float | None = None


@dataclass(frozen=True)
class QuadrantSummary:
    """DMU counts in the four cells of the TE x AE plane."""

    both_low: int
    high_ae_low_te: int
    both_high: int
    high_te_low_ae: int

    def total(self) -> int:
        return self.both_low + self.high_ae_low_te + self.both_high + self.high_te_low_ae


@dataclass(frozen=True)
class Histogram:
    counts: tuple[int, ...]
    median: float
    bin_width: float = 0.2

    def edges(self) -> list[float]:
        return [i * self.bin_width for i in range(len(self.counts) + 1)]


@dataclass(frozen=True)
class EligibilityDecision:
    include: bool
    failed_criteria: tuple[str, ...] = ()


def percentile_rank(scores: Sequence[float], target: float) -> float:
    """Rank of ``target`` within ``scores`` on a 0-100 scale, 100 best.

    Strictly worse scores count fully, ties (other than the target itself)
    count half, and the result is anchored so a unique best maps to 100 and
    a unique worst to 0.
    """
    if len(scores) < 2:
        raise DataError("percentile rank is undefined for fewer than two scores")
    if target not in scores:
        raise DataError(f"target score {target} not among the scores")
    worse = sum(1 for s in scores if s < target)
    tied_others = sum(1 for s in scores if s == target) - 1
    return 100.0 * (worse + 0.5 * tied_others) / (len(scores) - 1)


def percentile_scores(scores: Sequence[float]) -> list[PercentileScore]:
    """Annotate every score with its percentile rank within the list."""
    return [PercentileScore(score=s, r_pct=percentile_rank(scores, s)) for s in scores]


def aggregate_weighted(rows: Sequence[tuple[Triple, float]]) -> AggregateScores:
    """Weighted mean of (te, ae, ce) triples; weights are staff costs in k EUR."""
    if not rows:
        raise DataError("cannot aggregate an empty list of rows")
    if any(w <= 0 for _, w in rows):
        raise DataError("aggregation weights must be strictly positive")
    total = sum(w for _, w in rows)
    te, ae, ce = (
        sum(t[k] * w for t, w in rows) / total for k in range(3)
    )
    return AggregateScores(te=te, ae=ae, ce=ce, total_weight=total)


def histogram(scores: Sequence[float], bin_width: float = 0.2) -> Histogram:
    """Bin scores over [0, 1]; the final bin is closed so 1.0 is counted."""
    if not scores:
        raise DataError("cannot build a histogram from no scores")
    if any(s < 0 or s > 1 for s in scores):
        raise DataError("histogram scores must lie in [0, 1]")
    n_bins = round(1.0 / bin_width)
    counts = [0] * n_bins
    for s in scores:
        # snap away float-division drift so edge scores bin left-closed
        # (0.6 / 0.2 is 2.9999... in binary floats)
        idx = min(int(round(s / bin_width, 9)), n_bins - 1)
        counts[idx] += 1
    return Histogram(
        counts=tuple(counts), median=statistics.median(scores), bin_width=bin_width
    )


def _te_ae(value) -> tuple[float, float]:
    if isinstance(value, EfficiencyScores):
        return value.te, value.ae
    te, ae = value[0], value[1]
    return te, ae


def efficiency_matrix(scores: Mapping[str, object], threshold: float = 0.5) -> QuadrantSummary:
    """Classify DMUs by (te >= threshold, ae >= threshold).

    Values may be EfficiencyScores or plain (te, ae[, ce]) tuples, so that
    externally reported score tables can be classified as-is.
    """
    if not scores:
        raise DataError("cannot classify an empty score map")
    cells = {(False, False): 0, (False, True): 0, (True, True): 0, (True, False): 0}
    for value in scores.values():
        te, ae = _te_ae(value)
        cells[(te >= threshold, ae >= threshold)] += 1
    return QuadrantSummary(
        both_low=cells[(False, False)],
        high_ae_low_te=cells[(False, True)],
        both_high=cells[(True, True)],
        high_te_low_ae=cells[(True, False)],
    )


def productivity_ratio(ss: float, dmu: DmuInput) -> float:
    """Output per staff-year, the naive single-ratio productivity index."""
    return ss / dmu.total_years()


def eligibility_filter(
    universities_active: int,
    fraction_publishing: float,
    min_active: int = 24,
    min_fraction: float = 0.5,
) -> EligibilityDecision:
    """Decide whether an SDS enters the assessment.

    ``fraction_publishing`` guards significance (publications must be a
    meaningful output proxy for the field); ``universities_active`` guards
    robustness of the frontier estimate.
    """
    if universities_active < 0:
        raise DataError("universities_active must be >= 0")
    if not 0 <= fraction_publishing <= 1:
        raise DataError("fraction_publishing must lie in [0, 1]")
    failed = []
    if fraction_publishing < min_fraction:
        failed.append("significance")
    if universities_active < min_active:
        failed.append("robustness")
    return EligibilityDecision(include=not failed, failed_criteria=tuple(failed))


def rank_divergence(
    scores_by_ce: Mapping[str, float], scores_by_ratio: Mapping[str, float]
) -> dict[str, int]:
    """Signed rank shift per DMU between the CE ordering and the naive
    output-per-staff-year ordering (positive = worse off under the ratio).

    Ranks are competition-style: 1 plus the number of strictly better scores.
    """
    if set(scores_by_ce) != set(scores_by_ratio):
        raise DataError("rank divergence requires identical DMU sets")
    if not scores_by_ce:
        raise DataError("rank divergence of an empty DMU set")

    def ranks(scores: Mapping[str, float]) -> dict[str, int]:
        return {
            k: 1 + sum(1 for other in scores.values() if other > v)
            for k, v in scores.items()
        }

    ce_ranks = ranks(scores_by_ce)
    ratio_ranks = ranks(scores_by_ratio)
    return {k: ratio_ranks[k] - ce_ranks[k] for k in scores_by_ce}
