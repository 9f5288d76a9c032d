"""Ranking evaluation against a COI-free ground truth.

The ground truth orders papers by citation count after discarding every
edge classified in any COI category (positive or negative, coauthor or
affiliation based): only citations free of any conflict count.  Two
metrics compare an algorithm's list against it at top-k: a
rank-discounted overlap score (recommendation intensity) and the rank
correlation of positions.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classify import COIClass, WeightedEdge
from .corpus import Corpus
from .credit import Share
from .rank import RankParams, run_algorithm, ALGORITHMS

logger = logging.getLogger(__name__)

SPEARMAN_DOMAINS = ("union", "intersection", "full")


@dataclass(frozen=True)
class GroundTruth:
    """All corpus papers ordered by COI-free citation count."""

    order: tuple[str, ...]
    counts: dict[str, int]


@dataclass(frozen=True)
class EvalRow:
    k: int
    algo: str
    ri: float
    ri_normalized: float
    spearman: float


def build_ground_truth(weighted_edges: list[WeightedEdge], corpus: Corpus) -> GroundTruth:
    """Rank every paper by its count of NORMAL-class in-edges."""
    counts = Counter()
    for edge in weighted_edges:
        if edge.coi_class is COIClass.NORMAL:
            counts[edge.cited] += 1
    full = {pid: counts.get(pid, 0) for pid in corpus.paper_ids}
    order = sorted(full, key=lambda pid: (-full[pid], corpus.papers[pid].year, pid))
    return GroundTruth(order=tuple(order), counts=full)


def paper_ri(ro: int, k: int, in_truth: bool) -> float:
    """Per-paper recommendation intensity at 1-based rank *ro*."""
    if not in_truth:
        return 0.0
    return 1.0 + (k - ro) / k


def max_ri(k: int) -> float:
    """List score under perfect agreement: sum of 1+(k-ro)/k over ro=1..k."""
    return k + (k - 1) / 2.0


def ri_at_k(
    ranked: Sequence[str],
    truth_order: Sequence[str],
    k: int,
    normalized: bool = False,
) -> float:
    """Recommendation intensity of a ranked list at top-k.

    Each of the list's top-k papers scores 1+(k-ro)/k if it also appears
    in the ground truth's top-k, else 0; the list score is the sum,
    optionally normalized by the perfect-agreement maximum to a 0-1
    accuracy rate.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > len(ranked) or k > len(truth_order):
        raise ValueError(f"k={k} exceeds list length")
    truth_top = set(truth_order[:k])
    total = math.fsum(
        paper_ri(ro, k, pid in truth_top)
        for ro, pid in enumerate(ranked[:k], start=1)
    )
    return total / max_ri(k) if normalized else total


def spearman_at_k(
    ranked: Sequence[str],
    truth_order: Sequence[str],
    k: int | None = None,
    domain: str = "union",
) -> float:
    """Rank correlation between an algorithm's list and the ground truth.

    Positions are correlated Pearson-style.  With the default "union"
    domain, papers in either top-k participate and a paper missing from
    one list's top-k takes penalty rank |union|+1 there; "intersection"
    keeps only shared papers; "full" correlates the complete lists.  A
    degenerate (zero-variance) rank vector yields 0 with a warning.
    """
    if domain not in SPEARMAN_DOMAINS:
        raise ValueError(f"unknown spearman domain: {domain!r}")
    if domain == "full" or k is None:
        members = list(truth_order)
        pos_r = {pid: i for i, pid in enumerate(ranked, start=1)}
        pos_t = {pid: i for i, pid in enumerate(truth_order, start=1)}
    else:
        if k > len(ranked) or k > len(truth_order):
            raise ValueError(f"k={k} exceeds list length")
        top_r = list(ranked[:k])
        top_t = list(truth_order[:k])
        pos_r = {pid: i for i, pid in enumerate(top_r, start=1)}
        pos_t = {pid: i for i, pid in enumerate(top_t, start=1)}
        if domain == "intersection":
            members = [pid for pid in top_t if pid in pos_r]
        else:
            members = sorted(set(top_r) | set(top_t))
            penalty = len(members) + 1
            pos_r = {pid: pos_r.get(pid, penalty) for pid in members}
            pos_t = {pid: pos_t.get(pid, penalty) for pid in members}
    if not members:
        logger.warning("empty rank domain; correlation undefined, returning 0")
        return 0.0

    r1 = np.array([pos_t[pid] for pid in members], dtype=np.float64)
    r2 = np.array([pos_r[pid] for pid in members], dtype=np.float64)
    d1 = r1 - r1.mean()
    d2 = r2 - r2.mean()
    denom = math.sqrt(float((d1 * d1).sum()) * float((d2 * d2).sum()))
    if denom == 0.0:
        logger.warning("degenerate rank vectors (all tied); returning 0")
        return 0.0
    return float((d1 * d2).sum()) / denom


def default_k_values(k_min: int = 10, k_max: int = 300, k_step: int = 10) -> list[int]:
    return list(range(k_min, k_max + 1, k_step))


def compare_algorithms(
    corpus: Corpus,
    weighted_edges: list[WeightedEdge],
    credit: dict[str, tuple[Share, ...]],
    params: RankParams,
    k_values: Sequence[int] | None = None,
    eval_year: int | None = None,
    spearman_domain: str = "union",
    algorithms: Sequence[str] = ALGORITHMS,
) -> tuple[list[EvalRow], dict[str, bool]]:
    """Run the configured rankers and score each against the ground truth.

    k values exceeding the corpus size are dropped (with a warning); at
    least one must survive.  Returns the metric table plus per-algorithm
    convergence flags.
    """
    if k_values is None:
        k_values = default_k_values()
    usable = [k for k in k_values if k <= len(corpus)]
    if len(usable) < len(k_values):
        logger.warning(
            "dropping %d k values exceeding corpus size %d",
            len(k_values) - len(usable), len(corpus),
        )
    if not usable:
        raise ValueError("no usable k values: all exceed the corpus size")

    truth = build_ground_truth(weighted_edges, corpus)
    rows: list[EvalRow] = []
    converged: dict[str, bool] = {}
    for algo in algorithms:
        state, ranking = run_algorithm(
            algo, corpus, weighted_edges, credit, params, eval_year
        )
        converged[algo] = state.converged
        for k in usable:
            rows.append(
                EvalRow(
                    k=k,
                    algo=algo,
                    ri=ri_at_k(ranking, truth.order, k),
                    ri_normalized=ri_at_k(ranking, truth.order, k, normalized=True),
                    spearman=spearman_at_k(ranking, truth.order, k, spearman_domain),
                )
            )
    return rows, converged
