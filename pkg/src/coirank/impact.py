"""Roll paper scores up to scholars, institutions, and countries.

A scholar's impact is the credit-weighted sum of their papers' scores.
Each (paper, author) contribution lands on that mention's first-listed
affiliation, so an author who moves between institutions credits each
paper to where it was written.  Country impact sums institutions.
Alongside impact, this module tallies the COI-citation statistics per
institution and country (sizes, paper counts, COI citation counts, and
the yearly series), which feed the report figures and CSV exports.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .classify import COI_CLASSES, COIClass, WeightedEdge
from .corpus import UNKNOWN, Corpus
from .credit import Share
from .indices import CorpusIndices

ATTRIBUTION_MODES = ("cited", "citing", "both")


@dataclass
class GroupStats:
    """Size, output, COI citations, and impact of one institution/country."""

    key: str
    country: str | None = None
    authors: int = 0
    papers: int = 0
    coi_citations: int = 0
    impact: float = 0.0


@dataclass
class ImpactReport:
    scholar_impact: dict[str, float]
    institution_impact: dict[str, float]
    country_impact: dict[str, float]
    unknown_affiliation_impact: float
    unknown_country_impact: float
    institution_stats: dict[str, GroupStats]
    country_stats: dict[str, GroupStats]
    #: country -> year -> COI citation count (bucketed by citing year)
    yearly_coi: dict[str, dict[int, int]] = field(default_factory=dict)
    #: country -> publication year -> impact contributed
    yearly_impact: dict[str, dict[int, float]] = field(default_factory=dict)


def scholar_impact(
    scores: dict[str, float], credit: dict[str, tuple[Share, ...]]
) -> dict[str, float]:
    """Credit-weighted paper scores per author; sums to the total score mass."""
    totals: dict[str, list[float]] = {}
    for paper_id, shares in credit.items():
        score = scores[paper_id]
        for author_key, share in shares:
            totals.setdefault(author_key, []).append(share * score)
    return {a: math.fsum(parts) for a, parts in sorted(totals.items())}


def primary_affiliation(corpus: Corpus, paper_id: str, author_key: str) -> str | None:
    """First-listed affiliation of the author's mention on that paper."""
    for mention in corpus.papers[paper_id].author_refs:
        if mention.author_key == author_key:
            return mention.affiliation_keys[0] if mention.affiliation_keys else None
    return None


def institution_impact(
    scores: dict[str, float],
    credit: dict[str, tuple[Share, ...]],
    corpus: Corpus,
) -> tuple[dict[str, float], float]:
    """Per-mention rollup to primary institutions.

    Returns the impact map over known institutions plus the mass carried
    by mentions with no affiliation (reported, never dropped).
    """
    parts: dict[str, list[float]] = {}
    unknown: list[float] = []
    for paper_id, shares in credit.items():
        score = scores[paper_id]
        for author_key, share in shares:
            contribution = share * score
            inst = primary_affiliation(corpus, paper_id, author_key)
            if inst is None:
                unknown.append(contribution)
            else:
                parts.setdefault(inst, []).append(contribution)
    impact = {k: math.fsum(v) for k, v in sorted(parts.items())}
    return impact, math.fsum(unknown)


def country_impact(
    institution_map: dict[str, float], corpus: Corpus
) -> tuple[dict[str, float], float]:
    """Sum institution impact per country; unknown-country mass reported."""
    parts: dict[str, list[float]] = {}
    unknown: list[float] = []
    for inst_key, value in institution_map.items():
        country = corpus.institutions[inst_key].country_key
        if country is None:
            unknown.append(value)
        else:
            parts.setdefault(country, []).append(value)
    return {k: math.fsum(v) for k, v in sorted(parts.items())}, math.fsum(unknown)


def _paper_primary_institutions(corpus: Corpus, paper_id: str) -> set[str]:
    insts = set()
    for mention in corpus.papers[paper_id].author_refs:
        if mention.affiliation_keys:
            insts.add(mention.affiliation_keys[0])
    return insts


def coi_statistics(
    weighted_edges: list[WeightedEdge],
    corpus: Corpus,
    indices: CorpusIndices,
    attribution: str = "cited",
    coi_classes: frozenset[COIClass] = COI_CLASSES,
) -> tuple[dict[str, int], dict[str, dict[int, int]]]:
    """COI citation counts per institution plus the per-country yearly series.

    An edge in a counted class credits one COI citation to every primary
    institution of the attributed endpoint (default: the cited paper,
    the beneficiary of the citation).  Country totals are the sum over
    that country's institutions; the yearly series buckets by the citing
    paper's year.
    """
    if attribution not in ATTRIBUTION_MODES:
        raise ValueError(f"unknown attribution mode: {attribution!r}")
    inst_counts: Counter = Counter()
    yearly: dict[str, dict[int, int]] = {}
    for edge in weighted_edges:
        if edge.coi_class not in coi_classes or edge.coi_class is COIClass.NORMAL:
            continue
        year = corpus.papers[edge.citing].year
        endpoints = []
        if attribution in ("cited", "both"):
            endpoints.append(edge.cited)
        if attribution in ("citing", "both"):
            endpoints.append(edge.citing)
        for endpoint in endpoints:
            for inst in _paper_primary_institutions(corpus, endpoint):
                inst_counts[inst] += 1
                country = corpus.institutions[inst].country_key or UNKNOWN
                yearly.setdefault(country, {}).setdefault(year, 0)
                yearly[country][year] += 1
    return dict(inst_counts), yearly


def _membership(corpus: Corpus) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    """Authors and papers attached to each institution via any affiliation."""
    inst_authors: dict[str, set[str]] = {k: set() for k in corpus.institutions}
    inst_papers: dict[str, set[str]] = {k: set() for k in corpus.institutions}
    for paper in corpus.papers.values():
        for mention in paper.author_refs:
            for key in mention.affiliation_keys:
                inst_authors[key].add(mention.author_key)
                inst_papers[key].add(paper.id)
    return inst_authors, inst_papers


def aggregate_impact(
    corpus: Corpus,
    indices: CorpusIndices,
    weighted_edges: list[WeightedEdge],
    credit: dict[str, tuple[Share, ...]],
    scores: dict[str, float],
    attribution: str = "cited",
    coi_classes: frozenset[COIClass] = COI_CLASSES,
) -> ImpactReport:
    """Compute the full impact report for one scored corpus."""
    scholars = scholar_impact(scores, credit)
    inst_impact, unknown_affil = institution_impact(scores, credit, corpus)
    countries, unknown_country = country_impact(inst_impact, corpus)
    inst_coic, yearly_coi = coi_statistics(
        weighted_edges, corpus, indices, attribution, coi_classes
    )
    inst_authors, inst_papers = _membership(corpus)

    institution_stats: dict[str, GroupStats] = {}
    for key in sorted(corpus.institutions):
        institution_stats[key] = GroupStats(
            key=key,
            country=corpus.institutions[key].country_key,
            authors=len(inst_authors[key]),
            papers=len(inst_papers[key]),
            coi_citations=inst_coic.get(key, 0),
            impact=inst_impact.get(key, 0.0),
        )

    country_stats: dict[str, GroupStats] = {}
    country_authors: dict[str, set[str]] = {}
    country_papers: dict[str, set[str]] = {}
    for key, stats in institution_stats.items():
        country = stats.country or UNKNOWN
        entry = country_stats.setdefault(country, GroupStats(key=country))
        entry.coi_citations += stats.coi_citations
        country_authors.setdefault(country, set()).update(inst_authors[key])
        country_papers.setdefault(country, set()).update(inst_papers[key])
    for country, entry in country_stats.items():
        entry.authors = len(country_authors[country])
        entry.papers = len(country_papers[country])
        if country == UNKNOWN:
            entry.impact = unknown_country
        else:
            entry.impact = countries.get(country, 0.0)

    yearly_impact: dict[str, dict[int, float]] = {}
    for paper_id, shares in credit.items():
        paper = corpus.papers[paper_id]
        score = scores[paper_id]
        for author_key, share in shares:
            inst = primary_affiliation(corpus, paper_id, author_key)
            if inst is None:
                continue
            country = corpus.institutions[inst].country_key or UNKNOWN
            bucket = yearly_impact.setdefault(country, {})
            bucket[paper.year] = bucket.get(paper.year, 0.0) + share * score

    return ImpactReport(
        scholar_impact=scholars,
        institution_impact=inst_impact,
        country_impact=countries,
        unknown_affiliation_impact=unknown_affil,
        unknown_country_impact=unknown_country,
        institution_stats=institution_stats,
        country_stats=country_stats,
        yearly_coi=yearly_coi,
        yearly_impact=yearly_impact,
    )
