"""Citation-edge classification and citation-strength computation.

Every citation edge falls into exactly one of five categories.  A
coauthorship history between the two papers' authors makes the edge a
COI citation; a shared affiliation without coauthorship makes it a
suspected COI citation.  Either kind is *positive* when at least one
independent paper co-cites the pair (demonstrated relevance) and
*negative* otherwise.  Negative edges are down-weighted exponentially in
the product of decay constant, citation age, and accumulated
relationship strength; everything else keeps weight 1.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .corpus import Corpus, Paper
from .indices import CoauthorIndex, AuthorCiteIndex, CorpusIndices, independent_cociters

logger = logging.getLogger(__name__)

#: Smallest edge weight ever emitted; prevents an underflowed exponential
#: from silently deleting a graph link.
MIN_WEIGHT = 1e-12

#: Default decay constant, following the time-decay convention of the
#: ranking lineage this engine extends; override with --rho.
DEFAULT_RHO = 0.62


class COIClass(Enum):
    NORMAL = "normal"
    POSITIVE_COI = "positive_coi"
    NEGATIVE_COI = "negative_coi"
    POSITIVE_SUSPECTED_COI = "positive_suspected_coi"
    NEGATIVE_SUSPECTED_COI = "negative_suspected_coi"


#: Classes counted as COI citations in aggregation (all four non-normal).
COI_CLASSES = frozenset(
    {
        COIClass.POSITIVE_COI,
        COIClass.NEGATIVE_COI,
        COIClass.POSITIVE_SUSPECTED_COI,
        COIClass.NEGATIVE_SUSPECTED_COI,
    }
)

NEGATIVE_CLASSES = frozenset({COIClass.NEGATIVE_COI, COIClass.NEGATIVE_SUSPECTED_COI})


@dataclass(frozen=True)
class DecayParams:
    """Decay constant and evaluation year for negative-edge weights."""

    rho: float = DEFAULT_RHO
    t_current: int = 0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")

    @classmethod
    def for_corpus(cls, corpus: Corpus, rho: float = DEFAULT_RHO,
                   eval_year: int | None = None) -> "DecayParams":
        max_year = max((p.year for p in corpus.papers.values()), default=0)
        t_current = eval_year if eval_year is not None else max_year
        if t_current < max_year:
            raise ValueError(
                f"evaluation year {t_current} precedes newest paper ({max_year})"
            )
        return cls(rho=rho, t_current=t_current)


@dataclass(frozen=True)
class WeightedEdge:
    """A citation edge with its class, strength, and PageRank weight.

    ``coi_strength`` is nonzero only for negative classes; ``weight``
    is 1 for normal and positive classes and exp-decayed otherwise,
    always within (0, 1].
    """

    citing: str
    cited: str
    coi_class: COIClass
    coi_strength: float
    weight: float


@dataclass
class ClassificationSummary:
    """Per-class tallies for reporting.

    ``author_pairs`` counts distinct unordered author pairs (x != y)
    bearing each relationship; ``papers_involved`` counts distinct papers
    appearing as either endpoint of an edge of that class.
    """

    edge_counts: dict[str, int]
    author_pairs: dict[str, int]
    papers_involved: dict[str, int]
    weight_floor_hits: int

    def as_dict(self) -> dict:
        return {
            "edge_counts": dict(self.edge_counts),
            "author_pairs": dict(self.author_pairs),
            "papers_involved": dict(self.papers_involved),
            "weight_floor_hits": self.weight_floor_hits,
        }


def _coauthored_in_scope(
    record_years: tuple[int, ...], citing_year: int, coi_window: int | None
) -> bool:
    """Collaboration counts when it happened no later than the citing year;
    an optional trailing window restricts it further."""
    if coi_window is None:
        return record_years[0] <= citing_year
    lo = citing_year - coi_window + 1
    return any(lo <= y <= citing_year for y in record_years)


def _has_coauthor_overlap(
    citing: Paper, cited: Paper, indices: CorpusIndices, coi_window: int | None
) -> bool:
    coauthors = indices.coauthors
    for x in indices.paper_authors[citing.id]:
        for y in indices.paper_authors[cited.id]:
            rec = coauthors.get(x, y)
            if rec is not None and _coauthored_in_scope(rec.years, citing.year, coi_window):
                return True
    return False


def _has_affiliation_overlap(citing: Paper, cited: Paper, indices: CorpusIndices) -> bool:
    return bool(indices.paper_affils[citing.id] & indices.paper_affils[cited.id])


def classify_edge(
    citing: Paper,
    cited: Paper,
    indices: CorpusIndices,
    corpus: Corpus,
    coi_window: int | None = None,
) -> COIClass:
    """Assign exactly one of the five categories to a citation edge.

    Coauthorship overlap (including a shared author, whose self pair
    carries their own paper history) takes precedence over affiliation
    overlap; within each branch, one independent co-citer is enough to
    make the relationship positive.
    """
    if _has_coauthor_overlap(citing, cited, indices, coi_window):
        if independent_cociters(citing.id, cited.id, "coi", indices, corpus) >= 1:
            return COIClass.POSITIVE_COI
        return COIClass.NEGATIVE_COI
    if _has_affiliation_overlap(citing, cited, indices):
        if independent_cociters(citing.id, cited.id, "suspected_coi", indices, corpus) >= 1:
            return COIClass.POSITIVE_SUSPECTED_COI
        return COIClass.NEGATIVE_SUSPECTED_COI
    return COIClass.NORMAL


def author_ncoi_strength(x: str, y: str, coauthor_index: CoauthorIndex) -> float:
    """Coauthored-paper count over the inclusive collaboration year span."""
    rec = coauthor_index.get(x, y)
    if rec is None:
        raise ValueError(f"no coauthorship record for pair ({x!r}, {y!r})")
    return rec.count / rec.span


def paper_ncoi_strength(citing: Paper, cited: Paper, coauthor_index: CoauthorIndex) -> float:
    """Relationship strength of a negative COI edge.

    Sums the pairwise coauthorship strengths over every author pair
    across the two papers; pairs with no shared history contribute 0.
    ``math.fsum`` keeps the result independent of pair order.
    """
    terms = []
    for x in citing.author_keys():
        for y in cited.author_keys():
            rec = coauthor_index.get(x, y)
            if rec is not None:
                terms.append(rec.count / rec.span)
    return math.fsum(terms)


def author_nscoi_strength(x: str, y: str, author_cite_index: AuthorCiteIndex) -> float:
    """Citing-paper count over the inclusive citing year span for (x -> y)."""
    rec = author_cite_index.get(x, y)
    if rec is None:
        raise ValueError(f"no citation record for ordered pair ({x!r}, {y!r})")
    return rec.count / rec.span


def paper_nscoi_strength(
    citing: Paper, cited: Paper, author_cite_index: AuthorCiteIndex
) -> float:
    """Relationship strength of a negative suspected COI edge.

    Sums citing-history strengths over ordered author pairs (citing
    author, cited author); absent pairs contribute 0.
    """
    terms = []
    for x in citing.author_keys():
        for y in cited.author_keys():
            rec = author_cite_index.get(x, y)
            if rec is not None:
                terms.append(rec.count / rec.span)
    return math.fsum(terms)


def decay_weight(strength: float, cite_year: int, params: DecayParams) -> float:
    """Negative-edge weight: exp(-rho * (t_current - cite_year + 1) * strength).

    Strength 0 maps to exactly 1; results are floored at ``MIN_WEIGHT``
    so a deeply down-weighted edge never vanishes from the graph.
    """
    if strength < 0:
        raise ValueError(f"strength must be nonnegative, got {strength}")
    span = params.t_current - cite_year + 1
    if span < 1:
        raise ValueError(
            f"citation year {cite_year} is after evaluation year {params.t_current}"
        )
    weight = math.exp(-params.rho * span * strength)
    if weight < MIN_WEIGHT:
        logger.warning(
            "edge weight %.3g floored to %.0e (strength %.3g, span %d)",
            weight, MIN_WEIGHT, strength, span,
        )
        return MIN_WEIGHT
    return weight


# The two negative branches share one decay law; both names are kept so
# call sites read like the formulas they implement.
ncoi_edge_weight = decay_weight
nscoi_edge_weight = decay_weight


def _relationship_pairs(
    citing: Paper, cited: Paper, indices: CorpusIndices, coi_class: COIClass,
    coi_window: int | None,
) -> set[tuple[str, str]]:
    """Distinct unordered author pairs (x != y) bearing the edge's relationship."""
    pairs: set[tuple[str, str]] = set()
    if coi_class in (COIClass.POSITIVE_COI, COIClass.NEGATIVE_COI):
        for x in indices.paper_authors[citing.id]:
            for y in indices.paper_authors[cited.id]:
                if x == y:
                    continue
                rec = indices.coauthors.get(x, y)
                if rec is not None and _coauthored_in_scope(
                    rec.years, citing.year, coi_window
                ):
                    pairs.add(CoauthorIndex.key(x, y))
    else:
        affils = indices.affiliations
        for x, ax in affils[citing.id].items():
            for y, ay in affils[cited.id].items():
                if x != y and set(ax) & set(ay):
                    pairs.add(CoauthorIndex.key(x, y))
    return pairs


def classify_corpus(
    corpus: Corpus,
    indices: CorpusIndices,
    params: DecayParams,
    coi_window: int | None = None,
) -> tuple[list[WeightedEdge], ClassificationSummary]:
    """Classify and weight every citation edge in the corpus.

    Output is canonicalized (sorted by citing id, then cited id) so runs
    are byte-for-byte reproducible.
    """
    edges: list[WeightedEdge] = []
    edge_counts: Counter = Counter()
    pair_sets: dict[str, set] = {c.value: set() for c in COIClass}
    paper_sets: dict[str, set] = {c.value: set() for c in COIClass}
    floor_hits = 0

    for citing_id, cited_id in sorted(corpus.edge_list):
        citing = corpus.papers[citing_id]
        cited = corpus.papers[cited_id]
        coi_class = classify_edge(citing, cited, indices, corpus, coi_window)

        strength = 0.0
        weight = 1.0
        if coi_class is COIClass.NEGATIVE_COI:
            strength = paper_ncoi_strength(citing, cited, indices.coauthors)
            weight = decay_weight(strength, citing.year, params)
        elif coi_class is COIClass.NEGATIVE_SUSPECTED_COI:
            strength = paper_nscoi_strength(citing, cited, indices.author_cites)
            weight = decay_weight(strength, citing.year, params)
        if weight == MIN_WEIGHT:
            floor_hits += 1

        edges.append(WeightedEdge(citing_id, cited_id, coi_class, strength, weight))
        edge_counts[coi_class.value] += 1
        paper_sets[coi_class.value].update((citing_id, cited_id))
        if coi_class is not COIClass.NORMAL:
            pair_sets[coi_class.value].update(
                _relationship_pairs(citing, cited, indices, coi_class, coi_window)
            )

    summary = ClassificationSummary(
        edge_counts={c.value: edge_counts.get(c.value, 0) for c in COIClass},
        author_pairs={c.value: len(pair_sets[c.value]) for c in COIClass},
        papers_involved={c.value: len(paper_sets[c.value]) for c in COIClass},
        weight_floor_hits=floor_hits,
    )
    return edges, summary
