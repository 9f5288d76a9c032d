"""Derived lookup structures over a corpus.

Everything downstream classification and ranking needs is precomputed
here: coauthorship history per author pair, citation history between
ordered author pairs, co-citation lists per paper pair, affiliation
membership, and author publication lists.  All structures are immutable
once built and exactly reproducible by brute-force enumeration (the test
suite holds them to that).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .corpus import Corpus

Pair = tuple[str, str]


@dataclass(frozen=True)
class CollabRecord:
    """Coauthorship history of one (unordered) author pair.

    ``count`` is the number of papers both authored; ``years`` holds one
    entry per such paper (with multiplicity), sorted.  Self pairs (x, x)
    are stored too: an author shares every one of their papers with
    themself, which is what makes same-author self-citation fall under
    the coauthorship branch of classification.
    """

    count: int
    years: tuple[int, ...]

    @property
    def first_year(self) -> int:
        return self.years[0]

    @property
    def last_year(self) -> int:
        return self.years[-1]

    @property
    def span(self) -> int:
        """Inclusive year span between first and last shared paper."""
        return self.last_year - self.first_year + 1


@dataclass(frozen=True)
class CiteRecord:
    """Citing history of one ordered author pair (x cites y).

    ``count`` is the number of distinct papers by x citing at least one
    paper by y; ``years`` are those citing papers' years, sorted.
    """

    count: int
    years: tuple[int, ...]

    @property
    def first_year(self) -> int:
        return self.years[0]

    @property
    def last_year(self) -> int:
        return self.years[-1]

    @property
    def span(self) -> int:
        return self.last_year - self.first_year + 1


class CoauthorIndex:
    """Unordered author-pair -> CollabRecord."""

    def __init__(self, pairs: dict[Pair, CollabRecord]):
        self.pairs = pairs

    @staticmethod
    def key(x: str, y: str) -> Pair:
        return (x, y) if x <= y else (y, x)

    def get(self, x: str, y: str) -> CollabRecord | None:
        return self.pairs.get(self.key(x, y))

    def __len__(self) -> int:
        return len(self.pairs)


class AuthorCiteIndex:
    """Ordered author-pair (citing, cited) -> CiteRecord."""

    def __init__(self, pairs: dict[Pair, CiteRecord]):
        self.pairs = pairs

    def get(self, x: str, y: str) -> CiteRecord | None:
        return self.pairs.get((x, y))

    def __len__(self) -> int:
        return len(self.pairs)


class CoCitationIndex:
    """Unordered paper-pair -> ids of papers citing both (sorted)."""

    def __init__(self, pairs: dict[Pair, tuple[str, ...]]):
        self.pairs = pairs
        self._partners: dict[str, dict[str, int]] | None = None

    @staticmethod
    def key(i: str, j: str) -> Pair:
        return (i, j) if i <= j else (j, i)

    def cociters(self, i: str, j: str) -> tuple[str, ...]:
        return self.pairs.get(self.key(i, j), ())

    def partner_counts(self, paper_id: str) -> dict[str, int]:
        """Papers co-cited with *paper_id*, mapped to co-citation strength."""
        if self._partners is None:
            partners: dict[str, dict[str, int]] = {}
            for (i, j), citers in self.pairs.items():
                partners.setdefault(i, {})[j] = len(citers)
                partners.setdefault(j, {})[i] = len(citers)
            self._partners = partners
        return self._partners.get(paper_id, {})

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class CorpusIndices:
    coauthors: CoauthorIndex
    author_cites: AuthorCiteIndex
    cocitations: CoCitationIndex
    #: paper id -> author key -> affiliation keys on that mention
    affiliations: dict[str, dict[str, tuple[str, ...]]]
    #: author key -> ids of papers they authored (corpus order)
    author_papers: dict[str, tuple[str, ...]]
    #: paper id -> distinct author keys
    paper_authors: dict[str, frozenset[str]] = field(repr=False, default_factory=dict)
    #: paper id -> union of affiliation keys across its mentions
    paper_affils: dict[str, frozenset[str]] = field(repr=False, default_factory=dict)
    #: paper id -> number of papers in the corpus citing it
    citation_counts: dict[str, int] = field(repr=False, default_factory=dict)


def build_indices(corpus: Corpus) -> CorpusIndices:
    """Build all derived indices in one pass family over the corpus."""
    author_papers: dict[str, list[str]] = {}
    affiliations: dict[str, dict[str, tuple[str, ...]]] = {}
    paper_authors: dict[str, frozenset[str]] = {}
    paper_affils: dict[str, frozenset[str]] = {}

    collab: dict[Pair, list[int]] = {}
    for paper in corpus.papers.values():
        per_author: dict[str, tuple[str, ...]] = {}
        affil_union: set[str] = set()
        for mention in paper.author_refs:
            if mention.author_key not in per_author:
                per_author[mention.author_key] = mention.affiliation_keys
            affil_union.update(mention.affiliation_keys)
        affiliations[paper.id] = per_author
        paper_authors[paper.id] = frozenset(per_author)
        paper_affils[paper.id] = frozenset(affil_union)

        keys = sorted(per_author)
        for key in keys:
            author_papers.setdefault(key, []).append(paper.id)
        # pairs with replacement: (x, x) records carry the author's own
        # paper history, so a shared author across an edge counts as
        # coauthorship overlap
        for a in range(len(keys)):
            for b in range(a, len(keys)):
                collab.setdefault((keys[a], keys[b]), []).append(paper.year)

    coauthors = CoauthorIndex(
        {
            pair: CollabRecord(len(years), tuple(sorted(years)))
            for pair, years in collab.items()
        }
    )

    citing_sets: dict[Pair, set[str]] = {}
    citation_counts: dict[str, int] = {pid: 0 for pid in corpus.papers}
    for citing_id, cited_id in corpus.edge_list:
        citation_counts[cited_id] += 1
        for x in paper_authors[citing_id]:
            for y in paper_authors[cited_id]:
                citing_sets.setdefault((x, y), set()).add(citing_id)
    author_cites = AuthorCiteIndex(
        {
            pair: CiteRecord(
                len(papers),
                tuple(sorted(corpus.papers[p].year for p in papers)),
            )
            for pair, papers in citing_sets.items()
        }
    )

    cocite: dict[Pair, list[str]] = {}
    for paper in corpus.papers.values():
        internal = [r for r in paper.references if r in corpus.papers]
        for i, j in combinations(sorted(internal), 2):
            cocite.setdefault((i, j), []).append(paper.id)
    cocitations = CoCitationIndex(
        {pair: tuple(sorted(ids)) for pair, ids in cocite.items()}
    )

    return CorpusIndices(
        coauthors=coauthors,
        author_cites=author_cites,
        cocitations=cocitations,
        affiliations=affiliations,
        author_papers={k: tuple(v) for k, v in author_papers.items()},
        paper_authors=paper_authors,
        paper_affils=paper_affils,
        citation_counts=citation_counts,
    )


def independent_cociters(
    i: str,
    j: str,
    mode: str,
    indices: CorpusIndices,
    corpus: Corpus,
) -> int:
    """Count co-citing papers independent of both endpoints.

    ``mode="coi"`` requires the co-citer to share no author key with
    either endpoint; ``mode="suspected_coi"`` requires it to share no
    affiliation key instead.
    """
    if i == j:
        raise ValueError("co-citation is defined for distinct papers")
    if mode == "coi":
        blocked = indices.paper_authors[i] | indices.paper_authors[j]
        member = indices.paper_authors
    elif mode == "suspected_coi":
        blocked = indices.paper_affils[i] | indices.paper_affils[j]
        member = indices.paper_affils
    else:
        raise ValueError(f"unknown independence mode: {mode!r}")
    return sum(1 for c in indices.cocitations.cociters(i, j) if not (member[c] & blocked))
