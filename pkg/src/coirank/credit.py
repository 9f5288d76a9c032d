"""Fractional author credit per paper.

The default ("collective") allocator reconstructs the co-citation based
credit method this engine's author component relies on: an author earns
credit for a paper in proportion to how strongly the papers they appear
on are co-cited with it.  Papers nobody cites fall back to uniform
shares.  Alternative allocators (uniform, first-author) can be swapped
in, since downstream code only consumes the resulting share table.
"""

from __future__ import annotations

import math
from collections import Counter

from .corpus import Corpus, Paper
from .indices import CoCitationIndex

SCHEMES = ("collective", "uniform", "first-author")

Share = tuple[str, float]


def _collective_shares(
    paper: Paper,
    corpus: Corpus,
    cocitations: CoCitationIndex,
    citation_count: int,
) -> list[Share]:
    authors = paper.author_keys()
    if len(authors) == 1:
        return [(authors[0], 1.0)]

    # co-cited set, led by the paper itself with its own citation count
    # as self strength; uncited papers thus fall through to uniform
    partners = cocitations.partner_counts(paper.id)
    docs: list[tuple[frozenset[str], int]] = [
        (frozenset(authors), citation_count)
    ]
    for partner_id in sorted(partners):
        partner = corpus.papers[partner_id]
        docs.append((frozenset(partner.author_keys()), partners[partner_id]))

    raw: dict[str, float] = {a: 0.0 for a in authors}
    for doc_authors, strength in docs:
        if strength == 0 or not doc_authors:
            continue
        fraction = strength / len(doc_authors)
        for a in authors:
            if a in doc_authors:
                raw[a] += fraction

    total = math.fsum(raw.values())
    if total == 0.0:
        return [(a, 1.0 / len(authors)) for a in authors]
    return [(a, raw[a] / total) for a in authors]


def credit_shares(
    paper: Paper,
    corpus: Corpus,
    cocitations: CoCitationIndex,
    scheme: str = "collective",
    citation_count: int | None = None,
) -> list[Share]:
    """Allocate one paper's unit of credit across its authors.

    Shares are returned in author order and always sum to 1.
    """
    authors = paper.author_keys()
    if scheme == "uniform":
        return [(a, 1.0 / len(authors)) for a in authors]
    if scheme == "first-author":
        return [(a, 1.0 if i == 0 else 0.0) for i, a in enumerate(authors)]
    if scheme != "collective":
        raise ValueError(f"unknown credit scheme: {scheme!r}")
    if citation_count is None:
        citation_count = sum(1 for _, cited in corpus.edge_list if cited == paper.id)
    return _collective_shares(paper, corpus, cocitations, citation_count)


def credit_table(
    corpus: Corpus,
    cocitations: CoCitationIndex,
    scheme: str = "collective",
) -> dict[str, tuple[Share, ...]]:
    """Credit shares for every paper in the corpus."""
    in_counts = Counter(cited for _, cited in corpus.edge_list)
    return {
        paper.id: tuple(
            credit_shares(paper, corpus, cocitations, scheme, in_counts[paper.id])
        )
        for paper in corpus.papers.values()
    }


def uniform_credit_table(corpus: Corpus) -> dict[str, tuple[Share, ...]]:
    """Equal-contribution shares, used by the baseline rankers."""
    table = {}
    for paper in corpus.papers.values():
        authors = paper.author_keys()
        table[paper.id] = tuple((a, 1.0 / len(authors)) for a in authors)
    return table
