"""Fixed-point ranking over the weighted citation graph.

The authority score of every paper is iterated to convergence as a
mixture of four components: a weighted PageRank term over the citation
graph, and hubs-and-authorities terms propagated through authors (with
fractional credit), journals, and references.  The residual mixing mass
is a random jump.  Two baseline configurations reuse the same iteration:
one with all edge weights forced to 1 and uniform credit, and one that
additionally drops the journal component and replaces the uniform jump
with a publication-age-decayed distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .classify import WeightedEdge
from .corpus import Corpus
from .credit import Share, uniform_credit_table

#: Mixing weights must leave at least this much random-jump mass.
JUMP_MASS = 0.15
_SUM_LIMIT = 1.0 - JUMP_MASS

ALGORITHMS = ("pandora", "cajtrank", "futurerank")


@dataclass(frozen=True)
class RankParams:
    """Mixing weights and iteration controls.

    alpha/beta/gamma/delta weight the PageRank, author, journal, and
    reference components; their sum may not exceed 0.85, the remainder
    being the random-jump probability.
    """

    alpha: float = 0.4
    beta: float = 0.15
    gamma: float = 0.15
    delta: float = 0.15
    rho: float = 0.62
    epsilon: float = 1e-4
    max_iters: int = 200

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.mix_sum() > _SUM_LIMIT + 1e-9:
            raise ValueError(
                f"alpha+beta+gamma+delta = {self.mix_sum():.4f} exceeds {_SUM_LIMIT}"
            )
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")

    def mix_sum(self) -> float:
        return self.alpha + self.beta + self.gamma + self.delta

    def jump_mass(self) -> float:
        return 1.0 - self.mix_sum()


@dataclass
class RankState:
    """Converged (or capped) iteration result."""

    paper_ids: tuple[str, ...]
    scores: np.ndarray
    pagerank: np.ndarray
    author: np.ndarray
    journal: np.ndarray
    reference: np.ndarray
    iterations: int
    max_delta: float
    converged: bool

    def score_map(self) -> dict[str, float]:
        return {pid: float(s) for pid, s in zip(self.paper_ids, self.scores)}


class RankingProblem:
    """Precomputed array form of one corpus + edge weighting + credit table.

    All step methods are pure functions of the previous score vector, so
    one problem instance can be reused across parameter settings (the
    grid search relies on this).
    """

    def __init__(
        self,
        corpus: Corpus,
        weighted_edges: list[WeightedEdge] | None = None,
        credit: dict[str, tuple[Share, ...]] | None = None,
    ):
        ids = corpus.paper_ids
        index = corpus.index_of()
        n = len(ids)
        if n == 0:
            raise ValueError("cannot rank an empty corpus")
        self.paper_ids = ids
        self.n = n
        self.years = np.array([corpus.papers[p].year for p in ids], dtype=np.int64)

        if weighted_edges is None:
            src = [index[c] for c, _ in corpus.edge_list]
            dst = [index[d] for _, d in corpus.edge_list]
            w = np.ones(len(src))
        else:
            src = [index[e.citing] for e in weighted_edges]
            dst = [index[e.cited] for e in weighted_edges]
            w = np.array([e.weight for e in weighted_edges], dtype=np.float64)
        self.src = np.array(src, dtype=np.int64)
        self.dst = np.array(dst, dtype=np.int64)
        self.weights = w
        self.out_degree = np.bincount(self.src, minlength=n).astype(np.float64)
        self.dangling = self.out_degree == 0
        # per-edge share of the citing paper's score
        self.edge_coeff = self.weights / np.where(self.dangling[self.src], 1.0, self.out_degree[self.src])

        if credit is None:
            credit = uniform_credit_table(corpus)
        authors: dict[str, int] = {}
        cr_paper, cr_author, cr_share = [], [], []
        for pid in ids:
            for author_key, share in credit[pid]:
                a = authors.setdefault(author_key, len(authors))
                cr_paper.append(index[pid])
                cr_author.append(a)
                cr_share.append(share)
        self.n_authors = len(authors)
        self.cr_paper = np.array(cr_paper, dtype=np.int64)
        self.cr_author = np.array(cr_author, dtype=np.int64)
        self.cr_share = np.array(cr_share, dtype=np.float64)
        self.author_paper_counts = np.bincount(
            self.cr_author, minlength=self.n_authors
        ).astype(np.float64)

        journals: dict[str, int] = {}
        jr = [journals.setdefault(corpus.papers[p].journal, len(journals)) for p in ids]
        self.paper_journal = np.array(jr, dtype=np.int64)
        self.n_journals = len(journals)
        self.journal_sizes = np.bincount(self.paper_journal, minlength=self.n_journals).astype(np.float64)

    # -- single-iteration component updates (all read the previous scores) --

    def pagerank_step(self, scores: np.ndarray) -> np.ndarray:
        """Weighted PageRank term: each citer passes weight/out-degree of
        its score along each edge; dangling papers spread theirs uniformly."""
        out = np.zeros(self.n)
        np.add.at(out, self.dst, self.edge_coeff * scores[self.src])
        out += scores[self.dangling].sum() / self.n
        return out

    def author_step(self, scores: np.ndarray) -> np.ndarray:
        """Author hub term: an author's hub is the credit-weighted mean
        score of their papers; each paper sums its authors' hubs,
        normalized by the total hub mass."""
        inner = np.zeros(self.n_authors)
        np.add.at(inner, self.cr_author, self.cr_share * scores[self.cr_paper])
        hubs = inner / self.author_paper_counts
        total = hubs.sum()
        if total <= 0:
            return np.zeros(self.n)
        out = np.zeros(self.n)
        np.add.at(out, self.cr_paper, hubs[self.cr_author])
        return out / total


    def journal_step(self, scores: np.ndarray) -> np.ndarray:
        """Journal hub term: mean score of the journal's papers,
        normalized by total journal hub mass."""
        sums = np.zeros(self.n_journals)
        np.add.at(sums, self.paper_journal, scores)
        hubs = sums / self.journal_sizes
        total = hubs.sum()
        if total <= 0:
            return np.zeros(self.n)
        return hubs[self.paper_journal] / total

    def reference_step(self, scores: np.ndarray) -> np.ndarray:
        """Reference hub term: a citer's hub is the mean score of its
        references; each paper collects its citers' hubs, normalized by
        total hub mass."""
        ref_sums = np.zeros(self.n)
        np.add.at(ref_sums, self.src, scores[self.dst])
        hubs = np.where(self.dangling, 0.0, ref_sums / np.where(self.dangling, 1.0, self.out_degree))
        total = hubs.sum()
        if total <= 0:
            return np.zeros(self.n)
        out = np.zeros(self.n)
        np.add.at(out, self.dst, hubs[self.src])
        return out / total

    def age_personalization(self, rho: float, t_current: int) -> np.ndarray:
        """Jump distribution decaying exponentially with publication age."""
        decayed = np.exp(-rho * (t_current - self.years).astype(np.float64))
        return decayed / decayed.sum()


def combine_scores(
    components: dict[str, np.ndarray],
    params: RankParams,
    n: int,
    personalization: np.ndarray | None = None,
) -> np.ndarray:
    """Mix the four component vectors plus the random-jump term."""
    jump = params.jump_mass() * (
        personalization if personalization is not None else np.full(n, 1.0 / n)
    )
    return (
        params.alpha * components["pagerank"]
        + params.beta * components["author"]
        + params.gamma * components["journal"]
        + params.delta * components["reference"]
        + jump
    )


def iterate(
    problem: RankingProblem,
    params: RankParams,
    personalization: np.ndarray | None = None,
) -> RankState:
    """Run the fixed-point iteration until the largest per-paper score
    change drops below epsilon, or the iteration cap is hit."""
    n = problem.n
    scores = np.full(n, 1.0 / n)
    components = {
        "pagerank": np.zeros(n),
        "author": np.zeros(n),
        "journal": np.zeros(n),
        "reference": np.zeros(n),
    }
    max_delta = math.inf
    iterations = 0
    converged = False
    for iterations in range(1, params.max_iters + 1):
        components = {
            "pagerank": problem.pagerank_step(scores),
            "author": problem.author_step(scores),
            "journal": problem.journal_step(scores),
            "reference": problem.reference_step(scores),
        }
        new_scores = combine_scores(components, params, n, personalization)
        max_delta = float(np.max(np.abs(new_scores - scores)))
        scores = new_scores
        if max_delta < params.epsilon:
            converged = True
            break
    return RankState(
        paper_ids=problem.paper_ids,
        scores=scores,
        pagerank=components["pagerank"],
        author=components["author"],
        journal=components["journal"],
        reference=components["reference"],
        iterations=iterations,
        max_delta=max_delta,
        converged=converged,
    )


def ranked_ids(state: RankState, corpus: Corpus) -> list[str]:
    """Papers by descending score; ties broken by year, then id."""
    score = state.score_map()
    return sorted(
        state.paper_ids,
        key=lambda pid: (-score[pid], corpus.papers[pid].year, pid),
    )




def run_to_convergence(
    corpus: Corpus,
    weighted_edges: list[WeightedEdge],
    credit: dict[str, tuple[Share, ...]],
    params: RankParams,
) -> tuple[RankState, list[str]]:
    """Full COI-weighted ranking run; returns the state and ranked ids."""
    problem = RankingProblem(corpus, weighted_edges, credit)
    state = iterate(problem, params)
    return state, ranked_ids(state, corpus)


def cajtrank_baseline(
    corpus: Corpus, params: RankParams
) -> tuple[RankState, list[str]]:
    """Baseline: identical iteration with every edge weight forced to 1
    and equal author contributions."""
    problem = RankingProblem(corpus, None, None)
    state = iterate(problem, params)
    return state, ranked_ids(state, corpus)


def futurerank_baseline(
    corpus: Corpus,
    params: RankParams,
    eval_year: int | None = None,
) -> tuple[RankState, list[str]]:
    """Baseline: unit weights and equal credit, no journal component, and
    a random jump biased toward recent papers (exp decay in age)."""
    problem = RankingProblem(corpus, None, None)
    effective = replace(params, gamma=0.0)
    t_current = eval_year if eval_year is not None else int(problem.years.max())
    personalization = problem.age_personalization(params.rho, t_current)
    state = iterate(problem, effective, personalization)
    return state, ranked_ids(state, corpus)


def run_algorithm(
    algo: str,
    corpus: Corpus,
    weighted_edges: list[WeightedEdge],
    credit: dict[str, tuple[Share, ...]],
    params: RankParams,
    eval_year: int | None = None,
) -> tuple[RankState, list[str]]:
    """Dispatch one of the three named ranking configurations."""
    if algo == "pandora":
        return run_to_convergence(corpus, weighted_edges, credit, params)
    if algo == "cajtrank":
        return cajtrank_baseline(corpus, params)
    if algo == "futurerank":
        return futurerank_baseline(corpus, params, eval_year)
    raise ValueError(f"unknown algorithm: {algo!r}")


@dataclass
class GridSearchResult:
    best: RankParams
    best_score: float
    rows: list[tuple[float, float, float, float, float]] = field(repr=False, default_factory=list)


def grid_search(
    corpus: Corpus,
    weighted_edges: list[WeightedEdge],
    credit: dict[str, tuple[Share, ...]],
    base_params: RankParams,
    truth_order: list[str],
    k_values: list[int],
    step: float = 0.05,
) -> GridSearchResult:
    """Exhaustive search over mixing weights on the 0.85 simplex.

    Scores each grid point by the mean normalized recommendation
    intensity over the k grid against the COI-free ground truth; first
    maximum in lexicographic (alpha, beta, gamma, delta) order wins.
    """
    from .evaluation import ri_at_k  # local import: avoids a module cycle

    problem = RankingProblem(corpus, weighted_edges, credit)
    ks = [k for k in k_values if k <= problem.n]
    if not ks:
        raise ValueError("no usable k values: all exceed the corpus size")

    units = round(_SUM_LIMIT / step)
    best_params = None
    best_score = -math.inf
    rows = []
    for a in range(units + 1):
        for b in range(units + 1 - a):
            for g in range(units + 1 - a - b):
                d = units - a - b - g
                params = replace(
                    base_params,
                    alpha=a * step, beta=b * step, gamma=g * step, delta=d * step,
                )
                state = iterate(problem, params)
                ranking = ranked_ids(state, corpus)
                score = float(
                    np.mean([ri_at_k(ranking, truth_order, k, normalized=True) for k in ks])
                )
                rows.append((params.alpha, params.beta, params.gamma, params.delta, score))
                if score > best_score:
                    best_score = score
                    best_params = params
    return GridSearchResult(best=best_params, best_score=best_score, rows=rows)
