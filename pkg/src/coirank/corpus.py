"""Corpus ingestion and normalization.

Reads JSON-Lines bibliographic records into an immutable in-memory corpus
with stable integer identifiers and normalized author / institution keys.

Input schema, one paper per line::

    {"id": str, "year": int, "journal": str, "title": str,
     "authors": [{"name": str, "affiliations": [str], "country": str|null}],
     "references": [str]}

References that resolve to a paper in the corpus become citation edges;
unresolved references are retained in a dangling list, never silently
dropped.  Citations pointing more than one year into the future (beyond
the in-press slack) are flagged, not rejected.
"""

from __future__ import annotations

import datetime
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable

MIN_YEAR = 1800

#: Sentinel for an unknown country; kept distinct from any real key.
UNKNOWN = "<unknown>"

_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


class CorpusError(Exception):
    """Fatal ingestion problem (e.g. duplicate paper id)."""


@dataclass(frozen=True)
class RecordError:
    """A rejected input record; the rest of the stream is still admitted."""

    line_no: int
    message: str


@dataclass(frozen=True)
class AuthorMention:
    """One author slot on one paper.

    ``affiliation_keys`` may be empty (affiliation unknown); the first
    entry, when present, is the author's primary institution for that
    paper.
    """

    author_key: str
    affiliation_keys: tuple[str, ...]
    position: int


@dataclass(frozen=True)
class Paper:
    id: str
    year: int
    journal: str
    title: str
    author_refs: tuple[AuthorMention, ...]
    references: tuple[str, ...]

    def author_keys(self) -> tuple[str, ...]:
        """Distinct author keys in first-mention order."""
        seen: dict[str, None] = {}
        for m in self.author_refs:
            seen.setdefault(m.author_key, None)
        return tuple(seen)


@dataclass(frozen=True)
class Institution:
    key: str
    country_key: str | None = None


@dataclass(frozen=True)
class Corpus:
    """Validated, immutable corpus. Safe to share across threads."""

    papers: dict[str, Paper]
    institutions: dict[str, Institution]
    edge_list: tuple[tuple[str, str], ...]
    dangling: tuple[tuple[str, str], ...]
    direction_flags: tuple[tuple[str, str], ...]
    record_errors: tuple[RecordError, ...]
    paper_ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.paper_ids:
            object.__setattr__(self, "paper_ids", tuple(self.papers))

    def index_of(self) -> dict[str, int]:
        """Stable integer identifier per paper (admission order)."""
        return {pid: i for i, pid in enumerate(self.paper_ids)}

    def __len__(self) -> int:
        return len(self.papers)


def _strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_author(raw_name: str) -> str:
    """Collapse a raw author name to a ``surname, initial(s)`` key.

    Case-folded, whitespace-collapsed, diacritic-stripped, and idempotent:
    feeding the output back in returns the same key.  A single-token name
    yields just the surname.  Raises ``ValueError`` when nothing survives
    stripping.
    """
    text = _strip_diacritics(raw_name).casefold().strip()
    if "," in text:
        surname, _, given = text.partition(",")
    else:
        tokens = text.split()
        surname = tokens[-1] if tokens else ""
        given = " ".join(tokens[:-1])
    surname = " ".join(surname.replace(".", " ").split())
    if not surname:
        raise ValueError(f"author name empty after normalization: {raw_name!r}")
    initials = [frag[0] for frag in _WORD_RE.findall(given)]
    if not initials:
        return surname
    return f"{surname}, {'.'.join(initials)}."


def normalize_affiliation(raw: str, alias_table: dict[str, str] | None = None) -> str:
    """Collapse a raw affiliation string to an institution key.

    Punctuation is removed outright (so ``M.I.T.`` and ``MIT`` coincide),
    whitespace is collapsed, diacritics stripped, case folded.  The alias
    table, when given, maps normalized keys to canonical keys and is
    applied after normalization.
    """
    text = _strip_diacritics(raw).casefold()
    text = "".join(ch for ch in text if ch.isalnum() or ch.isspace())
    key = " ".join(text.split())
    if not key:
        raise ValueError(f"affiliation empty after normalization: {raw!r}")
    if alias_table:
        key = alias_table.get(key, key)
    return key


def load_alias_table(path) -> dict[str, str]:
    """Load an affiliation alias table (JSON object) from *path*.

    Both sides of every entry are themselves normalized so that alias
    application keeps ``normalize_affiliation`` idempotent.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise CorpusError(f"alias table must be a JSON object: {path}")
    return {
        normalize_affiliation(k): normalize_affiliation(v) for k, v in raw.items()
    }


def _parse_record(obj: dict, alias_table: dict[str, str] | None):
    """Validate one decoded JSON record; returns (Paper, country votes)."""
    for key in ("id", "year", "authors"):
        if key not in obj:
            raise ValueError(f"missing required field {key!r}")
    pid = obj["id"]
    if not isinstance(pid, str) or not pid:
        raise ValueError("id must be a non-empty string")
    year = obj["year"]
    if not isinstance(year, int) or isinstance(year, bool):
        raise ValueError("year must be an integer")
    this_year = datetime.date.today().year
    if not MIN_YEAR <= year <= this_year:
        raise ValueError(f"year {year} outside [{MIN_YEAR}, {this_year}]")
    authors = obj["authors"]
    if not isinstance(authors, list) or not authors:
        raise ValueError("authors must be a non-empty list")

    mentions: list[AuthorMention] = []
    country_votes: list[tuple[str, str]] = []  # (institution key, country key)
    for pos, author in enumerate(authors):
        if not isinstance(author, dict) or "name" not in author:
            raise ValueError(f"author #{pos} missing name")
        author_key = normalize_author(str(author["name"]))
        affil_keys: list[str] = []
        for raw_affil in author.get("affiliations") or []:
            key = normalize_affiliation(str(raw_affil), alias_table)
            if key not in affil_keys:
                affil_keys.append(key)
        country = author.get("country")
        if country:
            country_key = " ".join(_strip_diacritics(str(country)).casefold().split())
            country_votes.extend((k, country_key) for k in affil_keys)
        mentions.append(AuthorMention(author_key, tuple(affil_keys), pos))

    references: list[str] = []
    for ref in obj.get("references") or []:
        ref = str(ref)
        if ref != pid and ref not in references:
            references.append(ref)

    paper = Paper(
        id=pid,
        year=year,
        journal=str(obj.get("journal") or ""),
        title=str(obj.get("title") or ""),
        author_refs=tuple(mentions),
        references=tuple(references),
    )
    return paper, country_votes


def build_corpus(
    papers: Iterable[Paper],
    country_votes: Iterable[tuple[str, str]] = (),
    record_errors: Iterable[RecordError] = (),
) -> Corpus:
    """Assemble a corpus from validated papers (duplicate ids are fatal)."""
    by_id: dict[str, Paper] = {}
    for paper in papers:
        if paper.id in by_id:
            raise CorpusError(f"duplicate paper id: {paper.id!r}")
        by_id[paper.id] = paper

    edges: list[tuple[str, str]] = []
    dangling: list[tuple[str, str]] = []
    flags: list[tuple[str, str]] = []
    for paper in by_id.values():
        for ref in paper.references:
            if ref in by_id:
                edges.append((paper.id, ref))
                if paper.year < by_id[ref].year - 1:
                    flags.append((paper.id, ref))
            else:
                dangling.append((paper.id, ref))

    votes: dict[str, Counter] = {}
    all_keys: dict[str, None] = {}
    for paper in by_id.values():
        for mention in paper.author_refs:
            for key in mention.affiliation_keys:
                all_keys.setdefault(key, None)
    for key, country in country_votes:
        votes.setdefault(key, Counter())[country] += 1

    institutions: dict[str, Institution] = {}
    for key in all_keys:
        counter = votes.get(key)
        country = None
        if counter:
            # majority vote across mentions, ties broken lexicographically
            best = max(counter.items(), key=lambda kv: (kv[1], kv[0]))
            country = min(c for c, n in counter.items() if n == best[1])
        institutions[key] = Institution(key, country)

    return Corpus(
        papers=by_id,
        institutions=institutions,
        edge_list=tuple(edges),
        dangling=tuple(dangling),
        direction_flags=tuple(flags),
        record_errors=tuple(record_errors),
    )


def ingest(
    source: IO[str] | Iterable[str],
    format: str = "jsonl",
    alias_table: dict[str, str] | None = None,
) -> Corpus:
    """Ingest a stream of corpus records into a validated :class:`Corpus`.

    Every input line is either admitted or reported in the corpus's
    ``record_errors``; a duplicate paper id aborts with ``CorpusError``.
    Deterministic: byte-identical streams produce identical corpora.
    """
    if format != "jsonl":
        raise CorpusError(f"unsupported corpus format: {format!r}")

    papers: list[Paper] = []
    votes: list[tuple[str, str]] = []
    errors: list[RecordError] = []
    for line_no, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            errors.append(RecordError(line_no, f"malformed JSON: {exc.msg}"))
            continue
        try:
            paper, paper_votes = _parse_record(obj, alias_table)
        except ValueError as exc:
            errors.append(RecordError(line_no, str(exc)))
            continue
        papers.append(paper)
        votes.extend(paper_votes)

    return build_corpus(papers, votes, errors)


def ingest_path(path, alias_table: dict[str, str] | None = None) -> Corpus:
    """Ingest a JSONL corpus file from disk."""
    with open(path, encoding="utf-8") as fh:
        return ingest(fh, alias_table=alias_table)
