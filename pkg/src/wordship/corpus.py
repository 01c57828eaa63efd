"""Corpus ingestion, deduplication and persistence.

Records are (article, keyword string) pairs. Keywords are deduplicated on the
space-joined normalized token sequence, so "Defects of absorption spectra" and
"defect of absorption-spectra" become one keyword. Each article contributes at
most one incidence per keyword.

Ingestion goes through :class:`IngestAccumulator`, whose state is a set of
facts; accumulators built from disjoint record streams can be merged in any
order and give the same corpus as sequential ingestion.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

from .classify import DEFAULT_LEXICONS, Lexicons
from .errors import CorpusError, CorpusFormatError, SchemaVersionError, TokenizeError
from .tokenize import DEFAULT_RULES, NormalizationRules, Token, TokenSeq, decompose

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_YEAR_RANGE = (1900, 2100)
CSV_FIELDS = ("article_id", "year", "volume", "keyword")


@dataclass(frozen=True, order=True)
class ArticleRef:
    article_id: str
    year: int
    volume: str | None = None


@dataclass(frozen=True)
class KeywordRecord:
    article: ArticleRef
    raw_text: str
    source: str = ""


@dataclass(frozen=True, order=True)
class Rejection:
    source: str
    reason: str
    text: str = ""

    def __str__(self) -> str:
        where = f"{self.source}: " if self.source else ""
        return f"{where}{self.reason}" + (f" [{self.text}]" if self.text else "")


@dataclass(frozen=True)
class Keyword:
    canonical_text: str
    tokens: TokenSeq
    article_ids: frozenset[str]
    yearly_incidence: Mapping[int, int]

    @property
    def total_frequency(self) -> int:
        return sum(self.yearly_incidence.values())

    @property
    def display(self) -> str:
        return self.tokens.render()

    @property
    def wordship(self) -> int:
        return self.tokens.wordship

    @property
    def years(self) -> frozenset[int]:
        return frozenset(y for y, n in self.yearly_incidence.items() if n > 0)


@dataclass(frozen=True)
class Word:
    surface: str
    occurrences: int
    keywords_formed: int


@dataclass(frozen=True)
class Corpus:
    articles: Mapping[str, ArticleRef]
    keywords: Mapping[str, Keyword]
    words: Mapping[str, Word]
    rules: NormalizationRules = DEFAULT_RULES
    lexicons: Lexicons = DEFAULT_LEXICONS
    rejected: tuple[Rejection, ...] = ()

    @property
    def years(self) -> list[int]:
        return sorted({a.year for a in self.articles.values()})

    def articles_in(self, year: int) -> list[ArticleRef]:
        return sorted(a for a in self.articles.values() if a.year == year)

    def keywords_in(self, year: int) -> list[Keyword]:
        return [k for k in self.keywords.values() if year in k.years]

    def records(self) -> Iterator[KeywordRecord]:
        """One record per (article, keyword) incidence, in a stable order."""
        for canonical in sorted(self.keywords):
            kw = self.keywords[canonical]
            for aid in sorted(kw.article_ids):
                yield KeywordRecord(self.articles[aid], kw.display)


class IngestAccumulator:
    """Mergeable ingestion state."""

    def __init__(
        self,
        rules: NormalizationRules = DEFAULT_RULES,
        lexicons: Lexicons = DEFAULT_LEXICONS,
        year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
    ) -> None:
        self.rules = rules
        self.lexicons = lexicons
        self.year_range = year_range
        # canonical -> set of token-sequence variants seen (hyphenation may differ)
        self._variants: dict[str, set[TokenSeq]] = defaultdict(set)
        # (canonical, article_id, year, volume)
        self._pairs: set[tuple[str, str, int, str | None]] = set()
        self._rejected: set[Rejection] = set()

    def add(self, record: KeywordRecord | Mapping[str, Any]) -> None:
        try:
            record = coerce_record(record, self.year_range)
            seq = decompose(record.raw_text, self.rules, self.lexicons)
        except (CorpusError, TokenizeError) as exc:
            source = record.source if isinstance(record, KeywordRecord) else str(record.get("source", ""))
            self._rejected.add(Rejection(source, str(exc), _record_text(record)))
            return
        self._variants[seq.canonical].add(seq)
        art = record.article
        self._pairs.add((seq.canonical, art.article_id, art.year, art.volume))

    def reject(self, source: str, reason: str, text: str = "") -> None:
        self._rejected.add(Rejection(source, reason, text))

    def extend(self, records: Iterable[KeywordRecord | Mapping[str, Any]]) -> IngestAccumulator:
        for record in records:
            self.add(record)
        return self

    def merge(self, other: IngestAccumulator) -> IngestAccumulator:
        if (other.rules, other.lexicons, other.year_range) != (self.rules, self.lexicons, self.year_range):
            raise CorpusError("cannot merge accumulators built with different settings")
        for canonical, variants in other._variants.items():
            self._variants[canonical] |= variants
        self._pairs |= other._pairs
        self._rejected |= other._rejected
        return self

    def build(self) -> Corpus:
        rejected = set(self._rejected)
        # an article id seen with several (year, volume) values keeps the smallest
        seen: dict[str, set[tuple[int, str]]] = defaultdict(set)
        for _, aid, year, volume in self._pairs:
            seen[aid].add((year, volume or ""))
        articles = {}
        for aid in sorted(seen):
            year, volume = min(seen[aid])
            articles[aid] = ArticleRef(aid, year, volume or None)

        incidences: dict[str, set[str]] = defaultdict(set)
        for canonical, aid, year, volume in self._pairs:
            art = articles[aid]
            if (art.year, art.volume) != (year, volume or None):
                rejected.add(Rejection(
                    f"article {aid}",
                    f"conflicting year/volume {year}/{volume or '-'}; kept {art.year}/{art.volume or '-'}",
                    canonical,
                ))
                continue
            incidences[canonical].add(aid)

        if not incidences:
            detail = f" ({len(rejected)} records rejected)" if rejected else ""
            raise CorpusError(f"empty corpus{detail}")

        keywords = {}
        for canonical in sorted(incidences):
            aids = frozenset(incidences[canonical])
            by_year: dict[int, int] = defaultdict(int)
            for aid in aids:
                by_year[articles[aid].year] += 1
            tokens = min(self._variants[canonical], key=lambda s: (s.render(), _seq_key(s)))
            keywords[canonical] = Keyword(canonical, tokens, aids, dict(sorted(by_year.items())))

        # drop articles whose every pair was rejected
        used = set().union(*(k.article_ids for k in keywords.values()))
        articles = {aid: a for aid, a in articles.items() if aid in used}
        return Corpus(
            articles=articles,
            keywords=keywords,
            words=count_words(keywords.values()),
            rules=self.rules,
            lexicons=self.lexicons,
            rejected=tuple(sorted(rejected)),
        )


def _seq_key(seq: TokenSeq) -> tuple:
    return tuple((t.text, t.group or 0, t.is_form_word) for t in seq.tokens)


def _record_text(record: KeywordRecord | Mapping[str, Any]) -> str:
    if isinstance(record, KeywordRecord):
        return record.raw_text
    return str(record.get("keyword", "") or "")


def coerce_record(record: KeywordRecord | Mapping[str, Any], year_range: tuple[int, int] = DEFAULT_YEAR_RANGE) -> KeywordRecord:
    """Validate a record, building it from a row mapping when necessary."""
    if not isinstance(record, KeywordRecord):
        article_id = str(record.get("article_id") or "").strip()
        year_text = record.get("year")
        try:
            year = int(str(year_text).strip())
        except (TypeError, ValueError):
            if not article_id:
                raise CorpusError("missing article_id") from None
            raise CorpusError(f"year {year_text!r} is not an integer") from None
        volume = record.get("volume")
        if volume is not None:
            volume = str(volume).strip() or None
        record = KeywordRecord(
            ArticleRef(article_id, year, volume),
            str(record.get("keyword") or ""),
            str(record.get("source", "")),
        )
    art = record.article
    if not art.article_id or not art.article_id.strip():
        raise CorpusError("missing article_id")
    lo, hi = year_range
    if not lo <= art.year <= hi:
        raise CorpusError(f"year {art.year} outside {lo}-{hi}")
    if not record.raw_text or not record.raw_text.strip():
        raise CorpusError("empty keyword")
    return record


def count_words(keywords: Iterable[Keyword]) -> dict[str, Word]:
    occurrences: dict[str, int] = defaultdict(int)
    formed: dict[str, int] = defaultdict(int)
    for kw in keywords:
        for word in kw.tokens.words:
            occurrences[word] += 1
        for word in set(kw.tokens.words):
            formed[word] += 1
    return {w: Word(w, occurrences[w], formed[w]) for w in sorted(occurrences)}


def ingest(
    records: Iterable[KeywordRecord | Mapping[str, Any]],
    rules: NormalizationRules = DEFAULT_RULES,
    lexicons: Lexicons = DEFAULT_LEXICONS,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> Corpus:
    """Build a deduplicated corpus. Malformed records end up in ``corpus.rejected``."""
    corpus = IngestAccumulator(rules, lexicons, year_range).extend(records).build()
    for rejection in corpus.rejected:
        log.warning("rejected record %s", rejection)
    return corpus


# -- input files -------------------------------------------------------------

def read_records(path: str | Path) -> Iterator[dict[str, Any]]:
    """Yield raw rows from a CSV or newline-delimited JSON corpus file.

    Each row carries a ``source`` entry ("file:line") used in rejection reports.
    """
    path = Path(path)
    try:
        handle = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise CorpusFormatError(f"cannot read {path}: {exc.strerror}") from exc
    with handle:
        if path.suffix.lower() in (".ndjson", ".jsonl", ".json"):
            yield from _read_ndjson(handle, path)
        else:
            yield from _read_csv(handle, path)


def _read_csv(handle, path: Path) -> Iterator[dict[str, Any]]:
    reader = csv.DictReader(handle)
    missing = [f for f in CSV_FIELDS if f not in (reader.fieldnames or [])]
    if missing:
        raise CorpusFormatError(f"{path}: header lacks column(s) {', '.join(missing)}; expected {','.join(CSV_FIELDS)}")
    for row in reader:
        row = {k: v for k, v in row.items() if k is not None}
        row["source"] = f"{path.name}:{reader.line_num}"
        yield row


def _read_ndjson(handle, path: Path) -> Iterator[dict[str, Any]]:
    for lineno, line in enumerate(handle, 1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            yield {"source": f"{path.name}:{lineno}", "_error": f"invalid JSON: {exc.msg}", "keyword": line.strip()}
            continue
        if not isinstance(row, dict):
            yield {"source": f"{path.name}:{lineno}", "_error": "not a JSON object", "keyword": line.strip()}
            continue
        row["source"] = f"{path.name}:{lineno}"
        yield row


def load_corpus_file(
    path: str | Path,
    rules: NormalizationRules = DEFAULT_RULES,
    lexicons: Lexicons = DEFAULT_LEXICONS,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> Corpus:
    acc = IngestAccumulator(rules, lexicons, year_range)
    for row in read_records(path):
        if "_error" in row:
            acc.reject(row["source"], row["_error"], row.get("keyword", ""))
        else:
            acc.add(row)
    corpus = acc.build()
    for rejection in corpus.rejected:
        log.warning("rejected record %s", rejection)
    return corpus


# -- persistence ------------------------------------------------------------

def to_dict(corpus: Corpus) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "normalization": corpus.rules.to_dict(),
        "lexicons": corpus.lexicons.to_dict(),
        "articles": [
            {"article_id": a.article_id, "year": a.year, "volume": a.volume}
            for a in sorted(corpus.articles.values())
        ],
        "keywords": [
            {
                "canonical": kw.canonical_text,
                "tokens": [[t.text, t.group, t.is_form_word] for t in kw.tokens.tokens],
                "articles": sorted(kw.article_ids),
                "yearly_incidence": {str(y): n for y, n in sorted(kw.yearly_incidence.items())},
            }
            for kw in (corpus.keywords[c] for c in sorted(corpus.keywords))
        ],
        "rejected": [{"source": r.source, "reason": r.reason, "text": r.text} for r in corpus.rejected],
    }


def from_dict(data: Mapping[str, Any]) -> Corpus:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(SCHEMA_VERSION, version)
    try:
        articles = {
            a["article_id"]: ArticleRef(a["article_id"], int(a["year"]), a.get("volume"))
            for a in data["articles"]
        }
        keywords = {}
        for item in data["keywords"]:
            seq = TokenSeq(tuple(Token(text, group, bool(fw)) for text, group, fw in item["tokens"]))
            keywords[item["canonical"]] = Keyword(
                item["canonical"],
                seq,
                frozenset(item["articles"]),
                {int(y): int(n) for y, n in item["yearly_incidence"].items()},
            )
        return Corpus(
            articles=articles,
            keywords=keywords,
            words=count_words(keywords.values()),
            rules=NormalizationRules.from_dict(data["normalization"]),
            lexicons=Lexicons.from_dict(data["lexicons"]),
            rejected=tuple(Rejection(r["source"], r["reason"], r.get("text", "")) for r in data.get("rejected", [])),
        )
    except (KeyError, TypeError, ValueError, TokenizeError) as exc:
        raise CorpusFormatError(f"malformed corpus document: {exc!r}") from exc


def save(corpus: Corpus, path: str | Path) -> None:
    text = json.dumps(to_dict(corpus), indent=1, sort_keys=True, ensure_ascii=False)
    try:
        Path(path).write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot write {path}: {exc.strerror}") from exc


def load(path: str | Path) -> Corpus:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CorpusFormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"{path}: not UTF-8", offset=exc.start) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise CorpusFormatError(f"{path}: invalid JSON ({exc.msg})", offset=offset) from exc
    if not isinstance(data, dict):
        raise CorpusFormatError(f"{path}: top level is not an object", offset=0)
    return from_dict(data)
