"""Subject contexts of semantic words and the degree of contextuality.

Each provider maps a word to a set of specific-subject labels. Labels are
normalized, the per-provider sets are unioned, and the size of the union is the
word's degree of contextuality D(C). Specific subjects roll up into broad
disciplines through a :class:`DisciplineMap`.

The analysis pipeline reads contexts from a local cache only
(:class:`CacheProvider`); :func:`fetch_and_cache` is the one place that talks
to live providers.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol

from .classify import Kind, WordCategory
from .errors import CacheError, LexiconError, MissingContextError, ProviderError, RateLimitError

log = logging.getLogger(__name__)

UNMAPPED = "Unmapped"

_DEGREE_NAMES = [
    "No contextual", "Mono-contextual", "Di-contextual", "Tri-contextual", "Tetra-contextual",
    "Penta-contextual", "Hexa-contextual", "Hepta-contextual", "Octa-contextual",
    "Nona-contextual", "Deca-contextual",
]


def degree_label(value: int) -> str:
    """``5 -> "5-C"``. Values above 10 keep their exact numeral."""
    if value < 0:
        raise ValueError(f"degree of contextuality cannot be negative: {value}")
    return f"{value}-C"


def degree_bucket(value: int) -> str:
    """Label with everything above 10 collapsed to ">10-C"."""
    return ">10-C" if value > 10 else degree_label(value)


def degree_name(value: int) -> str:
    if value < 0:
        raise ValueError(f"degree of contextuality cannot be negative: {value}")
    return _DEGREE_NAMES[value] if value <= 10 else "Higher-contextual"


# -- subject labels -----------------------------------------------------------

_SPACE_RE = re.compile(r"\s+")
_TRAILING_PUNCT = ".,;:!?"


def normalize_subject(label: str, aliases: Mapping[str, str] | None = None) -> str:
    """Case-fold, collapse whitespace, strip trailing punctuation, apply aliases."""
    text = _SPACE_RE.sub(" ", label.casefold()).strip().rstrip(_TRAILING_PUNCT).strip()
    if aliases:
        text = aliases.get(text, text)
    return text


def normalize_subjects(labels: Iterable[str], aliases: Mapping[str, str] | None = None) -> frozenset[str]:
    out = {normalize_subject(s, aliases) for s in labels}
    out.discard("")
    return frozenset(out)


def load_aliases(path: str | Path) -> dict[str, str]:
    """``alias<TAB>canonical`` per line; both sides are normalized."""
    aliases = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{path}:{lineno}: expected 'alias<TAB>subject'")
        aliases[normalize_subject(parts[0])] = normalize_subject(parts[1])
    return aliases


# -- providers ----------------------------------------------------------------

class ContextProvider(Protocol):
    name: str

    def lookup(self, word: str) -> Iterable[str]:
        """Subject labels for ``word``; raise ProviderError on failure."""
        ...


@dataclass
class LexiconProvider:
    """Offline provider backed by a ``word<TAB>subject1;subject2`` table."""

    name: str
    entries: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.entries = {w.casefold(): frozenset(s) for w, s in self.entries.items()}

    def lookup(self, word: str) -> frozenset[str]:
        return self.entries.get(word.casefold(), frozenset())

    @classmethod
    def from_tsv(cls, path: str | Path, name: str | None = None) -> LexiconProvider:
        entries: dict[str, set[str]] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            word, sep, rest = line.partition("\t")
            if not sep or not word.strip():
                raise LexiconError(f"{path}:{lineno}: expected 'word<TAB>subject1;subject2;...'")
            subjects = {s.strip() for s in rest.split(";") if s.strip()}
            entries.setdefault(word.strip(), set()).update(subjects)
        return cls(name or Path(path).stem, {w: frozenset(s) for w, s in entries.items()})


class CacheProvider:
    """Reads one provider's answers from a :class:`ContextCache`."""

    def __init__(self, cache: ContextCache, name: str) -> None:
        self.cache = cache
        self.name = name

    def lookup(self, word: str) -> frozenset[str]:
        entry = self.cache.get(word, self.name)
        if entry is None:
            raise MissingContextError(self.name, word)
        return frozenset(entry.subjects)


def _default_transport(url: str, timeout: float) -> str:
    req = urllib.request.Request(url, headers={"User-Agent": "wordship/0.1"})
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return resp.read().decode("utf-8")


def parse_subject_json(body: str) -> list[str]:
    """Accept either a JSON array of labels or an object with a ``subjects`` array."""
    data = json.loads(body)
    if isinstance(data, dict):
        data = data.get("subjects", [])
    if not isinstance(data, list):
        raise ValueError("expected a list of subject labels")
    return [str(s) for s in data]


class HttpProvider:
    """Online provider: GET ``url_template.format(word=...)`` and parse the body.

    Parsing is best effort and lives in ``parse``; site-specific adapters
    supply their own parser. A 404 means the site knows no subjects for the word.
    """

    def __init__(
        self,
        name: str,
        url_template: str,
        parse: Callable[[str], Iterable[str]] = parse_subject_json,
        transport: Callable[[str, float], str] | None = None,
        timeout: float = 10.0,
    ) -> None:
        self.name = name
        self.url_template = url_template
        self.parse = parse
        self.transport = transport or _default_transport
        self.timeout = timeout

    def lookup(self, word: str) -> list[str]:
        url = self.url_template.format(word=urllib.parse.quote(word))
        try:
            body = self.transport(url, self.timeout)
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                return []
            if exc.code == 429:
                retry_after = exc.headers.get("Retry-After") if exc.headers else None
                raise RateLimitError(self.name, float(retry_after) if retry_after and retry_after.isdigit() else None) from exc
            raise ProviderError(self.name, f"HTTP {exc.code}", retryable=exc.code >= 500) from exc
        except (urllib.error.URLError, OSError) as exc:
            raise ProviderError(self.name, f"transport failure: {exc}") from exc
        try:
            return list(self.parse(body))
        except ValueError as exc:
            raise ProviderError(self.name, f"unparseable response: {exc}", retryable=False) from exc


# -- contexts -------------------------------------------------------------------

@dataclass(frozen=True)
class WordContext:
    word: str
    per_provider: Mapping[str, frozenset[str]]
    unresolved: frozenset[str] = frozenset()

    @property
    def union(self) -> frozenset[str]:
        return frozenset().union(*self.per_provider.values())

    @property
    def degree(self) -> int:
        return len(self.union)

    @property
    def resolved(self) -> bool:
        return not self.unresolved

    @property
    def label(self) -> str:
        return degree_label(self.degree)


def _call_with_retries(
    provider: ContextProvider,
    word: str,
    retries: int,
    backoff: float,
    sleep: Callable[[float], None],
) -> Iterable[str]:
    attempt = 0
    while True:
        try:
            return provider.lookup(word)
        except ProviderError as exc:
            if not exc.retryable or attempt >= retries:
                raise
            delay = getattr(exc, "retry_after", None) or backoff * (2 ** attempt)
            log.info("%s: retrying %r in %.2fs (%s)", provider.name, word, delay, exc)
            sleep(delay)
            attempt += 1


def lookup_context(
    word: str,
    providers: Iterable[ContextProvider],
    aliases: Mapping[str, str] | None = None,
    retries: int = 0,
    backoff: float = 0.5,
    sleep: Callable[[float], None] = time.sleep,
) -> WordContext:
    """Query every provider and union the normalized subject labels.

    A provider that still fails after ``retries`` is recorded in
    ``WordContext.unresolved``; such a word is excluded from D(C) metrics.
    """
    per_provider: dict[str, frozenset[str]] = {}
    failed = set()
    for provider in providers:
        try:
            labels = _call_with_retries(provider, word, retries, backoff, sleep)
        except ProviderError as exc:
            log.warning("unresolved %r: %s", word, exc)
            failed.add(provider.name)
            continue
        subjects = normalize_subjects(labels, aliases)
        per_provider[provider.name] = per_provider.get(provider.name, frozenset()) | subjects
    return WordContext(word, dict(sorted(per_provider.items())), frozenset(failed))


def resolve_contexts(
    words: Iterable[str],
    providers: Iterable[ContextProvider],
    aliases: Mapping[str, str] | None = None,
) -> dict[str, WordContext]:
    providers = list(providers)
    return {w: lookup_context(w, providers, aliases) for w in sorted(set(words))}


def assign_degrees(
    categories: Mapping[str, WordCategory],
    contexts: Mapping[str, WordContext],
) -> dict[str, WordCategory]:
    """Attach D(C) to every SW whose context resolved; others stay degree-less."""
    out = {}
    for word, cat in categories.items():
        if cat.kind is Kind.SW:
            ctx = contexts.get(word)
            cat = WordCategory(Kind.SW, ctx.degree if ctx is not None and ctx.resolved else None)
        out[word] = cat
    return out


# -- cache --------------------------------------------------------------------------

@dataclass(frozen=True)
class CacheEntry:
    word: str
    provider: str
    subjects: tuple[str, ...]
    fetched_at: str

    def to_json(self) -> str:
        return json.dumps(
            {"word": self.word, "provider": self.provider, "subjects": list(self.subjects), "fetched_at": self.fetched_at},
            ensure_ascii=False,
            sort_keys=True,
        )


class ContextCache:
    """Newline-delimited JSON cache, one object per (word, provider).

    Reads may happen from any thread; writes are serialized by a lock and
    appended to the file, so a later line for the same key wins on reload.
    """

    def __init__(self, path: str | Path | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self._entries: dict[tuple[str, str], CacheEntry] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._read()

    def _read(self) -> None:
        with self.path.open(encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    entry = CacheEntry(
                        obj["word"], obj["provider"], tuple(obj["subjects"]), obj.get("fetched_at", "")
                    )
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise CacheError(f"{self.path}:{lineno}: malformed cache entry ({exc})") from exc
                self._entries[(entry.word.casefold(), entry.provider)] = entry

    def get(self, word: str, provider: str) -> CacheEntry | None:
        return self._entries.get((word.casefold(), provider))

    def __contains__(self, key: tuple[str, str]) -> bool:
        word, provider = key
        return (word.casefold(), provider) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> list[CacheEntry]:
        return [self._entries[k] for k in sorted(self._entries)]

    def put(self, word: str, provider: str, subjects: Iterable[str], fetched_at: str | None = None) -> CacheEntry:
        entry = CacheEntry(
            word,
            provider,
            tuple(sorted(normalize_subjects(subjects))),
            fetched_at or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        with self._lock:
            self._entries[(word.casefold(), provider)] = entry
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as handle:
                    handle.write(entry.to_json() + "\n")
        return entry


@dataclass
class FetchReport:
    fetched: list[str] = field(default_factory=list)
    cached: list[str] = field(default_factory=list)
    unresolved: dict[str, str] = field(default_factory=dict)
    requests: int = 0


class _Throttle:
    """Each request occupies a slot of ``1/rate`` seconds."""

    def __init__(self, rate: float | None, clock: Callable[[], float], sleep: Callable[[float], None]) -> None:
        self.interval = 1.0 / rate if rate else 0.0
        self.clock = clock
        self.sleep = sleep

    def run(self, fn: Callable[[], object]) -> object:
        start = self.clock()
        try:
            return fn()
        finally:
            remaining = start + self.interval - self.clock()
            if remaining > 0:
                self.sleep(remaining)


def fetch_and_cache(
    words: Iterable[str],
    provider: ContextProvider,
    cache: ContextCache,
    rate_limit: float | None = None,
    retries: int = 3,
    backoff: float = 0.5,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> FetchReport:
    """Fetch subjects for words missing from the cache and append them.

    Words already cached for this provider cause no request. Rate-limit errors
    back off and retry; words that still fail are listed in
    ``FetchReport.unresolved`` and are not cached.
    """
    report = FetchReport()
    throttle = _Throttle(rate_limit, clock, sleep)
    for word in dict.fromkeys(words):
        if (word, provider.name) in cache:
            report.cached.append(word)
            continue
        attempt = 0
        while True:
            report.requests += 1
            try:
                labels = throttle.run(lambda: list(provider.lookup(word)))
            except ProviderError as exc:
                if exc.retryable and attempt < retries:
                    delay = getattr(exc, "retry_after", None) or backoff * (2 ** attempt)
                    sleep(delay)
                    attempt += 1
                    continue
                report.unresolved[word] = str(exc)
                log.warning("could not fetch %r from %s: %s", word, provider.name, exc)
                break
            cache.put(word, provider.name, labels)
            report.fetched.append(word)
            break
    return report


# -- disciplines ------------------------------------------------------------------

@dataclass(frozen=True)
class DisciplineMap:
    entries: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", {normalize_subject(s): d for s, d in self.entries.items()})

    @property
    def disciplines(self) -> list[str]:
        return sorted(set(self.entries.values()))

    def subjects_of(self, discipline: str) -> list[str]:
        return sorted(s for s, d in self.entries.items() if d == discipline)

    @classmethod
    def from_tsv(cls, path: str | Path) -> DisciplineMap:
        entries: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = [p.strip() for p in line.split("\t")]
            if len(parts) != 2 or not all(parts):
                raise LexiconError(f"{path}:{lineno}: expected 'subject<TAB>discipline'")
            subject = normalize_subject(parts[0])
            if subject in entries and entries[subject] != parts[1]:
                raise LexiconError(f"{path}:{lineno}: subject {parts[0]!r} mapped to two disciplines")
            entries[subject] = parts[1]
        return cls(entries)

    @classmethod
    def default(cls) -> DisciplineMap:
        with resources.as_file(resources.files("wordship") / "data" / "disciplines.tsv") as path:
            return cls.from_tsv(path)


def map_discipline(subject: str, discipline_map: DisciplineMap) -> str:
    """Broad discipline of a specific subject; unknown subjects go to ``Unmapped``."""
    key = normalize_subject(subject)
    discipline = discipline_map.entries.get(key)
    if discipline is None:
        log.warning("subject %r has no discipline; using %s", subject, UNMAPPED)
        return UNMAPPED
    return discipline
