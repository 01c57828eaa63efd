"""Word-association metrics and corpus statistics.

For a word category the fundamental triple is

* ``f`` - number of distinct words in the category,
* ``a`` - associations made by those words with neighbouring words,
* ``k`` - number of distinct keywords containing at least one of them,

from which the five derived parameters follow::

    WD(A)    = a / f
    WC(A)    = a / k
    KD(F)    = k / f            (= WD(A) / WC(A))
    WD(A)I   = a / (f k)
    WD(A)I-N = a / (f k D(C))   (semantic words with D(C) >= 1 only)

All counts are taken over the set of distinct keywords, never weighted by how
many articles carry a keyword. Ratios are exact :class:`~fractions.Fraction`
values; rounding happens only when rendering.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .classify import Kind, WordCategory
from .context import DisciplineMap, WordContext, map_discipline
from .corpus import Corpus, Keyword
from .tokenize import TokenSeq

FIXED_CATEGORIES = (WordCategory(Kind.AC), WordCategory(Kind.EW), WordCategory(Kind.FW))
WORDSHIP_BUCKETS = ("1", "2", "3", ">3")


@dataclass(frozen=True)
class AssociationRule:
    """How adjacency is counted.

    ``form_words_transparent``: for non-FW categories, neighbours are taken in
    the sequence with form words removed ("defect of absorption" makes defect
    adjacent to absorption). When false, a form word blocks the adjacency and
    only directly neighbouring non-form words count.
    ``fw_fw_pairs``: whether a form word next to another form word counts as an
    association for the FW category.
    """

    form_words_transparent: bool = True
    fw_fw_pairs: bool = True


DEFAULT_ASSOCIATION_RULE = AssociationRule()


@dataclass(frozen=True)
class CategoryStats:
    category: WordCategory
    f: int
    a: int
    k: int

    @property
    def label(self) -> str:
        return self.category.label


@dataclass(frozen=True)
class ParameterSet:
    wd_a: Fraction | None
    wc_a: Fraction | None
    kd_f: Fraction | None
    wd_a_index: Fraction | None
    wd_a_index_normalized: Fraction | None = None


def _members(seq: TokenSeq, category: WordCategory, assignment: Mapping[str, WordCategory]) -> list[bool]:
    return [assignment.get(t.text) == category for t in seq.tokens]


def associations(
    seq: TokenSeq,
    category: WordCategory,
    assignment: Mapping[str, WordCategory],
    rule: AssociationRule = DEFAULT_ASSOCIATION_RULE,
) -> int:
    """Associations contributed by one keyword to ``category``.

    Each category token counts its immediate neighbours, so a pair of adjacent
    tokens of the same category contributes 2.

    >>> from wordship.tokenize import decompose
    >>> seq = decompose("nuclear spin-lattice relaxation effect")
    >>> four_c = WordCategory(Kind.SW, 4)
    >>> associations(seq, four_c, {"nuclear": four_c, "lattice": four_c})
    3
    """
    tokens = seq.tokens
    member = _members(seq, category, assignment)
    if category.kind is Kind.FW:
        total = 0
        for i, is_member in enumerate(member):
            if not is_member:
                continue
            for j in (i - 1, i + 1):
                if 0 <= j < len(tokens) and (rule.fw_fw_pairs or not tokens[j].is_form_word):
                    total += 1
        return total
    if rule.form_words_transparent:
        kept = [m for m, t in zip(member, tokens) if not t.is_form_word]
        n = len(kept)
        return sum((i > 0) + (i < n - 1) for i, m in enumerate(kept) if m)
    # opaque form words: only directly adjacent non-form words count
    return sum(
        1
        for i, m in enumerate(member)
        if m
        for j in (i - 1, i + 1)
        if 0 <= j < len(tokens) and not tokens[j].is_form_word
    )


def fundamental_triple(
    corpus: Corpus,
    category: WordCategory,
    assignment: Mapping[str, WordCategory],
    rule: AssociationRule = DEFAULT_ASSOCIATION_RULE,
) -> CategoryStats:
    words = {w for w in corpus.words if assignment.get(w) == category}
    a = k = 0
    for kw in corpus.keywords.values():
        if words.isdisjoint(kw.tokens.words):
            continue
        k += 1
        a += associations(kw.tokens, category, assignment, rule)
    return CategoryStats(category, len(words), a, k)


def categories_present(assignment: Mapping[str, WordCategory], corpus: Corpus | None = None) -> list[WordCategory]:
    """Resolved SW(n) categories that occur, plus AC, EW and FW always, in table order."""
    words = corpus.words if corpus is not None else assignment
    cats = {assignment[w] for w in words if w in assignment and assignment[w].resolved}
    cats.update(FIXED_CATEGORIES)
    return sorted(cats, key=WordCategory.sort_key)


def category_table(
    corpus: Corpus,
    assignment: Mapping[str, WordCategory],
    rule: AssociationRule = DEFAULT_ASSOCIATION_RULE,
) -> list[CategoryStats]:
    """Triples for every category in one pass over the keywords."""
    cats = categories_present(assignment, corpus)
    f = Counter(assignment[w] for w in corpus.words if w in assignment)
    a: Counter = Counter()
    k: Counter = Counter()
    for kw in corpus.keywords.values():
        present = {assignment[w] for w in kw.tokens.words if w in assignment}
        for cat in present:
            k[cat] += 1
            a[cat] += associations(kw.tokens, cat, assignment, rule)
    return [CategoryStats(c, f[c], a[c], k[c]) for c in cats]


def _ratio(num: int, den: int) -> Fraction | None:
    return Fraction(num, den) if den else None


def parameters(stats: CategoryStats, degree: int | None = None) -> ParameterSet:
    """Derived parameters of one category; undefined ratios are ``None``.

    ``degree`` defaults to the category's own D(C). The normalized index exists
    only for semantic words with D(C) >= 1.
    """
    f, a, k = stats.f, stats.a, stats.k
    if degree is None:
        degree = stats.category.context_degree
    index = _ratio(a, f * k)
    normalized = None
    if stats.category.kind is Kind.SW and degree and index is not None:
        normalized = index / degree
    return ParameterSet(
        wd_a=_ratio(a, f),
        wc_a=_ratio(a, k),
        kd_f=_ratio(k, f),
        wd_a_index=index,
        wd_a_index_normalized=normalized,
    )


# -- wordship and yearly tables -----------------------------------------------------

def wordship_bucket(n: int) -> str:
    return ">3" if n > 3 else str(n)


@dataclass(frozen=True)
class WordshipPattern:
    year: int | None
    articles: int
    counts: Mapping[int, int]

    @property
    def distinct_keywords(self) -> int:
        return sum(self.counts.values())

    @property
    def buckets(self) -> dict[str, int]:
        out = dict.fromkeys(WORDSHIP_BUCKETS, 0)
        for n, c in self.counts.items():
            out[wordship_bucket(n)] += c
        return out

    @property
    def percentages(self) -> dict[str, Fraction]:
        total = self.distinct_keywords
        return {b: Fraction(100 * c, total) if total else Fraction(0) for b, c in self.buckets.items()}


def _pattern(year: int | None, articles: int, keywords: Iterable[Keyword]) -> WordshipPattern:
    counts = Counter(kw.wordship for kw in keywords)
    return WordshipPattern(year, articles, dict(sorted(counts.items())))


def wordship_pattern(corpus: Corpus, per_year: bool = False) -> list[WordshipPattern]:
    """Distinct keywords by wordship; with ``per_year`` one row per year precedes the overall row."""
    rows = []
    if per_year:
        for year in corpus.years:
            rows.append(_pattern(year, len(corpus.articles_in(year)), corpus.keywords_in(year)))
    rows.append(_pattern(None, len(corpus.articles), corpus.keywords.values()))
    return rows


def _volumes(articles) -> str:
    return "/".join(sorted({a.volume for a in articles if a.volume}))


@dataclass(frozen=True)
class YearlyKeywordStats:
    year: int | None
    volumes: str
    articles: int
    distinct_keywords: int
    total_frequency: int

    @property
    def keywords_per_article(self) -> Fraction | None:
        return _ratio(self.distinct_keywords, self.articles)

    @property
    def frequency_per_keyword(self) -> Fraction | None:
        return _ratio(self.total_frequency, self.distinct_keywords)


def yearly_keyword_stats(corpus: Corpus) -> list[YearlyKeywordStats]:
    """Per-year rows then the overall row.

    A year's total frequency sums the corpus-wide frequency of every keyword
    that appears that year.
    """
    rows = []
    for year in corpus.years:
        arts = corpus.articles_in(year)
        kws = corpus.keywords_in(year)
        rows.append(YearlyKeywordStats(year, _volumes(arts), len(arts), len(kws), sum(k.total_frequency for k in kws)))
    rows.append(YearlyKeywordStats(
        None,
        _volumes(corpus.articles.values()),
        len(corpus.articles),
        len(corpus.keywords),
        sum(k.total_frequency for k in corpus.keywords.values()),
    ))
    return rows


@dataclass(frozen=True)
class YearlyWordStats:
    year: int | None
    volumes: str
    articles: int
    keywords: int
    distinct_words: int
    word_occurrences: int

    @property
    def keywords_per_word(self) -> Fraction | None:
        return _ratio(self.keywords, self.distinct_words)


def _word_row(year, volumes, articles, keywords: list[Keyword]) -> YearlyWordStats:
    words = set()
    occurrences = 0
    for kw in keywords:
        words.update(kw.tokens.words)
        occurrences += len(kw.tokens)
    return YearlyWordStats(year, volumes, articles, len(keywords), len(words), occurrences)


def yearly_word_stats(corpus: Corpus) -> list[YearlyWordStats]:
    rows = []
    for year in corpus.years:
        arts = corpus.articles_in(year)
        rows.append(_word_row(year, _volumes(arts), len(arts), corpus.keywords_in(year)))
    rows.append(_word_row(None, _volumes(corpus.articles.values()), len(corpus.articles), list(corpus.keywords.values())))
    return rows


# -- disciplines ----------------------------------------------------------------------

@dataclass(frozen=True)
class DisciplineStats:
    discipline: str
    n: int
    F: int
    rank: int
    percentage: Fraction
    subjects: tuple[tuple[str, int], ...] = ()

    @property
    def F_over_n(self) -> Fraction | None:
        return _ratio(self.F, self.n)


def subject_frequencies(contexts: Iterable[WordContext]) -> dict[str, int]:
    """For each subject, the number of resolved words whose context union contains it."""
    counts: Counter = Counter()
    for ctx in contexts:
        if ctx.resolved:
            counts.update(ctx.union)
    return dict(sorted(counts.items()))


def rank_disciplines(
    subject_freqs: Mapping[str, int] | Iterable[tuple[str, int]],
    discipline_map: DisciplineMap,
) -> list[DisciplineStats]:
    """Aggregate subject frequencies into disciplines, ranked densely by F.

    Repeated subjects in an iterable of pairs are summed. Ties share a rank and
    are listed alphabetically.
    """
    items = subject_freqs.items() if isinstance(subject_freqs, Mapping) else subject_freqs
    freq: dict[str, int] = defaultdict(int)
    for subject, f in items:
        freq[subject] += f
    grouped: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for subject, f in freq.items():
        if f > 0:
            grouped[map_discipline(subject, discipline_map)].append((subject, f))
    total = sum(f for subs in grouped.values() for _, f in subs)
    ordered = sorted(grouped.items(), key=lambda item: (-sum(f for _, f in item[1]), item[0]))
    rows = []
    rank = 0
    previous = None
    for discipline, subs in ordered:
        F = sum(f for _, f in subs)
        if F != previous:
            rank += 1
            previous = F
        rows.append(DisciplineStats(
            discipline,
            len(subs),
            F,
            rank,
            Fraction(100 * F, total),
            tuple(sorted(subs, key=lambda s: (-s[1], s[0]))),
        ))
    return rows


def discipline_ranking(contexts: Iterable[WordContext], discipline_map: DisciplineMap) -> list[DisciplineStats]:
    return rank_disciplines(subject_frequencies(contexts), discipline_map)


# -- diagnostics ------------------------------------------------------------------------

@dataclass(frozen=True)
class TrendDiagnostics:
    status: str
    wc_min: Fraction | None = None
    wc_max: Fraction | None = None
    wc_min_category: str | None = None
    wc_max_category: str | None = None
    spearman_rho: float | None = None
    fit_c: float | None = None
    points: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    @property
    def wc_spread(self) -> Fraction | None:
        if self.wc_min is None or self.wc_max is None:
            return None
        return self.wc_max - self.wc_min


def spearman(x: list[float], y: list[float]) -> float:
    """Spearman rank correlation; 0 when either variable is constant."""
    from scipy.stats import spearmanr

    if len(set(x)) < 2 or len(set(y)) < 2:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rho = spearmanr(x, y)[0]
    return 0.0 if math.isnan(rho) else float(rho)


def trend_diagnostics(stats: Iterable[CategoryStats]) -> TrendDiagnostics:
    """Spread of WC(A) across categories and the D(C) versus f trend.

    Reports the Spearman correlation of D(C) with f over SW categories with
    D(C) >= 1, and the least-squares constant c in f ~ c / D(C).
    """
    stats = list(stats)
    sw = [s for s in stats if s.category.kind is Kind.SW and s.category.context_degree is not None]
    if len(sw) < 3:
        return TrendDiagnostics("insufficient data")
    wc = [(Fraction(s.a, s.k), s.label) for s in stats if s.k > 0]
    lo = min(wc, key=lambda t: t[0]) if wc else (None, None)
    hi = max(wc, key=lambda t: t[0]) if wc else (None, None)
    points = sorted((s.category.context_degree, s.f) for s in sw if s.category.context_degree >= 1)
    rho = fit = None
    if len(points) >= 2:
        d = [float(p[0]) for p in points]
        f = [float(p[1]) for p in points]
        rho = spearman(d, f)
        fit = sum(fi / di for di, fi in zip(d, f)) / sum(1 / di ** 2 for di in d)
    return TrendDiagnostics("ok", lo[0], hi[0], lo[1], hi[1], rho, fit, tuple(points))
