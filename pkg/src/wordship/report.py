"""Render computed statistics as markdown, CSV files and JSON.

A :class:`ReportBundle` keeps the analysis inputs (corpus, word categories,
contexts, discipline map). Every table is rebuilt from those inputs when it is
rendered, so the three output formats cannot drift apart. Cells hold exact
values (integers and fractions); rounding happens only in :func:`format_cell`.

Output directory layout::

    report.md
    report.json
    warnings.txt
    tables/<name>.csv
    series/fig1_categories.csv
    series/fig2_dc_vs_f.csv
"""

from __future__ import annotations

import csv
import io
import json
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .classify import Kind, WordCategory
from .context import UNMAPPED, DisciplineMap, WordContext, map_discipline
from .corpus import Corpus
from .errors import ReportError
from .metrics import (
    DEFAULT_ASSOCIATION_RULE,
    WORDSHIP_BUCKETS,
    AssociationRule,
    CategoryStats,
    TrendDiagnostics,
    category_table,
    parameters,
    rank_disciplines,
    subject_frequencies,
    trend_diagnostics,
    wordship_pattern,
    yearly_keyword_stats,
    yearly_word_stats,
)

FORMATS = ("markdown", "csv", "json")
_FORMAT_ALIASES = {"md": "markdown", "csv-directory": "csv"}

# Cell kinds and their printed precision (digits after the point).
PRECISION = {"r1": 1, "r2": 2, "r3": 3, "pct0": 0, "pct2": 2, "float2": 2, "float3": 3}

_BUCKET_HEADERS = {"1": "Single word", "2": "Two words", "3": "Three words", ">3": "More than three words"}
_BUCKET_KEYS = {"1": "single_word", "2": "two_words", "3": "three_words", ">3": "more_than_three_words"}


def normalize_format(name: str) -> str:
    key = _FORMAT_ALIASES.get(name.strip().lower(), name.strip().lower())
    if key not in FORMATS:
        raise ReportError(f"unknown output format {name!r}; choose from {', '.join(FORMATS)}")
    return key


def round_half_up(value: Fraction | int | float, places: int) -> str:
    """Decimal string of ``value`` rounded half away from zero.

    Fractions are rounded exactly, so 29/200 becomes "0.15" at two places.

    >>> round_half_up(Fraction(100, 38), 2)
    '2.63'
    >>> round_half_up(Fraction(1, 8), 2)
    '0.13'
    """
    frac = Fraction(value) if not isinstance(value, float) else Fraction(repr(value))
    sign = "-" if frac < 0 else ""
    frac = abs(frac)
    scaled, remainder = divmod(frac.numerator * 10 ** places, frac.denominator)
    if 2 * remainder >= frac.denominator:
        scaled += 1
    if scaled == 0:
        sign = ""
    digits = str(scaled).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def format_cell(kind: str, value: Any) -> str:
    """Printed form of one cell; ``None`` prints as an empty cell."""
    if value is None:
        return ""
    if kind == "count_pct":
        count, pct = value
        return f"{count} ({round_half_up(pct, 0)}%)"
    if kind in PRECISION:
        return round_half_up(value, PRECISION[kind])
    return str(value)


@dataclass(frozen=True)
class Column:
    key: str
    header: str
    kind: str = "text"


@dataclass(frozen=True)
class Table:
    name: str
    title: str
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...]

    def formatted_rows(self) -> list[list[str]]:
        return [[format_cell(c.kind, v) for c, v in zip(self.columns, row)] for row in self.rows]


@dataclass(frozen=True)
class ReportWarning:
    section: str
    message: str

    def __str__(self) -> str:
        return f"[{self.section}] {self.message}"


# -- table builders -------------------------------------------------------------------

def _year_label(year: int | None, years: Sequence[int]) -> str:
    if year is not None:
        return str(year)
    if not years:
        return "All"
    return str(years[0]) if len(years) == 1 else f"{years[0]}-{years[-1]}"


def keyword_stats_table(corpus: Corpus) -> Table:
    cols = (
        Column("year", "Year"),
        Column("volume", "Vol. No."),
        Column("articles", "No. of articles (A)", "int"),
        Column("distinct_keywords", "No. of distinct keywords (B)", "int"),
        Column("keywords_per_article", "Average no. of distinct keywords per article (B/A)", "r1"),
        Column("total_frequency", "Total frequency of all distinct keywords (C)", "int"),
        Column("frequency_per_keyword", "Frequency per keyword (C/B)", "r1"),
    )
    years = corpus.years
    rows = []
    for s in yearly_keyword_stats(corpus):
        rows.append((
            _year_label(s.year, years),
            s.volumes if s.year is not None else "",
            s.articles,
            s.distinct_keywords,
            s.keywords_per_article,
            s.total_frequency,
            s.frequency_per_keyword,
        ))
    return Table("keyword_stats", "Distribution of articles and keywords over the years", cols, tuple(rows))


def wordship_table(corpus: Corpus) -> Table:
    cols = [
        Column("year", "Year"),
        Column("volume", "Vol. No."),
        Column("articles", "No. of articles", "int"),
        Column("distinct_keywords", "No. of distinct keywords (A)", "int"),
    ]
    cols += [Column(_BUCKET_KEYS[b], _BUCKET_HEADERS[b], "count_pct") for b in WORDSHIP_BUCKETS]
    years = corpus.years
    volumes = {row[0]: row[1] for row in keyword_stats_table(corpus).rows}
    rows = []
    for p in wordship_pattern(corpus, per_year=True):
        label = _year_label(p.year, years)
        buckets, pct = p.buckets, p.percentages
        rows.append((label, volumes.get(label, ""), p.articles, p.distinct_keywords)
                    + tuple((buckets[b], pct[b]) for b in WORDSHIP_BUCKETS))
    return Table("wordship", "Wordship pattern of keywords over the years", tuple(cols), tuple(rows))


def word_stats_table(corpus: Corpus) -> Table:
    cols = (
        Column("year", "Year"),
        Column("volume", "Vol. No."),
        Column("articles", "No. of articles", "int"),
        Column("keywords", "No. of keywords (A)", "int"),
        Column("distinct_words", "No. of constituent words (C)", "int"),
        Column("word_occurrences", "Frequency of words", "int"),
        Column("keywords_per_word", "Average no. of constituent words per keyword (A/C)", "r2"),
    )
    years = corpus.years
    rows = tuple(
        (_year_label(s.year, years), s.volumes if s.year is not None else "", s.articles, s.keywords,
         s.distinct_words, s.word_occurrences, s.keywords_per_word)
        for s in yearly_word_stats(corpus)
    )
    return Table("word_stats", "Statistics of words in keywords over the years", cols, rows)


def _type_label(category: WordCategory) -> str:
    return f"SW ({category.label})" if category.kind is Kind.SW and category.resolved else category.label


def words_table(corpus: Corpus, assignment: Mapping[str, WordCategory]) -> Table:
    cols = (
        Column("word", "Words"),
        Column("frequency", "Frequency", "int"),
        Column("type", "Types of words with respective D(C)"),
        Column("keywords_formed", "No. of keywords formed", "int"),
    )
    rows = tuple(
        (w.surface, w.occurrences, _type_label(assignment[w.surface]), w.keywords_formed)
        for w in sorted(corpus.words.values(), key=lambda w: w.surface)
    )
    return Table("words", "Words in keywords", cols, rows)


def disciplines_table(freqs: Mapping[str, int], discipline_map: DisciplineMap) -> Table:
    cols = (
        Column("discipline", "Broad disciplines"),
        Column("n", "n", "int"),
        Column("subjects", "Specific subjects with respective frequencies (f)"),
        Column("F", "F = Σf", "int"),
        Column("F_over_n", "F/n", "r1"),
    )
    stats = sorted(rank_disciplines(freqs, discipline_map), key=lambda s: s.discipline.casefold())
    rows = tuple(
        (s.discipline, s.n, ", ".join(f"{sub} ({f})" for sub, f in s.subjects), s.F, s.F_over_n)
        for s in stats
    )
    return Table("disciplines", "Broad disciplines and specific subjects in contextual analysis", cols, rows)


def ranking_table(freqs: Mapping[str, int] | Iterable[tuple[str, int]], discipline_map: DisciplineMap) -> Table:
    cols = (
        Column("rank", "Rank", "int"),
        Column("discipline", "Broad disciplines"),
        Column("F", "F = Σf", "int"),
        Column("percentage", "Percentage", "pct2"),
    )
    rows = tuple((s.rank, s.discipline, s.F, s.percentage) for s in rank_disciplines(freqs, discipline_map))
    return Table("ranking", "Ranking of broad disciplines by total frequency F", cols, rows)


def parameters_table(stats: Iterable[CategoryStats]) -> Table:
    """Triples and derived parameters, one row per category in the given order."""
    cols = (
        Column("category", "D(C)"),
        Column("f", "f", "int"),
        Column("a", "a", "int"),
        Column("k", "k", "int"),
        Column("wd_a", "WD(A)", "r2"),
        Column("wc_a", "WC(A)", "r2"),
        Column("kd_f", "KD(F)", "r2"),
        Column("wd_a_index", "WD(A)I", "r3"),
        Column("wd_a_index_normalized", "WD(A)I-N", "r3"),
    )
    rows = []
    for s in stats:
        p = parameters(s)
        rows.append((s.label, s.f, s.a, s.k, p.wd_a, p.wc_a, p.kd_f, p.wd_a_index, p.wd_a_index_normalized))
    return Table("parameters", "Word association parameters for each word category", cols, tuple(rows))


def categories_series(stats: Iterable[CategoryStats]) -> Table:
    cols = (Column("category", "category"), Column("f", "f", "int"), Column("a", "a", "int"), Column("k", "k", "int"))
    rows = tuple((s.label, s.f, s.a, s.k) for s in stats)
    return Table("fig1_categories", "Fundamental variables by word category", cols, rows)


def degree_series(stats: Iterable[CategoryStats]) -> Table:
    cols = (Column("dc", "dc", "int"), Column("f", "f", "int"))
    rows = tuple(
        (s.category.context_degree, s.f)
        for s in stats
        if s.category.kind is Kind.SW and s.category.context_degree is not None
    )
    return Table("fig2_dc_vs_f", "Distinct words by degree of contextuality", cols, rows)


def diagnostics_table(diag: TrendDiagnostics) -> Table:
    cols = (Column("measure", "Measure"), Column("value", "Value"), Column("detail", "Detail"))
    if diag.status != "ok":
        rows = (("status", diag.status, ""),)
    else:
        rho = "" if diag.spearman_rho is None else round_half_up(diag.spearman_rho, 3)
        fit = "" if diag.fit_c is None else round_half_up(diag.fit_c, 2)
        rows = (
            ("status", diag.status, ""),
            ("wc_a_min", format_cell("r2", diag.wc_min), diag.wc_min_category or ""),
            ("wc_a_max", format_cell("r2", diag.wc_max), diag.wc_max_category or ""),
            ("wc_a_spread", format_cell("r2", diag.wc_spread), ""),
            ("spearman_dc_f", rho, "SW categories with D(C) >= 1"),
            ("fit_c", fit, "least squares for f ~ c / D(C)"),
        )
    return Table("diagnostics", "Diagnostics", cols, rows)


# -- bundle ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportBundle:
    """Analysis inputs from which every table, series and warning is derived."""

    corpus: Corpus
    assignment: Mapping[str, WordCategory]
    contexts: Mapping[str, WordContext] = field(default_factory=dict)
    discipline_map: DisciplineMap | None = None
    rule: AssociationRule = DEFAULT_ASSOCIATION_RULE
    extra_warnings: tuple[ReportWarning, ...] = ()

    def category_stats(self) -> list[CategoryStats]:
        return category_table(self.corpus, self.assignment, self.rule)

    def subject_frequencies(self) -> dict[str, int]:
        sw = {w for w, c in self.assignment.items() if c.kind is Kind.SW}
        return subject_frequencies(ctx for w, ctx in self.contexts.items() if w in sw)

    def tables(self) -> list[Table]:
        out = [
            words_table(self.corpus, self.assignment),
            keyword_stats_table(self.corpus),
            wordship_table(self.corpus),
            word_stats_table(self.corpus),
        ]
        if self.discipline_map is not None:
            freqs = self.subject_frequencies()
            out.append(disciplines_table(freqs, self.discipline_map))
            out.append(ranking_table(freqs, self.discipline_map))
        out.append(parameters_table(self.category_stats()))
        return out

    def series(self) -> list[Table]:
        stats = self.category_stats()
        return [categories_series(stats), degree_series(stats)]

    def diagnostics(self) -> TrendDiagnostics:
        return trend_diagnostics(self.category_stats())

    def warnings(self) -> list[ReportWarning]:
        out = [ReportWarning("rejected records", str(r)) for r in self.corpus.rejected]
        for word, cat in sorted(self.assignment.items()):
            if cat.kind is Kind.SW and not cat.resolved:
                ctx = self.contexts.get(word)
                failed = ", ".join(sorted(ctx.unresolved)) if ctx is not None and ctx.unresolved else "no context"
                out.append(ReportWarning("unresolved words", f"{word} (providers: {failed})"))
        if self.discipline_map is not None:
            for subject in sorted(self.subject_frequencies()):
                if map_discipline(subject, self.discipline_map) == UNMAPPED:
                    out.append(ReportWarning("unmapped subjects", subject))
        out.extend(self.extra_warnings)
        return out


def build_bundle(
    corpus: Corpus,
    assignment: Mapping[str, WordCategory],
    contexts: Mapping[str, WordContext] | None = None,
    discipline_map: DisciplineMap | None = None,
    rule: AssociationRule = DEFAULT_ASSOCIATION_RULE,
    extra_warnings: Iterable[ReportWarning] = (),
) -> ReportBundle:
    missing = sorted(set(corpus.words) - set(assignment))
    if missing:
        raise ReportError(f"words without a category: {', '.join(missing)}")
    return ReportBundle(corpus, dict(assignment), dict(contexts or {}), discipline_map, rule, tuple(extra_warnings))


# -- formats --------------------------------------------------------------------------

def _md_escape(text: str) -> str:
    return text.replace("|", "\\|")


def markdown_table(table: Table) -> str:
    lines = [
        "| " + " | ".join(_md_escape(c.header) for c in table.columns) + " |",
        "|" + "|".join("---" if c.kind == "text" else "---:" for c in table.columns) + "|",
    ]
    for row in table.formatted_rows():
        lines.append("| " + " | ".join(_md_escape(cell) for cell in row) + " |")
    return "\n".join(lines) + "\n"


def render_markdown(bundle: ReportBundle) -> str:
    parts = ["# Keyword word-association report\n"]
    for table in bundle.tables() + bundle.series():
        parts.append(f"\n## {table.title}\n\n")
        parts.append(markdown_table(table))
    parts.append("\n## Diagnostics\n\n")
    parts.append(markdown_table(diagnostics_table(bundle.diagnostics())))
    parts.append("\n## Warnings\n\n")
    warnings = bundle.warnings()
    if not warnings:
        parts.append("None.\n")
    sections: dict[str, list[str]] = {}
    for w in warnings:
        sections.setdefault(w.section, []).append(w.message)
    for section, messages in sections.items():
        parts.append(f"### {section.capitalize()}\n\n")
        parts.extend(f"- {_md_escape(m)}\n" for m in messages)
        parts.append("\n")
    return "".join(parts).rstrip("\n") + "\n"


def csv_table(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header: list[str] = []
    for c in table.columns:
        header += [c.key, f"{c.key}_pct"] if c.kind == "count_pct" else [c.key]
    writer.writerow(header)
    for row in table.rows:
        cells: list[str] = []
        for c, v in zip(table.columns, row):
            if c.kind == "count_pct":
                cells += [str(v[0]), round_half_up(v[1], 0)]
            else:
                cells.append(format_cell(c.kind, v))
        writer.writerow(cells)
    return buf.getvalue()


def _json_cell(kind: str, value: Any) -> Any:
    if value is None:
        return None
    if kind == "count_pct":
        return [value[0], _json_cell("r2", value[1])]
    if isinstance(value, Fraction):
        return str(value)
    return value


def _parse_json_cell(kind: str, value: Any) -> Any:
    if value is None:
        return None
    if kind == "count_pct":
        return (value[0], Fraction(value[1]))
    if kind in PRECISION and isinstance(value, str):
        return Fraction(value)
    return value


def table_to_json(table: Table) -> dict:
    return {
        "name": table.name,
        "title": table.title,
        "columns": [{"key": c.key, "header": c.header, "kind": c.kind} for c in table.columns],
        "rows": [[_json_cell(c.kind, v) for c, v in zip(table.columns, row)] for row in table.rows],
    }


def table_from_json(data: Mapping) -> Table:
    """Inverse of :func:`table_to_json`; rationals are stored as exact "n/d" strings."""
    cols = tuple(Column(c["key"], c["header"], c["kind"]) for c in data["columns"])
    rows = tuple(tuple(_parse_json_cell(c.kind, v) for c, v in zip(cols, row)) for row in data["rows"])
    return Table(data["name"], data["title"], cols, rows)


def render_json(bundle: ReportBundle) -> str:
    from . import __version__

    diag = bundle.diagnostics()
    doc = {
        "tool_version": __version__,
        "tables": {t.name: table_to_json(t) for t in bundle.tables()},
        "series": {t.name: table_to_json(t) for t in bundle.series()},
        "diagnostics": {
            "status": diag.status,
            "wc_a_min": _json_cell("r2", diag.wc_min),
            "wc_a_min_category": diag.wc_min_category,
            "wc_a_max": _json_cell("r2", diag.wc_max),
            "wc_a_max_category": diag.wc_max_category,
            "spearman_dc_f": diag.spearman_rho,
            "fit_c": diag.fit_c,
            "points": [list(p) for p in diag.points],
        },
        "warnings": [{"section": w.section, "message": w.message} for w in bundle.warnings()],
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_warnings(bundle: ReportBundle) -> str:
    return "".join(f"{w}\n" for w in bundle.warnings())


def render_files(bundle: ReportBundle, formats: Iterable[str] = FORMATS) -> dict[str, str]:
    """Relative path -> file content for the requested formats (warnings.txt always)."""
    wanted = {normalize_format(f) for f in formats}
    files: dict[str, str] = {"warnings.txt": render_warnings(bundle)}
    if "markdown" in wanted:
        files["report.md"] = render_markdown(bundle)
    if "json" in wanted:
        files["report.json"] = render_json(bundle)
    if "csv" in wanted:
        for table in bundle.tables():
            files[f"tables/{table.name}.csv"] = csv_table(table)
        files["tables/diagnostics.csv"] = csv_table(diagnostics_table(bundle.diagnostics()))
        for table in bundle.series():
            files[f"series/{table.name}.csv"] = csv_table(table)
    return dict(sorted(files.items()))


def render(bundle: ReportBundle, out_dir: str | Path, formats: Iterable[str] = FORMATS) -> list[Path]:
    """Write the report into ``out_dir``.

    Files are staged in a temporary directory next to ``out_dir`` and moved into
    place only once all of them were written, so an unwritable destination fails
    before anything is touched.
    """
    files = render_files(bundle, formats)
    out = Path(out_dir)
    parent = out.parent if str(out.parent) else Path(".")
    try:
        parent.mkdir(parents=True, exist_ok=True)
        stage = Path(tempfile.mkdtemp(prefix=".wordship-", dir=parent))
    except OSError as exc:
        raise ReportError(f"cannot write report to {out}: {exc}") from exc
    try:
        for rel, content in files.items():
            target = stage / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
        if out.exists() and not out.is_dir():
            raise ReportError(f"{out} exists and is not a directory")
        if not out.exists():
            os.replace(stage, out)
        else:
            for rel in files:
                (out / rel).parent.mkdir(parents=True, exist_ok=True)
                os.replace(stage / rel, out / rel)
    except OSError as exc:
        raise ReportError(f"cannot write report to {out}: {exc}") from exc
    finally:
        shutil.rmtree(stage, ignore_errors=True)
    return [out / rel for rel in files]


def load_report_json(path: str | Path) -> dict[str, Table]:
    """Read the tables and series of a JSON report back into :class:`Table` objects."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from exc
    tables = {name: table_from_json(t) for name, t in doc.get("tables", {}).items()}
    tables.update({name: table_from_json(t) for name, t in doc.get("series", {}).items()})
    return tables
