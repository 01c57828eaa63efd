"""Keyword decomposition, word classification, contextuality and word-association metrics."""

from __future__ import annotations

__version__ = "0.1.0"

from .classify import DEFAULT_LEXICONS, Kind, Lexicons, WordCategory, category_census, classify_corpus, classify_word
from .context import (
    CacheProvider,
    ContextCache,
    DisciplineMap,
    HttpProvider,
    LexiconProvider,
    WordContext,
    assign_degrees,
    fetch_and_cache,
    lookup_context,
    resolve_contexts,
)
from .corpus import Corpus, Keyword, KeywordRecord, ingest, load, load_corpus_file, save
from .errors import InvariantError, WordshipError
from .metrics import (
    AssociationRule,
    CategoryStats,
    ParameterSet,
    associations,
    category_table,
    discipline_ranking,
    fundamental_triple,
    parameters,
    rank_disciplines,
    trend_diagnostics,
    wordship_pattern,
    yearly_keyword_stats,
    yearly_word_stats,
)
from .report import ReportBundle, build_bundle, render
from .tokenize import DEFAULT_RULES, NormalizationRules, Token, TokenSeq, decompose, normalize_word, singularize

__all__ = [
    "AssociationRule",
    "CacheProvider",
    "CategoryStats",
    "ContextCache",
    "Corpus",
    "DEFAULT_LEXICONS",
    "DEFAULT_RULES",
    "DisciplineMap",
    "HttpProvider",
    "InvariantError",
    "Keyword",
    "KeywordRecord",
    "Kind",
    "LexiconProvider",
    "Lexicons",
    "NormalizationRules",
    "ParameterSet",
    "ReportBundle",
    "Token",
    "TokenSeq",
    "WordCategory",
    "WordContext",
    "WordshipError",
    "assign_degrees",
    "associations",
    "build_bundle",
    "category_census",
    "category_table",
    "classify_corpus",
    "classify_word",
    "decompose",
    "discipline_ranking",
    "fetch_and_cache",
    "fundamental_triple",
    "ingest",
    "load",
    "load_corpus_file",
    "lookup_context",
    "normalize_word",
    "parameters",
    "rank_disciplines",
    "render",
    "resolve_contexts",
    "save",
    "singularize",
    "trend_diagnostics",
    "wordship_pattern",
    "yearly_keyword_stats",
    "yearly_word_stats",
]
