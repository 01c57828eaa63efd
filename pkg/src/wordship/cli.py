"""Command-line front end.

Subcommands::

    wordship analyze --input corpus.csv --config wordship.json --out report/
    wordship fetch-contexts --input words.txt --provider dictionary --cache contexts.ndjson
    wordship tokenize "Aharonov-Bohm effect"
    wordship validate-lexicons --config wordship.json

Exit status is 0 on success, 1 for input errors (including bad flags) and 2
when an internal invariant check fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .classify import Kind, Lexicons, category_census, classify_corpus, classify_word
from .config import Config, load_config
from .context import ContextCache, LexiconProvider, assign_degrees, fetch_and_cache, resolve_contexts
from .corpus import Corpus, load_corpus_file, save
from .errors import ConfigError, InvariantError, WordshipError
from .metrics import CategoryStats, parameters
from .report import build_bundle, normalize_format, render
from .tokenize import decompose

log = logging.getLogger("wordship")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2

_CORPUS_SUFFIXES = {".csv", ".ndjson", ".jsonl", ".json"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Report usage errors with exit status 1 instead of argparse's 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordship", description="Keyword word-association analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="ingest, classify, contextualize from cache, compute metrics, render")
    p.add_argument("--input", required=True, type=Path, help="corpus file (.csv or .ndjson)")
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--out", required=True, type=Path, help="report directory")
    p.add_argument("--format", action="append", help="markdown, csv or json (repeatable; overrides config)")
    p.add_argument("--save-corpus", type=Path, help="also write the ingested corpus as JSON")

    p = sub.add_parser("fetch-contexts", help="look up subject contexts and append them to the cache")
    p.add_argument("--input", required=True, type=Path, help="word list (one per line) or a corpus file")
    p.add_argument("--provider", required=True, help="provider name from the config, or a word<TAB>subjects file")
    p.add_argument("--cache", type=Path, help="cache file (defaults to contexts.cache from the config)")
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--rate-limit", type=float, default=None, help="maximum requests per second")
    p.add_argument("--retries", type=int, default=3, help="retries per word after a retryable failure")

    p = sub.add_parser("tokenize", help="show how one keyword is decomposed")
    p.add_argument("keyword")
    p.add_argument("--config", type=Path, help="JSON config file")

    p = sub.add_parser("validate-lexicons", help="check that the lexicons load and are disjoint")
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--form-words", type=Path)
    p.add_argument("--eponyms", type=Path)
    p.add_argument("--acronyms", type=Path)
    return parser


# -- subcommands ------------------------------------------------------------------------

def check_invariants(corpus: Corpus, stats: Sequence[CategoryStats], unresolved: int) -> None:
    """Raise InvariantError if the category table is inconsistent with the corpus."""
    total_f = sum(s.f for s in stats) + unresolved
    if total_f != len(corpus.words):
        raise InvariantError(f"category f values sum to {total_f}, corpus has {len(corpus.words)} distinct words")
    for s in stats:
        if s.k > len(corpus.keywords):
            raise InvariantError(f"{s.label}: k={s.k} exceeds the {len(corpus.keywords)} distinct keywords")
        p = parameters(s)
        if p.kd_f is not None and p.wc_a is not None and p.kd_f * p.wc_a != p.wd_a:
            raise InvariantError(f"{s.label}: KD(F) * WC(A) differs from WD(A)")


def cmd_analyze(args: argparse.Namespace, config: Config) -> int:
    formats = tuple(normalize_format(f) for f in args.format) if args.format else config.formats
    corpus = load_corpus_file(args.input, config.rules, config.lexicons, config.year_range)
    categories = classify_corpus(corpus)
    census = category_census(corpus, categories)
    sw_words = sorted(w for w, c in categories.items() if c.kind is Kind.SW)
    providers = config.context_providers()
    if not providers and sw_words:
        log.warning("no context providers configured; all semantic words stay unresolved")
    contexts = resolve_contexts(sw_words, providers, config.aliases) if providers else {}
    assignment = assign_degrees(categories, contexts)
    bundle = build_bundle(corpus, assignment, contexts, config.discipline_map, config.association)
    unresolved = sum(1 for c in assignment.values() if not c.resolved)
    check_invariants(corpus, bundle.category_stats(), unresolved)
    written = render(bundle, args.out, formats)
    if args.save_corpus:
        save(corpus, args.save_corpus)
    warnings = bundle.warnings()
    print(f"articles: {len(corpus.articles)}  distinct keywords: {len(corpus.keywords)}  distinct words: {len(corpus.words)}")
    print("words by kind: " + "  ".join(f"{k.value}={n}" for k, n in census.items()))
    print(f"wrote {len(written)} files to {args.out}")
    if warnings:
        print(f"{len(warnings)} warning(s); see {Path(args.out) / 'warnings.txt'}")
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def _read_word_list(path: Path, config: Config) -> list[str]:
    if path.suffix.lower() in _CORPUS_SUFFIXES:
        corpus = load_corpus_file(path, config.rules, config.lexicons, config.year_range)
        return sorted(w for w, c in classify_corpus(corpus).items() if c.kind is Kind.SW)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read word list {path}: {exc}") from exc
    words = [line.split("#", 1)[0].strip() for line in lines]
    return [w for w in dict.fromkeys(words) if w]


def cmd_fetch(args: argparse.Namespace, config: Config) -> int:
    if args.retries < 0:
        raise ConfigError("--retries must be non-negative")
    if args.rate_limit is not None and args.rate_limit <= 0:
        raise ConfigError("--rate-limit must be positive")
    cache_path = args.cache or config.cache_path
    if cache_path is None:
        raise ConfigError("no cache path: pass --cache or set contexts.cache in the config")
    if any(p.name == args.provider for p in config.providers):
        provider = config.provider(args.provider).live()
    elif Path(args.provider).is_file():
        provider = LexiconProvider.from_tsv(args.provider)
    else:
        raise ConfigError(f"unknown provider {args.provider!r}: not in the config and not a lexicon file")
    words = _read_word_list(args.input, config)
    cache = ContextCache(cache_path)
    report = fetch_and_cache(words, provider, cache, rate_limit=args.rate_limit, retries=args.retries)
    print(f"provider {provider.name}: fetched {len(report.fetched)}, already cached {len(report.cached)}, "
          f"unresolved {len(report.unresolved)}, requests {report.requests}")
    for word, reason in sorted(report.unresolved.items()):
        print(f"unresolved: {word}: {reason}", file=sys.stderr)
    return EXIT_OK


def cmd_tokenize(args: argparse.Namespace, config: Config) -> int:
    seq = decompose(args.keyword, config.rules, config.lexicons)
    print(f"keyword: {seq.render()}")
    print(f"canonical: {seq.canonical}")
    print(f"wordship: {seq.wordship}")
    for i, tok in enumerate(seq.tokens, 1):
        group = "-" if tok.group is None else str(tok.group)
        kind = classify_word(tok.text, config.lexicons).kind.value
        print(f"{i}\t{tok.text}\tgroup={group}\t{kind}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: Config) -> int:
    lexicons = config.lexicons
    if args.form_words or args.eponyms or args.acronyms:
        lexicons = Lexicons(
            form_words=Lexicons.load(form_words=args.form_words).form_words if args.form_words else lexicons.form_words,
            eponyms=Lexicons.load(eponyms=args.eponyms).eponyms if args.eponyms else lexicons.eponyms,
            acronyms=Lexicons.load(acronyms=args.acronyms).acronyms if args.acronyms else lexicons.acronyms,
        )
    print(f"form words: {len(lexicons.form_words)}  eponyms: {len(lexicons.eponyms)}  acronyms: {len(lexicons.acronyms)}")
    print("lexicons are disjoint")
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "fetch-contexts": cmd_fetch,
    "tokenize": cmd_tokenize,
    "validate-lexicons": cmd_validate,
}


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.ERROR - 10 * min(args.verbose, 3),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except WordshipError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> int:
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
