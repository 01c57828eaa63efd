"""JSON configuration for the command-line tool.

Example::

    {
      "normalization": {"singularize": true, "hyphen_splits": true},
      "lexicons": {"eponyms": "eponyms.txt"},
      "contexts": {
        "cache": "contexts.ndjson",
        "providers": [
          {"name": "dictionary", "lexicon": "dictionary.tsv"},
          {"name": "encyclopedia", "url": "https://example.org/subjects/{word}"}
        ],
        "aliases": "aliases.tsv"
      },
      "discipline_map": "default",
      "association": {"fw_fw_pairs": true},
      "output": {"format": ["markdown", "csv", "json"]},
      "years": [1900, 2100]
    }

Relative paths are resolved against the directory of the config file. A
provider given as a bare string is a name whose answers are read from the cache.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .classify import Lexicons
from .context import (
    CacheProvider,
    ContextCache,
    ContextProvider,
    DisciplineMap,
    HttpProvider,
    LexiconProvider,
    load_aliases,
)
from .corpus import DEFAULT_YEAR_RANGE
from .errors import ConfigError, WordshipError
from .metrics import AssociationRule
from .report import FORMATS, normalize_format
from .tokenize import NormalizationRules, load_singular_exceptions

_TOP_KEYS = {"normalization", "lexicons", "contexts", "discipline_map", "association", "output", "years"}


@dataclass(frozen=True)
class ProviderSpec:
    name: str
    lexicon: Path | None = None
    url: str | None = None

    def live(self) -> ContextProvider:
        """The provider that answers from its own source (file or network)."""
        if self.lexicon is not None:
            return LexiconProvider.from_tsv(self.lexicon, self.name)
        if self.url is not None:
            return HttpProvider(self.name, self.url)
        raise ConfigError(f"provider {self.name!r} has neither 'lexicon' nor 'url'; it can only be read from the cache")


@dataclass(frozen=True)
class Config:
    rules: NormalizationRules = field(default_factory=NormalizationRules)
    lexicons: Lexicons = field(default_factory=Lexicons)
    cache_path: Path | None = None
    providers: tuple[ProviderSpec, ...] = ()
    aliases: Mapping[str, str] = field(default_factory=dict)
    discipline_map: DisciplineMap | None = None
    association: AssociationRule = field(default_factory=AssociationRule)
    formats: tuple[str, ...] = FORMATS
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE

    def provider(self, name: str) -> ProviderSpec:
        for spec in self.providers:
            if spec.name == name:
                return spec
        raise ConfigError(f"no provider named {name!r} in config")

    def context_providers(self) -> list[ContextProvider]:
        """Providers used by analysis: cached answers when a cache is configured, else live lexicons."""
        if self.cache_path is not None:
            cache = ContextCache(self.cache_path)
            return [CacheProvider(cache, spec.name) for spec in self.providers]
        return [spec.live() for spec in self.providers]


def _path(base: Path, value: Any, key: str) -> Path:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{key}: expected a path string")
    path = Path(value)
    return path if path.is_absolute() else base / path


def _section(data: Mapping, key: str) -> Mapping:
    value = data.get(key, {})
    if not isinstance(value, Mapping):
        raise ConfigError(f"{key}: expected an object")
    return value


def from_dict(data: Mapping[str, Any], base_dir: str | Path = ".") -> Config:
    base = Path(base_dir)
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        norm = dict(_section(data, "normalization"))
        exceptions_file = norm.pop("singular_exceptions_file", None)
        rules = NormalizationRules.from_dict(norm)
        if exceptions_file:
            rules = rules.with_exceptions(load_singular_exceptions(_path(base, exceptions_file, "normalization.singular_exceptions_file")))

        lex = _section(data, "lexicons")
        unknown = sorted(set(lex) - {"form_words", "eponyms", "acronyms"})
        if unknown:
            raise ConfigError(f"unknown lexicon keys: {', '.join(unknown)}")
        lexicons = Lexicons.load(**{k: _path(base, v, f"lexicons.{k}") for k, v in lex.items()})

        ctx = _section(data, "contexts")
        cache_path = _path(base, ctx["cache"], "contexts.cache") if ctx.get("cache") else None
        providers = []
        for item in ctx.get("providers", []):
            if isinstance(item, str):
                providers.append(ProviderSpec(item))
            elif isinstance(item, Mapping) and item.get("name"):
                lexicon = _path(base, item["lexicon"], "contexts.providers.lexicon") if item.get("lexicon") else None
                providers.append(ProviderSpec(item["name"], lexicon, item.get("url")))
            else:
                raise ConfigError("contexts.providers: each entry is a name or an object with 'name'")
        names = [p.name for p in providers]
        if len(set(names)) != len(names):
            raise ConfigError("contexts.providers: provider names must be unique")
        aliases = load_aliases(_path(base, ctx["aliases"], "contexts.aliases")) if ctx.get("aliases") else {}

        dm = data.get("discipline_map", "default")
        if dm is None:
            discipline_map = None
        elif dm == "default":
            discipline_map = DisciplineMap.default()
        else:
            discipline_map = DisciplineMap.from_tsv(_path(base, dm, "discipline_map"))

        assoc = _section(data, "association")
        association = AssociationRule(**{k: bool(v) for k, v in assoc.items()})

        fmt = _section(data, "output").get("format", list(FORMATS))
        fmt = [fmt] if isinstance(fmt, str) else list(fmt)
        formats = tuple(dict.fromkeys(normalize_format(f) for f in fmt))

        years = data.get("years", list(DEFAULT_YEAR_RANGE))
        if not (isinstance(years, (list, tuple)) and len(years) == 2 and all(isinstance(y, int) for y in years)):
            raise ConfigError("years: expected [first, last]")
        if years[0] > years[1]:
            raise ConfigError("years: first year is after last year")
    except ConfigError:
        raise
    except (WordshipError, OSError, TypeError, KeyError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    return Config(rules, lexicons, cache_path, tuple(providers), aliases, discipline_map, association, formats, tuple(years))


def load_config(path: str | Path | None) -> Config:
    """Read a config file; ``None`` gives the defaults."""
    if path is None:
        return from_dict({})
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path}: top level must be an object")
    return from_dict(data, path.parent)
