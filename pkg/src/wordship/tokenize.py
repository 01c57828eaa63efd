"""Keyword decomposition into normalized constituent words.

A keyword string is split on whitespace and, optionally, on hyphens. Runs that
were joined by hyphens keep a shared group id so they can be rendered back as
compounds ("spin-lattice") while still counting as separate words.

>>> seq = decompose("Nuclear spin-lattice relaxation effect")
>>> seq.render()
'nuclear spin-lattice relaxation effect'
>>> seq.wordship
5
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Mapping

from .classify import DEFAULT_LEXICONS, Lexicons, is_acronym_shaped
from .errors import LexiconError, TokenizeError

_WHITESPACE_RE = re.compile(r"\s+")
_HYPHEN_RE = re.compile("[-‐‑‒–]+")

DEFAULT_STRIP_CHARACTERS = "\"'()[]{}‘’“”"

# Singular forms ending in "s" that the suffix rules would otherwise damage,
# plus irregular plurals. Extended by the exception file.
_BUILTIN_EXCEPTIONS = {
    "analyses": "analysis",
    "atlases": "atlas",
    "axes": "axis",
    "biases": "bias",
    "chaos": "chaos",
    "crises": "crisis",
    "gases": "gas",
    "indices": "index",
    "lenses": "lens",
    "matrices": "matrix",
    "news": "news",
    "series": "series",
    "species": "species",
    "vertices": "vertex",
}


@dataclass(frozen=True)
class NormalizationRules:
    lowercase: bool = True
    singularize: bool = True
    hyphen_splits: bool = True
    strip_characters: str = DEFAULT_STRIP_CHARACTERS
    # plural -> singular; kept sorted so equal rules compare and serialize equal
    singular_exceptions: tuple[tuple[str, str], ...] = field(
        default_factory=lambda: tuple(sorted(_BUILTIN_EXCEPTIONS.items()))
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "strip_characters", "".join(sorted(set(self.strip_characters))))
        table = {p.lower(): s.lower() for p, s in dict(self.singular_exceptions).items()}
        clash = sorted(s for s in table.values() if s in table and table[s] != s)
        if clash:
            raise LexiconError(f"singular forms also listed as plurals: {', '.join(clash)}")
        object.__setattr__(self, "singular_exceptions", tuple(sorted(table.items())))

    def with_exceptions(self, extra: Mapping[str, str]) -> NormalizationRules:
        merged = dict(self.singular_exceptions)
        merged.update(extra)
        return replace(self, singular_exceptions=tuple(merged.items()))

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "singularize": self.singularize,
            "hyphen_splits": self.hyphen_splits,
            "strip_characters": self.strip_characters,
            "singular_exceptions": [list(p) for p in self.singular_exceptions],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> NormalizationRules:
        kwargs = {k: data[k] for k in ("lowercase", "singularize", "hyphen_splits", "strip_characters") if k in data}
        if "singular_exceptions" in data:
            kwargs["singular_exceptions"] = tuple(tuple(p) for p in data["singular_exceptions"])
        return cls(**kwargs)


DEFAULT_RULES = NormalizationRules()


def load_singular_exceptions(path: str | Path) -> dict[str, str]:
    """Read a ``plural<TAB>singular`` file; ``#`` starts a comment."""
    pairs = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise LexiconError(f"{path}:{lineno}: expected 'plural<TAB>singular'")
        pairs[parts[0].strip().lower()] = parts[1].strip().lower()
    return pairs


@dataclass(frozen=True)
class Token:
    text: str
    group: int | None = None
    is_form_word: bool = False


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple[Token, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise TokenizeError("no tokens")
        positions: dict[int, list[int]] = {}
        for i, tok in enumerate(self.tokens):
            if tok.group is not None:
                positions.setdefault(tok.group, []).append(i)
        for group, idx in positions.items():
            if idx[-1] - idx[0] + 1 != len(idx):
                raise TokenizeError(f"hyphen group {group} is not contiguous")
        if all(t.is_form_word for t in self.tokens):
            raise TokenizeError("keyword consists of form words only")

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    @property
    def wordship(self) -> int:
        return wordship(self)

    @property
    def canonical(self) -> str:
        """Identity used for deduplication; hyphenation does not matter."""
        return " ".join(self.words)

    def render(self) -> str:
        out: list[str] = []
        for i, tok in enumerate(self.tokens):
            if i:
                joined = tok.group is not None and tok.group == self.tokens[i - 1].group
                out.append("-" if joined else " ")
            out.append(tok.text)
        return "".join(out)

    def __len__(self) -> int:
        return len(self.tokens)


@lru_cache(maxsize=64)
def _exception_tables(pairs: tuple[tuple[str, str], ...]) -> tuple[dict[str, str], frozenset[str]]:
    table = dict(pairs)
    return table, frozenset(table.values())


def singularize(word: str, exceptions: Mapping[str, str] | None = None) -> str:
    """Strip a plural suffix using a short rule list.

    The rules never produce a form that another rule would shorten again, so
    the function is idempotent.
    """
    if exceptions is None:
        exceptions = _BUILTIN_EXCEPTIONS
    return _singularize(word, *_exception_tables(tuple(sorted(exceptions.items()))))


def _singularize(word: str, table: Mapping[str, str], singulars: frozenset[str]) -> str:
    low = word.lower()
    if low in table:
        return _match_case(word, table[low])
    if low in singulars or len(low) <= 3 or not low.endswith("s"):
        return word
    if low.endswith(("ss", "us", "is", "ics")):
        return word
    if low.endswith("ies") and len(low) > 4:
        return word[:-3] + ("Y" if word[-3].isupper() else "y")
    if low.endswith("es"):
        if low[:-2] in singulars:
            return word[:-2]
        if low[:-1] in singulars:
            return word[:-1]
        if low.endswith("sses") or low[:-2].endswith(("x", "z", "ch", "sh")):
            return word[:-2]
    return word[:-1]


def _match_case(original: str, replacement: str) -> str:
    if original.isupper():
        return replacement.upper()
    if original[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def normalize_word(token: str, rules: NormalizationRules = DEFAULT_RULES) -> str:
    """Normalize one word. Acronym-shaped tokens are returned unchanged.

    >>> normalize_word("Defects")
    'defect'
    """
    if is_acronym_shaped(token):
        return token
    word = token.lower() if rules.lowercase else token
    if rules.singularize and any(c.isalpha() for c in word):
        word = _singularize(word, *_exception_tables(rules.singular_exceptions))
    return word


def decompose(
    raw: str,
    rules: NormalizationRules = DEFAULT_RULES,
    lexicons: Lexicons = DEFAULT_LEXICONS,
) -> TokenSeq:
    """Split a keyword into normalized tokens with hyphen groups and form-word flags.

    Words listed in any lexicon are lowercased (per ``rules``) but never
    singularized, so "whereas" stays a form word.
    """
    text = raw.translate({ord(c): None for c in rules.strip_characters})
    protected = lexicons.protected
    tokens: list[Token] = []
    group_id = 0
    for chunk in _WHITESPACE_RE.split(text.strip()):
        parts = _HYPHEN_RE.split(chunk) if rules.hyphen_splits else [chunk]
        parts = [p for p in parts if p]
        if not parts:
            continue
        group = None
        if len(parts) > 1:
            group_id += 1
            group = group_id
        for part in parts:
            if part.casefold() in protected and not is_acronym_shaped(part):
                word = part.lower() if rules.lowercase else part
            else:
                word = normalize_word(part, rules)
            tokens.append(Token(word, group, word.casefold() in lexicons.form_words))
    if not tokens:
        raise TokenizeError(f"no tokens in keyword {raw!r}")
    return TokenSeq(tuple(tokens))


def wordship(seq: TokenSeq) -> int:
    """Number of tokens that are not form words."""
    return sum(1 for t in seq.tokens if not t.is_form_word)
