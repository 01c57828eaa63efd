"""Word categories: eponymous (EW), form (FW), acronym (AC) and semantic (SW).

Classification precedence is FW > EW > AC > SW. Form words and eponyms are
decided purely by lexicon membership; acronyms by lexicon membership or by the
shape of the surface form. Semantic words receive their degree of
contextuality later, from :mod:`wordship.context`.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Mapping

from .errors import ClassificationError, LexiconError

if TYPE_CHECKING:
    from .corpus import Corpus


class Kind(str, enum.Enum):
    EW = "EW"
    FW = "FW"
    AC = "AC"
    SW = "SW"


@dataclass(frozen=True, order=False)
class WordCategory:
    """A category key. ``context_degree`` is only meaningful for SW.

    An SW category without a degree stands for a word whose contexts could not
    be resolved; such words take part in no SW(n) category.
    """

    kind: Kind
    context_degree: int | None = None

    def __post_init__(self) -> None:
        if self.kind is not Kind.SW and self.context_degree is not None:
            raise ValueError(f"{self.kind.value} cannot carry a degree of contextuality")
        if self.context_degree is not None and self.context_degree < 0:
            raise ValueError("degree of contextuality must be non-negative")

    @property
    def label(self) -> str:
        if self.kind is Kind.SW:
            return "SW (unresolved)" if self.context_degree is None else f"{self.context_degree}-C"
        return self.kind.value

    @property
    def resolved(self) -> bool:
        return self.kind is not Kind.SW or self.context_degree is not None

    def sort_key(self) -> tuple:
        # SW rows by degree first, then AC, EW, FW (the order of the parameter table)
        order = {Kind.SW: 0, Kind.AC: 1, Kind.EW: 2, Kind.FW: 3}
        return (order[self.kind], -1 if self.context_degree is None else self.context_degree)

    @classmethod
    def parse(cls, label: str) -> WordCategory:
        text = label.strip()
        if text.upper() in ("EW", "FW", "AC"):
            return cls(Kind(text.upper()))
        if text.upper().endswith("-C") and text[:-2].isdigit():
            return cls(Kind.SW, int(text[:-2]))
        if text.upper().startswith("SW"):
            inner = text[2:].strip(" ()")
            if not inner:
                return cls(Kind.SW)
            return cls.parse(inner)
        raise ValueError(f"not a category label: {label!r}")

    def __str__(self) -> str:
        return self.label


def is_acronym_shaped(surface: str) -> bool:
    """2 to 6 characters, all uppercase letters or digits, at least one letter."""
    return (
        2 <= len(surface) <= 6
        and all((c.isalpha() and c.isupper()) or c.isdigit() for c in surface)
        and any(c.isalpha() for c in surface)
    )


def read_word_list(path: str | Path) -> frozenset[str]:
    """One word per line; ``#`` comments and blank lines ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.casefold())
    return frozenset(words)


def _packaged_form_words() -> frozenset[str]:
    with resources.as_file(resources.files("wordship") / "data" / "form_words.txt") as path:
        return read_word_list(path)


DEFAULT_FORM_WORDS: frozenset[str] = _packaged_form_words()


@dataclass(frozen=True)
class Lexicons:
    form_words: frozenset[str] = DEFAULT_FORM_WORDS
    eponyms: frozenset[str] = field(default_factory=frozenset)
    acronyms: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for name in ("form_words", "eponyms", "acronyms"):
            object.__setattr__(self, name, frozenset(w.strip().casefold() for w in getattr(self, name)))
        problems = []
        pairs = (("form_words", "eponyms"), ("form_words", "acronyms"), ("eponyms", "acronyms"))
        for left, right in pairs:
            shared = getattr(self, left) & getattr(self, right)
            if shared:
                problems.append(f"{left}/{right}: {', '.join(sorted(shared))}")
        if problems:
            raise LexiconError("lexicons are not disjoint: " + "; ".join(problems))

    @property
    def protected(self) -> frozenset[str]:
        """Lexicon entries; these are never singularized."""
        return self.form_words | self.eponyms | self.acronyms

    @classmethod
    def load(
        cls,
        form_words: str | Path | None = None,
        eponyms: str | Path | None = None,
        acronyms: str | Path | None = None,
    ) -> Lexicons:
        return cls(
            form_words=read_word_list(form_words) if form_words else DEFAULT_FORM_WORDS,
            eponyms=read_word_list(eponyms) if eponyms else frozenset(),
            acronyms=read_word_list(acronyms) if acronyms else frozenset(),
        )

    def to_dict(self) -> dict:
        return {k: sorted(getattr(self, k)) for k in ("form_words", "eponyms", "acronyms")}

    @classmethod
    def from_dict(cls, data: Mapping) -> Lexicons:
        return cls(**{k: frozenset(data.get(k, ())) for k in ("form_words", "eponyms", "acronyms")})


DEFAULT_LEXICONS = Lexicons()


def classify_word(word: str, lexicons: Lexicons = DEFAULT_LEXICONS, raw_surface: str | None = None) -> WordCategory:
    """Return the category of one normalized word.

    ``raw_surface`` is the form before normalization; the acronym shape test is
    applied to it when given, otherwise to ``word``.
    """
    if not word or not word.strip():
        raise ClassificationError("cannot classify an empty word")
    key = word.casefold()
    if key in lexicons.form_words:
        return WordCategory(Kind.FW)
    if key in lexicons.eponyms:
        return WordCategory(Kind.EW)
    if key in lexicons.acronyms or is_acronym_shaped(raw_surface if raw_surface is not None else word):
        return WordCategory(Kind.AC)
    return WordCategory(Kind.SW)


def classify_corpus(corpus: Corpus, lexicons: Lexicons | None = None) -> dict[str, WordCategory]:
    lexicons = lexicons or corpus.lexicons
    return {surface: classify_word(surface, lexicons) for surface in corpus.words}


def category_census(corpus: Corpus, categories: Mapping[str, WordCategory]) -> dict[Kind, int]:
    """Distinct-word count per kind. Every corpus word must be classified."""
    missing = sorted(set(corpus.words) - set(categories))
    if missing:
        raise ClassificationError(f"unclassified words: {', '.join(missing)}")
    counts = Counter(categories[w].kind for w in corpus.words)
    return {kind: counts.get(kind, 0) for kind in Kind}

