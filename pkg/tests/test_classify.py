from __future__ import annotations

import pytest

from wordship.classify import (
    DEFAULT_FORM_WORDS,
    Kind,
    Lexicons,
    WordCategory,
    category_census,
    classify_corpus,
    classify_word,
    is_acronym_shaped,
)
from wordship.errors import ClassificationError, LexiconError


def test_golden_census(golden_corpus):
    census = category_census(golden_corpus, classify_corpus(golden_corpus))
    assert census == {Kind.EW: 2, Kind.FW: 1, Kind.AC: 0, Kind.SW: 15}


def test_precedence_form_word_beats_eponym_shape():
    lex = Lexicons(eponyms=frozenset({"bohr"}), acronyms=frozenset({"tem"}))
    assert classify_word("of", lex).kind is Kind.FW
    assert classify_word("bohr", lex).kind is Kind.EW
    assert classify_word("tem", lex).kind is Kind.AC
    assert classify_word("NMR", lex).kind is Kind.AC
    assert classify_word("laser", lex).kind is Kind.SW


def test_acronym_shape_uses_raw_surface():
    assert classify_word("esr", raw_surface="ESR").kind is Kind.AC
    assert classify_word("esr").kind is Kind.SW


@pytest.mark.parametrize("surface, expected", [
    ("NMR", True), ("2D", True), ("A", False), ("ABCDEFG", False), ("42", False), ("Nmr", False), ("X-1", False),
])
def test_acronym_shape(surface, expected):
    assert is_acronym_shaped(surface) is expected


def test_lexicons_must_be_disjoint():
    with pytest.raises(LexiconError, match="form_words/eponyms"):
        Lexicons(eponyms=frozenset({"of"}))


def test_lexicon_entries_are_casefolded(tmp_path):
    path = tmp_path / "ep.txt"
    path.write_text("# names\nAharonov\n\nBohm  # second\n", encoding="utf-8")
    lex = Lexicons.load(eponyms=path)
    assert lex.eponyms == {"aharonov", "bohm"}
    assert lex.form_words == DEFAULT_FORM_WORDS


def test_lexicons_dict_round_trip():
    lex = Lexicons(eponyms=frozenset({"kondo"}), acronyms=frozenset({"bcs"}))
    assert Lexicons.from_dict(lex.to_dict()) == lex


def test_default_form_words_cover_articles_prepositions_conjunctions():
    assert {"a", "the", "of", "in", "and", "or", "whereas"} <= DEFAULT_FORM_WORDS


def test_category_labels_and_parsing():
    assert WordCategory(Kind.SW, 4).label == "4-C"
    assert WordCategory(Kind.SW).label == "SW (unresolved)"
    assert WordCategory.parse("12-C") == WordCategory(Kind.SW, 12)
    assert WordCategory.parse("SW (3-C)") == WordCategory(Kind.SW, 3)
    assert WordCategory.parse("ew") == WordCategory(Kind.EW)
    with pytest.raises(ValueError):
        WordCategory.parse("XX")
    with pytest.raises(ValueError):
        WordCategory(Kind.EW, 3)
    with pytest.raises(ValueError):
        WordCategory(Kind.SW, -1)


def test_category_order_matches_parameter_table():
    cats = [WordCategory(Kind.FW), WordCategory(Kind.SW, 10), WordCategory(Kind.AC),
            WordCategory(Kind.SW, 2), WordCategory(Kind.EW)]
    assert [c.label for c in sorted(cats, key=WordCategory.sort_key)] == ["2-C", "10-C", "AC", "EW", "FW"]


def test_census_requires_every_word(golden_corpus):
    with pytest.raises(ClassificationError):
        category_census(golden_corpus, {})
    with pytest.raises(ClassificationError):
        classify_word("  ")
