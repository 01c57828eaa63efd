from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordship.classify import Lexicons
from wordship.errors import LexiconError, TokenizeError
from wordship.tokenize import (
    DEFAULT_RULES,
    NormalizationRules,
    Token,
    TokenSeq,
    decompose,
    load_singular_exceptions,
    normalize_word,
    singularize,
    wordship,
)


def test_hyphenated_eponym_pair_keeps_group():
    lex = Lexicons(eponyms=frozenset({"aharonov", "bohm"}))
    seq = decompose("Aharonov-Bohm effect", lexicons=lex)
    assert seq.words == ("aharonov", "bohm", "effect")
    assert [t.group for t in seq.tokens] == [1, 1, None]
    assert seq.render() == "aharonov-bohm effect"


def test_three_part_compound_counts_three_words():
    seq = decompose("Nuclear spin-lattice-relaxation effect")
    assert seq.wordship == 5
    assert seq.render() == "nuclear spin-lattice-relaxation effect"


def test_hyphenation_and_plural_do_not_change_identity():
    a = decompose("Defects of absorption spectra")
    b = decompose("Defect of absorption-spectra")
    assert a.canonical == b.canonical == "defect of absorption spectra"


def test_form_words_are_flagged_and_excluded_from_wordship():
    seq = decompose("Surface of acoustic-wave")
    assert [t.is_form_word for t in seq.tokens] == [False, True, False, False]
    assert wordship(seq) == 3


def test_keyword_of_only_form_words_is_rejected():
    with pytest.raises(TokenizeError):
        decompose("of the")


def test_blank_keyword_is_rejected():
    with pytest.raises(TokenizeError):
        decompose("  ( ) ")


def test_hyphen_splitting_can_be_disabled():
    rules = NormalizationRules(hyphen_splits=False)
    assert decompose("spin-lattice relaxation", rules).words == ("spin-lattice", "relaxation")


def test_strip_characters_removed():
    assert decompose('"Quantum (dots)"').words == ("quantum", "dot")


@pytest.mark.parametrize("plural, singular", [
    ("defects", "defect"),
    ("spectra", "spectra"),
    ("properties", "property"),
    ("boxes", "box"),
    ("branches", "branch"),
    ("glasses", "glass"),
    ("gases", "gas"),
    ("analyses", "analysis"),
    ("indices", "index"),
    ("physics", "physics"),
    ("nucleus", "nucleus"),
    ("axis", "axis"),
    ("gas", "gas"),
    ("waves", "wave"),
    ("series", "series"),
])
def test_singularize_examples(plural, singular):
    assert singularize(plural) == singular


def test_acronyms_are_not_normalized():
    assert normalize_word("NMR") == "NMR"
    assert normalize_word("MOSFETS") == "mosfet"  # seven letters: not acronym shaped
    assert decompose("ESR spectra").words == ("ESR", "spectra")


def test_lexicon_words_are_never_singularized():
    assert decompose("whereas magnets").words == ("whereas", "magnet")
    lex = Lexicons(eponyms=frozenset({"stokes"}))
    assert decompose("Stokes shift", lexicons=lex).words == ("stokes", "shift")


def test_exception_file(tmp_path):
    path = tmp_path / "exc.tsv"
    path.write_text("# plural\tsingular\ncriteria\tcriterion\n", encoding="utf-8")
    rules = DEFAULT_RULES.with_exceptions(load_singular_exceptions(path))
    assert normalize_word("criteria", rules) == "criterion"


def test_bad_exception_file(tmp_path):
    path = tmp_path / "exc.tsv"
    path.write_text("criteria\n", encoding="utf-8")
    with pytest.raises(LexiconError):
        load_singular_exceptions(path)


def test_exception_clash_rejected():
    with pytest.raises(LexiconError):
        NormalizationRules(singular_exceptions=(("as", "a"), ("a", "b")))


def test_rules_round_trip_through_dict():
    rules = NormalizationRules(singularize=False).with_exceptions({"data": "datum"})
    assert NormalizationRules.from_dict(rules.to_dict()) == rules


def test_token_seq_rejects_split_groups():
    with pytest.raises(TokenizeError):
        TokenSeq((Token("a", 1), Token("b"), Token("c", 1)))
    with pytest.raises(TokenizeError):
        TokenSeq(())


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzS", min_size=1, max_size=12))
def test_singularize_is_idempotent(word):
    once = singularize(word)
    assert singularize(once) == once


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["spin", "Lattice", "of", "waves", "NMR", "gap", "the"]), min_size=1, max_size=6),
       st.lists(st.sampled_from([" ", "-", "  "]), min_size=5, max_size=5))
def test_decompose_is_stable_under_renormalization(words, seps):
    if all(w in ("of", "the") for w in words):
        words = words + ["gap"]
    raw = words[0] + "".join(s + w for s, w in zip(seps, words[1:]))
    seq = decompose(raw)
    again = decompose(seq.render())
    assert again.canonical == seq.canonical
    assert again.wordship == seq.wordship
