import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chablab.exactnum import Ball
from chablab.plgroup import (
    GeneratorTable,
    UnknownGenerator,
    WordParseError,
    evaluate_word,
    format_word,
    index_of_word,
    lambda_table,
    parse_word,
    parse_word_file,
    translation_on,
)
from chablab.plgroup.words import all_words, commutator_word, free_reduce, inverse_word

letters = st.tuples(st.sampled_from("sta"), st.integers(-3, 3).filter(bool))
words = st.lists(letters, max_size=8).map(tuple)


def test_parse_and_format():
    assert parse_word("a^2 s t^-1") == (("a", 2), ("s", 1), ("t", -1))
    assert parse_word("") == ()
    assert parse_word("a^0 s") == (("s", 1),)
    assert format_word((("a", 2), ("s", 1))) == "a^2 s"
    with pytest.raises(WordParseError, match="malformed token"):
        parse_word("a^x")


def test_word_file_lines():
    text = "a^2\n# a comment\n\ns t  # trailing\n"
    assert parse_word_file(text) == [(("a", 2),), (), (("s", 1), ("t", 1))]
    with pytest.raises(WordParseError) as err:
        parse_word_file("a\n1bad\n")
    assert err.value.line == 2
    assert str(err.value).startswith("line 2:")


def test_evaluate_examples():
    tab = lambda_table(2)
    assert evaluate_word(parse_word("a^2"), tab) == translation_on(Ball.zp(2), 2)
    assert evaluate_word((), tab).is_identity()
    with pytest.raises(UnknownGenerator):
        evaluate_word(parse_word("b"), tab)


def test_index_examples():
    assert index_of_word(parse_word("a^3")) == 3
    assert index_of_word(commutator_word(parse_word("s t"), parse_word("a"))) == 0
    assert index_of_word(parse_word("s a^-2 t a")) == -1


@settings(max_examples=60, deadline=None)
@given(words)
def test_inverse_word_evaluates_to_inverse(w):
    tab = lambda_table(2)
    f = evaluate_word(w, tab)
    assert (f * evaluate_word(inverse_word(w), tab)).is_identity()
    assert index_of_word(inverse_word(w)) == -index_of_word(w)


@settings(max_examples=60, deadline=None)
@given(words)
def test_free_reduction_preserves_value_and_index(w):
    tab = lambda_table(3)
    r = free_reduce(w)
    assert evaluate_word(r, tab) == evaluate_word(w, tab)
    assert index_of_word(r) == index_of_word(w)
    assert all(g != h for (g, _), (h, _) in zip(r, r[1:]))


def test_commutator_words_have_index_zero():
    tab = lambda_table(2)
    for x, y in itertools.product(["s", "t", "a"], repeat=2):
        w = commutator_word(((x, 1),), ((y, 1),))
        assert index_of_word(w) == 0
        evaluate_word(w, tab)


def test_equal_maps_have_equal_index_small_search():
    # a bounded version of the exhaustive acceptance search
    tab = lambda_table(2)
    seen = {}
    for n in range(4):
        for w in all_words(["s", "t", "a"], n):
            f = evaluate_word(w, tab)
            idx = index_of_word(w)
            assert seen.setdefault(f, idx) == idx


def test_generator_table_round_trip(tmp_path):
    tab = lambda_table(3)
    path = tmp_path / "gens.json"
    import json

    path.write_text(json.dumps(tab.to_json()))
    back = GeneratorTable.load(path)
    assert dict(back) == dict(tab)
    assert back.power("t", -3) == tab.power("t", -1) ** 3


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        GeneratorTable({"x": lambda_table(2)["a"], "y": lambda_table(3)["a"]})
