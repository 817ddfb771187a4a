import pytest
from hypothesis import given, strategies as st

from cfplab.analytic import Letter, Word, all_words, balanced_words, format_word, parse_word
from cfplab.errors import ParseError, WordError

symbols = st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,3}", fullmatch=True)
words = st.lists(st.builds(Letter, symbols, st.booleans()), min_size=1, max_size=12).map(Word)


def test_parse_examples():
    w = parse_word("y y* y y*")
    assert len(w) == 4
    assert [x.star for x in w] == [False, True, False, True]
    assert parse_word("u h u* h").symbols == {"u", "h"}
    assert parse_word("  y\t y* ") == parse_word("y y*")


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        parse_word("y**")
    assert info.value.position == 1
    with pytest.raises(ParseError) as info:
        parse_word("y y* 3x")
    assert info.value.position == 3
    assert isinstance(info.value, WordError)
    assert parse_word("") == Word()
    with pytest.raises(WordError):
        parse_word("y z", alphabet={"y"})


@given(words)
def test_round_trip(w):
    assert parse_word(format_word(w)) == w


@given(words)
def test_adjoint_involution(w):
    assert w.adjoint().adjoint() == w
    assert w.adjoint().star_balance() == -w.star_balance()


@given(words, st.integers(-30, 30))
def test_rotation(w, k):
    assert len(w.rotate(k)) == len(w)
    assert w.rotate(k).rotate(-k) == w


def test_enumeration():
    ws = list(all_words("y", 3))
    assert len(ws) == 2 + 4 + 8
    assert len(set(ws)) == len(ws)
    bal = balanced_words("y", 4)
    assert len(bal) == 2 + 6
    assert all(w.star_balance() == 0 for w in bal)
