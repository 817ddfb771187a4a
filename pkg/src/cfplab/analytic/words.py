"""Words in generators and their adjoints.

A word is written as whitespace-separated tokens, each a symbol optionally
followed by a single ``*``::

    >>> w = parse_word("y y* y y*")
    >>> str(w.adjoint())
    'y y* y y*'
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, NamedTuple

from ..errors import ParseError, WordError

__all__ = ["Letter", "Word", "parse_word", "format_word", "all_words", "balanced_words"]

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(\*?)")


class Letter(NamedTuple):
    symbol: str
    star: bool = False

    def __str__(self):
        return self.symbol + ("*" if self.star else "")

    def adjoint(self) -> "Letter":
        return Letter(self.symbol, not self.star)


class Word(tuple):
    """Immutable sequence of :class:`Letter`."""

    def __new__(cls, letters: Iterable = ()):
        return super().__new__(cls, (Letter(*x) for x in letters))

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({str(self)!r})"

    @property
    def symbols(self) -> frozenset:
        return frozenset(x.symbol for x in self)

    def adjoint(self) -> "Word":
        """Reverse the word and flip every star."""
        return Word(x.adjoint() for x in reversed(self))

    def rotate(self, k: int) -> "Word":
        if not self:
            return self
        k %= len(self)
        return Word(self[k:] + self[:k])

    def star_balance(self) -> int:
        """Number of unstarred minus number of starred letters."""
        return sum(-1 if x.star else 1 for x in self)


def format_word(word: Iterable[Letter]) -> str:
    return " ".join(str(Letter(*x)) for x in word)


def parse_word(text: str, alphabet: Iterable[str] | None = None) -> Word:
    """Parse ``text`` into a :class:`Word`.

    Raises
    ------
    ParseError
        If a token is not ``symbol`` or ``symbol*``.
    WordError
        If ``alphabet`` is given and a symbol is not in it.
    """
    allowed = None if alphabet is None else frozenset(alphabet)
    letters = []
    for pos, token in enumerate(text.split(), start=1):
        m = _TOKEN.fullmatch(token)
        if m is None:
            raise ParseError("malformed word token", pos, token)
        symbol = m.group(1)
        if allowed is not None and symbol not in allowed:
            raise WordError(f"undeclared symbol {symbol!r} at token {pos}")
        letters.append(Letter(symbol, bool(m.group(2))))
    return Word(letters)


def all_words(symbol: str, max_length: int, min_length: int = 1) -> Iterator[Word]:
    """Every word over ``{symbol, symbol*}`` with length in ``[min_length, max_length]``."""
    for length in range(min_length, max_length + 1):
        for stars in itertools.product((False, True), repeat=length):
            yield Word(Letter(symbol, s) for s in stars)


def balanced_words(symbol: str, max_length: int) -> list[Word]:
    """Words with equally many starred and unstarred letters."""
    return [w for w in all_words(symbol, max_length) if w.star_balance() == 0]
