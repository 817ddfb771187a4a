"""Exact mixed moments of free families.

:func:`free_word_moment` evaluates the state on a word in elements drawn
from mutually free classes.  Each class is generated by a single element
whose own moments are known (a Haar unitary, a self-adjoint element with a
moment sequence, or scalars), so a run of adjacent letters from one class
collapses to a power of its generator.  An alternating word
``b_1 ... b_m`` is then reduced by expanding each ``b_i`` as
``(b_i - phi(b_i)) + phi(b_i)``: the fully centered term vanishes by
freeness and every other term is a strictly shorter word,

    phi(b_1 ... b_m) = sum_{R nonempty} (-1)^{|R|+1} prod_{i in R} phi(b_i) phi(w \\ R).

Subsets ``R`` containing a block with ``phi(b_i) = 0`` drop out, which
keeps Haar-unitary words cheap.  Results are memoized per evaluator.

Every supported class carries a tracial state, so the free product state
is a trace.  With ``tracial=True`` (the default) words are reduced
cyclically and memoized under their least rotation, which shrinks the
memo table by roughly the word length; ``tracial=False`` runs the plain
linear recursion and is kept as an independent check of that shortcut.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

from ..errors import ParameterError, UnsupportedAlgebraError, WordError
from .laws import nu_c_power_moment
from .words import Word, parse_word

__all__ = [
    "HAAR_UNITARY",
    "SELF_ADJOINT",
    "SCALAR",
    "FreeElement",
    "FreeEvaluator",
    "free_word_moment",
    "circfp_star_moment",
    "haar_unitary_moment",
    "semicircle_moment",
    "two_point_moment",
]

HAAR_UNITARY = "haar-unitary"
SELF_ADJOINT = "self-adjoint"
SCALAR = "scalar"
_KIND_ALIASES = {
    "haar-unitary": HAAR_UNITARY,
    "unitary": HAAR_UNITARY,
    "self-adjoint": SELF_ADJOINT,
    "positive": SELF_ADJOINT,
    "positive-with-moments": SELF_ADJOINT,
    "scalar": SCALAR,
    "deterministic-scalar": SCALAR,
}


@dataclass(frozen=True)
class FreeElement:
    """One generator of a free family.

    Parameters
    ----------
    symbol : str
        Name used in words.
    kind : str
        ``"haar-unitary"``, ``"self-adjoint"`` (alias ``"positive"``) or
        ``"scalar"``.
    moments : sequence or callable, optional
        ``moments[k]`` (or ``moments(k)``) is ``phi(x^k)``; required for
        self-adjoint elements.  ``moments[0]`` must be 1.
    value : complex
        The scalar, for ``kind="scalar"``.
    cls : str, optional
        Freeness class label; defaults to the symbol.  Elements in different
        classes are free.
    """

    symbol: str
    kind: str
    moments: Any = None
    value: complex = 1.0
    cls: str | None = None

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise ParameterError(f"unknown element kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.cls is None:
            object.__setattr__(self, "cls", self.symbol)
        if kind == SELF_ADJOINT:
            if self.moments is None:
                raise ParameterError(f"self-adjoint element {self.symbol!r} needs a moment sequence")
            if abs(self._raw_moment(0) - 1.0) > 1e-12:
                raise ParameterError(f"moment of order 0 of {self.symbol!r} must be 1")

    def _raw_moment(self, k):
        m = self.moments
        if callable(m):
            return m(k)
        if k >= len(m):
            raise ParameterError(f"no moment of order {k} given for {self.symbol!r}")
        return m[k]

    def power_moment(self, k: int) -> complex:
        if self.kind == HAAR_UNITARY:
            return haar_unitary_moment(k)
        if self.kind == SELF_ADJOINT:
            return self._raw_moment(k)
        return self.value**k


def haar_unitary_moment(m: int) -> float:
    """``phi(u^m)``: 1 for ``m = 0`` and 0 otherwise (negative ``m`` means powers of ``u*``)."""
    return 1.0 if m == 0 else 0.0


def semicircle_moment(k: int, variance: float = 1.0) -> float:
    """Moments of the centered semicircle law: ``variance^{k/2} C_{k/2}`` for even ``k``."""
    if k % 2:
        return 0.0
    half = k // 2
    return variance**half * math.comb(k, half) / (half + 1)


def two_point_moment(k: int) -> float:
    """Moments of the symmetric law on ``{-1, +1}``."""
    return 0.0 if k % 2 else 1.0


@dataclass
class FreeEvaluator:
    """Memoizing evaluator for one fixed free family."""

    elements: Sequence[FreeElement]
    tracial: bool = True
    _by_symbol: dict = field(init=False, repr=False)
    _memo: dict = field(init=False, repr=False, default_factory=dict)
    _lock: Any = field(init=False, repr=False, default_factory=threading.Lock)

    def __post_init__(self):
        self._by_symbol = {}
        for el in self.elements:
            if el.symbol in self._by_symbol:
                raise ParameterError(f"symbol {el.symbol!r} declared twice")
            self._by_symbol[el.symbol] = el

    def __call__(self, word) -> complex:
        if isinstance(word, str):
            word = parse_word(word)
        coef, blocks = self._blocks(word)
        if coef == 0:
            return 0j
        return complex(coef * self._eval(blocks))

    def _blocks(self, word: Word):
        coef = 1.0 + 0j
        raw = []
        for pos, letter in enumerate(word, start=1):
            el = self._by_symbol.get(letter.symbol)
            if el is None:
                raise WordError(f"undeclared symbol {letter.symbol!r} at letter {pos}")
            if el.kind == SCALAR:
                coef *= complex(el.value).conjugate() if letter.star else el.value
            elif el.kind == HAAR_UNITARY:
                raw.append((el.symbol, -1 if letter.star else 1))
            else:
                raw.append((el.symbol, 1))
        return coef, self._reduce(raw)

    def _reduce(self, blocks):
        """Merge adjacent same-class blocks and drop identities."""
        out = []
        for sym, p in blocks:
            if out and self._by_symbol[out[-1][0]].cls == self._by_symbol[sym].cls:
                prev, q = out.pop()
                if prev != sym:
                    raise UnsupportedAlgebraError(
                        f"product of {prev!r} and {sym!r} in class "
                        f"{self._by_symbol[sym].cls!r} does not reduce to a power"
                    )
                p += q
            if p != 0:
                out.append((sym, p))
        out = tuple(out)
        return self._canonical(out) if self.tracial else out

    def _canonical(self, blocks):
        cls = self._by_symbol
        blocks = list(blocks)
        while len(blocks) > 1 and cls[blocks[0][0]].cls == cls[blocks[-1][0]].cls:
            sym, p = blocks.pop()
            head, q = blocks[0]
            if head != sym:
                raise UnsupportedAlgebraError(
                    f"product of {sym!r} and {head!r} in class {cls[sym].cls!r} "
                    "does not reduce to a power"
                )
            if p + q == 0:
                blocks.pop(0)
            else:
                blocks[0] = (sym, p + q)
        if len(blocks) < 2:
            return tuple(blocks)
        return min(tuple(blocks[k:] + blocks[:k]) for k in range(len(blocks)))

    def _eval(self, blocks) -> complex:
        if not blocks:
            return 1.0
        if len(blocks) == 1:
            sym, p = blocks[0]
            return self._by_symbol[sym].power_moment(p)
        hit = self._memo.get(blocks)
        if hit is not None:
            return hit
        phis = [self._by_symbol[s].power_moment(p) for s, p in blocks]
        live = [i for i, v in enumerate(phis) if v != 0]
        total = 0j
        for size in range(1, len(live) + 1):
            sign = 1.0 if size % 2 else -1.0
            for removed in itertools.combinations(live, size):
                drop = set(removed)
                rest = self._reduce(b for i, b in enumerate(blocks) if i not in drop)
                total += sign * math.prod(phis[i] for i in removed) * self._eval(rest)
        with self._lock:
            self._memo[blocks] = total
        return total


def free_word_moment(elements: Sequence[FreeElement], word, tracial: bool = True) -> complex:
    """Value of the state on ``word`` for a free family of ``elements``.

    Examples
    --------
    >>> els = [FreeElement("u", "haar-unitary"), FreeElement("h", "positive", moments=[1, 2, 5])]
    >>> free_word_moment(els, "u h u* h")
    (4+0j)
    """
    return FreeEvaluator(list(elements), tracial=tracial)(word)


@lru_cache(maxsize=32)
def _circfp_evaluator(c: float) -> FreeEvaluator:
    def h_moment(k):
        return nu_c_power_moment(c, k / 2.0)

    return FreeEvaluator(
        [FreeElement("u", HAAR_UNITARY), FreeElement("h", SELF_ADJOINT, moments=h_moment)]
    )


def circfp_star_moment(c: float, word, symbol: str = "y") -> complex:
    """Limit *-moment of a circular free Poisson element of parameter ``c``.

    The element is modelled as ``y = u h`` with ``u`` Haar unitary free from
    ``h >= 0`` and ``h^2`` free Poisson of parameter ``c``; the moments of
    ``h`` come from quadrature of the free Poisson law in ``t^{k/2}``.
    """
    if not c >= 1:
        raise ParameterError(f"free Poisson parameter c must be >= 1, got {c!r}")
    if isinstance(word, str):
        word = parse_word(word)
    expanded = []
    for pos, letter in enumerate(word, start=1):
        if letter.symbol != symbol:
            raise WordError(f"undeclared symbol {letter.symbol!r} at letter {pos}")
        expanded += [("h", False), ("u", True)] if letter.star else [("u", False), ("h", False)]
    return _circfp_evaluator(float(c))(Word(expanded))
