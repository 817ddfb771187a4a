"""Monte Carlo plumbing: per-trial seeding, worker fan-out, normalized traces."""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from ..analytic.words import Word, parse_word
from ..ensembles import Seed
from ..errors import ParameterError, WordError

__all__ = [
    "MomentEstimate",
    "summarize",
    "derive_master",
    "trial_seeds",
    "run_trials",
    "word_trace",
    "word_traces",
]


@dataclass(frozen=True)
class MomentEstimate:
    """Mean of a normalized trace over independent trials.

    ``stderr`` is the sample standard deviation (of the complex values,
    i.e. ``sqrt(var re + var im)``) divided by ``sqrt(trials)``.
    """

    word: str
    n: int
    mean: complex
    stderr: float
    trials: int


def summarize(values: Sequence[complex]) -> tuple[complex, float]:
    """Return ``(mean, stderr)`` of ``values``.

    Sums use :func:`math.fsum`, which is correctly rounded and therefore
    independent of the order in which trial results arrive.  A single
    value has stderr 0.
    """
    vals = [complex(v) for v in values]
    t = len(vals)
    if t == 0:
        raise ParameterError("cannot summarize zero trials")
    mean = complex(math.fsum(v.real for v in vals) / t, math.fsum(v.imag for v in vals) / t)
    if t == 1:
        return mean, 0.0
    var = math.fsum(abs(v - mean) ** 2 for v in vals) / (t - 1)
    return mean, math.sqrt(var / t)


def derive_master(master: int, label: str) -> int:
    """Independent 64-bit master seed for a named sub-experiment."""
    seq = np.random.SeedSequence(int(master), spawn_key=(zlib.crc32(label.encode()),))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def trial_seeds(master: int, trials: int) -> list[Seed]:
    return [Seed(int(master), i) for i in range(trials)]


def run_trials(fn: Callable[[Seed], object], master: int, trials: int, threads: int = 1) -> list:
    """Evaluate ``fn(Seed(master, i))`` for ``i < trials``, in trial order.

    With ``threads > 1`` trials run on a thread pool; BLAS is pinned to one
    thread per worker either way so results do not depend on scheduling.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if threads < 1:
        raise ParameterError(f"threads must be >= 1, got {threads}")
    seeds = trial_seeds(master, trials)
    with threadpool_limits(limits=1):
        if threads == 1:
            return [fn(s) for s in seeds]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, seeds))


def _as_word(word) -> Word:
    return parse_word(word) if isinstance(word, str) else Word(word)


def word_trace(word, mats: Mapping[str, np.ndarray]) -> complex:
    """``tr_n`` of the product of matrices (or adjoints) spelled by ``word``."""
    return word_traces([word], mats)[0]


def word_traces(words, mats: Mapping[str, np.ndarray]) -> list[complex]:
    """Normalized traces of several words, sharing prefix products.

    The last factor is never multiplied out: ``tr(A B) = sum(A * B^T)``.
    """
    adj = {}

    def factor(letter):
        m = mats.get(letter.symbol)
        if m is None:
            raise WordError(f"no matrix bound to symbol {letter.symbol!r}")
        if not letter.star:
            return m
        if letter.symbol not in adj:
            adj[letter.symbol] = m.conj().T
        return adj[letter.symbol]

    prefixes: dict = {}

    def prefix(letters):
        if len(letters) == 1:
            return factor(letters[0])
        hit = prefixes.get(letters)
        if hit is None:
            hit = prefix(letters[:-1]) @ factor(letters[-1])
            prefixes[letters] = hit
        return hit

    out = []
    for w in words:
        w = _as_word(w)
        if not w:
            out.append(1.0 + 0j)
            continue
        n = factor(w[0]).shape[0]
        if len(w) == 1:
            out.append(complex(np.trace(factor(w[0])) / n))
            continue
        left = prefix(tuple(w[:-1]))
        right = factor(w[-1])
        out.append(complex(np.sum(left * right.T) / n))
    return out
