"""Experiment runners.  Each returns a list of :class:`ReportRow`.

Every statistical row is checked against an analytic limit value or an
exact finite-n formula.  The only Monte Carlo versus Monte Carlo rows are
the model-difference rows (quantity names ending in ``difference``), whose
oracle is 0 and whose stderr is the joint stderr of both estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..analytic.freeness import (
    FreeElement,
    FreeEvaluator,
    circfp_star_moment,
    semicircle_moment,
    two_point_moment,
)
from ..analytic.laws import (
    annulus_inside_fraction_finite,
    annulus_radial_moment_finite,
    annulus_radial_moment_limit,
    trace_formula,
)
from ..analytic.words import Word, all_words, parse_word
from ..ensembles import as_generator, check_cn_integer, sample_grm, sample_hurm, sample_sgrm
from ..errors import ParameterError, WordError
from ..spectral import AscendingModulus, BlockModelSpec, RandomSymmetrized, cut_schur, schur
from .models import Ensemble, balanced_signs
from .report import abs_row, rel_row, stat_row
from .stats import MomentEstimate, derive_master, run_trials, summarize, word_traces

__all__ = [
    "Tolerance",
    "DEFAULT_WORDS",
    "FREENESS_WORDS",
    "estimate_star_moment",
    "estimate_star_moments",
    "run_moment_check",
    "run_fpinv_sweep",
    "run_dyson_check",
    "run_decoupling_check",
    "run_freeness_check",
    "run_blockmodel_check",
    "run_annulus_check",
]


@dataclass(frozen=True)
class Tolerance:
    """Pass rules: ``multiplier`` stderr for statistical rows, ``absolute``
    for projector-rank rows, ``relative`` for rows checked to a percentage."""

    multiplier: float = 3.0
    absolute: float = 0.02
    relative: float = 0.05


DEFAULT_WORDS = tuple(
    [str(w) for w in all_words("y", 4) if w.star_balance() == 0] + ["y* y y* y y* y"]
)
FREENESS_WORDS = ("u d u* d", "y d y d", "y y d")


def _words(words) -> list[Word]:
    return [parse_word(w) if isinstance(w, str) else Word(w) for w in words]


def _single_symbol(words) -> str:
    symbols = set().union(*(w.symbols for w in words)) if words else set()
    if len(symbols) != 1:
        raise WordError(f"words must use exactly one matrix symbol, got {sorted(symbols)}")
    return symbols.pop()


def estimate_star_moments(ensemble: Ensemble, words, n: int, trials: int, seed: int,
                          threads: int = 1) -> list[MomentEstimate]:
    """Monte Carlo ``E tr_n`` of each word in one matrix symbol and its adjoint.

    Trial ``i`` samples from ``Seed(seed, i)``; all words are evaluated on
    the same sample.
    """
    words = _words(words)
    symbol = _single_symbol(words)
    ensemble.validate(n)

    def one(s):
        return word_traces(words, {symbol: ensemble.sample(n, s)})

    per_trial = run_trials(one, seed, trials, threads)
    size = ensemble.size(n)
    out = []
    for i, w in enumerate(words):
        mean, se = summarize([t[i] for t in per_trial])
        out.append(MomentEstimate(str(w), size, mean, se, trials))
    return out


def estimate_star_moment(ensemble: Ensemble, word, n: int, trials: int, seed: int,
                         threads: int = 1) -> MomentEstimate:
    return estimate_star_moments(ensemble, [word], n, trials, seed, threads)[0]


def _joint(a: MomentEstimate, b: MomentEstimate):
    return a.mean - b.mean, math.hypot(a.stderr, b.stderr)


def run_moment_check(c, ns, words, trials, seed, tol=Tolerance(), threads=1):
    """Induced Ginibre *-moments against the circular free Poisson oracle."""
    words = _words(words)
    rows = []
    for n in ns:
        check_cn_integer(n, c)
    for n in ns:
        master = derive_master(seed, f"moment/n={n}")
        ests = estimate_star_moments(Ensemble("induced-ginibre", c=c), words, n, trials, master, threads)
        for w, e in zip(words, ests):
            rows.append(stat_row("moment", "star_moment", e.mean, e.stderr, circfp_star_moment(c, w),
                                 seed, tol.multiplier, n=n, c=c, word=str(w)))
    return rows


def run_fpinv_sweep(c, ns, rs, trials, seed, tol=Tolerance(), threads=1):
    """Mean normalized rank of the invariant projector versus the trace formula.

    Each (n, r) gets two rows: the limit value with the absolute tolerance,
    and the exact finite-n expected fraction of eigenvalues inside the disk
    (a drift check) with the stderr rule floored at one eigenvalue, ``1/n``.
    """
    rs = [float(r) for r in rs]
    if any(r < 0 for r in rs):
        raise ParameterError("radii must be >= 0")
    for n in ns:
        check_cn_integer(n, c)
    rows = []
    for n in ns:
        master = derive_master(seed, f"fpinv/n={n}")

        def one(s, n=n):
            y = Ensemble("induced-ginibre", c=c).sample(n, s)
            d = schur(y, AscendingModulus())
            return [cut_schur(d, r).normalized_trace for r in rs]

        per_trial = run_trials(one, master, trials, threads)
        for i, r in enumerate(rs):
            mean, se = summarize([t[i] for t in per_trial])
            rows.append(abs_row("fpinv", "normalized_rank", mean, se, trace_formula(c, r), seed,
                                tol.absolute, n=n, c=c, r=r))
            rows.append(stat_row("fpinv", "normalized_rank_finite_n", mean, se,
                                 annulus_inside_fraction_finite(n, c, r), seed, tol.multiplier,
                                 floor=1.0 / n, n=n, c=c, r=r))
    return rows


def _dyson_trial(n):
    iu = np.triu_indices(n, 1)
    row_pairs = (iu[0][iu[1] < n - 1], iu[1][iu[1] < n - 1])
    col_mask = iu[0] + 1 < iu[1]
    col_pairs = (iu[0][col_mask], iu[1][col_mask])

    def one(s):
        rng = as_generator(s)
        y = sample_grm(n, n, 1.0 / n, rng)
        S = schur(y, RandomSymmetrized(rng)).S
        t = S[iu]
        a2 = np.abs(t) ** 2
        m2 = a2.mean()
        z2 = np.abs(np.diagonal(S)) ** 2
        right = S[row_pairs[0], row_pairs[1] + 1]
        below = S[col_pairs[0] + 1, col_pairs[1]]
        return {
            "E t": t.mean(),
            "E t^2": (t * t).mean(),
            "E |t|^2": m2,
            "E |t|^4": (a2 * a2).mean(),
            "E |t|^4 / (E |t|^2)^2": (a2 * a2).mean() / (m2 * m2),
            "E t_ij conj(t_i,j+1)": (S[row_pairs] * np.conj(right)).mean(),
            "E t_ij conj(t_i+1,j)": (S[col_pairs] * np.conj(below)).mean(),
            "E |z|^2": z2.mean(),
            "E |z|^4": (z2 * z2).mean(),
        }

    return one


def run_dyson_check(n, trials, seed, tol=Tolerance(), threads=1):
    """Statistics of the Schur form of GRM(n, 1/n) under symmetrized ordering.

    Strict-upper entries are tested against i.i.d. complex (0, 1/n)
    Gaussians, and the diagonal radial moments against the exact finite-n
    values for one Ginibre eigenvalue.
    """
    if n < 20:
        raise ParameterError(f"dyson check needs n >= 20, got {n}")
    master = derive_master(seed, f"dyson/n={n}")
    per_trial = run_trials(_dyson_trial(n), master, trials, threads)
    oracles = {
        "E t": 0.0,
        "E t^2": 0.0,
        "E |t|^2": 1.0 / n,
        "E |t|^4": 2.0 / n**2,
        "E |t|^4 / (E |t|^2)^2": 2.0,
        "E t_ij conj(t_i,j+1)": 0.0,
        "E t_ij conj(t_i+1,j)": 0.0,
        "E |z|^2": annulus_radial_moment_finite(n, 1.0, 1),
        "E |z|^4": annulus_radial_moment_finite(n, 1.0, 2),
    }
    rows = []
    for key, oracle in oracles.items():
        mean, se = summarize([t[key] for t in per_trial])
        if key == "E |t|^2":
            rows.append(rel_row("dyson", key, mean, se, oracle, seed, tol.relative, n=n, c=1.0))
        else:
            rows.append(stat_row("dyson", key, mean, se, oracle, seed, tol.multiplier, n=n, c=1.0))
    return rows


def run_decoupling_check(c, ns, words, trials, seed, tol=Tolerance(), threads=1):
    """Schur-form (Coulomb gas diagonal) versus i.i.d. annulus-diagonal triangular models."""
    words = _words(words)
    for n in ns:
        check_cn_integer(n, c)
    rows = []
    for n in ns:
        z1 = estimate_star_moments(Ensemble("schur-triangular", c=c), words, n, trials,
                                   derive_master(seed, f"decouple/z1/n={n}"), threads)
        z2 = estimate_star_moments(Ensemble("annulus-triangular", c=c), words, n, trials,
                                   derive_master(seed, f"decouple/z2/n={n}"), threads)
        for w, e1, e2 in zip(words, z1, z2):
            oracle = circfp_star_moment(c, w)
            where = dict(n=n, c=c, word=str(w))
            rows.append(stat_row("decouple", "schur_diagonal_model", e1.mean, e1.stderr, oracle,
                                 seed, tol.multiplier, **where))
            rows.append(stat_row("decouple", "iid_annulus_model", e2.mean, e2.stderr, oracle,
                                 seed, tol.multiplier, **where))
            diff, se = _joint(e1, e2)
            rows.append(stat_row("decouple", "model_difference", diff, se, 0.0, seed,
                                 tol.multiplier, **where))
    return rows


def run_annulus_check(c, ns, bs=(1, 2), trials=100, seed=0, tol=Tolerance(), threads=1):
    """Radial eigenvalue moments ``E|z|^{2b}`` of induced Ginibre versus the exact finite-n formula.

    A second row per (n, b) compares against the uniform-annulus limit and
    uses the relative tolerance, since the finite-n bias there is ``O(1/n)``.
    """
    bs = [int(b) for b in bs]
    for n in ns:
        check_cn_integer(n, c)
    rows = []
    for n in ns:
        master = derive_master(seed, f"annulus/n={n}")

        def one(s, n=n):
            z2 = np.abs(np.linalg.eigvals(Ensemble("induced-ginibre", c=c).sample(n, s))) ** 2
            return [float(np.mean(z2**b)) for b in bs]

        per_trial = run_trials(one, master, trials, threads)
        for i, b in enumerate(bs):
            mean, se = summarize([t[i] for t in per_trial])
            where = dict(n=n, c=c, word=f"|z|^{2 * b}")
            rows.append(stat_row("annulus", "radial_moment_finite_n", mean, se,
                                 annulus_radial_moment_finite(n, c, b), seed, tol.multiplier, **where))
            rows.append(rel_row("annulus", "radial_moment_limit", mean, se,
                                annulus_radial_moment_limit(c, b), seed, tol.relative, **where))
    return rows


def freeness_family() -> list[FreeElement]:
    """Limit objects of (SGRM(n, 1/n), Haar unitary, balanced sign diagonal)."""
    return [
        FreeElement("y", "self-adjoint", moments=semicircle_moment),
        FreeElement("u", "haar-unitary"),
        FreeElement("d", "self-adjoint", moments=two_point_moment),
    ]


def run_freeness_check(n, trials, words=FREENESS_WORDS, seed=0, tol=Tolerance(), threads=1,
                       d_law="balanced"):
    """Mixed moments of independent SGRM, Haar and diagonal sign matrices.

    ``d_law="balanced"`` uses a random arrangement of ``n/2`` signs of each
    kind, whose empirical law is exactly the symmetric two-point law;
    ``"iid"`` draws the signs independently, which biases moments such as
    ``tr(U D U* D)`` by ``1/n``.
    """
    if n < 50:
        raise ParameterError(f"freeness check needs n >= 50, got {n}")
    if d_law not in ("balanced", "iid"):
        raise ParameterError(f"unknown d_law {d_law!r}")
    words = _words(words)
    evaluator = FreeEvaluator(freeness_family())
    master = derive_master(seed, f"freeness/n={n}")

    def one(s):
        rng = as_generator(s)
        y = sample_sgrm(n, 1.0 / n, rng)
        u = sample_hurm(n, rng)
        if d_law == "balanced":
            signs = balanced_signs(n, rng)
        else:
            signs = rng.choice([-1.0, 1.0], size=n)
        return word_traces(words, {"y": y, "u": u, "d": np.diag(signs).astype(np.complex128)})

    per_trial = run_trials(one, master, trials, threads)
    rows = []
    for i, w in enumerate(words):
        mean, se = summarize([t[i] for t in per_trial])
        rows.append(stat_row("freeness", "mixed_moment", mean, se, evaluator(w), seed,
                             tol.multiplier, n=n, word=str(w)))
    return rows


def _rel_or_stat(quantity, est, oracle, seed, tol, where):
    if abs(oracle) > 1e-12:
        return rel_row("blockmodel", quantity, est.mean, est.stderr, oracle, seed, tol.relative, **where)
    return stat_row("blockmodel", quantity, est.mean, est.stderr, oracle, seed, tol.multiplier, **where)


def run_blockmodel_check(N, c, n, words, trials, seed, tol=Tolerance(), threads=1):
    """Block upper-triangular model of size ``N n`` versus direct induced Ginibre and oracle."""
    words = _words(words)
    BlockModelSpec(N, n, c)
    check_cn_integer(N * n, c)
    block = estimate_star_moments(Ensemble("block", c=c, N=N), words, n, trials,
                                  derive_master(seed, f"block/N={N}/n={n}"), threads)
    direct = estimate_star_moments(Ensemble("induced-ginibre", c=c), words, N * n, trials,
                                   derive_master(seed, f"block-direct/n={N * n}"), threads)
    rows = []
    for w, eb, ed in zip(words, block, direct):
        oracle = circfp_star_moment(c, w)
        where = dict(n=N * n, c=c, word=str(w))
        rows.append(_rel_or_stat("block_model", eb, oracle, seed, tol, where))
        rows.append(_rel_or_stat("direct_ensemble", ed, oracle, seed, tol, where))
        diff, se = _joint(eb, ed)
        rows.append(stat_row("blockmodel", "block_direct_difference", diff, se, 0.0, seed,
                             tol.multiplier, **where))
    return rows
