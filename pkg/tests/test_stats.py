import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cfplab.ensembles import Seed, sample_grm
from cfplab.errors import ParameterError, WordError
from cfplab.lab import Ensemble, estimate_star_moment, estimate_star_moments, run_trials, summarize, word_trace, word_traces
from cfplab.lab.stats import derive_master, trial_seeds

finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(st.lists(st.builds(complex, finite, finite), min_size=1, max_size=60), st.randoms())
def test_summary_order_independent(values, rnd):
    shuffled = list(values)
    rnd.shuffle(shuffled)
    assert summarize(values) == summarize(shuffled)


def test_summary_values():
    mean, se = summarize([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
    assert summarize([3 + 1j]) == (3 + 1j, 0.0)
    mean, se = summarize([1j, -1j])
    assert mean == 0 and se == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        summarize([])


def test_stderr_shrinks_with_trials():
    ens = Ensemble("grm")
    small = estimate_star_moment(ens, "y* y y* y", 40, 50, 1)
    large = estimate_star_moment(ens, "y* y y* y", 40, 200, 2)
    ratio = small.stderr / large.stderr
    assert 1.5 < ratio < 2.7  # about 2 = sqrt(200/50)


def test_trial_seeds():
    assert trial_seeds(7, 3) == [Seed(7, 0), Seed(7, 1), Seed(7, 2)]
    assert derive_master(1, "a") != derive_master(1, "b")
    assert derive_master(1, "a") == derive_master(1, "a")
    assert 0 <= derive_master(2**64 - 1, "x") < 2**64


def test_run_trials_threads_same_result():
    fn = lambda s: float(np.linalg.norm(np.linalg.eigvals(sample_grm(30, 30, 1 / 30, s))))
    a = run_trials(fn, 5, 16, threads=1)
    b = run_trials(fn, 5, 16, threads=4)
    assert a == b
    with pytest.raises(ParameterError):
        run_trials(fn, 5, 0)
    with pytest.raises(ParameterError):
        run_trials(fn, 5, 1, threads=0)


def test_word_traces():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    b = rng.standard_normal((5, 5))
    direct = np.trace(a @ b @ a.conj().T @ a) / 5
    assert word_trace("a b a* a", {"a": a, "b": b}) == pytest.approx(direct)
    assert word_traces(["a", "a a*", ""], {"a": a}) == pytest.approx(
        [np.trace(a) / 5, np.trace(a @ a.conj().T) / 5, 1.0])
    with pytest.raises(WordError):
        word_trace("a z", {"a": a})


def test_estimate_examples():
    e = estimate_star_moment(Ensemble("identity"), "y y", 10, 4, 0)
    assert e.mean == 1 and e.stderr == 0 and e.trials == 4
    e = estimate_star_moment(Ensemble("grm"), "y* y", 200, 20, 0)
    assert abs(e.mean - 1) <= 3 * e.stderr
    e = estimate_star_moment(Ensemble("induced-ginibre", c=2), "y* y", 150, 20, 0)
    assert abs(e.mean - 2) <= 3 * e.stderr


def test_estimate_errors():
    with pytest.raises(WordError):
        estimate_star_moments(Ensemble("grm"), ["y x"], 10, 2, 0)
    with pytest.raises(ParameterError, match="c·n"):
        estimate_star_moment(Ensemble("induced-ginibre", c=1.3), "y* y", 101, 2, 0)
    with pytest.raises(ParameterError):
        Ensemble("wigner")


def test_models():
    for name in ("identity", "grm", "sgrm", "utgrm", "hurm", "induced-ginibre", "schur-triangular",
                 "annulus-triangular"):
        m = Ensemble(name).sample(12, Seed(1))
        assert m.shape == (12, 12) and np.all(np.isfinite(m))
    assert Ensemble("block", N=3).sample(4, Seed(1)).shape == (12, 12)
    z = Ensemble("annulus-triangular", c=2).sample(50, Seed(2))
    assert np.all(np.tril(z, -1) == 0)
    assert np.all((np.abs(np.diagonal(z)) >= 1) & (np.abs(np.diagonal(z)) <= math.sqrt(2)))
