import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfplab.ensembles import Seed, read_matrix, sample_grm, sample_hurm, sample_induced_ginibre, sample_sgrm, write_matrix
from cfplab.errors import ParameterError
from cfplab.spectral import (
    AsComputed,
    AscendingModulus,
    BlockModelSpec,
    RandomSymmetrized,
    build_block_model,
    compression_spectrum,
    cut_schur,
    invariant_projector,
    power_growth_rate,
    reorder,
    sandwich_check,
    schur,
    swap_2x2,
    write_eigenvalues_csv,
)

from conftest import within_stderr

# Edge tolerances for compression spectra, calibrated as the largest
# excursion of eigenvalue moduli past the annulus edges over 300 samples,
# rounded up: 0.094 (c=1, n=300) and 0.127 (c=2, n=200).
DELTA_C1_N300 = 0.10
DELTA_C2_N200 = 0.14


def matched(a, b):
    """Max distance after greedy nearest matching of two eigenvalue lists."""
    b = list(b)
    worst = 0.0
    for z in a:
        j = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(j)))
    return worst


# -- swap -----------------------------------------------------------------


def test_swap_cases():
    assert np.array_equal(swap_2x2(1 + 1j, 5, 1 + 1j), np.eye(2))
    assert np.array_equal(swap_2x2(1, 0, 2), [[0, 1], [1, 0]])
    u = swap_2x2(0, 1, 1)
    assert np.allclose(u, np.array([[1, -1], [1, 1]]) / math.sqrt(2), atol=1e-15)
    t = np.array([[0, 1], [0, 1]], dtype=complex)
    assert np.allclose(u.conj().T @ t @ u, [[1, 1], [0, 0]], atol=1e-15)


@settings(max_examples=300)
@given(*[st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)] * 3)
def test_swap_identity(a, b, c):
    u = swap_2x2(a, b, c)
    t = np.array([[a, b], [0, c]])
    scale = max(1.0, abs(a), abs(b), abs(c))
    assert np.linalg.norm(u.conj().T @ u - np.eye(2)) < 1e-14
    assert np.allclose(u.conj().T @ t @ u, [[c, b], [0, a]], atol=1e-14 * scale * 4)


# -- Schur ----------------------------------------------------------------


def test_schur_identity():
    d = schur(np.eye(5))
    assert np.allclose(d.Q, np.eye(5)) and np.allclose(d.S, np.eye(5))
    assert np.all(d.eigenvalues == 1)


def test_schur_hermitian_diagonal():
    y = sample_sgrm(40, 1 / 40, Seed(1))
    d = schur(y, AscendingModulus())
    assert np.linalg.norm(d.S - np.diag(np.diagonal(d.S))) < 1e-10


@pytest.mark.parametrize("policy", [AsComputed(), AscendingModulus(), RandomSymmetrized(3)])
@pytest.mark.parametrize("n", [1, 2, 50, 200])
def test_schur_invariants(policy, n):
    y = sample_grm(n, n, 1 / n, Seed(n))
    d = schur(y, policy)
    assert d.residual < 1e-10
    assert d.unitarity_residual() < 1e-12
    assert np.all(np.tril(d.S, -1) == 0)
    assert np.array_equal(d.eigenvalues, np.diagonal(d.S))
    assert matched(d.eigenvalues, np.linalg.eigvals(y)) < 1e-8


def test_schur_ascending():
    d = schur(sample_grm(120, 120, 1 / 120, Seed(4)), AscendingModulus())
    assert np.all(np.diff(np.abs(d.eigenvalues)) >= 0)


def test_random_symmetrized_permutes():
    y = sample_grm(30, 30, 1 / 30, Seed(5))
    a = schur(y, RandomSymmetrized(1)).eigenvalues
    b = schur(y, RandomSymmetrized(2)).eigenvalues
    assert not np.array_equal(a, b)
    assert np.array_equal(np.sort_complex(a), np.sort_complex(b))
    assert np.array_equal(a, schur(y, RandomSymmetrized(1)).eigenvalues)


def test_random_symmetrized_first_position_uniform():
    # the eigenvalue placed first should be each eigenvalue with probability 1/n
    n = 6
    y = np.diag(np.arange(1, n + 1)) + np.triu(sample_grm(n, n, 1.0, Seed(6)), 1)
    firsts = [schur(y, RandomSymmetrized(Seed(7, i))).eigenvalues[0].real for i in range(1200)]
    counts = np.bincount(np.rint(firsts).astype(int), minlength=n + 1)[1:]
    assert counts.min() > 1200 / n * 0.7


def test_schur_errors():
    with pytest.raises(ParameterError):
        schur(np.ones((2, 3)))
    with pytest.raises(ParameterError):
        schur(np.array([[1, np.nan], [0, 1]]))
    with pytest.raises(ParameterError):
        reorder(schur(np.eye(2)), "sorted")


def test_export(tmp_path):
    y = sample_grm(6, 6, 1 / 6, Seed(8))
    cut = invariant_projector(y, 0.7)
    write_matrix(tmp_path / "p.bin", cut.projector)
    write_matrix(tmp_path / "s.csv", cut.decomposition.S)
    assert np.array_equal(read_matrix(tmp_path / "p.bin"), cut.projector)
    assert np.array_equal(read_matrix(tmp_path / "s.csv"), cut.decomposition.S)
    write_eigenvalues_csv(tmp_path / "e.csv", cut.decomposition.eigenvalues)
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert lines[0] == "re,im,modulus" and len(lines) == 7
    re, im, mod = map(float, lines[1].split(","))
    assert mod == pytest.approx(math.hypot(re, im))


# -- projectors -----------------------------------------------------------


def test_projector_examples():
    cut = invariant_projector(np.diag([0.1, 2.0]), 1.0)
    assert cut.rank == 1 and np.allclose(cut.projector, np.diag([1, 0]))
    cut = invariant_projector(np.array([[0.1, 5], [0, 2]]), 1.0)
    assert cut.rank == 1 and np.allclose(cut.projector, np.diag([1, 0]))
    # the eigenvector for 2 is not the second basis vector, so the complement cut is not diagonal
    cut = invariant_projector(np.array([[0.1, 5], [0, 2]]), 3.0)
    assert np.allclose(cut.projector, np.eye(2))


def test_projector_extremes():
    y = sample_grm(40, 40, 1 / 40, Seed(9))
    mods = np.abs(np.linalg.eigvals(y))
    assert np.allclose(invariant_projector(y, mods.max() * 1.01).projector, np.eye(40))
    assert np.allclose(invariant_projector(y, mods.min() * 0.99).projector, 0)
    assert invariant_projector(y, 0.6).normalized_trace == invariant_projector(y, 0.6).rank / 40


def test_projector_mean_trace():
    n = 400
    vals = [invariant_projector(sample_grm(n, n, 1 / n, Seed(10, i)), 0.6).normalized_trace
            for i in range(10)]
    assert abs(np.mean(vals) - 0.36) < 0.02


def test_tie_and_gap_warning():
    y = np.diag([0.5, 1.0, 2.0]).astype(complex)
    cut = invariant_projector(y, 1.0)
    assert cut.rank == 2
    assert cut.gap == 0.0
    assert any("ill-conditioned" in w for w in cut.warnings)
    cut = invariant_projector(y, 1.0 - 1e-14)
    assert cut.rank == 2  # within the tie tolerance
    assert invariant_projector(y, 1.3).warnings == ()


def test_cut_needs_ascending():
    d = schur(np.diag([2.0, 0.5]))
    with pytest.raises(ParameterError):
        cut_schur(d, 1.0)
    with pytest.raises(ParameterError):
        invariant_projector(np.eye(2), -1.0)


def test_reuse_decomposition():
    y = sample_grm(50, 50, 1 / 50, Seed(11))
    a = invariant_projector(y, 0.7).projector
    b = invariant_projector(y, 0.7, decomposition=schur(y, RandomSymmetrized(0))).projector
    assert np.linalg.norm(a - b) < 1e-8


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 200), st.integers(0, 2**32), st.floats(0.05, 1.3))
def test_projector_properties(n, master, r):
    y = sample_grm(n, n, 1 / n, Seed(master))
    cut = invariant_projector(y, r)
    p = cut.projector
    norm = np.linalg.norm(y)
    assert np.linalg.norm(p @ p - p) <= 1e-10 * max(1, math.sqrt(n))
    assert np.linalg.norm(p - p.conj().T) <= 1e-10
    assert np.linalg.norm(y @ p - p @ y @ p) <= 1e-8 * norm
    q = np.eye(n) - p
    assert np.linalg.norm(q @ y @ q - q @ y) <= 1e-8 * norm
    assert abs(np.trace(p).real - cut.rank) < 1e-8
    ranks = [invariant_projector(y, s, cut.decomposition).rank for s in (0.5 * r, r, 1.5 * r)]
    assert ranks == sorted(ranks)
    inner, outer = compression_spectrum(y, cut)
    assert len(inner) == cut.rank and len(inner) + len(outer) == n
    assert np.all(np.abs(inner) <= r + 1e-12 * norm)
    assert np.all(np.abs(outer) > r)
    assert matched(np.concatenate([inner, outer]), np.linalg.eigvals(y)) < 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 80), st.integers(0, 2**32), st.floats(0.2, 1.2), st.integers(0, 2**32))
def test_projector_unique_across_paths(n, master, r, perm_seed):
    y = sample_grm(n, n, 1 / n, Seed(master))
    base = invariant_projector(y, r)
    if base.gap <= 1e-3 * np.linalg.norm(y):
        return
    shuffled = reorder(schur(y), RandomSymmetrized(perm_seed), y)
    other = invariant_projector(y, r, decomposition=shuffled)
    assert other.rank == base.rank
    assert np.linalg.norm(other.projector - base.projector) < 1e-8


# -- compression spectra --------------------------------------------------


def test_compression_edges_c1():
    n, r, delta = 300, 0.6, DELTA_C1_N300
    for i in range(10):
        y = sample_induced_ginibre(n, 1.0, Seed(12, i))
        inner, outer = compression_spectrum(y, invariant_projector(y, r))
        assert np.all(np.abs(inner) <= r)
        assert np.all((np.abs(outer) > r) & (np.abs(outer) <= 1 + delta))


def test_compression_edges_c2():
    n, r, delta = 200, 1.2, DELTA_C2_N200
    for i in range(10):
        y = sample_induced_ginibre(n, 2.0, Seed(13, i))
        inner, outer = compression_spectrum(y, invariant_projector(y, r))
        assert np.all((np.abs(inner) >= 1 - delta) & (np.abs(inner) <= r))
        assert np.all((np.abs(outer) > r) & (np.abs(outer) <= math.sqrt(2) + delta))


def test_compression_matches_blocks():
    y = sample_grm(30, 30, 1 / 30, Seed(14))
    cut = invariant_projector(y, 0.8)
    qk = cut.decomposition.Q[:, : cut.rank]
    direct = np.linalg.eigvals(qk.conj().T @ y @ qk)
    assert matched(direct, compression_spectrum(y, cut)[0]) < 1e-8


# -- sandwich -------------------------------------------------------------


def test_sandwich_three_blocks():
    a = 0.3 * sample_hurm(40, Seed(15))
    b = sample_grm(40, 40, 1 / 40, Seed(16))
    c = 2 * sample_hurm(40, Seed(17))
    rep = sandwich_check(a, b, c, 1.0, seed=18)
    assert rep.holds
    assert 40 <= rep.rank <= 80
    assert rep.lower_residual < 1e-8 and rep.upper_residual < 1e-8


def test_sandwich_two_blocks():
    a = 0.3 * sample_hurm(20, Seed(19))
    c = 2 * sample_hurm(20, Seed(20))
    rep = sandwich_check(a, None, c, 1.0)
    assert rep.holds and rep.rank == 20
    e1 = np.diag([1.0] * 20 + [0.0] * 20)
    assert np.linalg.norm(rep.projector - e1) < 1e-8


def test_sandwich_precondition():
    a = 0.3 * sample_hurm(10, Seed(21))
    c = 2 * sample_hurm(10, Seed(22))
    with pytest.raises(ParameterError):
        sandwich_check(c, None, a, 1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 30), st.integers(0, 30), st.integers(1, 30), st.integers(0, 2**32))
def test_sandwich_property(na, nb, nc, master):
    a = 0.5 * sample_hurm(na, Seed(master, 0))
    b = sample_grm(nb, nb, 1 / nb, Seed(master, 1)) if nb else None
    c = 1.5 * sample_hurm(nc, Seed(master, 2))
    rep = sandwich_check(a, b, c, 1.0, seed=Seed(master, 3))
    assert rep.holds
    assert na <= rep.rank <= na + nb


# -- power growth ---------------------------------------------------------


def test_power_growth_examples():
    j = np.diag(np.ones(5), 1)
    e = np.zeros(6)
    e[-1] = 1
    assert power_growth_rate(j, e) == 0.0
    xi = np.ones(4) / 2
    assert abs(power_growth_rate(2 * np.eye(4), xi) - 2) < 1e-6
    assert abs(power_growth_rate(np.array([[0.1, 5], [0, 2]]), [0, 1], kmax=60) - 2) < 1e-3
    assert abs(power_growth_rate(np.array([[0.1, 5], [0, 2]]), [1, 0]) - 0.1) < 1e-6


def test_power_growth_errors():
    with pytest.raises(ParameterError):
        power_growth_rate(np.eye(2), [1, 0], kmax=4)
    with pytest.raises(ParameterError):
        power_growth_rate(np.eye(2), [1, 1])


def test_power_growth_inside_subspace():
    y = sample_grm(30, 30, 1 / 30, Seed(23))
    cut = invariant_projector(y, 0.6)
    v = cut.projector @ sample_grm(30, 1, 1.0, Seed(24)).ravel()
    v /= np.linalg.norm(v)
    assert power_growth_rate(y, v, kmax=40) <= 0.6 + 0.02


# -- block model ----------------------------------------------------------


def test_block_spec():
    spec = BlockModelSpec(2, 150, 1.0)
    assert spec.block_parameters == (1.0, 2.0)
    assert spec.size == 300
    assert BlockModelSpec(3, 10, 1.5).block_parameters == (2.5, 3.5, 4.5)
    with pytest.raises(ParameterError):
        BlockModelSpec(2, 7, 1.3)  # c_1 n = 11.2
    with pytest.raises(ParameterError):
        BlockModelSpec(0, 10, 1.0)


def test_block_structure():
    x = build_block_model(BlockModelSpec(3, 8, 1.0), Seed(25))
    assert x.shape == (24, 24)
    for i in range(3):
        for j in range(i):
            assert np.all(x[i * 8 : (i + 1) * 8, j * 8 : (j + 1) * 8] == 0)
    assert np.array_equal(x, build_block_model(BlockModelSpec(3, 8, 1.0), Seed(25)))


def test_block_normalized_trace():
    vals = []
    for i in range(30):
        x = build_block_model(BlockModelSpec(2, 150, 1.0), Seed(26, i))
        vals.append(np.trace(x.conj().T @ x).real / 300)
    assert within_stderr(vals, 1.0)[0]


def test_block_single_matches_induced():
    a = [np.trace(build_block_model(BlockModelSpec(1, 40, 2.0), Seed(27, i)).conj().T
                  @ build_block_model(BlockModelSpec(1, 40, 2.0), Seed(27, i))).real / 40 for i in range(200)]
    b = [np.trace((y := sample_induced_ginibre(40, 2.0, Seed(28, i))).conj().T @ y).real / 40
         for i in range(200)]
    assert within_stderr(np.array(a) - np.array(b), 0.0)[0]
