"""Ordered complex Schur forms and invariant-subspace projectors.

At finite size the invariant projection attached to a radius ``r`` is the
orthogonal projector onto the span of the generalized eigenvectors whose
eigenvalues satisfy ``|lambda| <= r``.  It is read off a Schur form
``Y = Q S Q*`` whose diagonal has been sorted by modulus: the first ``k``
Schur vectors span the subspace, where ``k`` counts eigenvalues inside the
closed disk.

Reordering is done by adjacent swaps.  Swapping the diagonal entries of
``[[a, b], [0, c]]`` uses the unitary returned by :func:`swap_2x2`, whose
first column is the eigenvector ``(b, c - a)`` of ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .ensembles import as_generator, check_cn_integer, sample_grm, sample_induced_ginibre
from .errors import NumericalError, ParameterError

__all__ = [
    "AsComputed",
    "AscendingModulus",
    "RandomSymmetrized",
    "SchurDecomposition",
    "SpectralCut",
    "SandwichReport",
    "BlockModelSpec",
    "swap_2x2",
    "schur",
    "reorder",
    "invariant_projector",
    "cut_schur",
    "compression_spectrum",
    "sandwich_check",
    "power_growth_rate",
    "build_block_model",
    "write_eigenvalues_csv",
]

TIE_TOL = 1e-12
GAP_WARN_TOL = 1e-6


# -- ordering policies -------------------------------------------------------


@dataclass(frozen=True)
class AsComputed:
    """Keep the eigenvalue order produced by LAPACK."""


@dataclass(frozen=True)
class AscendingModulus:
    """Sort eigenvalues so that ``|lambda_1| <= ... <= |lambda_n|`` (stable)."""


@dataclass(frozen=True)
class RandomSymmetrized:
    """Uniformly random eigenvalue order plus uniformly random Schur-vector phases.

    The phases realize the torus average ``(Q, S) -> (Q D, D* S D)`` for a
    Haar-random diagonal unitary ``D``; the permutation makes the diagonal
    of ``S`` exchangeable.
    """

    seed: object = 0


@dataclass
class SchurDecomposition:
    """``Y = Q S Q*`` with ``Q`` unitary and ``S`` upper triangular."""

    Q: np.ndarray
    S: np.ndarray
    eigenvalues: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return self.S.shape[0]

    def unitarity_residual(self) -> float:
        n = self.n
        return float(np.linalg.norm(self.Q.conj().T @ self.Q - np.eye(n)) / math.sqrt(max(n, 1)))


@dataclass
class SpectralCut:
    """Invariant projector for the closed disk of radius ``r``.

    ``rank`` counts eigenvalues with ``|lambda| <= r`` and ``gap`` is the
    smallest distance ``||lambda| - r|``.  ``warnings`` lists conditioning
    problems (an eigenvalue on or near the circle ``|z| = r``).
    """

    r: float
    rank: int
    projector: np.ndarray
    gap: float
    warnings: tuple = ()
    decomposition: SchurDecomposition | None = field(default=None, repr=False)

    @property
    def normalized_trace(self) -> float:
        return self.rank / self.projector.shape[0]


# -- 2x2 swap ------------------------------------------------------------------


def swap_2x2(a: complex, b: complex, c: complex) -> np.ndarray:
    """Unitary ``U`` with ``U* [[a, b], [0, c]] U = [[c, b], [0, a]]``.

    Identity when ``a == c``, the flip ``[[0, 1], [1, 0]]`` when ``b == 0``,
    and otherwise ``[[b, conj(a-c) b / conj(b)], [c - a, b]] / sqrt(|a-c|^2 + |b|^2)``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if a == c:
        return np.eye(2, dtype=np.complex128)
    if b == 0:
        return np.array([[0, 1], [1, 0]], dtype=np.complex128)
    d = a - c
    s = math.hypot(abs(d), abs(b))
    phase = b / b.conjugate()
    return np.array([[b, d.conjugate() * phase], [-d, b]], dtype=np.complex128) / s


def _swap_adjacent(S, Q, k):
    """Exchange diagonal entries ``k`` and ``k+1`` of ``S`` in place."""
    a, b, c = S[k, k], S[k, k + 1], S[k + 1, k + 1]
    if a == c:
        return
    u = swap_2x2(a, b, c)
    uh = u.conj().T
    S[k : k + 2, k:] = uh @ S[k : k + 2, k:]
    S[: k + 2, k : k + 2] = S[: k + 2, k : k + 2] @ u
    Q[:, k : k + 2] = Q[:, k : k + 2] @ u
    S[k, k] = c
    S[k + 1, k + 1] = a
    S[k + 1, k] = 0.0


def _sort_by_key(S, Q, key):
    """Insertion sort of the Schur diagonal by ``key`` using adjacent swaps."""
    key = list(key)
    for i in range(1, len(key)):
        j = i
        while j > 0 and key[j - 1] > key[j]:
            _swap_adjacent(S, Q, j - 1)
            key[j - 1], key[j] = key[j], key[j - 1]
            j -= 1


def _residual(Y, Q, S):
    scale = np.linalg.norm(Y)
    err = np.linalg.norm(Q @ S @ Q.conj().T - Y)
    return float(err / scale) if scale > 0 else float(err)


def reorder(decomp: SchurDecomposition, policy, Y=None) -> SchurDecomposition:
    """Return a new decomposition with the diagonal ordered per ``policy``.

    ``Y`` is only used to recompute the reconstruction residual; without it
    the residual is measured against ``Q S Q*`` of the input decomposition.
    """
    Q = decomp.Q.copy()
    S = decomp.S.copy()
    n = S.shape[0]
    if isinstance(policy, AscendingModulus):
        mod = np.abs(np.diagonal(S))
        rank = np.empty(n, dtype=np.int64)
        rank[np.argsort(mod, kind="stable")] = np.arange(n)
        _sort_by_key(S, Q, rank)
    elif isinstance(policy, RandomSymmetrized):
        rng = as_generator(policy.seed)
        _sort_by_key(S, Q, rng.permutation(n))
        phases = np.exp(2j * np.pi * rng.random(n))
        diag = np.diagonal(S).copy()
        S = (phases.conj()[:, None] * S) * phases[None, :]
        S[np.diag_indices(n)] = diag
        Q = Q * phases[None, :]
    elif not isinstance(policy, AsComputed):
        raise ParameterError(f"unknown ordering policy {policy!r}")
    S = np.triu(S)
    target = Y if Y is not None else decomp.Q @ decomp.S @ decomp.Q.conj().T
    return SchurDecomposition(Q, S, np.diagonal(S).copy(), _residual(target, Q, S))


def schur(Y, policy=None) -> SchurDecomposition:
    """Complex Schur decomposition ``Y = Q S Q*`` with ordered eigenvalues.

    Raises
    ------
    ParameterError
        If ``Y`` is not square or has non-finite entries.
    NumericalError
        If the QR iteration fails to converge.
    """
    Y = np.asarray(Y, dtype=np.complex128)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
        raise ParameterError(f"schur needs a square matrix, got shape {Y.shape}")
    if not np.all(np.isfinite(Y)):
        raise ParameterError("schur input has non-finite entries")
    try:
        S, Q = scipy.linalg.schur(Y, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Schur iteration did not converge: {exc}") from exc
    S = np.triu(S)
    raw = SchurDecomposition(Q, S, np.diagonal(S).copy(), _residual(Y, Q, S))
    if policy is None or isinstance(policy, AsComputed):
        return raw
    return reorder(raw, policy, Y)


# -- invariant projectors -----------------------------------------------------------


def cut_schur(decomp: SchurDecomposition, r: float, scale: float | None = None) -> SpectralCut:
    """Cut an ascending-modulus decomposition at radius ``r``.

    ``scale`` is the matrix norm used for the tie and gap thresholds;
    it defaults to ``||S||_F``, which equals ``||Y||_F``.
    """
    if not r >= 0:
        raise ParameterError(f"radius must be >= 0, got {r!r}")
    mod = np.abs(decomp.eigenvalues)
    if np.any(np.diff(mod) < 0):
        raise ParameterError("cut_schur needs an AscendingModulus decomposition")
    if scale is None:
        scale = float(np.linalg.norm(decomp.S))
    tie = TIE_TOL * scale
    k = int(np.count_nonzero(mod <= r + tie))
    dist = np.abs(mod - r)
    gap = float(dist.min()) if dist.size else math.inf
    notes = []
    if np.any((dist < tie) & (mod > r)):
        notes.append(f"eigenvalue within {tie:.1e} of |z| = {r} counted inside")
    if gap < GAP_WARN_TOL * scale:
        notes.append(f"ill-conditioned cut: eigenvalue gap {gap:.2e} at |z| = {r}")
    qk = decomp.Q[:, :k]
    return SpectralCut(
        r=float(r),
        rank=k,
        projector=qk @ qk.conj().T,
        gap=gap,
        warnings=tuple(notes),
        decomposition=decomp,
    )


def invariant_projector(Y, r: float, decomposition: SchurDecomposition | None = None) -> SpectralCut:
    """Orthogonal projector onto the spectral subspace for ``|lambda| <= r``.

    Pass ``decomposition`` (any ordering) to reuse an existing Schur form;
    it is reordered by ascending modulus first.
    """
    Y = np.asarray(Y, dtype=np.complex128)
    if decomposition is None:
        decomposition = schur(Y, AscendingModulus())
    else:
        decomposition = reorder(decomposition, AscendingModulus(), Y)
    return cut_schur(decomposition, r, float(np.linalg.norm(Y)))


def compression_spectrum(Y, cut: SpectralCut):
    """Eigenvalues of the leading ``k x k`` and trailing Schur blocks.

    These are the spectra of ``Y`` compressed to the invariant subspace and
    to its orthogonal complement.
    """
    decomp = cut.decomposition
    if decomp is None:
        decomp = invariant_projector(Y, cut.r).decomposition
    k = cut.rank
    eig = decomp.eigenvalues
    return eig[:k].copy(), eig[k:].copy()


# -- block-triangular sandwich -------------------------------------------------------


@dataclass
class SandwichReport:
    """Outcome of :func:`sandwich_check`.

    ``lower_residual`` is ``||P e1 - e1||`` and ``upper_residual`` is
    ``||(e1 + e2) P - P||``; the sandwich holds when both are below ``tol``.
    """

    holds: bool
    rank: int
    sizes: tuple
    lower_residual: float
    upper_residual: float
    tol: float
    projector: np.ndarray = field(repr=False)


def _spectral_radius(m):
    return float(np.max(np.abs(np.linalg.eigvals(m)))) if m.size else 0.0


def sandwich_check(A, B, C, r: float, seed=0, tol: float = 1e-8) -> SandwichReport:
    """Check ``e1 <= p_r(T) <= e1 + e2`` for ``T = [[A, *, *], [0, B, *], [0, 0, C]]``.

    The starred blocks are filled with independent complex Gaussians of
    variance ``1/size``.  ``B`` may be ``None`` or empty for a two-block
    matrix.  ``e1`` and ``e2`` are the coordinate projections onto the first
    and middle blocks.

    Raises
    ------
    ParameterError
        If the spectral radius of ``A`` exceeds ``r`` or ``C`` has an
        eigenvalue of modulus ``<= r``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    C = np.atleast_2d(np.asarray(C, dtype=np.complex128))
    B = np.zeros((0, 0), dtype=np.complex128) if B is None else np.asarray(B, dtype=np.complex128)
    if B.ndim != 2:
        B = B.reshape(0, 0)
    sizes = (A.shape[0], B.shape[0], C.shape[0])
    if _spectral_radius(A) > r:
        raise ParameterError(f"spectral radius of A ({_spectral_radius(A):.4g}) exceeds r={r}")
    c_min = float(np.min(np.abs(np.linalg.eigvals(C))))
    if c_min <= r:
        raise ParameterError(f"C has an eigenvalue of modulus {c_min:.4g} <= r={r}")

    total = sum(sizes)
    rng = as_generator(seed)
    T = sample_grm(total, total, 1.0 / total, rng)
    T = np.triu(T)
    offsets = np.cumsum((0,) + sizes)
    for block, lo, hi in zip((A, B, C), offsets[:-1], offsets[1:]):
        T[lo:hi, :hi] = 0.0
        T[lo:hi, lo:hi] = block
    P = invariant_projector(T, r).projector

    e1 = np.zeros(total)
    e1[: sizes[0]] = 1.0
    e12 = np.zeros(total)
    e12[: sizes[0] + sizes[1]] = 1.0
    lower = float(np.linalg.norm(P * e1[None, :] - np.diag(e1)))
    upper = float(np.linalg.norm(e12[:, None] * P - P))
    rank = int(round(np.trace(P).real))
    return SandwichReport(lower <= tol and upper <= tol, rank, sizes, lower, upper, tol, P)


# -- power growth ----------------------------------------------------------------------


def power_growth_rate(Y, xi, kmax: int = 60) -> float:
    """Estimate ``limsup_k ||Y^k xi||^{1/k}``.

    The vector is renormalized at every step and the accumulated log norms
    are fitted by a line over the last ``kmax/2`` powers; the estimate is
    the exponential of the slope.  Returns 0 if ``Y^k xi`` vanishes.

    Rounding errors outside an invariant subspace grow at the dominant
    rate, so for ``xi`` inside a slowly growing subspace keep ``kmax``
    moderate (a few dozen).
    """
    if kmax < 8:
        raise ParameterError(f"kmax must be >= 8, got {kmax}")
    Y = np.asarray(Y, dtype=np.complex128)
    v = np.asarray(xi, dtype=np.complex128).ravel()
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ParameterError("xi must be a unit vector")
    logs = np.empty(kmax + 1)
    logs[0] = 0.0
    for k in range(1, kmax + 1):
        v = Y @ v
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return 0.0
        logs[k] = logs[k - 1] + math.log(nv)
        v = v / nv
    ks = np.arange(kmax // 2, kmax + 1)
    slope = np.polyfit(ks, logs[ks], 1)[0]
    return float(math.exp(slope))


# -- block matrix model ----------------------------------------------------------------


@dataclass(frozen=True)
class BlockModelSpec:
    """``N x N`` block upper-triangular model with blocks of size ``n``.

    Diagonal block ``j`` (1-based) is induced Ginibre of parameter
    ``c_j = (c-1) N + j``; every ``c_j n`` must be an integer.
    """

    N: int
    n: int
    c: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"block count N must be a positive integer, got {self.N!r}")
        for cj in self.block_parameters:
            check_cn_integer(self.n, cj)

    @property
    def block_parameters(self) -> tuple:
        return tuple((self.c - 1.0) * self.N + j for j in range(1, self.N + 1))

    @property
    def size(self) -> int:
        return self.N * self.n


def build_block_model(spec: BlockModelSpec, seed) -> np.ndarray:
    """Sample ``(1/sqrt N) [[A_1, B_12, ...], [0, A_2, ...], ...]``.

    ``A_j`` is induced Ginibre ``(n, c_j)`` and each ``B_ij`` is GRM(n, 1/n);
    every block draws from its own spawned stream.
    """
    N, n = spec.N, spec.n
    rng = as_generator(seed)
    streams = iter(rng.spawn(N * (N + 1) // 2))
    x = np.zeros((N * n, N * n), dtype=np.complex128)
    for j, cj in enumerate(spec.block_parameters):
        x[j * n : (j + 1) * n, j * n : (j + 1) * n] = sample_induced_ginibre(n, cj, next(streams))
    for i in range(N):
        for j in range(i + 1, N):
            x[i * n : (i + 1) * n, j * n : (j + 1) * n] = sample_grm(n, n, 1.0 / n, next(streams))
    return x / math.sqrt(N)


def write_eigenvalues_csv(path, eigenvalues) -> None:
    """Write eigenvalues as CSV rows ``re,im,modulus`` under a header."""
    eig = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    with open(path, "w", newline="") as fh:
        fh.write("re,im,modulus\n")
        for z in eig:
            fh.write(f"{float(z.real)!r},{float(z.imag)!r},{float(abs(z))!r}\n")
