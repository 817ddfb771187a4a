"""Seedable samplers for the complex random-matrix ensembles.

Every sampler is a pure function of its parameters and a :class:`Seed`
(or an already constructed :class:`numpy.random.Generator`).  Entry
variances follow the complex convention ``E|a|^2 = sigma2`` with real and
imaginary parts independent, each of variance ``sigma2 / 2``.

Matrices are plain complex128 :class:`numpy.ndarray` objects; the helpers
:func:`write_matrix` and :func:`read_matrix` move them to and from a
flat little-endian layout for cross-checking with external tools.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError

__all__ = [
    "Seed",
    "EnsembleParams",
    "as_generator",
    "sample_complex_gaussian",
    "sample_grm",
    "sample_sgrm",
    "sample_utgrm",
    "sample_hurm",
    "sample_induced_ginibre",
    "check_cn_integer",
    "write_matrix",
    "read_matrix",
]

_UINT64 = 2**64


@dataclass(frozen=True)
class Seed:
    """A (master, stream) pair identifying one reproducible random stream.

    Streams are derived with :class:`numpy.random.SeedSequence`, which hashes
    the master entropy together with the stream index, so distinct stream
    indices give statistically independent generators.
    """

    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            value = getattr(self, name)
            if not 0 <= int(value) < _UINT64:
                raise ParameterError(f"seed {name} must be an unsigned 64-bit integer, got {value}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.master), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, stream: int) -> "Seed":
        return Seed(self.master, stream)


def as_generator(seed) -> np.random.Generator:
    """Turn a :class:`Seed`, an integer or a Generator into a Generator.

    A bare integer is read as ``Seed(master=seed, stream=0)``.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, Seed):
        return seed.generator()
    if isinstance(seed, (int, np.integer)):
        return Seed(int(seed)).generator()
    raise ParameterError(f"cannot build a random generator from {type(seed).__name__}")


@dataclass(frozen=True)
class EnsembleParams:
    """Size, per-entry variance and free Poisson parameter of an ensemble."""

    n: int
    sigma2: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        _check_size("n", self.n)
        _check_sigma2(self.sigma2)
        if not self.c >= 1:
            raise ParameterError(f"free Poisson parameter c must be >= 1, got {self.c}")

    @property
    def cn(self) -> int:
        return check_cn_integer(self.n, self.c)


def _check_size(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value!r}")


def _check_sigma2(sigma2):
    if not (math.isfinite(sigma2) and sigma2 > 0):
        raise ParameterError(f"sigma2 must be positive and finite, got {sigma2!r}")


def check_cn_integer(n: int, c: float) -> int:
    """Return ``c * n`` as an int, or raise if it is not an integer."""
    _check_size("n", n)
    if not c >= 1:
        raise ParameterError(f"free Poisson parameter c must be >= 1, got {c}")
    cn = c * n
    rounded = round(cn)
    if abs(cn - rounded) > 1e-9 * max(1.0, abs(cn)):
        raise ParameterError(
            f"c·n must be an integer for induced Ginibre sampling, got c={c}, n={n}, "
            f"c·n={cn:g}; choose n so that c·n is whole"
        )
    return int(rounded)


def _gaussian(rng, shape, sigma2):
    scale = math.sqrt(sigma2 / 2.0)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return scale * (re + 1j * im)


def sample_complex_gaussian(sigma2: float, seed) -> complex:
    """Draw one complex (0, sigma2)-Gaussian scalar."""
    _check_sigma2(sigma2)
    return complex(_gaussian(as_generator(seed), (), sigma2))


def sample_grm(rows: int, cols: int, sigma2: float, seed) -> np.ndarray:
    """Rectangular matrix of i.i.d. complex (0, sigma2)-Gaussian entries."""
    _check_size("rows", rows)
    _check_size("cols", cols)
    _check_sigma2(sigma2)
    return _gaussian(as_generator(seed), (rows, cols), sigma2)


def sample_sgrm(n: int, sigma2: float, seed) -> np.ndarray:
    """Exactly Hermitian Gaussian matrix.

    The diagonal is real (0, sigma2)-Gaussian and the strict upper triangle
    holds i.i.d. complex (0, sigma2)-Gaussian entries.
    """
    _check_size("n", n)
    _check_sigma2(sigma2)
    rng = as_generator(seed)
    diag = math.sqrt(sigma2) * rng.standard_normal(n)
    upper = np.triu(_gaussian(rng, (n, n), sigma2), k=1)
    y = upper + upper.conj().T
    y[np.diag_indices(n)] = diag
    return y


def sample_utgrm(n: int, sigma2: float, seed) -> np.ndarray:
    """Strictly upper triangular Gaussian matrix (zero on and below the diagonal)."""
    _check_size("n", n)
    _check_sigma2(sigma2)
    return np.triu(_gaussian(as_generator(seed), (n, n), sigma2), k=1)


def sample_hurm(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary matrix.

    QR of a Ginibre matrix with the phases of ``diag(R)`` divided out, which
    is what makes the law exactly Haar rather than merely unitary.
    """
    _check_size("n", n)
    z = _gaussian(as_generator(seed), (n, n), 1.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.abs(d)
    return q * phases[np.newaxis, :]


def sample_induced_ginibre(n: int, c: float, seed) -> np.ndarray:
    """Induced Ginibre matrix with density ``∝ |det Y|^{2(c-1)n} exp(-n Tr Y*Y)``.

    Exact sampler: the squared singular values are the eigenvalues of
    ``G*G`` for a ``(c n) × n`` Gaussian ``G`` with entry variance ``1/n``,
    and the density is invariant under left and right unitary
    multiplication, so ``Y = U diag(sqrt(lambda)) V*`` with independent Haar
    ``U`` and ``V``.  For ``c = 1`` this is the Ginibre matrix GRM(n, 1/n).

    Raises
    ------
    ParameterError
        If ``c < 1`` or ``c * n`` is not an integer.
    """
    cn = check_cn_integer(n, c)
    rng = as_generator(seed)
    g = _gaussian(rng, (cn, n), 1.0 / n)
    lam = np.linalg.eigvalsh(g.conj().T @ g)
    sv = np.sqrt(np.clip(lam, 0.0, None))
    u = sample_hurm(n, rng)
    v = sample_hurm(n, rng)
    return (u * sv[np.newaxis, :]) @ v.conj().T


# -- serialization -----------------------------------------------------------

_MAGIC = b"CFPM"


def write_matrix(path, matrix, fmt: str | None = None) -> None:
    """Write a complex matrix in the binary or CSV exchange layout.

    Binary layout: the 4 bytes ``CFPM``, then ``rows`` and ``cols`` as
    little-endian uint64, then ``rows*cols`` pairs ``(re, im)`` as
    little-endian float64 in row-major order.  CSV layout: one line per row
    holding ``re_0,im_0,re_1,im_1,...`` printed with ``repr`` precision.
    The format is chosen from the suffix (``.csv`` or anything else for
    binary) unless ``fmt`` is given.
    """
    path = Path(path)
    m = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "bin")
    rows, cols = m.shape
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            for row in m:
                fh.write(",".join(repr(float(v)) for z in row for v in (z.real, z.imag)))
                fh.write("\n")
    elif fmt == "bin":
        inter = np.empty((rows, cols, 2), dtype="<f8")
        inter[..., 0] = m.real
        inter[..., 1] = m.imag
        with path.open("wb") as fh:
            fh.write(_MAGIC + struct.pack("<QQ", rows, cols))
            fh.write(inter.tobytes(order="C"))
    else:
        raise ParameterError(f"unknown matrix format {fmt!r}")


def read_matrix(path, fmt: str | None = None) -> np.ndarray:
    """Inverse of :func:`write_matrix`."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "bin")
    if fmt == "csv":
        data = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
        return data[:, 0::2] + 1j * data[:, 1::2]
    raw = path.read_bytes()
    if raw[:4] != _MAGIC:
        raise ParameterError(f"{path} is not a cfplab matrix file")
    rows, cols = struct.unpack("<QQ", raw[4:20])
    inter = np.frombuffer(raw[20:], dtype="<f8").reshape(rows, cols, 2)
    return inter[..., 0] + 1j * inter[..., 1]
