"""Named matrix models that the experiments draw from."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..analytic.laws import AnnulusLaw
from ..ensembles import (
    as_generator,
    check_cn_integer,
    sample_grm,
    sample_hurm,
    sample_induced_ginibre,
    sample_sgrm,
    sample_utgrm,
)
from ..errors import ParameterError
from ..spectral import BlockModelSpec, RandomSymmetrized, build_block_model, schur

__all__ = ["Ensemble", "ENSEMBLES", "balanced_signs"]

ENSEMBLES = (
    "identity",
    "grm",
    "sgrm",
    "utgrm",
    "hurm",
    "induced-ginibre",
    "block",
    "schur-triangular",
    "annulus-triangular",
)


def balanced_signs(n: int, rng) -> np.ndarray:
    """Random arrangement of ``n // 2`` entries ``-1`` and the rest ``+1``.

    For even ``n`` the empirical law is exactly the symmetric two-point law.
    """
    signs = np.ones(n)
    signs[: n // 2] = -1.0
    return rng.permutation(signs)


@dataclass(frozen=True)
class Ensemble:
    """A matrix model identified by name.

    ``sigma2`` defaults to ``1/n`` for the Gaussian ensembles.  For
    ``block`` the size argument of :meth:`sample` is the block size and the
    sample has size ``N n``.  ``schur-triangular`` is the Schur form of an
    induced Ginibre sample under random symmetrized ordering;
    ``annulus-triangular`` is an i.i.d. uniform-annulus diagonal plus an
    independent UTGRM(n, 1/n) strict upper part.
    """

    name: str
    c: float = 1.0
    sigma2: float | None = None
    N: int = 1

    def __post_init__(self):
        if self.name not in ENSEMBLES:
            raise ParameterError(f"unknown ensemble {self.name!r}; choose from {', '.join(ENSEMBLES)}")

    def validate(self, n: int) -> None:
        """Raise before any sampling if ``n`` is incompatible with the model."""
        if self.name in ("induced-ginibre", "schur-triangular"):
            check_cn_integer(n, self.c)
        elif self.name == "block":
            BlockModelSpec(self.N, n, self.c)

    def size(self, n: int) -> int:
        return n * self.N if self.name == "block" else n

    def sample(self, n: int, seed) -> np.ndarray:
        rng = as_generator(seed)
        s2 = self.sigma2 if self.sigma2 is not None else 1.0 / n
        name = self.name
        if name == "identity":
            return np.eye(n, dtype=np.complex128)
        if name == "grm":
            return sample_grm(n, n, s2, rng)
        if name == "sgrm":
            return sample_sgrm(n, s2, rng)
        if name == "utgrm":
            return sample_utgrm(n, s2, rng)
        if name == "hurm":
            return sample_hurm(n, rng)
        if name == "induced-ginibre":
            return sample_induced_ginibre(n, self.c, rng)
        if name == "block":
            return build_block_model(BlockModelSpec(self.N, n, self.c), rng)
        if name == "schur-triangular":
            y = sample_induced_ginibre(n, self.c, rng)
            return schur(y, RandomSymmetrized(rng)).S
        z = AnnulusLaw(self.c).sample(n, rng)
        return np.diag(z) + sample_utgrm(n, 1.0 / n, rng)
