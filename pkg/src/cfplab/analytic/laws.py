"""Closed-form and quadrature oracles for the limit laws.

All integrals against the free Poisson law are taken after the substitution
``t = a + (b - a) cos^2(theta / 2)``, which turns the square-root edges of
the density into a smooth periodic integrand; :func:`scipy.integrate.quad`
then reaches ~1e-13 absolute accuracy with few subdivisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from ..errors import ParameterError

__all__ = [
    "FreePoissonLaw",
    "AnnulusLaw",
    "SingularLaw",
    "nu_c_density",
    "nu_c_moment",
    "nu_c_power_moment",
    "quarter_circ_moment",
    "annulus_radial_moment_limit",
    "annulus_radial_moment_finite",
    "annulus_inside_fraction_finite",
    "singular_law_density",
    "trace_formula",
]

_QUAD_OPTS = dict(epsabs=1e-14, epsrel=1e-13, limit=200)


def _check_c(c):
    if not (math.isfinite(c) and c >= 1):
        raise ParameterError(f"free Poisson parameter c must be >= 1, got {c!r}")


def _check_order(name, k):
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ParameterError(f"{name} must be a non-negative integer, got {k!r}")


@dataclass(frozen=True)
class FreePoissonLaw:
    """Free Poisson (Marchenko-Pastur) law of parameter ``c`` on ``[a, b]``."""

    c: float

    def __post_init__(self):
        _check_c(self.c)

    @property
    def a(self) -> float:
        return (1.0 - math.sqrt(self.c)) ** 2

    @property
    def b(self) -> float:
        return (1.0 + math.sqrt(self.c)) ** 2

    def density(self, t):
        return nu_c_density(self.c, t)

    def moment(self, k: int) -> float:
        return nu_c_moment(self.c, k)

    def expect(self, f) -> float:
        """Integrate ``f`` against the law."""
        a, b = self.a, self.b
        half = 0.5 * (b - a)

        def integrand(theta):
            s = math.sin(0.5 * theta)
            co = math.cos(0.5 * theta)
            t = a + (b - a) * co * co
            # density * dt / dtheta = half^2 sin(theta)^2 / (2 pi t)
            return f(t) * half * half * 4.0 * s * s * co * co / (2.0 * math.pi * t)

        value, _ = integrate.quad(integrand, 0.0, math.pi, **_QUAD_OPTS)
        return value


@dataclass(frozen=True)
class AnnulusLaw:
    """Uniform law on the annulus ``sqrt(c-1) <= |z| <= sqrt(c)``."""

    c: float

    def __post_init__(self):
        _check_c(self.c)

    @property
    def inner(self) -> float:
        return math.sqrt(self.c - 1.0)

    @property
    def outer(self) -> float:
        return math.sqrt(self.c)

    def radial_moment(self, b: int) -> float:
        return annulus_radial_moment_limit(self.c, b)

    def sample(self, size, rng) -> np.ndarray:
        """Draw points uniformly from the annulus (``|z|^2`` is uniform on ``[c-1, c]``)."""
        u = rng.random(size)
        theta = rng.random(size)
        return np.sqrt(self.c - 1.0 + u) * np.exp(2j * np.pi * theta)


@dataclass(frozen=True)
class SingularLaw:
    """Law of ``sqrt(t)`` for ``t`` free Poisson of parameter ``c``."""

    c: float

    def __post_init__(self):
        _check_c(self.c)

    @property
    def d0(self) -> float:
        return 1.0 - math.sqrt(self.c)

    @property
    def d1(self) -> float:
        return 1.0 + math.sqrt(self.c)

    def density(self, t):
        return singular_law_density(self.c, t)


def nu_c_density(c: float, t):
    """Density ``sqrt((b-t)(t-a)) / (2 pi t)`` on ``[a, b]``, zero elsewhere.

    Vectorized over ``t``.  For ``c = 1`` the density blows up like
    ``1/sqrt(t)`` at the origin and ``inf`` is returned at ``t = 0``.
    """
    law = FreePoissonLaw(c)
    a, b = law.a, law.b
    t = np.asarray(t, dtype=float)
    inside = (t >= a) & (t <= b)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sqrt(np.clip((b - t) * (t - a), 0.0, None)) / (2.0 * np.pi * t)
    out = np.where(inside, val, 0.0)
    out = np.where(inside & (t == 0.0), np.inf, out)
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=4096)
def nu_c_power_moment(c: float, p: float) -> float:
    """``∫ t^p dnu_c(t)`` for a real power ``p >= 0`` (by quadrature)."""
    _check_c(c)
    if not p >= 0:
        raise ParameterError(f"power must be >= 0, got {p!r}")
    if p == 0:
        return 1.0
    return FreePoissonLaw(c).expect(lambda t: t**p)


def nu_c_moment(c: float, k: int) -> float:
    """k-th moment of the free Poisson law of parameter ``c`` (quadrature)."""
    _check_c(c)
    _check_order("k", k)
    return nu_c_power_moment(float(c), float(k))


def quarter_circ_moment(k: int) -> float:
    """``(1/pi) ∫_0^2 t^k sqrt(4 - t^2) dt`` by quadrature (``t = 2 cos theta``)."""
    _check_order("k", k)
    if k == 0:
        return 1.0

    def integrand(theta):
        s = math.sin(theta)
        return (2.0 * math.cos(theta)) ** k * s * s

    value, _ = integrate.quad(integrand, 0.0, 0.5 * math.pi, **_QUAD_OPTS)
    return 4.0 / math.pi * value


def annulus_radial_moment_limit(c: float, b: int) -> float:
    """``E|z|^{2b}`` for ``z`` uniform on the annulus: ``(c^{b+1} - (c-1)^{b+1}) / (b+1)``."""
    _check_c(c)
    _check_order("b", b)
    return (c ** (b + 1) - (c - 1.0) ** (b + 1)) / (b + 1)


def annulus_radial_moment_finite(n: int, c: float, b: int) -> float:
    """Exact ``E|z|^{2b}`` for one eigenvalue of the size-``n`` induced Ginibre matrix.

    Uses the rising-product form
    ``(c(c+1/n)...(c+b/n) - (c-1)((c-1)+1/n)...((c-1)+b/n)) / (b+1)``,
    which stays finite at ``c = 1`` where the Gamma-ratio form does not.
    """
    _check_c(c)
    _check_order("b", b)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    outer = math.prod(c + j / n for j in range(b + 1))
    inner = math.prod(c - 1.0 + j / n for j in range(b + 1))
    return (outer - inner) / (b + 1)


def annulus_inside_fraction_finite(n: int, c: float, r: float) -> float:
    """Exact expected fraction of induced Ginibre eigenvalues with ``|z| <= r``.

    The squared moduli of the eigenvalues are distributed as independent
    ``Gamma(k + (c-1) n, rate n)`` variables, ``k = 1..n``.
    """
    _check_c(c)
    if r < 0:
        raise ParameterError(f"radius must be >= 0, got {r!r}")
    shapes = np.arange(1, n + 1) + (c - 1.0) * n
    return float(np.mean(special.gammainc(shapes, n * r * r)))


def singular_law_density(c: float, t):
    """Density ``sqrt((d1^2 - t^2)(t^2 - d0^2)) / (pi t)`` on ``[|d0|, d1]``."""
    law = SingularLaw(c)
    lo, hi = abs(law.d0), law.d1
    t = np.asarray(t, dtype=float)
    inside = (t >= lo) & (t <= hi)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sqrt(np.clip((hi * hi - t * t) * (t * t - lo * lo), 0.0, None)) / (np.pi * t)
    out = np.where(inside, val, 0.0)
    out = np.where(inside & (t == 0.0), 2.0 / np.pi, out)
    return out[()] if out.ndim == 0 else out


def trace_formula(c: float, r: float) -> float:
    """Trace of the invariant projection for radius ``r``.

    ``0`` below the inner radius ``sqrt(c-1)``, ``r^2 - (c-1)`` across the
    annulus, and ``1`` beyond the outer radius ``sqrt(c)``.
    """
    _check_c(c)
    if not (math.isfinite(r) and r >= 0):
        raise ParameterError(f"radius must be >= 0, got {r!r}")
    return min(1.0, max(0.0, r * r - (c - 1.0)))
