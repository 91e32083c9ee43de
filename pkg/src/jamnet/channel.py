"""Fading, shadowing, path loss and the modulation alphabets."""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError

CONSTELLATIONS = ("BPSK", "QPSK", "QAM16")


def path_loss(r, alpha):
    """Power path loss (1 + r)^-alpha, finite at r = 0."""
    return (1.0 + np.asarray(r, dtype=float)) ** (-alpha)


@dataclass(frozen=True)
class Constellation:
    label: str
    symbols: np.ndarray
    distances: np.ndarray  # |s_m - s_i|, zero on the diagonal
    min_distance: np.ndarray  # per symbol
    min_count: np.ndarray  # neighbours at the minimum distance, per symbol

    @property
    def M(self):
        return len(self.symbols)

    @property
    def n_avg(self):
        return float(self.min_count.mean())

    @property
    def d_min(self):
        return float(self.min_distance.min())

    def neighbor_distances(self, m):
        d = self.distances[m]
        return d[np.arange(self.M) != m]

    def unique_moduli(self):
        """Distinct |s| values with their frequencies (sums to 1)."""
        mods = np.round(np.abs(self.symbols), 12)
        vals, counts = np.unique(mods, return_counts=True)
        return vals, counts / counts.sum()


@lru_cache(maxsize=None)
def make_constellation(label: str) -> Constellation:
    if label == "BPSK":
        s = np.array([1.0, -1.0], dtype=complex)
    elif label == "QPSK":
        s = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / math.sqrt(2.0)
    elif label == "QAM16":
        levels = np.array([-3.0, -1.0, 1.0, 3.0])
        s = (levels[:, None] + 1j * levels[None, :]).ravel() / math.sqrt(10.0)
    else:
        raise DomainError(f"unsupported constellation {label!r}")
    d = np.abs(s[:, None] - s[None, :])
    off = d + np.diag(np.full(len(s), np.inf))
    dmin = off.min(axis=1)
    count = np.sum(np.isclose(off, dmin[:, None], rtol=1e-12, atol=0.0), axis=1)
    for arr in (s, d, dmin, count):
        arr.setflags(write=False)
    return Constellation(label, s, d, dmin, count)


@dataclass(frozen=True)
class ChannelDraw:
    h: complex
    chi: float
    symbol: complex


def sample_fading(rng, size=None):
    """Unit-power circularly symmetric complex Gaussian."""
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return (re + 1j * im) * math.sqrt(0.5)


def sample_shadowing(mu, sigma, rng, size=None):
    if sigma < 0:
        raise DomainError("sigma must be non-negative")
    if sigma == 0:
        return np.full(size, math.exp(mu)) if size is not None else math.exp(mu)
    return np.exp(rng.normal(mu, sigma, size))


def sample_noise(sigma2, rng, size=None):
    """Complex AWGN with total variance sigma2."""
    if not sigma2 > 0:
        raise DomainError("noise variance must be positive")
    return math.sqrt(sigma2) * sample_fading(rng, size)


def sample_symbol(scheme, rng, size=None):
    """Uniform symbol from a constellation, or unit-variance complex Gaussian for AWGN."""
    if scheme == "AWGN":
        return sample_fading(rng, size)
    const = scheme if isinstance(scheme, Constellation) else make_constellation(scheme)
    return const.symbols[rng.integers(0, const.M, size)]


def jamming_moment(scheme, q: int) -> float:
    """E|j|^(2q) of the jamming signal.

    Unit-variance complex AWGN has |j|^2 ~ Exp(1), hence E|j|^(2q) = q!.
    """
    if q < 0 or int(q) != q or q > 60:
        raise DomainError("q must be an integer in [0, 60]")
    q = int(q)
    if scheme == "AWGN":
        return float(math.factorial(q))
    s = make_constellation(scheme).symbols
    return float(np.mean(np.abs(s) ** (2 * q)))


def ml_decide(z, constellation: Constellation):
    """Index of the nearest symbol to each equalized observation in z."""
    z = np.asarray(z)
    d = np.abs(z[..., None] - constellation.symbols)
    return np.argmin(d, axis=-1)
