"""Network parameters and point-process sampling.

Base stations form a homogeneous PPP whose density already absorbs log-normal
shadowing (displacement theorem). Jammers form a BPP on a disk around the
victim receiver, which sits at the origin.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .errors import DomainError, EmptyNetworkError

# 500 m inter-site distance hexagonal grid
HEX_500M_DENSITY = 2.0 / (math.sqrt(3.0) * 500.0 ** 2)
SCHEMES = ("BPSK", "QPSK", "QAM16", "AWGN")


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def db_to_nat(sigma_db):
    """Convert a shadowing standard deviation from dB to natural-log units."""
    return sigma_db * math.log(10.0) / 10.0


def effective_density(lambda_raw: float, sigma_chi: float, alpha: float, mu_chi: float = 0.0) -> float:
    """BS density seen after absorbing log-normal shadowing, lambda * E[chi^(2/alpha)]."""
    if alpha <= 2:
        raise DomainError("alpha must exceed 2")
    if sigma_chi < 0:
        raise DomainError("sigma_chi must be non-negative")
    return lambda_raw * math.exp(2.0 * mu_chi / alpha + 2.0 * sigma_chi ** 2 / alpha ** 2)


def jammer_radius(n_jammers: float, per_cell: float, lambda_T: float) -> float:
    """Radius of the disk holding n_jammers at per_cell jammers per BS cell."""
    if n_jammers <= 0 or per_cell <= 0 or lambda_T <= 0:
        raise DomainError("jammer_radius needs positive arguments")
    return math.sqrt(n_jammers / (math.pi * lambda_T * per_cell))


@dataclass(frozen=True)
class NetworkParams:
    lambda_T: float
    P_T: float = 1.0
    p: float = 0.01
    alpha: float = 3.7
    mu_chi: float = 0.0
    sigma_chi: float = 0.0
    noise_power: float = 1.0

    def __post_init__(self):
        if not self.lambda_T > 0:
            raise DomainError("lambda_T must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError("activity factor p must lie in [0, 1]")
        if not self.alpha > 2:
            raise DomainError("alpha must exceed 2")
        if self.sigma_chi < 0:
            raise DomainError("sigma_chi must be non-negative")
        if not self.P_T > 0:
            raise DomainError("P_T must be positive")
        if not self.noise_power > 0:
            raise DomainError("noise_power must be positive")

    @classmethod
    def defaults(cls, lambda_raw=HEX_500M_DENSITY, sigma_db=6.0, **overrides):
        """Reference setting: 500 m hex-grid density, alpha 3.7, 6 dB shadowing, p 0.01."""
        alpha = overrides.pop("alpha", 3.7)
        mu_chi = overrides.pop("mu_chi", 0.0)
        sigma = db_to_nat(sigma_db)
        lam = effective_density(lambda_raw, sigma, alpha, mu_chi)
        return cls(lambda_T=lam, alpha=alpha, mu_chi=mu_chi, sigma_chi=sigma, **overrides)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class JammerParams:
    N_J: int
    N_Jc: float
    R_J: float
    P_J: float = 1.0
    scheme: str = "BPSK"

    def __post_init__(self):
        if self.N_J < 0 or int(self.N_J) != self.N_J:
            raise DomainError("N_J must be a non-negative integer")
        if not self.N_Jc > 0:
            raise DomainError("N_Jc must be positive")
        if not self.R_J > 0:
            raise DomainError("R_J must be positive")
        if not self.P_J > 0:
            raise DomainError("P_J must be positive")
        if self.scheme not in SCHEMES:
            raise DomainError(f"unknown jamming scheme {self.scheme!r}")

    @classmethod
    def scaled(cls, N_J, N_Jc, lambda_T, P_J=1.0, scheme="BPSK"):
        """Disk radius tied to the jammer count; N_J = 0 keeps the one-jammer radius."""
        R_J = jammer_radius(max(N_J, 1), N_Jc, lambda_T)
        return cls(int(N_J), float(N_Jc), R_J, P_J, scheme)

    @classmethod
    def fixed(cls, N_J, R_J, lambda_T, P_J=1.0, scheme="BPSK"):
        """Fixed disk radius; the per-cell count follows from N_J."""
        N_Jc = max(N_J, 1) / (math.pi * R_J ** 2 * lambda_T)
        return cls(int(N_J), N_Jc, float(R_J), P_J, scheme)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class PointPattern:
    r: np.ndarray
    angle: np.ndarray
    kind: str = "PPP"
    radius: float = field(default=math.inf)

    def __len__(self):
        return len(self.r)

    def cartesian(self):
        return self.r * np.cos(self.angle), self.r * np.sin(self.angle)


def _uniform_disk(n, radius, rng):
    r = radius * np.sqrt(rng.random(n))
    angle = rng.random(n) * (2.0 * math.pi)
    return r, angle


def sample_ppp(density: float, radius: float, rng: np.random.Generator) -> PointPattern:
    """Homogeneous PPP on the disk b(0, radius)."""
    if density < 0 or not radius > 0:
        raise DomainError("sample_ppp needs density >= 0 and radius > 0")
    n = rng.poisson(density * math.pi * radius ** 2)
    r, angle = _uniform_disk(n, radius, rng)
    return PointPattern(r, angle, "PPP", radius)


def sample_bpp(n: int, radius: float, rng: np.random.Generator) -> PointPattern:
    """Exactly n points i.i.d. uniform on b(0, radius)."""
    if n < 0 or not radius > 0:
        raise DomainError("sample_bpp needs n >= 0 and radius > 0")
    r, angle = _uniform_disk(int(n), radius, rng)
    return PointPattern(r, angle, "BPP", radius)


def nearest_distance(pattern: PointPattern) -> float:
    if len(pattern) == 0:
        raise EmptyNetworkError("pattern has no points")
    return float(pattern.r.min())


def simulation_radius(lambda_T: float, p: float) -> float:
    """Window holding 100 active BSs on average, never below 20/sqrt(lambda)."""
    floor_r = 20.0 / math.sqrt(lambda_T)
    if p <= 0:
        return floor_r
    return max(math.sqrt(100.0 / (p * lambda_T * math.pi)), floor_r)


@dataclass
class NetworkBatch:
    """Serving distances and active interferer distances for many trials.

    ``interferer_r`` is flat; ``owner`` maps each interferer to its trial.
    """

    r0: np.ndarray
    interferer_r: np.ndarray
    owner: np.ndarray
    rejected: int


def sample_network_batch(lambda_T, p, radius, n_trials, rng) -> NetworkBatch:
    """Draw the BS PPP for n_trials independent trials in one go.

    Equivalent in law to ``sample_ppp`` followed by picking the nearest point
    and thinning the others with probability p, but only the active
    interferers are materialized: given N points, the nearest distance has
    P(r0 > t) = (1 - t^2/R^2)^N, the other N - 1 points are uniform on the
    annulus r0 < r < R, and the active ones number Binomial(N - 1, p).
    Trials with an empty window are redrawn and counted in ``rejected``.
    """
    mean = lambda_T * math.pi * radius ** 2
    counts = rng.poisson(mean, n_trials)
    rejected = 0
    empty = counts == 0
    while empty.any():
        k = int(empty.sum())
        rejected += k
        counts[empty] = rng.poisson(mean, k)
        empty = counts == 0
    u = rng.random(n_trials)
    r0 = radius * np.sqrt(-np.expm1(np.log(u) / counts))
    active = rng.binomial(counts - 1, p)
    owner = np.repeat(np.arange(n_trials), active)
    lo = r0[owner] ** 2
    r = np.sqrt(lo + rng.random(owner.size) * (radius ** 2 - lo))
    return NetworkBatch(r0, r, owner, rejected)


def sample_jammer_batch(n_jammers, R_J, n_trials, rng):
    """Jammer distances, shape (n_trials, n_jammers)."""
    return R_J * np.sqrt(rng.random((n_trials, int(n_jammers))))
