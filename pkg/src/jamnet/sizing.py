"""Smallest jammer deployment that drives outage to a target level."""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError
from .geometry import JammerParams, NetworkParams, jammer_radius
from .outage import OutageEvaluator

N_MAX_DEFAULT = 500


@dataclass(frozen=True)
class SizingPolicy:
    """``scaled_RJ`` ties the disk radius to N_J at N_Jc per cell; ``fixed_RJ`` keeps R_J."""

    mode: str = "scaled_RJ"
    target_outage: float = 0.9
    theta: float = 1.0
    N_Jc: float = 1.0
    R_J: float = None

    def __post_init__(self):
        if self.mode not in ("scaled_RJ", "fixed_RJ"):
            raise DomainError(f"unknown sizing mode {self.mode!r}")
        if not 0.0 < self.target_outage < 1.0:
            raise DomainError("target outage must lie in (0, 1)")
        if self.mode == "fixed_RJ" and not (self.R_J and self.R_J > 0):
            raise DomainError("fixed_RJ needs a positive R_J")


@dataclass(frozen=True)
class SizingResult:
    n_star: int
    outage: float
    saturated: bool
    curve: np.ndarray = field(repr=False, default=None)

    @property
    def flags(self):
        return ["saturated"] if self.saturated else []


class _Curve:
    """P_o(N) for one policy, with the PPP part of the r0 grid shared."""

    def __init__(self, net, jam_template, policy, ghq_n):
        self.net, self.policy, self.ghq_n = net, policy, ghq_n
        self.ratio = jam_template.P_J / net.P_T
        radius = policy.R_J if policy.mode == "fixed_RJ" else jammer_radius(1, policy.N_Jc, net.lambda_T)
        self.ev = OutageEvaluator(policy.theta, net, radius, self.ratio, ghq_n)
        self.cache = {}

    def __call__(self, n):
        n = int(n)
        if n not in self.cache:
            if self.policy.mode == "fixed_RJ" or n <= 1:
                self.cache[n] = self.ev(n)
            else:
                R_J = jammer_radius(n, self.policy.N_Jc, self.net.lambda_T)
                self.cache[n] = self.ev.with_radius(R_J)(n)
        return self.cache[n]

    def all(self, n_max):
        if self.policy.mode == "fixed_RJ":
            vals = self.ev(np.arange(n_max + 1))
            self.cache.update(enumerate(vals.tolist()))
            return vals
        return np.array([self(n) for n in range(n_max + 1)])


def _closest(values, target):
    """Index minimizing |values - target|, ties to the smaller index."""
    return int(np.argmin(np.abs(np.asarray(values) - target)))


def min_jammers(net: NetworkParams, jam_template: JammerParams, policy: SizingPolicy,
                N_max: int = N_MAX_DEFAULT, search: str = "auto", ghq_n: int = 15) -> SizingResult:
    """arg min over N in {0..N_max} of |P_o(N) - target|.

    ``search="scan"`` evaluates every candidate. ``"bisect"`` (the ``auto``
    choice under fixed_RJ, where P_o is nondecreasing in N) brackets the
    first N whose outage reaches the target by doubling then bisection, and
    compares it with its predecessor.
    """
    if N_max < 1:
        raise DomainError("N_max must be at least 1")
    if search == "auto":
        search = "bisect" if policy.mode == "fixed_RJ" else "scan"
    if search == "bisect" and policy.mode != "fixed_RJ":
        raise DomainError("bisection needs a monotone curve (fixed_RJ)")
    curve = _Curve(net, jam_template, policy, ghq_n)
    target = policy.target_outage

    if search == "scan":
        vals = curve.all(N_max)
        n = _closest(vals, target)
        saturated = n == N_max and vals[n] < target
        return SizingResult(n, float(vals[n]), bool(saturated), vals)
    if search != "bisect":
        raise DomainError(f"unknown search {search!r}")

    if curve(0) >= target:
        return SizingResult(0, curve(0), False)
    hi = 1
    while hi < N_max and curve(hi) < target:
        hi = min(2 * hi, N_max)
    if curve(hi) < target:
        return SizingResult(N_max, curve(N_max), True)
    lo = hi // 2  # curve(lo) < target
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if curve(mid) >= target:
            hi = mid
        else:
            lo = mid
    n = lo if abs(curve(lo) - target) <= abs(curve(hi) - target) else hi
    return SizingResult(n, curve(n), False)
