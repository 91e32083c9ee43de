"""Retransmissions: steady-state activity factor and packet drop probability.

A packet is retried after each outage, up to D retries. With Poisson
arrivals (1 - p = e^-mu) the offered load grows to
mu_s = mu (1 - eps^(D+1)) / (1 - eps), so p_s = 1 - (1-p)^((1 - eps^(D+1))/(1 - eps)),
and a packet is dropped with probability eps^(D+1).
"""

from dataclasses import dataclass
import math

from .errors import DomainError
from .geometry import JammerParams, NetworkParams
from .outage import OutageQuery, outage_probability

MAX_ITER = 100
TOL = 1e-8


def _attempts(P_o, D):
    """Expected number of transmissions per packet, sum_{k=0}^{D} P_o^k."""
    return math.fsum(P_o ** k for k in range(D + 1))


def steady_state_activity(p: float, P_o: float, D: int) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError("p must lie in [0, 1]")
    if not 0.0 <= P_o <= 1.0:
        raise DomainError("P_o must lie in [0, 1]")
    if D < 0 or int(D) != D:
        raise DomainError("D must be a non-negative integer")
    return 1.0 - (1.0 - p) ** _attempts(P_o, int(D))


def drop_probability(P_o: float, D: int) -> float:
    if not 0.0 <= P_o <= 1.0:
        raise DomainError("P_o must lie in [0, 1]")
    if D < 0 or int(D) != D:
        raise DomainError("D must be a non-negative integer")
    return P_o ** (int(D) + 1)


@dataclass(frozen=True)
class RetxParams:
    p: float = 0.01
    coupling: str = "fixed_point"
    D: int = 0

    def __post_init__(self):
        if self.coupling not in ("open_loop", "fixed_point"):
            raise DomainError(f"unknown coupling {self.coupling!r}")
        if not 0.0 < self.p < 1.0:
            raise DomainError("p must lie in (0, 1)")


@dataclass(frozen=True)
class RetxRow:
    D: int
    p_s: float
    delta: float
    P_o: float
    converged: bool = True
    iterations: int = 0

    @property
    def flags(self):
        return [] if self.converged else ["not_converged"]


def _outage_at(net, jam, theta, p, ghq_n):
    q = OutageQuery(theta, net.with_(p=p), jam)
    return outage_probability(q, "ghq", ghq_n)


def retx_profile(net: NetworkParams, jam: JammerParams, theta: float, retx: RetxParams,
                 D_grid, ghq_n: int = 15):
    """One row (D, p_s, delta) per retransmission limit in D_grid."""
    rows = []
    base = _outage_at(net, jam, theta, retx.p, ghq_n)
    for D in D_grid:
        D = int(D)
        if retx.coupling == "open_loop":
            ps = steady_state_activity(retx.p, base, D)
            rows.append(RetxRow(D, ps, drop_probability(base, D), base))
            continue
        ps, po = retx.p, base
        step = 1.0
        last_move = 0.0
        converged = False
        for it in range(1, MAX_ITER + 1):
            target = steady_state_activity(retx.p, po, D)
            move = target - ps
            if move * last_move < 0:
                step *= 0.5
            ps_next = ps + step * move
            done = abs(ps_next - ps) < TOL
            ps, last_move = ps_next, move
            po = _outage_at(net, jam, theta, ps, ghq_n)
            if done:
                converged = True
                break
        rows.append(RetxRow(D, ps, drop_probability(po, D), po, converged, it))
    return rows
