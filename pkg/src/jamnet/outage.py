"""SIR outage probability: closed-form analysis and Monte Carlo.

The analysis conditions on the serving distance r0, averages the PPP
interference through its probability generating functional and the BPP
jammers through their (conditionally i.i.d.) Laplace factors, then integrates
r0 against its Rayleigh-type density.

Both exclusion-type integrals reduce to

    K(x1, x2; b) = int_{x1}^{x2} (q - 1) * b q^-a / (1 + b q^-a) dq,

evaluated in closed form with 2F1 at arguments in [-1, 0]: above the
crossover q* = b^(1/a) a tail antiderivative in s = (q*/q)^a is used, below it
the complementary head antiderivative in z = (q/q*)^a.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate

from . import _mc
from ._mc import EstimateWithCI
from .errors import ConvergenceError, DomainError
from .geometry import (
    JammerParams,
    NetworkParams,
    sample_jammer_batch,
    sample_network_batch,
    simulation_radius,
)
from .specfun import hyp2f1_array, lognormal_nodes

T_RANGE = 8.0
OUTER_EPSABS = 1e-9
CLAMP_REPORT = 1e-9


@dataclass(frozen=True)
class OutageQuery:
    theta: float
    net: NetworkParams
    jam: JammerParams

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError("theta must be positive")


def r0_max(lambda_T):
    """Serving distance beyond which exp(-pi lambda r0^2) < 1e-14."""
    return math.sqrt(14.0 * math.log(10.0) / (math.pi * lambda_T))


def _tail(x, s, alpha):
    """Tail antiderivative T(x), with s = (q*/x)^alpha <= 1 and T(inf) = 0."""
    f2 = hyp2f1_array(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, -s)
    f1 = hyp2f1_array(1.0, 1.0 - 1.0 / alpha, 2.0 - 1.0 / alpha, -s)
    return x * x * s / (alpha - 2.0) * f2 - x * s / (alpha - 1.0) * f1


def _head(x, z, alpha):
    """Head antiderivative H(x), with z = (x/q*)^alpha <= 1."""
    f2 = hyp2f1_array(1.0, 1.0 + 2.0 / alpha, 2.0 + 2.0 / alpha, -z)
    f1 = hyp2f1_array(1.0, 1.0 + 1.0 / alpha, 2.0 + 1.0 / alpha, -z)
    return z * (x * x / (alpha + 2.0) * f2 - x / (alpha + 1.0) * f1)


def _tail_at(x, qs, alpha):
    out = np.zeros_like(x)
    fin = np.isfinite(x) & (qs > 0)
    if fin.any():
        xs = x[fin]
        out[fin] = _tail(xs, (qs[fin] / xs) ** alpha, alpha)
    return out


def _head_at(x, qs, alpha):
    out = np.zeros_like(x)
    fin = np.isfinite(qs) & (x > 0)
    if fin.any():
        xs = x[fin]
        out[fin] = _head(xs, (xs / qs[fin]) ** alpha, alpha)
    return out


def k_integral(x1, x2, b, alpha):
    """K(x1, x2; b) elementwise; x2 may be +inf, requires 1 <= x1 <= x2."""
    x1, x2, b = np.broadcast_arrays(
        np.asarray(x1, float), np.asarray(x2, float), np.asarray(b, float)
    )
    x1, x2, b = x1.ravel().copy(), x2.ravel().copy(), b.ravel().copy()
    qs = b ** (1.0 / alpha)
    total = np.zeros_like(x1)

    # part above the crossover: [max(x1, q*), x2]
    lo = np.maximum(x1, qs)
    up = x2 > lo
    if up.any():
        total[up] += _tail_at(lo[up], qs[up], alpha) - _tail_at(x2[up], qs[up], alpha)

    # part below the crossover: [x1, min(x2, q*)]
    hi = np.minimum(x2, qs)
    dn = hi > x1
    if dn.any():
        a1, a2, q = x1[dn], hi[dn], qs[dn]
        poly = 0.5 * ((a2 - 1.0) ** 2 - (a1 - 1.0) ** 2)
        total[dn] += poly - (_head_at(a2, q, alpha) - _head_at(a1, q, alpha))
    return total


def ppp_exclusion_integral(r0, theta, alpha):
    """int_{r0}^inf [1 - 1/(1 + theta (1+r0)^a (1+r)^-a)] r dr."""
    r0 = np.asarray(r0, float)
    x = 1.0 + r0
    out = k_integral(x, np.inf, theta * x ** alpha, alpha)
    return out.reshape(r0.shape) if r0.ndim else float(out[0])


def bpp_disk_term(r0, theta, alpha, power_ratio, chi, R_J):
    """(2/R_J^2) int_0^R_J r / (1 + theta (1+r0)^a ratio chi (1+r)^-a) dr."""
    r0, chi = np.broadcast_arrays(np.asarray(r0, float), np.asarray(chi, float))
    shape = r0.shape
    b = theta * (1.0 + r0) ** alpha * power_ratio * chi
    k = k_integral(1.0, 1.0 + R_J, b, alpha)
    out = np.clip(1.0 - 2.0 / R_J ** 2 * k, 0.0, 1.0).reshape(shape)
    return out if shape else float(out)


def _ratio(query):
    return query.jam.P_J / query.net.P_T


def _bpp_mean_exact(r0, query):
    """E_chi[bpp_disk_term] by adaptive quadrature in t, chi = exp(mu + sqrt2 sigma t)."""
    net, jam = query.net, query.jam
    ratio = _ratio(query)
    if net.sigma_chi == 0:
        return bpp_disk_term(r0, query.theta, net.alpha, ratio, math.exp(net.mu_chi), jam.R_J)

    def integrand(t):
        chi = math.exp(net.mu_chi + math.sqrt(2.0) * net.sigma_chi * t)
        return bpp_disk_term(r0, query.theta, net.alpha, ratio, chi, jam.R_J) * math.exp(-t * t)

    val, err = _quad(integrand, -T_RANGE, T_RANGE, "chi expectation", r0=r0, epsabs=1e-12)
    return val / math.sqrt(math.pi)


def _bpp_mean_ghq(r0, query, n):
    net, jam = query.net, query.jam
    chi, w = lognormal_nodes(net.sigma_chi, n, net.mu_chi)
    r0 = np.atleast_1d(np.asarray(r0, float))
    vals = bpp_disk_term(r0[:, None], query.theta, net.alpha, _ratio(query), chi[None, :], jam.R_J)
    return vals @ w


def _quad(f, a, b, axis, epsabs, **where):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = integrate.quad(f, a, b, limit=200, epsabs=epsabs, epsrel=1e-10, full_output=1)
    val, err = out[0], out[1]
    if not math.isfinite(val) or err > max(1e3 * epsabs, 1e-6):
        raise ConvergenceError(
            f"quadrature over the {axis} did not converge",
            axis=axis, value=val, abserr=err, **where,
        )
    return val, err


def _clamp(raw, diagnostics):
    value = min(max(raw, 0.0), 1.0)
    if diagnostics is not None:
        diagnostics["raw"] = raw
        if abs(value - raw) > CLAMP_REPORT:
            diagnostics.setdefault("flags", []).append("clamped")
    return value


def outage_probability(query: OutageQuery, mode: str = "exact", ghq_n: int = 15, diagnostics=None) -> float:
    """P(SIR < theta) for the typical receiver.

    ``mode`` is ``"exact"`` (adaptive quadrature over the shadowing law) or
    ``"ghq"`` (ghq_n-point Gauss-Hermite rule). ``diagnostics``, if given, is
    filled with the unclamped value and any flags.
    """
    net, jam = query.net, query.jam
    if mode == "ghq":
        if not 5 <= ghq_n <= 40:
            raise DomainError("ghq order must lie in [5, 40]")
    elif mode != "exact":
        raise DomainError(f"unknown mode {mode!r}")
    lam, alpha, theta = net.lambda_T, net.alpha, query.theta
    n_j = jam.N_J

    def integrand(r0):
        v = 2.0 * math.pi * lam * r0 * math.exp(-lam * math.pi * r0 * r0)
        if net.p > 0:
            v *= math.exp(-2.0 * math.pi * net.p * lam * ppp_exclusion_integral(r0, theta, alpha))
        if n_j > 0 and v > 0:
            if mode == "exact":
                bm = _bpp_mean_exact(r0, query)
            else:
                bm = float(_bpp_mean_ghq(r0, query, ghq_n)[0])
            v *= bm ** n_j
        return v

    rmax = r0_max(lam)
    # split the range so the adaptive rule sees the density's bulk
    knots = [0.0, 0.5 / math.sqrt(lam), 1.5 / math.sqrt(lam), rmax]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        val, _ = _quad(integrand, a, b, "serving distance", epsabs=OUTER_EPSABS / 3)
        total += val
    return _clamp(1.0 - total, diagnostics)


class OutageEvaluator:
    """Outage on a fixed r0 grid, cheap to re-evaluate for many jammer counts.

    For a fixed disk radius, P_o(N) = 1 - sum_k w_k f(r_k) L_ppp(r_k) B(r_k)^N,
    so after one pass over the grid every N costs a dot product.
    """

    PANELS = 8
    NODES = 48

    def __init__(self, theta, net: NetworkParams, R_J, power_ratio=1.0, ghq_n=15):
        self.theta, self.net, self.R_J = theta, net, R_J
        self.power_ratio, self.ghq_n = power_ratio, ghq_n
        lam, alpha = net.lambda_T, net.alpha
        x, w = np.polynomial.legendre.leggauss(self.NODES)
        edges = np.linspace(0.0, r0_max(lam), self.PANELS + 1)
        half = np.diff(edges) / 2.0
        mid = (edges[1:] + edges[:-1]) / 2.0
        r0 = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        dens = 2.0 * math.pi * lam * r0 * np.exp(-lam * math.pi * r0 ** 2)
        base = weights * dens
        if net.p > 0:
            base = base * np.exp(-2.0 * math.pi * net.p * lam * ppp_exclusion_integral(r0, theta, alpha))
        self.r0, self.base = r0, base
        self.bpp = self._bpp_mean(R_J)

    def _bpp_mean(self, R_J):
        chi, cw = lognormal_nodes(self.net.sigma_chi, self.ghq_n, self.net.mu_chi)
        vals = bpp_disk_term(
            self.r0[:, None], self.theta, self.net.alpha, self.power_ratio, chi[None, :], R_J
        )
        return vals @ cw

    def with_radius(self, R_J):
        """Same network and r0 grid, different jammer disk."""
        other = object.__new__(type(self))
        other.__dict__.update(self.__dict__)
        other.R_J = R_J
        other.bpp = self._bpp_mean(R_J)
        return other

    def __call__(self, n_jammers):
        n = np.asarray(n_jammers, float)
        flat = n.ravel()
        vals = np.empty(flat.size)
        log_b = np.log(np.maximum(self.bpp, 1e-300))
        step = 4096
        for i in range(0, flat.size, step):
            block = flat[i:i + step]
            vals[i:i + step] = 1.0 - np.exp(block[:, None] * log_b[None, :]) @ self.base
        vals = np.clip(vals, 0.0, 1.0)
        return vals.reshape(n.shape) if n.ndim else float(vals[0])


def outage_fixed_grid(query: OutageQuery, ghq_n=15):
    """Outage by the fixed-grid evaluator (same formula as ghq mode)."""
    ev = OutageEvaluator(query.theta, query.net, query.jam.R_J, _ratio(query), ghq_n)
    return ev(query.jam.N_J)


def _outage_chunk(query):
    net, jam = query.net, query.jam
    radius = simulation_radius(net.lambda_T, net.p)
    alpha, theta = net.alpha, query.theta

    def run_block(rng, n):
        batch = sample_network_batch(net.lambda_T, net.p, radius, n, rng)
        h0 = rng.exponential(1.0, n)
        signal = net.P_T * h0 * (1.0 + batch.r0) ** (-alpha)
        hi = rng.exponential(1.0, batch.owner.size)
        interf = np.bincount(
            batch.owner, weights=net.P_T * hi * (1.0 + batch.interferer_r) ** (-alpha), minlength=n
        )
        if jam.N_J > 0:
            d = sample_jammer_batch(jam.N_J, jam.R_J, n, rng)
            g = rng.exponential(1.0, d.shape)
            chi = np.exp(rng.normal(net.mu_chi, net.sigma_chi, d.shape)) if net.sigma_chi > 0 else math.exp(net.mu_chi)
            interf = interf + (jam.P_J * chi * g * (1.0 + d) ** (-alpha)).sum(axis=1)
        return int(np.count_nonzero(signal < theta * interf)), batch.rejected

    return _mc.blocked(run_block, net.p * net.lambda_T * math.pi * radius ** 2 + jam.N_J)


def simulate_outage(query: OutageQuery, trials: int, seed: int, threads=None) -> EstimateWithCI:
    """Monte Carlo estimate of P(SIR < theta) with a binomial standard error."""
    if trials < 1000:
        raise DomainError("simulate_outage needs at least 1000 trials")
    hits, rejected = _mc.run_chunks(_outage_chunk(query), trials, seed, threads)
    return EstimateWithCI.from_counts(hits, trials, rejected)
