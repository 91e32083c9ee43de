"""Symbol error probability via characteristic functions, and its simulator.

The pairwise error probability is written with the Gil-Pelaez inversion of
the real part of the aggregate disturbance v = i_agg + j_agg + n. After
averaging over the Rayleigh serving gain the sine kernel becomes

    (sqrt(pi) / w_s) exp(-w^2 / w_s^2),   w_s = 4 (1+r0)^(a/2) / (sqrt(P_T) |D|),

which is finite at w = 0, so

    APEP = 1/2 - (1/pi) int_0^inf Phi_j(w) Phi_n(w) E_r0[(sqrt(pi)/w_s) e^{-w^2/w_s^2} Phi_i(w; r0)] dw.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np

from . import _mc
from ._mc import EstimateWithCI
from .channel import Constellation, make_constellation, ml_decide, sample_fading, sample_symbol
from .errors import DomainError
from .geometry import (
    JammerParams,
    NetworkParams,
    sample_jammer_batch,
    sample_network_batch,
    simulation_radius,
)
from .outage import r0_max
from .specfun import hyp1f1_array, lognormal_nodes

# exp(-w^2/4) = 1e-14
NOISE_CUTOFF = 2.0 * math.sqrt(14.0 * math.log(10.0))
OMEGA_OCTAVES = 40
OMEGA_NODES = 12
R0_NODES = 16
AWGN_ENVELOPE_NODES = 32


def char_noise(omega, sigma2=1.0):
    """Characteristic function of Re(n), n complex Gaussian of total variance sigma2."""
    omega = np.asarray(omega, float)
    out = np.exp(-sigma2 * omega ** 2 / 4.0)
    return out if out.ndim else float(out)


def _f_terms(alpha, y):
    """1F1(-2/a; 1-2/a; -y) and 1F1(-1/a; 1-1/a; -y)."""
    f2 = hyp1f1_array(-2.0 / alpha, 1.0 - 2.0 / alpha, -y)
    f1 = hyp1f1_array(-1.0 / alpha, 1.0 - 1.0 / alpha, -y)
    return f2, f1


def char_bs_interference(omega, r0, net: NetworkParams, constellation: Constellation = None):
    """Characteristic function of Re(i_agg) given the serving distance r0.

    Broadcasts over omega and r0. The exponent is normalized so that the
    function equals 1 at omega = 0.
    """
    constellation = constellation or make_constellation("BPSK")
    omega, r0 = np.broadcast_arrays(np.asarray(omega, float), np.asarray(r0, float))
    shape = omega.shape
    if net.p == 0:
        return np.ones(shape) if shape else 1.0
    x = (1.0 + r0).ravel()
    w = omega.ravel()
    mods, probs = constellation.unique_moduli()
    scale = w ** 2 * net.P_T * x ** (-net.alpha) / 4.0
    e2 = np.zeros_like(x)
    e1 = np.zeros_like(x)
    for m, pm in zip(mods, probs):
        f2, f1 = _f_terms(net.alpha, scale * m * m)
        e2 += pm * (f2 - 1.0)
        e1 += pm * (f1 - 1.0)
    c = math.pi * net.p * net.lambda_T
    out = np.exp(-c * (x * x * e2 - 2.0 * x * e1)).reshape(shape)
    return out if shape else float(out)


@lru_cache(maxsize=None)
def _envelope_rule(scheme):
    """|j|^2 values and probabilities of the jamming envelope."""
    if scheme == "AWGN":
        u, w = np.polynomial.laguerre.laggauss(AWGN_ENVELOPE_NODES)
        return u, w / w.sum()
    mods, probs = make_constellation(scheme).unique_moduli()
    return mods ** 2, probs


def jammer_term(omega, jam: JammerParams, sigma_chi, ghq_n=10, mu_chi=0.0, alpha=3.7):
    """Per-jammer factor E[cos(w Re(z))] averaged over the BPP disk, chi and |j|."""
    w = np.atleast_1d(np.asarray(omega, float))
    chi, cw = lognormal_nodes(sigma_chi, ghq_n, mu_chi)
    env, ew = _envelope_rule(jam.scheme)
    X = 1.0 + jam.R_J
    R2 = jam.R_J ** 2
    c = (w[:, None, None] ** 2 * jam.P_J / 4.0) * chi[None, :, None] * env[None, None, :]
    c = c.ravel()
    f2_in, f1_in = _f_terms(alpha, c)
    f2_out, f1_out = _f_terms(alpha, c * X ** (-alpha))
    term = (X * X * f2_out - f2_in) / R2 - 2.0 * (X * f1_out - f1_in) / R2
    term = np.clip(term, 0.0, 1.0).reshape(len(w), len(chi), len(env))
    # weights sum to 1 only up to rounding
    return np.clip(np.einsum("ijk,j,k->i", term, cw, ew), 0.0, 1.0)


def char_jammer(omega, jam: JammerParams, sigma_chi, ghq_n=10, mu_chi=0.0, alpha=3.7):
    """E over the jammer BPP of the characteristic function of Re(j_agg)."""
    omega_arr = np.asarray(omega, float)
    if jam.N_J == 0:
        out = np.ones(omega_arr.shape)
    else:
        out = jammer_term(omega_arr.ravel(), jam, sigma_chi, ghq_n, mu_chi, alpha) ** jam.N_J
        out = out.reshape(omega_arr.shape)
    return out if out.ndim else float(out)


def gaussian_bpp_variance(P_J, sigma_chi, R_J, alpha, mu_chi=0.0):
    """Received power of one jammer uniform on b(0, R_J): P_J E[chi] E[(1+d)^-a]."""
    if not (P_J > 0 and R_J > 0 and alpha > 2 and sigma_chi >= 0):
        raise DomainError("gaussian_bpp_variance needs positive P_J, R_J and alpha > 2")
    bracket = 1.0 - (1.0 + R_J) ** (1.0 - alpha) * (1.0 + R_J * (alpha - 1.0))
    return (
        2.0 * P_J * math.exp(mu_chi + sigma_chi ** 2 / 2.0)
        / (R_J ** 2 * (alpha - 2.0) * (alpha - 1.0)) * bracket
    )


def _geometric_panels(lo, hi, ratio, nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    n_panels = max(1, int(math.ceil(math.log(hi / lo) / math.log(ratio))))
    edges = np.concatenate([[0.0], lo * ratio ** np.arange(n_panels), [hi]])
    edges = np.unique(np.minimum(edges, hi))
    half = np.diff(edges) / 2.0
    mid = (edges[1:] + edges[:-1]) / 2.0
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def _r0_grid(lam):
    """Serving-distance nodes and density-weighted weights.

    Panels are geometric in 1 + r0, which tracks the sharp cut the serving
    Gaussian makes in r0 at large omega.
    """
    rmax = r0_max(lam)
    n_panels = int(math.ceil(math.log2(1.0 + rmax)))
    edges = np.minimum(2.0 ** np.arange(n_panels + 1), 1.0 + rmax) - 1.0
    x, w = np.polynomial.legendre.leggauss(R0_NODES)
    half = np.diff(edges) / 2.0
    mid = (edges[1:] + edges[:-1]) / 2.0
    r0 = (mid[:, None] + half[:, None] * x).ravel()
    wt = (half[:, None] * w).ravel()
    dens = 2.0 * math.pi * lam * r0 * np.exp(-lam * math.pi * r0 ** 2)
    return r0, wt * dens


def _omega_grid(omega_hi):
    lo = omega_hi * 2.0 ** (-OMEGA_OCTAVES)
    return _geometric_panels(lo, omega_hi, 2.0, OMEGA_NODES)


def apep(delta, net: NetworkParams, jam: JammerParams, ghq_n=10, constellation=None,
         jammer_model="exact", diagnostics=None):
    """Average pairwise error probability at symbol distance ``delta``.

    ``jammer_model="gaussian"`` swaps the jammer characteristic function for
    that of a complex Gaussian with the BPP's total received power.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    constellation = constellation or make_constellation("BPSK")
    if not math.isfinite(delta):
        return 0.0
    r0, rw = _r0_grid(net.lambda_T)
    ws = 4.0 * (1.0 + r0) ** (net.alpha / 2.0) / (math.sqrt(net.P_T) * delta)
    omega_hi = min(NOISE_CUTOFF / math.sqrt(net.noise_power), 6.0 * ws.max())
    om, ow = _omega_grid(omega_hi)

    gauss = np.exp(-(om[:, None] / ws[None, :]) ** 2) * (math.sqrt(math.pi) / ws[None, :])
    live = gauss * rw[None, :] > 1e-300
    phi_i = np.zeros_like(gauss)
    if live.any():
        phi_i[live] = char_bs_interference(
            np.broadcast_to(om[:, None], gauss.shape)[live],
            np.broadcast_to(r0[None, :], gauss.shape)[live],
            net, constellation,
        )
    g = (gauss * phi_i) @ rw

    if jammer_model == "gaussian":
        var = jam.N_J * gaussian_bpp_variance(jam.P_J, net.sigma_chi, jam.R_J, net.alpha, net.mu_chi)
        phi_j = np.exp(-var * om ** 2 / 4.0)
    elif jammer_model == "exact":
        phi_j = char_jammer(om, jam, net.sigma_chi, ghq_n, net.mu_chi, net.alpha)
    else:
        raise DomainError(f"unknown jammer model {jammer_model!r}")
    integral = float(np.sum(ow * g * phi_j * char_noise(om, net.noise_power)))
    raw = 0.5 - integral / math.pi
    value = min(max(raw, 0.0), 0.5)
    if diagnostics is not None:
        diagnostics["raw"] = raw
        if abs(raw - value) > 1e-9:
            diagnostics.setdefault("flags", []).append("clamped")
    return value


def asep(constellation, net, jam, mode="nn", ghq_n=10, diagnostics=None, **kw):
    """Average symbol error probability: union bound or nearest-neighbour form."""
    if isinstance(constellation, str):
        constellation = make_constellation(constellation)
    if constellation.label != "BPSK":
        msg = f"analytic ASEP for {constellation.label} is an approximation"
        warnings.warn(msg, stacklevel=2)
        if diagnostics is not None:
            diagnostics.setdefault("flags", []).append("approximate")
    cache = {}

    def pe(d):
        key = round(float(d), 12)
        if key not in cache:
            cache[key] = apep(d, net, jam, ghq_n, constellation, **kw)
        return cache[key]

    M = constellation.M
    if mode == "union":
        total = sum(pe(d) for m in range(M) for d in constellation.neighbor_distances(m))
    elif mode == "nn":
        total = sum(
            constellation.min_count[m] * pe(constellation.min_distance[m]) for m in range(M)
        )
    else:
        raise DomainError(f"unknown ASEP mode {mode!r}")
    return float(total / M)


@dataclass(frozen=True)
class SerQuery:
    net: NetworkParams
    jam: JammerParams
    victim_constellation: Constellation
    fading: str = "rayleigh"

    def __post_init__(self):
        if self.fading not in ("rayleigh", "none"):
            raise DomainError("fading must be 'rayleigh' or 'none'")


def _ser_chunk(query: SerQuery):
    net, jam, const = query.net, query.jam, query.victim_constellation
    radius = simulation_radius(net.lambda_T, net.p)
    faded = query.fading == "rayleigh"
    # amplitude exponent: a/2 with fading, a as printed for the line-of-sight model
    amp = net.alpha / 2.0 if faded else net.alpha
    sqrt_pt = math.sqrt(net.P_T)
    per_trial = net.p * net.lambda_T * math.pi * radius ** 2 + jam.N_J

    def gain(rng, size):
        return sample_fading(rng, size) if faded else np.ones(size)

    def run_block(rng, n):
        batch = sample_network_batch(net.lambda_T, net.p, radius, n, rng)
        idx = rng.integers(0, const.M, n)
        h0 = gain(rng, n)
        a0 = sqrt_pt * (1.0 + batch.r0) ** (-amp)
        y = a0 * h0 * const.symbols[idx]
        k = batch.owner.size
        si = sample_symbol(const, rng, k)
        contrib = sqrt_pt * gain(rng, k) * (1.0 + batch.interferer_r) ** (-amp) * si
        y = y + np.bincount(batch.owner, weights=contrib.real, minlength=n) \
            + 1j * np.bincount(batch.owner, weights=contrib.imag, minlength=n)
        if jam.N_J > 0:
            d = sample_jammer_batch(jam.N_J, jam.R_J, n, rng)
            chi = np.exp(rng.normal(net.mu_chi, net.sigma_chi, d.shape)) if net.sigma_chi > 0 \
                else math.exp(net.mu_chi)
            j = sample_symbol(jam.scheme, rng, d.shape)
            y = y + (np.sqrt(jam.P_J * chi) * gain(rng, d.shape) * (1.0 + d) ** (-amp) * j).sum(axis=1)
        y = y + math.sqrt(net.noise_power) * sample_fading(rng, n)
        z = y / (a0 * h0)
        return int(np.count_nonzero(ml_decide(z, const) != idx)), batch.rejected

    return _mc.blocked(run_block, per_trial)


def simulate_ser(query: SerQuery, trials: int, seed: int, threads=None) -> EstimateWithCI:
    """Monte Carlo symbol error rate of the ML receiver with perfect serving CSI."""
    if trials < 1000:
        raise DomainError("simulate_ser needs at least 1000 trials")
    hits, rejected = _mc.run_chunks(_ser_chunk(query), trials, seed, threads)
    return EstimateWithCI.from_counts(hits, trials, rejected)
