import math

import numpy as np
import pytest
from scipy import stats

from jamnet import geometry as g
from jamnet.errors import DomainError, EmptyNetworkError


def test_hex_density():
    assert g.HEX_500M_DENSITY == pytest.approx(4.6188e-6, rel=1e-4)


def test_effective_density_displacement():
    sigma = g.db_to_nat(6.0)
    lam = g.effective_density(1.0, sigma, 3.7)
    # lambda E[chi^(2/alpha)] with chi log-normal
    assert lam == pytest.approx(math.exp(2 * sigma ** 2 / 3.7 ** 2), rel=1e-15)
    assert g.effective_density(2.0, 0.0, 4.0) == 2.0


def test_effective_density_rejects_bad_alpha():
    with pytest.raises(DomainError):
        g.effective_density(1.0, 1.0, 2.0)


def test_jammer_radius_covers_requested_cells():
    lam = 1e-5
    R = g.jammer_radius(8, 2, lam)
    assert math.pi * R * R * lam * 2 == pytest.approx(8)


def test_network_params_validation():
    with pytest.raises(DomainError):
        g.NetworkParams(lambda_T=1e-5, p=1.5)
    with pytest.raises(DomainError):
        g.NetworkParams(lambda_T=0.0)
    with pytest.raises(DomainError):
        g.NetworkParams(lambda_T=1e-5, alpha=2.0)


def test_jammer_params_scaled_and_fixed():
    lam = 1e-5
    jam = g.JammerParams.scaled(0, 1, lam)
    assert jam.N_J == 0 and jam.R_J == pytest.approx(g.jammer_radius(1, 1, lam))
    fixed = g.JammerParams.fixed(10, 500.0, lam)
    assert fixed.N_Jc == pytest.approx(10 / (math.pi * 500.0 ** 2 * lam))
    with pytest.raises(DomainError):
        g.JammerParams(N_J=1, N_Jc=1, R_J=10, scheme="FSK")


def test_ppp_counts_are_poisson():
    rng = np.random.default_rng(1)
    counts = np.array([len(g.sample_ppp(0.01, 20.0, rng)) for _ in range(4000)])
    mean = 0.01 * math.pi * 400
    assert abs(counts.mean() - mean) < 4 * math.sqrt(mean / counts.size)
    assert abs(counts.var() / mean - 1) < 0.1


def test_bpp_radial_law():
    rng = np.random.default_rng(2)
    pts = g.sample_bpp(20000, 3.0, rng)
    # P(r <= t) = (t/R)^2
    res = stats.kstest(pts.r, lambda t: np.clip(t / 3.0, 0, 1) ** 2)
    assert res.pvalue > 1e-3
    assert len(pts) == 20000


def test_nearest_distance_empty():
    with pytest.raises(EmptyNetworkError):
        g.nearest_distance(g.PointPattern(np.array([]), np.array([])))


def test_batch_serving_distance_law():
    lam = 1e-4
    rng = np.random.default_rng(3)
    R = g.simulation_radius(lam, 0.5)
    batch = g.sample_network_batch(lam, 0.5, R, 20000, rng)
    # nearest point of a PPP: P(r0 > t) = exp(-lam pi t^2)
    res = stats.kstest(batch.r0, lambda t: -np.expm1(-lam * math.pi * t ** 2))
    assert res.pvalue > 1e-3
    assert np.all(batch.interferer_r >= batch.r0[batch.owner])
    assert np.all(batch.interferer_r <= R)


def test_batch_active_interferer_count():
    lam, p = 1e-4, 0.3
    rng = np.random.default_rng(4)
    R = g.simulation_radius(lam, p)
    batch = g.sample_network_batch(lam, p, R, 20000, rng)
    per_trial = np.bincount(batch.owner, minlength=20000)
    mean = p * (lam * math.pi * R * R - 1)
    assert abs(per_trial.mean() - mean) < 4 * math.sqrt(mean / 20000)


def test_batch_matches_direct_ppp_sampler():
    # the conditional construction against brute-force sampling and sorting
    lam, p, R = 1e-3, 0.5, 60.0
    rng = np.random.default_rng(5)
    direct_r0, direct_k = [], []
    for _ in range(4000):
        pts = g.sample_ppp(lam, R, rng)
        if len(pts) == 0:
            continue
        r = np.sort(pts.r)
        direct_r0.append(r[0])
        direct_k.append(int((rng.random(len(r) - 1) < p).sum()))
    batch = g.sample_network_batch(lam, p, R, 4000, np.random.default_rng(6))
    assert stats.ks_2samp(direct_r0, batch.r0).pvalue > 1e-3
    k = np.bincount(batch.owner, minlength=4000)
    assert abs(np.mean(direct_k) - k.mean()) < 4 * math.sqrt(k.var() * 2 / 4000)


def test_simulation_radius_floor():
    lam = 1e-4
    assert g.simulation_radius(lam, 1.0) == pytest.approx(20 / math.sqrt(lam))
    assert g.simulation_radius(lam, 0.001) > 20 / math.sqrt(lam)


def test_jammer_batch_shape_and_range():
    d = g.sample_jammer_batch(5, 10.0, 100, np.random.default_rng(0))
    assert d.shape == (100, 5)
    assert d.min() >= 0 and d.max() <= 10.0
