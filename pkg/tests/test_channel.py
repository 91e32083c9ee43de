import math

import numpy as np
import pytest

from jamnet import channel as c
from jamnet.errors import DomainError


@pytest.mark.parametrize("label", c.CONSTELLATIONS)
def test_unit_average_energy(label):
    s = c.make_constellation(label).symbols
    assert np.mean(np.abs(s) ** 2) == pytest.approx(1.0, abs=1e-15)


def test_neighbor_constants():
    bpsk, qpsk, qam = (c.make_constellation(k) for k in c.CONSTELLATIONS)
    assert bpsk.d_min == 2.0 and bpsk.n_avg == 1.0
    assert qpsk.d_min == pytest.approx(math.sqrt(2)) and qpsk.n_avg == 2.0
    assert qam.d_min == pytest.approx(2 / math.sqrt(10)) and qam.n_avg == 3.0


def test_qam16_neighbor_counts():
    qam = c.make_constellation("QAM16")
    assert sorted(np.bincount(qam.min_count).nonzero()[0]) == [2, 3, 4]
    assert np.bincount(qam.min_count)[[2, 3, 4]].tolist() == [4, 8, 4]


def test_unique_moduli():
    mods, probs = c.make_constellation("QAM16").unique_moduli()
    assert len(mods) == 3
    assert probs.tolist() == [0.25, 0.5, 0.25]
    assert np.sum(probs * mods ** 2) == pytest.approx(1.0)


def test_unknown_constellation():
    with pytest.raises(DomainError):
        c.make_constellation("PAM4")


def test_path_loss_finite_at_origin():
    assert c.path_loss(0.0, 3.7) == 1.0
    assert c.path_loss(1.0, 2.0) == pytest.approx(0.25)


def test_fading_unit_power_and_circular():
    h = c.sample_fading(np.random.default_rng(0), 200000)
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, abs=0.01)
    assert abs(np.mean(h.real * h.imag)) < 0.01
    assert abs(np.mean(h ** 2)) < 0.01


def test_shadowing_moments():
    chi = c.sample_shadowing(0.0, 1.38, np.random.default_rng(1), 400000)
    assert np.mean(np.log(chi)) == pytest.approx(0.0, abs=0.01)
    assert np.std(np.log(chi)) == pytest.approx(1.38, rel=0.01)
    assert c.sample_shadowing(0.5, 0.0, None) == math.exp(0.5)


def test_noise_variance():
    n = c.sample_noise(4.0, np.random.default_rng(2), 200000)
    assert np.var(n.real) == pytest.approx(2.0, rel=0.02)
    with pytest.raises(DomainError):
        c.sample_noise(0.0, np.random.default_rng(2))


def test_symbol_sampler_uniform():
    s = c.sample_symbol("QPSK", np.random.default_rng(3), 40000)
    _, counts = np.unique(s, return_counts=True)
    assert len(counts) == 4
    assert np.all(np.abs(counts / 40000 - 0.25) < 0.01)


@pytest.mark.parametrize("q", [0, 1, 2, 3, 5])
def test_jamming_moments(q):
    assert c.jamming_moment("BPSK", q) == 1.0
    assert c.jamming_moment("QPSK", q) == pytest.approx(1.0)
    assert c.jamming_moment("AWGN", q) == math.factorial(q)
    j = c.sample_symbol("AWGN", np.random.default_rng(q), 400000)
    if q <= 3:
        assert np.mean(np.abs(j) ** (2 * q)) == pytest.approx(math.factorial(q), rel=0.05)


def test_qam16_moment():
    assert c.jamming_moment("QAM16", 2) == pytest.approx(1.32)


def test_ml_decide_noiseless():
    for label in c.CONSTELLATIONS:
        const = c.make_constellation(label)
        assert np.array_equal(c.ml_decide(const.symbols, const), np.arange(const.M))


def test_ml_decide_boundaries():
    bpsk = c.make_constellation("BPSK")
    assert c.ml_decide(np.array([0.1, -0.1, 5j + 0.01]), bpsk).tolist() == [0, 1, 0]
