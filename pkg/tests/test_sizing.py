import math

import numpy as np
import pytest

from jamnet.errors import DomainError
from jamnet.geometry import JammerParams, NetworkParams
from jamnet.outage import OutageQuery, outage_probability
from jamnet.sizing import SizingPolicy, min_jammers


def fixed_policy(net, target=0.9, scale=10.0):
    return SizingPolicy("fixed_RJ", target, 1.0, R_J=scale / math.sqrt(net.lambda_T))


def template(net, R_J=1.0):
    return JammerParams(1, 1.0, R_J)


@pytest.mark.parametrize("target", [0.3, 0.6, 0.75])
def test_bisect_matches_scan(net, target):
    policy = fixed_policy(net, target, 3.0)
    a = min_jammers(net, template(net), policy, 400, "bisect")
    b = min_jammers(net, template(net), policy, 400, "scan")
    assert a.n_star == b.n_star
    assert a.outage == pytest.approx(b.outage, abs=1e-12)


def test_scan_result_is_closest(net):
    policy = SizingPolicy("scaled_RJ", 0.68, 1.0, 1.0)
    res = min_jammers(net, template(net), policy, 60)
    assert np.argmin(np.abs(res.curve - 0.68)) == res.n_star
    assert not res.saturated


def test_curve_matches_outage(net):
    policy = SizingPolicy("scaled_RJ", 0.68, 1.0, 1.0)
    res = min_jammers(net, template(net), policy, 8)
    for n in (1, 4, 8):
        q = OutageQuery(1.0, net, JammerParams.scaled(n, 1.0, net.lambda_T))
        assert res.curve[n] == pytest.approx(outage_probability(q, "ghq"), abs=1e-9)


def test_saturation_flag(net):
    res = min_jammers(net, template(net), SizingPolicy("scaled_RJ", 0.9, 1.0, 1.0), 30)
    assert res.saturated and res.n_star == 30 and res.flags == ["saturated"]
    fixed = min_jammers(net, template(net), fixed_policy(net), 50)
    assert fixed.saturated and fixed.n_star == 50


def test_zero_jammers_when_target_already_met():
    net = NetworkParams.defaults(p=1.0)
    res = min_jammers(net, template(net), fixed_policy(net, 0.05), 100)
    assert res.n_star == 0


def test_fixed_radius_decreases_with_load():
    stars = []
    for p in (0.01, 0.1, 1.0):
        net = NetworkParams.defaults(p=p)
        stars.append(min_jammers(net, template(net), fixed_policy(net), 100000).n_star)
    assert stars[0] > stars[1] > stars[2]


def test_policy_validation(net):
    with pytest.raises(DomainError):
        SizingPolicy("fixed_RJ", 0.9)
    with pytest.raises(DomainError):
        SizingPolicy("grid", 0.9)
    with pytest.raises(DomainError):
        min_jammers(net, template(net), SizingPolicy(), 10, "bisect")
    with pytest.raises(DomainError):
        min_jammers(net, template(net), SizingPolicy(), 0)
