import math

import pytest

from jamnet import retx
from jamnet.errors import DomainError
from jamnet.geometry import JammerParams, NetworkParams


def test_activity_closed_forms():
    assert retx.steady_state_activity(0.1, 0.5, 0) == pytest.approx(0.1)
    # (1 - P^(D+1)) / (1 - P) attempts
    assert retx.steady_state_activity(0.1, 0.5, 2) == pytest.approx(1 - 0.9 ** 1.75)
    assert retx.steady_state_activity(0.1, 1.0, 3) == pytest.approx(1 - 0.9 ** 4)
    assert retx.steady_state_activity(0.1, 0.0, 5) == pytest.approx(0.1)


def test_drop_probability():
    assert retx.drop_probability(0.5, 0) == 0.5
    assert retx.drop_probability(0.5, 3) == 0.0625
    with pytest.raises(DomainError):
        retx.drop_probability(1.5, 1)


def test_activity_monotone_in_D():
    vals = [retx.steady_state_activity(0.05, 0.7, d) for d in range(10)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1.0


@pytest.mark.parametrize("args", [(-0.1, 0.5, 1), (0.1, 0.5, -1), (0.1, 0.5, 1.5), (0.1, 2.0, 1)])
def test_activity_domain(args):
    with pytest.raises(DomainError):
        retx.steady_state_activity(*args)


def test_params_validation():
    with pytest.raises(DomainError):
        retx.RetxParams(coupling="closed")
    with pytest.raises(DomainError):
        retx.RetxParams(p=0.0)


def test_profile_fixed_point_is_self_consistent():
    net = NetworkParams.defaults()
    jam = JammerParams.scaled(4, 1, net.lambda_T)
    rows = retx.retx_profile(net, jam, 1.0, retx.RetxParams(0.01), [0, 4, 8])
    assert rows[0].p_s == pytest.approx(0.01)
    for row in rows:
        assert row.converged and not row.flags
        assert row.p_s == pytest.approx(retx.steady_state_activity(0.01, row.P_o, row.D), abs=1e-7)
        assert row.delta == pytest.approx(row.P_o ** (row.D + 1))
    assert rows[1].p_s < rows[2].p_s


def test_open_loop_below_fixed_point():
    net = NetworkParams.defaults()
    jam = JammerParams.scaled(4, 4, net.lambda_T)
    op = retx.retx_profile(net, jam, 1.0, retx.RetxParams(0.01, "open_loop"), [8])[0]
    fp = retx.retx_profile(net, jam, 1.0, retx.RetxParams(0.01, "fixed_point"), [8])[0]
    assert op.p_s <= fp.p_s
    assert op.iterations == 0
    assert math.isclose(op.delta, op.P_o ** 9)
