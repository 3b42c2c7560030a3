import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ildcc.energy import (
    EnergyParams,
    energy_report,
    lifetime_report,
    lifetime_rounds,
    node_energy_per_round,
    remaining_energy,
    rx_energy,
    tx_energy,
)
from ildcc.errors import DomainError

P = EnergyParams()
# 512 * (50e-9 + 1e-11 * 100**4.8), evaluated with mpmath at 30 digits
TX_100M = 20.3831127323390592


def test_rx_tx_examples():
    assert rx_energy(P) == pytest.approx(2.56e-5, rel=1e-12)
    assert tx_energy(P, 0.0) == pytest.approx(2.56e-5, rel=1e-12)
    assert tx_energy(P, 100.0) == pytest.approx(TX_100M, rel=1e-12)
    with pytest.raises(DomainError):
        tx_energy(P, -1.0)


def test_zero_length_packets_cost_nothing():
    p = dataclasses.replace(P, packet_len=0.0)
    assert rx_energy(p) == 0.0
    assert tx_energy(p, 250.0) == 0.0


def test_per_round_burn_at_zero_distance():
    # 100 tx + 100 rx at 2.56e-5 each, plus 10 aggregations at 5e-6
    assert node_energy_per_round(P, 0.0) == pytest.approx(0.00517, rel=1e-12)
    assert node_energy_per_round(dataclasses.replace(P, t_rate=0.0), 3.0) == pytest.approx(0.00261)
    with pytest.raises(DomainError):
        node_energy_per_round(P, -0.1)


def test_distance_scale_equivalent_to_meters():
    assert node_energy_per_round(P, 0.9, 100.0) == pytest.approx(node_energy_per_round(P, 90.0))


def test_remaining_energy():
    assert remaining_energy(P, 0) == P.e_init
    assert remaining_energy(P, 1000) == pytest.approx(15.4 - 5.17)
    assert remaining_energy(P, 10_000) == 0.0
    with pytest.raises(DomainError):
        remaining_energy(P, -1)


def test_energy_report_fields():
    rep = energy_report(P, 0.0, consumed_rounds=100)
    assert rep.j_rx == rep.j_tx == pytest.approx(2.56e-5)
    assert rep.e_p == pytest.approx(0.00517)
    assert rep.e_r == pytest.approx(15.4 - 0.517)


def test_lifetime_rounds_examples():
    assert lifetime_rounds(10.0, [1.0, 1.0]) == 5.0
    assert lifetime_rounds(0.0, [2.0]) == 0.0
    with pytest.raises(DomainError):
        lifetime_rounds(1.0, [])
    with pytest.raises(DomainError):
        lifetime_rounds(1.0, [0.0, 0.0])
    with pytest.raises(DomainError):
        lifetime_rounds(1.0, [-1.0, 2.0])


def test_lifetime_report_pooled():
    rep = lifetime_report(P, 11, 9, 0.0, 0.0)
    assert rep.b1 == pytest.approx(11 * 15.4)
    assert rep.b2 == pytest.approx(9 * 15.4)
    # equal burn everywhere: pooled lifetime is one node's lifetime
    assert rep.i_r == pytest.approx(15.4 / 0.00517)
    assert rep.t_r == pytest.approx(rep.i_r)
    assert rep.e_extra == pytest.approx(0.0, abs=1e-9)


def test_lifetime_grows_when_average_distance_shrinks():
    rep = lifetime_report(P, 11, 29, 1.2, 0.9, 100.0)
    assert rep.t_r > rep.i_r
    assert rep.e_extra == pytest.approx(rep.t_r - rep.i_r)


def test_params_validation():
    with pytest.raises(DomainError):
        EnergyParams(gamma=1.5)
    with pytest.raises(DomainError):
        EnergyParams(beta=-1e-9)
    with pytest.raises(DomainError):
        EnergyParams(e_init=0.0)
    with pytest.raises(DomainError):
        EnergyParams(eps2=float("nan"))
    with pytest.raises(DomainError):
        EnergyParams.from_dict({"gama": 3})
    assert EnergyParams.from_dict(P.to_dict()) == P
    assert EnergyParams.from_dict({"k_traffic": 4}).k_traffic == 4.0


nonneg = st.floats(0, 1e3, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(a=nonneg, b=nonneg)
def test_tx_monotone_in_distance(a, b):
    lo, hi = sorted((a, b))
    assert tx_energy(P, lo) <= tx_energy(P, hi)


@settings(max_examples=100, deadline=None)
@given(mu=st.floats(0, 5), field=st.sampled_from(["k_traffic", "t_rate", "r_rate", "a_rate"]), x=st.floats(0, 50), y=st.floats(0, 50))
def test_burn_monotone_in_load(mu, field, x, y):
    lo, hi = sorted((x, y))
    e_lo = node_energy_per_round(dataclasses.replace(P, **{field: lo}), mu, 100.0)
    e_hi = node_energy_per_round(dataclasses.replace(P, **{field: hi}), mu, 100.0)
    assert e_lo <= e_hi * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(mu=st.floats(0, 3), c=st.floats(0.01, 100))
def test_burn_homogeneous_in_rates(mu, c):
    base = node_energy_per_round(P, mu, 100.0)
    scaled = dataclasses.replace(P, t_rate=c * P.t_rate, r_rate=c * P.r_rate, a_rate=c * P.a_rate)
    assert node_energy_per_round(scaled, mu, 100.0) == pytest.approx(c * base, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(k1=st.floats(1, 20), k2=st.floats(1, 20), mu=st.floats(0.5, 2))
def test_lifetime_decreases_with_traffic(k1, k2, mu):
    lo, hi = sorted((k1, k2))
    t_lo = lifetime_report(dataclasses.replace(P, k_traffic=lo), 11, 20, mu, mu, 100.0).t_r
    t_hi = lifetime_report(dataclasses.replace(P, k_traffic=hi), 11, 20, mu, mu, 100.0).t_r
    assert t_hi <= t_lo * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(
    n_bb=st.integers(1, 40),
    n_2=st.integers(0, 60),
    mu=st.floats(0, 3),
    c=st.floats(1e-3, 1e3),
)
def test_lifetime_ratio_invariance(n_bb, n_2, mu, c):
    # pooled lifetime with equal burn is one node's e_init / E_p, whatever the node count
    rep = lifetime_report(P, n_bb, n_2, mu, mu, 100.0)
    single = P.e_init / node_energy_per_round(P, mu, 100.0)
    assert rep.t_r == pytest.approx(single, rel=1e-12)
    assert rep.i_r == pytest.approx(single, rel=1e-12)
    # scaling every energy quantity by c leaves rounds unchanged
    scaled = dataclasses.replace(
        P, beta=c * P.beta, eps1=c * P.eps1, eps2=c * P.eps2, j_agg=c * P.j_agg, e_init=c * P.e_init
    )
    assert lifetime_report(scaled, n_bb, n_2, mu, mu, 100.0).t_r == pytest.approx(rep.t_r, rel=1e-9)
