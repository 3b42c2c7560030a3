"""First-order radio energy model and round-based lifetime accounting."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Sequence

from .errors import DomainError


@dataclass(frozen=True)
class EnergyParams:
    """Transceiver and traffic constants.

    Defaults are the simulation values: 512-bit packets, 50 nJ/bit
    electronics, 10 pJ/bit/m^gamma amplifier, gamma = 4.8, 100/100/10
    transmitted/received/aggregated packets per round, 15.4 J per node.
    """

    beta: float = 50e-9  # J/bit, receiver electronics
    eps1: float = 50e-9  # J/bit, transmitter electronics
    eps2: float = 10e-12  # J/bit/m^gamma, amplifier
    gamma: float = 4.8
    packet_len: float = 512.0  # bits
    t_rate: float = 100.0  # packets transmitted per round
    r_rate: float = 100.0  # packets received per round
    a_rate: float = 10.0  # packets aggregated per round
    j_agg: float = 50e-7  # J per aggregated packet
    e_init: float = 15.4  # J per node
    k_traffic: float = 1.0  # relay load multiplier on received traffic

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"energy parameter {f.name} must be finite and >= 0, got {v!r}")
        if self.gamma < 2:
            raise DomainError(f"path-loss exponent must be >= 2, got {self.gamma}")
        if self.e_init <= 0:
            raise DomainError("initial energy must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict | None) -> "EnergyParams":
        doc = dict(doc or {})
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise DomainError(f"unknown energy parameters: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in doc.items()})


@dataclass(frozen=True)
class EnergyReport:
    j_rx: float
    j_tx: float
    e_p: float
    e_r: float


@dataclass(frozen=True)
class LifetimeReport:
    i_r: float  # rounds with first-phase relays only
    t_r: float  # rounds after second-phase relays are added
    b1: float
    b2: float
    e_extra: float  # t_r - i_r, may be negative


def rx_energy(p: EnergyParams) -> float:
    """Energy to receive one packet."""
    return p.packet_len * p.beta


def tx_energy(p: EnergyParams, d: float) -> float:
    """Energy to transmit one packet over ``d`` meters."""
    if d < 0:
        raise DomainError("distance must be non-negative")
    return p.packet_len * (p.eps1 + p.eps2 * d**p.gamma)


def node_energy_per_round(p: EnergyParams, mu_w: float, distance_scale: float = 1.0) -> float:
    """Per-node burn per round with hop length ``mu_w * distance_scale`` meters.

    ``mu_w`` is the (padded) average inter-node distance; the harness passes
    it in hops together with the grid cell edge as ``distance_scale``.
    """
    if mu_w < 0:
        raise DomainError("mu_w must be non-negative")
    return p.t_rate * tx_energy(p, mu_w * distance_scale) + p.k_traffic * p.r_rate * rx_energy(p) + p.a_rate * p.j_agg


def energy_report(p: EnergyParams, d: float, consumed_rounds: float = 0.0) -> EnergyReport:
    e_p = node_energy_per_round(p, d)
    return EnergyReport(
        j_rx=rx_energy(p),
        j_tx=tx_energy(p, d),
        e_p=e_p,
        e_r=remaining_energy(p, consumed_rounds, d),
    )


def remaining_energy(p: EnergyParams, consumed_rounds: float, d: float = 0.0) -> float:
    """Energy left in one node after ``consumed_rounds`` rounds at hop length ``d``; floored at 0."""
    if consumed_rounds < 0:
        raise DomainError("consumed_rounds must be non-negative")
    left = p.e_init - consumed_rounds * node_energy_per_round(p, d)
    return max(0.0, left)


def lifetime_rounds(b_total: float, per_node: Sequence[float]) -> float:
    """Rounds until the pooled energy ``b_total`` is spent at the summed per-node burn."""
    if len(per_node) == 0:
        raise DomainError("need at least one node")
    if any(e < 0 for e in per_node):
        raise DomainError("per-node burn must be non-negative")
    burn = float(sum(per_node))
    if burn <= 0:
        raise DomainError("total burn per round is zero")
    return b_total / burn


def lifetime_report(
    p: EnergyParams,
    n_backbone: int,
    n_second: int,
    mu_w_backbone: float,
    mu_w_final: float,
    distance_scale: float = 1.0,
) -> LifetimeReport:
    """Lifetime before and after second-phase relays, every node starting at ``e_init``."""
    b1 = n_backbone * p.e_init
    b2 = n_second * p.e_init
    i_r = lifetime_rounds(b1, [node_energy_per_round(p, mu_w_backbone, distance_scale)] * n_backbone)
    t_r = lifetime_rounds(b1 + b2, [node_energy_per_round(p, mu_w_final, distance_scale)] * (n_backbone + n_second))
    return LifetimeReport(i_r=i_r, t_r=t_r, b1=b1, b2=b2, e_extra=t_r - i_r)
