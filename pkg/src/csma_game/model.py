"""Slot-level probability kernels for a slotted multiaccess channel.

Every node transmits independently in each slot with its own access
probability. A slot with no transmitter is idle, a slot with exactly one
transmitter is a success, and a slot with two or more is a collision; each
outcome has its own duration. These kernels are the building blocks for
the throughput and age metrics and for the game layered on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DSRC = "dsrc"
WIFI = "wifi"
PLAYERS = (DSRC, WIFI)


@dataclass(frozen=True)
class SlotLengths:
    """Durations of the three slot outcomes."""

    idle: float
    success: float
    collision: float

    def __post_init__(self) -> None:
        if not (self.idle > 0.0 and self.success > 0.0 and self.collision > 0.0):
            raise ValueError("slot lengths must be strictly positive")

    @classmethod
    def from_beta(cls, beta: float) -> "SlotLengths":
        """Short idle slots of length beta, success/collision slots of 1 + beta."""
        if not 0.0 < beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {beta}")
        return cls(idle=beta, success=1.0 + beta, collision=1.0 + beta)


@dataclass(frozen=True)
class NetworkConfig:
    """A two-network channel-sharing instance.

    ``n_dsrc`` nodes care about age, ``n_wifi`` nodes care about throughput.
    Either count may be zero (a lone-network baseline) but not both. The
    weights price wasted slots: ``w_idle`` per idle slot probability and
    ``w_col`` per collision probability.
    """

    n_dsrc: int
    n_wifi: int
    beta: float
    w_idle: float = 0.0
    w_col: float = 0.0

    def __post_init__(self) -> None:
        if self.n_dsrc < 0 or self.n_wifi < 0:
            raise ValueError("node counts must be non-negative")
        if self.n_dsrc + self.n_wifi < 1:
            raise ValueError("need at least one node across both networks")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.w_idle < 0.0 or self.w_col < 0.0:
            raise ValueError("cost weights must be non-negative")

    @property
    def n_total(self) -> int:
        return self.n_dsrc + self.n_wifi

    def slot_lengths(self) -> SlotLengths:
        return SlotLengths.from_beta(self.beta)


@dataclass(frozen=True)
class StrategyPair:
    """One access probability per network.

    A component of 0 stands in for a network with no nodes (its
    contention factor is then 1); the solvers themselves only ever search
    strictly positive probabilities.
    """

    tau_d: float
    tau_w: float

    def __post_init__(self) -> None:
        for name, tau in (("tau_d", self.tau_d), ("tau_w", self.tau_w)):
            if not 0.0 <= tau < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {tau}")


@dataclass(frozen=True)
class AccessVector:
    """Per-node access probabilities plus each node's network tag.

    tau = 1 is admitted so that a deterministic always-transmit node can be
    expressed (useful as a degenerate sanity case); tau = 0 models nodes of
    an absent network.
    """

    taus: tuple[float, ...]
    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.taus) != len(self.tags):
            raise ValueError("taus and tags must have equal length")
        if not self.taus:
            raise ValueError("access vector must contain at least one node")
        for tau in self.taus:
            if not 0.0 <= tau <= 1.0:
                raise ValueError(f"access probability out of [0, 1]: {tau}")
        for tag in self.tags:
            if tag not in PLAYERS:
                raise ValueError(f"unknown network tag: {tag!r}")

    @classmethod
    def homogeneous(cls, config: NetworkConfig, pair: StrategyPair) -> "AccessVector":
        """All DSRC nodes at tau_d, all WiFi nodes at tau_w."""
        taus = (pair.tau_d,) * config.n_dsrc + (pair.tau_w,) * config.n_wifi
        tags = (DSRC,) * config.n_dsrc + (WIFI,) * config.n_wifi
        return cls(taus=taus, tags=tags)

    def __len__(self) -> int:
        return len(self.taus)


def _check_index(v: AccessVector, i: int) -> None:
    if not 0 <= i < len(v):
        raise IndexError(f"node index {i} out of range for {len(v)} nodes")


def _exclusive_idle_products(taus: tuple[float, ...]) -> list[float]:
    """prod_{j != i} (1 - tau_j) for every i, via prefix/suffix products.

    Division-free so tau_j = 1 entries are handled exactly.
    """
    n = len(taus)
    pref = [1.0] * (n + 1)
    for k in range(n):
        pref[k + 1] = pref[k] * (1.0 - taus[k])
    suf = [1.0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suf[k] = suf[k + 1] * (1.0 - taus[k])
    return [pref[i] * suf[i + 1] for i in range(n)]


def joint_idle_prob(v: AccessVector) -> float:
    """Probability that nobody transmits in a slot: prod_i (1 - tau_i)."""
    return math.prod(1.0 - tau for tau in v.taus)


def idle_prob_excluding(v: AccessVector, i: int) -> float:
    """Probability that no node other than i transmits: prod_{j != i} (1 - tau_j)."""
    _check_index(v, i)
    return math.prod(1.0 - tau for j, tau in enumerate(v.taus) if j != i)


def success_prob_node(v: AccessVector, i: int) -> float:
    """Probability that node i alone transmits: tau_i * prod_{j != i} (1 - tau_j)."""
    _check_index(v, i)
    return v.taus[i] * idle_prob_excluding(v, i)


def success_prob_total(v: AccessVector) -> float:
    """Probability that exactly one node transmits, summed over senders."""
    excl = _exclusive_idle_products(v.taus)
    return sum(tau * ex for tau, ex in zip(v.taus, excl))


def success_prob_excluding(v: AccessVector, i: int) -> float:
    """Probability that exactly one node transmits and it is not node i."""
    _check_index(v, i)
    excl = _exclusive_idle_products(v.taus)
    return sum(tau * ex for j, (tau, ex) in enumerate(zip(v.taus, excl)) if j != i)


def expected_slot_length(v: AccessVector, s: SlotLengths) -> float:
    """Mean slot duration: the idle/success/collision mix weighted by length."""
    p_idle = joint_idle_prob(v)
    p_succ = success_prob_total(v)
    return s.idle * p_idle + s.success * p_succ + s.collision * (1.0 - p_idle - p_succ)
