"""Best responses, exhaustive Nash enumeration, and pessimistic Stackelberg.

Everything here works on the finite strategy grid: best responses keep all
ties near the column maximum, Nash enumeration scans every grid pair for
mutual best responses (so multiple equilibria are found, not just one),
and the Stackelberg leader maximizes its worst payoff over the follower's
tie set. Lone-network optima additionally refine off the grid.

Tie handling: the default ``eps_tie = 0`` keeps exact maxima only (a
constant column still yields the whole grid, since every entry equals the
maximum); the reference equilibria, including the costed game's multiple
equilibria, are all exact mutual maxima, so nothing depends on a fuzz
factor. A positive ``eps_tie`` is available for sensitivity studies and is
measured relative to each opponent column's payoff spread - the rescaled
age surface can span ten orders of magnitude, which makes any absolute
tolerance meaningless across configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import GridSpec, PayoffSurfaces
from .metrics import _aoi_expr, _throughput_expr
from .model import DSRC, WIFI, NetworkConfig, StrategyPair


def _require_player(tag: str) -> None:
    if tag not in (DSRC, WIFI):
        raise ValueError(f"player must be {DSRC!r} or {WIFI!r}, got {tag!r}")


@dataclass(frozen=True)
class BestResponseMap:
    """Tie-aware best replies of one player to every opponent grid value.

    ``mask[r, o]`` is True when ``responder_taus[r]`` is within
    ``eps_tie * (payoff spread of column o)`` of the best payoff against
    ``opponent_taus[o]``.
    """

    responder: str
    responder_taus: np.ndarray = field(repr=False)
    opponent_taus: np.ndarray = field(repr=False)
    mask: np.ndarray = field(repr=False)
    eps_tie: float

    def response_set(self, opponent_tau: float) -> tuple[float, ...]:
        o = int(np.argmin(np.abs(self.opponent_taus - opponent_tau)))
        if abs(self.opponent_taus[o] - opponent_tau) > 1e-9:
            raise ValueError(f"{opponent_tau} is not an opponent grid value")
        return tuple(float(t) for t in self.responder_taus[self.mask[:, o]])


@dataclass(frozen=True)
class NashResult:
    """A mutual-best-response grid pair with its raw age/throughput values."""

    pair: StrategyPair
    age: float
    throughput: float
    payoff_dsrc: float
    payoff_wifi: float


@dataclass(frozen=True)
class StackelbergResult:
    """Leader's max-min strategy, the worst-case follower reply, and values there."""

    leader: str
    pair: StrategyPair
    age: float
    throughput: float
    leader_guaranteed_payoff: float


@dataclass(frozen=True)
class SingleNetworkOptimum:
    """Best lone-network strategy: minimal age (dsrc) or maximal throughput (wifi)."""

    kind: str
    n: int
    tau_star: float
    value: float


def _tie_mask(u: np.ndarray, axis: int, eps_tie: float) -> np.ndarray:
    """True where u is within eps_tie of the max, relative to the spread along axis."""
    if eps_tie < 0.0:
        raise ValueError("eps_tie must be non-negative")
    top = u.max(axis=axis, keepdims=True)
    spread = top - u.min(axis=axis, keepdims=True)
    return u >= top - eps_tie * spread


def best_response(responder: str, surfaces: PayoffSurfaces, eps_tie: float = 0.0) -> BestResponseMap:
    """All responder strategies tied with the best, per opponent value."""
    _require_player(responder)
    pts = surfaces.grid.points()
    if responder == DSRC:
        mask = _tie_mask(surfaces.payoff_dsrc_grid(), 0, eps_tie)
    else:
        mask = _tie_mask(surfaces.payoff_wifi_grid(), 1, eps_tie).T
    return BestResponseMap(
        responder=responder, responder_taus=pts, opponent_taus=pts, mask=mask, eps_tie=eps_tie
    )


def enumerate_nash(surfaces: PayoffSurfaces, eps_tie: float = 0.0) -> list[NashResult]:
    """Every grid pair at which both strategies are mutual best responses.

    The list is ordered lexicographically by (tau_d, tau_w). An empty list
    is possible in principle and is reported as such, not raised.
    """
    u_d = surfaces.payoff_dsrc_grid()
    u_w = surfaces.payoff_wifi_grid()
    br_d = _tie_mask(u_d, 0, eps_tie)
    br_w = _tie_mask(u_w, 1, eps_tie)
    pts = surfaces.grid.points()
    results = []
    for i, j in zip(*np.nonzero(br_d & br_w)):
        results.append(
            NashResult(
                pair=StrategyPair(tau_d=float(pts[i]), tau_w=float(pts[j])),
                age=float(surfaces.age[i, j]),
                throughput=float(surfaces.throughput[i, j]),
                payoff_dsrc=float(u_d[i, j]),
                payoff_wifi=float(u_w[i, j]),
            )
        )
    return results


def solve_stackelberg(leader: str, surfaces: PayoffSurfaces, eps_tie: float = 0.0) -> StackelbergResult:
    """Leader strategy maximizing the minimum leader payoff over follower ties.

    Ties in the leader's max-min value break toward the smallest strategy;
    the reported pair carries the follower reply that attains the minimum.
    """
    _require_player(leader)
    u_d = surfaces.payoff_dsrc_grid()
    u_w = surfaces.payoff_wifi_grid()
    pts = surfaces.grid.points()
    if leader == DSRC:
        lead_u, fol_u = u_d, u_w  # follower picks the tau_w column within each leader row
    else:
        lead_u, fol_u = u_w.T, u_d.T
    fol_mask = _tie_mask(fol_u, 1, eps_tie)
    pessimistic = np.where(fol_mask, lead_u, np.inf).min(axis=1)
    li = int(np.argmax(pessimistic))
    replies = np.flatnonzero(fol_mask[li])
    fj = int(replies[np.argmin(lead_u[li, replies])])
    i, j = (li, fj) if leader == DSRC else (fj, li)
    return StackelbergResult(
        leader=leader,
        pair=StrategyPair(tau_d=float(pts[i]), tau_w=float(pts[j])),
        age=float(surfaces.age[i, j]),
        throughput=float(surfaces.throughput[i, j]),
        leader_guaranteed_payoff=float(pessimistic[li]),
    )


def single_network_optimum(
    kind: str,
    n: int,
    beta: float,
    grid: GridSpec | None = None,
    refine: float = 1e-5,
) -> SingleNetworkOptimum:
    """Best strategy for a network that has the medium to itself.

    Coarse scan over the grid, then repeated local subdivision around the
    incumbent down to ``refine`` resolution, never leaving [grid.lo, grid.hi]
    (optima can sit clamped on the boundary).
    """
    _require_player(kind)
    if n < 1:
        raise ValueError("the lone network needs at least one node")
    grid = grid if grid is not None else GridSpec()
    if kind == DSRC:
        config = NetworkConfig(n_dsrc=n, n_wifi=0, beta=beta)

        def loss(taus):
            return _aoi_expr(taus, 0.0, config)

    else:
        config = NetworkConfig(n_dsrc=0, n_wifi=n, beta=beta)

        def loss(taus):
            return -_throughput_expr(0.0, taus, config)

    pts = grid.points()
    k = int(np.argmin(loss(pts)))
    lo = max(grid.lo, float(pts[k]) - grid.step)
    hi = min(grid.hi, float(pts[k]) + grid.step)
    while True:
        xs = np.linspace(lo, hi, 41)
        vs = loss(xs)
        k = int(np.argmin(vs))
        if xs[1] - xs[0] <= refine:
            tau_star = float(xs[k])
            value = float(vs[k])
            break
        lo = max(grid.lo, float(xs[max(k - 1, 0)]))
        hi = min(grid.hi, float(xs[min(k + 1, len(xs) - 1)]))
    if kind == WIFI:
        value = -value
    return SingleNetworkOptimum(kind=kind, n=n, tau_star=tau_star, value=value)
