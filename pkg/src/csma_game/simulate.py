"""Monte Carlo slot simulator: the independent oracle for the analytics.

One replication draws every node's transmit decision per slot, classifies
slots as idle/success/collision, and accumulates continuous time as the
sum of slot durations. Each node's age grows at unit rate and drops to the
success-slot length at the end of a slot in which it alone transmitted;
the age integral is exact because age is linear within a slot. Estimates
use only the post-warmup window. Age and throughput standard errors come
from batch means (age samples are autocorrelated; a naive variance would
understate the error), while inter-update times are iid by construction so
their moments use plain sample standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import AccessVector, SlotLengths

_N_BATCHES = 100


class NoProgressError(RuntimeError):
    """Raised when a finished replication contains no successful slot."""


@dataclass(frozen=True)
class SimConfig:
    """Replication length, seed, and the slots excluded from averages.

    ``warmup_slots=None`` means 1% of the horizon.
    """

    horizon_slots: int
    seed: int
    warmup_slots: int | None = None

    def __post_init__(self) -> None:
        if self.horizon_slots < 1:
            raise ValueError("horizon must be at least one slot")
        if self.resolved_warmup < 0 or self.resolved_warmup >= self.horizon_slots:
            raise ValueError("warmup must satisfy 0 <= warmup < horizon")

    @property
    def resolved_warmup(self) -> int:
        return self.horizon_slots // 100 if self.warmup_slots is None else self.warmup_slots


@dataclass(frozen=True)
class SimResult:
    """Per-node empirical estimates with standard errors, plus slot counts.

    Array fields are indexed by node. ``inter_update_*`` entries are NaN for
    nodes without enough post-warmup updates. Slot counts cover the measured
    (post-warmup) window and sum to ``slots_measured``.
    """

    throughput: np.ndarray = field(repr=False)
    throughput_se: np.ndarray = field(repr=False)
    age: np.ndarray = field(repr=False)
    age_se: np.ndarray = field(repr=False)
    inter_update_mean: np.ndarray = field(repr=False)
    inter_update_mean_se: np.ndarray = field(repr=False)
    inter_update_sq_mean: np.ndarray = field(repr=False)
    inter_update_sq_mean_se: np.ndarray = field(repr=False)
    update_counts: np.ndarray = field(repr=False)
    slots_idle: int
    slots_success: int
    slots_collision: int
    slots_measured: int
    time_measured: float

    def slot_fractions(self) -> np.ndarray:
        counts = np.array([self.slots_idle, self.slots_success, self.slots_collision], dtype=float)
        return counts / self.slots_measured

    def slot_fraction_se(self) -> np.ndarray:
        f = self.slot_fractions()
        return np.sqrt(f * (1.0 - f) / self.slots_measured)


def _batch_edges(start: int, stop: int) -> np.ndarray:
    n = stop - start
    b = min(_N_BATCHES, n)
    return start + (np.arange(b + 1) * n) // b


def _window_sums(cumulative: np.ndarray, edges: np.ndarray) -> np.ndarray:
    return cumulative[edges[1:]] - cumulative[edges[:-1]]


def run_simulation(v: AccessVector, s: SlotLengths, cfg: SimConfig) -> SimResult:
    """Run one seeded replication and estimate every per-node quantity.

    Deterministic: identical inputs give bit-identical results.
    """
    n = len(v)
    horizon = cfg.horizon_slots
    warmup = cfg.resolved_warmup
    rng = np.random.default_rng(cfg.seed)
    taus = np.asarray(v.taus)

    transmit = rng.random((horizon, n)) < taus
    tx_count = transmit.sum(axis=1)
    success = tx_count == 1
    slot_len = np.where(tx_count == 0, s.idle, np.where(success, s.success, s.collision))
    time_end = np.cumsum(slot_len)
    time_start = time_end - slot_len

    if not success.any():
        raise NoProgressError("no successful slot in the whole horizon; all access probabilities zero?")

    edges = _batch_edges(warmup, horizon)
    n_batches = edges.size - 1
    cum_time = np.concatenate(([0.0], time_end))
    batch_time = _window_sums(cum_time, edges)
    window_time = float(batch_time.sum())

    throughput = np.empty(n)
    throughput_se = np.empty(n)
    age = np.empty(n)
    age_se = np.empty(n)
    iu_mean = np.full(n, np.nan)
    iu_mean_se = np.full(n, np.nan)
    iu_sq = np.full(n, np.nan)
    iu_sq_se = np.full(n, np.nan)
    update_counts = np.zeros(n, dtype=np.int64)

    for i in range(n):
        updates = transmit[:, i] & success
        # Age at slot start = time since the most recent update's end, plus
        # the delivery latency; time 0 counts as a pseudo-update.
        reset_end = np.where(updates, time_end, 0.0)
        prev_reset = np.concatenate(([0.0], np.maximum.accumulate(reset_end)[:-1]))
        age_start = time_start - prev_reset + s.success
        area = slot_len * (age_start + 0.5 * slot_len)
        cum_area = np.concatenate(([0.0], np.cumsum(area)))
        batch_area = _window_sums(cum_area, edges)
        batch_age = batch_area / batch_time
        age[i] = batch_area.sum() / window_time
        age_se[i] = batch_age.std(ddof=1) / np.sqrt(n_batches) if n_batches > 1 else np.nan

        occupied = np.where(updates, s.success, 0.0)
        cum_occ = np.concatenate(([0.0], np.cumsum(occupied)))
        batch_occ = _window_sums(cum_occ, edges)
        batch_thr = batch_occ / batch_time
        throughput[i] = batch_occ.sum() / window_time
        throughput_se[i] = batch_thr.std(ddof=1) / np.sqrt(n_batches) if n_batches > 1 else np.nan

        upd_times = time_end[warmup:][updates[warmup:]]
        update_counts[i] = upd_times.size
        if upd_times.size >= 2:
            z = np.diff(upd_times)
            iu_mean[i] = z.mean()
            iu_sq[i] = (z**2).mean()
            if z.size >= 2:
                iu_mean_se[i] = z.std(ddof=1) / np.sqrt(z.size)
                iu_sq_se[i] = (z**2).std(ddof=1) / np.sqrt(z.size)

    measured_counts = tx_count[warmup:]
    slots_idle = int(np.count_nonzero(measured_counts == 0))
    slots_success = int(np.count_nonzero(measured_counts == 1))
    slots_measured = horizon - warmup

    return SimResult(
        throughput=throughput,
        throughput_se=throughput_se,
        age=age,
        age_se=age_se,
        inter_update_mean=iu_mean,
        inter_update_mean_se=iu_mean_se,
        inter_update_sq_mean=iu_sq,
        inter_update_sq_mean_se=iu_sq_se,
        update_counts=update_counts,
        slots_idle=slots_idle,
        slots_success=slots_success,
        slots_collision=slots_measured - slots_idle - slots_success,
        slots_measured=slots_measured,
        time_measured=window_time,
    )
