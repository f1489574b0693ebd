"""Slot-level simulator of a single-cell IEEE 802.11 DCF network.

Time advances in virtual slots: idle (sigma), success (T_S) or collision (T_C),
with the durations from :func:`wlandelay.services.dcf_model.slot_durations`.
Poisson arrivals happen in continuous time and join the contention at the next
slot boundary.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import partial

from wlandelay.schemas.simulation import DcfSimConfig, DcfSimReport, TrafficMode
from wlandelay.services.dcf_model import MICROSECONDS, slot_durations
from wlandelay.sim.rng import RngStream
from wlandelay.workers.replications import run_replications

logger = logging.getLogger(__name__)


@dataclass
class NodeState:
    """Queue and backoff state of one station."""

    queue: deque[float] = field(default_factory=deque)
    backoff_stage: int = 0
    backoff_counter: int = 0
    contending: bool = False
    next_arrival: float = math.inf


class _DcfRun:
    """State of one simulation run."""

    def __init__(self, cfg: DcfSimConfig, stream: RngStream):
        self.cfg = cfg
        self.stream = stream
        self.n = cfg.n
        self.saturated = cfg.traffic is TrafficMode.SATURATED
        self.horizon = cfg.horizon
        self.warmup = cfg.warmup
        self.cw_min = cfg.params.cw_min_W
        self.m = cfg.params.max_stage_m

        durations = slot_durations(cfg.params)
        self.t_idle = durations.t_idle * MICROSECONDS
        self.t_success = durations.t_success * MICROSECONDS
        self.t_collision = durations.t_collision * MICROSECONDS

        self.mean_interarrival = (
            [1.0 / lam for lam in cfg.lambdas] if cfg.lambdas is not None else None
        )
        self.nodes = [NodeState() for _ in range(self.n)]
        self.now = 0.0
        self.window_start: float | None = None

        self.idle_slots = 0
        self.success_slots = 0
        self.collision_slots = 0
        self.attempts = 0
        self.collided_attempts = 0
        self.delivered = [0] * self.n
        self.delay_sum = [0.0] * self.n

    def _draw_backoff(self, node: NodeState) -> None:
        window = (2**node.backoff_stage) * self.cw_min
        node.backoff_counter = self.stream.integer_below(window)

    def _start_contending(self, node: NodeState) -> None:
        node.contending = True
        node.backoff_stage = 0
        self._draw_backoff(node)

    def _admit_arrivals(self) -> float:
        """Queue every arrival up to now; return the earliest pending arrival."""
        assert self.mean_interarrival is not None
        earliest = math.inf
        for i, node in enumerate(self.nodes):
            was_empty = not node.queue
            while node.next_arrival <= self.now:
                node.queue.append(node.next_arrival)
                node.next_arrival += self.stream.exponential(self.mean_interarrival[i])
            if was_empty and node.queue:
                self._start_contending(node)
            earliest = min(earliest, node.next_arrival)
        return earliest

    def _slots_until(self, time: float) -> int:
        """Idle slots up to the first boundary at or after ``time`` (at least one)."""
        return max(1, math.ceil((time - self.now) / self.t_idle))

    @property
    def _counting(self) -> bool:
        return self.window_start is not None

    def _idle(self, slots: int) -> None:
        for node in self.nodes:
            if node.contending:
                node.backoff_counter -= slots
        if self._counting:
            self.idle_slots += slots
        self.now += slots * self.t_idle

    def _transmit(self, transmitters: list[int]) -> None:
        for node in self.nodes:
            if node.contending and node.backoff_counter > 0:
                # one virtual slot elapses for every node sitting this one out
                node.backoff_counter -= 1

        if self._counting:
            self.attempts += len(transmitters)

        if len(transmitters) == 1:
            self.now += self.t_success
            i = transmitters[0]
            node = self.nodes[i]
            if self._counting:
                self.success_slots += 1
                self.delivered[i] += 1
            if not self.saturated:
                arrived = node.queue.popleft()
                if self._counting:
                    self.delay_sum[i] += self.now - arrived
            node.backoff_stage = 0
            if self.saturated or node.queue:
                self._draw_backoff(node)
            else:
                node.contending = False
            return

        self.now += self.t_collision
        if self._counting:
            self.collision_slots += 1
            self.collided_attempts += len(transmitters)
        for i in transmitters:
            node = self.nodes[i]
            node.backoff_stage = min(node.backoff_stage + 1, self.m)
            self._draw_backoff(node)

    def run(self) -> DcfSimReport:
        if self.saturated:
            for node in self.nodes:
                self._start_contending(node)
        else:
            assert self.mean_interarrival is not None
            for node, mean in zip(self.nodes, self.mean_interarrival, strict=True):
                node.next_arrival = self.stream.exponential(mean)

        while self.now < self.horizon:
            if self.window_start is None and self.now >= self.warmup:
                self.window_start = self.now
            earliest = math.inf if self.saturated else self._admit_arrivals()

            counters = [node.backoff_counter for node in self.nodes if node.contending]
            if not counters:
                if self.t_idle == 0:
                    # zero-length idle slots: jump straight to the arrival
                    self.now = earliest
                else:
                    # empty cell: idle slots until the next arrival's boundary
                    self._idle(self._slots_until(earliest))
                continue

            lowest = min(counters)
            if lowest > 0:
                slots = lowest
                if earliest < math.inf and self.t_idle > 0:
                    slots = min(slots, self._slots_until(earliest))
                self._idle(slots)
                continue

            self._transmit(
                [i for i, node in enumerate(self.nodes) if node.contending and node.backoff_counter == 0]
            )
        return self._report()

    def _report(self) -> DcfSimReport:
        start = self.window_start if self.window_start is not None else self.now
        elapsed = self.now - start
        total_slots = self.idle_slots + self.success_slots + self.collision_slots
        per_node_throughput = [d / elapsed if elapsed > 0 else 0.0 for d in self.delivered]
        delivered = sum(self.delivered)
        if self.saturated:
            per_node_delay = [math.nan] * self.n
            mean_delay = math.nan
        else:
            per_node_delay = [
                total / count if count else math.nan
                for total, count in zip(self.delay_sum, self.delivered, strict=True)
            ]
            mean_delay = math.fsum(self.delay_sum) / delivered if delivered else math.nan
        return DcfSimReport(
            per_node_delay=per_node_delay,
            per_node_throughput=per_node_throughput,
            mean_delay=mean_delay,
            aggregate_throughput=sum(per_node_throughput),
            beta_hat=self.attempts / (self.n * total_slots) if total_slots else 0.0,
            p_hat=self.collided_attempts / self.attempts if self.attempts else 0.0,
            idle_slots=self.idle_slots,
            success_slots=self.success_slots,
            collision_slots=self.collision_slots,
            elapsed=elapsed,
            seed=self.stream.master_seed,
        )


def simulate_dcf(cfg: DcfSimConfig, stream: RngStream) -> DcfSimReport:
    """Simulate one replication of the DCF cell.

    A slot with one transmitter is a success: the head-of-line packet departs at
    the end of the slot and the node restarts at stage 0. Two or more
    transmitters collide: each moves up one stage (capped at m) and re-samples
    its counter. Every contender that does not transmit counts down one virtual
    slot. There is no retry limit and queues are unbounded.
    """
    return _DcfRun(cfg, stream).run()


def _dcf_metrics(cfg: DcfSimConfig, stream: RngStream) -> dict[str, float]:
    return simulate_dcf(cfg, stream).metrics()


def replicate_dcf(
    cfg: DcfSimConfig, reps: int, seed: int, max_workers: int | None = None
) -> DcfSimReport:
    """Independent replications of :func:`simulate_dcf` with 95% halfwidths."""
    aggregate = run_replications(partial(_dcf_metrics, cfg), reps, seed, max_workers)
    return DcfSimReport.from_replications(aggregate, cfg.n, reps, seed)
