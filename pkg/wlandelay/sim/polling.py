"""Discrete-event simulator of a 1-limited random polling system."""

import logging
import math
from collections import deque
from functools import partial
from itertools import accumulate

from wlandelay.schemas.simulation import (
    Distribution,
    PollingMode,
    PollingSimConfig,
    PollingSimReport,
)
from wlandelay.sim.calendar import EventCalendar
from wlandelay.sim.rng import RngStream
from wlandelay.workers.replications import run_replications

logger = logging.getLogger(__name__)

ARRIVAL = "arrival"
POLL = "poll"
DEPARTURE = "departure"

# equal timestamps: service completions, then server decisions, then arrivals
_PRIORITY = {DEPARTURE: 0, POLL: 1, ARRIVAL: 2}


class _PollingRun:
    """State of one simulation run."""

    def __init__(self, cfg: PollingSimConfig, stream: RngStream):
        base = cfg.base
        self.cfg = cfg
        self.stream = stream
        self.n = base.n
        self.lee = cfg.mode is PollingMode.LEE
        self.horizon = cfg.horizon
        self.warmup = cfg.warmup

        self.mean_interarrival = [1.0 / lam for lam in base.lambdas]
        self.service_mean = list(base.service_mean)
        self.switch_mean = list(base.switch_mean)
        self.service_exp = cfg.service_dist is Distribution.EXPONENTIAL
        self.switch_exp = cfg.switch_dist is Distribution.EXPONENTIAL
        self.gamma = list(base.gamma)
        self.gamma_cum = list(accumulate(base.gamma))
        # idle polling can be fast-forwarded when every switchover is alike
        self.common_switch = self.switch_mean[0] if len(set(self.switch_mean)) == 1 else None

        self.calendar = EventCalendar()
        self.queues: list[deque[float]] = [deque() for _ in range(self.n)]
        self.in_system = 0
        self.busy = False
        self.now = 0.0
        self.last = 0.0

        # statistics over the post-warmup window
        self.area = [0.0] * self.n
        self.nonempty_time = [0.0] * self.n
        self.busy_time = 0.0
        self.sojourn_sum = [0.0] * self.n
        self.served = [0] * self.n
        self.polls = [0] * self.n
        self.polls_nonempty = [0] * self.n
        self.poll_qlen_sum = [0] * self.n

    def _push(self, time: float, kind: str, queue: int) -> None:
        self.calendar.push(time, (kind, queue), _PRIORITY[kind])

    def _draw(self, mean: float, exponential: bool) -> float:
        return self.stream.exponential(mean) if exponential else mean

    def _advance(self, t: float) -> None:
        start = max(self.last, self.warmup)
        end = min(t, self.horizon)
        if end > start:
            dt = end - start
            for i, q in enumerate(self.queues):
                if q:
                    self.area[i] += len(q) * dt
                    self.nonempty_time[i] += dt
            if self.busy:
                self.busy_time += dt
        self.last = t

    def _schedule_arrival(self, i: int) -> None:
        self._push(self.now + self.stream.exponential(self.mean_interarrival[i]), ARRIVAL, i)

    def _start_service(self, j: int) -> None:
        self.busy = True
        self._push(self.now + self._draw(self.service_mean[j], self.service_exp), DEPARTURE, j)

    def _on_arrival(self, i: int) -> None:
        self.queues[i].append(self.now)
        self.in_system += 1
        self._schedule_arrival(i)
        if not self.lee and not self.busy:
            # every queue was empty, so the server was idle
            self._start_service(i)

    def _on_departure(self, j: int) -> None:
        arrived = self.queues[j].popleft()
        self.in_system -= 1
        self.busy = False
        if self.now >= self.warmup:
            self.sojourn_sum[j] += self.now - arrived
            self.served[j] += 1

        if self.lee:
            self._push(self.now + self._draw(self.switch_mean[j], self.switch_exp), POLL, -1)
            return
        candidates = [k for k, q in enumerate(self.queues) if q]
        if candidates:
            self._start_service(candidates[self.stream.integer_below(len(candidates))])

    def _on_poll(self) -> None:
        j = self.stream.choice_index(self.gamma_cum)
        backlog = len(self.queues[j])
        if self.now >= self.warmup:
            self.polls[j] += 1
            self.poll_qlen_sum[j] += backlog
            if backlog:
                self.polls_nonempty[j] += 1

        if backlog:
            self._start_service(j)
        elif self.in_system == 0 and self.common_switch is not None:
            self._skip_idle_polls()
        else:
            self._push(self.now + self._draw(self.switch_mean[j], self.switch_exp), POLL, -1)

    def _skip_idle_polls(self) -> None:
        """Jump over the empty polls that precede the next arrival."""
        s = self.common_switch
        assert s is not None
        gap = self.calendar.peek_time() - self.now
        if self.switch_exp:
            # polls form a Poisson process of rate 1/s
            skipped = self.stream.poisson(gap / s)
            next_poll = self.now + gap + self.stream.exponential(s)
        else:
            skipped = max(0, math.ceil(gap / s) - 1)
            next_poll = self.now + (skipped + 1) * s
        if skipped and self.now >= self.warmup:
            for k, count in enumerate(self.stream.multinomial(skipped, self.gamma)):
                self.polls[k] += count
        self._push(next_poll, POLL, -1)

    def run(self) -> PollingSimReport:
        for i in range(self.n):
            self._schedule_arrival(i)
        if self.lee:
            self._push(0.0, POLL, -1)

        while self.calendar:
            event = self.calendar.pop()
            if event.time > self.horizon:
                break
            self._advance(event.time)
            self.now = event.time
            kind, queue = event.payload
            if kind == ARRIVAL:
                self._on_arrival(queue)
            elif kind == DEPARTURE:
                self._on_departure(queue)
            else:
                self._on_poll()
        self._advance(self.horizon)
        return self._report()

    def _report(self) -> PollingSimReport:
        window = self.horizon - self.warmup
        if self.lee:
            p_nonempty = [
                nonempty / polls if polls else math.nan
                for nonempty, polls in zip(self.polls_nonempty, self.polls, strict=True)
            ]
            at_poll = [
                total / polls if polls else math.nan
                for total, polls in zip(self.poll_qlen_sum, self.polls, strict=True)
            ]
        else:
            p_nonempty = [t / window for t in self.nonempty_time]
            at_poll = [math.nan] * self.n

        return PollingSimReport(
            mean_sojourn=[
                total / count if count else math.nan
                for total, count in zip(self.sojourn_sum, self.served, strict=True)
            ],
            mean_qlen=[a / window for a in self.area],
            mean_qlen_at_poll=at_poll,
            p_nonempty=p_nonempty,
            served=[float(c) for c in self.served],
            served_rate=[c / window for c in self.served],
            served_rate_total=sum(self.served) / window,
            busy_fraction=self.busy_time / window,
            seed=self.stream.master_seed,
        )


def simulate_polling(cfg: PollingSimConfig, stream: RngStream) -> PollingSimReport:
    """Simulate one replication of the polling system.

    Lee mode: the server polls queue j with probability gamma_j, serves one
    packet if it is non-empty, then spends a switchover period s_j. Zero-switchover
    mode: the server serves a uniformly chosen non-empty queue and idles only
    when the whole system is empty.
    """
    return _PollingRun(cfg, stream).run()


def _polling_metrics(cfg: PollingSimConfig, stream: RngStream) -> dict[str, float]:
    return simulate_polling(cfg, stream).metrics()


def replicate_polling(
    cfg: PollingSimConfig, reps: int, seed: int, max_workers: int | None = None
) -> PollingSimReport:
    """Independent replications of :func:`simulate_polling` with 95% halfwidths."""
    aggregate = run_replications(partial(_polling_metrics, cfg), reps, seed, max_workers)
    return PollingSimReport.from_replications(aggregate, cfg.base.n, reps, seed)
