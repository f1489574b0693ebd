"""Saturation model of IEEE 802.11 DCF (basic access).

All durations are in microseconds; throughputs are in packets per second.
"""

import logging
import math
from typing import NamedTuple

from scipy import optimize

from wlandelay.config import settings
from wlandelay.core.exceptions import ConvergenceError, DomainError
from wlandelay.schemas.dcf import DcfParams, FixedPointSolution, SlotModel, ThroughputPoint

logger = logging.getLogger(__name__)

MICROSECONDS = 1e-6


class SlotDurations(NamedTuple):
    """Virtual slot lengths in microseconds."""

    t_idle: float
    t_success: float
    t_collision: float


class SlotProbabilities(NamedTuple):
    """Probability that a virtual slot is a success, idle or collision slot."""

    p_success: float
    p_idle: float
    p_collision: float


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p!r} outside [0, 1]")


def beta_from_backoff(p: float, W: int, m: int) -> float:  # noqa: N803
    """Attempt probability implied by the backoff chain at collision probability p.

    2(1-2p) / [(W+1)(1-2p) + pW(1-(2p)^m)] with the common (1-2p) factor
    cancelled, so the value at p = 1/2 is the continuous extension.
    """
    _check_probability(p)
    if W < 2 or m < 0:
        raise DomainError(f"need W >= 2 and m >= 0, got W={W}, m={m}")
    # (1 - (2p)^m) / (1 - 2p) = sum_{k<m} (2p)^k
    geometric = math.fsum((2.0 * p) ** k for k in range(m))
    return 2.0 / ((W + 1) + p * W * geometric)


def beta_from_collision(p: float, n: int) -> float:
    """Attempt probability consistent with collision probability p among n nodes."""
    _check_probability(p)
    if n < 2:
        raise DomainError(f"collision relation needs n >= 2, got {n}")
    return 1.0 - (1.0 - p) ** (1.0 / (n - 1))


def solve_fixed_point(
    n: int,
    params: DcfParams | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
) -> FixedPointSolution:
    """Solve beta_from_backoff(p) = beta_from_collision(p, n) by bisection on [0, 1]."""
    params = params or DcfParams()
    tol = settings.SOLVER_TOL if tol is None else tol
    max_iter = settings.SOLVER_MAX_ITER if max_iter is None else max_iter
    if n < 2:
        raise DomainError(f"fixed point needs n >= 2, got {n}")
    if tol <= 0:
        raise DomainError(f"tolerance must be > 0, got {tol}")

    W, m = params.cw_min_W, params.max_stage_m  # noqa: N806

    def gap(p: float) -> float:
        return beta_from_backoff(p, W, m) - beta_from_collision(p, n)

    # gap(0) = 2/(W+1) > 0 and gap(1) = 2/(2^m W + 1) - 1 < 0 bracket the root
    root, info = optimize.bisect(
        gap, 0.0, 1.0, xtol=tol, maxiter=max_iter, full_output=True, disp=False
    )
    residual = gap(root)
    if not info.converged:
        raise ConvergenceError(
            f"bisection did not converge for n={n} after {info.iterations} iterations",
            iterations=info.iterations,
            residual=residual,
        )

    beta = beta_from_backoff(root, W, m)
    logger.debug(f"Fixed point n={n}: p={root:.9f} beta={beta:.9f} after {info.iterations} steps")
    return FixedPointSolution(
        n=n, beta=beta, p=root, residual=residual, iterations=info.iterations
    )


def slot_durations(params: DcfParams | None = None) -> SlotDurations:
    """Durations of idle, success and collision slots under basic access."""
    params = params or DcfParams()
    data_time = (params.mac_header_bits + params.payload_bits) / params.data_rate / MICROSECONDS
    ack_time = params.ack_bits / params.data_rate / MICROSECONDS
    frame = params.phy_header_time + data_time + params.propagation_delay

    t_success = (
        frame + params.sifs + params.phy_header_time + ack_time + params.propagation_delay
        + params.difs
    )
    t_collision = frame + params.difs
    return SlotDurations(t_idle=params.slot_time, t_success=t_success, t_collision=t_collision)


def slot_probabilities(beta: float, n: int) -> SlotProbabilities:
    """Outcome probabilities of a generic slot when n nodes attempt with probability beta."""
    _check_probability(beta)
    if n < 1:
        raise DomainError(f"need at least one node, got {n}")
    p_success = n * beta * (1.0 - beta) ** (n - 1)
    p_idle = (1.0 - beta) ** n
    p_collision = max(0.0, 1.0 - p_success - p_idle)
    return SlotProbabilities(p_success=p_success, p_idle=p_idle, p_collision=p_collision)


def slot_model(n: int, params: DcfParams | None = None, tol: float | None = None) -> SlotModel:
    """Full renewal description of the saturated channel with n contenders."""
    params = params or DcfParams()
    solution = solve_fixed_point(n, params, tol)
    probs = slot_probabilities(solution.beta, n)
    durations = slot_durations(params)

    mean_slot = (
        probs.p_idle * durations.t_idle
        + probs.p_success * durations.t_success
        + probs.p_collision * durations.t_collision
    )
    throughput = probs.p_success / (mean_slot * MICROSECONDS)
    return SlotModel(
        n=n,
        p_success=probs.p_success,
        p_idle=probs.p_idle,
        p_collision=probs.p_collision,
        t_success=durations.t_success,
        t_idle=durations.t_idle,
        t_collision=durations.t_collision,
        throughput_pps=throughput,
    )


def aggregate_throughput(n: int, params: DcfParams | None = None, tol: float | None = None) -> float:
    """Saturation throughput S(n) in packets per second (renewal-reward)."""
    return slot_model(n, params, tol).throughput_pps


def throughput_curve(
    n_min: int, n_max: int, params: DcfParams | None = None
) -> list[ThroughputPoint]:
    """S(n) for every n in [n_min, n_max]."""
    if not 2 <= n_min <= n_max:
        raise DomainError(f"need 2 <= n_min <= n_max, got [{n_min}, {n_max}]")
    return [
        ThroughputPoint(n=n, throughput_pps=aggregate_throughput(n, params))
        for n in range(n_min, n_max + 1)
    ]


def max_stable_rate(n: int, params: DcfParams | None = None) -> float:
    """Largest per-node Poisson rate a symmetric n-node cell sustains, C(n)/n."""
    return aggregate_throughput(n, params) / n
