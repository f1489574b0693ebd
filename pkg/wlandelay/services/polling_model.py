"""Mean-value analysis of 1-limited random polling systems.

The general path evaluates the mean queue length and mean sojourn time of a
random polling system with nonzero switchover periods and independent Poisson
arrivals. The zero-switchover closed form is the limit of that path when every
switchover is a constant epsilon shrinking to zero, with deterministic service
at rate C.
"""

import logging
import math

import numpy as np
from numpy.typing import NDArray

from wlandelay.core.exceptions import DomainError, InfeasibleConfigError, InstabilityError
from wlandelay.schemas.polling import DelayReport, PollingConfig

logger = logging.getLogger(__name__)

Vector = NDArray[np.float64]


def _vectors(cfg: PollingConfig) -> tuple[Vector, Vector, Vector, Vector, Vector, Vector]:
    return (
        np.asarray(cfg.lambdas, dtype=float),
        np.asarray(cfg.gamma, dtype=float),
        np.asarray(cfg.service_mean, dtype=float),
        np.asarray(cfg.service_m2, dtype=float),
        np.asarray(cfg.switch_mean, dtype=float),
        np.asarray(cfg.switch_m2, dtype=float),
    )


def utilization(cfg: PollingConfig) -> tuple[list[float], float]:
    """Per-queue loads lambda_i * p_i and their sum."""
    rho_i = [lam * p for lam, p in zip(cfg.lambdas, cfg.service_mean, strict=True)]
    return rho_i, math.fsum(rho_i)


def _stable_rho(cfg: PollingConfig) -> float:
    _, rho = utilization(cfg)
    if rho >= 1.0:
        raise InstabilityError(f"utilization rho={rho:.6f} >= 1")
    return rho


def nabla_matrix(cfg: PollingConfig) -> Vector:
    """The n x n matrix of nabla_ij for uncorrelated Poisson arrivals."""
    rho = _stable_rho(cfg)
    lam, gamma, p, p2, sw, sw2 = _vectors(cfg)
    s = cfg.s

    # the inner sum runs over its own dummy index k
    inner = math.fsum(gamma * sw2 + (p2 + 2.0 * sw * p) * lam * s / (1.0 - rho))
    outer = np.outer(lam, lam)
    cross = (sw[:, None] + sw[None, :] + p[:, None] + p[None, :]) * s / (1.0 - rho)

    matrix = outer * inner - outer * cross
    matrix[np.diag_indices_from(matrix)] += 2.0 * lam * s / (1.0 - rho)
    return matrix


def nabla(cfg: PollingConfig, i: int, j: int) -> float:
    """Single entry nabla_ij."""
    return float(nabla_matrix(cfg)[i, j])


def _chi_psi_vectors(cfg: PollingConfig, nab: Vector) -> tuple[Vector, Vector]:
    rho = _stable_rho(cfg)
    lam, gamma, p, *_ = _vectors(cfg)
    s = cfg.s

    chi = 1.0 - s * lam / gamma - rho * s * lam / (2.0 * gamma * (1.0 - rho))
    psi = np.diag(nab) / (2.0 * gamma) + lam / (2.0 * gamma * (1.0 - rho)) * (nab @ p)
    return chi, psi


def chi_psi(cfg: PollingConfig, i: int) -> tuple[float, float]:
    """The pair (chi_i, psi_i) entering the mean queue length."""
    chi, psi = _chi_psi_vectors(cfg, nabla_matrix(cfg))
    if chi[i] <= 0:
        raise InfeasibleConfigError(f"chi_{i}={chi[i]:.6g} <= 0: switchover too long for this load")
    return float(chi[i]), float(psi[i])


def _queue_lengths(cfg: PollingConfig) -> Vector:
    rho = _stable_rho(cfg)
    lam, gamma, p, *_ = _vectors(cfg)
    s = cfg.s
    chi, psi = _chi_psi_vectors(cfg, nabla_matrix(cfg))

    if np.any(chi <= 0):
        bad = int(np.argmin(chi))
        raise InfeasibleConfigError(f"chi_{bad}={chi[bad]:.6g} <= 0: switchover too long for this load")

    denominator = 1.0 - math.fsum(p * lam**2 * s / (2.0 * gamma * (1.0 - rho) * chi))
    if denominator <= 0:
        raise InfeasibleConfigError(f"mean queue length denominator {denominator:.6g} <= 0")

    coupling = math.fsum(p * psi / chi) / denominator
    return psi / chi + s * lam**2 / (2.0 * gamma * (1.0 - rho) * chi) * coupling


def mean_queue_length(cfg: PollingConfig, i: int) -> float:
    """E[Q_i], the mean number at queue i seen at its polling instants."""
    return float(_queue_lengths(cfg)[i])


def _nonempty_probabilities(cfg: PollingConfig) -> Vector:
    rho = _stable_rho(cfg)
    lam, gamma, *_ = _vectors(cfg)
    probs = cfg.s * lam / (gamma * (1.0 - rho))
    if np.any(probs > 1.0):
        bad = int(np.argmax(probs))
        raise InfeasibleConfigError(f"P{{Q_{bad} >= 1}}={probs[bad]:.6g} exceeds 1")
    return probs


def prob_nonempty(cfg: PollingConfig, i: int) -> float:
    """P{Q_i >= 1}, the probability queue i is non-empty when polled."""
    return float(_nonempty_probabilities(cfg)[i])


def _mean_delays(cfg: PollingConfig) -> Vector:
    lam = np.asarray(cfg.lambdas, dtype=float)
    rho_i = lam * np.asarray(cfg.service_mean, dtype=float)
    probs = _nonempty_probabilities(cfg)
    if np.any(probs <= 0):
        raise DomainError("mean delay needs a nonzero switchover time (use the zero-switchover form)")
    return _queue_lengths(cfg) / (lam * probs) - (1.0 - rho_i) / lam


def mean_delay(cfg: PollingConfig, i: int) -> float:
    """E[W_i], the mean sojourn time (arrival to departure) at queue i in seconds."""
    return float(_mean_delays(cfg)[i])


def delay_report(cfg: PollingConfig) -> DelayReport:
    """Every per-queue figure of the general path at once."""
    rho_i, rho = utilization(cfg)
    report = DelayReport(
        rho_i=rho_i,
        rho=rho,
        e_w=_mean_delays(cfg).tolist(),
        e_q=_queue_lengths(cfg).tolist(),
        p_nonempty=_nonempty_probabilities(cfg).tolist(),
    )
    logger.debug(f"Delay report for n={cfg.n}, rho={rho:.4f}: {report.e_w}")
    return report


def _aggregate_load(lambdas: list[float] | tuple[float, ...], capacity: float) -> float:
    if capacity <= 0:
        raise DomainError(f"capacity must be > 0, got {capacity}")
    if any(lam < 0 for lam in lambdas):
        raise DomainError("arrival rates must be nonnegative")
    rho = math.fsum(lambdas) / capacity
    if rho >= 1.0:
        raise InstabilityError(
            f"aggregate rate {math.fsum(lambdas):.4f} pkts/s >= capacity {capacity:.4f} pkts/s"
        )
    return rho


def mean_delay_zero_switchover(lambdas: list[float] | tuple[float, ...], capacity: float) -> float:
    """Mean sojourn time (2 - rho) / (2C(1 - rho)), identical for every queue.

    Depends on the rates only through their sum.
    """
    rho = _aggregate_load(lambdas, capacity)
    return (2.0 - rho) / (2.0 * capacity * (1.0 - rho))


def mean_waiting_zero_switchover(lambdas: list[float] | tuple[float, ...], capacity: float) -> float:
    """Queueing part of the zero-switchover delay, excluding the 1/C service time."""
    rho = _aggregate_load(lambdas, capacity)
    return rho / (2.0 * capacity * (1.0 - rho))


def zero_switchover_report(lambdas: list[float] | tuple[float, ...], capacity: float) -> DelayReport:
    """DelayReport of the zero-switchover model.

    e_q holds the time-average number at each queue (Little's law); polling-instant
    non-empty probabilities vanish with the switchover time.
    """
    delay = mean_delay_zero_switchover(lambdas, capacity)
    rho_i = [lam / capacity for lam in lambdas]
    return DelayReport(
        rho_i=rho_i,
        rho=math.fsum(lambdas) / capacity,
        e_w=[delay] * len(lambdas),
        e_q=[lam * delay for lam in lambdas],
        p_nonempty=[0.0] * len(lambdas),
    )


def wlan_config(
    lambdas: list[float] | tuple[float, ...], capacity: float, epsilon: float = 0.0
) -> PollingConfig:
    """Polling view of a WLAN cell: service 1/C, fair selection, constant switchover epsilon."""
    if capacity <= 0:
        raise DomainError(f"capacity must be > 0, got {capacity}")
    if epsilon < 0:
        raise DomainError(f"switchover time must be >= 0, got {epsilon}")
    n = len(lambdas)
    return PollingConfig(
        lambdas=tuple(lambdas),
        gamma=(1.0 / n,) * n,
        service_mean=(1.0 / capacity,) * n,
        service_m2=(1.0 / capacity**2,) * n,
        switch_mean=(epsilon,) * n,
        switch_m2=(epsilon**2,) * n,
    )
