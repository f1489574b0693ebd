"""Vanishing-switchover limits of the general polling formulas.

The WLAN view (service 1/C, fair selection, constant switchover epsilon) must
approach the closed-form zero-switchover figures as epsilon -> 0, at first order.
"""

import numpy as np
import pytest

from wlandelay.services.polling_model import (
    chi_psi,
    mean_delay,
    mean_delay_zero_switchover,
    mean_queue_length,
    nabla_matrix,
    wlan_config,
)

C = 72.5
LAMBDAS = (10.0, 10.0, 10.0)
SKEWED = (3.0, 9.0, 18.0)
EPSILONS = (1e-5 / C, 1e-6 / C, 1e-7 / C)


def rel_err(value: float, target: float) -> float:
    return abs(value - target) / abs(target)


def nabla_diag_limit(lam: float, rho: float) -> float:
    return 2 * lam / (1 - rho) + lam**2 * (rho - 2) / (C * (1 - rho))


def nabla_cross_limit(lam_i: float, lam_j: float, rho: float) -> float:
    return lam_i * lam_j * rho / (C * (1 - rho)) - 2 * lam_i * lam_j / (C * (1 - rho))


def queue_length_limit(lam: float, gamma: float, rho: float) -> float:
    return (2 * lam / (1 - rho) + lam**2 * rho / (C * (1 - rho) ** 2)) / (2 * gamma)


def assert_first_order(errors: list[float]) -> None:
    """Each tenfold shrink of epsilon cuts the error at least fivefold."""
    for coarse, fine in zip(errors, errors[1:], strict=False):
        assert fine <= coarse / 5


class TestNablaLimits:
    """Tests for nabla / epsilon."""

    @pytest.mark.parametrize("lambdas", [LAMBDAS, SKEWED])
    def test_diagonal(self, lambdas):
        """Verify nabla_ii / epsilon tends to its closed-form limit."""
        rho = sum(lambdas) / C
        errors = []
        for eps in EPSILONS:
            matrix = nabla_matrix(wlan_config(lambdas, C, eps)) / eps
            errors.append(
                max(rel_err(matrix[i, i], nabla_diag_limit(lam, rho)) for i, lam in enumerate(lambdas))
            )

        assert errors[1] < 1e-3
        assert_first_order(errors)

    def test_off_diagonal(self):
        """Verify nabla_ij / epsilon, i != j, tends to its closed-form limit."""
        rho = sum(SKEWED) / C
        errors = []
        for eps in EPSILONS:
            matrix = nabla_matrix(wlan_config(SKEWED, C, eps)) / eps
            errors.append(
                max(
                    rel_err(matrix[i, j], nabla_cross_limit(SKEWED[i], SKEWED[j], rho))
                    for i in range(3)
                    for j in range(3)
                    if i != j
                )
            )

        assert errors[1] < 1e-3
        assert_first_order(errors)

    def test_service_weighted_row_sum(self):
        """Verify sum_l p_l nabla_il / epsilon tends to lambda_i (rho^2 - 2 rho + 2) / (C (1 - rho))."""
        rho = sum(SKEWED) / C
        expected = np.array(SKEWED) * (rho**2 - 2 * rho + 2) / (C * (1 - rho))
        errors = []
        for eps in EPSILONS:
            cfg = wlan_config(SKEWED, C, eps)
            weighted = nabla_matrix(cfg) @ np.asarray(cfg.service_mean) / eps
            errors.append(float(np.max(np.abs(weighted - expected) / expected)))

        assert errors[1] < 1e-3
        assert_first_order(errors)


class TestQueueLengthLimit:
    """Tests for E[Q_i] / epsilon and chi_i."""

    def test_chi_tends_to_one(self):
        """Verify chi_i = 1 - O(1e-4) at epsilon = 1e-6."""
        chi, _ = chi_psi(wlan_config(LAMBDAS, C, 1e-6), 0)
        assert 1 - 1e-4 < chi < 1

    @pytest.mark.parametrize("lambdas", [LAMBDAS, SKEWED])
    def test_queue_length(self, lambdas):
        """Verify E[Q_i] / epsilon tends to its closed-form limit."""
        rho = sum(lambdas) / C
        gamma = 1 / len(lambdas)
        errors = []
        for eps in EPSILONS:
            cfg = wlan_config(lambdas, C, eps)
            errors.append(
                max(
                    rel_err(mean_queue_length(cfg, i) / eps, queue_length_limit(lam, gamma, rho))
                    for i, lam in enumerate(lambdas)
                )
            )

        assert errors[1] < 1e-3
        assert_first_order(errors)


class TestDelayLimit:
    """Tests for the general mean delay approaching the zero-switchover form."""

    @pytest.mark.parametrize("lambdas", [LAMBDAS, SKEWED, (14.9, 14.9, 14.9, 14.9)])
    def test_close_at_small_epsilon(self, lambdas):
        """Verify relative error below 1e-3 at epsilon = 1e-6 / C for every queue."""
        cfg = wlan_config(lambdas, C, 1e-6 / C)
        target = mean_delay_zero_switchover(lambdas, C)

        for i in range(len(lambdas)):
            assert rel_err(mean_delay(cfg, i), target) < 1e-3

    def test_error_shrinks_as_epsilon_halves(self):
        """Verify the gap to the closed form decreases monotonically as epsilon halves."""
        target = mean_delay_zero_switchover(LAMBDAS, C)
        errors = [
            rel_err(mean_delay(wlan_config(LAMBDAS, C, 1e-3 / C / 2**k), 0), target)
            for k in range(6)
        ]
        assert all(a > b for a, b in zip(errors, errors[1:], strict=False))

    def test_tiny_switchover_matches_table_value(self):
        """Verify lambda = 10 per node at epsilon = 1e-9 s gives about 18.66 ms."""
        cfg = wlan_config(LAMBDAS, C, 1e-9)
        assert mean_delay(cfg, 0) * 1e3 == pytest.approx(18.66, abs=0.01)

