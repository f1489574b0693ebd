"""Unit tests for the DCF saturation model."""

import math
import random

import pytest

from wlandelay.core.exceptions import ConvergenceError, DomainError
from wlandelay.schemas.dcf import DcfParams
from wlandelay.services.dcf_model import (
    aggregate_throughput,
    beta_from_backoff,
    beta_from_collision,
    max_stable_rate,
    slot_durations,
    slot_model,
    slot_probabilities,
    solve_fixed_point,
    throughput_curve,
)


class TestBackoffRelation:
    """Tests for the attempt probability implied by the backoff chain."""

    def test_no_collisions(self):
        """Verify beta = 2/(W+1) when nothing collides."""
        assert beta_from_backoff(0.0, 32, 5) == pytest.approx(2.0 / 33.0)

    def test_continuous_at_one_half(self):
        """Verify the value at p = 1/2 is finite and matches the limit."""
        assert beta_from_backoff(0.5, 32, 5) == pytest.approx(2.0 / (33.0 + 16.0 * 5))
        assert beta_from_backoff(0.5 - 1e-9, 32, 5) == pytest.approx(
            beta_from_backoff(0.5, 32, 5), rel=1e-6
        )

    def test_decreasing_in_p(self):
        """Verify more collisions lower the attempt probability."""
        values = [beta_from_backoff(p / 10, 32, 5) for p in range(11)]
        assert all(a > b for a, b in zip(values, values[1:], strict=False))

    def test_single_stage(self):
        """Verify m = 0 ignores p."""
        assert beta_from_backoff(0.7, 16, 0) == pytest.approx(2.0 / 17.0)

    @pytest.mark.parametrize(("w", "m"), [(32, 5), (16, 6), (8, 0)])
    def test_monotone_on_fine_grid(self, w: int, m: int):
        """Verify the backoff relation never increases over 1000 points of [0, 1]."""
        values = [beta_from_backoff(k / 999, w, m) for k in range(1000)]

        if m == 0:
            assert len(set(values)) == 1
        else:
            assert all(a > b for a, b in zip(values, values[1:], strict=False))

    @pytest.mark.parametrize(("p", "w", "m"), [(-0.1, 32, 5), (1.1, 32, 5), (0.1, 1, 5), (0.1, 32, -1)])
    def test_domain_errors(self, p, w, m):
        """Verify arguments outside the domain are rejected."""
        with pytest.raises(DomainError):
            beta_from_backoff(p, w, m)


class TestCollisionRelation:
    """Tests for the collision-side relation."""

    def test_two_nodes(self):
        """Verify beta = p for two nodes."""
        assert beta_from_collision(0.3, 2) == pytest.approx(0.3)

    def test_zero(self):
        """Verify p = 0 gives beta = 0."""
        assert beta_from_collision(0.0, 7) == 0.0

    @pytest.mark.parametrize("n", [2, 5, 30])
    def test_increasing_on_fine_grid(self, n: int):
        """Verify the collision relation strictly increases over 1000 points of [0, 1]."""
        values = [beta_from_collision(k / 999, n) for k in range(1000)]

        assert values[0] == 0.0
        assert values[-1] == pytest.approx(1.0)
        assert all(a < b for a, b in zip(values, values[1:], strict=False))

    def test_needs_two_nodes(self):
        """Verify n < 2 is rejected."""
        with pytest.raises(DomainError):
            beta_from_collision(0.1, 1)


class TestFixedPoint:
    """Tests for the bisection solver."""

    def test_three_nodes(self, default_params: DcfParams):
        """Verify the n=3 fixed point under the defaults."""
        solution = solve_fixed_point(3, default_params)

        assert solution.p == pytest.approx(0.10456, abs=5e-4)
        assert solution.beta == pytest.approx(0.05372, abs=3e-4)
        assert abs(solution.residual) < 1e-6
        assert solution.iterations > 0

    def test_relations_agree(self):
        """Verify both relations give the same beta at the root."""
        solution = solve_fixed_point(10)
        assert beta_from_collision(solution.p, 10) == pytest.approx(solution.beta, rel=1e-6)

    def test_collisions_grow_with_n(self):
        """Verify p increases with the number of contenders."""
        ps = [solve_fixed_point(n).p for n in (2, 3, 5, 10, 30)]
        assert ps == sorted(ps)

    @pytest.mark.parametrize("n", range(2, 51))
    def test_single_crossing(self, n: int):
        """Verify the relations cross exactly once on a 1e-4 grid and the root lies in that cell."""
        grid = [k * 1e-4 for k in range(10_001)]
        positive = [beta_from_backoff(p, 32, 5) > beta_from_collision(p, n) for p in grid]
        changes = [k for k in range(len(grid) - 1) if positive[k] != positive[k + 1]]

        assert positive[0]
        assert not positive[-1]
        assert len(changes) == 1
        k = changes[0]
        assert grid[k] - 1e-8 <= solve_fixed_point(n).p <= grid[k + 1] + 1e-8

    def test_rejects_single_node(self):
        """Verify n < 2 is a domain error."""
        with pytest.raises(DomainError):
            solve_fixed_point(1)

    def test_iteration_cap(self):
        """Verify hitting the iteration cap raises ConvergenceError."""
        with pytest.raises(ConvergenceError) as exc_info:
            solve_fixed_point(3, tol=1e-12, max_iter=3)
        assert exc_info.value.iterations <= 3
        assert math.isfinite(exc_info.value.residual)


class TestSlotModel:
    """Tests for slot durations, probabilities and throughput."""

    def test_default_durations(self, default_params: DcfParams):
        """Verify 1500-byte frames at 1 Mbps give the expected slot lengths (us)."""
        durations = slot_durations(default_params)

        assert durations.t_idle == pytest.approx(20.0)
        assert durations.t_success == pytest.approx(12828.0)
        assert durations.t_collision == pytest.approx(12514.0)

    def test_propagation_delay_counts(self):
        """Verify propagation delay lengthens both busy slots."""
        base = slot_durations(DcfParams())
        delayed = slot_durations(DcfParams(propagation_delay=1.0))

        assert delayed.t_success == pytest.approx(base.t_success + 2.0)
        assert delayed.t_collision == pytest.approx(base.t_collision + 1.0)

    @pytest.mark.parametrize("n", [1, 2, 5, 30])
    def test_probabilities_sum_to_one(self, n: int):
        """Verify slot outcome probabilities form a distribution."""
        probs = slot_probabilities(0.05, n)
        assert sum(probs) == pytest.approx(1.0, abs=1e-12)

    def test_random_probabilities_sum_to_one(self):
        """Verify the distribution property for 1000 random (beta, n) pairs."""
        rng = random.Random(17)
        for _ in range(1000):
            beta, n = rng.random(), rng.randint(1, 50)
            probs = slot_probabilities(beta, n)

            assert sum(probs) == pytest.approx(1.0, abs=1e-12)
            assert all(0.0 <= q <= 1.0 for q in probs)

    def test_single_node_never_collides(self):
        """Verify a lone node cannot collide."""
        probs = slot_probabilities(0.3, 1)
        assert probs.p_collision == pytest.approx(0.0, abs=1e-15)

    def test_slot_model_fields(self):
        """Verify the slot model carries the durations and throughput."""
        model = slot_model(3)

        assert model.t_success == pytest.approx(12828.0)
        assert model.throughput_pps == pytest.approx(aggregate_throughput(3))


class TestThroughput:
    """Tests for saturation throughput."""

    def test_three_nodes_near_table_capacity(self):
        """Verify S(3) lies within 2% of 72.5 pkts/s."""
        assert aggregate_throughput(3) == pytest.approx(72.5, rel=0.02)

    def test_known_values(self):
        """Verify hand-computed throughputs."""
        assert aggregate_throughput(3) == pytest.approx(73.16, abs=0.1)
        assert aggregate_throughput(5) == pytest.approx(70.3, abs=0.5)

    def test_curve_shape(self):
        """Verify the curve covers [2, 30] and decreases with n."""
        curve = throughput_curve(2, 30)

        assert [pt.n for pt in curve] == list(range(2, 31))
        values = [pt.throughput_pps for pt in curve]
        assert all(a > b for a, b in zip(values, values[1:], strict=False))

    def test_curve_flat_for_small_cells(self):
        """Verify S(n) stays within 10% of its mean for n in [2, 10]."""
        values = [pt.throughput_pps for pt in throughput_curve(2, 10)]
        mean = sum(values) / len(values)
        assert all(abs(v - mean) <= 0.1 * mean for v in values)

    @pytest.mark.parametrize("k", [0.5, 2.0, 10.0])
    def test_time_scaling(self, k: float):
        """Verify stretching every duration by k divides the throughput by k."""
        base = DcfParams()
        stretched = DcfParams(
            slot_time=base.slot_time * k,
            sifs=base.sifs * k,
            difs=base.difs * k,
            phy_header_time=base.phy_header_time * k,
            propagation_delay=base.propagation_delay * k,
            data_rate=base.data_rate / k,
        )

        for n in (2, 3, 10):
            assert aggregate_throughput(n, stretched) == pytest.approx(
                aggregate_throughput(n, base) / k, rel=1e-9
            )

    def test_larger_payload_fewer_packets(self):
        """Verify doubling the payload lowers the packet rate."""
        assert aggregate_throughput(3, DcfParams(payload_bits=24000)) < aggregate_throughput(3)

    @pytest.mark.parametrize(("n_min", "n_max"), [(1, 5), (5, 4)])
    def test_curve_domain(self, n_min: int, n_max: int):
        """Verify invalid ranges are rejected."""
        with pytest.raises(DomainError):
            throughput_curve(n_min, n_max)

    def test_max_stable_rate_five_nodes(self):
        """Verify the per-node capacity of a five-node cell lies between 14.0 and 14.6."""
        rate = max_stable_rate(5)

        assert rate * 5 == pytest.approx(aggregate_throughput(5))
        assert 14.0 < rate < 14.6
