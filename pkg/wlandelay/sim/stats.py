"""Replication statistics and confidence intervals."""

import math
from dataclasses import dataclass

from scipy import stats as scipy_stats

from wlandelay.config import settings
from wlandelay.core.exceptions import InsufficientReplicationsError


@dataclass
class ReplicationStats:
    """Running mean and sum of squared deviations (Welford).

    Non-finite observations are not folded in; ``skipped`` counts them.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    skipped: int = 0

    def push(self, value: float) -> None:
        """Add one observation."""
        if not math.isfinite(value):
            self.skipped += 1
            return
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    def merge(self, other: "ReplicationStats") -> "ReplicationStats":
        """Combined statistics of two disjoint samples (Chan et al. update)."""
        skipped = self.skipped + other.skipped
        if other.count == 0:
            return ReplicationStats(self.count, self.mean, self.m2, skipped)
        if self.count == 0:
            return ReplicationStats(other.count, other.mean, other.m2, skipped)
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / count
        return ReplicationStats(count, mean, m2, skipped)

    @property
    def variance(self) -> float:
        """Unbiased sample variance."""
        if self.count < 2:
            raise InsufficientReplicationsError(f"variance needs >= 2 observations, have {self.count}")
        return max(self.m2, 0.0) / (self.count - 1)

    def ci95(self, confidence: float | None = None) -> tuple[float, float]:
        """Shortcut for :func:`ci95`."""
        return ci95(self, confidence)

    def halfwidth_or_nan(self, confidence: float | None = None) -> float:
        """CI halfwidth, or NaN when fewer than two observations exist."""
        if self.count < 2:
            return math.nan
        return ci95(self, confidence)[1]


def t_quantile(confidence: float, dof: int) -> float:
    """Two-sided Student-t critical value."""
    return float(scipy_stats.t.ppf(0.5 + confidence / 2.0, df=dof))


def ci95(stats: ReplicationStats, confidence: float | None = None) -> tuple[float, float]:
    """Mean and Student-t confidence halfwidth.

    The level defaults to ``settings.CONFIDENCE_LEVEL`` (0.95).
    """
    if stats.count < 2:
        raise InsufficientReplicationsError(
            f"confidence interval needs >= 2 replications, have {stats.count}"
        )
    level = settings.CONFIDENCE_LEVEL if confidence is None else confidence
    halfwidth = t_quantile(level, stats.count - 1) * math.sqrt(stats.variance / stats.count)
    return stats.mean, halfwidth
