"""Distribution and correlation primitives behind the checklist pipelines.

The two-sample Kolmogorov-Smirnov distance is evaluated exactly at the pooled
sample points (sufficient for step ECDFs); it is descriptive, with no p-values
or continuity corrections.  Correlations are Pearson and Spearman (Pearson on
average ranks), with non-finite values dropped pairwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Ecdf", "KsReport", "CorrelationResult", "ecdf", "ks_distance", "correlation"]


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous empirical CDF: F(x) = (# samples <= x) / n."""

    points: np.ndarray  # sorted ascending, finite

    @property
    def n(self) -> int:
        return int(self.points.size)

    def __call__(self, x):
        """Evaluate F at a scalar or array of points."""
        positions = np.searchsorted(self.points, np.asarray(x, dtype=float), side="right")
        result = positions / self.points.size
        return float(result) if np.ndim(result) == 0 else result


def ecdf(samples) -> Ecdf:
    """Build an ECDF from a non-empty collection of finite reals."""
    values = np.asarray(list(samples), dtype=float)
    if values.size == 0:
        raise ValueError("cannot build an ECDF from an empty sample")
    if not np.all(np.isfinite(values)):
        raise ValueError("sample contains non-finite values")
    return Ecdf(np.sort(values))


@dataclass(frozen=True)
class KsReport:
    """Two-sample KS distance with the compared group labels and sizes."""

    label_a: str
    label_b: str
    d: float
    n_a: int
    n_b: int


def ks_distance(a, b, label_a: str = "a", label_b: str = "b") -> KsReport:
    """Supremum of |F_a - F_b| over the pooled sample points.

    Exact for step ECDFs, symmetric in the two samples, and invariant under
    any strictly increasing transform applied to both sides.
    """
    try:
        cdf_a = ecdf(a)
    except ValueError as exc:
        raise ValueError(f"group {label_a!r}: {exc}") from None
    try:
        cdf_b = ecdf(b)
    except ValueError as exc:
        raise ValueError(f"group {label_b!r}: {exc}") from None
    pooled = np.concatenate([cdf_a.points, cdf_b.points])
    d = float(np.max(np.abs(cdf_a(pooled) - cdf_b(pooled))))
    return KsReport(label_a, label_b, d, cdf_a.n, cdf_b.n)


@dataclass(frozen=True)
class CorrelationResult:
    """Correlation coefficient, or a reason why it is undefined."""

    method: str
    rho: float | None
    n: int
    reason: str | None = None


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned the average of their positions."""
    unique, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    group_end = np.cumsum(counts)  # rank of each group's last member
    return (group_end - (counts - 1) / 2.0)[inverse]


def correlation(x, y, method: str = "spearman") -> CorrelationResult:
    """Pearson or Spearman correlation with pairwise dropping of non-finite values.

    Returns a missing result (rho None, with a reason) when fewer than three
    finite pairs remain or either series is constant; the effective n after
    dropping is always reported.
    """
    if method not in ("pearson", "spearman"):
        raise ValueError(f"unknown method: {method!r}")
    xs = np.asarray(list(x), dtype=float)
    ys = np.asarray(list(y), dtype=float)
    if xs.size != ys.size:
        raise ValueError(f"length mismatch: {xs.size} vs {ys.size}")
    keep = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[keep], ys[keep]
    n = int(xs.size)
    if n < 3:
        return CorrelationResult(method, None, n, "fewer than 3 paired finite values")
    if method == "spearman":
        xs, ys = _average_ranks(xs), _average_ranks(ys)
    if np.ptp(xs) == 0:
        return CorrelationResult(method, None, n, "constant series x")
    if np.ptp(ys) == 0:
        return CorrelationResult(method, None, n, "constant series y")
    xc = xs - xs.mean()
    yc = ys - ys.mean()
    sum_xx = float(np.dot(xc, xc))
    sum_yy = float(np.dot(yc, yc))
    # Centered squares can underflow to zero for subnormal-scale inputs; such
    # a series is constant at double precision.
    if sum_xx == 0.0:
        return CorrelationResult(method, None, n, "constant series x")
    if sum_yy == 0.0:
        return CorrelationResult(method, None, n, "constant series y")
    rho = float(np.dot(xc, yc)) / (np.sqrt(sum_xx) * np.sqrt(sum_yy))
    rho = max(-1.0, min(1.0, rho))
    return CorrelationResult(method, rho, n)
