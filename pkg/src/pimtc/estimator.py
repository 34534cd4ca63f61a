"""Turn per-core raw counts into a global triangle estimate."""
from __future__ import annotations

from dataclasses import dataclass

from .partitioner import num_cores


def reservoir_factor(M: int, t: int) -> float:
    """Probability that three given edges all survive in a size-M reservoir after t offers."""
    if M < 3:
        raise ValueError(f"capacity must be >= 3, got {M}")
    if t <= M:
        return 1.0
    return (M * (M - 1) * (M - 2)) / (t * (t - 1) * (t - 2))


def correct_core(report) -> float:
    return report.raw_count / reservoir_factor(report.capacity, report.t)


@dataclass(frozen=True)
class Estimate:
    value: float
    exact: bool

    @property
    def rounded(self) -> int:
        # round() is half-to-even
        return round(self.value)

    @property
    def negative(self) -> bool:
        return self.value < 0


def aggregate(reports, colors: int, uniform_p: float = 1.0) -> Estimate:
    """Combine core reports.

    Each core's count is reservoir-corrected first; the C-fold monochromatic
    overcount is then removed using the single-color cores, and the total is
    divided by ``uniform_p**3``.
    """
    reports = list(reports)
    if len(reports) != num_cores(colors):
        raise ValueError(f"expected {num_cores(colors)} reports for C={colors}, got {len(reports)}")
    mono = [r for r in reports if r.is_monochromatic]
    if len(mono) != colors:
        raise ValueError(f"expected {colors} monochromatic cores, got {len(mono)}")
    if not 0.0 < uniform_p <= 1.0:
        raise ValueError(f"uniform_p must be in (0, 1], got {uniform_p}")

    total = sum(correct_core(r) for r in reports)
    mono_total = sum(correct_core(r) for r in mono)
    value = (total - (colors - 1) * mono_total) / uniform_p**3
    exact = uniform_p == 1.0 and all(r.t <= r.capacity for r in reports)
    return Estimate(float(value), exact)
