"""Relative error across samples and convergence z-scores."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class SampleSummary:
    """Means over the r runs of one hidden-node sample."""

    sample_id: int
    rho: float
    gamma: float
    mean_sigma: float
    mean_sigma_o: float
    mean_sigma_ph: float
    mean_sigma_h: float
    mean_sigma_p: float
    run_count: int
    run_sizes: tuple = field(default=(), repr=False, compare=False)

    @property
    def visible_oracle(self) -> float:
        return self.mean_sigma_o + self.mean_sigma_ph


def sample_errors(summaries) -> np.ndarray:
    """|(E(s_ph) + E(s_o)) - E(s_p)| / (E(s_ph) + E(s_o)) for each sample."""
    out = []
    for s in summaries:
        denom = s.visible_oracle
        if denom <= 0:
            raise MetricError(f"sample {s.sample_id}: observed + phantom mean is zero")
        out.append(abs(denom - s.mean_sigma_p) / denom)
    return np.asarray(out, dtype=np.float64)


def relative_error(summaries) -> float:
    errs = sample_errors(summaries)
    if errs.size == 0:
        raise MetricError("no samples")
    return float(errs.mean())


def normal_ci(values, z: float = 1.959963984540054) -> tuple[float, float, float]:
    """Mean with a normal-approximation 95% interval (degenerate for one value)."""
    x = np.asarray(values, dtype=np.float64)
    m = float(x.mean())
    if x.size < 2:
        return m, m, m
    half = z * float(x.std(ddof=1)) / math.sqrt(x.size)
    return m, m - half, m + half


def convergence_zscores(run_sizes, r_max: int | None = None) -> np.ndarray:
    """z_r = (running mean after r runs - mean at r_max) / population std at r_max.

    All zeros when every run has the same size.
    """
    x = np.asarray(run_sizes, dtype=np.float64)
    if r_max is None:
        r_max = x.size
    if r_max != x.size or r_max < 2:
        raise MetricError("need r_max == len(run_sizes) >= 2")
    final = x.mean()
    std = x.std()
    running = np.cumsum(x) / np.arange(1, r_max + 1)
    if std == 0.0:
        return np.zeros(r_max)
    z = (running - final) / std
    z[-1] = 0.0
    return z
