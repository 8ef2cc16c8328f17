"""Estimators of the oracle cascade size from a partial-network cascade."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from os import PathLike

import numpy as np

from .diffusion import DiffusionTrace, TraceBatch
from .graph import Graph, GraphError


@dataclass(frozen=True)
class PartialCascadeProfile:
    """Per-level sizes and mean partial-graph degrees of one partial cascade.

    ``per_level_sizes[0]`` is the seed count. ``fallback_degree`` (the partial
    graph's mean degree) stands in for levels with no activations.
    """

    per_level_sizes: tuple
    per_level_mean_degree: tuple
    rho: float
    p: float
    fallback_degree: float = 0.0

    def __post_init__(self):
        if not self.per_level_sizes:
            raise GraphError("empty profile")
        if len(self.per_level_mean_degree) != len(self.per_level_sizes):
            raise GraphError("sizes and degrees must have the same length")
        if any(x < 0 for x in self.per_level_sizes) or any(x < 0 for x in self.per_level_mean_degree):
            raise GraphError("profile entries must be nonnegative")

    @property
    def seed_count(self) -> float:
        return self.per_level_sizes[0]

    @property
    def sigma_p(self) -> float:
        return float(sum(self.per_level_sizes))


@dataclass(frozen=True)
class CorrectionEstimate:
    method: str
    sigma_hat: float
    per_level: tuple | None = None
    mode: str = ""


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho < 1.0:
        raise GraphError(f"rho must lie in [0, 1), got {rho}")


def profile_from_trace(trace: DiffusionTrace, g_partial: Graph, rho: float, p: float) -> PartialCascadeProfile:
    return profiles_from_batch(trace.activation_time[None, :], g_partial, rho, p)[0]


def profile_arrays(times: np.ndarray, g_partial: Graph) -> tuple[np.ndarray, np.ndarray]:
    """(runs, levels) matrices of level sizes and mean degrees of level members."""
    times = np.atleast_2d(times)
    runs = times.shape[0]
    act = times >= 0
    width = int(times.max()) + 1 if act.any() else 1
    row = np.broadcast_to(np.arange(runs)[:, None], times.shape)
    idx = row[act] * width + times[act]
    deg = np.broadcast_to(g_partial.degrees().astype(np.float64), times.shape)[act]
    sizes = np.bincount(idx, minlength=runs * width).reshape(runs, width).astype(np.float64)
    dsum = np.bincount(idx, weights=deg, minlength=runs * width).reshape(runs, width)
    mean_deg = np.divide(dsum, sizes, out=np.zeros_like(dsum), where=sizes > 0)
    return sizes, mean_deg


def profiles_from_batch(times, g_partial: Graph, rho: float, p: float) -> list[PartialCascadeProfile]:
    if isinstance(times, TraceBatch):
        times = times.times
    sizes, mean_deg = profile_arrays(times, g_partial)
    avg = 2.0 * g_partial.edge_count / max(g_partial.node_count, 1)
    out = []
    for s, d in zip(sizes, mean_deg):
        h = int(np.flatnonzero(s)[-1]) + 1 if s.any() else 1
        out.append(PartialCascadeProfile(tuple(s[:h].tolist()), tuple(d[:h].tolist()), rho, p, avg))
    return out


def sice(profile: PartialCascadeProfile, literal: bool = False) -> CorrectionEstimate:
    """Simple expansion: inflate non-seed activations by 1/(1 - rho).

    ``literal`` inflates the whole partial cascade, seeds included.
    """
    _check_rho(profile.rho)
    s = profile.seed_count
    if literal:
        return CorrectionEstimate("sice", profile.sigma_p / (1.0 - profile.rho), None, "literal")
    return CorrectionEstimate("sice", s + (profile.sigma_p - s) / (1.0 - profile.rho), None, "per-node")


def rece(profile: PartialCascadeProfile) -> CorrectionEstimate:
    """Recursive expansion, level by level.

    Level 0 is kept, level 1 is inflated by 1/(1 - rho); from level 2 on the
    nodes inferred at the previous level also spread, each reaching
    ``E(deg) * p`` further nodes. Nothing is inferred past the last nonempty
    level, the cascade's horizon.
    """
    _check_rho(profile.rho)
    sizes = profile.per_level_sizes
    degs = profile.per_level_mean_degree
    scale = 1.0 / (1.0 - profile.rho)
    nonempty = [t for t, s in enumerate(sizes) if s > 0]
    horizon = nonempty[-1] + 1 if nonempty else 1
    est = [float(sizes[0])]
    for t in range(1, horizon):
        cur = sizes[t] * scale
        if t >= 2:
            prev_deg = degs[t - 1] if sizes[t - 1] > 0 else profile.fallback_degree
            cur += (est[t - 1] - sizes[t - 1]) * prev_deg * profile.p
        est.append(cur)
    est += [0.0] * (len(sizes) - horizon)
    return CorrectionEstimate("rece", float(sum(est)), tuple(est))


def partial(profile: PartialCascadeProfile) -> CorrectionEstimate:
    return CorrectionEstimate("partial", profile.sigma_p)


def rece_arrays(sizes: np.ndarray, mean_deg: np.ndarray, rho: float, p: float,
                fallback_degree: float) -> np.ndarray:
    """Vectorised :func:`rece` over the rows of ``profile_arrays`` output."""
    _check_rho(rho)
    scale = 1.0 / (1.0 - rho)
    width = sizes.shape[1]
    last = width - 1 - np.argmax(sizes[:, ::-1] > 0, axis=1)
    est = np.zeros_like(sizes)
    est[:, 0] = sizes[:, 0]
    for t in range(1, width):
        est[:, t] = sizes[:, t] * scale
        if t >= 2:
            d = np.where(sizes[:, t - 1] > 0, mean_deg[:, t - 1], fallback_degree)
            est[:, t] += (est[:, t - 1] - sizes[:, t - 1]) * d * p
        # rows are padded past their own horizon
        est[last < t, t] = 0.0
    return est.sum(axis=1)


def correction_error(sigma: float, sigma_hat: float) -> float:
    if sigma <= 0:
        raise GraphError("sigma must be positive")
    return abs(sigma - sigma_hat) / sigma


def read_profile(path: str | PathLike, rho: float, p: float,
                 fallback_degree: float | None = None) -> PartialCascadeProfile:
    """CSV with header ``step,size,mean_degree``, one row per level from 0.

    Without ``fallback_degree`` the mean degree over nonempty levels is used.
    """
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise GraphError(f"{path}: empty profile")
    rows.sort(key=lambda r: int(r["step"]))
    if [int(r["step"]) for r in rows] != list(range(len(rows))):
        raise GraphError(f"{path}: steps must run 0..h without gaps")
    sizes = tuple(float(r["size"]) for r in rows)
    degs = tuple(float(r["mean_degree"]) for r in rows)
    if fallback_degree is None:
        nz = [d for s, d in zip(sizes, degs) if s > 0]
        fallback_degree = float(np.mean(nz)) if nz else 0.0
    return PartialCascadeProfile(sizes, degs, rho, p, fallback_degree)


def write_profile(profile: PartialCascadeProfile, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        fh.write("step,size,mean_degree\n")
        for t, (s, d) in enumerate(zip(profile.per_level_sizes, profile.per_level_mean_degree)):
            fh.write(f"{t},{s!r},{d!r}\n")
