"""Point-time selection and parabolic rescaling of flow histories.

Selection maximizes the weight t*(T - t)*|Rm| over the recorded
spacetime grid; rescaling normalizes curvature at the selected point to
one by scaling the metric by the selected curvature and reparametrizing
time.  The a-posteriori curvature bound that selection buys is exposed
as a plain function so tests can assert it pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BallOutOfGrid, DomainError, FlatHistory, WindowOutOfRange
from .flow import SurfaceSolution, profile_at
from .profiles import SpectrumHistory
from .serialize import json_dumps

__all__ = [
    "DilationRecord",
    "DilatableReport",
    "select_point",
    "rescale",
    "rescaled_bound",
    "dilatable_check",
]


@dataclass(frozen=True)
class DilationRecord:
    """One selected point-time with its normalization data.

    alpha = time * curvature and omega = (window_end - time) * curvature
    are the rescaled distances to the ends of the selection window; the
    curvature bound on the rescaled solution is phrased in terms of them.
    """

    point_index: int
    time: float
    curvature: float
    window_end: float
    epsilon: float
    alpha: float
    omega: float
    selection_ratio: float

    def __post_init__(self) -> None:
        if not (0 < self.time < self.window_end):
            raise ValueError(f"need 0 < time < window_end, got {self.time}, {self.window_end}")
        if not self.curvature > 0:
            raise ValueError("curvature must be positive")
        if self.selection_ratio < 1.0 - self.epsilon - 1e-12:
            raise ValueError(
                f"selection ratio {self.selection_ratio} below 1 - epsilon"
            )
        scale = max(1.0, abs(self.alpha), abs(self.omega))
        if abs(self.alpha - self.time * self.curvature) > 1e-9 * scale:
            raise ValueError("alpha must equal time * curvature")
        if abs(self.omega - (self.window_end - self.time) * self.curvature) > 1e-9 * scale:
            raise ValueError("omega must equal (window_end - time) * curvature")

    def as_dict(self) -> dict:
        return {
            "point_index": self.point_index,
            "time": self.time,
            "curvature": self.curvature,
            "window_end": self.window_end,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "omega": self.omega,
            "selection_ratio": self.selection_ratio,
        }

    def to_json(self) -> str:
        return json_dumps(self.as_dict())


def select_point(
    history: SpectrumHistory, window_end: float, epsilon: float = 0.0
) -> DilationRecord:
    """Pick the (point, time) with near-maximal weight t*(T-t)*|Rm|.

    The first candidate in (time asc, point asc) order whose weight
    reaches (1 - epsilon) times the grid supremum wins, so epsilon > 0
    can deliberately accept an earlier time than the argmax.  On a
    discrete grid with epsilon = 0 this is the plain argmax with
    deterministic tie-breaking.
    """
    if epsilon < 0 or epsilon >= 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    times = history.times
    if window_end > times[-1] + 1e-12 or times[0] > 1e-12:
        raise WindowOutOfRange(
            f"history [{times[0]}, {times[-1]}] does not cover [0, {window_end}]"
        )

    weights: list[tuple[int, np.ndarray]] = []
    sup = 0.0
    for i, t in enumerate(times):
        w = t * (window_end - t)
        if w <= 0:
            continue
        row = w * history.spectra[i].rm_norm
        weights.append((i, row))
        sup = max(sup, float(row.max()))
    if sup <= 0.0:
        raise FlatHistory("rm_norm vanishes on the whole selection window")

    accept = (1.0 - epsilon) * sup
    for i, row in weights:
        hits = np.nonzero(row >= accept)[0]
        if hits.size:
            j = int(hits[0])
            t_sel = float(times[i])
            k_sel = float(history.spectra[i].rm_norm[j])
            return DilationRecord(
                point_index=j,
                time=t_sel,
                curvature=k_sel,
                window_end=window_end,
                epsilon=epsilon,
                alpha=t_sel * k_sel,
                omega=(window_end - t_sel) * k_sel,
                selection_ratio=float(row[j]) / sup,
            )
    raise AssertionError("unreachable: supremum candidate not re-found")


def rescaled_bound(rec: DilationRecord, t: float) -> float:
    """Curvature bound for the rescaled solution at rescaled time t.

    Valid on (-alpha, omega); diverges at both ends.
    """
    if t <= -rec.alpha or t >= rec.omega:
        raise DomainError(f"t = {t} outside (-{rec.alpha}, {rec.omega})")
    return (
        (1.0 / (1.0 - rec.epsilon))
        * (rec.alpha / (rec.alpha + t))
        * (rec.omega / (rec.omega - t))
    )


def rescale(
    sol: SurfaceSolution, rec: DilationRecord, beta: float, psi: float
) -> SurfaceSolution:
    """Parabolic rescaling g -> K * g(t_sel + t/K) on rescaled [beta, psi].

    Metric coefficients scale by sqrt(K); recomputed curvature then
    scales by exactly 1/K because the discrete kernel is scale
    covariant.  Output times are the recorded times inside the source
    window, mapped to the rescaled clock, with interpolated endpoint
    states so the window is covered exactly.
    """
    if not (beta < 0 < psi):
        raise ValueError(f"need beta < 0 < psi, got {beta}, {psi}")
    k = rec.curvature
    s_lo = rec.time + beta / k
    s_hi = rec.time + psi / k
    times = sol.times
    if s_lo < times[0] - 1e-12 or s_hi > times[-1] + 1e-12:
        raise WindowOutOfRange(
            f"source window [{s_lo}, {s_hi}] outside recorded [{times[0]}, {times[-1]}]"
        )

    root = math.sqrt(k)
    inside = np.nonzero((times > s_lo + 1e-14) & (times < s_hi - 1e-14))[0]
    source_times = [s_lo] + [float(times[i]) for i in inside] + [s_hi]
    source_scales = [float(np.interp(s, times, sol.theta_scales)) for s in source_times]

    new_profiles = []
    new_times = []
    for s, scale in zip(source_times, source_scales):
        p = profile_at(sol, s)
        t_new = k * (s - rec.time)
        new_profiles.append(
            p.replace(phi=root * p.phi, f=root * p.f, time_stamp=t_new)
        )
        new_times.append(t_new)
    return SurfaceSolution(
        np.asarray(new_times), new_profiles, np.asarray(source_scales)
    )


@dataclass(frozen=True)
class DilatableReport:
    """Spacetime curvature ratio over a ball around the selected point.

    c_const bounds rm_norm / K over the sampled window; ball_truncated
    flags that the requested radius ran off the grid, in which case the
    ratio covers the clipped ball only.
    """

    c_const: float
    ball_truncated: bool
    n_ball_points: int
    n_times: int

    def as_dict(self) -> dict:
        return {
            "c_const": self.c_const,
            "ball_truncated": self.ball_truncated,
            "n_ball_points": self.n_ball_points,
            "n_times": self.n_times,
        }


def dilatable_check(
    history: SpectrumHistory,
    rec: DilationRecord,
    beta: float,
    psi: float,
    rho: float,
    closed_tip: bool = False,
    strict: bool = False,
) -> DilatableReport:
    """Estimate the dilatability constant C = max rm_norm / K.

    The ball of radius rho/sqrt(K) around the selected point is measured
    in the selection-time metric (arclength integral of phi along r).
    Requires the history to carry its grid and phi fields.  A ball
    touching a grid end is flagged truncated, except at a closed tip
    where the surface genuinely ends and no geometry is missing.
    """
    if history.r_grid is None or history.phi is None:
        raise ValueError("history lacks grid/phi data needed for the ball metric")
    if not (beta < 0 < psi):
        raise ValueError(f"need beta < 0 < psi, got {beta}, {psi}")
    if rho <= 0:
        raise ValueError("rho must be positive")

    times = history.times
    i_sel = int(np.argmin(np.abs(times - rec.time)))
    phi_sel = history.phi[i_sel]
    h = float(history.r_grid[1] - history.r_grid[0])
    seg = 0.5 * (phi_sel[:-1] + phi_sel[1:]) * h
    pos = np.concatenate(([0.0], np.cumsum(seg)))
    dist = np.abs(pos - pos[rec.point_index])

    radius = rho / math.sqrt(rec.curvature)
    in_ball = dist <= radius + 1e-12
    left_room = float(dist[0])
    right_room = float(dist[-1])
    truncated = radius > right_room + 1e-12 or (
        not closed_tip and radius > left_room + 1e-12
    )
    if strict and truncated:
        raise BallOutOfGrid(
            f"ball radius {radius:.3e} exceeds the grid around index {rec.point_index}"
        )

    s_lo = rec.time + beta / rec.curvature
    s_hi = rec.time + psi / rec.curvature
    t_mask = (times >= s_lo - 1e-12) & (times <= s_hi + 1e-12)
    if not np.any(t_mask):
        raise WindowOutOfRange("no recorded times inside the dilation window")

    c_best = 0.0
    for i in np.nonzero(t_mask)[0]:
        rm = history.spectra[i].rm_norm[in_ball]
        c_best = max(c_best, float(rm.max()) / rec.curvature)
    return DilatableReport(
        c_const=c_best,
        ball_truncated=truncated,
        n_ball_points=int(np.count_nonzero(in_ball)),
        n_times=int(np.count_nonzero(t_mask)),
    )
