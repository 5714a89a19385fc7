"""Assembly of local warped profiles into one global surface.

Collapsed limits are reconstructed chart by chart: each chart carries a
radial profile in its own coordinate, neighbouring charts are identified
by a shift of the radial coordinate (plus a multiplicative theta-period
register), and the identified chain is blended into a single profile.
If the warping closes up at an end, the surface is completed to a disk
there, with the tip slope deciding between a smooth point and a cone
point of order p.  The symbolic side lives in ``classify_local_model``,
which enumerates the admissible (case, group, identity component,
topology) rows for collapsed neighbourhoods, and in the singular-point
budget check.  ``cigar_compare`` measures how far a positively curved
closed-tip solution is from the steady soliton family.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    ClosureFailure,
    InconsistentInput,
    NoOverlap,
    NotPositive,
    SeamMismatch,
    TwoClosedEnds,
)
from .flow import SurfaceSolution, trusted_slice
from .profiles import RadialProfile, gauss_curvature
from .serialize import json_dumps, write_csv

__all__ = [
    "OverlapRecord",
    "ProfileWindow",
    "cut_windows",
    "overlap_identify",
    "chain_identify",
    "glue",
    "extend_to_disk",
    "LocalModel",
    "ModelRejection",
    "classify_local_model",
    "SingularPoint",
    "SingularReport",
    "detect_singular_points",
    "CigarReport",
    "cigar_compare",
    "write_comparison",
]

SHIFT_REFINE = 16  # sub-grid resolution of the shift search, in grid steps


def _locked(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class OverlapRecord:
    """Identification of two overlapping charts.

    ``r0`` shifts the right chart's coordinate onto the left one
    (f_right(x - r0) matches f_left(x) on the overlap), ``theta_scale``
    is the multiplicative theta-period register between the charts, and
    ``residual`` is the post-fit max mismatch of the warpings.
    """

    r0: float
    theta_scale: float
    residual: float

    def as_dict(self) -> dict:
        return {
            "r0": self.r0,
            "theta_scale": self.theta_scale,
            "residual": self.residual,
        }

    def to_json(self) -> str:
        return json_dumps(self.as_dict())


@dataclass
class ProfileWindow:
    """One chart of a covering chain: a profile in local coordinates plus
    its nominal global center.  ``start_r`` records where the local origin
    sits globally when known (cut_windows fills it in); overlap records
    link to the neighbours once identified."""

    profile: RadialProfile
    center_r: float
    start_r: float | None = None
    overlap_left: OverlapRecord | None = None
    overlap_right: OverlapRecord | None = None


def cut_windows(
    profile: RadialProfile,
    centers,
    half_width: float,
) -> list[ProfileWindow]:
    """Cut overlapping windows out of a global profile, one per center.

    Each window is re-based to its own local coordinate starting at 0.
    Neighbouring windows must overlap by at least 2 grid spacings.
    """
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    centers = [float(c) for c in centers]
    if any(b <= a for a, b in zip(centers, centers[1:])):
        raise ValueError("centers must be strictly increasing")
    r, h = profile.r_grid, profile.h
    windows: list[ProfileWindow] = []
    prev_hi = None
    for c in centers:
        mask = (r >= c - half_width - 1e-9 * h) & (r <= c + half_width + 1e-9 * h)
        idx = np.nonzero(mask)[0]
        if idx.size < 5:
            raise ValueError(f"window at {c:g} covers fewer than 5 grid points")
        lo, hi = idx[0], idx[-1]
        if prev_hi is not None and r[prev_hi] - r[lo] < 2 * h - 1e-9 * h:
            raise ValueError("neighbouring windows must overlap by >= 2 grid spacings")
        prev_hi = hi
        sub_f = profile.f[lo : hi + 1]
        tip = bool(sub_f[0] == 0.0)
        windows.append(
            ProfileWindow(
                RadialProfile(
                    r[lo : hi + 1] - r[lo],
                    profile.phi[lo : hi + 1],
                    sub_f,
                    cone_order=profile.cone_order if tip else 1,
                    tip_slope_tol=profile.tip_slope_tol,
                ),
                center_r=c,
                start_r=float(r[lo]),
            )
        )
    return windows


def overlap_identify(
    left: RadialProfile,
    right: RadialProfile,
    search_range,
) -> OverlapRecord:
    """Find the coordinate shift identifying two overlapping charts.

    The shift is scanned over ``search_range`` on a sub-grid of step
    h/16, with the right profile evaluated by cubic interpolation on the
    left grid; the L2 mismatch of the warpings picks the winner and a
    parabolic pass refines it below the scan resolution.  The best
    multiplicative register c1 is fit alongside; an identification whose
    register strays far from |c1| = 1 is not an isometry and counts as
    no overlap.
    """
    h_l, h_r = left.h, right.h
    h_max = max(h_l, h_r)
    step = min(h_l, h_r) / SHIFT_REFINE
    s_lo, s_hi = float(search_range[0]), float(search_range[1])
    if s_hi < s_lo:
        raise ValueError("search_range must satisfy lo <= hi")
    n_cand = int(round((s_hi - s_lo) / step)) + 1 if s_hi > s_lo else 1
    shifts = s_lo + step * np.arange(n_cand)

    spline = CubicSpline(right.r_grid, right.f)
    rl, fl = left.r_grid, left.f

    def fit(s: float):
        lo = max(rl[0], right.r_grid[0] + s)
        hi = min(rl[-1], right.r_grid[-1] + s)
        if hi - lo < 2 * h_max - 1e-9 * h_max:
            return None
        mask = (rl >= lo - 1e-12) & (rl <= hi + 1e-12)
        if np.count_nonzero(mask) < 3:
            return None
        y = fl[mask]
        z = spline(rl[mask] - s)
        denom = float(z @ z)
        if denom <= 0.0:
            return None
        c = float(y @ z) / denom
        miss = y - c * z
        return float(miss @ miss) / y.size, c, float(np.abs(miss).max())

    l2 = np.full(n_cand, np.inf)
    for j, s in enumerate(shifts):
        got = fit(float(s))
        if got is not None:
            l2[j] = got[0]
    if not np.isfinite(l2).any():
        raise NoOverlap("no candidate shift produces a usable overlap")
    j = int(np.argmin(l2))
    s_hat = float(shifts[j])
    if 0 < j < n_cand - 1 and np.isfinite(l2[j - 1]) and np.isfinite(l2[j + 1]):
        curv = l2[j - 1] - 2.0 * l2[j] + l2[j + 1]
        if curv > 0:
            s_hat += 0.5 * step * (l2[j - 1] - l2[j + 1]) / curv
    got = fit(s_hat)
    if got is None:
        got = fit(float(shifts[j]))
        s_hat = float(shifts[j])
    _, c_hat, residual = got

    tol = 10.0 * h_max * h_max
    if residual > tol:
        raise NoOverlap(f"best residual {residual:.3e} exceeds {tol:.3e}")
    if not 0.5 < abs(c_hat) < 2.0:
        raise NoOverlap(f"theta-period register {c_hat:.3g} is not near an isometry")
    return OverlapRecord(s_hat, c_hat, residual)


def _bump_ramp(t: np.ndarray) -> np.ndarray:
    """Smooth 0 -> 1 ramp with all derivatives vanishing at both ends."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return a / (a + b)


def _pair_record(wl: ProfileWindow, wr: ProfileWindow, search_pad: float | None) -> OverlapRecord:
    """Identify one adjacent pair, bracketing the shift from the windows'
    recorded placement (or their nominal centers as a fallback)."""
    h = wl.profile.h
    if wl.start_r is not None and wr.start_r is not None:
        nominal = wr.start_r - wl.start_r
        pad = 2.0 * h if search_pad is None else search_pad
    else:
        nominal = wr.center_r - wl.center_r
        span = min(
            float(wl.profile.r_grid[-1] - wl.profile.r_grid[0]),
            float(wr.profile.r_grid[-1] - wr.profile.r_grid[0]),
        )
        pad = 0.5 * span if search_pad is None else search_pad
    return overlap_identify(wl.profile, wr.profile, (nominal - pad, nominal + pad))


def chain_identify(windows, search_pad: float | None = None) -> list[OverlapRecord]:
    """Fill in the overlap records along a chain of windows.

    Pairs that already carry a record keep it; fresh records are stored
    on the right window's ``overlap_left``.  Returns one record per
    adjacent pair.
    """
    windows = list(windows)
    records: list[OverlapRecord] = []
    for k in range(len(windows) - 1):
        rec = windows[k + 1].overlap_left or windows[k].overlap_right
        if rec is None:
            rec = _pair_record(windows[k], windows[k + 1], search_pad)
            windows[k + 1].overlap_left = rec
        records.append(rec)
    return records


def glue(
    windows,
    tolerance: float | None = None,
    search_pad: float | None = None,
) -> RadialProfile:
    """Assemble an identified chain of windows into one global profile.

    Missing overlap records are computed on the fly (the search bracket
    comes from ``start_r`` when the windows carry it, else from the
    nominal centers with a pad of half the smaller span).  On each
    overlap the two charts are blended with a smooth bump partition, the
    theta registers are folded into f, and the assembly walks left to
    right.  The profile is truncated at the first radius where the
    warping reaches zero; if that happens at both ends the chain cannot
    describe a noncompact surface and ``TwoClosedEnds`` is raised.
    """
    windows = list(windows)
    if not windows:
        raise ValueError("glue needs at least one window")
    profs = [w.profile for w in windows]
    h = profs[0].h
    if any(abs(p.h - h) > 1e-8 * h for p in profs):
        raise ValueError("all windows must share the grid spacing")
    if tolerance is None:
        tolerance = 10.0 * h * h
    if len(windows) == 1:
        return profs[0]

    records = chain_identify(windows, search_pad)
    for k, rec in enumerate(records):
        if rec.residual > tolerance:
            raise SeamMismatch(
                f"overlap {k}-{k + 1} residual {rec.residual:.3e} exceeds {tolerance:.3e}"
            )

    offsets = [0.0]
    registers = [1.0]
    for rec in records:
        offsets.append(offsets[-1] + rec.r0)
        registers.append(registers[-1] * rec.theta_scale)

    # Global grid anchored on the first chart's own coordinates.  Coverage
    # indices get an h/8 margin: the refined shifts carry sub-grid jitter,
    # and extrapolating a spline by that much is far below the blend error.
    g_lo = float(profs[0].r_grid[0])
    g_hi = max(o + float(p.r_grid[-1]) for o, p in zip(offsets, profs))
    margin = 0.125
    m = int(math.floor((g_hi - g_lo) / h + margin)) + 1
    grid = g_lo + h * np.arange(m)

    sp_f = [CubicSpline(p.r_grid, p.f) for p in profs]
    sp_phi = [CubicSpline(p.r_grid, p.phi) for p in profs]

    F = np.empty(m)
    P = np.empty(m)
    end0 = offsets[0] + float(profs[0].r_grid[-1])
    cur = int(math.floor((end0 - g_lo) / h + 1e-9))
    local = grid[: cur + 1] - offsets[0]
    F[: cur + 1] = registers[0] * sp_f[0](local)
    P[: cur + 1] = sp_phi[0](local)

    for k in range(1, len(windows)):
        w_lo = offsets[k] + float(profs[k].r_grid[0])
        w_hi = offsets[k] + float(profs[k].r_grid[-1])
        i_lo = max(int(math.ceil((w_lo - g_lo) / h - margin)), 0)
        i_hi = min(int(math.floor((w_hi - g_lo) / h + margin)), m - 1)
        if cur - i_lo < 2:
            raise NoOverlap(
                f"windows {k - 1} and {k} overlap by fewer than 2 grid spacings"
            )
        seam = grid[i_lo : cur + 1]
        weight = _bump_ramp((seam - seam[0]) / (seam[-1] - seam[0]))
        f_new = registers[k] * sp_f[k](seam - offsets[k])
        p_new = sp_phi[k](seam - offsets[k])
        F[i_lo : cur + 1] = (1.0 - weight) * F[i_lo : cur + 1] + weight * f_new
        P[i_lo : cur + 1] = (1.0 - weight) * P[i_lo : cur + 1] + weight * p_new
        tail = grid[cur + 1 : i_hi + 1]
        F[cur + 1 : i_hi + 1] = registers[k] * sp_f[k](tail - offsets[k])
        P[cur + 1 : i_hi + 1] = sp_phi[k](tail - offsets[k])
        cur = i_hi

    grid, F, P = grid[: cur + 1], F[: cur + 1], P[: cur + 1]

    # A refined shift is only resolved to h/16, so a warping value below
    # max-slope * h/16 is indistinguishable from a zero of the surface.
    zero_tol = max(1e-12 * float(F.max()), float(np.abs(np.diff(F)).max()) / 16.0)
    j_max = int(np.argmax(F))
    left_hit = None
    for j in range(j_max - 1, -1, -1):
        if F[j] <= zero_tol:
            left_hit = j
            break
    right_hit = None
    for j in range(j_max + 1, grid.size):
        if F[j] <= zero_tol:
            right_hit = j
            break
    if left_hit is not None and right_hit is not None:
        raise TwoClosedEnds("the assembled warping vanishes at both ends")
    if right_hit is not None:
        grid, F, P = grid[: right_hit + 1], F[: right_hit + 1], P[: right_hit + 1]
        F[-1] = 0.0
    if left_hit is not None:
        grid, F, P = grid[left_hit:], F[left_hit:], P[left_hit:]
        F[0] = 0.0

    # Tip regularity is deferred to extend_to_disk, which measures the
    # slope and assigns the cone order.
    return RadialProfile(grid, P, F, tip_slope_tol=math.inf)


def extend_to_disk(
    p: RadialProfile,
    cone_tolerance: float = 0.02,
    p_max: int = 12,
) -> RadialProfile:
    """Complete a profile whose warping vanishes at one end to a disk.

    The vanishing end becomes the coordinate origin.  The measured tip
    slope f'(0)/phi(0) must match 1/p for some integer p <= p_max within
    ``cone_tolerance``: p = 1 is a smooth point, larger p a cone point
    of that order.
    """
    f = p.f
    peak = float(f.max())
    if peak <= 0:
        raise ValueError("profile has no positive warping to extend")
    zero_tol = 1e-9 * peak
    left = f[0] <= zero_tol
    right = f[-1] <= zero_tol
    if left and right:
        raise TwoClosedEnds("both ends vanish; the surface would be closed")
    if not (left or right):
        raise ValueError("no end of the profile has vanishing warping")

    if right:
        r = (p.r_grid[-1] - p.r_grid)[::-1]
        f_new = f[::-1].copy()
        phi_new = p.phi[::-1]
    else:
        r = p.r_grid - p.r_grid[0]
        f_new = f.copy()
        phi_new = p.phi
    f_new[0] = 0.0

    h = float(r[1] - r[0])
    if r.size >= 4:
        fp = (-11.0 * f_new[0] + 18.0 * f_new[1] - 9.0 * f_new[2] + 2.0 * f_new[3]) / (6.0 * h)
    else:
        fp = (-3.0 * f_new[0] + 4.0 * f_new[1] - f_new[2]) / (2.0 * h)
    ratio = float(fp / phi_new[0])
    if ratio <= 0:
        raise ClosureFailure(f"tip slope {ratio:.4g} is not positive")

    best_p, best_err = 1, abs(ratio - 1.0)
    for q in range(2, p_max + 1):
        err = abs(ratio - 1.0 / q)
        if err < best_err:
            best_p, best_err = q, err
    if best_err >= cone_tolerance:
        raise ClosureFailure(
            f"tip slope {ratio:.4g} matches no 1/p for p <= {p_max} "
            f"within {cone_tolerance:g}"
        )
    return RadialProfile(
        r,
        phi_new,
        f_new,
        closed_tip=True,
        time_stamp=p.time_stamp,
        cone_order=best_p,
        tip_slope_tol=cone_tolerance,
    )


# -- local model classification ----------------------------------------------


@dataclass(frozen=True)
class LocalModel:
    """One admissible row of the collapsed-neighbourhood tables."""

    case: str
    gamma: str
    g_infty0: str
    local_topology: str
    p: int | None = None
    interval: tuple[float, float] | None = None

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "gamma": self.gamma,
            "g_infty0": self.g_infty0,
            "local_topology": self.local_topology,
            "p": self.p,
            "interval": list(self.interval) if self.interval else None,
        }

    def to_json(self) -> str:
        return json_dumps(self.as_dict())


@dataclass(frozen=True)
class ModelRejection:
    """Explicit exclusion of a model dimension, with the reason."""

    m: int
    reason: str

    def as_dict(self) -> dict:
        return {"m": self.m, "reason": self.reason}


_REJECTIONS = {
    0: "a zero-dimensional limit is impossible when diameters grow without bound",
    3: "collapse forces at least one symmetry direction, so the model dimension is at most 2",
}

# (m, group kind) -> (case, identity component, local topology).  The Z2
# kinds name the flipped coordinates of the involution: theta_u is
# (r, theta, u) -> (r, -theta, -u), r_u is (-r, theta, -u), r_theta is
# (-r, -theta, u).
_ROWS = {
    (1, "trivial"): ("1i", "R2_loc", "open_interval"),
    (1, "Z2_theta_u"): ("1ii", "R2_loc", "open_interval"),
    (1, "Z2_r_u"): ("1iii", "R2_loc", "half_interval"),
    (1, "Z2_r_theta"): ("1iv", "R2_loc", "half_interval"),
    (2, "SO2"): ("2ai", "R1_loc x SO(2)", "half_interval"),
    (2, "O2"): ("2aii", "R1_loc x SO(2)", "half_interval"),
    (2, "Zp"): ("2bi", "R1_loc", "disk_mod_Zp"),
    (2, "D2p"): ("2bii", "R1_loc", "disk_mod_D2p"),
}

_GAMMA_RE = re.compile(r"^(Zp|D2p)\((\d+)\)$")


def _parse_gamma(descriptor: str) -> tuple[str, int | None]:
    if descriptor in ("trivial", "Z2_theta_u", "Z2_r_u", "Z2_r_theta", "SO2", "O2"):
        return descriptor, None
    m = _GAMMA_RE.match(descriptor)
    if m:
        p = int(m.group(2))
        if p < 1:
            raise InconsistentInput(f"cyclic order must be >= 1, got {p}")
        return m.group(1), p
    raise InconsistentInput(f"unknown group descriptor {descriptor!r}")


def classify_local_model(
    m: int,
    gamma_descriptor: str,
    a: float = -1.0,
    b: float = 1.0,
    has_fixed_point: bool | None = None,
) -> LocalModel | ModelRejection:
    """Resolve local symmetry data to its unique admissible model row.

    ``m`` is the dimension of the local model chart; m = 0 and m = 3 are
    impossible and come back as ``ModelRejection`` values rather than
    exceptions.  ``(a, b)`` bound the radial coordinate of the chart and
    ``has_fixed_point`` (when given) must agree with whether the row's
    topology has a boundary or cone origin.
    """
    m = int(m)
    if m in _REJECTIONS:
        return ModelRejection(m, _REJECTIONS[m])
    if m not in (1, 2):
        raise InconsistentInput(f"model dimension must be in 0..3, got {m}")
    kind, p = _parse_gamma(gamma_descriptor)
    row = _ROWS.get((m, kind))
    if row is None:
        raise InconsistentInput(f"group {gamma_descriptor!r} does not act in dimension {m}")
    case, g0, topology = row

    if topology == "open_interval":
        if not a < 0.0 < b:
            raise InconsistentInput(f"open interval needs a < 0 < b, got ({a:g}, {b:g})")
        interval = (float(a), float(b))
        fixed = False
    else:
        if not b > 0.0:
            raise InconsistentInput(f"chart radius must be positive, got {b:g}")
        interval = (0.0, float(b))
        fixed = True
    if has_fixed_point is not None and bool(has_fixed_point) != fixed:
        raise InconsistentInput(
            f"case {case} {'has' if fixed else 'has no'} an origin fixed point"
        )

    canonical = gamma_descriptor if p is None else f"{kind}({p})"
    return LocalModel(case, canonical, g0, topology, p, interval)


# -- singular point budget ---------------------------------------------------


@dataclass(frozen=True)
class SingularPoint:
    point_index: int
    cone_order: int
    dihedral: bool = False

    def as_dict(self) -> dict:
        return {
            "point_index": self.point_index,
            "cone_order": self.cone_order,
            "dihedral": self.dihedral,
        }


@dataclass(frozen=True)
class SingularReport:
    """Singular points found in a sampled limit plus the budget verdict.

    ``rule_violation`` is a diagnostic flag: more than one singular point
    together with a positive-curvature certificate means the input data
    is inconsistent (at most one such point can exist), not that an
    exception should interrupt the pipeline.
    """

    singular: tuple[SingularPoint, ...]
    rule_violation: bool
    min_curvature: float

    def as_dict(self) -> dict:
        return {
            "singular": [s.as_dict() for s in self.singular],
            "rule_violation": self.rule_violation,
            "min_curvature": self.min_curvature,
        }

    def to_json(self) -> str:
        return json_dumps(self.as_dict())


def detect_singular_points(
    cone_orders,
    curvature_samples,
    dihedral=None,
) -> SingularReport:
    """List cone/dihedral points and check the one-singularity budget.

    ``cone_orders`` holds the per-point classification (1 = regular) and
    ``curvature_samples`` the sampled curvature values backing the
    positivity certificate; ``dihedral`` optionally marks reflection
    quotient points, which count as singular regardless of order.
    """
    orders = [int(c) for c in cone_orders]
    if any(c < 1 for c in orders):
        raise ValueError("cone orders must be positive integers")
    k = np.asarray(curvature_samples, dtype=float)
    if k.size == 0:
        raise ValueError("a curvature certificate needs at least one sample")
    if dihedral is None:
        dihedral = [False] * len(orders)
    flags = [bool(d) for d in dihedral]
    if len(flags) != len(orders):
        raise ValueError("dihedral flags must align with cone orders")

    singular = tuple(
        SingularPoint(i, c, d)
        for i, (c, d) in enumerate(zip(orders, flags))
        if c > 1 or d
    )
    min_k = float(k.min())
    return SingularReport(singular, len(singular) > 1 and min_k > 0.0, min_k)


# -- cigar comparison --------------------------------------------------------


@dataclass(frozen=True)
class CigarReport:
    """Deviation of a closed-tip solution from the steady soliton family.

    ``deviation`` is max |K(s)/K_tip - sech^2(sigma s)| over the trusted
    window of the final profile; ``tip_drift`` is the relative spread of
    the tip curvature across the recorded times.
    """

    sigma: float
    k_tip: float
    deviation: float
    tip_drift: float
    s: np.ndarray
    k_normalized: np.ndarray

    def as_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "k_tip": self.k_tip,
            "deviation": self.deviation,
            "tip_drift": self.tip_drift,
            "n_points": int(self.s.size),
        }

    def to_json(self) -> str:
        return json_dumps(self.as_dict())


def cigar_compare(sol, closed_tip: bool = True) -> CigarReport:
    """Fit the one-parameter soliton family and report the profile deviation.

    The scale sigma = sqrt(K_tip / 2) is pinned by the tip curvature of
    the final recorded profile; no other parameter is fit.
    """
    if isinstance(sol, RadialProfile):
        sol = SurfaceSolution(np.array([sol.time_stamp]), [sol])
    if not closed_tip:
        raise ValueError("comparison needs the rotation fixed point at the tip")
    final = sol.profiles[-1]
    if not final.closed_tip:
        raise ValueError("final profile has no closed tip")

    k = gauss_curvature(final)
    sl = trusted_slice(final)
    k_win = k[sl]
    if np.any(k_win <= 0.0):
        raise NotPositive(
            f"curvature reaches {float(k_win.min()):.3e} inside the trusted window"
        )
    k_tip = float(k[0])
    sigma = math.sqrt(k_tip / 2.0)
    s = final.arclength()[sl]
    normalized = k_win / k_tip
    model = 1.0 / np.cosh(sigma * s) ** 2
    deviation = float(np.abs(normalized - model).max())

    tips = np.array([float(gauss_curvature(p)[0]) for p in sol.profiles])
    drift = float((tips.max() - tips.min()) / abs(tips[-1])) if tips.size > 1 else 0.0

    return CigarReport(sigma, k_tip, deviation, drift, _locked(s), _locked(normalized))


def write_comparison(report: CigarReport, csv_path: str | Path) -> Path:
    """Two-column CSV (arclength, normalized curvature) for plotting."""
    csv_path = Path(csv_path)
    write_csv(csv_path, ["s", "k_normalized"], [report.s, report.k_normalized])
    return csv_path
