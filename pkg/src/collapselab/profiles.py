"""Rotationally symmetric metrics and their curvature.

A surface of revolution is stored as a radial profile: on a uniform grid
``r_grid`` the metric is ``phi(r)^2 dr^2 + f(r)^2 dtheta^2`` with theta
running over a period of 2*pi.  A closed tip (rotation fixed point) sits at
the first grid point when ``f[0] == 0``; a vanishing warping at the last
grid point is detected automatically and treated the same way.

Gauss curvature is
    K = -(1/(f*phi)) * d/dr[ (1/phi) * df/dr ],
discretized with the compact conservative second difference
    d/dr[c f']_j ~ (c_{j+1/2}(f_{j+1}-f_j) - c_{j-1/2}(f_j-f_{j-1})) / h^2,
c = 1/phi.  Across a closed tip the profile extends with f odd and phi
even, which keeps the stencil second order up to the tip; open ends use
cubic-extrapolation ghost points.  The tip value itself is the 0/0 limit
    K(tip) = -w''(tip) / (f'(tip) * phi(tip)),   w = (df/dr)/phi,
evaluated with the reflected stencils.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import DegenerateMetric, GridTooSmall, ZeroB
from .serialize import dump_json, load_json, read_csv, write_csv

_GHOSTS = 3


def _as_locked(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass
class RadialProfile:
    """Warped-product surface metric on a uniform radial grid.

    ``closed_tip=None`` infers the flag from ``f[0] == 0``.  ``cone_order``
    p > 1 marks a deliberate cone point: the regularity check then expects
    f'(0)/phi(0) = 1/p instead of 1.
    """

    r_grid: np.ndarray
    phi: np.ndarray
    f: np.ndarray
    closed_tip: bool | None = None
    time_stamp: float = 0.0
    cone_order: int = 1
    tip_slope_tol: float = 1e-3

    def __post_init__(self):
        self.r_grid = _as_locked(self.r_grid)
        self.phi = _as_locked(self.phi)
        self.f = _as_locked(self.f)
        n = self.r_grid.size
        if not (self.phi.size == n == self.f.size):
            raise ValueError("r_grid, phi, f must have equal length")
        if n < 2:
            raise GridTooSmall("need at least 2 grid points")
        dr = np.diff(self.r_grid)
        if np.any(dr <= 0):
            raise ValueError("r_grid must be strictly increasing")
        h = dr[0]
        if np.any(np.abs(dr - h) > 1e-8 * h):
            raise ValueError("r_grid must be uniformly spaced")
        if np.any(self.phi <= 0):
            raise DegenerateMetric("phi must be positive everywhere")
        if np.any(self.f[1:-1] <= 0):
            raise DegenerateMetric("f must be positive at interior points")
        if self.f[0] < 0 or self.f[-1] < 0:
            raise DegenerateMetric("f must be nonnegative at the ends")
        if self.closed_tip is None:
            self.closed_tip = bool(self.f[0] == 0.0)
        if self.closed_tip != (self.f[0] == 0.0):
            raise ValueError("closed_tip flag inconsistent with f[0]")
        if int(self.cone_order) < 1:
            raise ValueError("cone_order must be a positive integer")
        self.cone_order = int(self.cone_order)
        if self.closed_tip:
            if n < 3:
                raise GridTooSmall("closed tip needs at least 3 grid points")
            target = 1.0 / self.cone_order
            if abs(self.tip_slope() - target) > self.tip_slope_tol:
                raise ValueError(
                    f"tip slope {self.tip_slope():.6g} does not match "
                    f"1/{self.cone_order} within {self.tip_slope_tol:g}"
                )

    @property
    def n(self) -> int:
        return self.r_grid.size

    @property
    def h(self) -> float:
        return float(self.r_grid[1] - self.r_grid[0])

    @property
    def closed_end(self) -> bool:
        """True when the warping also vanishes at the last grid point."""
        return bool(self.f[-1] == 0.0)

    def tip_slope(self) -> float:
        """One-sided f'(0)/phi(0), third order (the regularity check must
        not eat into the 1e-3 tolerance at production grid spacings)."""
        f, h = self.f, self.h
        if self.n >= 4:
            fp = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h)
        else:
            fp = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        return float(fp / self.phi[0])

    def arclength(self) -> np.ndarray:
        """Cumulative radial arclength s(r) = integral of phi dr from r[0]."""
        mid = 0.5 * (self.phi[1:] + self.phi[:-1]) * np.diff(self.r_grid)
        return np.concatenate([[0.0], np.cumsum(mid)])

    def area(self) -> float:
        """Total area 2*pi * integral of f*phi dr (theta period 2*pi)."""
        return float(2.0 * np.pi * np.trapezoid(self.f * self.phi, self.r_grid))

    def replace(self, **kw) -> "RadialProfile":
        return replace(self, **kw)


def _cubic_ghost(y: np.ndarray, left: bool) -> float:
    """Cubic extrapolation one step past an open end (O(h^4) accurate)."""
    if left:
        return 4.0 * y[0] - 6.0 * y[1] + 4.0 * y[2] - y[3]
    return 4.0 * y[-1] - 6.0 * y[-2] + 4.0 * y[-3] - y[-4]


def curvature_kernel(
    h: float,
    phi: np.ndarray,
    f: np.ndarray,
    tip_left: bool,
    tip_right: bool,
) -> np.ndarray:
    """Gauss curvature from raw arrays.  See module docstring for the scheme.

    The flow engine calls this directly on stage arrays; the public
    ``gauss_curvature`` wraps it with profile validation.
    """
    n = f.size
    if n < 5:
        raise GridTooSmall("curvature stencils need at least 5 grid points")
    if np.any(phi <= 0):
        raise DegenerateMetric("phi must be positive")
    lo = 1 if tip_left else 0
    hi = n - 1 if tip_right else n
    if np.any(f[lo:hi] <= 0):
        raise DegenerateMetric("f must be positive away from closed tips")

    # One ghost point per side: odd/even reflection across a closed tip,
    # cubic extrapolation past an open end.
    f_ext = np.empty(n + 2)
    phi_ext = np.empty(n + 2)
    f_ext[1:-1] = f
    phi_ext[1:-1] = phi
    if tip_left:
        f_ext[0] = -f[1]
        phi_ext[0] = phi[1]
    else:
        f_ext[0] = _cubic_ghost(f, True)
        phi_ext[0] = _cubic_ghost(phi, True)
    if tip_right:
        f_ext[-1] = -f[-2]
        phi_ext[-1] = phi[-2]
    else:
        f_ext[-1] = _cubic_ghost(f, False)
        phi_ext[-1] = _cubic_ghost(phi, False)
    if np.any(phi_ext <= 0):
        raise DegenerateMetric("phi extrapolates to a nonpositive value")

    c_ext = 1.0 / phi_ext
    c_half = 0.5 * (c_ext[:-1] + c_ext[1:])  # midpoints, length n+1
    df = np.diff(f_ext)  # length n+1
    flux = c_half * df
    div = (flux[1:] - flux[:-1]) / (h * h)  # d/dr[(1/phi) f'] at core points

    k = np.empty(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        k[:] = -div / (f * phi)

    if tip_left:
        k[0] = _tip_curvature(f[:5], phi[:3], h)
    if tip_right:
        k[-1] = _tip_curvature(f[-1:-6:-1], phi[-1:-4:-1], h)
    return k


def _tip_curvature(f5: np.ndarray, phi3: np.ndarray, h: float) -> float:
    """L'Hopital limit K = -w''/(f' phi) at a closed tip, w = f'/phi.

    Fourth-order stencils (using f odd, phi even across the tip) keep the
    tip from dominating the global O(h^2) error budget.
    """
    inv12h = 1.0 / (12.0 * h)
    fp = (16.0 * f5[1] - 2.0 * f5[2]) * inv12h
    w0 = fp / phi3[0]
    w1 = (-f5[3] + 8.0 * f5[2] - f5[1]) * inv12h / phi3[1]
    w2 = (-f5[4] + 8.0 * f5[3] - 8.0 * f5[1]) * inv12h / phi3[2]
    wpp = (16.0 * w1 - w2 - 15.0 * w0) / (6.0 * h * h)
    return float(-wpp / (fp * phi3[0]))


def gauss_curvature(p: RadialProfile) -> np.ndarray:
    """Pointwise Gauss curvature of a radial profile."""
    return curvature_kernel(p.h, p.phi, p.f, p.closed_tip, p.closed_end)


def surface_scalar(p: RadialProfile) -> np.ndarray:
    """Scalar curvature of the surface, R = 2K by definition."""
    return 2.0 * gauss_curvature(p)


@dataclass
class Warped3Metric:
    """Product (or twisted) 3-metric: surface base plus a circle of length
    ``fiber_length``.  A twist (a, b) identifies (r, theta, u) with
    (r, theta + a*tau, u + b*tau); untwisted means a = b = 0."""

    base: RadialProfile
    fiber_length: float
    twist_a: float = 0.0
    twist_b: float = 0.0

    def __post_init__(self):
        if self.fiber_length <= 0:
            raise ValueError("fiber_length must be positive")
        if (self.twist_a != 0.0) and self.twist_b == 0.0:
            raise ZeroB("a twisted identification needs b != 0")

    @property
    def twisted(self) -> bool:
        return self.twist_a != 0.0 or self.twist_b != 0.0


@dataclass
class CurvatureSpectrum:
    """Eigenvalues of the curvature operator at each grid point, stored
    sorted (lambda1 <= lambda2 <= lambda3).  Each eigenvalue is twice a
    sectional curvature, so scalar = lambda1 + lambda2 + lambda3."""

    lambda1: np.ndarray
    lambda2: np.ndarray
    lambda3: np.ndarray
    rm_norm: np.ndarray = field(init=False)
    scalar: np.ndarray = field(init=False)

    def __post_init__(self):
        stack = np.sort(
            np.vstack([
                np.atleast_1d(np.asarray(self.lambda1, dtype=float)),
                np.atleast_1d(np.asarray(self.lambda2, dtype=float)),
                np.atleast_1d(np.asarray(self.lambda3, dtype=float)),
            ]),
            axis=0,
        )
        self.lambda1 = _as_locked(stack[0])
        self.lambda2 = _as_locked(stack[1])
        self.lambda3 = _as_locked(stack[2])
        self.rm_norm = _as_locked(np.sqrt(stack[0] ** 2 + stack[1] ** 2 + stack[2] ** 2))
        self.scalar = _as_locked(stack.sum(axis=0))

    @property
    def n(self) -> int:
        return self.lambda1.size


def spectrum_product(m: Warped3Metric) -> CurvatureSpectrum:
    """Curvature-operator spectrum of an untwisted product base x S^1.

    The flat circle contributes two zero eigenvalues; the remaining one is
    2K of the base.  Independent of the fiber length.
    """
    if m.twisted:
        raise ValueError("spectrum_product applies to untwisted products only")
    k = gauss_curvature(m.base)
    zero = np.zeros_like(k)
    return CurvatureSpectrum(zero, zero, 2.0 * k)


def scalar_from_spectrum(s: CurvatureSpectrum) -> np.ndarray:
    return s.lambda1 + s.lambda2 + s.lambda3


def quotient_metric(
    p: RadialProfile,
    a: float,
    b: float,
    fiber_length: float | None = None,
) -> RadialProfile:
    """Quotient of (base x R, twist (a, b)) by the circle direction.

    The quotient of phi^2 dr^2 + f^2 dtheta^2 + du^2 under the identification
    flow (r, theta + a*tau, u + b*tau) is phi^2 dr^2 + F^2 dtheta^2 with

        F = f / sqrt(1 + (a/b)^2 f^2).

    The fiber length drops out of the quotient; the parameter is accepted
    for interface symmetry with the collapsing families.
    """
    del fiber_length
    if b == 0.0:
        raise ZeroB("quotient needs a drifting circle direction (b != 0)")
    ratio2 = (a / b) ** 2
    f_new = p.f / np.sqrt(1.0 + ratio2 * p.f**2)
    return p.replace(f=f_new, closed_tip=None)


@dataclass
class SpectrumHistory:
    """Time-indexed curvature spectra on a shared grid.

    ``r_grid``/``phi`` (phi per recorded time) are optional geometric
    context; they are required only by operations that measure distances,
    such as the dilatability ball scan.
    """

    times: np.ndarray
    spectra: list[CurvatureSpectrum]
    r_grid: np.ndarray | None = None
    phi: list[np.ndarray] | None = None

    def __post_init__(self):
        self.times = _as_locked(self.times)
        if len(self.spectra) != self.times.size:
            raise ValueError("one spectrum per recorded time required")
        if self.times.size and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        npts = {s.n for s in self.spectra}
        if len(npts) > 1:
            raise ValueError("spectra must share the grid size")

    @property
    def n_points(self) -> int:
        return self.spectra[0].n

    def rm_matrix(self) -> np.ndarray:
        return np.vstack([s.rm_norm for s in self.spectra])

    def lambda1_matrix(self) -> np.ndarray:
        return np.vstack([s.lambda1 for s in self.spectra])


# ---------------------------------------------------------------- builders

def flat_cylinder(length: float = 10.0, n: int = 501, radius: float = 1.0) -> RadialProfile:
    r = np.linspace(0.0, length, n)
    return RadialProfile(r, np.ones(n), np.full(n, radius))


def sphere_profile(n: int = 201, k0: float = 1.0) -> RadialProfile:
    """Round sphere of constant curvature k0 in arclength coordinates."""
    radius = 1.0 / np.sqrt(k0)
    r = np.linspace(0.0, np.pi * radius, n)
    f = radius * np.sin(r / radius)
    f[0] = 0.0
    f[-1] = 0.0  # sin(pi) rounds to ~1e-16; the far tip must be exact
    return RadialProfile(r, np.ones(n), f)


def cigar_profile(r_max: float = 8.0, n: int = 401, sigma: float = 1.0) -> RadialProfile:
    """Steady-soliton profile f = tanh(sigma r)/sigma in arclength gauge;
    K = 2 sigma^2 sech^2(sigma r), maximal at the tip."""
    r = np.linspace(0.0, r_max, n)
    return RadialProfile(r, np.ones(n), np.tanh(sigma * r) / sigma)


def disk_profile(radius: float = 1.0, n: int = 201) -> RadialProfile:
    r = np.linspace(0.0, radius, n)
    return RadialProfile(r, np.ones(n), r.copy())


# ------------------------------------------------------------------ I/O

def write_profile(p: RadialProfile, csv_path: str | Path) -> Path:
    """Profile as CSV columns r,phi,f plus a sidecar JSON with metadata."""
    csv_path = Path(csv_path)
    write_csv(csv_path, ["r", "phi", "f"], [p.r_grid, p.phi, p.f])
    dump_json(
        {
            "time_stamp": p.time_stamp,
            "closed_tip": p.closed_tip,
            "cone_order": p.cone_order,
        },
        csv_path.with_suffix(".json"),
    )
    return csv_path


def read_profile(csv_path: str | Path) -> RadialProfile:
    csv_path = Path(csv_path)
    header, cols = read_csv(csv_path)
    if header != ["r", "phi", "f"]:
        raise ValueError(f"unexpected profile header {header!r}")
    meta_path = csv_path.with_suffix(".json")
    meta = load_json(meta_path) if meta_path.exists() else {}
    return RadialProfile(
        cols[0],
        cols[1],
        cols[2],
        closed_tip=meta.get("closed_tip"),
        time_stamp=float(meta.get("time_stamp", 0.0)),
        cone_order=int(meta.get("cone_order", 1)),
    )
