"""Collapsing 3-manifold families and finite metric-space sampling.

A family is one surface solution crossed with circles of shrinking
length (optionally with a twisted identification).  Sampling builds a
lattice graph weighted by the local metric coefficients and reads
pairwise distances off shortest paths, which guarantees the metric
axioms by construction.  Base and member samples draw their (r, theta)
coordinates from the same low-discrepancy streams, so same-index points
project onto each other; the GH estimator exploits that alignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.stats import qmc

from .errors import WindowEmpty
from .flow import SurfaceSolution
from .gh import FiniteMetricSpace
from .profiles import RadialProfile, Warped3Metric

__all__ = [
    "CollapseFamily",
    "make_family",
    "inj_proxy",
    "sample_space",
]


@dataclass(frozen=True)
class CollapseFamily:
    """One base solution lifted over a shrinking sequence of fibers."""

    base_solution: SurfaceSolution
    epsilons: tuple[float, ...]
    twist: tuple[float, float] | None
    members: tuple[tuple[Warped3Metric, ...], ...]

    def __post_init__(self) -> None:
        eps = self.epsilons
        if not eps:
            raise ValueError("epsilons must be nonempty")
        if any(e <= 0 for e in eps):
            raise ValueError("epsilons must be positive")
        if any(b <= a for a, b in zip(eps[1:], eps)):
            raise ValueError("epsilons must be strictly decreasing")
        if self.twist is not None and self.twist[1] == 0:
            raise ValueError("twist requires b != 0")
        if len(self.members) != len(eps):
            raise ValueError("one member time-series per epsilon")


def make_family(
    sol: SurfaceSolution,
    epsilons: Sequence[float],
    twist: tuple[float, float] | None = None,
) -> CollapseFamily:
    """Lift the solution over fibers of each length in `epsilons`."""
    a, b = twist if twist is not None else (0.0, 0.0)
    members = tuple(
        tuple(Warped3Metric(p, float(e), a, b) for p in sol.profiles)
        for e in epsilons
    )
    return CollapseFamily(sol, tuple(float(e) for e in epsilons), twist, members)


def inj_proxy(m: Warped3Metric, point_index: int, k_max: int = 8) -> float:
    """Half the shortest geodesic loop in the collapsed direction.

    For a product this is fiber_length / 2 everywhere.  With a twisted
    identification a loop closing up after k turns of the fiber also
    shifts theta by k*(a/b)*eps, and an integer number of theta turns
    may partly cancel that shift; the loop length follows from the
    warped metric on the (theta, u) torus over the point.  Loops purely
    in the base direction are deliberately ignored.
    """
    f = float(m.base.f[point_index])
    eps = m.fiber_length
    if not m.twisted:
        return 0.5 * eps
    ratio = m.twist_a / m.twist_b
    best = math.inf
    for k in range(1, k_max + 1):
        shift = k * ratio * eps
        m_center = -shift / (2.0 * math.pi)
        for dm in range(-2, 3):
            turns = math.floor(m_center) + dm
            ang = shift + 2.0 * math.pi * turns
            best = min(best, math.hypot(k * eps, f * ang))
    return 0.5 * best


# -- lattice graphs ----------------------------------------------------------


def _surface_graph(p: RadialProfile, i_lo: int, i_hi: int, n_theta: int):
    """Sparse shortest-path graph on the (r, theta) lattice.

    Radial, angular, and both diagonal edge families; theta is periodic.
    Diagonals keep the graph metric within O(h) of the surface metric
    instead of the O(1) taxicab overshoot.
    """
    h = p.h
    phi = p.phi[i_lo : i_hi + 1]
    f = p.f[i_lo : i_hi + 1]
    n_r = phi.size
    dtheta = 2.0 * math.pi / n_theta
    n = n_r * n_theta

    def node(i: np.ndarray, j: np.ndarray) -> np.ndarray:
        return i * n_theta + j

    ii, jj = np.meshgrid(np.arange(n_r), np.arange(n_theta), indexing="ij")
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []

    i, j = ii[:-1], jj[:-1]
    w_rad = 0.5 * (phi[:-1] + phi[1:])[:, None] * h * np.ones_like(i, dtype=float)
    rows.append(node(i, j).ravel())
    cols.append(node(i + 1, j).ravel())
    vals.append(w_rad.ravel())

    i, j = ii, jj
    w_ang = (f * dtheta)[:, None] * np.ones_like(i, dtype=float)
    rows.append(node(i, j).ravel())
    cols.append(node(i, (j + 1) % n_theta).ravel())
    vals.append(w_ang.ravel())

    i, j = ii[:-1], jj[:-1]
    w_ang_mid = (0.5 * (f[:-1] + f[1:]) * dtheta)[:, None] * np.ones_like(i, dtype=float)
    w_diag = np.hypot(w_rad, w_ang_mid)
    for dj in (1, -1):
        rows.append(node(i, j).ravel())
        cols.append(node(i + 1, (j + dj) % n_theta).ravel())
        vals.append(w_diag.ravel())

    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    graph = csr_matrix((v, (r, c)), shape=(n, n))
    return graph, n_r


def _product_graph(m: Warped3Metric, i_lo: int, i_hi: int, n_theta: int, n_u: int):
    """Lattice graph for the untwisted product: surface lattice times a u-cycle."""
    h = m.base.h
    phi = m.base.phi[i_lo : i_hi + 1]
    f = m.base.f[i_lo : i_hi + 1]
    n_r = phi.size
    dtheta = 2.0 * math.pi / n_theta
    du = m.fiber_length / n_u
    n = n_r * n_theta * n_u

    def node(i, j, k):
        return (i * n_theta + j) * n_u + k

    ii, jj, kk = np.meshgrid(
        np.arange(n_r), np.arange(n_theta), np.arange(n_u), indexing="ij"
    )
    rows, cols, vals = [], [], []

    i, j, k = ii[:-1], jj[:-1], kk[:-1]
    w_rad = 0.5 * (phi[:-1] + phi[1:])[:, None, None] * h * np.ones_like(i, dtype=float)
    rows.append(node(i, j, k).ravel())
    cols.append(node(i + 1, j, k).ravel())
    vals.append(w_rad.ravel())

    w_ang = (f * dtheta)[:, None, None] * np.ones_like(ii, dtype=float)
    rows.append(node(ii, jj, kk).ravel())
    cols.append(node(ii, (jj + 1) % n_theta, kk).ravel())
    vals.append(w_ang.ravel())

    w_u = np.full(n, du)
    rows.append(node(ii, jj, kk).ravel())
    cols.append(node(ii, jj, (kk + 1) % n_u).ravel())
    vals.append(w_u)

    i, j, k = ii[:-1], jj[:-1], kk[:-1]
    w_ang_mid = (0.5 * (f[:-1] + f[1:]) * dtheta)[:, None, None] * np.ones_like(i, dtype=float)
    w_diag = np.hypot(w_rad, w_ang_mid)
    for dj in (1, -1):
        rows.append(node(i, j, k).ravel())
        cols.append(node(i + 1, (j + dj) % n_theta, k).ravel())
        vals.append(w_diag.ravel())

    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    graph = csr_matrix((v, (r, c)), shape=(n, n))
    return graph, n_r


def _distances(graph, sources: np.ndarray) -> np.ndarray:
    d = dijkstra(graph, directed=False, indices=sources)
    d = d[:, sources]
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def _halton(dim: int, n: int, seed: int) -> np.ndarray:
    # unscrambled so that lower-dimensional streams are shared prefixes;
    # fast_forward gives seed-dependence without breaking that property
    sampler = qmc.Halton(d=dim, scramble=False)
    if seed:
        sampler.fast_forward(seed)
    return sampler.random(n)


def _window_indices(p: RadialProfile, r_window: tuple[float, float] | None) -> tuple[int, int]:
    r = p.r_grid
    if r_window is None:
        i_lo, i_hi = 0, p.n - 1
    else:
        lo, hi = r_window
        i_lo = int(np.searchsorted(r, lo - 1e-12))
        i_hi = int(np.searchsorted(r, hi + 1e-12)) - 1
    # rings with f = 0 are single points; stepping inside keeps the
    # lattice free of coincident nodes
    if i_lo < p.n and p.f[i_lo] == 0.0:
        i_lo += 1
    if i_hi >= 0 and p.f[i_hi] == 0.0:
        i_hi -= 1
    if i_hi - i_lo < 1:
        raise WindowEmpty("window covers fewer than 2 usable grid points")
    return i_lo, i_hi


def sample_space(
    obj: Warped3Metric | RadialProfile | tuple[float, float],
    n: int,
    seed: int = 0,
    r_window: tuple[float, float] | None = None,
    n_theta: int = 48,
    n_u: int = 8,
) -> FiniteMetricSpace:
    """Sample n points quasi-uniformly and return their distance matrix.

    Intervals get exact distances; surfaces and untwisted products get
    shortest-path distances on a metric-weighted lattice (the lattice
    reuses the profile's own radial grid).  The base point is the sample
    with the smallest radial coordinate, which is independent of the
    fiber coordinate, so base and lifted samples share their base index.
    Twisted members are not sampled directly; reduce them with
    quotient_metric first.
    """
    if n < 2:
        raise WindowEmpty(f"need at least 2 samples, got {n}")
    if n_theta < 3 or n_u < 2:
        raise ValueError("need n_theta >= 3 and n_u >= 2 to keep lattice edges distinct")

    if isinstance(obj, tuple):
        lo, hi = float(obj[0]), float(obj[1])
        if not hi > lo:
            raise WindowEmpty(f"empty interval [{lo}, {hi}]")
        x = lo + (hi - lo) * _halton(1, n, seed)[:, 0]
        d = np.abs(x[:, None] - x[None, :])
        base = int(np.argmin(np.abs(x)))
        return FiniteMetricSpace(d, base=base)

    if isinstance(obj, Warped3Metric):
        if obj.twisted:
            raise ValueError(
                "twisted members have no product lattice; sample the quotient surface"
            )
        p = obj.base
        i_lo, i_hi = _window_indices(p, r_window)
        u = _halton(3, n, seed)
        ri = i_lo + np.rint(u[:, 0] * (i_hi - i_lo)).astype(int)
        tj = np.rint(u[:, 1] * n_theta).astype(int) % n_theta
        uk = np.rint(u[:, 2] * n_u).astype(int) % n_u
        graph, _ = _product_graph(obj, i_lo, i_hi, n_theta, n_u)
        nodes = ((ri - i_lo) * n_theta + tj) * n_u + uk
        d = _distances(graph, nodes)
        base = int(np.argmin(ri))
        return FiniteMetricSpace(d, base=base)

    p = obj
    i_lo, i_hi = _window_indices(p, r_window)
    u = _halton(2, n, seed)
    ri = i_lo + np.rint(u[:, 0] * (i_hi - i_lo)).astype(int)
    tj = np.rint(u[:, 1] * n_theta).astype(int) % n_theta
    graph, _ = _surface_graph(p, i_lo, i_hi, n_theta)
    nodes = (ri - i_lo) * n_theta + tj
    d = _distances(graph, nodes)
    base = int(np.argmin(ri))
    return FiniteMetricSpace(d, base=base)
