"""Gromov-Hausdorff distance estimation for finite metric spaces.

Exact distances are computed for tiny spaces by searching over
correspondences; larger spaces get certified lower bounds from
correspondence-free invariants and upper bounds from explicitly
constructed correspondences.  A covering-count dimension estimator
discriminates one- from two-dimensional limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateScales, TooLarge
from .serialize import dump_json, json_dumps, load_json, read_matrix_csv, write_matrix_csv

__all__ = [
    "FiniteMetricSpace",
    "DimEstimate",
    "gh_exact",
    "gh_bound",
    "dim_estimate",
    "write_space",
    "read_space",
]

EXHAUSTIVE_LIMIT = 8


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Symmetric distance matrix with a distinguished base point."""

    dist: np.ndarray
    base: int = 0

    def __post_init__(self) -> None:
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got {d.shape}")
        n = d.shape[0]
        if n < 1:
            raise ValueError("need at least one point")
        if not (0 <= self.base < n):
            raise ValueError(f"base index {self.base} outside 0..{n - 1}")
        if np.any(np.diag(d) != 0.0):
            raise ValueError("diagonal must be exactly zero")
        if np.any(d < 0):
            raise ValueError("distances must be nonnegative")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        # d[i,k] <= d[i,j] + d[j,k] for all triples, vectorized over j.
        slack = d[:, None, :] - (d[:, :, None] + d[None, :, :])
        if float(slack.max()) > 1e-12:
            raise ValueError(f"triangle inequality violated by {float(slack.max()):.3e}")
        object.__setattr__(self, "dist", _locked(d))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    def base_distances(self) -> np.ndarray:
        return self.dist[self.base]


def _locked(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


# -- exact search on tiny spaces --------------------------------------------


def _feasible(da: np.ndarray, db: np.ndarray, delta: float, forced: tuple[int, int] | None) -> bool:
    """Is there a correspondence with distortion <= delta?

    A minimal correspondence is the union of a map A -> B and a map
    B -> A, so depth-first assignment of those two maps with pairwise
    pruning enumerates exactly the candidates that matter: any
    correspondence contains such a union, and shrinking a correspondence
    never increases distortion.
    """
    na, nb = da.shape[0], db.shape[0]
    tol = delta + 1e-12

    pairs: list[tuple[int, int]] = []
    if forced is not None:
        pairs.append(forced)

    def compatible(a: int, b: int) -> bool:
        for a2, b2 in pairs:
            if abs(da[a, a2] - db[b, b2]) > tol:
                return False
        return True

    def assign_a(i: int) -> bool:
        if i == na:
            return assign_b(0)
        for b in range(nb):
            if compatible(i, b):
                pairs.append((i, b))
                if assign_a(i + 1):
                    return True
                pairs.pop()
        return False

    def assign_b(j: int) -> bool:
        if j == nb:
            return True
        if any(b == j for _, b in pairs):
            return assign_b(j + 1)
        for a in range(na):
            if compatible(a, j):
                pairs.append((a, j))
                if assign_b(j + 1):
                    return True
                pairs.pop()
        return False

    return assign_a(0)


def gh_exact(a: FiniteMetricSpace, b: FiniteMetricSpace, pointed: bool = False) -> float:
    """Exact GH distance between tiny spaces.

    Searches the candidate distortion values (all |d_A - d_B| gaps) for
    the least one admitting a correspondence; the feasibility test walks
    minimal correspondences only, which is equivalent to exhausting all
    of them.  With pointed=True the base pair is forced into every
    correspondence.
    """
    if a.n > EXHAUSTIVE_LIMIT or b.n > EXHAUSTIVE_LIMIT:
        raise TooLarge(
            f"exact search limited to {EXHAUSTIVE_LIMIT} points, got {a.n} and {b.n}"
        )
    da, db = a.dist, b.dist
    forced = (a.base, b.base) if pointed else None

    cands = np.unique(np.abs(da.reshape(-1, 1) - db.reshape(1, -1)))
    lo, hi = 0, cands.size - 1
    # invariant: cands[hi] always feasible (the max gap admits any pairing)
    if _feasible(da, db, float(cands[0]), forced):
        return 0.5 * float(cands[0])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _feasible(da, db, float(cands[mid]), forced):
            hi = mid
        else:
            lo = mid
    return 0.5 * float(cands[hi])


# -- scalable bounds ---------------------------------------------------------


def _directed_hausdorff_1d(x: np.ndarray, y: np.ndarray) -> float:
    """sup over x of distance to the nearest element of sorted y."""
    if y.size == 1:
        return float(np.abs(x - y[0]).max())
    i = np.clip(np.searchsorted(y, x), 1, y.size - 1)
    return float(np.minimum(np.abs(x - y[i - 1]), np.abs(x - y[i])).max())


def _hausdorff_1d(x: np.ndarray, y: np.ndarray) -> float:
    """Hausdorff distance between two finite sets of reals."""
    xs = np.sort(x)
    ys = np.sort(y)
    return max(_directed_hausdorff_1d(xs, ys), _directed_hausdorff_1d(ys, xs))


def _map_distortion(da: np.ndarray, db: np.ndarray, phi: np.ndarray) -> float:
    return float(np.abs(da - db[np.ix_(phi, phi)]).max())


def _greedy_map(da: np.ndarray, db: np.ndarray, order: np.ndarray, start: tuple[int, int] | None) -> np.ndarray:
    """Map A -> B built point by point, minimizing the running distortion."""
    na, nb = da.shape[0], db.shape[0]
    phi = np.full(na, -1, dtype=int)
    placed: list[int] = []
    if start is not None:
        phi[start[0]] = start[1]
        placed.append(start[0])
    for a in order:
        if phi[a] >= 0:
            continue
        if placed:
            cost = np.abs(da[a, placed].reshape(-1, 1) - db[np.ix_(phi[placed], np.arange(nb))]).max(axis=0)
            phi[a] = int(np.argmin(cost))
        else:
            phi[a] = 0
        placed.append(a)
    return phi


def _refine_map(da: np.ndarray, db: np.ndarray, phi: np.ndarray, sweeps: int = 2) -> np.ndarray:
    """Single-point reassignment passes; keeps changes that lower distortion."""
    na, nb = da.shape[0], db.shape[0]
    if na < 2:
        return phi
    phi = phi.copy()
    best = _map_distortion(da, db, phi)
    for _ in range(sweeps):
        improved = False
        for a in range(na):
            old = phi[a]
            others = np.delete(np.arange(na), a)
            cost = np.abs(
                da[a, others].reshape(-1, 1) - db[np.ix_(phi[others], np.arange(nb))]
            ).max(axis=0)
            cand = int(np.argmin(cost))
            if cand != old:
                phi[a] = cand
                new = _map_distortion(da, db, phi)
                if new < best:
                    best = new
                    improved = True
                else:
                    phi[a] = old
        if not improved:
            break
    return phi


def _correspondence_distortion(
    da: np.ndarray, db: np.ndarray, phi: np.ndarray, psi: np.ndarray
) -> float:
    """Distortion of the correspondence graph(phi) union graph(psi)."""
    worst = _map_distortion(da, db, phi)
    worst = max(worst, _map_distortion(db, da, psi))
    # cross terms between the two graphs
    cross = np.abs(da[:, psi] - db[phi, :])
    return max(worst, float(cross.max()))


def gh_bound(
    a: FiniteMetricSpace,
    b: FiniteMetricSpace,
    iterations: int = 32,
    seed: int = 0,
    pointed: bool = True,
) -> tuple[float, float]:
    """Certified lower and heuristic upper bound on the GH distance.

    The lower bound combines the diameter gap, the Hausdorff mismatch of
    the distance-value sets (zero included: pairs may collapse), and for
    the pointed variant the mismatch of base-distance profiles.  The
    upper bound is half the distortion of the best correspondence found
    by seeded greedy construction plus local refinement; when the sizes
    match, the index-aligned identity is also tried, which is exact for
    samples generated by shared low-discrepancy streams.
    """
    da, db = a.dist, b.dist
    lower = 0.5 * abs(a.diameter - b.diameter)
    va = np.concatenate(([0.0], da[np.triu_indices(a.n, 1)])) if a.n > 1 else np.zeros(1)
    vb = np.concatenate(([0.0], db[np.triu_indices(b.n, 1)])) if b.n > 1 else np.zeros(1)
    lower = max(lower, 0.5 * _hausdorff_1d(va, vb))
    if pointed:
        lower = max(lower, 0.5 * _hausdorff_1d(a.base_distances(), b.base_distances()))

    rng = np.random.default_rng(seed)
    start = (a.base, b.base) if pointed else None
    start_rev = (b.base, a.base) if pointed else None
    best = math.inf

    candidates: list[tuple[np.ndarray, np.ndarray]] = []
    if a.n == b.n:
        ident = np.arange(a.n)
        candidates.append((ident, ident))
    order_a = np.argsort(a.base_distances())
    order_b = np.argsort(b.base_distances())
    phi0 = _greedy_map(da, db, order_a, start)
    psi0 = _greedy_map(db, da, order_b, start_rev)
    candidates.append((phi0, psi0))
    for _ in range(iterations):
        phi = _greedy_map(da, db, rng.permutation(a.n), start)
        psi = _greedy_map(db, da, rng.permutation(b.n), start_rev)
        candidates.append((phi, psi))

    for phi, psi in candidates:
        phi = _refine_map(da, db, phi)
        psi = _refine_map(db, da, psi)
        if pointed and start is not None:
            phi[start[0]] = start[1]
            psi[start[1]] = start[0]
        best = min(best, _correspondence_distortion(da, db, phi, psi))

    upper = 0.5 * best
    return min(lower, upper), upper


# -- dimension estimation ----------------------------------------------------


@dataclass(frozen=True)
class DimEstimate:
    """Slope of log N(r) against log 1/r over the chosen scale window."""

    dimension: float
    residual: float
    scales: tuple[float, ...]
    counts: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "residual": self.residual,
            "scales": list(self.scales),
            "counts": list(self.counts),
        }


def _cover_count(d: np.ndarray, r: float) -> float:
    """Covering count n / (mean number of points within r, self included).

    The average ball mass is an unbiased stand-in for the mass of a
    covering ball; dividing the sample size by it avoids the density
    deficit of greedy packing at small sample sizes.
    """
    k = np.count_nonzero(d <= r, axis=1)
    return d.shape[0] / float(k.mean())


def dim_estimate(
    space: FiniteMetricSpace,
    r_min: float | None = None,
    r_max: float | None = None,
    n_scales: int = 8,
) -> DimEstimate:
    """Covering-count dimension over a percentile scale window.

    Scales default to a geometric grid between the 5th and 50th
    percentiles of the positive pairwise distances; both endpoints are
    reported so results are interpretable.  A single point estimates
    dimension zero by convention.
    """
    n = space.n
    if n == 1:
        return DimEstimate(0.0, 0.0, (), ())
    d = space.dist
    vals = d[np.triu_indices(n, 1)]
    pos = vals[vals > 0]
    if pos.size == 0:
        raise DegenerateScales("all pairwise distances are zero")
    if r_min is None:
        r_min = float(np.percentile(pos, 5))
    if r_max is None:
        r_max = float(np.percentile(pos, 50))
    if not (0 < r_min < r_max):
        raise DegenerateScales(f"unusable scale window [{r_min}, {r_max}]")

    scales = np.geomspace(r_min, r_max, n_scales)
    counts = np.array([_cover_count(d, float(r)) for r in scales])
    log_inv_r = np.log(1.0 / scales)
    log_n = np.log(counts)
    if np.unique(log_inv_r).size < 3:
        raise DegenerateScales("fewer than 3 usable scales in the window")
    slope, intercept = np.polyfit(log_inv_r, log_n, 1)
    fit = slope * log_inv_r + intercept
    residual = float(np.sqrt(np.mean((log_n - fit) ** 2)))
    return DimEstimate(
        float(slope),
        residual,
        tuple(float(r) for r in scales),
        tuple(float(c) for c in counts),
    )


# -- serialization -----------------------------------------------------------


def write_space(path: str | Path, space: FiniteMetricSpace, meta: dict | None = None) -> None:
    """CSV matrix alongside a .json sidecar with base point and metadata."""
    path = Path(path)
    write_matrix_csv(path, space.dist)
    side = {"base": space.base, "n": space.n}
    if meta:
        side.update(meta)
    dump_json(side, path.with_suffix(".json"))


def read_space(path: str | Path) -> FiniteMetricSpace:
    path = Path(path)
    d = read_matrix_csv(path)
    side = load_json(path.with_suffix(".json"))
    return FiniteMetricSpace(d, base=int(side["base"]))


def space_record(space: FiniteMetricSpace, **extra) -> str:
    """JSON record of summary invariants, for result manifests."""
    rec = {
        "n": space.n,
        "base": space.base,
        "diameter": space.diameter,
    }
    rec.update(extra)
    return json_dumps(rec)
