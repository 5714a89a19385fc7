"""Curvature inequalities and sequence classification.

The quantitative content lives in two closed-form bounds: a Hamilton-Ivey
style scalar-curvature threshold active wherever the lowest curvature
eigenvalue is negative, and the top-eigenvalue lower bound it implies.
The remaining functions classify discrete histories against the standard
Type III / Type IIb dichotomy and the almost-nonnegative-sectional
criterion, always reporting the raw witness data alongside the verdict.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, NotEssential
from .profiles import CurvatureSpectrum, SpectrumHistory
from .serialize import json_dumps

__all__ = [
    "PinchingParams",
    "PinchingViolation",
    "PinchingReport",
    "SequenceKind",
    "BumpLike",
    "SplitLike",
    "SequenceClassification",
    "hamilton_ivey_threshold",
    "lambda3_lower_bound",
    "check_pinching",
    "classify_origin",
    "classify_sequence",
    "ansc_verify",
]


@dataclass(frozen=True)
class PinchingParams:
    """Initial pinching constant and comparison slack.

    c0 is the constant in the time-zero hypothesis lambda1 >= -c0.
    """

    c0: float = 1.0
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if not self.c0 > 0:
            raise ValueError(f"c0 must be positive, got {self.c0}")
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {self.tolerance}")


def hamilton_ivey_threshold(lambda1: float, params: PinchingParams, t: float) -> float:
    """Scalar-curvature lower bound active where lambda1 < 0.

    Returns -lambda1 * [ln(-lambda1) + ln(1 + c0 t) - ln c0 - 3].  The
    flow hypothesis behind it requires t >= 0 and lambda1(., 0) >= -c0;
    the formula itself only needs lambda1 < 0.
    """
    if lambda1 >= 0:
        raise DomainError(f"threshold only asserted for lambda1 < 0, got {lambda1}")
    m = -lambda1
    return m * (math.log(m) + math.log1p(params.c0 * t) - math.log(params.c0) - 3.0)


def lambda3_lower_bound(lambda1: float, params: PinchingParams, t: float) -> float:
    """Lower bound on the top eigenvalue implied by the scalar threshold.

    Returns -lambda1/2 * ln[-lambda1 (c0^-1 + t) e^-2].  May be negative
    (a vacuous bound) when the logarithm's argument is below 1.
    """
    if lambda1 >= 0:
        raise DomainError(f"bound only asserted for lambda1 < 0, got {lambda1}")
    m = -lambda1
    return 0.5 * m * (math.log(m * (1.0 / params.c0 + t)) - 2.0)


@dataclass(frozen=True)
class PinchingViolation:
    time_index: int
    grid_index: int
    lambda1: float
    scalar: float
    threshold: float

    def as_dict(self) -> dict:
        return {
            "time_index": self.time_index,
            "grid_index": self.grid_index,
            "lambda1": self.lambda1,
            "scalar": self.scalar,
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class PinchingReport:
    """Outcome of a pointwise threshold sweep over a spectrum history."""

    violations: tuple[PinchingViolation, ...]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "violations": [v.as_dict() for v in self.violations],
        }

    def to_json(self) -> str:
        return json_dumps(self.as_dict())


def check_pinching(history: SpectrumHistory, params: PinchingParams) -> PinchingReport:
    """Sweep every (time, point) with lambda1 < 0 against the threshold.

    An empty violation list means the inequality held everywhere it
    applies.  `checked` counts the (time, point) pairs where the
    hypothesis lambda1 < 0 was active, so callers can tell a vacuous
    pass (checked == 0) from a substantive one.
    """
    violations: list[PinchingViolation] = []
    checked = 0
    for i, t in enumerate(history.times):
        spec = history.spectra[i]
        l1 = spec.lambda1
        r = spec.scalar
        for j in np.nonzero(l1 < 0)[0]:
            checked += 1
            thr = hamilton_ivey_threshold(float(l1[j]), params, float(t))
            if r[j] < thr - params.tolerance:
                violations.append(
                    PinchingViolation(i, int(j), float(l1[j]), float(r[j]), thr)
                )
    return PinchingReport(tuple(violations), checked)


@dataclass(frozen=True)
class BumpLike:
    """Origin with curvature concentrated in every direction; carries the
    witness ratio c = lambda1 / |Rm|."""

    c: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError(f"bump-like witness must be positive, got {self.c}")


@dataclass(frozen=True)
class SplitLike:
    """Origin whose lowest eigenvalue is negligible against |Rm|."""


def classify_origin(
    spectrum_at_origin: Sequence[float], c_threshold: float = 0.1
) -> BumpLike | SplitLike:
    """Decide bump-like vs split-like from the eigenvalues at the origin.

    The witness is lambda1 / |Rm|; the cutoff c_threshold is a tunable
    dial (the underlying notion is existential in c), so it is the
    caller's job to report it with the verdict.
    """
    l1, l2, l3 = sorted(float(x) for x in spectrum_at_origin)
    rm = math.sqrt(l1 * l1 + l2 * l2 + l3 * l3)
    if rm == 0.0:
        raise NotEssential("origin has |Rm| = 0; classification undefined")
    ratio = l1 / rm
    if ratio >= c_threshold:
        return BumpLike(ratio)
    return SplitLike()


class SequenceKind(enum.Enum):
    TYPE_III_LIKE = "TypeIII_like"
    TYPE_IIB_LIKE = "TypeIIb_like"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class SequenceClassification:
    """Verdict for a (t_i, K_i) sequence plus the raw t*K products.

    Finite data cannot certify the limit t*K -> infinity, so the products
    are always included for the caller's own judgement.
    """

    kind: SequenceKind
    tk_products: tuple[float, ...]
    origin_kind: BumpLike | SplitLike | None = None
    ansc_deltas: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        d: dict = {"kind": self.kind.value, "tk_products": list(self.tk_products)}
        if isinstance(self.origin_kind, BumpLike):
            d["origin_kind"] = {"kind": "BumpLike", "c": self.origin_kind.c}
        elif isinstance(self.origin_kind, SplitLike):
            d["origin_kind"] = {"kind": "SplitLike"}
        if self.ansc_deltas:
            d["ansc_deltas"] = list(self.ansc_deltas)
        return d


def classify_sequence(
    t_list: Sequence[float], k_list: Sequence[float], c: float
) -> SequenceClassification:
    """Type III vs Type IIb discrimination on a finite sample.

    Type III means K_i <= c/t_i for every sample.  Type IIb is detected
    by monotone escape of t_i*K_i: nondecreasing over the final half of
    the sample with the last product exceeding ten times the first.
    Anything else is Indeterminate.
    """
    t = np.asarray(t_list, dtype=float)
    k = np.asarray(k_list, dtype=float)
    if t.shape != k.shape or t.ndim != 1 or t.size < 2:
        raise ValueError("t_list and k_list must be 1-D, equal length, size >= 2")
    if not np.all(np.diff(t) > 0):
        raise ValueError("t_list must be strictly increasing")
    if not (np.all(t > 0) and np.all(k > 0)):
        raise ValueError("times and curvatures must be positive")

    tk = t * k
    products = tuple(float(x) for x in tk)
    if np.all(k <= c / t * (1.0 + 1e-12)):
        return SequenceClassification(SequenceKind.TYPE_III_LIKE, products)
    tail = tk[tk.size // 2 :]
    escape = tk[-1] > 10.0 * tk[0]
    monotone = bool(np.all(np.diff(tail) >= -1e-12 * tk[-1]))
    if escape and monotone:
        return SequenceClassification(SequenceKind.TYPE_IIB_LIKE, products)
    return SequenceClassification(SequenceKind.INDETERMINATE, products)


def ansc_verify(
    member_lambda1: Sequence[np.ndarray | Sequence[float] | CurvatureSpectrum],
    delta_list: Sequence[float] | None = None,
    delta0: float = 1.0,
) -> tuple[bool, float]:
    """Check lambda1 >= -delta_i member by member over a sampled ball.

    Each entry of `member_lambda1` is either the lambda1 field over the
    ball or a full spectrum (its lambda1 is used).  Without an explicit
    delta_list the geometric schedule delta_i = delta0 * 2^-i applies.
    Returns (ok, worst ratio min(lambda1)/delta_i); a ratio below -1
    pinpoints the failing margin.
    """
    mins: list[float] = []
    for entry in member_lambda1:
        l1 = entry.lambda1 if isinstance(entry, CurvatureSpectrum) else entry
        arr = np.asarray(l1, dtype=float)
        if arr.size == 0:
            raise ValueError("empty ball sample")
        mins.append(float(arr.min()))

    if delta_list is None:
        deltas = [delta0 * 2.0**-i for i in range(len(mins))]
    else:
        deltas = [float(d) for d in delta_list]
        if len(deltas) < len(mins):
            raise ValueError("delta_list shorter than the member list")
        if any(d <= 0 for d in deltas):
            raise ValueError("deltas must be positive")
        if any(b > a * (1 + 1e-12) for a, b in zip(deltas, deltas[1:])):
            raise ValueError("delta_list must be nonincreasing")

    worst = math.inf
    ok = True
    for m, d in zip(mins, deltas):
        ratio = m / d
        worst = min(worst, ratio)
        if m < -d:
            ok = False
    return ok, worst
