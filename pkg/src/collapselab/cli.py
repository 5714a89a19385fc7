"""Command-line front end.

Every subcommand reads a single JSON config, validates it fully before
touching the output directory, runs its pipeline, and finishes by
writing ``manifest.json`` with a content hash per artifact.  Identical
config and seed give byte-identical artifacts.  Exit codes: 0 on
success, 1 when a pipeline stage fails (the stage is named), 2 for a
bad config (nothing is written).
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .collapse import inj_proxy, make_family, sample_space
from .dilation import DilationRecord, rescale, select_point
from .errors import ConfigError, DegenerateScales, PipelineError
from .flow import (
    SurfaceSolution,
    areas,
    evolve,
    gauss_curvature,
    phi_variation,
    profile_at,
    read_solution,
    spectrum_history,
    trusted_slice,
    write_solution,
)
from .gh import EXHAUSTIVE_LIMIT, dim_estimate, gh_bound, gh_exact, read_space, write_space
from .profiles import (
    RadialProfile,
    Warped3Metric,
    cigar_profile,
    disk_profile,
    flat_cylinder,
    quotient_metric,
    read_profile,
    sphere_profile,
    write_profile,
)
from .serialize import dump_json, sha256_of, write_csv
from .virtual_limit import (
    ProfileWindow,
    chain_identify,
    cigar_compare,
    classify_local_model,
    cut_windows,
    detect_singular_points,
    extend_to_disk,
    glue,
    write_comparison,
    LocalModel,
)

__all__ = ["main"]


# -- config plumbing ---------------------------------------------------------

_MISSING = object()


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _get(cfg: dict, key: str, default=_MISSING):
    if key in cfg:
        return cfg[key]
    if default is _MISSING:
        raise ConfigError(f"missing config key {key!r}")
    return default


def _positive(cfg: dict, key: str, default=_MISSING) -> float:
    val = _get(cfg, key, default)
    try:
        val = float(val)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {val!r}") from None
    _require(val > 0, f"{key} must be positive, got {val:g}")
    return val


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path!r} not found")
    import json

    try:
        cfg = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    _require(isinstance(cfg, dict), "config must be a JSON object")
    return cfg


def _build_profile(block) -> RadialProfile:
    _require(isinstance(block, dict), "profile block must be an object")
    kind = _get(block, "kind")
    try:
        if kind == "cigar":
            return cigar_profile(
                r_max=_positive(block, "r_max", 8.0),
                n=int(_get(block, "n", 401)),
                sigma=_positive(block, "sigma", 1.0),
            )
        if kind == "sphere":
            return sphere_profile(n=int(_get(block, "n", 201)), k0=_positive(block, "k0", 1.0))
        if kind == "cylinder":
            return flat_cylinder(
                length=_positive(block, "length", 10.0),
                n=int(_get(block, "n", 501)),
                radius=_positive(block, "radius", 1.0),
            )
        if kind == "disk":
            return disk_profile(radius=_positive(block, "radius", 1.0), n=int(_get(block, "n", 201)))
        if kind == "csv":
            path = Path(_get(block, "path"))
            _require(path.is_file(), f"profile file {str(path)!r} not found")
            return read_profile(path)
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError(f"cannot build {kind!r} profile: {e}") from e
    raise ConfigError(f"unknown profile kind {kind!r}")


@contextmanager
def _stage(name: str):
    try:
        yield
    except (PipelineError, ConfigError):
        raise
    except Exception as e:
        raise PipelineError(name, str(e)) from e


def _schedule(cfg: dict, key: str, decreasing: bool = False) -> tuple[float, ...]:
    raw = _get(cfg, key)
    _require(isinstance(raw, list) and raw, f"{key} must be a nonempty list")
    try:
        vals = tuple(float(v) for v in raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must hold numbers") from None
    diffs = np.diff(vals)
    if decreasing:
        _require(bool(np.all(diffs < 0)), f"{key} must be strictly decreasing")
        _require(vals[-1] > 0, f"{key} must stay positive")
    else:
        _require(bool(np.all(diffs > 0)), f"{key} must be strictly increasing")
    return vals


# -- simulate ----------------------------------------------------------------


@dataclass(frozen=True)
class SimulateConfig:
    initial: RadialProfile
    t_end: float
    output_stride: int
    cfl_fraction: float
    safety: float
    blowup_ceiling: float


def _validate_simulate(cfg: dict) -> SimulateConfig:
    stride = int(_get(cfg, "output_stride", 1))
    _require(stride >= 1, f"output_stride must be >= 1, got {stride}")
    cfl = _positive(cfg, "cfl_fraction", 0.2)
    _require(cfl <= 1.0, f"cfl_fraction must be in (0, 1], got {cfl:g}")
    return SimulateConfig(
        initial=_build_profile(_get(cfg, "profile")),
        t_end=_positive(cfg, "t_end"),
        output_stride=stride,
        cfl_fraction=cfl,
        safety=_positive(cfg, "safety", 1.0),
        blowup_ceiling=_positive(cfg, "blowup_ceiling", 1e6),
    )


def _solution_summary(sol: SurfaceSolution) -> dict:
    final = sol.profiles[-1]
    k = gauss_curvature(final)[trusted_slice(final)]
    return {
        "blowup": sol.blowup,
        "blowup_time": sol.blowup_time,
        "final_time": float(sol.times[-1]),
        "n_frames": int(sol.times.size),
        "final_sup_curvature": float(np.abs(k).max()),
        "phi_variation": phi_variation(sol),
    }


def _run_simulate(cfg: SimulateConfig, out: Path, seed: int) -> None:
    del seed
    with _stage("evolve"):
        sol = evolve(
            cfg.initial,
            cfg.t_end,
            output_stride=cfg.output_stride,
            cfl_fraction=cfg.cfl_fraction,
            safety=cfg.safety,
            blowup_ceiling=cfg.blowup_ceiling,
        )
    with _stage("write"):
        write_solution(sol, out / "solution")
        write_csv(out / "areas.csv", ["t", "area"], [sol.times, areas(sol)])
        dump_json(_solution_summary(sol), out / "summary.json")


# -- collapse ----------------------------------------------------------------


@dataclass(frozen=True)
class CollapseConfig:
    base: RadialProfile
    epsilons: tuple[float, ...]
    twist: tuple[float, float] | None
    n_samples: int
    r_window: tuple[float, float] | None
    n_theta: int
    n_u: int
    iterations: int


def _validate_collapse(cfg: dict) -> CollapseConfig:
    twist = _get(cfg, "twist", None)
    if twist is not None:
        _require(
            isinstance(twist, list) and len(twist) == 2,
            "twist must be a two-element list [a, b]",
        )
        twist = (float(twist[0]), float(twist[1]))
        _require(twist[1] != 0.0, "twist needs b != 0")
    window = _get(cfg, "r_window", None)
    if window is not None:
        _require(
            isinstance(window, list) and len(window) == 2 and window[0] < window[1],
            "r_window must be [lo, hi] with lo < hi",
        )
        window = (float(window[0]), float(window[1]))
    n = int(_get(cfg, "n_samples", 64))
    _require(n >= 2, f"n_samples must be >= 2, got {n}")
    it = int(_get(cfg, "iterations", 8))
    _require(it >= 1, f"iterations must be >= 1, got {it}")
    return CollapseConfig(
        base=_build_profile(_get(cfg, "profile")),
        epsilons=_schedule(cfg, "epsilons", decreasing=True),
        twist=twist,
        n_samples=n,
        r_window=window,
        n_theta=int(_get(cfg, "n_theta", 48)),
        n_u=int(_get(cfg, "n_u", 8)),
        iterations=it,
    )


def _run_collapse(cfg: CollapseConfig, out: Path, seed: int) -> None:
    with _stage("sample_base"):
        base_space = sample_space(
            cfg.base, cfg.n_samples, seed=seed, r_window=cfg.r_window, n_theta=cfg.n_theta
        )
        write_space(out / "base_space.csv", base_space)
    results = []
    a, b = cfg.twist if cfg.twist else (0.0, 0.0)
    for i, eps in enumerate(cfg.epsilons):
        with _stage(f"sample_member_{i}"):
            member = Warped3Metric(cfg.base, eps, a, b)
            if member.twisted:
                surface = quotient_metric(cfg.base, a, b)
                space = sample_space(
                    surface, cfg.n_samples, seed=seed, r_window=cfg.r_window, n_theta=cfg.n_theta
                )
            else:
                space = sample_space(
                    member,
                    cfg.n_samples,
                    seed=seed,
                    r_window=cfg.r_window,
                    n_theta=cfg.n_theta,
                    n_u=cfg.n_u,
                )
            write_space(out / f"member_space_{i}.csv", space)
        with _stage(f"gh_{i}"):
            lower, upper = gh_bound(base_space, space, iterations=cfg.iterations, seed=seed)
        results.append(
            {
                "epsilon": eps,
                "gh_lower": lower,
                "gh_upper": upper,
                "inj_tip": inj_proxy(member, 0),
                "inj_far": inj_proxy(member, cfg.base.n - 1),
            }
        )
    dump_json({"results": results}, out / "collapse_report.json")


# -- dilate ------------------------------------------------------------------


@dataclass(frozen=True)
class DilateConfig:
    solution_dir: Path
    windows: tuple[float, ...]
    epsilon: float
    beta: float
    psi: float
    fiber_length: float
    write_rescaled: bool


def _validate_dilate(cfg: dict) -> DilateConfig:
    sol_dir = Path(_get(cfg, "solution_dir"))
    _require((sol_dir / "index.json").is_file(), f"no solution index under {str(sol_dir)!r}")
    eps = float(_get(cfg, "epsilon", 0.0))
    _require(0.0 <= eps < 1.0, f"epsilon must lie in [0, 1), got {eps:g}")
    beta = float(_get(cfg, "beta", -0.5))
    psi = _positive(cfg, "psi", 0.5)
    _require(beta < 0.0, f"beta must be negative, got {beta:g}")
    return DilateConfig(
        solution_dir=sol_dir,
        windows=_schedule(cfg, "windows"),
        epsilon=eps,
        beta=beta,
        psi=psi,
        fiber_length=_positive(cfg, "fiber_length", 1.0),
        write_rescaled=bool(_get(cfg, "write_rescaled", True)),
    )


def _run_dilate(cfg: DilateConfig, out: Path, seed: int) -> None:
    del seed
    with _stage("load"):
        sol = read_solution(cfg.solution_dir)
    with _stage("spectra"):
        hist = spectrum_history(sol)
    records: list[DilationRecord] = []
    for i, window_end in enumerate(cfg.windows):
        with _stage(f"select_{i}"):
            rec = select_point(hist, window_end, cfg.epsilon)
            records.append(rec)
        if cfg.write_rescaled:
            with _stage(f"rescale_{i}"):
                write_solution(rescale(sol, rec, cfg.beta, cfg.psi), out / f"rescaled_{i:02d}")
    dump_json({"records": [r.as_dict() for r in records]}, out / "dilation.json")


# -- gh ----------------------------------------------------------------------


@dataclass(frozen=True)
class GhConfig:
    entries: tuple[dict, ...]
    pointed: bool
    iterations: int


def _validate_gh_space(entry) -> dict:
    _require(isinstance(entry, dict), "each space entry must be an object")
    kind = _get(entry, "kind")
    if kind == "interval":
        _positive(entry, "length", 1.0)
    elif kind == "profile":
        _build_profile(_get(entry, "profile"))
    elif kind == "product":
        _build_profile(_get(entry, "profile"))
        _positive(entry, "fiber_length")
    elif kind == "csv":
        _require(Path(_get(entry, "path")).is_file(), "space csv not found")
    else:
        raise ConfigError(f"unknown space kind {kind!r}")
    n = int(_get(entry, "n", 64)) if kind != "csv" else 2
    _require(n >= 2, "space needs n >= 2 samples")
    return entry


def _validate_gh(cfg: dict) -> GhConfig:
    raw = _get(cfg, "spaces")
    _require(isinstance(raw, list) and raw, "spaces must be a nonempty list")
    it = int(_get(cfg, "iterations", 32))
    _require(it >= 1, "iterations must be >= 1")
    return GhConfig(
        entries=tuple(_validate_gh_space(s) for s in raw),
        pointed=bool(_get(cfg, "pointed", True)),
        iterations=it,
    )


def _build_space(entry: dict, seed: int):
    kind = entry["kind"]
    if kind == "csv":
        return read_space(Path(entry["path"]))
    n = int(entry.get("n", 64))
    window = entry.get("r_window")
    if window is not None:
        window = (float(window[0]), float(window[1]))
    if kind == "interval":
        return sample_space((0.0, float(entry.get("length", 1.0))), n, seed=seed)
    profile = _build_profile(entry["profile"])
    if kind == "profile":
        return sample_space(
            profile, n, seed=seed, r_window=window, n_theta=int(entry.get("n_theta", 48))
        )
    member = Warped3Metric(profile, float(entry["fiber_length"]))
    return sample_space(
        member,
        n,
        seed=seed,
        r_window=window,
        n_theta=int(entry.get("n_theta", 48)),
        n_u=int(entry.get("n_u", 8)),
    )


def _run_gh(cfg: GhConfig, out: Path, seed: int) -> None:
    spaces = []
    for i, entry in enumerate(cfg.entries):
        with _stage(f"build_{i}"):
            space = _build_space(entry, seed)
            spaces.append(space)
            write_space(out / f"space_{i}.csv", space)
    pairs = []
    for i in range(len(spaces)):
        for j in range(i + 1, len(spaces)):
            with _stage(f"estimate_{i}_{j}"):
                if max(spaces[i].n, spaces[j].n) <= EXHAUSTIVE_LIMIT:
                    d = gh_exact(spaces[i], spaces[j], pointed=cfg.pointed)
                    pairs.append({"i": i, "j": j, "exact": d})
                else:
                    lower, upper = gh_bound(
                        spaces[i],
                        spaces[j],
                        iterations=cfg.iterations,
                        seed=seed,
                        pointed=cfg.pointed,
                    )
                    pairs.append({"i": i, "j": j, "lower": lower, "upper": upper})
    dims = []
    for i, space in enumerate(spaces):
        with _stage(f"dimension_{i}"):
            try:
                dims.append(dim_estimate(space).as_dict())
            except DegenerateScales as e:
                dims.append({"error": str(e)})
    dump_json({"pairs": pairs, "dimensions": dims}, out / "gh_report.json")


# -- glue --------------------------------------------------------------------


@dataclass(frozen=True)
class GlueConfig:
    windows: tuple[ProfileWindow, ...]
    tolerance: float | None
    search_pad: float | None


def _validate_glue(cfg: dict) -> GlueConfig:
    tol = _get(cfg, "tolerance", None)
    if tol is not None:
        tol = _positive(cfg, "tolerance")
    pad = _get(cfg, "search_pad", None)
    if pad is not None:
        pad = _positive(cfg, "search_pad")
    if "windows" in cfg:
        raw = cfg["windows"]
        _require(isinstance(raw, list) and raw, "windows must be a nonempty list")
        built = []
        for w in raw:
            _require(isinstance(w, dict), "each window must be an object")
            path = Path(_get(w, "path"))
            _require(path.is_file(), f"window profile {str(path)!r} not found")
            try:
                prof = read_profile(path)
            except Exception as e:
                raise ConfigError(f"cannot read window {str(path)!r}: {e}") from e
            built.append(ProfileWindow(prof, center_r=float(_get(w, "center_r"))))
        return GlueConfig(tuple(built), tol, pad)
    profile = _build_profile(_get(cfg, "profile"))
    centers = _schedule(cfg, "centers")
    half_width = _positive(cfg, "half_width")
    try:
        windows = cut_windows(profile, centers, half_width)
    except Exception as e:
        raise ConfigError(f"cannot cut windows: {e}") from e
    return GlueConfig(tuple(windows), tol, pad)


def _run_glue(cfg: GlueConfig, out: Path, seed: int) -> None:
    del seed
    windows = list(cfg.windows)
    with _stage("identify"):
        records = chain_identify(windows, cfg.search_pad)
        dump_json({"overlaps": [r.as_dict() for r in records]}, out / "overlaps.json")
    with _stage("glue"):
        glued = glue(windows, tolerance=cfg.tolerance, search_pad=cfg.search_pad)
        write_profile(glued, out / "glued_profile.csv")


# -- compare -----------------------------------------------------------------


@dataclass(frozen=True)
class CompareConfig:
    solution_dir: Path | None
    profile: RadialProfile | None


def _validate_compare(cfg: dict) -> CompareConfig:
    if "solution_dir" in cfg:
        sol_dir = Path(cfg["solution_dir"])
        _require((sol_dir / "index.json").is_file(), f"no solution index under {str(sol_dir)!r}")
        return CompareConfig(sol_dir, None)
    return CompareConfig(None, _build_profile(_get(cfg, "profile")))


def _run_compare(cfg: CompareConfig, out: Path, seed: int) -> None:
    del seed
    with _stage("load"):
        subject = read_solution(cfg.solution_dir) if cfg.solution_dir else cfg.profile
    with _stage("compare"):
        report = cigar_compare(subject)
        write_comparison(report, out / "comparison.csv")
        dump_json(report.as_dict(), out / "compare_report.json")


# -- classify ----------------------------------------------------------------


@dataclass(frozen=True)
class ClassifyConfig:
    cases: tuple[dict, ...]
    singular: dict | None


def _validate_classify(cfg: dict) -> ClassifyConfig:
    cases = _get(cfg, "cases", [])
    _require(isinstance(cases, list), "cases must be a list")
    for case in cases:
        _require(isinstance(case, dict), "each case must be an object")
        _get(case, "m")
        _require(isinstance(_get(case, "gamma"), str), "gamma must be a string")
    singular = _get(cfg, "singular", None)
    if singular is not None:
        orders = _get(singular, "cone_orders")
        curv = _get(singular, "curvatures")
        _require(
            isinstance(orders, list) and isinstance(curv, list) and curv,
            "singular block needs cone_orders and nonempty curvatures",
        )
    _require(bool(cases) or singular is not None, "nothing to classify")
    return ClassifyConfig(tuple(cases), singular)


def _run_classify(cfg: ClassifyConfig, out: Path, seed: int) -> None:
    del seed
    verdicts = []
    for case in cfg.cases:
        with _stage("classify"):
            try:
                got = classify_local_model(
                    int(case["m"]),
                    case["gamma"],
                    a=float(case.get("a", -1.0)),
                    b=float(case.get("b", 1.0)),
                    has_fixed_point=case.get("has_fixed_point"),
                )
            except Exception as e:
                verdicts.append({"input": case, "inconsistent": str(e)})
            else:
                key = "model" if isinstance(got, LocalModel) else "rejection"
                verdicts.append({"input": case, key: got.as_dict()})
    dump_json({"verdicts": verdicts}, out / "classification.json")
    if cfg.singular is not None:
        with _stage("singular"):
            report = detect_singular_points(
                cfg.singular["cone_orders"],
                np.asarray(cfg.singular["curvatures"], dtype=float),
                cfg.singular.get("dihedral"),
            )
            dump_json(report.as_dict(), out / "singular_report.json")


# -- pipeline ----------------------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    n: int
    r_max: float
    sigma: float
    t_end: float
    output_stride: int
    cfl_fraction: float
    epsilons: tuple[float, ...]
    t_schedule: tuple[float, ...]
    epsilon: float
    beta: float
    psi: float
    window_centers: tuple[float, ...]
    half_width: float
    search_pad: float
    tolerance: float | None


def _validate_pipeline(cfg: dict) -> PipelineConfig:
    recipe = _get(cfg, "recipe")
    _require(recipe == "type2b", f"unknown recipe {recipe!r}")
    n = int(_get(cfg, "n", 201))
    _require(n >= 5, f"n must be >= 5, got {n}")
    t_end = _positive(cfg, "t_end", 0.5)
    t_sched = _schedule(cfg, "t_schedule") if "t_schedule" in cfg else (0.3, 0.4, 0.5)
    _require(t_sched[0] > 0, "t_schedule must be positive")
    _require(t_sched[-1] <= t_end + 1e-12, "t_schedule must stay within t_end")
    epsilons = _schedule(cfg, "epsilons", decreasing=True) if "epsilons" in cfg else (0.2, 0.1, 0.05)
    centers = _schedule(cfg, "window_centers") if "window_centers" in cfg else (0.0, 4.0, 8.0)
    _require(
        len(t_sched) == len(epsilons) == len(centers),
        "t_schedule, epsilons and window_centers must have equal length",
    )
    eps = float(_get(cfg, "epsilon", 0.0))
    _require(0.0 <= eps < 1.0, f"epsilon must lie in [0, 1), got {eps:g}")
    beta = float(_get(cfg, "beta", -0.4))
    psi = _positive(cfg, "psi", 0.4)
    _require(beta < 0.0, f"beta must be negative, got {beta:g}")
    tol = _get(cfg, "tolerance", None)
    if tol is not None:
        tol = _positive(cfg, "tolerance")
    cfl = _positive(cfg, "cfl_fraction", 0.2)
    _require(cfl <= 1.0, f"cfl_fraction must be in (0, 1], got {cfl:g}")
    return PipelineConfig(
        n=n,
        r_max=_positive(cfg, "r_max", 8.0),
        sigma=_positive(cfg, "sigma", 1.0),
        t_end=t_end,
        output_stride=int(_get(cfg, "output_stride", 64)),
        cfl_fraction=cfl,
        epsilons=epsilons,
        t_schedule=t_sched,
        epsilon=eps,
        beta=beta,
        psi=psi,
        window_centers=centers,
        half_width=_positive(cfg, "half_width", 3.0),
        search_pad=_positive(cfg, "search_pad", 0.5),
        tolerance=tol,
    )


def _run_pipeline(cfg: PipelineConfig, out: Path, seed: int) -> None:
    del seed
    with _stage("simulate"):
        base = cigar_profile(r_max=cfg.r_max, n=cfg.n, sigma=cfg.sigma)
        sol = evolve(
            base, cfg.t_end, output_stride=cfg.output_stride, cfl_fraction=cfg.cfl_fraction
        )
        write_solution(sol, out / "solution")
        write_csv(out / "areas.csv", ["t", "area"], [sol.times, areas(sol)])
        dump_json(_solution_summary(sol), out / "summary.json")

    with _stage("family"):
        family = make_family(sol, cfg.epsilons)
        members = []
        for eps, metrics in zip(cfg.epsilons, family.members):
            final = metrics[-1]
            members.append(
                {
                    "epsilon": eps,
                    "inj_tip": inj_proxy(final, 0),
                    "inj_far": inj_proxy(final, cfg.n - 1),
                }
            )
        dump_json({"members": members}, out / "family.json")

    with _stage("dilate"):
        hist = spectrum_history(sol)
        records = []
        rescaled = []
        for window_end in cfg.t_schedule:
            rec = select_point(hist, window_end, cfg.epsilon)
            records.append(rec)
            rescaled.append(rescale(sol, rec, cfg.beta, cfg.psi))
        dump_json({"records": [r.as_dict() for r in records]}, out / "dilation.json")

    with _stage("extract"):
        windows = []
        for i, (rs, center) in enumerate(zip(rescaled, cfg.window_centers)):
            prof = profile_at(rs, 0.0)
            window = cut_windows(prof, [center], cfg.half_width)[0]
            windows.append(window)
            write_profile(window.profile, out / f"window_{i}.csv")

    with _stage("glue"):
        overlaps = chain_identify(windows, cfg.search_pad)
        dump_json({"overlaps": [r.as_dict() for r in overlaps]}, out / "overlaps.json")
        virtual = glue(windows, tolerance=cfg.tolerance, search_pad=cfg.search_pad)
        write_profile(virtual, out / "virtual_profile.csv")

    with _stage("extend"):
        extended = extend_to_disk(virtual)
        write_profile(extended, out / "extended_profile.csv")

    with _stage("compare"):
        report = cigar_compare(extended)
        write_comparison(report, out / "comparison.csv")
        dump_json(
            {
                "deviation": report.deviation,
                "sigma": report.sigma,
                "k_tip": report.k_tip,
                "tip_drift": report.tip_drift,
                "cone_order": extended.cone_order,
                "alphas": [r.alpha for r in records],
            },
            out / "pipeline_report.json",
        )


# -- entry point -------------------------------------------------------------

_COMMANDS = {
    "simulate": (_validate_simulate, _run_simulate),
    "collapse": (_validate_collapse, _run_collapse),
    "dilate": (_validate_dilate, _run_dilate),
    "gh": (_validate_gh, _run_gh),
    "glue": (_validate_glue, _run_glue),
    "compare": (_validate_compare, _run_compare),
    "classify": (_validate_classify, _run_classify),
    "pipeline": (_validate_pipeline, _run_pipeline),
}


def _write_manifest(out: Path, command: str, seed: int) -> None:
    files = sorted(
        p for p in out.rglob("*") if p.is_file() and p.name != "manifest.json"
    )
    listing = {p.relative_to(out).as_posix(): sha256_of(p) for p in files}
    dump_json({"command": command, "files": listing, "seed": seed}, out / "manifest.json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collapselab",
        description="Rotationally symmetric Ricci flow, collapse, and virtual limits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("config", help="path to the JSON run configuration")
        p.add_argument("--out", required=True, help="artifact output directory")
        p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    validate, run = _COMMANDS[args.command]
    try:
        cfg = validate(_load_config(args.config))
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        run(cfg, out, args.seed)
        _write_manifest(out, args.command, args.seed)
    except PipelineError as e:
        print(f"pipeline error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
