"""Acceptance suite: one test per criterion, ten in all.

Run with ``pytest tests/test_acceptance.py -v`` to get one pass/fail
line per criterion; each test also prints a one-line summary with the
measured numbers (visible with ``-s``).  Tolerances and runtime budgets
are pinned inline and are deliberately not shared with the module
tests, so a regression in either shows up twice.
"""

from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.spatial.distance import cdist
from scipy.stats import qmc

from collapselab.cli import main as cli_main
from collapselab.collapse import sample_space
from collapselab.dilation import rescaled_bound, select_point
from collapselab.errors import TwoClosedEnds
from collapselab.flow import areas, evolve, profile_at, spectrum_history, trusted_slice
from collapselab.gh import FiniteMetricSpace, dim_estimate, gh_bound, gh_exact
from collapselab.pinching import (
    PinchingParams,
    check_pinching,
    hamilton_ivey_threshold,
    lambda3_lower_bound,
)
from collapselab.profiles import (
    CurvatureSpectrum,
    RadialProfile,
    SpectrumHistory,
    Warped3Metric,
    cigar_profile,
    gauss_curvature,
    quotient_metric,
    sphere_profile,
    surface_scalar,
)
from collapselab.virtual_limit import (
    LocalModel,
    ModelRejection,
    cigar_compare,
    classify_local_model,
    cut_windows,
    detect_singular_points,
    glue,
    overlap_identify,
)


@contextmanager
def _criterion(label: str):
    info: dict = {}
    try:
        yield info
    except BaseException:
        print(f"{label}: FAIL", flush=True)
        raise
    detail = " ".join(f"{k}={v}" for k, v in info.items())
    print(f"{label}: PASS {detail}".rstrip(), flush=True)


# -- 1: curvature kernel ------------------------------------------------------


def test_01_curvature_kernel_convergence():
    with _criterion("01 curvature kernel order-2 convergence") as info:
        t0 = time.perf_counter()
        errs = {}
        for n in (401, 801):
            p = cigar_profile(r_max=8.0, n=n)
            k = gauss_curvature(p)
            exact = 2.0 / np.cosh(p.r_grid) ** 2
            err = float(np.abs(k - exact).max())
            assert err < 4.0 * p.h * p.h
            errs[p.h] = err
        ratio = errs[0.02] / errs[0.01]
        assert 3.5 <= ratio <= 4.5
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0
        info["ratio"] = f"{ratio:.3f}"
        info["runtime"] = f"{elapsed:.2f}s"


# -- 2: shrinking sphere ------------------------------------------------------


def test_02_shrinking_sphere_flow():
    with _criterion("02 round sphere curvature and area law") as info:
        t0 = time.perf_counter()
        sol = evolve(sphere_profile(n=151), 0.4, output_stride=200)
        mid = profile_at(sol, 0.25)
        k = gauss_curvature(mid)[trusted_slice(mid)]
        k_rel = float(np.abs(k / 2.0 - 1.0).max())
        assert k_rel < 1e-3
        a = areas(sol)
        area_err = float(np.abs(a - (a[0] - 8.0 * np.pi * sol.times)).max() / a[0])
        assert area_err < 1e-2
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0
        info["k_rel"] = f"{k_rel:.2e}"
        info["area_err"] = f"{area_err:.2e}"
        info["runtime"] = f"{elapsed:.1f}s"


# -- 3: cigar steadiness ------------------------------------------------------


def test_03_cigar_steadiness():
    with _criterion("03 cigar profile is steady under the flow") as info:
        t0 = time.perf_counter()
        sol = evolve(cigar_profile(r_max=8.0, n=201), 1.0, output_stride=500)
        sups = np.array(
            [float(np.abs(surface_scalar(p)[trusted_slice(p)]).max()) for p in sol.profiles]
        )
        drift = float((sups.max() - sups.min()) / sups[-1])
        assert drift < 0.01
        deviation = cigar_compare(sol).deviation
        assert deviation < 0.02
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0
        info["drift"] = f"{drift:.2e}"
        info["deviation"] = f"{deviation:.2e}"
        info["runtime"] = f"{elapsed:.1f}s"


# -- 4: pinching suite --------------------------------------------------------


def _flat_history(lambdas, times=(0.0,)) -> SpectrumHistory:
    l1, l2, l3 = lambdas
    specs = [
        CurvatureSpectrum(
            lambda1=np.full(4, l1), lambda2=np.full(4, l2), lambda3=np.full(4, l3)
        )
        for _ in times
    ]
    return SpectrumHistory(np.asarray(times, dtype=float), specs)


def test_04_pinching_suite():
    with _criterion("04 pinching thresholds and sweep") as info:
        p1 = PinchingParams(c0=1.0, tolerance=0.0)
        points = [
            (hamilton_ivey_threshold(-1.0, p1, 0.0), -3.0),
            (hamilton_ivey_threshold(-math.exp(3.0), p1, 0.0), 0.0),
            (hamilton_ivey_threshold(-1e-9, p1, 0.0), -2.372326583694641e-08),
            (lambda3_lower_bound(-math.exp(2.0), p1, 0.0), 0.0),
            (lambda3_lower_bound(-math.exp(4.0), p1, 0.0), 54.598150033144236),
            (lambda3_lower_bound(-1.0, p1, 0.0), -1.0),
        ]
        for got, want in points:
            assert got == pytest.approx(want, abs=1e-12)

        sphere_run = evolve(sphere_profile(n=101), 0.3, output_stride=200)
        cigar_run = evolve(cigar_profile(r_max=6.0, n=121), 0.2, output_stride=200)
        for sol in (sphere_run, cigar_run):
            report = check_pinching(spectrum_history(sol), p1)
            assert report.violations == ()

        flagged = check_pinching(_flat_history((-math.exp(4.0), 0.0, 0.0)), p1)
        assert len(flagged.violations) == 4
        info["points"] = "6/6"
        info["violations_flagged"] = str(len(flagged.violations))


# -- 5: dilation selection ----------------------------------------------------


def _exp_history(n_t: int = 2001, n_x: int = 4) -> SpectrumHistory:
    times = np.linspace(0.0, 10.0, n_t)
    z = np.zeros(n_x)
    specs = [
        CurvatureSpectrum(lambda1=z, lambda2=z, lambda3=np.full(n_x, np.exp(t)))
        for t in times
    ]
    return SpectrumHistory(times, specs)


def _scan_select(hist: SpectrumHistory, window_end: float, epsilon: float):
    """Literal scan: sup of t*(T-t)*rm, then the first point-time whose
    weight clears (1-eps) of it, times ascending, points ascending."""
    sup = 0.0
    for i, t in enumerate(hist.times):
        if t <= 0.0 or t >= window_end:
            continue
        for rm in hist.spectra[i].rm_norm:
            sup = max(sup, t * (window_end - t) * float(rm))
    for i, t in enumerate(hist.times):
        if t <= 0.0 or t >= window_end:
            continue
        for j, rm in enumerate(hist.spectra[i].rm_norm):
            if t * (window_end - t) * float(rm) >= (1.0 - epsilon) * sup:
                return i, j
    raise AssertionError("scan found no candidate")


def test_05_dilation_selection_and_bound():
    with _criterion("05 point selection and rescaled curvature bound") as info:
        hist = _exp_history()
        alphas = []
        for window_end in (6.0, 8.0, 10.0):
            for epsilon in (0.0, 0.25):
                rec = select_point(hist, window_end, epsilon=epsilon)
                i, j = _scan_select(hist, window_end, epsilon)
                assert rec.time == float(hist.times[i])
                assert rec.point_index == j

                rm_t = np.array([float(s.rm_norm[j]) for s in hist.spectra])
                at_zero = float(np.interp(rec.time, hist.times, rm_t)) / rec.curvature
                assert abs(at_zero - 1.0) < 1e-6

                taus = rec.curvature * (hist.times - rec.time)
                sel = (taus >= -rec.alpha / 2) & (taus <= rec.omega / 2)
                rescaled = rm_t[sel] / rec.curvature
                bounds = np.array([rescaled_bound(rec, float(t)) for t in taus[sel]])
                assert float((rescaled - bounds).max()) <= 1e-8
            alphas.append(select_point(hist, window_end).alpha)
        assert alphas[0] < alphas[1] < alphas[2]
        info["alphas"] = "<".join(f"{a:.0f}" for a in alphas)


# -- 6: collapse and distance estimation --------------------------------------


def test_06_collapse_distances_and_dimension():
    with _criterion("06 collapsing family distances and dimension") as info:
        t0 = time.perf_counter()
        base_p = cigar_profile(r_max=6.0, n=101)
        base = sample_space(base_p, 64, seed=0, n_theta=24)
        uppers = []
        for eps in (0.2, 0.1, 0.05):
            member = sample_space(
                Warped3Metric(base_p, eps), 64, seed=0, n_theta=24, n_u=6
            )
            _, upper = gh_bound(member, base)
            assert upper <= 4.0 * eps
            uppers.append(upper)
        assert uppers[0] / uppers[1] >= 1.5
        assert uppers[1] / uppers[2] >= 1.5

        rng = np.random.default_rng(0)
        for _ in range(1000):
            spaces = []
            for _k in range(3):
                m = int(rng.integers(1, 6))
                pts = rng.integers(0, 6, size=(m, 2)).astype(float)
                spaces.append(FiniteMetricSpace(cdist(pts, pts)))
            a, b, c = spaces
            d_ab = gh_exact(a, b)
            assert d_ab >= 0.0
            assert abs(d_ab - gh_exact(b, a)) <= 1e-12
            assert gh_exact(a, a) <= 1e-12
            assert gh_exact(a, c) <= d_ab + gh_exact(b, c) + 1e-12

        x = qmc.Halton(d=1, scramble=False).random(256)[:, 0]
        interval = FiniteMetricSpace(np.abs(x[:, None] - x[None, :]))
        d_int = dim_estimate(interval).dimension
        assert 0.8 <= d_int <= 1.2

        pts = qmc.Halton(d=2, scramble=False).random(256)
        rad, ang = np.sqrt(pts[:, 0]), 2.0 * np.pi * pts[:, 1]
        xy = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        d_disk = dim_estimate(FiniteMetricSpace(cdist(xy, xy))).dimension
        assert 1.7 <= d_disk <= 2.3

        elapsed = time.perf_counter() - t0
        assert elapsed < 120.0
        info["uppers"] = "/".join(f"{u:.4f}" for u in uppers)
        info["dims"] = f"{d_int:.2f},{d_disk:.2f}"
        info["runtime"] = f"{elapsed:.1f}s"


# -- 7: gluing ----------------------------------------------------------------


def test_07_gluing_identity_shift_quotient():
    with _criterion("07 reglue identity, shift recovery, quotient") as info:
        cig = cigar_profile(r_max=8.0, n=401)
        h = cig.h
        glued = glue(cut_windows(cig, [0.0, 4.0, 8.0], 3.0))
        n = min(glued.f.size, cig.f.size)
        reglue_err = float(np.abs(glued.f[:n] - cig.f[:n]).max())
        assert reglue_err < 2.0 * h * h

        r = cig.r_grid
        sel_l = np.nonzero((r >= 2.0 - 1e-12) & (r <= 6.0 + 1e-12))[0]
        sel_r = np.nonzero(r >= 4.5 - 1e-12)[0]
        left = RadialProfile(
            r[sel_l] - r[sel_l[0]], cig.phi[sel_l], cig.f[sel_l], tip_slope_tol=np.inf
        )
        right = RadialProfile(
            r[sel_r] - r[sel_r[0]], cig.phi[sel_r], cig.f[sel_r], tip_slope_tol=np.inf
        )
        rec = overlap_identify(left, right, (2.0, 3.0))
        shift_err = abs(rec.r0 - 2.5)
        assert shift_err < h / 8

        with pytest.raises(TwoClosedEnds):
            glue(cut_windows(sphere_profile(n=201), [0.0, np.pi / 2, np.pi], 1.2))

        min_k = float(gauss_curvature(quotient_metric(cig, 1.0, 1.0)).min())
        assert min_k > 0.0
        info["reglue_err"] = f"{reglue_err:.2e}"
        info["shift_err"] = f"{shift_err:.2e}"
        info["quotient_min_k"] = f"{min_k:.2e}"


# -- 8: classification --------------------------------------------------------


def test_08_local_model_classification():
    with _criterion("08 local model rows, rejections, singular budget") as info:
        expected = {
            (1, "trivial"): ("1i", "R2_loc", "open_interval"),
            (1, "Z2_theta_u"): ("1ii", "R2_loc", "open_interval"),
            (1, "Z2_r_u"): ("1iii", "R2_loc", "half_interval"),
            (1, "Z2_r_theta"): ("1iv", "R2_loc", "half_interval"),
            (2, "SO2"): ("2ai", "R1_loc x SO(2)", "half_interval"),
            (2, "O2"): ("2aii", "R1_loc x SO(2)", "half_interval"),
            (2, "Zp(3)"): ("2bi", "R1_loc", "disk_mod_Zp"),
            (2, "D2p(4)"): ("2bii", "R1_loc", "disk_mod_D2p"),
        }
        for (m, gamma), want in expected.items():
            row = classify_local_model(m, gamma)
            assert isinstance(row, LocalModel)
            assert (row.case, row.g_infty0, row.local_topology) == want

        for m, keyword in ((0, "zero-dimensional"), (3, "at most 2")):
            rej = classify_local_model(m, "trivial")
            assert isinstance(rej, ModelRejection)
            assert keyword in rej.reason

        none = detect_singular_points([1, 1, 1], [0.5, 1.0])
        assert none.singular == () and not none.rule_violation
        one = detect_singular_points([1, 3, 1], [0.5, 1.0])
        assert len(one.singular) == 1 and not one.rule_violation
        two = detect_singular_points([2, 1, 5], [0.2, 0.8])
        assert len(two.singular) == 2 and two.rule_violation
        info["rows"] = "8/8"
        info["singular_cases"] = "3/3"


# -- 9 and 10: pipeline -------------------------------------------------------


def _run_pipeline(tmp_path, tag: str):
    cfg = tmp_path / "pipeline.json"
    cfg.write_text(json.dumps({"recipe": "type2b"}))
    out = tmp_path / tag
    code = cli_main(["pipeline", str(cfg), "--out", str(out)])
    assert code == 0
    return out


def test_09_pipeline_end_to_end(tmp_path):
    with _criterion("09 end-to-end collapse-to-soliton pipeline") as info:
        t0 = time.perf_counter()
        out = _run_pipeline(tmp_path, "run")
        report = json.loads((out / "pipeline_report.json").read_text())
        assert report["deviation"] < 0.05
        assert (out / "dilation.json").is_file()
        assert (out / "virtual_profile.csv").is_file()
        assert (out / "comparison.csv").is_file()
        elapsed = time.perf_counter() - t0
        assert elapsed < 300.0
        info["deviation"] = f"{report['deviation']:.2e}"
        info["runtime"] = f"{elapsed:.1f}s"


def test_10_pipeline_determinism(tmp_path):
    with _criterion("10 byte-identical pipeline reruns") as info:
        out1 = _run_pipeline(tmp_path, "one")
        out2 = _run_pipeline(tmp_path, "two")
        files1 = json.loads((out1 / "manifest.json").read_text())["files"]
        files2 = json.loads((out2 / "manifest.json").read_text())["files"]
        assert files1 == files2
        assert files1
        info["artifacts"] = str(len(files1))
