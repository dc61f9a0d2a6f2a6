"""Acceptance suite: one test per criterion, each recorded as a PASS/FAIL summary line."""
import json
import math
import time

import numpy as np
import pytest

from conftest import SPHERE_H, SPHERE_S, record_criterion
from test_bounds import VERTICAL_GRID
from test_core import CLASSIFICATION_GRID
from wlab.bounds import bounds_report, cylinder_radius_c2, horizontal_diameter_c1, m_constant
from wlab.cli import main
from wlab.core import Kind, WeingartenData, classify
from wlab.profile import IntegratorConfig, closure_report, integrate_profile, turning_point_k0
from wlab.quadform import (AnalyticF, principal_ratio_identity, ratio_identity_terms,
                           refinement_study, residual_report)
from wlab.surface import immerse

PROFILE_DATASETS = [  # (data, k_max)
    (SPHERE_H, 3.0), (SPHERE_S, 1.4), (WeingartenData(-1, 1, 1, 3), 3.0),
    (WeingartenData(-1, -3, 1, -1), 3.0), (WeingartenData(1, 1, 1, 2), 1.4),
    (WeingartenData(-1, 1, 1, 0), 3.0), (WeingartenData(-1, 2, 1, -1), 3.0),
    (WeingartenData(1, -1, 2, -0.5), 1.4),
]


def check(label, passed, detail):
    record_criterion(label, passed, detail)
    assert passed, f"{label}: {detail}"


def test_ac01_classification_table():
    t0 = time.perf_counter()
    got = [classify(WeingartenData(*coeffs)).kind for coeffs, _ in CLASSIFICATION_GRID]
    elapsed = time.perf_counter() - t0
    wrong = [c for (c, k), g in zip(CLASSIFICATION_GRID, got) if g is not k]
    outcomes = {k for _, k in CLASSIFICATION_GRID}
    check("AC1 classification table", not wrong and elapsed < 1.0,
          f"{len(CLASSIFICATION_GRID)} cases, {len(outcomes)} outcome kinds, "
          f"mismatches={wrong}, {elapsed * 1e3:.2f} ms")


def test_ac02_turning_point():
    e1 = abs(turning_point_k0(WeingartenData(-1, 1, 1, 1)) - math.acosh(2))
    e3 = abs(turning_point_k0(WeingartenData(-1, 1, 1, 3)) - math.acosh(4 / 3))
    check("AC2 turning point", max(e1, e3) < 1e-9, f"errors {e1:.2e} (c=1), {e3:.2e} (c=3); tol 1e-9")


def test_ac03_first_integral():
    worst, slowest = 0.0, 0.0
    for data, k_max in PROFILE_DATASETS:
        t0 = time.perf_counter()
        p = integrate_profile(data, IntegratorConfig(k_max=k_max))
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, float(p.first_integral_residual().max()))
    check("AC3 first-integral preservation", worst < 1e-9 and slowest < 10,
          f"max residual {worst:.2e} over {len(PROFILE_DATASETS)} profiles (tol 1e-9); "
          f"slowest {slowest:.3f} s (limit 10 s)")


def test_ac04_sphere_closure(sphere_h):
    rep = closure_report(sphere_h)
    check("AC4 sphere closure", abs(rep["k_end"]) < 1e-8 and rep["kpp_jump"] < 1e-6,
          f"|k_end|={abs(rep['k_end']):.2e} (tol 1e-8), k'' jump={rep['kpp_jump']:.2e} (tol 1e-6)")


def test_ac05_gauss_weingarten():
    sets = [(SPHERE_H, 3.0), (SPHERE_S, 1.4), (WeingartenData(-1, 1, 1, 0), 3.0),
            (WeingartenData(1, -1, 2, -0.5), 1.4), (WeingartenData(1, 1, 1, 2), 1.4),
            (WeingartenData(-1, -3, 1, -1), 3.0)]
    g = w = 0.0
    for data, k_max in sets:
        c = immerse(integrate_profile(data, IntegratorConfig(k_max=k_max)), 64).curvature
        g = max(g, float(np.max(c.gauss_residual)))
        w = max(w, float(np.max(c.weingarten_residual)))
    check("AC5 Gauss/Weingarten residuals", g < 1e-8 and w < 1e-6,
          f"{len(sets)} datasets; gauss {g:.2e} (tol 1e-8), weingarten {w:.2e} (tol 1e-6)")


def test_ac06_q_vanishing(sphere_h, sphere_s, capsys):
    q = [residual_report(p)["q_sup_norm"] for p in (sphere_h, sphere_s)]
    orders = [refinement_study(p)["orders"]["q_sup_norm"] for p in (sphere_h, sphere_s)]
    code = main(["verify", "--eps", "-1", "-a", "1", "-b", "1", "-c", "1", "--ablate-f"])
    ablated = json.loads(capsys.readouterr().out)["q_sup_norm"]
    ok = max(q) < 1e-6 and min(orders) >= 2 and ablated > 1e-2 and code == 3
    check("AC6 Q vanishing", ok,
          f"q_sup_norm {q[0]:.2e}, {q[1]:.2e} (tol 1e-6); refinement orders "
          f"{orders[0]:.2f}, {orders[1]:.2f} (>= 2); --ablate-f {ablated:.3f} (> 1e-2), exit {code}")


def test_ac07_ratio_identity(sphere_h, sphere_s):
    res = [principal_ratio_identity(p, p.data) for p in (sphere_h, sphere_s)]
    pole = 0.0
    for p in (sphere_h, sphere_s):
        lhs, rhs = ratio_identity_terms(p, p.data)
        pole = max(pole, *(abs(x[i] - 1) for x in (lhs, rhs) for i in (0, -1)))
    check("AC7 ratio identity", max(res) < 1e-6 and pole < 1e-8,
          f"residuals {res[0]:.2e}, {res[1]:.2e} (tol 1e-6); pole limit error {pole:.2e} (tol 1e-8)")


def _f_consistency(data):
    f = AnalyticF(data, order=20)
    t = np.linspace(*f.overlap_window(), 100)
    gap = float(np.max(np.abs(f.series(t) - f.closed(t))))
    a0 = data.epsilon * (2 * data.a + data.b) / (2 * data.c_shift)
    return gap, abs(float(f(0.0)) - a0)


def test_ac08_f_consistency():
    sets = [SPHERE_H, WeingartenData(-1, 2, 1, 1), WeingartenData(1, 1, 1, 2)]
    gaps, a0 = zip(*(_f_consistency(d) for d in sets))
    check("AC8 f consistency", max(gaps) < 1e-10 and max(a0) < 1e-12,
          f"series gaps {', '.join(f'{g:.1e}' for g in gaps)} (tol 1e-10); "
          f"f(0) error {max(a0):.1e} (tol 1e-12)")


@pytest.mark.xfail(strict=True, reason="20 terms cannot reach 1e-10 at the top of the window when R = 1/3")
def test_ac08_f_consistency_small_radius():
    gap, a0 = _f_consistency(SPHERE_S)
    check("AC8 f consistency on (+1,-3,1,-4) [known limitation]", gap < 1e-10 and a0 < 1e-12,
          f"series gap {gap:.2e} (tol 1e-10); f(0) error {a0:.1e}")


def test_ac09_identity_checks(sphere_h, sphere_s):
    res, orders = [], []
    for p in (sphere_h, sphere_s):
        rep = residual_report(p)
        res += [rep["nu_identity_residual"], rep["h_identity_residual"]]
        o = refinement_study(p)["orders"]
        orders += [o["nu_identity_residual"], o["h_identity_residual"]]
    check("AC9 identity checks", max(res) < 1e-5 and min(orders) >= 2,
          f"max residual {max(res):.2e} (tol 1e-5); min observed order {min(orders):.2f} (>= 2)")


def test_ac10_vertical_bound():
    grid = [WeingartenData(*c) for c, k in CLASSIFICATION_GRID if k is Kind.SPHERE and c[0] == -1]
    grid += [WeingartenData(-1, *abc) for abc in VERTICAL_GRID]
    in_scope = [d for d in grid if d.a + d.b > 0 and d.c > 0]
    reports = [bounds_report(d) for d in in_scope]
    margin = min(r.checks[1]["residual"] for r in reports)
    heights_ok = all(r.checks[1]["name"] == "height_below_C0" and r.checks[1]["pass"] for r in reports)
    stable = max(r.checks[2]["residual"] for r in reports)
    M = m_constant(SPHERE_H)
    ok = heights_ok and stable < 1e-8 and abs(M - 2.5 * math.sqrt(2)) < 1e-6
    check("AC10 vertical bound", ok,
          f"{len(in_scope)} Sphere(eps=-1) datasets with a+b>0, c>0; min C0-h {margin:.3f}; "
          f"C0 drift {stable:.1e} (tol 1e-8); M(1,1,1) error {abs(M - 2.5 * math.sqrt(2)):.1e} (tol 1e-6)")


def test_ac11_constants():
    c1 = horizontal_diameter_c1(SPHERE_H)
    c2 = cylinder_radius_c2(2, 3)
    check("AC11 constants", c1 == 2 * turning_point_k0(SPHERE_H) and c2 == 8,
          f"c1 = {c1!r} = 2 k0; c2(2, 3) = {c2!r}")
