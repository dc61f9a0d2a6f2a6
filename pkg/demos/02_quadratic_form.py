"""The holomorphic quadratic differential Q vanishes on the rotational spheres.

Builds a conformal chart, evaluates Q with the analytic correction f and
with f = 0, and watches the residual shrink under grid refinement.

Run:  python3 demos/02_quadratic_form.py
"""
import numpy as np

from wlab import WeingartenData, integrate_profile
from wlab.quadform import (AnalyticF, ZeroF, conformal_chart, principal_ratio_identity, q_sup_norm,
                           refinement_study)

for d in (WeingartenData(-1, 1, 1, 1), WeingartenData(1, -3, 1, -4)):
    print(f"\n== eps={d.epsilon:+d} a={d.a} b={d.b} c={d.c}")
    f = AnalyticF(d)
    t = np.linspace(0, 1, 5)
    print("f(t) at t = 0, .25, .5, .75, 1:", np.array2string(f(t), precision=6))
    print(f"series radius {f.radius:.4f}, switch at {f.switch_radius:.4f}")

    p = integrate_profile(d)
    # the ratio of principal curvatures is pinned by f along the profile
    print(f"ratio identity residual   {principal_ratio_identity(p, d):.2e}")
    print(f"  ... with f = 0          {principal_ratio_identity(p, d, ZeroF()):.3f}")

    chart = conformal_chart(p)
    print(f"chart {chart.resolution}: |Q|/scale = {q_sup_norm(chart):.2e}, "
          f"K_e residual {chart.ke_residual():.1e}")
    print(f"  ... with f = 0          {q_sup_norm(conformal_chart(p, f=ZeroF())):.3f}")

    study = refinement_study(p, order=4)
    for lvl in study["levels"]:
        print(f"  n_x={lvl['n_x']:4d} n_v={lvl['n_v']:3d}  q={lvl['q_sup_norm']:.2e}")
    print("  observed orders:", {k: round(v, 2) for k, v in study["orders"].items()})
