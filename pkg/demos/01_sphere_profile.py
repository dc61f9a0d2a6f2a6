"""Rotational spheres: classify the data, integrate the profile, close it, export a mesh.

Run:  python3 demos/01_sphere_profile.py [outdir]
"""
import sys
import tempfile
from pathlib import Path

import numpy as np

from wlab import WeingartenData, classify, integrate_profile, immerse, export_mesh
from wlab.profile import closure_report, turning_point_k0

out = Path(sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="wlab-"))

# Four coefficient sets, one per ambient sign and topology.
cases = {
    "H2xR sphere": WeingartenData(-1, 1, 1, 1),
    "H2xR plane": WeingartenData(-1, 1, 1, 0),
    "S2xR sphere": WeingartenData(1, -3, 1, -4),
    "S2xR excluded": WeingartenData(1, -2, 2, 1),
}
for name, d in cases.items():
    r = classify(d)
    print(f"{name:14s} -> {r.kind.value:28s} {r.reason}")

# The profile starts on the axis with k = 0, k' = 1 and turns at k0,
# where the first integral vanishes.
d = cases["H2xR sphere"]
p = integrate_profile(d)
print(f"\nk0 = {turning_point_k0(d):.15f}  (arccosh 2 = {np.arccosh(2):.15f})")
print(f"{len(p)} samples, max |k'^2 - F(k)| = {p.first_integral_residual().max():.1e}")

rep = closure_report(p)
print(f"closes at k = {rep['k_end']:.1e}, height 2*{rep['h_turn']:.6f}, k'' jump {rep['kpp_jump']:.1e}")

mesh = immerse(p, n_v=48)
c = mesh.curvature
print(f"mesh {mesh.shape}: max Gauss residual {c.gauss_residual.max():.1e}, "
      f"Weingarten residual {c.weingarten_residual.max():.1e}")
path = export_mesh(mesh, out / "sphere_h2xr.obj", "obj")
print(f"wrote {path} (Poincare disk x R)")
