"""Height and diameter estimates for spheres in H^2 x R.

Compares the a priori vertical constant C0 with the actual half height of
the rotational sphere as c varies, and prints the horizontal constants.

Run:  python3 demos/03_height_bounds.py
"""
import numpy as np

from wlab import WeingartenData, integrate_profile
from wlab.bounds import (bounds_report, cylinder_radius_c2, horizontal_diameter_c1, m_constant,
                         vertical_bound_C0)

print(f"{'c':>6} {'M':>9} {'C0':>9} {'h(k0)':>9} {'c1 = 2 k0':>10}")
for c in (0.25, 0.5, 1, 2, 4, 8):
    d = WeingartenData(-1, 1, 1, c)
    h = integrate_profile(d).h_turn
    print(f"{c:6.2f} {m_constant(d):9.4f} {vertical_bound_C0(d):9.4f} {h:9.4f} "
          f"{horizontal_diameter_c1(d):10.4f}")

# M is not always >= 1; the bound still holds
d = WeingartenData(-1, -0.4, 1, 0.5)
print(f"\nM = {m_constant(d):.4f} for a=-0.4, b=1, c=0.5; "
      f"C0 = {vertical_bound_C0(d):.4f} >= h = {integrate_profile(d).h_turn:.4f}")

rep = bounds_report(WeingartenData(-1, 1, 1, 1), c0=2.0)
print(f"\nc2(c0=2, c1={rep.c1:.4f}) = {rep.c2:.4f};  c2(2, 3) = {cylinder_radius_c2(2, 3)}")
for ch in rep.checks:
    print(f"  {'ok  ' if ch['pass'] else 'FAIL'} {ch['name']:30s} {ch['residual']:.2e}")
