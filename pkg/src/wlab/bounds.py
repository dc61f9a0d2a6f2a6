"""Explicit constants of the height and diameter estimates.

The vertical bound C0 is only constructed in H^2 x R (eps = -1) with
a + b > 0 and c > 0; other data report M and C0 as absent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from .core import WeingartenData
from .errors import DomainError
from .profile import IntegratorConfig, integrate_profile, turning_point_k0

GRID_POINTS = 10_000


def _require_avhe(data: WeingartenData):
    data.require(a_plus_b=True, two_a_plus_b=True)
    if data.epsilon != -1 or not data.a + data.b > 0 or not data.c > 0:
        raise DomainError("vertical bound needs eps = -1, a + b > 0, c > 0")
    if min(data.c, data.c + data.a) <= 0:
        raise DomainError("c + a*nu^2 <= 0 somewhere on [-1, 0] (K_e > 0 violated)")


def in_vertical_scope(data: WeingartenData) -> bool:
    try:
        _require_avhe(data)
    except DomainError:
        return False
    return True


def _m1(nu, a, b, c):
    w = c + a * nu ** 2
    return 1 + (2 * a + b) * (1 - nu ** 2) / (2 * w)


def _m2(nu, a, b, c):
    w = c + a * nu ** 2
    return np.sqrt(np.exp((a + b) / a * np.log((c + a) / w)) / w)


def _extremum(fn, sign):
    """max of sign*fn on [-1, 0]: dense grid, then bounded Brent refinement."""
    nu = np.linspace(-1.0, 0.0, GRID_POINTS + 1)
    vals = sign * fn(nu)
    i = int(np.argmax(vals))
    best_nu, best = nu[i], vals[i]
    lo, hi = nu[max(i - 1, 0)], nu[min(i + 1, GRID_POINTS)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda x: -sign * fn(x), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-8})
        if -res.fun > best:
            best_nu, best = float(res.x), float(-res.fun)
    return best_nu, sign * best


def m_extrema(data: WeingartenData):
    """((nu, max m1), (nu, min m2)) over nu in [-1, 0]."""
    _require_avhe(data)
    a, b, c = data.a, data.b, data.c
    return (_extremum(lambda t: _m1(t, a, b, c), 1),
            _extremum(lambda t: _m2(t, a, b, c), -1))


def m_constant(data: WeingartenData) -> float:
    (_, mx), (_, mn) = m_extrema(data)
    return mx / mn if mx > 0 else 1.0


def g_prime(t, data: WeingartenData, M: Optional[float] = None):
    """Derivative of the comparison function on [-1, 0]; finite at t = -1."""
    _require_avhe(data)
    if M is None:
        M = m_constant(data)
    a, b, c = data.a, data.b, data.c
    t = np.asarray(t, dtype=float)
    w = c + a * t ** 2
    q = a * (1 - t ** 2) / w                      # (c+a)/w - 1
    p = (a + b) / a
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(q == 0, p, np.expm1(p * np.log1p(q)) / np.where(q == 0, 1.0, q))
    val = M * np.sqrt(np.maximum(ratio * a / w, 0.0) / w)
    return float(val) if val.ndim == 0 else val


def g_prime_limit(data: WeingartenData, M: Optional[float] = None) -> float:
    if M is None:
        M = m_constant(data)
    return M * math.sqrt(data.a + data.b) / (data.c + data.a)


def vertical_bound_C0(data: WeingartenData, M: Optional[float] = None, epsabs: float = 1e-10) -> float:
    """C0 = integral of g' over [-1, 0]."""
    if M is None:
        M = m_constant(data)
    val, _ = integrate.quad(lambda t: g_prime(t, data, M), -1.0, 0.0,
                            epsabs=epsabs, epsrel=1e-14, limit=200)
    return float(val)


def horizontal_diameter_c1(data: WeingartenData) -> float:
    return 2.0 * turning_point_k0(data)


def cylinder_radius_c2(c0: float, c1: float) -> float:
    if not (c0 > 0 and c1 > 0):
        raise DomainError("c0 and c1 must be positive")
    return 2.0 * max(c0, c1) + c0


@dataclass
class BoundsReport:
    data: WeingartenData
    k0: float
    c1: float
    c0_input: float
    c2: float
    M: Optional[float] = None
    C0: Optional[float] = None
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(ch["pass"] for ch in self.checks)

    def to_dict(self):
        d = self.data
        return {"epsilon": d.epsilon, "a": d.a, "b": d.b, "c": d.c, "k0": self.k0,
                "M": self.M, "C0": self.C0, "c1": self.c1, "c0_input": self.c0_input,
                "c2": self.c2, "checks": self.checks}


def _check(name, ok, residual):
    return {"name": name, "pass": bool(ok), "residual": residual}


def bounds_report(data: WeingartenData, c0: Optional[float] = None,
                  config: Optional[IntegratorConfig] = None) -> BoundsReport:
    """Constants for Sphere data, checked against the generated sphere.

    c0 defaults to c1 (the horizontal constant has no closed form).
    """
    k0 = turning_point_k0(data)
    c1 = 2.0 * k0
    c0 = c1 if c0 is None else float(c0)
    rep = BoundsReport(data, k0, c1, c0, cylinder_radius_c2(c0, c1))
    rep.checks.append(_check("c1_equals_2k0", c1 == 2.0 * k0, abs(c1 - 2.0 * k0)))
    if not in_vertical_scope(data):
        return rep
    M = m_constant(data)
    C0 = vertical_bound_C0(data, M)
    C0_fine = vertical_bound_C0(data, M, epsabs=1e-11)
    profile = integrate_profile(data, config)
    h_turn = profile.h_turn
    lim = g_prime_limit(data, M)
    gap = max(abs(g_prime(-1.0, data, M) - lim), abs(g_prime(-1 + 1e-12, data, M) - lim))
    rep.M, rep.C0 = M, C0
    a, b, c = data.a, data.b, data.c
    rep.checks += [
        _check("height_below_C0", h_turn <= C0, C0 - h_turn),
        _check("C0_quadrature_stable", abs(C0 - C0_fine) < 1e-8, abs(C0 - C0_fine)),
        _check("g_prime_endpoint_continuity", gap < 1e-8, gap),
        _check("M_dominates_ratio", all(M * _m2(x, a, b, c) >= _m1(x, a, b, c) - 1e-12
                                        for x in np.linspace(-1, 0, 201)),
               float(min(M * _m2(x, a, b, c) - _m1(x, a, b, c) for x in np.linspace(-1, 0, 201)))),
    ]
    return rep
