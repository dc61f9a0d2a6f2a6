"""The function f, the quadratic form Q dz^2 and identity residuals.

With z a conformal parameter for the second fundamental form,

    I  = E dz^2 + 2F |dz|^2 + conj(E) dzbar^2,     II = 2 rho |dz|^2,

and ``Q = E + f(1 - nu^2) h_z^2`` is the (2,0)-part of ``I + f(1-nu^2) dh^2``.
On rotational W-surfaces Q vanishes identically; the chart below is
built numerically (finite differences of the R^4 embedding) so that the
vanishing is an observed, grid-convergent fact rather than an algebraic
tautology.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .core import WeingartenData, cos_eps, sin_eps, tan_eps
from .errors import DegenerateChart, DomainError, StepFailure
from .profile import ProfileCurve


class AnalyticF:
    """The real analytic f on [0, 1] with its Taylor series at 0.

    Writing c' = c - eps*a, s = eps*a*t/c' and m = (2a+b)/a, the closed
    form is f(t) = eps*a^2/((a+b)c') * ((1+s)^m - 1 - m*s) / s^2, i.e.
    a binomial remainder; the series converges for |t| < |c'|/|a|.
    Below ``switch_radius`` the truncated series is used.
    """

    def __init__(self, data: WeingartenData, order: int = 20, switch_radius: Optional[float] = None):
        data.require(a_plus_b=True, two_a_plus_b=True)
        if data.c_shift == 0:
            raise DomainError("c - eps*a = 0")
        self.data = data
        eps, a, b = data.epsilon, data.a, data.b
        cs = data.c_shift
        self.radius = abs(cs) / abs(a)
        self.switch_radius = min(0.1, self.radius / 4) if switch_radius is None else switch_radius
        if not 0 < self.switch_radius < self.radius:
            raise DomainError("switch_radius must lie in (0, radius of convergence)")
        self._m = (2 * a + b) / a
        self._scale = eps * a / cs
        self._k = eps * a * a / ((a + b) * cs)
        self.series_coeffs = np.array([
            eps ** (n + 1) * math.prod(2 * a + b - j * a for j in range(n + 2))
            / ((a + b) * cs ** (n + 1) * math.factorial(n + 2))
            for n in range(order + 1)])

    def _s(self, t):
        s = self._scale * np.asarray(t, dtype=float)
        if np.any(s <= -1):
            raise DomainError("1 + eps*a*t/(c - eps*a) <= 0: outside the domain of f")
        return s

    def closed(self, t):
        s = self._s(t)
        g = np.expm1(self._m * np.log1p(s)) - self._m * s
        return self._k * g / s ** 2

    def closed_derivative(self, t):
        s = self._s(t)
        m = self._m
        g = np.expm1(m * np.log1p(s)) - m * s
        dg = m * np.expm1((m - 1) * np.log1p(s))
        return self._k * self._scale * (dg * s - 2 * g) / s ** 3

    def _check_series(self, t):
        if np.any(np.abs(t) >= self.radius):
            raise DomainError(f"|t| >= radius of convergence {self.radius:.6g}")

    def series(self, t):
        t = np.asarray(t, dtype=float)
        self._check_series(t)
        return np.polynomial.polynomial.polyval(t, self.series_coeffs)

    def series_derivative(self, t):
        t = np.asarray(t, dtype=float)
        self._check_series(t)
        n = np.arange(1, len(self.series_coeffs))
        return np.polynomial.polynomial.polyval(t, n * self.series_coeffs[1:])

    def _switch(self, t, near, far):
        t = np.asarray(t, dtype=float)
        small = np.abs(t) < self.switch_radius
        out = np.empty_like(t)
        if np.any(small):
            out[small] = near(t[small])
        if np.any(~small):
            out[~small] = far(t[~small])
        return float(out) if out.ndim == 0 else out

    def __call__(self, t):
        return self._switch(t, self.series, self.closed)

    def derivative(self, t):
        return self._switch(t, self.series_derivative, self.closed_derivative)

    def overlap_window(self):
        sr = self.switch_radius
        return sr / 2, min(2 * sr, self.radius / 2)


class ZeroF:
    """Ablation stand-in: f replaced by 0."""

    def __call__(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    derivative = __call__


def f_eval(t, data: WeingartenData):
    return AnalyticF(data)(t)


def f_prime(t, data: WeingartenData):
    return AnalyticF(data).derivative(t)


# --- ratio identity ---------------------------------------------------------

def ratio_identity_terms(profile: ProfileCurve, data: WeingartenData, f=None):
    """Per-sample (kappa1/kappa2, 1 + t f(t)) with t = h'^2 = 1 - nu^2."""
    f = AnalyticF(data) if f is None else f
    k, hp = profile.k, profile.hp
    axis = k == 0
    safe_k = np.where(axis, 1.0, k)
    safe_hp2 = np.where(axis, 1.0, hp ** 2)
    ratio = np.where(axis, 1.0, -profile.kpp * tan_eps(safe_k, data.epsilon) / safe_hp2)
    t = np.where(axis, 0.0, hp ** 2)
    return ratio, 1.0 + t * f(t)


def principal_ratio_identity(profile: ProfileCurve, data: WeingartenData, f=None) -> float:
    """max |kappa1/kappa2 - (1 + t f(t))| along the profile."""
    lhs, rhs = ratio_identity_terms(profile, data, f)
    return float(np.max(np.abs(lhs - rhs)))


# --- finite differences -----------------------------------------------------

_D1 = {2: [-1 / 2, 0, 1 / 2],
       4: [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12],
       6: [-1 / 60, 3 / 20, -3 / 4, 0, 3 / 4, -3 / 20, 1 / 60]}
_D2 = {2: [1, -2, 1],
       4: [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12],
       6: [1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90]}


def _diff(arr, axis, step, order, deriv, periodic):
    w = (_D1 if deriv == 1 else _D2)[order]
    r = len(w) // 2
    if periodic:
        out = sum(wj * np.roll(arr, r - j, axis=axis) for j, wj in enumerate(w) if wj)
        return out / step ** deriv
    a = np.moveaxis(arr, axis, 0)
    n = a.shape[0]
    out = np.full(a.shape, np.nan, dtype=a.dtype)
    out[r:n - r] = sum(wj * a[j:n - 2 * r + j] for j, wj in enumerate(w) if wj)
    return np.moveaxis(out / step ** deriv, 0, axis)


def _cofactor_normal(e1, e2, e3, epsilon):
    """Vector G-orthogonal to e1, e2, e3 in R^4 with G = diag(eps, 1, 1, 1)."""
    m = np.stack([e1, e2, e3], axis=-2)             # (..., 3, 4)
    cols = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]]
    with warnings.catch_warnings():                 # NaN rows outside the stencil interior
        warnings.simplefilter("ignore", RuntimeWarning)
        n = np.stack([(-1) ** i * np.linalg.det(m[..., c]) for i, c in enumerate(cols)], axis=-1)
    n[..., 0] *= epsilon                            # raise the index: G^{-1} = G
    return n


def _gdot(x, y, epsilon):
    return epsilon * x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)


# --- conformal chart --------------------------------------------------------

@dataclass
class ConformalChart:
    """Grid over (x, v), x the II-conformal rescaling of arclength.

    Arrays are (n_x, n_v); rows within the finite-difference radius of the
    x ends are NaN and excluded through ``interior``.
    """

    x: np.ndarray
    v: np.ndarray
    phi: np.ndarray
    E: np.ndarray
    F: np.ndarray
    rho: np.ndarray
    D: np.ndarray
    h_z: np.ndarray
    h_zzbar: np.ndarray             # (h_xx + h_yy)/4 by central differences
    nu: np.ndarray
    Q: np.ndarray
    K_e: np.ndarray                 # (c - eps a nu^2)/(a+b) at the chart nu
    kp: np.ndarray                  # ODE value of k' at each row
    conformality: float             # max(|II_xx - II_yy|, 2|II_xy|) / max(II_xx + II_yy)
    data: WeingartenData
    f: object
    order: int
    interior: slice

    @property
    def resolution(self):
        return len(self.x), len(self.v)

    @property
    def dx(self):
        return self.x[1] - self.x[0]

    @property
    def dv(self):
        return self.v[1] - self.v[0]

    def inner(self, arr):
        return arr[self.interior]

    def ke_residual(self):
        return float(np.max(np.abs(self.inner(self.K_e - self.rho ** 2 / self.D))))


def _chart_rhs(data):
    eps, a, b, c = data.epsilon, data.a, data.b, data.c

    def f(x, y):
        k, kp, _ = y
        hp = math.sqrt(max(0.0, 1.0 - kp * kp))
        ke = (c - eps * a * kp * kp) / (a + b)
        mu = float(cos_eps(k, eps)) * hp / math.sqrt(ke)     # du/dx
        kpp = (eps * a * kp * kp - c) * float(tan_eps(k, eps)) / (a + b)
        return [mu * kp, mu * kpp, mu * hp]
    return f


def _chart_rows(profile, collar, n_x):
    """Integrate the profile ODE in the conformal variable x between the collars.

    Closed profiles are integrated to the equator (k' = 0) and mirrored, so
    both pole collars carry the same, small, integration error.
    """
    data = profile.data
    ref = profile.k0 if profile.closed else float(profile.k[-1])
    i0 = int(np.argmax(profile.k >= collar * ref))
    if profile.k[i0] <= 0 or profile.hp[i0] <= 0:
        raise DegenerateChart("start sample lies on the axis")
    y0 = [profile.k[i0], profile.kp[i0], profile.h[i0]]
    if profile.closed:
        def stop(x, y):
            return y[1]
        stop.direction = -1
    else:
        k_end = float(profile.k[-1])

        def stop(x, y):
            return y[0] - k_end
        stop.direction = 1
    stop.terminal = True

    sol = integrate.solve_ivp(_chart_rhs(data), (0.0, 1e4), y0, method="DOP853",
                              rtol=3e-14, atol=1e-16, events=stop, dense_output=True)
    if sol.status == -1 or not len(sol.t_events[0]):
        raise StepFailure(f"chart integration failed: {sol.message}")
    x_stop = float(sol.t_events[0][0])
    if not profile.closed:
        x = np.linspace(0.0, x_stop, n_x)
        k, kp, h = sol.sol(x)
        return x, k, kp, h, 0.0, n_x
    # the far half stores h - 2 h_eq, which stays small near the far pole
    x = np.linspace(0.0, 2 * x_stop, n_x)
    half = (n_x + 1) // 2
    k, kp, h_dev = np.empty(n_x), np.empty(n_x), np.empty(n_x)
    k[:half], kp[:half], h_dev[:half] = sol.sol(x[:half])
    h_eq = sol.sol(x_stop)[2]
    k[half:] = k[:n_x - half][::-1]
    kp[half:] = -kp[:n_x - half][::-1]
    h_dev[half:] = -h_dev[:n_x - half][::-1]
    return x, k, kp, h_dev, 2 * h_eq, half


def _step_diff(n, half, step, order, deriv):
    """Central differences of the row indicator [i >= half], exactly 0 off the junction."""
    ind = (np.arange(n) >= half).astype(float)
    out = _diff(ind, 0, step, order, deriv, False)
    r = len(_D1[order]) // 2
    i = np.arange(n)
    out[(i + r < half) | (i - r >= half)] = 0.0
    return out


def conformal_chart(profile: ProfileCurve, data: Optional[WeingartenData] = None, n_v: int = 128,
                    n_x: int = 801, order: int = 6, collar: float = 1e-3, f=None) -> ConformalChart:
    """Build a conformal-for-II chart of the rotational surface and evaluate Q.

    The profile supplies the starting point at the pole collar; the
    reparametrization dx = sqrt(kappa1/(kappa2 G)) du is carried out by
    integrating the profile ODE in x.  All fundamental-form data then come
    from central differences (``order`` 2, 4 or 6) of the embedding.
    """
    data = profile.data if data is None else data
    if order not in _D1:
        raise DomainError("order must be 2, 4 or 6")
    f = AnalyticF(data) if f is None else f
    eps = data.epsilon
    x, k, kp, h_dev, h_jump, half = _chart_rows(profile, collar, n_x)
    v = 2.0 * np.pi * np.arange(n_v) / n_v
    dx, dv = x[1] - x[0], v[1] - v[0]

    # differences are taken of x1 - 1 and of the small height deviation;
    # constants drop out exactly and cancellation near the poles is avoided
    sk = sin_eps(k, eps)[:, None]
    dev = np.empty((n_x, n_v, 4))
    dev[..., 0] = (-2 * eps * sin_eps(k / 2, eps) ** 2)[:, None]
    dev[..., 1] = sk * np.cos(v)
    dev[..., 2] = sk * np.sin(v)
    dev[..., 3] = h_dev[:, None]
    jump = np.where(np.arange(n_x) >= half, h_jump, 0.0)
    phi = dev.copy()
    phi[..., 0] += 1.0
    phi[..., 3] += jump[:, None]

    px = _diff(dev, 0, dx, order, 1, False)
    py = _diff(dev, 1, dv, order, 1, True)
    pxx = _diff(dev, 0, dx, order, 2, False)
    pyy = _diff(dev, 1, dv, order, 2, True)
    pxy = _diff(py, 0, dx, order, 1, False)
    if h_jump:
        px[..., 3] += h_jump * _step_diff(n_x, half, dx, order, 1)[:, None]
        pxx[..., 3] += h_jump * _step_diff(n_x, half, dx, order, 2)[:, None]

    pos = phi.copy()
    pos[..., 3] = 0.0                               # normal of M^2(eps) x R inside R^4
    n = _cofactor_normal(px, py, pos, eps)
    n = n / np.sqrt(_gdot(n, n, eps))[..., None]
    r = len(_D1[order]) // 2
    interior = (slice(r, n_x - r), slice(None))
    trace = _gdot(pxx, n, eps) + _gdot(pyy, n, eps)
    if np.nanmedian(trace) < 0:
        n = -n
    ixx, iyy, ixy = _gdot(px, px, eps), _gdot(py, py, eps), _gdot(px, py, eps)
    lxx, lyy, lxy = _gdot(pxx, n, eps), _gdot(pyy, n, eps), _gdot(pxy, n, eps)

    E = (ixx - iyy - 2j * ixy) / 4
    F = (ixx + iyy) / 4
    rho = (lxx + lyy) / 4
    D = F ** 2 - np.abs(E) ** 2
    h_z = (px[..., 3] - 1j * py[..., 3]) / 2
    nu = n[..., 3]
    Q = E + f(1 - nu ** 2) * h_z ** 2
    ke = (data.c - eps * data.a * nu ** 2) / (data.a + data.b)
    conf = np.max(np.maximum(np.abs(lxx - lyy), 2 * np.abs(lxy))[interior]) \
        / np.max((lxx + lyy)[interior])
    if np.any(rho[interior] <= 0) or np.any(D[interior] <= 0):
        raise DegenerateChart("rho or D not positive inside the chart")
    h_zzbar = (pxx[..., 3] + pyy[..., 3]) / 4
    return ConformalChart(x, v, phi, E, F, rho, D, h_z, h_zzbar, nu, Q, ke,
                          np.broadcast_to(kp[:, None], (n_x, n_v)), float(conf),
                          data, f, order, interior)


def q_sup_norm(chart: ConformalChart) -> float:
    """sup |Q| / sup |E| over the chart interior (scale free)."""
    return float(np.max(np.abs(chart.inner(chart.Q))) / np.max(np.abs(chart.inner(chart.E))))


def identity_checks(chart: ConformalChart, data: Optional[WeingartenData] = None) -> dict:
    """Finite-difference residuals of the nu_zbar and h_zzbar identities and of the Q_zbar bound.

    Identity residuals are sup-normalized: max |lhs - rhs| / max |rhs|.
    ``qbar_bound_excess`` is max(|Q_zbar| - bound) and should not exceed ~1e-8.
    """
    data = chart.data if data is None else data
    r = len(_D1[chart.order]) // 2
    inner = (slice(2 * r, len(chart.x) - 2 * r), slice(None))
    with np.errstate(invalid="ignore"):
        return _identity_residuals(chart, data, inner)


def _dzbar(arr, chart):
    p = chart.order
    return (_diff(arr, 0, chart.dx, p, 1, False) + 1j * _diff(arr, 1, chart.dv, p, 1, True)) / 2


def _identity_residuals(chart, data, inner):
    eps, a, b = data.epsilon, data.a, data.b
    rho, D, nu, E, F, hz = chart.rho, chart.D, chart.nu, chart.E, chart.F, chart.h_z
    ke = rho ** 2 / D
    alpha = F * np.conj(hz) - np.conj(E) * hz
    nu_lhs = _dzbar(nu, chart)
    nu_rhs = -alpha * ke / rho

    h_lhs = chart.h_zzbar
    h_rhs = nu * rho / (2 * ke * (a + b)) * (2 * ke * (a + b) - eps * (2 * a + b) * (1 - nu ** 2))

    q_lhs = np.abs(_dzbar(chart.Q, chart))
    q_rhs = 2 * np.abs(nu * rho * hz ** 3 * chart.f.derivative(1 - nu ** 2)) / D * np.abs(chart.Q)

    def rel(lhs, rhs):
        return float(np.max(np.abs(lhs - rhs)[inner]) / np.max(np.abs(rhs)[inner]))

    return {
        "nu_identity_residual": rel(nu_lhs, nu_rhs),
        "h_identity_residual": rel(h_lhs, h_rhs),
        "qbar_bound_excess": float(np.max((q_lhs - q_rhs)[inner])),
        "qbar_lhs_max": float(np.max(q_lhs[inner])),
    }


def observed_order(errors, steps):
    """Least-squares slope of log(error) against log(step)."""
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


def refinement_study(profile: ProfileCurve, data: Optional[WeingartenData] = None,
                     resolutions=((101, 16), (201, 32), (401, 64)), order=4, f=None) -> dict:
    """q_sup_norm and identity residuals over a sequence of grids, with observed orders."""
    rows = []
    for n_x, n_v in resolutions:
        ch = conformal_chart(profile, data, n_v=n_v, n_x=n_x, order=order, f=f)
        ids = identity_checks(ch)
        rows.append({"n_x": n_x, "n_v": n_v, "dx": ch.dx, "q_sup_norm": q_sup_norm(ch),
                     "nu_identity_residual": ids["nu_identity_residual"],
                     "h_identity_residual": ids["h_identity_residual"]})
    steps = [row["dx"] for row in rows]
    orders = {key: observed_order([row[key] for row in rows], steps)
              for key in ("q_sup_norm", "nu_identity_residual", "h_identity_residual")}
    return {"levels": rows, "orders": orders}


def residual_report(profile: ProfileCurve, data: Optional[WeingartenData] = None, n_v: int = 128,
                    n_x: int = 801, order: int = 6, f=None) -> dict:
    """Fields for the JSON residual report."""
    data = profile.data if data is None else data
    chart = conformal_chart(profile, data, n_v=n_v, n_x=n_x, order=order, f=f)
    ids = identity_checks(chart)
    return {
        "q_sup_norm": q_sup_norm(chart),
        "nu_identity_residual": ids["nu_identity_residual"],
        "h_identity_residual": ids["h_identity_residual"],
        "ratio_identity_residual": principal_ratio_identity(profile, data, f),
        "qbar_bound_excess": ids["qbar_bound_excess"],
        "ke_chart_residual": chart.ke_residual(),
        "conformality_residual": chart.conformality,
        "grid_resolution": [n_x, n_v],
    }
