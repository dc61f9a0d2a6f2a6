"""Independent reference computations used only by the tests.

Nothing here imports the integrators or closed forms under test.
"""
import math

import mpmath as mp
import numpy as np
from scipy import integrate


def cosh_or_cos(k, eps):
    return math.cosh(k) if eps == -1 else math.cos(k)


def tanh_or_tan(k, eps):
    return math.tanh(k) if eps == -1 else math.tan(k)


def profile_rhs(eps, a, b, c):
    """(k, k')' in arclength, from a K_i + b K_e = c for a rotational graph."""
    def f(y):
        k, kp = y
        return np.array([kp, (eps * a * kp * kp - c) * tanh_or_tan(k, eps) / (a + b)])
    return f


def rk4_profile(eps, a, b, c, du, u_end=None):
    """Classical fixed-step RK4 from the axis; h by cumulative Simpson of sqrt(1 - k'^2).

    Returns (u, Y) with Y rows (k, k', h).  Without ``u_end`` the run ends
    at the first return of k to 0 (linear interpolation of the crossing).
    """
    f = profile_rhs(eps, a, b, c)
    y = np.array([0.0, 1.0])
    us, ys = [0.0], [y.copy()]
    u = 0.0
    while u_end is None or u < u_end - 1e-15:
        step = du if u_end is None else min(du, u_end - u)
        k1 = f(y)
        k2 = f(y + step / 2 * k1)
        k3 = f(y + step / 2 * k2)
        k4 = f(y + step * k3)
        y_new = y + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if u_end is None and y_new[0] < 0 < y[0] and y[1] < 0:
            w = y[0] / (y[0] - y_new[0])
            us.append(u + w * step)
            ys.append(y + w * (y_new - y))
            break
        u, y = u + step, y_new
        us.append(u)
        ys.append(y.copy())
        if u > 1e3:
            raise RuntimeError("no return to the axis")
    us, ys = np.array(us), np.array(ys)
    hp = np.sqrt(np.maximum(0.0, 1.0 - ys[:, 1] ** 2))
    h = integrate.cumulative_simpson(hp, x=us, initial=0.0)
    return us, np.column_stack([ys, h])


def f_mp(t, eps, a, b, c, dps=50):
    """f at t in high precision from the (1+s)^m binomial-remainder form."""
    with mp.workdps(dps):
        t = mp.mpf(t)
        cs = mp.mpf(c) - eps * mp.mpf(a)
        s = eps * mp.mpf(a) * t / cs
        m = (2 * mp.mpf(a) + b) / a
        K = eps * mp.mpf(a) ** 2 / ((a + b) * cs)
        if s == 0:
            return float(K * m * (m - 1) / 2)
        return float(K * ((1 + s) ** m - 1 - m * s) / s ** 2)


def f_direct(t, eps, a, b, c):
    """f transcribed term by term from its rational-power expression (t > 0)."""
    cs = c - eps * a
    p = (2 * a + b) / a
    num = -eps * (2 * a + b) * cs * t - cs ** 2 + (c - eps * a * (1 - t)) ** p * cs ** (-b / a)
    return num / (eps * (a + b) * cs * t ** 2)


def taylor_coeffs_mp(eps, a, b, c, n_terms, dps=50):
    """Taylor coefficients of f at 0 from the binomial expansion of (1+s)^m."""
    with mp.workdps(dps):
        cs = mp.mpf(c) - eps * mp.mpf(a)
        m = (2 * mp.mpf(a) + b) / a
        K = eps * mp.mpf(a) ** 2 / ((a + b) * cs)
        r = eps * mp.mpf(a) / cs
        return [float(K * mp.binomial(m, n + 2) * r ** n) for n in range(n_terms)]
