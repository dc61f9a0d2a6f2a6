"""Generating curves of rotational W-surfaces.

The profile ``(k(u), h(u))`` is parametrized by arclength ``u``; ``k`` is
the distance to the rotation axis inside the slice and ``h`` the height.
With the axis met orthogonally (k(0)=0, k'(0)=1) the Weingarten ODE

    (a+b) k'' cot_eps(k) - eps*a*k'^2 = -c

has the first integral ``k'^2 = F(k) = eps*c/a + (a-eps*c)/a * cos_eps(k)^(-2a/(a+b))``.

Integration runs in two phases.  Away from the turning point k0 the
second-order ODE (in its tan_eps form, regular at the axis) is integrated
in ``u``.  Close to k0 the curve is a graph ``h(k)`` whose slope blows up
like (k0-k)^(-1/2); there we substitute ``k = k0 - s^2`` and integrate the
bounded integrands with Gauss-Legendre quadrature.  Spheres are closed by
reflecting the half profile about the slice ``t = h(k0)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from .core import (Classification, Kind, WeingartenData, classify, cos_eps,
                   log_cos_eps, tan_eps)
from .errors import DomainError, NoTurningPoint, StepFailure

CSV_HEADER = ("u", "k", "h", "kp", "hp", "kpp")


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.01          # solver step cap and sample spacing in u
    k_max: float = 3.0              # truncation radius for non-compact profiles
    singular_margin: Optional[float] = None   # default 1e-3 * k0
    singular_intervals: int = 16
    gauss_nodes: int = 16
    max_samples: int = 50_000       # refuse profiles that would need more samples than this
    max_evaluations: int = 1_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "k_max"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.singular_margin is not None and not self.singular_margin > 0:
            raise DomainError("singular_margin must be positive")


@dataclass
class ProfileCurve:
    u: np.ndarray
    k: np.ndarray
    h: np.ndarray
    kp: np.ndarray
    hp: np.ndarray
    kpp: np.ndarray
    classification: Classification
    data: WeingartenData
    k0: Optional[float] = None
    closed: bool = False
    turn_index: Optional[int] = None    # index of the k = k0 sample
    meta: dict = field(default_factory=dict)

    @property
    def samples(self):
        return np.column_stack([self.u, self.k, self.h, self.kp, self.hp, self.kpp])

    def __len__(self):
        return len(self.u)

    @property
    def h_turn(self):
        if self.turn_index is None:
            return None
        return float(self.h[self.turn_index])

    def first_integral_residual(self):
        return np.abs(self.kp ** 2 - first_integral(self.k, self.data))

    def arclength_residual(self):
        return np.abs(self.kp ** 2 + self.hp ** 2 - 1.0)

    def to_csv(self, path_or_file):
        write_profile_csv(self, path_or_file)


# --- closed-form pieces -----------------------------------------------------

def _exponent(data):
    return 2.0 * data.a / (data.a + data.b)


def _check_power_base(k, data):
    if data.epsilon == 1 and np.any(np.cos(np.asarray(k)) <= 0):
        raise DomainError("cos k <= 0: the first integral needs k < pi/2 in S^2 x R")


def first_integral(k, data: WeingartenData):
    """``(k')^2`` along the profile that meets the axis orthogonally."""
    data.require(a_plus_b=True)
    _check_power_base(k, data)
    eps, a, c = data.epsilon, data.a, data.c
    return eps * c / a + (a - eps * c) / a * np.exp(-_exponent(data) * log_cos_eps(k, eps))


def height_speed_sq(k, data: WeingartenData):
    """``1 - F(k) = (h')^2``, evaluated without cancellation near the axis."""
    data.require(a_plus_b=True)
    _check_power_base(k, data)
    eps, a, c = data.epsilon, data.a, data.c
    return (a - eps * c) / a * -np.expm1(-_exponent(data) * log_cos_eps(k, eps))


def _log_cos_ratio(k0, d, epsilon):
    """log(cos_eps(k0 - d) / cos_eps(k0)) for small d >= 0."""
    if epsilon == -1:
        return np.log1p(2.0 * np.sinh(0.5 * d) ** 2 - np.tanh(k0) * np.sinh(d))
    return np.log1p(np.tan(k0) * np.sin(d) - 2.0 * np.sin(0.5 * d) ** 2)


def first_integral_below_turn(d, k0, data: WeingartenData):
    """F(k0 - d), using F(k0) = 0 to avoid the cancellation at the turning point."""
    eps = data.epsilon
    return -(eps * data.c / data.a) * np.expm1(-_exponent(data) * _log_cos_ratio(k0, d, eps))


def second_derivative_k(k, kp, data: WeingartenData):
    """k'' from the Weingarten ODE; equals (1/2) dF/dk along solutions."""
    data.require(a_plus_b=True)
    return (data.epsilon * data.a * np.asarray(kp) ** 2 - data.c) \
        * tan_eps(np.asarray(k, dtype=float), data.epsilon) / (data.a + data.b)


def turning_point_closed_form(data: WeingartenData):
    """k0 from cos_eps(k0) = ((c - eps*a)/c)^((a+b)/(2a))."""
    base = data.c_shift / data.c
    val = base ** ((data.a + data.b) / (2.0 * data.a))
    return math.acosh(val) if data.epsilon == -1 else math.acos(val)


def turning_point_k0(data: WeingartenData) -> float:
    """Radius where the profile becomes vertical, by bracketing and Brent's method."""
    cls = classify(data)
    if cls.kind is Kind.PLANE:
        raise NoTurningPoint(f"{cls.kind.value}: first integral stays positive ({cls.reason})")
    if cls.kind is not Kind.SPHERE:
        raise DomainError(f"no turning point for {cls.kind.value}: {cls.reason}")

    def fi(k):
        return first_integral(k, data)

    if data.epsilon == 1:
        hi = 0.5 * math.pi * (1 - 1e-12)
        if fi(hi) > 0:
            raise StepFailure("turning point within 1e-12 of pi/2: not resolvable in double precision")
    else:
        hi = 1.0
        while fi(hi) > 0:
            hi *= 2.0
            if hi > 1e4:
                raise NoTurningPoint("no sign change of the first integral")
    return optimize.brentq(fi, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                           maxiter=500)


# --- integration ------------------------------------------------------------

def _rhs(data):
    eps, a, b, c = data.epsilon, data.a, data.b, data.c
    tan = np.tanh if eps == -1 else np.tan

    def f(u, y):
        k, kp, _ = y
        return [kp, (eps * a * kp * kp - c) * tan(k) / (a + b),
                math.sqrt(max(0.0, 1.0 - kp * kp))]
    return f


def _arclength_bound(data, k_target):
    val, _ = integrate.quad(lambda k: 1.0 / math.sqrt(max(first_integral(k, data), 1e-300)),
                            0.0, k_target, limit=200)
    return 1.5 * val + 1.0


def _phase_a(data, config, k_target):
    """Integrate the second-order ODE from the axis until k = k_target."""
    def hit(u, y):
        return y[0] - k_target
    hit.terminal = True
    hit.direction = 1

    u_end = _arclength_bound(data, k_target)
    if u_end / config.max_step > config.max_samples:
        raise StepFailure(f"profile length ~{u_end:.3g} needs more than {config.max_samples} "
                          f"samples at max_step = {config.max_step}")
    rhs = _rhs(data)
    calls = [0]

    def counted(u, y):
        calls[0] += 1
        if calls[0] > config.max_evaluations:
            raise StepFailure(f"more than {config.max_evaluations} right-hand side evaluations")
        return rhs(u, y)

    sol = integrate.solve_ivp(counted, (0.0, u_end), [0.0, 1.0, 0.0], method="DOP853",
                              rtol=config.rel_tol, atol=config.abs_tol,
                              max_step=config.max_step, events=hit, dense_output=True)
    if sol.status == -1:
        raise StepFailure(sol.message)
    if not len(sol.t_events[0]):
        raise StepFailure(f"profile did not reach k = {k_target} within u = {u_end}")
    u_hit = float(sol.t_events[0][0])
    y_hit = sol.y_events[0][0]

    step = config.max_step
    u = np.arange(0.0, u_hit, step)
    if u_hit - u[-1] < 1e-3 * step:
        u = u[:-1]
    y = sol.sol(u)
    y[:, 0] = (0.0, 1.0, 0.0)
    u = np.append(u, u_hit)
    y = np.column_stack([y, y_hit])
    return u, y[0], y[1], y[2]


def _phase_b(data, config, k0, k_start, u_start, h_start):
    """Quadrature in s = sqrt(k0 - k) from k_start up to the turning point."""
    s1 = math.sqrt(k0 - k_start)
    m = config.singular_intervals
    s_nodes = s1 * (1.0 - np.arange(m + 1) / m)          # s1 ... 0
    x, w = np.polynomial.legendre.leggauss(config.gauss_nodes)

    def integrands(s):
        d = s * s
        fs = first_integral_below_turn(d, k0, data) / d   # F(k0 - s^2)/s^2 > 0
        g = height_speed_sq(k0 - d, data)
        inv = 2.0 / np.sqrt(fs)
        return inv, inv * np.sqrt(g)

    du = np.empty(m)
    dh = np.empty(m)
    for j in range(m):
        lo, hi = s_nodes[j + 1], s_nodes[j]
        s = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        iu, ih = integrands(s)
        du[j] = 0.5 * (hi - lo) * np.dot(w, iu)
        dh[j] = 0.5 * (hi - lo) * np.dot(w, ih)

    d = s_nodes[1:] ** 2
    k = k0 - d
    kp = np.sqrt(np.maximum(first_integral_below_turn(d, k0, data), 0.0))
    kp[-1] = 0.0
    k[-1] = k0
    return u_start + np.cumsum(du), k, h_start + np.cumsum(dh), kp


def integrate_profile(data: WeingartenData, config: Optional[IntegratorConfig] = None) -> ProfileCurve:
    """Build the generating curve for Sphere- or Plane-class data.

    Spheres come back closed (both poles on the axis) with the turning
    point stored at ``turn_index``; Plane profiles stop at ``config.k_max``.
    """
    config = config or IntegratorConfig()
    cls = classify(data)
    if cls.kind not in (Kind.SPHERE, Kind.PLANE):
        raise DomainError(f"cannot integrate {cls.kind.value} data: {cls.reason}")

    if cls.kind is Kind.PLANE:
        if data.epsilon == 1 and config.k_max >= 0.5 * math.pi:
            raise DomainError("S^2 x R profiles need k_max < pi/2 (K_e -> 0 at k = pi/2)")
        u, k, kp, h = _phase_a(data, config, config.k_max)
        hp = np.sqrt(np.maximum(0.0, 1.0 - kp * kp))
        kpp = second_derivative_k(k, kp, data)
        return ProfileCurve(u, k, h, kp, hp, kpp, cls, data, meta={"k_max": config.k_max})

    k0 = turning_point_k0(data)
    margin = config.singular_margin if config.singular_margin is not None else 1e-3 * k0
    if not margin < k0:
        raise DomainError("singular_margin must be smaller than k0")
    ua, ka, kpa, ha = _phase_a(data, config, k0 - margin)
    ub, kb, hb, kpb = _phase_b(data, config, k0, ka[-1], ua[-1], ha[-1])

    u = np.concatenate([ua, ub])
    k = np.concatenate([ka, kb])
    h = np.concatenate([ha, hb])
    kp = np.concatenate([kpa, kpb])
    t = len(u) - 1
    u0, h0 = u[t], h[t]

    # reflection about the slice t = h(k0); the curve keeps climbing with k' -> -k'
    u = np.concatenate([u, 2 * u0 - u[-2::-1]])
    k = np.concatenate([k, k[-2::-1]])
    h = np.concatenate([h, 2 * h0 - h[-2::-1]])
    kp = np.concatenate([kp, -kp[-2::-1]])
    hp = np.sqrt(np.maximum(0.0, 1.0 - kp * kp))
    kpp = second_derivative_k(k, kp, data)
    meta = {"singular_margin": margin, "phase_a_samples": len(ua)}
    return ProfileCurve(u, k, h, kp, hp, kpp, cls, data, k0=k0, closed=True,
                        turn_index=t, meta=meta)


def _one_sided_derivative(x, y, x0):
    """Derivative at x0 of the quadratic through three (x, y) points."""
    x = np.asarray(x, dtype=float) - x0
    w = np.empty(3)
    for i in range(3):
        j, l = [m for m in range(3) if m != i]
        w[i] = (-x[j] - x[l]) / ((x[i] - x[j]) * (x[i] - x[l]))
    return float(np.dot(w, y))


def closure_report(profile: ProfileCurve) -> dict:
    """Closure quantities of a sphere profile at the far pole and at the reflection slice.

    ``kpp_jump`` compares one-sided finite-difference estimates of k''
    from samples below and above the slice; ``kpp_turn_error`` compares
    the lower estimate with the ODE value at k0.
    """
    if not profile.closed:
        raise NoTurningPoint("closure is only defined for sphere profiles")
    t = profile.turn_index
    u, kp = profile.u, profile.kp
    left = _one_sided_derivative(u[t - 2:t + 1], kp[t - 2:t + 1], u[t])
    right = _one_sided_derivative(u[t:t + 3], kp[t:t + 3], u[t])
    return {
        "k_end": float(profile.k[-1]),
        "kp_end": float(kp[-1]),
        "total_height": float(profile.h[-1]),
        "h_turn": float(profile.h[t]),
        "kpp_jump": abs(left - right),
        "kpp_turn_error": abs(left - float(profile.kpp[t])),
    }


# --- CSV --------------------------------------------------------------------

def _fmt(x):
    return "%.17g" % x


def write_profile_csv(profile: ProfileCurve, path_or_file):
    """Write ``u,k,h,kp,hp,kpp`` rows with 17 significant digits (RFC 4180)."""
    def emit(fh):
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(CSV_HEADER)
        for row in profile.samples:
            w.writerow([_fmt(v) for v in row])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)


def read_profile_csv(path):
    """Return the sample matrix (N, 6) stored by :func:`write_profile_csv`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"unexpected header {rows[0]}")
    return np.array([[float(v) for v in r] for r in rows[1:]])
