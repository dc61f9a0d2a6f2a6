"""Ambient model, coefficient validation and pointwise curvature relations.

A Weingarten (W-) surface in M^2(eps) x R satisfies ``a*K_i + b*K_e = c``
with ``a != 0`` and ``b > 0``; ``eps = -1`` is H^2 x R and ``eps = +1`` is
S^2 x R.  Everything downstream reads the coefficients from a single
:class:`WeingartenData` value.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonPositiveExtrinsic


@dataclass(frozen=True)
class WeingartenData:
    epsilon: int
    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.epsilon not in (-1, 1):
            raise DomainError(f"epsilon must be -1 or +1, got {self.epsilon!r}")
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def valid(self) -> bool:
        """True when a != 0 and b > 0."""
        return self.a != 0 and self.b > 0

    @property
    def c_shift(self) -> float:
        """``c - eps*a``; times 1/(a+b) this is K_e where nu^2 = 1."""
        return self.c - self.epsilon * self.a

    @property
    def axis_extrinsic(self) -> float:
        return self.c_shift / (self.a + self.b)

    def require(self, *, a_plus_b=False, two_a_plus_b=False):
        """Raise DomainError unless the requested non-degeneracy conditions hold."""
        if not self.valid:
            raise DomainError(f"need a != 0 and b > 0, got a={self.a}, b={self.b}")
        if a_plus_b and self.a + self.b == 0:
            raise DomainError("a + b = 0 (constant angle surfaces are excluded)")
        if two_a_plus_b and 2 * self.a + self.b == 0:
            raise DomainError("2a + b = 0")
        return self


class Kind(enum.Enum):
    SPHERE = "Sphere"
    PLANE = "Plane"
    NO_ORTHOGONAL_ROTATIONAL = "NoOrthogonalRotational"
    EXCLUDED_CONSTANT_ANGLE = "ExcludedConstantAngle"
    INVALID = "Invalid"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    reason: str

    def to_dict(self):
        return {"kind": self.kind.value, "reason": self.reason}


@dataclass
class CurvatureSample:
    """Curvature data at one point, or arrays of them (all fields broadcast)."""

    K_i: float
    K_e: float
    nu: float
    kappa1: float
    kappa2: float
    gauss_residual: float
    weingarten_residual: float


# --- eps-trigonometry -------------------------------------------------------

def cos_eps(k, epsilon):
    return np.cosh(k) if epsilon == -1 else np.cos(k)


def sin_eps(k, epsilon):
    return np.sinh(k) if epsilon == -1 else np.sin(k)


def tan_eps(k, epsilon):
    return np.tanh(k) if epsilon == -1 else np.tan(k)


def log_cos_eps(k, epsilon):
    """log(cos_eps k) without cancellation for small k."""
    if epsilon == -1:
        # log cosh k = |k| - log 2 + log1p(exp(-2|k|)), no overflow for large k
        k = np.abs(k)
        return np.where(k < 1.0, np.log1p(2.0 * np.sinh(0.5 * np.minimum(k, 1.0)) ** 2),
                        k - np.log(2.0) + np.log1p(np.exp(-2.0 * k)))[()]
    return np.log1p(-2.0 * np.sin(0.5 * k) ** 2)


def trig_eps(k, epsilon):
    """Return ``(cos_eps k, sin_eps k, cot_eps k)``.

    eps = -1 gives the hyperbolic functions, eps = +1 the circular ones.
    cot_eps at k = 0 is returned as +inf; callers needing ``x * cot_eps k``
    near the axis must use a product form instead.
    """
    if epsilon not in (-1, 1):
        raise DomainError("epsilon must be -1 or +1")
    karr = np.asarray(k, dtype=float)
    if np.any(karr < 0):
        raise DomainError("k must be >= 0")
    if epsilon == 1:
        n = np.round(karr / np.pi)
        if np.any((n >= 1) & np.isclose(karr, n * np.pi, rtol=0, atol=1e-12)):
            raise DomainError("cot undefined: k is a nonzero multiple of pi")
    co = cos_eps(karr, epsilon)
    si = sin_eps(karr, epsilon)
    with np.errstate(divide="ignore"):
        cot = np.where(karr == 0, np.inf, co / np.where(karr == 0, 1.0, si))
    if np.ndim(k) == 0:
        return float(co), float(si), float(cot)
    return co, si, cot


# --- classification ---------------------------------------------------------

def _rotational_table(data):
    eps, a, b, c = data.epsilon, data.a, data.b, data.c
    if a + b > 0:
        if c > 0:
            return Kind.SPHERE, "a+b>0, c>0: rotational topological sphere"
        return Kind.PLANE, "a+b>0, c<=0: homeomorphic to R^2"
    if c >= 0:
        return Kind.PLANE, "a+b<0, c>=0: homeomorphic to R^2"
    if eps == -1:
        return Kind.SPHERE, "a+b<0, H^2xR, c<0: rotational topological sphere"
    if c < -b:
        return Kind.SPHERE, "a+b<0, S^2xR, c<-b: rotational topological sphere"
    return (Kind.NO_ORTHOGONAL_ROTATIONAL,
            "a+b<0, S^2xR, -b<=c<0: K_e<0 wherever nu^2=1, no profile meets the axis")


def classify(data: WeingartenData) -> Classification:
    """Classify complete rotational W-surfaces meeting the axis orthogonally.

    Beyond the sign table, Sphere and Plane outcomes are downgraded to
    Invalid when K_e at the axis, (c - eps*a)/(a+b), is not positive.
    """
    if data.a == 0:
        return Classification(Kind.INVALID, "a = 0 is not a W-surface")
    if not data.b > 0:
        return Classification(Kind.INVALID, "b must be positive")
    if data.a + data.b == 0:
        return Classification(Kind.EXCLUDED_CONSTANT_ANGLE,
                              "a+b=0: the angle function is constant")
    kind, reason = _rotational_table(data)
    if kind in (Kind.SPHERE, Kind.PLANE) and not data.axis_extrinsic > 0:
        return Classification(
            Kind.INVALID,
            f"K_e>0 violated at axis: (c-eps*a)/(a+b) = {data.axis_extrinsic:.6g} "
            f"(table outcome would be {kind.value})")
    return Classification(kind, reason)


# --- pointwise relations ----------------------------------------------------

def extrinsic_from_nu(nu, data: WeingartenData, check=True):
    """K_e = (c - eps*a*nu^2)/(a+b), forced by the Gauss and W-equations."""
    data.require(a_plus_b=True)
    nu = np.asarray(nu, dtype=float)
    ke = (data.c - data.epsilon * data.a * nu ** 2) / (data.a + data.b)
    if check and np.any(ke <= 0):
        raise NonPositiveExtrinsic(f"K_e <= 0 (min {np.min(ke):.6g})")
    return float(ke) if ke.ndim == 0 else ke


def gauss_residual(sample: CurvatureSample, epsilon):
    return np.abs(sample.K_i - sample.K_e - epsilon * np.asarray(sample.nu) ** 2)


def weingarten_residual(K_i, K_e, data: WeingartenData):
    return np.abs(data.a * np.asarray(K_i) + data.b * np.asarray(K_e) - data.c)
