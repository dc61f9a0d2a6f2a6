import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wlab.core import (CurvatureSample, Kind, WeingartenData, classify, extrinsic_from_nu,
                       gauss_residual, log_cos_eps, trig_eps, weingarten_residual)
from wlab.errors import DomainError, NonPositiveExtrinsic

# (eps, a, b, c) -> expected kind; covers every branch of the decision table
CLASSIFICATION_GRID = [
    ((-1, 1, 1, 1), Kind.SPHERE),
    ((1, 1, 1, 2), Kind.SPHERE),
    ((-1, 1, 1, 0), Kind.PLANE),
    ((-1, 2, 1, -1), Kind.PLANE),
    ((1, -1, 2, -0.5), Kind.PLANE),
    ((-1, -3, 1, 1), Kind.PLANE),
    ((-1, -3, 1, 0), Kind.PLANE),
    ((-1, -3, 1, -1), Kind.SPHERE),
    ((1, -3, 1, -4), Kind.SPHERE),
    ((1, -3, 1, -0.5), Kind.NO_ORTHOGONAL_ROTATIONAL),
    ((1, -3, 1, -1), Kind.NO_ORTHOGONAL_ROTATIONAL),
    ((-1, -1, 1, 5), Kind.EXCLUDED_CONSTANT_ANGLE),
    ((1, -2, 2, 1), Kind.EXCLUDED_CONSTANT_ANGLE),
    ((-1, 0, 1, 1), Kind.INVALID),
    ((-1, 1, 0, 1), Kind.INVALID),
    ((1, 1, -1, 1), Kind.INVALID),
    ((-1, -0.5, 1, 0.2), Kind.INVALID),     # K_e <= 0 at the axis
    ((1, 1, 1, 0.5), Kind.INVALID),         # c - a <= 0 on S^2 x R
    ((1, -3, 1, -2), Kind.INVALID),         # c < -b but c - eps*a > 0 with a+b < 0
    ((1, -3, 1, 0.5), Kind.INVALID),
]


class TestTrig:
    def test_axis_hyperbolic(self):
        co, si, cot = trig_eps(0.0, -1)
        assert (co, si) == (1.0, 0.0)
        assert cot == math.inf

    def test_quarter_turn_circular(self):
        co, _, cot = trig_eps(math.pi / 2, 1)
        assert abs(co) < 1e-16 and abs(cot) < 1e-16

    def test_cosh_one(self):
        assert trig_eps(1.0, -1)[0] == pytest.approx(1.5430806348152437, abs=1e-15)

    def test_cot_undefined_at_pi(self):
        with pytest.raises(DomainError):
            trig_eps(math.pi, 1)

    def test_negative_k_rejected(self):
        with pytest.raises(DomainError):
            trig_eps(-0.1, -1)

    def test_vectorized(self):
        co, si, cot = trig_eps(np.array([0.0, 1.0]), -1)
        assert cot[0] == np.inf and cot[1] == pytest.approx(1 / math.tanh(1.0))

    @given(st.floats(1e-8, 1.5), st.sampled_from([-1, 1]))
    def test_identity(self, k, eps):
        co, si, cot = trig_eps(k, eps)
        assert eps * co ** 2 + si ** 2 == pytest.approx(eps, abs=1e-12)
        assert cot * si == pytest.approx(co, rel=1e-12)

    @given(st.floats(1e-6, 1.5), st.sampled_from([-1, 1]))
    def test_log_cos_stable(self, k, eps):
        assert log_cos_eps(0.0, eps) == 0.0
        with mp.workdps(60):
            ref = float(mp.log(mp.cosh(k) if eps == -1 else mp.cos(k)))
        assert log_cos_eps(k, eps) == pytest.approx(ref, rel=1e-12, abs=1e-300)


class TestClassify:
    @pytest.mark.parametrize("coeffs,kind", CLASSIFICATION_GRID)
    def test_grid(self, coeffs, kind):
        assert classify(WeingartenData(*coeffs)).kind is kind

    def test_reason_mentions_positivity(self):
        r = classify(WeingartenData(-1, -0.5, 1, 0.2))
        assert "K_e>0 violated at axis" in r.reason

    def test_to_dict(self):
        assert classify(WeingartenData(-1, 1, 1, 1)).to_dict()["kind"] == "Sphere"

    @given(st.sampled_from([-1, 1]), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_total(self, eps, a, b, c):
        r = classify(WeingartenData(eps, a, b, c))
        assert isinstance(r.kind, Kind) and r.reason

    @given(st.sampled_from([-1, 1]), st.floats(-5, 5).filter(lambda x: x != 0),
           st.floats(0.01, 5), st.floats(-5, 5))
    def test_sphere_and_plane_have_positive_axis_curvature(self, eps, a, b, c):
        d = WeingartenData(eps, a, b, c)
        if classify(d).kind in (Kind.SPHERE, Kind.PLANE):
            assert d.axis_extrinsic > 0

    def test_rejects_bad_epsilon(self):
        with pytest.raises(DomainError):
            WeingartenData(0, 1, 1, 1)


class TestExtrinsic:
    def test_examples(self):
        d = WeingartenData(-1, 1, 1, 1)
        assert extrinsic_from_nu(1.0, d) == 1.0
        assert extrinsic_from_nu(0.0, d) == 0.5
        assert extrinsic_from_nu(1.0, WeingartenData(1, 1, 2, 2)) == pytest.approx(1 / 3, abs=1e-15)

    def test_non_positive_flagged(self):
        with pytest.raises(NonPositiveExtrinsic):
            extrinsic_from_nu(0.0, WeingartenData(-1, 1, 1, 0))

    def test_excluded_data(self):
        with pytest.raises(DomainError):
            extrinsic_from_nu(0.5, WeingartenData(-1, -1, 1, 1))

    @given(st.floats(-1, 1), st.sampled_from([-1, 1]), st.floats(0.1, 3), st.floats(0.1, 3),
           st.floats(-3, 3))
    def test_even_and_linear_in_nu2(self, nu, eps, a, b, c):
        d = WeingartenData(eps, a, b, c)
        k1 = extrinsic_from_nu(nu, d, check=False)
        assert k1 == extrinsic_from_nu(-nu, d, check=False)
        k0 = extrinsic_from_nu(0.0, d, check=False)
        assert k1 - k0 == pytest.approx(-eps * a / (a + b) * nu * nu, abs=1e-12)


class TestResiduals:
    def test_gauss_examples(self):
        assert gauss_residual(CurvatureSample(0, 1, 1, 0, 0, 0, 0), -1) == 0
        assert gauss_residual(CurvatureSample(1, 1, 0, 0, 0, 0, 0), 1) == 0
        assert gauss_residual(CurvatureSample(1, 1, 1, 0, 0, 0, 0), 1) == 1

    def test_weingarten(self):
        assert weingarten_residual(0.0, 1.0, WeingartenData(-1, 1, 1, 1)) == 0.0
