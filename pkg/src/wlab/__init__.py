"""Rotational Weingarten surfaces in H^2 x R and S^2 x R.

Classification, profile integration, meshing, the quadratic form Q and
the explicit height constants.
"""
from .bounds import (BoundsReport, bounds_report, cylinder_radius_c2, g_prime,
                     horizontal_diameter_c1, m_constant, vertical_bound_C0)
from .core import (Classification, CurvatureSample, Kind, WeingartenData, classify,
                   extrinsic_from_nu, gauss_residual, trig_eps, weingarten_residual)
from .errors import (DegenerateChart, DomainError, NonPositiveExtrinsic, NoTurningPoint,
                     ProjectionMismatch, StepFailure, WeingartenError)
from .profile import (IntegratorConfig, ProfileCurve, closure_report, first_integral,
                      integrate_profile, second_derivative_k, turning_point_k0)
from .quadform import (AnalyticF, ConformalChart, ZeroF, conformal_chart, f_eval, f_prime,
                       identity_checks, principal_ratio_identity, q_sup_norm, residual_report)
from .surface import RotationalMesh, curvatures_rotational, export_mesh, immerse, project

__version__ = "0.1.0"
