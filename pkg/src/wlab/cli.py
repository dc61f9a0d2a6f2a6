"""Command-line front end: classify, generate, verify, bounds, export.

Exit codes: 0 success, 1 internal or numeric failure, 2 usage error,
3 verification failed.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bounds, quadform, surface
from .core import WeingartenData, classify
from .errors import WeingartenError
from .jsonio import dumps
from .profile import IntegratorConfig, closure_report, integrate_profile, write_profile_csv

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
VERBS = ("classify", "generate", "verify", "bounds", "export")

# verification thresholds
TOL = {
    "first_integral": 1e-9,
    "arclength": 1e-10,
    "gauss": 1e-8,
    "weingarten": 1e-6,
    "ratio_identity": 1e-6,
    "k_end": 1e-8,
    "kpp_jump": 1e-6,
    "q_sup_norm": 1e-6,
    "nu_identity": 1e-5,
    "h_identity": 1e-5,
    "qbar_bound_excess": 1e-8,
    "ke_chart": 1e-8,
}


@dataclass
class Command:
    verb: str
    data: WeingartenData
    integrator: IntegratorConfig
    out: Optional[str] = None
    n_v: int = 64
    projection: Optional[str] = None
    format: str = "obj"
    c0: Optional[float] = None
    ablate_f: bool = False


def _real(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not a finite real: {text!r}")
    return x


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 3:
        raise argparse.ArgumentTypeError("must be >= 3")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=int, choices=(-1, 1), required=True,
                        help="ambient sign: -1 for H^2xR, +1 for S^2xR")
    common.add_argument("-a", type=_real, required=True)
    common.add_argument("-b", type=_real, required=True)
    common.add_argument("-c", type=_real, required=True)
    common.add_argument("--k-max", type=_real, default=None,
                        help="truncation radius for non-compact profiles (default 3, or 1.5 on S^2xR)")
    common.add_argument("--rel-tol", type=_real, default=1e-10)
    common.add_argument("--abs-tol", type=_real, default=1e-12)

    parser = argparse.ArgumentParser(prog="wlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("classify", parents=[common], help="print the classification as JSON")
    g = sub.add_parser("generate", parents=[common], help="write the profile CSV, print a summary")
    g.add_argument("--out", required=True, help="profile CSV path")
    v = sub.add_parser("verify", parents=[common], help="residual report; exit 3 if a check fails")
    v.add_argument("--ablate-f", action="store_true", help="replace f by 0 (test hook)")
    v.add_argument("--out", help="also write the report here")
    bnd = sub.add_parser("bounds", parents=[common], help="height and diameter constants")
    bnd.add_argument("--c0", type=_real, default=None, help="horizontal constant for c2 (default c1)")
    bnd.add_argument("--out", help="also write the report here")
    e = sub.add_parser("export", parents=[common], help="write a mesh")
    e.add_argument("--out", required=True)
    e.add_argument("--n-v", type=_positive_int, default=64)
    e.add_argument("--format", choices=surface.FORMATS, default="obj")
    e.add_argument("--projection", choices=surface.PROJECTIONS, default=None,
                   help="default poincare on H^2xR, stereographic on S^2xR")
    return parser


def parse_args(argv) -> Command:
    parser = build_parser()
    ns = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[ns.verb]
    if ns.a == 0:
        sub.error("argument -a: a must be nonzero")
    if not ns.b > 0:
        sub.error("argument -b: b must be positive")
    for flag in ("k_max", "rel_tol", "abs_tol"):
        val = getattr(ns, flag)
        if val is not None and not val > 0:
            sub.error(f"argument --{flag.replace('_', '-')}: must be positive")
    data = WeingartenData(ns.eps, ns.a, ns.b, ns.c)
    k_max = ns.k_max if ns.k_max is not None else (3.0 if ns.eps == -1 else 1.5)
    if ns.eps == 1 and k_max >= 0.5 * math.pi:
        sub.error("argument --k-max: must be < pi/2 on S^2xR")
    projection = getattr(ns, "projection", None)
    if ns.verb == "export":
        if projection is None:
            projection = "poincare" if ns.eps == -1 else "stereographic"
        if (projection, ns.eps) in (("poincare", 1), ("stereographic", -1)):
            sub.error(f"argument --projection: {projection} does not match --eps {ns.eps}")
    return Command(
        verb=ns.verb, data=data,
        integrator=IntegratorConfig(rel_tol=ns.rel_tol, abs_tol=ns.abs_tol, k_max=k_max),
        out=getattr(ns, "out", None), n_v=getattr(ns, "n_v", 64), projection=projection,
        format=getattr(ns, "format", "obj"), c0=getattr(ns, "c0", None),
        ablate_f=getattr(ns, "ablate_f", False))


def _data_fields(data):
    return {"epsilon": data.epsilon, "a": data.a, "b": data.b, "c": data.c}


def _check(name, value, tol, upper=True):
    ok = bool(np.isfinite(value) and value < tol) if upper else bool(value <= tol)
    return {"name": name, "pass": ok, "residual": value}


def _generate_summary(profile):
    out = {"classification": profile.classification.to_dict(), "k0": profile.k0,
           "closed": profile.closed, "samples": len(profile),
           "first_integral_residual": float(profile.first_integral_residual().max()),
           "arclength_residual": float(profile.arclength_residual().max())}
    if profile.closed:
        out["closure"] = closure_report(profile)
    return out


def verify_report(cmd: Command) -> dict:
    data = cmd.data
    profile = integrate_profile(data, cmd.integrator)
    f = quadform.ZeroF() if cmd.ablate_f else quadform.AnalyticF(data)
    curv = surface.curvatures_rotational(profile.k, profile.kp, profile.kpp, data, profile.hp)
    ratio = quadform.principal_ratio_identity(profile, data, f)
    checks = [
        _check("first_integral", float(profile.first_integral_residual().max()), TOL["first_integral"]),
        _check("arclength", float(profile.arclength_residual().max()), TOL["arclength"]),
        _check("gauss", float(np.max(curv.gauss_residual)), TOL["gauss"]),
        _check("weingarten", float(np.max(curv.weingarten_residual)), TOL["weingarten"]),
        _check("ratio_identity", ratio, TOL["ratio_identity"]),
    ]
    report = {**_data_fields(data), "classification": profile.classification.to_dict(),
              "ablate_f": cmd.ablate_f, "ratio_identity_residual": ratio}
    if profile.closed:
        clo = closure_report(profile)
        chart = quadform.residual_report(profile, data, f=f)
        report.update(chart)
        checks += [
            _check("k_end", abs(clo["k_end"]), TOL["k_end"]),
            _check("kpp_jump", clo["kpp_jump"], TOL["kpp_jump"]),
            _check("q_sup_norm", chart["q_sup_norm"], TOL["q_sup_norm"]),
            _check("nu_identity", chart["nu_identity_residual"], TOL["nu_identity"]),
            _check("h_identity", chart["h_identity_residual"], TOL["h_identity"]),
            _check("qbar_bound", chart["qbar_bound_excess"], TOL["qbar_bound_excess"], upper=False),
            _check("ke_chart", chart["ke_chart_residual"], TOL["ke_chart"]),
        ]
    else:
        # non-compact surfaces: the chart is reported but not part of the verdict
        try:
            report["plane_chart"] = quadform.residual_report(profile, data, f=f)
        except (WeingartenError, ValueError) as exc:
            report["plane_chart"] = None
            report["plane_chart_error"] = str(exc)
    report["checks"] = checks
    report["passed"] = all(ch["pass"] for ch in checks)
    return report


def _emit(text, path=None):
    print(text)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def execute(cmd: Command) -> int:
    data = cmd.data
    try:
        if cmd.verb == "classify":
            _emit(dumps({**_data_fields(data), **classify(data).to_dict()}))
            return EXIT_OK
        if cmd.verb == "generate":
            profile = integrate_profile(data, cmd.integrator)
            write_profile_csv(profile, cmd.out)
            _emit(dumps({**_data_fields(data), **_generate_summary(profile), "out": cmd.out}))
            return EXIT_OK
        if cmd.verb == "verify":
            report = verify_report(cmd)
            _emit(dumps(report), cmd.out)
            return EXIT_OK if report["passed"] else EXIT_VERIFY
        if cmd.verb == "bounds":
            rep = bounds.bounds_report(data, cmd.c0, cmd.integrator)
            _emit(dumps(rep.to_dict()), cmd.out)
            return EXIT_OK if rep.passed else EXIT_VERIFY
        if cmd.verb == "export":
            profile = integrate_profile(data, cmd.integrator)
            mesh = surface.immerse(profile, cmd.n_v)
            surface.export_mesh(mesh, cmd.out, cmd.format, cmd.projection)
            pts, faces = mesh.triangulate()
            _emit(dumps({**_data_fields(data), "out": cmd.out, "format": cmd.format,
                         "projection": cmd.projection, "vertices": len(pts), "faces": len(faces),
                         "euler_characteristic": surface.euler_characteristic(faces)}))
            return EXIT_OK
    except (WeingartenError, ValueError, ArithmeticError, OSError) as exc:
        print(f"wlab {cmd.verb}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    raise AssertionError(cmd.verb)


def main(argv=None) -> int:
    try:
        cmd = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
