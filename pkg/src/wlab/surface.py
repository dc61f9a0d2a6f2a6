"""Rotational immersions in R^4, per-vertex curvature and mesh export.

M^2(eps) x R is realized inside R^3_eps x R (metric eps dx1^2 + dx2^2 +
dx3^2 + dx4^2) as ``eps x1^2 + x2^2 + x3^2 = eps`` (x1 > 0 when eps = -1),
with rotation axis {(1, 0, 0)} x R.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .core import CurvatureSample, WeingartenData, cos_eps, sin_eps, tan_eps
from .errors import DomainError, ProjectionMismatch
from .profile import ProfileCurve

PROJECTIONS = ("poincare", "drop_x1", "stereographic")
FORMATS = ("obj", "ply")


def curvatures_rotational(k, kp, kpp, data: WeingartenData, hp=None) -> CurvatureSample:
    """Curvatures of the rotational surface from profile data.

    K_i = eps k'^2 - k'' cot_eps k and K_e = -k'' cot_eps k.  nu = +k' is
    the angle function for the unit normal that makes II positive
    definite.  kappa1 = -k''/h' belongs to the profile direction and
    kappa2 = h' cot_eps k to the orbit direction.  On the axis (k = 0)
    the umbilic limits are used.
    """
    eps = data.epsilon
    k = np.asarray(k, dtype=float)
    kp = np.asarray(kp, dtype=float)
    kpp = np.asarray(kpp, dtype=float)
    hp = np.sqrt(np.maximum(0.0, 1.0 - kp ** 2)) if hp is None else np.asarray(hp, dtype=float)

    axis = k == 0
    safe_k = np.where(axis, 1.0, k)
    safe_hp = np.where(axis, 1.0, hp)
    ke_axis = data.axis_extrinsic
    K_e = np.where(axis, ke_axis, -kpp / tan_eps(safe_k, eps))
    K_i = eps * kp ** 2 + K_e
    root = np.sqrt(abs(ke_axis))
    kappa1 = np.where(axis, root, -kpp / safe_hp)
    kappa2 = np.where(axis, root, hp / tan_eps(safe_k, eps))
    nu = kp
    gauss = np.abs(K_i - K_e - eps * nu ** 2)
    wein = np.abs(data.a * K_i + data.b * K_e - data.c)
    vals = [K_i, K_e, nu, kappa1, kappa2, gauss, wein]
    if k.ndim == 0:
        vals = [float(v) for v in vals]
    return CurvatureSample(*vals)


@dataclass
class RotationalMesh:
    vertices: np.ndarray          # (n_u, n_v, 4) ambient coordinates
    epsilon: int
    curvature: CurvatureSample    # fields broadcast to (n_u, n_v)
    k: np.ndarray                 # (n_u,) radial coordinate of each row
    closed: bool

    @property
    def shape(self):
        return self.vertices.shape[:2]

    def constraint_residual(self):
        x = self.vertices
        return np.abs(self.epsilon * x[..., 0] ** 2 + x[..., 1] ** 2 + x[..., 2] ** 2 - self.epsilon)

    def orbit_residual(self):
        r2 = self.vertices[..., 1] ** 2 + self.vertices[..., 2] ** 2
        return np.abs(r2 - r2[:, :1])

    def triangulate(self):
        """Welded vertex list (V, 4) and triangles (F, 3).

        Rows on the axis collapse to one vertex each, so a closed sphere
        mesh is watertight with Euler characteristic 2.
        """
        n_u, n_v = self.shape
        pole = self.k == 0
        points = []
        row_ids = []
        next_id = 0
        for i in range(n_u):
            if pole[i]:
                points.append(self.vertices[i, :1])
                row_ids.append(np.full(n_v, next_id))
                next_id += 1
            else:
                points.append(self.vertices[i])
                row_ids.append(np.arange(next_id, next_id + n_v))
                next_id += n_v
        faces = []
        for i in range(n_u - 1):
            lo, hi = row_ids[i], row_ids[i + 1]
            lo1, hi1 = np.roll(lo, -1), np.roll(hi, -1)
            if not pole[i]:
                faces.append(np.column_stack([lo, lo1, hi1]))
            if not pole[i + 1]:
                faces.append(np.column_stack([lo, hi1, hi]))
        return np.concatenate(points), np.concatenate(faces)


def immerse(profile: ProfileCurve, n_v: int = 64) -> RotationalMesh:
    """Rotate the profile into phi(u_i, v_j) with v_j = 2 pi j / n_v."""
    if n_v < 3:
        raise DomainError("n_v must be >= 3")
    if len(profile) == 0:
        raise DomainError("empty profile")
    eps = profile.data.epsilon
    v = 2.0 * np.pi * np.arange(n_v) / n_v
    ck = cos_eps(profile.k, eps)[:, None]
    sk = sin_eps(profile.k, eps)[:, None]
    verts = np.empty((len(profile), n_v, 4))
    verts[..., 0] = ck
    verts[..., 1] = sk * np.cos(v)
    verts[..., 2] = sk * np.sin(v)
    verts[..., 3] = profile.h[:, None]
    # sin v at multiples of pi is not exactly zero in floating point; keep the axis exact
    verts[profile.k == 0, :, 1:3] = 0.0
    row = curvatures_rotational(profile.k, profile.kp, profile.kpp, profile.data, profile.hp)
    shape = (len(profile), n_v)
    curv = CurvatureSample(*[np.broadcast_to(np.asarray(f)[:, None], shape)
                             for f in vars(row).values()])
    return RotationalMesh(verts, eps, curv, np.asarray(profile.k), profile.closed)


def project(points, epsilon, projection):
    """Map ambient points (..., 4) to R^3 for viewing; x4 stays the height."""
    x = np.asarray(points, dtype=float)
    if projection == "drop_x1":
        return x[..., 1:4].copy()
    if projection == "poincare" and epsilon != -1:
        raise ProjectionMismatch("poincare projection needs eps = -1 (H^2)")
    if projection == "stereographic" and epsilon != 1:
        raise ProjectionMismatch("stereographic projection needs eps = +1 (S^2)")
    if projection not in PROJECTIONS:
        raise ValueError(f"unknown projection {projection!r}")
    # hyperboloid -> Poincare disk and S^2 from (-1,0,0) share one formula
    denom = 1.0 + x[..., 0]
    return np.stack([x[..., 1] / denom, x[..., 2] / denom, x[..., 3]], axis=-1)


def export_mesh(mesh: RotationalMesh, path, format="obj", projection="poincare"):
    """Write the welded, projected mesh as ASCII OBJ or binary little-endian PLY."""
    fmt = format.lower()
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {format!r}")
    points, faces = mesh.triangulate()
    xyz = project(points, mesh.epsilon, projection)
    if fmt == "obj":
        with open(path, "w") as fh:
            fh.write(f"# wlab rotational W-surface, eps={mesh.epsilon}, projection={projection}\n")
            for p in xyz:
                fh.write("v %.9g %.9g %.9g\n" % tuple(p))
            for f in faces + 1:
                fh.write("f %d %d %d\n" % tuple(f))
    else:
        header = (
            "ply\nformat binary_little_endian 1.0\n"
            f"comment wlab rotational W-surface, eps={mesh.epsilon}, projection={projection}\n"
            f"element vertex {len(xyz)}\n"
            "property double x\nproperty double y\nproperty double z\n"
            f"element face {len(faces)}\n"
            "property list uchar int vertex_indices\nend_header\n")
        face_dt = np.dtype([("n", "u1"), ("idx", "<i4", (3,))])
        frec = np.empty(len(faces), dtype=face_dt)
        frec["n"] = 3
        frec["idx"] = faces
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii"))
            fh.write(np.ascontiguousarray(xyz, dtype="<f8").tobytes())
            fh.write(frec.tobytes())
    return path


def read_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:]])
    return np.array(verts), np.array(faces, dtype=int)


def read_ply(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    end = blob.index(b"end_header\n") + len(b"end_header\n")
    header = blob[:end].decode("ascii").splitlines()
    if header[1] != "format binary_little_endian 1.0":
        raise ValueError("only binary little-endian PLY is supported")
    n_v = n_f = 0
    for line in header:
        if line.startswith("element vertex"):
            n_v = int(line.split()[-1])
        elif line.startswith("element face"):
            n_f = int(line.split()[-1])
    verts = np.frombuffer(blob, dtype="<f8", count=3 * n_v, offset=end).reshape(n_v, 3)
    off = end + 24 * n_v
    faces = np.empty((n_f, 3), dtype=int)
    for i in range(n_f):
        n = blob[off]
        faces[i] = struct.unpack_from("<3i", blob, off + 1)
        off += 1 + 4 * n
    return verts, faces


def euler_characteristic(faces):
    faces = np.asarray(faces)
    edges = np.sort(np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]]), axis=1)
    n_edges = len(np.unique(edges, axis=0))
    return len(np.unique(faces)) - n_edges + len(faces)


def boundary_edge_count(faces):
    """Edges used by exactly one triangle (0 for a watertight mesh)."""
    faces = np.asarray(faces)
    edges = np.sort(np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]]), axis=1)
    _, counts = np.unique(edges, axis=0, return_counts=True)
    return int(np.sum(counts == 1))
