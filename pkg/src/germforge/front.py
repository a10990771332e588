"""Wave-front and caustic type predictions at focal points, plus mesh
generation for the surface, its offset (wave-front) sheets and the bounded
focal sheet.

Predictions are table-driven from the ridge/sub-parabolic flags:

    not a ridge                        -> wave-front: cuspidal edge
    first-order ridge, not subparabolic -> wave-front: swallowtail,
                                           caustic:    cuspidal edge
    anything else                      -> undetermined

Meshes are for inspection, not recognition.  Offsets use the exact unit
normal away from the singular locus and the extended normal orientation
across it (blow-up chart), so the offset-distance invariant holds to
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .blowup import COS_TOL, k10_closed, normal_r0_closed, ridge_report
from .errors import HypothesisError, UsageError


class FrontType(Enum):
    CUSPIDAL_EDGE = "CuspidalEdge"
    SWALLOWTAIL = "Swallowtail"
    UNDETERMINED = "Undetermined"


@dataclass
class FrontVerdict:
    theta0: float
    wavefront_type: FrontType
    caustic_type: FrontType
    basis: dict


def verdict_from_flags(is_ridge, is_first_order_ridge, is_subparabolic):
    """The (wavefront, caustic) type pair as a pure function of the flags."""
    if not is_ridge:
        return (FrontType.CUSPIDAL_EDGE, FrontType.UNDETERMINED)
    if is_first_order_ridge and not is_subparabolic:
        return (FrontType.SWALLOWTAIL, FrontType.CUSPIDAL_EDGE)
    return (FrontType.UNDETERMINED, FrontType.UNDETERMINED)


def front_verdict(ctx, theta0):
    """Predicted wave-front/caustic type at the focal point along theta0.

    Along the principal normal direction itself the unfolding is never
    versal and no type is claimed: both predictions are Undetermined.
    """
    rr = ridge_report(ctx, theta0)
    basis = {
        "is_ridge": rr.is_ridge,
        "is_first_order_ridge": rr.is_first_order_ridge,
        "is_subparabolic": rr.is_subparabolic,
    }
    if abs(math.cos(theta0)) <= COS_TOL:
        basis["on_principal_normal"] = True
        return FrontVerdict(
            theta0, FrontType.UNDETERMINED, FrontType.UNDETERMINED, basis
        )
    k10 = k10_closed(ctx, theta0)
    nf = ctx.nf
    k10_scale = max(
        1.0, abs(ctx.a_lead * nf.b_(2)), abs(ctx.fact * nf.a_(2, 0))
    ) / ctx.ma(theta0)
    if abs(k10) <= ctx.tol * k10_scale:
        raise HypothesisError(
            "the bounded principal curvature vanishes at theta0 = %g" % theta0
        )
    wavefront, caustic = verdict_from_flags(
        rr.is_ridge, rr.is_first_order_ridge, rr.is_subparabolic
    )
    return FrontVerdict(theta0, wavefront, caustic, basis)


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------


@dataclass
class Mesh:
    vertices: np.ndarray              # (V, 3) float64
    faces: np.ndarray                 # (F, 3) int vertex indices
    metadata: dict = field(default_factory=dict)
    skipped: int = 0                  # grid nodes dropped (degenerate data)

    def validate(self):
        if len(self.vertices) and not np.isfinite(self.vertices).all():
            raise UsageError("mesh contains non-finite vertices")
        if len(self.faces) and (
            self.faces.min() < 0 or self.faces.max() >= len(self.vertices)
        ):
            raise UsageError("mesh face indices out of range")
        return self


@dataclass
class WavefrontSpec:
    t0: float = 0.0
    grid: tuple = (64, 64)
    chart: str = "direct"             # "direct" | "blowup"
    extent: float = 1.0               # half-width of the sampled parameter box
    r_max: float = 0.5                # blow-up chart radial half-width
    context: Optional[object] = None  # BlowupContext, required for "blowup"

    def __post_init__(self):
        if self.t0 < 0 or not math.isfinite(self.t0):
            raise UsageError("t0 must be a finite nonnegative offset")
        if self.grid[0] < 2 or self.grid[1] < 2:
            raise UsageError("grid sizes must be >= 2")
        if self.chart not in ("direct", "blowup"):
            raise UsageError("chart must be 'direct' or 'blowup'")
        if self.chart == "blowup" and self.context is None:
            raise UsageError("the blow-up chart needs a BlowupContext")


def _grid_faces(nu, nv, keep):
    """CCW triangulation of an (nu x nv) node grid, skipping dropped nodes."""
    index = -np.ones(nu * nv, dtype=int)
    index[keep] = np.arange(keep.sum())
    faces = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            q = [i * nv + j, (i + 1) * nv + j, (i + 1) * nv + j + 1, i * nv + j + 1]
            ids = index[q]
            if (ids[[0, 1, 2]] >= 0).all():
                faces.append(ids[[0, 1, 2]])
            if (ids[[0, 2, 3]] >= 0).all():
                faces.append(ids[[0, 2, 3]])
    return np.array(faces, dtype=int) if faces else np.zeros((0, 3), dtype=int)


def _evaluate_germ(germ, uu, vv):
    pts = np.empty(uu.shape + (3,))
    for idx, comp in enumerate(germ.components()):
        pts[..., idx] = comp.evaluate(uu, vv)
    return pts


def _raw_normals(germ, uu, vv):
    gu = np.stack(
        [c.partial("u").evaluate(uu, vv) + 0 * uu for c in germ.components()], axis=-1
    )
    gv = np.stack(
        [c.partial("v").evaluate(uu, vv) + 0 * uu for c in germ.components()], axis=-1
    )
    cross = np.cross(gu, gv)
    norms = np.linalg.norm(cross, axis=-1)
    return cross, norms


def surface_mesh(germ, grid=(64, 64), extent=1.0):
    """Image of a (u, v) parameter grid under the germ."""
    nu, nv = grid
    us = np.linspace(-extent, extent, nu)
    vs = np.linspace(-extent, extent, nv)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    pts = _evaluate_germ(germ, uu, vv)
    keep = np.ones(nu * nv, dtype=bool)
    faces = _grid_faces(nu, nv, keep)
    return Mesh(
        pts.reshape(-1, 3),
        faces,
        {"kind": "surface", "grid": [nu, nv], "extent": extent},
    ).validate()


def wavefront_mesh(germ, spec, sign=1):
    """Offset surface g +- t0 * n; see WavefrontSpec for the chart choice."""
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    if spec.chart == "blowup":
        return _blowup_offset_mesh(germ, spec, sign)
    nu, nv = spec.grid
    us = np.linspace(-spec.extent, spec.extent, nu)
    vs = np.linspace(-spec.extent, spec.extent, nv)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    pts = _evaluate_germ(germ, uu, vv)
    if spec.t0 == 0.0:
        keep = np.ones(nu * nv, dtype=bool)
        verts = pts.reshape(-1, 3)
        skipped = 0
    else:
        cross, norms = _raw_normals(germ, uu, vv)
        scale = max(norms.max(), 1e-30)
        keep2d = norms > 1e-12 * scale
        with np.errstate(invalid="ignore", divide="ignore"):
            normals = cross / norms[..., None]
        offset = pts + sign * spec.t0 * normals
        keep = keep2d.reshape(-1)
        verts = offset.reshape(-1, 3)[keep]
        skipped = int((~keep).sum())
    faces = _grid_faces(nu, nv, keep)
    return Mesh(
        verts,
        faces,
        {
            "kind": "wavefront",
            "chart": "direct",
            "t0": spec.t0,
            "sign": sign,
            "grid": [nu, nv],
            "extent": spec.extent,
        },
        skipped,
    ).validate()


def _blowup_nodes(spec):
    nr, ntheta = spec.grid
    rs = np.linspace(-spec.r_max, spec.r_max, nr)
    thetas = np.linspace(-math.pi / 2 + 0.02, math.pi / 2 - 0.02, ntheta)
    return rs, thetas


def _extended_normal_at(ctx, germ, r, theta):
    """Exact unit normal with the extended (sign-corrected) orientation."""
    n = ctx.n
    c = math.cos(theta)
    if r == 0.0:
        return np.array(normal_r0_closed(ctx, theta))
    u, v = ctx.map_point(r, theta)
    gu = np.array([comp.partial("u").evaluate(u, v) for comp in germ.components()])
    gv = np.array([comp.partial("v").evaluate(u, v) for comp in germ.components()])
    cross = np.cross(gu, gv)
    norm = np.linalg.norm(cross)
    if norm == 0.0:
        return None
    orient = math.copysign(1.0, r ** (n + 1) * c**n)
    return orient * cross / norm


def _blowup_offset_mesh(germ, spec, sign):
    ctx = spec.context
    nr, ntheta = spec.grid
    rs, thetas = _blowup_nodes(spec)
    verts = []
    keep = np.zeros(nr * ntheta, dtype=bool)
    skipped = 0
    for i, r in enumerate(rs):
        for j, theta in enumerate(thetas):
            if abs(math.cos(theta)) <= COS_TOL:
                skipped += 1
                continue
            normal = _extended_normal_at(ctx, germ, r, theta)
            if normal is None:
                skipped += 1
                continue
            u, v = ctx.map_point(r, theta)
            point = np.array([comp.evaluate(u, v) for comp in germ.components()])
            verts.append(point + sign * spec.t0 * normal)
            keep[i * ntheta + j] = True
    faces = _grid_faces(nr, ntheta, keep)
    return Mesh(
        np.array(verts) if verts else np.zeros((0, 3)),
        faces,
        {
            "kind": "wavefront",
            "chart": "blowup",
            "t0": spec.t0,
            "sign": sign,
            "grid": [nr, ntheta],
            "r_max": spec.r_max,
        },
        skipped,
    ).validate()


def _bounded_curvature_at(ctx, germ, r, theta):
    """The bounded principal curvature w.r.t. the extended normal."""
    if r == 0.0:
        return k10_closed(ctx, theta)
    u, v = ctx.map_point(r, theta)
    comps = germ.components()
    gu = np.array([c.partial("u").evaluate(u, v) for c in comps])
    gv = np.array([c.partial("v").evaluate(u, v) for c in comps])
    nhat = _extended_normal_at(ctx, germ, r, theta)
    if nhat is None:
        return None
    guu = np.array([c.partial("u").partial("u").evaluate(u, v) for c in comps])
    guv = np.array([c.partial("u").partial("v").evaluate(u, v) for c in comps])
    gvv = np.array([c.partial("v").partial("v").evaluate(u, v) for c in comps])
    E, F, G = gu @ gu, gu @ gv, gv @ gv
    L, M, N = nhat @ guu, nhat @ guv, nhat @ gvv
    A = E * G - F * F
    B = E * N - 2 * F * M + G * L
    C = L * N - M * M
    if A <= 0.0 or B == 0.0:
        return None
    disc = max(B * B - 4 * A * C, 0.0)
    return 2 * C / (B + math.copysign(math.sqrt(disc), B))


def focal_sheet_mesh(ctx, grid=(33, 64), r_max=0.5, focal_distance_max=100.0):
    """Sheet of centers g + n / kappa_1 for the bounded curvature branch.

    Nodes where the bounded curvature (nearly) vanishes are skipped: their
    centers escape beyond focal_distance_max and carry no information.
    """
    germ = ctx.nf.reconstruct()
    nr, ntheta = grid
    rs = np.linspace(-r_max, r_max, nr)
    thetas = np.linspace(-math.pi / 2 + 0.02, math.pi / 2 - 0.02, ntheta)
    kappa_min = max(ctx.tol, 1.0 / focal_distance_max)
    verts = []
    keep = np.zeros(nr * ntheta, dtype=bool)
    skipped = 0
    for i, r in enumerate(rs):
        for j, theta in enumerate(thetas):
            if abs(math.cos(theta)) <= COS_TOL:
                skipped += 1
                continue
            kappa = _bounded_curvature_at(ctx, germ, r, theta)
            normal = _extended_normal_at(ctx, germ, r, theta)
            if kappa is None or normal is None or abs(kappa) <= kappa_min:
                skipped += 1
                continue
            u, v = ctx.map_point(r, theta)
            point = np.array([c.evaluate(u, v) for c in germ.components()])
            verts.append(point + normal / kappa)
            keep[i * ntheta + j] = True
    faces = _grid_faces(nr, ntheta, keep)
    return Mesh(
        np.array(verts) if verts else np.zeros((0, 3)),
        faces,
        {"kind": "focal-sheet", "grid": [nr, ntheta], "r_max": r_max},
        skipped,
    ).validate()
