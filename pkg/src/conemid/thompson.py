"""Thompson metric, geodesics and midpoints on an order-unit cone.

d(x, y) = log max(M(x/y), M(y/x)) for interior points.  Two geodesics
matter here: the power geodesic through the geometric mean (algebra
backends only), and the canonical geodesic built from the two-ray chart,
which is defined on every backend, depends only on the planar cone
spanned by the endpoints, and whose midpoint is the anchor point of the
midpoint-set span reported by :mod:`.midspan`.
"""

from __future__ import annotations

import math

import numpy as np

from . import conegeom, ejalg
from .conegeom import (Backend, ConePoint, DegeneratePairError, JordanCone,
                       NotInteriorError, StandardCone, gauge_pair)

__all__ = [
    "distance",
    "delta2",
    "power_geodesic",
    "geometric_mean",
    "canonical_geodesic",
    "canonical_midpoint",
    "is_midpoint",
    "midpoint_tolerance",
    "MidpointTester",
]


def distance(x, y, backend: Backend) -> float:
    """Thompson distance between interior points; 0 on the diagonal."""
    m_xy, m_yx = gauge_pair(x, y, backend)
    return max(0.0, math.log(max(m_xy, m_yx)))


def delta2(x, y, backend: Backend) -> float:
    """l2 norm of the log-eigenvalues of P(y^{-1/2}) x, with multiplicity.

    A second invariant metric on algebra backends, used to cross-check
    congruence invariance; not defined for the orthant backend here.
    """
    if not isinstance(backend, JordanCone):
        raise TypeError("delta2 needs an algebra backend")
    frame_y = ejalg.jordan_frame(y)
    if frame_y.eigenvalues[0] <= 0.0:
        raise NotInteriorError("second point is not in the open cone")
    y_inv_half = ejalg.from_frame(frame_y, frame_y.eigenvalues ** -0.5)
    lam = ejalg.eigenvalues_of(ejalg.quad_apply(y_inv_half, x))
    if lam[0] <= 0.0:
        raise NotInteriorError("first point is not in the open cone")
    return float(np.linalg.norm(np.log(lam)))


def power_geodesic(x, y, t: float, backend: Backend):
    """Point x #_t y = P(x^{1/2}) (P(x^{-1/2}) y)^t on the power curve.

    Algebra backends only; t is clamped to nothing — any real t gives the
    extension of the geodesic line.
    """
    if not isinstance(backend, JordanCone):
        raise TypeError("the power geodesic needs an algebra backend")
    frame_x = ejalg.jordan_frame(x)
    if frame_x.eigenvalues[0] <= 0.0:
        raise NotInteriorError("first point is not in the open cone")
    x_half = ejalg.from_frame(frame_x, frame_x.eigenvalues ** 0.5)
    x_inv_half = ejalg.from_frame(frame_x, frame_x.eigenvalues ** -0.5)
    inner_pt = ejalg.quad_apply(x_inv_half, y)
    if ejalg.eigenvalues_of(inner_pt)[0] <= 0.0:
        raise NotInteriorError("second point is not in the open cone")
    return ejalg.quad_apply(x_half, ejalg.power(inner_pt, t))


def geometric_mean(x, y, backend: Backend):
    """Midpoint of the power geodesic; coordinatewise sqrt(x y) on the orthant."""
    if isinstance(backend, StandardCone):
        xv = np.asarray(x, dtype=float)
        yv = np.asarray(y, dtype=float)
        if np.any(xv <= 0.0) or np.any(yv <= 0.0):
            raise NotInteriorError("geometric mean needs open-orthant points")
        return np.sqrt(xv * yv)
    return power_geodesic(x, y, 0.5, backend)


def canonical_geodesic(x, y, t: float, backend: Backend):
    """Canonical geodesic through x and y at parameter t in [0, 1].

    Proportional pairs move along the common ray (s^t x for y = s x).  In
    general position the point is a1^{1-t} a2^t v + b1^{1-t} b2^t u in
    the two-ray chart of the pair; the curve depends only on the planar
    cone spanned by x and y.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("the canonical geodesic is parametrised on [0, 1]")
    # reject points outside the open cone before any chart work
    gauge_pair(x, y, backend)
    s = conegeom.proportional_factor(x, y, backend)
    if s is not None:
        if s <= 0.0:
            raise DegeneratePairError("antiproportional pair")
        return x * (s ** t)
    chart = conegeom.two_dim_chart(x, y, backend)
    a1, b1 = chart.x_coords
    a2, b2 = chart.y_coords
    a = a1 ** (1.0 - t) * a2 ** t
    b = b1 ** (1.0 - t) * b2 ** t
    return chart.v_dir * a + chart.u_dir * b


def canonical_midpoint(x, y, backend: Backend):
    """Canonical geodesic at t = 1/2; the anchor of the midpoint span."""
    return canonical_geodesic(x, y, 0.5, backend)


def midpoint_tolerance(d: float) -> float:
    """Default acceptance tolerance for midpoint tests at distance d."""
    return 1e-9 * max(1.0, d)


def is_midpoint(x, y, z, backend: Backend, tol: float | None = None) -> bool:
    """Is z a Thompson midpoint of (x, y)?

    True iff d(x, z) and d(z, y) are both within tol of d(x, y) / 2; tol
    defaults to midpoint_tolerance(d(x, y)).  Points outside the open
    cone are never midpoints.
    """
    d = distance(x, y, backend)
    if tol is None:
        tol = midpoint_tolerance(d)
    try:
        dxz = distance(x, z, backend)
        dzy = distance(z, y, backend)
    except NotInteriorError:
        return False
    half = 0.5 * d
    return abs(dxz - half) <= tol and abs(dzy - half) <= tol


class MidpointTester:
    """Repeated midpoint tests against one fixed pair.

    Caches the quadratic representations of x^{-1/2} and y^{-1/2} so each
    candidate costs two matrix-vector products and two eigenvalue runs.
    Only metrically relevant work is cached; the verdict agrees with
    :func:`is_midpoint` exactly.
    """

    def __init__(self, x, y, backend: Backend, tol: float | None = None):
        self.backend = backend
        if isinstance(backend, StandardCone):
            self._xv = np.asarray(x, dtype=float)
            self._yv = np.asarray(y, dtype=float)
            if np.any(self._xv <= 0.0) or np.any(self._yv <= 0.0):
                raise NotInteriorError("midpoint tester needs interior endpoints")
            self._qx = None
            self._qy = None
        else:
            fx = ejalg.jordan_frame(x)
            fy = ejalg.jordan_frame(y)
            if fx.eigenvalues[0] <= 0.0 or fy.eigenvalues[0] <= 0.0:
                raise NotInteriorError("midpoint tester needs interior endpoints")
            self._qx = ejalg.quad_matrix(
                ejalg.from_frame(fx, fx.eigenvalues ** -0.5))
            self._qy = ejalg.quad_matrix(
                ejalg.from_frame(fy, fy.eigenvalues ** -0.5))
            self._algebra = backend.algebra
        self.distance = distance(x, y, backend)
        self.tol = midpoint_tolerance(self.distance) if tol is None else tol

    def _distance_to(self, q, z) -> float:
        if isinstance(self.backend, StandardCone):
            ratios = np.asarray(z, dtype=float) / q
            if np.any(ratios <= 0.0):
                raise NotInteriorError("candidate leaves the open orthant")
            return max(0.0, math.log(max(ratios.max(), (1.0 / ratios).max())))
        w = ejalg.Element._fresh(self._algebra, q @ np.asarray(z.coords))
        lam = ejalg.eigenvalues_of(w)
        if lam[0] <= 0.0:
            raise NotInteriorError("candidate leaves the open cone")
        return max(0.0, math.log(max(lam[-1], 1.0 / lam[0])))

    def __call__(self, z) -> bool:
        try:
            if isinstance(self.backend, StandardCone):
                dxz = self._distance_to(self._xv, z)
                dzy = self._distance_to(self._yv, z)
            else:
                dxz = self._distance_to(self._qx, z)
                dzy = self._distance_to(self._qy, z)
        except NotInteriorError:
            return False
        half = 0.5 * self.distance
        return abs(dxz - half) <= self.tol and abs(dzy - half) <= self.tol
