"""Order-unit cone geometry shared by every backend.

Two backends expose the same operations: the nonnegative orthant
``StandardCone(n)`` with elements as plain numpy vectors, and
``JordanCone(algebra)`` whose cone is the cone of squares of a Euclidean
Jordan algebra with elements from :mod:`.ejalg`.

The central quantity is the gauge ratio M(x/y) = inf {b > 0 : x <= b y}.
On the orthant it is the largest coordinate ratio; on an algebra it is the
top eigenvalue of P(y^{-1/2}) x.  From the gauge come boundary meets of
half-lines, the exact faces of orthant points, and the two-ray chart that
maps the planar cone spanned by two interior points onto the positive
quadrant of R^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import ejalg
from .ejalg import Element

__all__ = [
    "NotInteriorError",
    "DegeneratePairError",
    "StandardCone",
    "JordanCone",
    "Backend",
    "ConePoint",
    "gauge_pair",
    "m_ratio",
    "order_unit_norm",
    "boundary_point",
    "TwoDimChart",
    "two_dim_chart",
    "chart_coords",
    "proportional_factor",
    "face_span_standard",
    "FaceDescriptor",
    "face_of",
    "face_contains",
    "INDEPENDENCE_TOL",
]

#: squared-sine threshold of the normalised cross-Gram determinant below
#: which two elements are treated as proportional
INDEPENDENCE_TOL = 1e-10


class NotInteriorError(ValueError):
    """An argument that must lie in the open cone does not."""


class DegeneratePairError(ValueError):
    """The construction needs a pair in general position and did not get one."""


@dataclass(frozen=True)
class StandardCone:
    """Nonnegative orthant of R^n ordered coordinatewise, unit (1, ..., 1)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("orthant dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    def unit(self) -> np.ndarray:
        return np.ones(self.n)

    def label(self) -> str:
        return f"standard({self.n})"


@dataclass(frozen=True)
class JordanCone:
    """Cone of squares of a Euclidean Jordan algebra, unit the algebra unit."""

    algebra: ejalg.AlgebraDescriptor

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def unit(self) -> Element:
        return ejalg.unit(self.algebra)

    def label(self) -> str:
        return self.algebra.label()


Backend = Union[StandardCone, JordanCone]
ConePoint = Union[np.ndarray, Element]


def _as_vector(x, backend: StandardCone) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (backend.n,):
        raise ValueError(f"expected a vector of length {backend.n}, got {v.shape}")
    return v


def _inner(a, b, backend: Backend) -> float:
    if isinstance(backend, StandardCone):
        return float(np.asarray(a, dtype=float) @ np.asarray(b, dtype=float))
    return ejalg.inner(a, b)


def gauge_pair(x, y, backend: Backend) -> tuple[float, float]:
    """Both gauge ratios (M(x/y), M(y/x)) for interior x, y.

    Raises NotInteriorError when either point is outside the open cone.
    """
    if isinstance(backend, StandardCone):
        xv = _as_vector(x, backend)
        yv = _as_vector(y, backend)
        if np.any(yv <= 0.0):
            raise NotInteriorError("second point is not in the open orthant")
        if np.any(xv <= 0.0):
            raise NotInteriorError("first point is not in the open orthant")
        ratios = xv / yv
        return float(ratios.max()), float((1.0 / ratios).max())
    frame_y = ejalg.jordan_frame(y)
    lam_y = frame_y.eigenvalues
    if lam_y[0] <= 0.0:
        raise NotInteriorError("second point is not in the open cone")
    y_inv_half = ejalg.from_frame(frame_y, lam_y ** -0.5)
    reduced = ejalg.quad_apply(y_inv_half, x)
    lam = ejalg.eigenvalues_of(reduced)
    if lam[0] <= 0.0:
        raise NotInteriorError("first point is not in the open cone")
    return float(lam[-1]), float(1.0 / lam[0])


def m_ratio(x, y, backend: Backend) -> float:
    """Gauge ratio M(x/y) = inf {b > 0 : x <= b y} for interior x, y."""
    return gauge_pair(x, y, backend)[0]


def order_unit_norm(x, backend: Backend) -> float:
    """Order-unit norm: largest absolute eigenvalue (coordinate)."""
    if isinstance(backend, StandardCone):
        return float(np.max(np.abs(_as_vector(x, backend))))
    lam = ejalg.eigenvalues_of(x)
    return float(np.max(np.abs(lam)))


def boundary_point(x, y, backend: Backend, tol: float = 1e-12):
    """Where the half-line from x through y leaves the cone.

    With M = M(x/y) > 1 the meet is M/(M-1) * y - 1/(M-1) * x, which has a
    zero minimal eigenvalue (coordinate).  Raises DegeneratePairError when
    M <= 1 + tol, i.e. the half-line never exits.
    """
    m = m_ratio(x, y, backend)
    if m <= 1.0 + tol:
        raise DegeneratePairError(
            f"half-line stays inside the cone (gauge ratio {m:.6g} <= 1)"
        )
    return y * (m / (m - 1.0)) - x * (1.0 / (m - 1.0))


def proportional_factor(x, y, backend: Backend,
                        tol: float = INDEPENDENCE_TOL) -> float | None:
    """Return s with y ~ s x when the pair is numerically proportional.

    Proportionality is judged by the normalised cross-Gram determinant
    (the squared sine of the angle between x and y); returns None for a
    pair in general position.
    """
    xx = _inner(x, x, backend)
    yy = _inner(y, y, backend)
    xy = _inner(x, y, backend)
    if xx == 0.0 or yy == 0.0:
        raise ValueError("zero element has no direction")
    det_rel = max(0.0, 1.0 - xy * xy / (xx * yy))
    if det_rel > tol:
        return None
    return xy / xx


@dataclass(frozen=True)
class TwoDimChart:
    """Coordinates of the planar cone spanned by an interior pair.

    ``u_dir`` and ``v_dir`` sit on the two boundary rays of the planar
    cone; ``x_coords`` and ``y_coords`` are the (v, u) coordinates of the
    defining pair, all four entries positive.  The coordinate map is a
    gauge isometry onto the open positive quadrant.
    """

    u_dir: ConePoint
    v_dir: ConePoint
    x_coords: tuple[float, float]
    y_coords: tuple[float, float]


def _gram_solve(v, u, z, backend: Backend) -> tuple[float, float]:
    gvv = _inner(v, v, backend)
    guu = _inner(u, u, backend)
    gvu = _inner(v, u, backend)
    det = gvv * guu - gvu * gvu
    if det <= 0.0:
        raise DegeneratePairError("chart rays are numerically dependent")
    rv = _inner(z, v, backend)
    ru = _inner(z, u, backend)
    a = (guu * rv - gvu * ru) / det
    b = (gvv * ru - gvu * rv) / det
    return a, b


def two_dim_chart(x, y, backend: Backend,
                  independence_tol: float = INDEPENDENCE_TOL) -> TwoDimChart:
    """Build the two-ray chart of the planar cone spanned by x and y.

    Raises DegeneratePairError for proportional inputs.  Accuracy of the
    coordinates degrades as the pair approaches proportionality.
    """
    if proportional_factor(x, y, backend, independence_tol) is not None:
        raise DegeneratePairError("proportional points span no planar cone")
    m_xy, m_yx = gauge_pair(x, y, backend)
    u_dir = y - x * (1.0 / m_xy)
    v_dir = x - y * (1.0 / m_yx)
    a1, b1 = _gram_solve(v_dir, u_dir, x, backend)
    a2, b2 = _gram_solve(v_dir, u_dir, y, backend)
    if min(a1, b1, a2, b2) <= 0.0:
        raise DegeneratePairError(
            "chart coordinates collapsed; the pair is numerically degenerate"
        )
    return TwoDimChart(u_dir, v_dir, (a1, b1), (a2, b2))


def chart_coords(chart: TwoDimChart, z, backend: Backend) -> tuple[float, float]:
    """(v, u) coordinates of a point of the planar cone in a chart."""
    return _gram_solve(chart.v_dir, chart.u_dir, z, backend)


def face_span_standard(z, tol: float = 1e-9) -> frozenset[int]:
    """Support of an orthant point: the 0-based coordinates above tol.

    The face of the orthant generated by z is the sub-orthant on exactly
    these coordinates.  Raises ValueError for points with a clearly
    negative coordinate.
    """
    v = np.asarray(z, dtype=float)
    scale = max(1.0, float(np.max(np.abs(v))) if v.size else 1.0)
    if np.any(v < -tol * scale):
        raise ValueError("point is outside the orthant")
    return frozenset(int(i) for i in np.nonzero(v > tol * scale)[0])


@dataclass(frozen=True)
class FaceDescriptor:
    """Face of the cone generated by one point.

    Orthant faces carry the support index set; algebra faces carry the
    idempotent c onto the zero eigenvalue block, the face being the cone
    of the Peirce zero space V(c, 0).
    """

    support: frozenset[int] | None = None
    kernel_idempotent: Element | None = None


def face_of(z, backend: Backend, tol: float = 1e-9) -> FaceDescriptor:
    """Describe the smallest face containing a cone point."""
    if isinstance(backend, StandardCone):
        return FaceDescriptor(support=face_span_standard(z, tol))
    sd = ejalg.spectral_decompose(z)
    scale = max(1.0, float(np.max(np.abs(sd.eigenvalues))))
    if np.any(sd.eigenvalues < -tol * scale):
        raise ValueError("point is outside the cone")
    coords = np.zeros(backend.algebra.dim)
    for val, idem in zip(sd.eigenvalues, sd.idempotents):
        if val <= tol * scale:
            coords += idem.coords
    return FaceDescriptor(kernel_idempotent=Element(backend.algebra, coords))


def face_contains(face: FaceDescriptor, y, backend: Backend,
                  tol: float = 1e-9) -> bool:
    """Membership of a cone point in a described face."""
    if isinstance(backend, StandardCone):
        yv = _as_vector(y, backend)
        if np.any(yv < -tol):
            return False
        return face_span_standard(yv, tol) <= (face.support or frozenset())
    if ejalg.in_cone(y, tol) == ejalg.ConeLocation.OUTSIDE:
        return False
    c = face.kernel_idempotent
    if c is None:
        raise ValueError("face descriptor lacks an idempotent")
    scale = max(1.0, order_unit_norm(y, backend))
    return ejalg.inner(c, y) <= tol * scale
