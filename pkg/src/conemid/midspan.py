"""Affine span of the Thompson midpoint set of an interior pair.

The midpoint set of x and y is the intersection of the two closed balls
of radius d(x, y)/2 around the endpoints.  Working at the reduced point
x~ = P(y^{-1/2}) x, every eigenvalue class of x~ gets the score
max(lam, 1/lam); the classes whose score reaches the top score theta are
the *attaining* classes, and they pin the midpoint set down: its affine
span is the translate, by the canonical midpoint, of the Peirce zero
space V(c, 0) of the sum c of the attaining idempotents, pushed back
through P(y^{1/2}).

With k the total multiplicity of the non-attaining classes, the span
dimension has the closed form k + (d/2) k (k - 1) on a simple algebra
with Peirce constant d (so k(k+1)/2 for real symmetric blocks, k^2 for
complex Hermitian ones, k on the orthant, where the same scores are run
on the coordinate ratios x_i / y_i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import conegeom, ejalg, thompson
from .conegeom import Backend, ConePoint, JordanCone, NotInteriorError, StandardCone
from .ejalg import Element

__all__ = [
    "InternalInvariantError",
    "TIE_TOL",
    "Congruence",
    "reduce_pair",
    "AttainmentReport",
    "attaining_set",
    "MidspanReport",
    "midpoint_span",
    "midspan_dimension",
    "closed_form_dimension",
    "is_singleton",
]

#: relative width of the attainment tie band: a class attains when its
#: score is >= theta * (1 - TIE_TOL)
TIE_TOL = 1e-8

_ZERO_DISTANCE_TOL = 1e-12


class InternalInvariantError(RuntimeError):
    """Two routes that must agree disagreed; the computation is unsound."""


@dataclass(frozen=True)
class Congruence:
    """Cone automorphism pair P(y^{1/2}), P(y^{-1/2}) as matrices."""

    algebra: ejalg.AlgebraDescriptor
    push: np.ndarray
    pull: np.ndarray

    def to_original(self, z: Element) -> Element:
        return Element._fresh(self.algebra, self.push @ z.coords)

    def to_reduced(self, z: Element) -> Element:
        return Element._fresh(self.algebra, self.pull @ z.coords)


def reduce_pair(x: Element, y: Element, backend: JordanCone) -> tuple[Element, Congruence]:
    """Reduced point x~ = P(y^{-1/2}) x and the congruence that undoes it."""
    alg = backend.algebra
    e = ejalg.unit(alg)
    if np.array_equal(y.coords, e.coords):
        ident = np.eye(alg.dim)
        return Element(alg, x.coords), Congruence(alg, ident, ident)
    frame_y = ejalg.jordan_frame(y)
    lam = frame_y.eigenvalues
    if lam[0] <= 0.0:
        raise NotInteriorError("second point is not in the open cone")
    y_half = ejalg.from_frame(frame_y, lam ** 0.5)
    y_inv = ejalg.from_frame(frame_y, 1.0 / lam)
    y_inv_half = ejalg.from_frame(frame_y, lam ** -0.5)
    l_half = ejalg.lmul_matrix(y_half)
    l_inv_half = ejalg.lmul_matrix(y_inv_half)
    push = 2.0 * (l_half @ l_half) - ejalg.lmul_matrix(y)
    pull = 2.0 * (l_inv_half @ l_inv_half) - ejalg.lmul_matrix(y_inv)
    congr = Congruence(alg, push, pull)
    return congr.to_reduced(x), congr


def _score_split(values: np.ndarray, tie_tol: float):
    """Scores, top score, attaining mask and near-tie flag for eigenvalues."""
    scores = np.maximum(values, 1.0 / values)
    theta = float(scores.max())
    mask = scores >= theta * (1.0 - tie_tol)
    near = bool(np.any(~mask & (scores > theta * (1.0 - 10.0 * tie_tol))))
    return scores, theta, mask, near


@dataclass(frozen=True)
class AttainmentReport:
    """Which eigenvalue classes of the reduced point reach the top score.

    ``eigenvalues``/``multiplicities`` list the distinct classes in
    ascending order, ``attaining`` flags each class, ``k`` is the total
    multiplicity left over, ``c`` the sum of the attaining idempotents
    (None on the orthant backend, where ``attaining_coords`` carries the
    attaining coordinate indices instead).  ``near_tie`` warns that some
    non-attaining score came within ten tie widths of the cut, so the
    reported split is numerically fragile.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple[int, ...]
    attaining: tuple[bool, ...]
    k: int
    theta: float
    near_tie: bool
    c: Element | None = None
    attaining_coords: frozenset[int] | None = None


def attaining_set(x_reduced: Element, tie_tol: float = TIE_TOL) -> AttainmentReport:
    """Attainment structure of an interior reduced point.

    Raises ValueError at zero distance (all eigenvalues within
    1e-12 of 1), where no class structure exists.
    """
    sd = ejalg.spectral_decompose(x_reduced)
    lam = sd.eigenvalues
    if lam[0] <= 0.0:
        raise NotInteriorError("reduced point is not in the open cone")
    scores, theta, mask, near = _score_split(lam, tie_tol)
    if theta <= 1.0 + _ZERO_DISTANCE_TOL:
        raise ValueError("zero-distance pair has no attainment structure")
    coords = np.zeros_like(x_reduced.coords)
    k = 0
    for flag, mult, idem in zip(mask, sd.multiplicities, sd.idempotents):
        if flag:
            coords += idem.coords
        else:
            k += mult
    c = Element(x_reduced.algebra, coords)
    return AttainmentReport(
        eigenvalues=lam,
        multiplicities=tuple(sd.multiplicities),
        attaining=tuple(bool(f) for f in mask),
        k=k,
        theta=theta,
        near_tie=near,
        c=c,
    )


def _attaining_standard(x: np.ndarray, y: np.ndarray,
                        tie_tol: float) -> AttainmentReport:
    ratios = x / y
    order = np.argsort(ratios, kind="stable")
    sorted_r = ratios[order]
    threshold = ejalg.GROUP_TOL * float(np.max(np.abs(sorted_r)))
    runs = ejalg.cluster_sorted(sorted_r, threshold)
    values = np.array([sorted_r[lo:hi].mean() for lo, hi in runs])
    mults = tuple(hi - lo for lo, hi in runs)
    scores, theta, mask, near = _score_split(values, tie_tol)
    if theta <= 1.0 + _ZERO_DISTANCE_TOL:
        raise ValueError("zero-distance pair has no attainment structure")
    attaining_coords = []
    k = 0
    for flag, mult, (lo, hi) in zip(mask, mults, runs):
        if flag:
            attaining_coords.extend(int(i) for i in order[lo:hi])
        else:
            k += mult
    return AttainmentReport(
        eigenvalues=values,
        multiplicities=mults,
        attaining=tuple(bool(f) for f in mask),
        k=k,
        theta=theta,
        near_tie=near,
        attaining_coords=frozenset(attaining_coords),
    )


def closed_form_dimension(algebra: ejalg.AlgebraDescriptor, k: int,
                          c: Element | None = None) -> int:
    """Span dimension k + (d/2) k (k-1) from the non-attaining count alone.

    Direct sums need ``c`` to apportion k over the summands (the rank of
    the attaining part of each block is its trace).
    """
    if algebra.kind != ejalg.KIND_SUM:
        d = algebra.peirce_d or 0
        return k + d * k * (k - 1) // 2
    if c is None:
        raise ValueError("direct sums need the attaining idempotent")
    total = 0
    k_check = 0
    for part, c_block in zip(algebra.summands, ejalg.split_blocks(c)):
        tr = ejalg.trace(c_block)
        attain_rank = round(tr)
        if abs(tr - attain_rank) > 1e-6:
            raise InternalInvariantError(
                f"attaining idempotent has non-integral block trace {tr!r}")
        k_b = part.rank - attain_rank
        k_check += k_b
        d = part.peirce_d or 0
        total += k_b + d * k_b * (k_b - 1) // 2
    if k_check != k:
        raise InternalInvariantError(
            f"blockwise non-attaining count {k_check} != spectral count {k}")
    return total


@dataclass(frozen=True)
class MidspanReport:
    """Affine span of the midpoint set: base point, orthonormal basis,
    dimension, attainment structure and the closed-form cross-check."""

    base_point: ConePoint
    basis: tuple[ConePoint, ...]
    dimension: int
    attainment: AttainmentReport | None
    formula_dimension: int | None


def _zero_distance_report(base: ConePoint) -> MidspanReport:
    return MidspanReport(base_point=base, basis=(), dimension=0,
                         attainment=None, formula_dimension=None)


def _midpoint_span_standard(x, y, backend: StandardCone,
                            tie_tol: float) -> MidspanReport:
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if np.any(xv <= 0.0) or np.any(yv <= 0.0):
        raise NotInteriorError("midpoint span needs open-orthant points")
    try:
        att = _attaining_standard(xv, yv, tie_tol)
    except ValueError:
        return _zero_distance_report(np.sqrt(xv * yv))
    directions = tuple(
        i for i in range(backend.n) if i not in att.attaining_coords)
    basis = []
    for i in directions:
        e_i = np.zeros(backend.n)
        e_i[i] = 1.0
        basis.append(e_i)
    base = thompson.canonical_midpoint(xv, yv, backend)
    return MidspanReport(
        base_point=base,
        basis=tuple(basis),
        dimension=len(directions),
        attainment=att,
        formula_dimension=att.k,
    )


def midpoint_span(x, y, backend: Backend, tie_tol: float = TIE_TOL) -> MidspanReport:
    """Base point, orthonormal basis and dimension of the midpoint span.

    The basis lives in original coordinates; on algebra backends it is
    the Peirce zero space of the attaining idempotent pushed through
    P(y^{1/2}) and re-orthonormalised.  A zero-distance pair yields the
    zero-dimensional report with no attainment structure.
    """
    if isinstance(backend, StandardCone):
        return _midpoint_span_standard(x, y, backend, tie_tol)
    x_reduced, congr = reduce_pair(x, y, backend)
    try:
        att = attaining_set(x_reduced, tie_tol)
    except ValueError:
        base = congr.to_original(ejalg.power(x_reduced, 0.5))
        return _zero_distance_report(base)
    unit = ejalg.unit(backend.algebra)
    base = congr.to_original(
        thompson.canonical_midpoint(x_reduced, unit, backend))
    formula = closed_form_dimension(backend.algebra, att.k, att.c)
    if att.k == 0:
        return MidspanReport(base_point=base, basis=(), dimension=0,
                             attainment=att, formula_dimension=formula)
    reduced_basis = ejalg.peirce_zero_basis(att.c)
    pushed = [congr.to_original(b) for b in reduced_basis]
    basis = ejalg.orthonormal_span(pushed)
    if len(basis) != len(reduced_basis):
        raise InternalInvariantError(
            "pushed span basis lost rank; the pair is too ill-conditioned")
    return MidspanReport(
        base_point=base,
        basis=tuple(basis),
        dimension=len(basis),
        attainment=att,
        formula_dimension=formula,
    )


def midspan_dimension(x, y, backend: Backend, tie_tol: float = TIE_TOL) -> int:
    """Midpoint-span dimension, cross-checked against the closed form."""
    report = midpoint_span(x, y, backend, tie_tol)
    if (report.formula_dimension is not None
            and report.formula_dimension != report.dimension):
        raise InternalInvariantError(
            f"span dimension {report.dimension} disagrees with closed form "
            f"{report.formula_dimension}")
    return report.dimension


def is_singleton(x, y, backend: Backend, tie_tol: float = TIE_TOL) -> bool:
    """Cheap test that the midpoint set is a single point (k = 0)."""
    if isinstance(backend, StandardCone):
        xv = np.asarray(x, dtype=float)
        yv = np.asarray(y, dtype=float)
        if np.any(xv <= 0.0) or np.any(yv <= 0.0):
            raise NotInteriorError("singleton test needs open-orthant points")
        values = xv / yv
    else:
        frame_y = ejalg.jordan_frame(y)
        if frame_y.eigenvalues[0] <= 0.0:
            raise NotInteriorError("second point is not in the open cone")
        y_inv_half = ejalg.from_frame(frame_y, frame_y.eigenvalues ** -0.5)
        values = ejalg.eigenvalues_of(ejalg.quad_apply(y_inv_half, x))
        if values[0] <= 0.0:
            raise NotInteriorError("first point is not in the open cone")
    _, theta, mask, _ = _score_split(np.asarray(values, dtype=float), tie_tol)
    if theta <= 1.0 + _ZERO_DISTANCE_TOL:
        return True
    return bool(np.all(mask))
