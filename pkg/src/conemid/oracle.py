"""Independent checks of a predicted midpoint span.

Everything here judges a :class:`~conemid.midspan.MidspanReport` using
only the metric predicate "is z a Thompson midpoint of (x, y)?" — no
Peirce machinery — so agreement between this module and
:mod:`.midspan` is evidence, not circularity.

Three instruments:

* perturbation checks — walk from the base point along each reported
  span direction (small steps must stay midpoints) and along an
  orthonormal basis of the complementary subspace (steps must fail);
* a rejection sampler over the reported span (plus an ambient fallback
  when the prediction is a single point), whose accepted cloud gets an
  SVD rank estimate that can only under-estimate the true dimension;
* an exhaustive orthant grid over the exact midpoint box, feasible in
  low dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ejalg, midspan, thompson
from .conegeom import Backend, ConePoint, JordanCone, StandardCone
from .ejalg import Element
from .midspan import MidspanReport
from .thompson import MidpointTester

__all__ = [
    "EpsilonFloorError",
    "philox_stream",
    "suggested_epsilon",
    "DirectionCheck",
    "PositiveResult",
    "verify_span_positive",
    "NegativeResult",
    "verify_span_negative",
    "SampleDetail",
    "sample_detail",
    "sample_midpoints",
    "affine_rank",
    "BruteForceResult",
    "brute_force_standard",
    "VerificationReport",
    "run_verification",
    "EPSILON_FLOOR",
    "RANK_THRESHOLD",
]

#: smallest admissible perturbation step
EPSILON_FLOOR = 1e-6

#: relative singular-value cutoff for rank estimates
RANK_THRESHOLD = 1e-6


class EpsilonFloorError(RuntimeError):
    """No admissible perturbation step exists above the floor."""


def philox_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; distinct streams never overlap."""
    bitgen = np.random.Philox(key=seed)
    if stream:
        bitgen = bitgen.jumped(stream)
    return np.random.Generator(bitgen)


def _coords_of(z, backend: Backend) -> np.ndarray:
    if isinstance(backend, StandardCone):
        return np.asarray(z, dtype=float)
    return np.asarray(z.coords)


def _from_coords(coords: np.ndarray, backend: Backend):
    if isinstance(backend, StandardCone):
        return coords
    return Element._fresh(backend.algebra, coords)


def suggested_epsilon(report: MidspanReport) -> float:
    """Step size from the attainment gap: min(1e-2, gap/10).

    The gap is the log-score margin between the attaining classes and
    the runner-up; it bounds how far the midpoint set extends from the
    base along span directions.  Pairs with no runner-up get the cap.
    """
    att = report.attainment
    if att is None or att.k == 0:
        return 1e-2
    lam = np.asarray(att.eigenvalues, dtype=float)
    scores = np.maximum(lam, 1.0 / lam)
    non_attaining = [s for s, flag in zip(scores, att.attaining) if not flag]
    if not non_attaining:
        return 1e-2
    gap = math.log(att.theta) - math.log(max(non_attaining))
    eps = min(1e-2, gap / 10.0)
    if eps < EPSILON_FLOOR:
        raise EpsilonFloorError(
            f"attainment gap {gap:.3g} leaves no admissible step above "
            f"{EPSILON_FLOOR:g}; the pair sits on a tie")
    return eps


@dataclass(frozen=True)
class DirectionCheck:
    index: int
    epsilon: float
    passed: bool


@dataclass(frozen=True)
class PositiveResult:
    ok: bool
    base_ok: bool
    epsilon_start: float
    checks: tuple[DirectionCheck, ...]


def verify_span_positive(report: MidspanReport, x, y, backend: Backend,
                         eps: float | None = None,
                         tol: float | None = None) -> PositiveResult:
    """Check that small steps along every reported direction stay midpoints.

    Each direction gets its own step search: starting from ``eps``
    (default :func:`suggested_epsilon`), the step halves while either
    signed neighbour fails the midpoint predicate — steps can overshoot
    the midpoint set or the cone without the direction being wrong —
    and the direction fails only when no step above the floor works.
    """
    eps0 = suggested_epsilon(report) if eps is None else eps
    tester = MidpointTester(x, y, backend, tol)
    base_ok = tester(report.base_point)
    checks = []
    for idx, g in enumerate(report.basis):
        step = eps0
        passed = False
        while step >= EPSILON_FLOOR:
            if tester(report.base_point + g * step) and \
               tester(report.base_point + g * (-step)):
                passed = True
                break
            step *= 0.5
        checks.append(DirectionCheck(index=idx, epsilon=step, passed=passed))
    ok = base_ok and all(c.passed for c in checks)
    return PositiveResult(ok=ok, base_ok=base_ok, epsilon_start=eps0,
                          checks=tuple(checks))


@dataclass(frozen=True)
class NegativeResult:
    ok: bool
    epsilon: float
    checks: tuple[DirectionCheck, ...]


def _complement_basis(report: MidspanReport, backend: Backend) -> np.ndarray:
    """Orthonormal basis (columns) of the coordinate complement of the span."""
    dim = backend.dim
    if not report.basis:
        return np.eye(dim)
    b = np.column_stack([_coords_of(g, backend) for g in report.basis])
    u, _, _ = np.linalg.svd(b, full_matrices=True)
    return u[:, b.shape[1]:]


def verify_span_negative(report: MidspanReport, x, y, backend: Backend,
                         eps: float | None = None,
                         tol: float | None = None) -> NegativeResult:
    """Check that no complement direction admits nearby midpoints.

    For each direction of an orthonormal complement of the reported
    span, all four probes base +- eps g and base +- (eps/2) g must fail
    the midpoint predicate.  The step is fixed — never shrunk — because
    complement deviations can be second order in the step and would
    vanish below the predicate tolerance for tiny steps.
    """
    eps0 = suggested_epsilon(report) if eps is None else eps
    tester = MidpointTester(x, y, backend, tol)
    comp = _complement_basis(report, backend)
    checks = []
    for idx in range(comp.shape[1]):
        g = _from_coords(comp[:, idx], backend)
        hit = any(
            tester(report.base_point + g * s)
            for s in (eps0, -eps0, 0.5 * eps0, -0.5 * eps0)
        )
        checks.append(DirectionCheck(index=idx, epsilon=eps0, passed=not hit))
    return NegativeResult(ok=all(c.passed for c in checks), epsilon=eps0,
                          checks=tuple(checks))


def affine_rank(points: np.ndarray, threshold: float = RANK_THRESHOLD) -> int:
    """Affine rank of a set of row points via SVD of centred differences."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        return 0
    diffs = pts - pts.mean(axis=0)
    sigma = np.linalg.svd(diffs, compute_uv=False)
    if sigma.size == 0 or sigma[0] <= 0.0:
        return 0
    return int(np.sum(sigma > threshold * sigma[0]))


@dataclass(frozen=True)
class SampleDetail:
    """Everything the rejection sampler saw.

    ``coefficients`` has one row per drawn point (the base first, as all
    zeros) giving its coordinates over the span directions; ``flags``
    marks acceptance.  A trivial span admits no proposals, so a
    predicted singleton yields the base row alone.
    """

    base: ConePoint
    span_dimension: int
    coefficients: np.ndarray
    flags: np.ndarray
    accepted_points: tuple
    estimated_dimension: int
    radius: float
    seed: int

    @property
    def accepted_count(self) -> int:
        return int(self.flags.sum())


def sample_detail(x, y, backend: Backend, n_samples: int,
                  radius: float = 1e-2, seed: int = 0,
                  tol: float | None = None,
                  report: MidspanReport | None = None) -> SampleDetail:
    """Rejection-sample the midpoint set around the predicted base point.

    Proposals are uniform over the ball of the given radius inside the
    reported span; every proposal is accepted or rejected by the metric
    predicate alone.  The SVD rank of the accepted cloud can only
    under-estimate the true span dimension, and over-prediction shows up
    as acceptance collapsing onto a lower-dimensional subset.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample for the base point")
    if report is None:
        report = midspan.midpoint_span(x, y, backend)
    base_coords = _coords_of(report.base_point, backend)
    p = len(report.basis)
    tester = MidpointTester(x, y, backend, tol)
    rows = n_samples if p > 0 else 1
    coeffs = np.zeros((rows, p))
    flags = np.zeros(rows, dtype=bool)
    flags[0] = tester(report.base_point)
    accepted = [report.base_point] if flags[0] else []
    if p > 0:
        dirs = np.column_stack([_coords_of(g, backend) for g in report.basis])
        for i in range(1, n_samples):
            gen = philox_stream(seed, i)
            direction = gen.standard_normal(p)
            nrm = float(np.linalg.norm(direction))
            if nrm == 0.0:
                continue
            r = radius * gen.uniform() ** (1.0 / p)
            c = direction * (r / nrm)
            coeffs[i] = c
            z = _from_coords(base_coords + dirs @ c, backend)
            if tester(z):
                flags[i] = True
                accepted.append(z)
    pts = np.array([_coords_of(z, backend) for z in accepted]) \
        if accepted else np.zeros((0, backend.dim))
    return SampleDetail(
        base=report.base_point,
        span_dimension=p,
        coefficients=coeffs,
        flags=flags,
        accepted_points=tuple(accepted),
        estimated_dimension=affine_rank(pts),
        radius=radius,
        seed=seed,
    )


def sample_midpoints(x, y, backend: Backend, n_samples: int,
                     radius: float = 1e-2, seed: int = 0,
                     tol: float | None = None):
    """Accepted midpoints and the rank estimate of their affine span."""
    detail = sample_detail(x, y, backend, n_samples, radius, seed, tol)
    return list(detail.accepted_points), detail.estimated_dimension


@dataclass(frozen=True)
class BruteForceResult:
    dimension: int
    accepted: int
    total: int
    box_lo: np.ndarray
    box_hi: np.ndarray


def brute_force_standard(x, y, grid_points_per_axis: int = 21,
                         tol: float | None = None) -> BruteForceResult:
    """Exhaustive orthant check: grid the midpoint box and test every node.

    The midpoint set on the orthant is the product of the intervals
    [max(x_i, y_i) e^{-d/2}, min(x_i, y_i) e^{d/2}]; the grid covers a
    10%-enlarged box so points just outside are seen to fail, and the
    dimension is the affine rank of the accepted nodes.  Kept honest by
    never consulting the span prediction.  Needs an odd grid so the box
    centre is a node; practical only for a handful of axes.
    """
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValueError("endpoints must be vectors of equal length")
    n = xv.size
    g = grid_points_per_axis
    if g % 2 == 0:
        raise ValueError("grid_points_per_axis must be odd so the box "
                         "centre lies on the grid")
    if g ** n > 500_000:
        raise ValueError(f"grid of {g}^{n} nodes is too large; "
                         "shrink the grid or the dimension")
    if np.any(xv <= 0.0) or np.any(yv <= 0.0):
        raise ValueError("endpoints must lie in the open orthant")
    log_ratio = np.log(xv) - np.log(yv)
    d = float(np.max(np.abs(log_ratio)))
    rho = 0.5 * d
    lo = np.maximum(xv, yv) * math.exp(-rho)
    hi = np.minimum(xv, yv) * math.exp(rho)
    width = np.maximum(hi - lo, 0.0)
    margin = 0.1 * np.maximum(width, 0.01 * np.maximum(xv, yv))
    grid_lo = np.maximum(lo - margin, 0.5 * lo)
    grid_hi = hi + margin
    axes = [np.linspace(grid_lo[i], grid_hi[i], g) for i in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=1)
    if tol is None:
        tol = thompson.midpoint_tolerance(d)
    log_nodes = np.log(nodes)
    dxz = np.max(np.abs(log_nodes - np.log(xv)), axis=1)
    dzy = np.max(np.abs(log_nodes - np.log(yv)), axis=1)
    mask = (np.abs(dxz - rho) <= tol) & (np.abs(dzy - rho) <= tol)
    accepted = nodes[mask]
    return BruteForceResult(
        dimension=affine_rank(accepted),
        accepted=int(mask.sum()),
        total=nodes.shape[0],
        box_lo=lo,
        box_hi=hi,
    )


@dataclass(frozen=True)
class VerificationReport:
    """Combined verdict of all oracles against one span prediction."""

    predicted_dimension: int
    formula_dimension: int | None
    positive: PositiveResult
    negative: NegativeResult
    sample: SampleDetail
    estimated_dimension: int
    accepted_count: int
    sample_conclusive: bool
    ok: bool
    tolerances: dict = field(default_factory=dict)


def run_verification(x, y, backend: Backend, n_samples: int = 120,
                     radius: float = 1e-2, seed: int = 0,
                     tol: float | None = None,
                     tie_tol: float = midspan.TIE_TOL,
                     report: MidspanReport | None = None) -> VerificationReport:
    """Run every oracle against the span prediction for one pair.

    ``ok`` requires the positive and negative perturbation checks to
    pass and, when at least 50 samples were accepted (enough for a
    meaningful rank), the sampled dimension to equal the predicted one.
    """
    if report is None:
        report = midspan.midpoint_span(x, y, backend, tie_tol)
    pos = verify_span_positive(report, x, y, backend, tol=tol)
    neg = verify_span_negative(report, x, y, backend, tol=tol)
    det = sample_detail(x, y, backend, n_samples, radius, seed, tol,
                        report=report)
    conclusive = det.accepted_count >= 50
    sample_ok = (not conclusive) or det.estimated_dimension == report.dimension
    d = thompson.distance(x, y, backend)
    tolerances = {
        "midpoint": thompson.midpoint_tolerance(d) if tol is None else tol,
        "tie": tie_tol,
        "rank": RANK_THRESHOLD,
        "epsilon_floor": EPSILON_FLOOR,
    }
    return VerificationReport(
        predicted_dimension=report.dimension,
        formula_dimension=report.formula_dimension,
        positive=pos,
        negative=neg,
        sample=det,
        estimated_dimension=det.estimated_dimension,
        accepted_count=det.accepted_count,
        sample_conclusive=conclusive,
        ok=pos.ok and neg.ok and sample_ok,
        tolerances=tolerances,
    )
