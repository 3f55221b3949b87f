"""Seeded self-test suites exercising every layer of the package.

Each suite draws its cases from counter-based streams, so a given
(seed, suite, case) triple is reproducible in isolation.  Suites assert
structural identities (Jordan axioms, spectral reconstruction), metric
facts (axioms, quadratic-representation isometry, gauge interpolation
along the canonical geodesic) and the agreement of the midpoint-span
prediction with its closed form and with the independent oracles.

The five heaviest-weight suites are the contractual ones; the rest run
at a fraction of the requested case count to keep the full run fast.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import conegeom, ejalg, midspan, oracle, thompson
from .conegeom import JordanCone, StandardCone
from .ejalg import AlgebraDescriptor, Element
from .oracle import philox_stream

__all__ = [
    "SuiteResult",
    "SUITE_NAMES",
    "run_selftest",
    "format_results",
    "random_algebra",
    "random_element",
    "random_interior",
    "random_frame",
    "spectrum_logs",
    "pair_with_spectrum",
    "expected_dimension_from_logs",
]

_SYM_SIZES = ((1, 0.15), (2, 0.30), (3, 0.25), (4, 0.20), (5, 0.10))
_HERM_SIZES = ((1, 0.20), (2, 0.35), (3, 0.30), (4, 0.15))


def _weighted_choice(gen: np.random.Generator, table) -> int:
    values = [v for v, _ in table]
    probs = np.array([p for _, p in table])
    return int(gen.choice(values, p=probs / probs.sum()))


def random_algebra(gen: np.random.Generator, allow_sum: bool = True,
                   min_rank: int = 1) -> AlgebraDescriptor:
    """Random small algebra descriptor, biased toward cheap sizes."""
    while True:
        roll = gen.uniform()
        if allow_sum and roll < 0.15:
            parts = [random_algebra(gen, allow_sum=False) for _ in range(2)]
            alg = ejalg.direct_sum(*parts)
        elif roll < 0.45:
            alg = ejalg.sym_real(_weighted_choice(gen, _SYM_SIZES))
        elif roll < 0.72:
            alg = ejalg.herm_complex(_weighted_choice(gen, _HERM_SIZES))
        else:
            alg = ejalg.spin_factor(int(gen.integers(2, 9)))
        if alg.rank >= min_rank:
            return alg


def _pick(gen: np.random.Generator, override: AlgebraDescriptor | None,
          allow_sum: bool = True, min_rank: int = 1):
    """The forced backend when one is set (None if it does not qualify),
    otherwise a random draw."""
    if override is not None:
        if override.rank < min_rank:
            return None
        if not allow_sum and override.kind == ejalg.KIND_SUM:
            return None
        return override
    return random_algebra(gen, allow_sum, min_rank)


def random_element(gen: np.random.Generator, alg: AlgebraDescriptor,
                   scale: float = 1.0) -> Element:
    return Element(alg, scale * gen.standard_normal(alg.dim))


def random_frame(gen: np.random.Generator, alg: AlgebraDescriptor):
    """Complete system of primitive idempotents from a random element."""
    return ejalg.jordan_frame(random_element(gen, alg))


def random_interior(gen: np.random.Generator, alg: AlgebraDescriptor,
                    spread: float = 1.5) -> Element:
    """Interior point with log-eigenvalues uniform in [-spread, spread]."""
    frame = random_frame(gen, alg)
    logs = gen.uniform(-spread, spread, alg.rank)
    return ejalg.from_frame(frame, np.exp(logs))


def spectrum_logs(gen: np.random.Generator, rank: int,
                  min_sep: float = 1e-3, spread: float = 1.5,
                  tie_prob: float = 0.35) -> np.ndarray:
    """Log-eigenvalues whose scores |log| are tie-free at min_sep.

    Ties are still produced — exactly, by duplicating a log or negating
    the extreme one — with probability tie_prob, so attainment classes
    of every multiplicity appear while near-ties never do.
    """
    for _ in range(200):
        logs = gen.uniform(-spread, spread, rank)
        if rank >= 2 and gen.uniform() < tie_prob:
            i = int(np.argmax(np.abs(logs)))
            j = (i + 1) % rank
            logs[j] = -logs[i] if gen.uniform() < 0.5 else logs[i]
        scores = np.sort(np.abs(logs))
        gaps_ok = all(d <= 1e-12 or d >= min_sep for d in np.diff(scores))
        if gaps_ok and scores[-1] >= 0.1:
            return logs
    base = np.linspace(0.2, spread, rank)
    signs = np.where(gen.uniform(size=rank) < 0.5, -1.0, 1.0)
    return base * signs


def pair_with_spectrum(gen: np.random.Generator, alg: AlgebraDescriptor,
                       logs: np.ndarray) -> tuple[Element, Element]:
    """Interior pair (x, y) whose reduced point has spectrum exp(logs)."""
    y = random_interior(gen, alg)
    frame_y = ejalg.jordan_frame(y)
    y_half = ejalg.from_frame(frame_y, frame_y.eigenvalues ** 0.5)
    reduced = ejalg.from_frame(random_frame(gen, alg), np.exp(logs))
    return ejalg.quad_apply(y_half, reduced), y


def expected_dimension_from_logs(alg: AlgebraDescriptor,
                                 logs: np.ndarray) -> int:
    """Closed-form span dimension straight from the drawn spectrum."""
    scores = np.abs(np.asarray(logs, dtype=float))
    top = scores.max()
    k = int(np.sum(scores < top * (1.0 - 1e-6))) if top > 0 else 0
    d = alg.peirce_d or 0
    return k + d * k * (k - 1) // 2


# --- individual suites ------------------------------------------------

def _tol(*scales: float) -> float:
    s = 1.0
    for v in scales:
        s = max(s, abs(v))
    return 1e-9 * s


def _suite_jordan_axioms(gen, override=None):
    alg = _pick(gen, override)
    a = random_element(gen, alg)
    b = random_element(gen, alg)
    c = random_element(gen, alg)
    e = ejalg.unit(alg)
    ab = ejalg.jordan_product(a, b)
    ba = ejalg.jordan_product(b, a)
    assert (ab - ba).norm() <= _tol(a.norm() * b.norm()), "not commutative"
    assert (ejalg.jordan_product(e, a) - a).norm() <= _tol(a.norm()), \
        "unit fails"
    a2 = ejalg.jordan_product(a, a)
    lhs = ejalg.jordan_product(a2, ejalg.jordan_product(a, b))
    rhs = ejalg.jordan_product(a, ejalg.jordan_product(a2, b))
    scale = (1.0 + a.norm()) ** 3 * (1.0 + b.norm())
    assert (lhs - rhs).norm() <= 1e-8 * scale, "Jordan identity fails"
    sym_lhs = ejalg.inner(ab, c)
    sym_rhs = ejalg.inner(b, ejalg.jordan_product(a, c))
    assert abs(sym_lhs - sym_rhs) <= 1e-8 * scale * (1.0 + c.norm()), \
        "trace form is not associative"


def _suite_orthogonality(gen, override=None):
    alg = _pick(gen, override, min_rank=2)
    if alg is None:
        return
    frame = random_frame(gen, alg)
    r = alg.rank
    mask = gen.uniform(size=r) < 0.5
    if mask.all() or not mask.any():
        mask[0] = True
        mask[-1] = False
    coeff = np.exp(gen.uniform(-1.0, 1.0, r))
    a = ejalg.from_frame(frame, np.where(mask, coeff, 0.0))
    b = ejalg.from_frame(frame, np.where(mask, 0.0, coeff))
    scale = max(1.0, a.norm() * b.norm())
    assert abs(ejalg.inner(a, b)) <= 1e-8 * scale, \
        "disjoint spectral parts are not inner-orthogonal"
    assert ejalg.jordan_product(a, b).norm() <= 1e-7 * scale, \
        "inner-orthogonal cone elements do not multiply to zero"
    u = random_interior(gen, alg)
    v = random_interior(gen, alg)
    assert ejalg.inner(u, v) > 0.0, "interior pairing is not positive"


def _suite_quad_isometry(gen, override=None):
    alg = _pick(gen, override)
    cone = JordanCone(alg)
    x = random_interior(gen, alg)
    a = random_interior(gen, alg)
    b = random_interior(gen, alg)
    a2 = ejalg.quad_apply(x, a)
    b2 = ejalg.quad_apply(x, b)
    d0 = thompson.distance(a, b, cone)
    d1 = thompson.distance(a2, b2, cone)
    assert abs(d0 - d1) <= 1e-7 * (1.0 + d0), \
        f"quadratic map moved Thompson distance: {d0} -> {d1}"
    s0 = thompson.delta2(a, b, cone)
    s1 = thompson.delta2(a2, b2, cone)
    assert abs(s0 - s1) <= 1e-7 * (1.0 + s0), \
        f"quadratic map moved the l2 log metric: {s0} -> {s1}"


def _suite_norm_monotone(gen, override=None):
    alg = _pick(gen, override)
    za = random_element(gen, alg)
    zc = random_element(gen, alg)
    a = ejalg.jordan_product(za, za)
    c = ejalg.jordan_product(zc, zc)
    cone_norm = conegeom.order_unit_norm
    backend = JordanCone(alg)
    na = cone_norm(a, backend)
    nc = cone_norm(c, backend)
    ns = cone_norm(a + c, backend)
    slack = 1e-9 * max(1.0, na, nc)
    assert ns >= na - slack and ns >= nc - slack, \
        "order-unit norm is not monotone on the cone"


def _suite_metric_axioms(gen, override=None):
    alg = _pick(gen, override)
    cone = JordanCone(alg)
    x = random_interior(gen, alg)
    y = random_interior(gen, alg)
    z = random_interior(gen, alg)
    dxy = thompson.distance(x, y, cone)
    dyx = thompson.distance(y, x, cone)
    assert abs(dxy - dyx) <= 1e-8 * (1.0 + dxy), "not symmetric"
    assert thompson.distance(x, x, cone) <= 1e-10, "diagonal not zero"
    dxz = thompson.distance(x, z, cone)
    dzy = thompson.distance(z, y, cone)
    assert dxy <= dxz + dzy + 1e-8 * (1.0 + dxy), "triangle fails"
    if (x - y).norm() > 1e-5 * max(1.0, x.norm(), y.norm()):
        assert dxy > 0.0, "distinct points at zero distance"


def _suite_spectral_reconstruction(gen, override=None):
    alg = _pick(gen, override)
    v = random_element(gen, alg)
    frame = ejalg.jordan_frame(v)
    e = ejalg.unit(alg)
    total = sum(frame.primitives[1:], frame.primitives[0])
    assert (total - e).norm() <= 1e-7, "frame does not resolve the unit"
    for p in frame.primitives:
        assert (ejalg.jordan_product(p, p) - p).norm() <= 1e-7, \
            "primitive is not idempotent"
        assert abs(ejalg.trace(p) - 1.0) <= 1e-7, "primitive has trace != 1"
    for i, p in enumerate(frame.primitives):
        for q in frame.primitives[i + 1:]:
            assert abs(ejalg.inner(p, q)) <= 1e-7, "frame is not orthogonal"
    rebuilt = ejalg.from_frame(frame, frame.eigenvalues)
    assert (rebuilt - v).norm() <= 1e-7 * (1.0 + v.norm()), \
        "spectral reconstruction drifted"


def _geodesic_backend(gen, override=None):
    if override is None and gen.uniform() < 0.3:
        n = int(gen.integers(2, 6))
        backend = StandardCone(n)
        x = np.exp(gen.uniform(-1.5, 1.5, n))
        y = np.exp(gen.uniform(-1.5, 1.5, n))
        return backend, x, y
    alg = _pick(gen, override, min_rank=2)
    if alg is None:
        return None, None, None
    return JordanCone(alg), random_interior(gen, alg), random_interior(gen, alg)


def _suite_gauge_interpolation(gen, override=None):
    backend, x, y = _geodesic_backend(gen, override)
    if backend is None:
        return
    d = thompson.distance(x, y, backend)
    if d < 1e-3:
        return
    m = thompson.canonical_midpoint(x, y, backend)
    m_xy = conegeom.m_ratio(x, y, backend)
    m_yx = conegeom.m_ratio(y, x, backend)
    # both half-segment gauges square to the full-segment gauge
    for g in (conegeom.m_ratio(m, y, backend),
              conegeom.m_ratio(x, m, backend)):
        assert abs(g * g - m_xy) <= 1e-8 * m_xy, \
            f"gauge square drifted: {g}^2 vs {m_xy}"
    for g in (conegeom.m_ratio(y, m, backend),
              conegeom.m_ratio(m, x, backend)):
        assert abs(g * g - m_yx) <= 1e-8 * m_yx, \
            f"reverse gauge square drifted: {g}^2 vs {m_yx}"
    half = 0.5 * d
    assert abs(thompson.distance(x, m, backend) - half) <= 1e-8 * (1 + d)
    assert abs(thompson.distance(m, y, backend) - half) <= 1e-8 * (1 + d)


def _suite_chart_isometry(gen, override=None):
    backend, x, y = _geodesic_backend(gen, override)
    if backend is None:
        return
    if conegeom.proportional_factor(x, y, backend) is not None:
        return
    d = thompson.distance(x, y, backend)
    if d < 1e-3:
        return
    chart = conegeom.two_dim_chart(x, y, backend)
    a1, b1 = chart.x_coords
    a2, b2 = chart.y_coords
    d_plane = max(abs(math.log(a1 / a2)), abs(math.log(b1 / b2)))
    assert abs(d_plane - d) <= 1e-7 * (1.0 + d), \
        f"chart distance {d_plane} vs cone distance {d}"
    t = gen.uniform(0.1, 0.9)
    z = thompson.canonical_geodesic(x, y, t, backend)
    az, bz = conegeom.chart_coords(chart, z, backend)
    assert abs(az - a1 ** (1 - t) * a2 ** t) <= 1e-7 * max(1.0, az)
    assert abs(bz - b1 ** (1 - t) * b2 ** t) <= 1e-7 * max(1.0, bz)
    dt = thompson.distance(x, z, backend)
    assert abs(dt - t * d) <= 1e-7 * (1.0 + d), "geodesic is not unit speed"


def _suite_boundary_meet(gen, override=None):
    backend, x, y = _geodesic_backend(gen, override)
    if backend is None:
        return
    if conegeom.m_ratio(x, y, backend) <= 1.01:
        return
    b = conegeom.boundary_point(x, y, backend)
    if isinstance(backend, StandardCone):
        low = float(np.min(b))
        scale = float(np.max(np.abs(b)))
    else:
        lam = ejalg.eigenvalues_of(b)
        low = float(lam[0])
        scale = float(np.max(np.abs(lam)))
    assert abs(low) <= 1e-7 * max(1.0, scale), \
        f"meet point has minimal eigenvalue {low}"


def _suite_peirce_dimension(gen, override=None):
    alg = _pick(gen, override, allow_sum=False, min_rank=2)
    if alg is None:
        return
    r = alg.rank
    frame = random_frame(gen, alg)
    j = int(gen.integers(1, r))
    chosen = gen.permutation(r)[:j]
    values = np.zeros(r)
    values[chosen] = 1.0
    c = ejalg.from_frame(frame, values)
    basis = ejalg.peirce_zero_basis(c)
    k = r - j
    d = alg.peirce_d or 0
    expected = k + d * k * (k - 1) // 2
    assert len(basis) == expected, \
        f"Peirce zero space has dimension {len(basis)}, expected {expected}"


def _suite_span_closed_form(gen, override=None):
    alg = _pick(gen, override, min_rank=2)
    if alg is None:
        return
    logs = spectrum_logs(gen, alg.rank)
    x, y = pair_with_spectrum(gen, alg, logs)
    cone = JordanCone(alg)
    dim = midspan.midspan_dimension(x, y, cone)
    if alg.kind != ejalg.KIND_SUM:
        expected = expected_dimension_from_logs(alg, logs)
        assert dim == expected, \
            f"span dimension {dim} but spectrum demands {expected}"


def _suite_standard_brute_force(gen, override=None):
    if override is not None:
        return
    n = int(gen.integers(2, 4))
    backend = StandardCone(n)
    x = gen.integers(1, 7, n).astype(float)
    y = gen.integers(1, 7, n).astype(float)
    predicted = midspan.midspan_dimension(x, y, backend)
    brute = oracle.brute_force_standard(x, y, grid_points_per_axis=21)
    assert brute.dimension == predicted, \
        f"grid found dimension {brute.dimension}, predicted {predicted}"


def _suite_oracle_agreement(gen, override=None):
    if override is not None:
        if override.rank < 2 or override.kind == ejalg.KIND_SUM:
            return
        alg = override
    else:
        roll = gen.uniform()
        if roll < 0.4:
            alg = ejalg.sym_real(int(gen.integers(2, 5)))
        elif roll < 0.7:
            alg = ejalg.herm_complex(int(gen.integers(2, 4)))
        else:
            alg = ejalg.spin_factor(int(gen.integers(2, 6)))
    logs = spectrum_logs(gen, alg.rank, min_sep=1e-2)
    x, y = pair_with_spectrum(gen, alg, logs)
    cone = JordanCone(alg)
    vr = oracle.run_verification(x, y, cone, n_samples=90,
                                 seed=int(gen.integers(0, 2 ** 31)))
    assert vr.positive.ok, "a reported span direction failed verification"
    assert vr.negative.ok, "a complement direction admitted midpoints"
    if vr.sample_conclusive:
        assert vr.estimated_dimension == vr.predicted_dimension, \
            (f"sampled dimension {vr.estimated_dimension} vs "
             f"predicted {vr.predicted_dimension}")


#: (name, weight, callable); weight scales the requested case count
_SUITES = (
    ("jordan-axioms", 1.0, _suite_jordan_axioms),
    ("orthogonality-equivalence", 1.0, _suite_orthogonality),
    ("quad-isometry", 1.0, _suite_quad_isometry),
    ("norm-monotonicity", 1.0, _suite_norm_monotone),
    ("metric-axioms", 1.0, _suite_metric_axioms),
    ("spectral-reconstruction", 0.4, _suite_spectral_reconstruction),
    ("gauge-interpolation", 0.4, _suite_gauge_interpolation),
    ("chart-isometry", 0.3, _suite_chart_isometry),
    ("boundary-meet", 0.3, _suite_boundary_meet),
    ("peirce-dimension", 0.3, _suite_peirce_dimension),
    ("span-closed-form", 0.25, _suite_span_closed_form),
    ("standard-brute-force", 0.05, _suite_standard_brute_force),
    ("oracle-agreement", 0.03, _suite_oracle_agreement),
)

SUITE_NAMES = tuple(name for name, _, _ in _SUITES)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    failures: int
    seconds: float
    first_failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0


def run_selftest(seed: int = 0, cases: int = 1000,
                 suites: tuple[str, ...] | None = None,
                 backend: AlgebraDescriptor | None = None) -> list[SuiteResult]:
    """Run the seeded suites; `cases` sets the full-weight case count.

    A `backend` descriptor pins every algebra draw to that backend;
    suites it cannot exercise (wrong rank, orthant-only) pass vacuously.
    """
    selected = _SUITES if suites is None else tuple(
        s for s in _SUITES if s[0] in set(suites))
    if suites is not None and len(selected) != len(set(suites)):
        known = {s[0] for s in _SUITES}
        bad = sorted(set(suites) - known)
        raise ValueError(f"unknown suites: {', '.join(bad)}")
    results = []
    for suite_idx, (name, weight, fn) in enumerate(selected):
        n = max(1, int(round(cases * weight)))
        failures = 0
        first = None
        t0 = time.perf_counter()
        for case in range(n):
            gen = philox_stream(seed, suite_idx * 1_000_003 + case + 1)
            try:
                fn(gen, backend)
            except Exception as exc:  # count, keep going
                failures += 1
                if first is None:
                    first = f"case {case}: {type(exc).__name__}: {exc}"
        results.append(SuiteResult(
            name=name, cases=n, failures=failures,
            seconds=time.perf_counter() - t0, first_failure=first))
    return results


def format_results(results: list[SuiteResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "ok" if r.ok else f"FAIL ({r.failures}/{r.cases})"
        lines.append(f"{r.name:<{width}}  {r.cases:>5} cases  "
                     f"{r.seconds:7.2f}s  {status}")
        if r.first_failure:
            lines.append(f"{'':<{width}}  first failure: {r.first_failure}")
    total = sum(r.cases for r in results)
    bad = sum(r.failures for r in results)
    secs = sum(r.seconds for r in results)
    verdict = "all suites passed" if bad == 0 else f"{bad} failures"
    lines.append(f"{total} cases in {secs:.1f}s — {verdict}")
    return "\n".join(lines)
