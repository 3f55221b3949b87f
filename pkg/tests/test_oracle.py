import dataclasses
import math

import numpy as np
import pytest

from conemid import ejalg, midspan, oracle
from conemid.conegeom import JordanCone, StandardCone

SYM3 = JordanCone(ejalg.sym_real(3))


def diag(*vals):
    return ejalg.from_diag(SYM3.algebra, list(vals))


def rand_interior(gen, alg, spread=1.5):
    frame = ejalg.jordan_frame(ejalg.Element(alg, gen.standard_normal(alg.dim)))
    return ejalg.from_frame(frame, np.exp(gen.uniform(-spread, spread, alg.rank)))


def test_philox_stream_determinism():
    a = oracle.philox_stream(7, 3).standard_normal(5)
    b = oracle.philox_stream(7, 3).standard_normal(5)
    c = oracle.philox_stream(7, 4).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_suggested_epsilon_gap_rule():
    rep = midspan.midpoint_span(diag(4, 2, 1), SYM3.unit(), SYM3)
    # gap log 2 is wide, so the 1e-2 cap wins
    assert oracle.suggested_epsilon(rep) == 1e-2
    # runner-up score 4 e^{-0.05}: gap 0.05, step gap/10
    tight = midspan.midpoint_span(diag(4, 4 * math.exp(-0.05), 0.25),
                                  SYM3.unit(), SYM3)
    assert oracle.suggested_epsilon(tight) == pytest.approx(0.005)


def test_suggested_epsilon_cap_and_floor():
    singleton = midspan.midpoint_span(diag(4, 4, 0.25), SYM3.unit(), SYM3)
    assert oracle.suggested_epsilon(singleton) == 1e-2

    # runner-up within a hair of theta: no admissible step
    tight = midspan.midpoint_span(diag(4, 4 * (1 - 1e-7), 0.25),
                                  SYM3.unit(), SYM3)
    with pytest.raises(oracle.EpsilonFloorError):
        oracle.suggested_epsilon(tight)


def test_positive_oracle_worked_example():
    x, y = diag(4, 2, 1), SYM3.unit()
    rep = midspan.midpoint_span(x, y, SYM3)
    res = oracle.verify_span_positive(rep, x, y, SYM3)
    assert res.ok and res.base_ok
    assert len(res.checks) == 3
    assert all(c.passed for c in res.checks)


def test_negative_oracle_worked_example():
    x, y = diag(4, 2, 1), SYM3.unit()
    rep = midspan.midpoint_span(x, y, SYM3)
    res = oracle.verify_span_negative(rep, x, y, SYM3)
    assert res.ok
    assert len(res.checks) == SYM3.dim - rep.dimension


def test_positive_oracle_rejects_tilted_basis():
    # tilt one claimed direction 45 degrees toward the (1,1) coordinate:
    # steps along it change both distances at first order, so no step
    # above the floor is ever accepted
    x, y = diag(4, 2, 1), SYM3.unit()
    rep = midspan.midpoint_span(x, y, SYM3)
    comp = ejalg.Element(SYM3.algebra, np.eye(SYM3.dim)[:, 0])
    tilted = (rep.basis[0] + comp) * (1.0 / math.sqrt(2.0))
    bad = dataclasses.replace(rep, basis=(tilted,) + rep.basis[1:])
    res = oracle.verify_span_positive(bad, x, y, SYM3)
    assert not res.ok
    assert res.base_ok
    assert not res.checks[0].passed


def test_negative_oracle_rejects_deflated_span():
    # drop a genuine direction: the negative oracle must find midpoints
    # along the missing complement direction
    x, y = diag(4, 2, 1), SYM3.unit()
    rep = midspan.midpoint_span(x, y, SYM3)
    deflated = dataclasses.replace(
        rep, basis=rep.basis[:-1], dimension=rep.dimension - 1)
    res = oracle.verify_span_negative(deflated, x, y, SYM3)
    assert not res.ok


def test_sampler_determinism():
    x, y = diag(4, 2, 1), SYM3.unit()
    a = oracle.sample_detail(x, y, SYM3, 60, seed=5)
    b = oracle.sample_detail(x, y, SYM3, 60, seed=5)
    assert np.array_equal(a.coefficients, b.coefficients)
    assert np.array_equal(a.flags, b.flags)
    c = oracle.sample_detail(x, y, SYM3, 60, seed=6)
    assert not np.array_equal(a.coefficients, c.coefficients)


def test_sampler_base_row_and_flags():
    x, y = diag(4, 2, 1), SYM3.unit()
    det = oracle.sample_detail(x, y, SYM3, 80, seed=1)
    assert det.coefficients.shape == (80, 3)
    assert np.array_equal(det.coefficients[0], np.zeros(3))
    assert det.flags[0]
    assert det.accepted_count >= 50
    assert det.estimated_dimension == 3


def test_sampler_singleton_gives_base_only():
    x, y = diag(4, 4, 0.25), SYM3.unit()
    det = oracle.sample_detail(x, y, SYM3, 100, seed=2)
    assert det.span_dimension == 0
    assert det.coefficients.shape[0] == 1
    assert det.accepted_count == 1
    assert det.estimated_dimension == 0


def test_sample_midpoints_standard():
    backend = StandardCone(3)
    pts, est = oracle.sample_midpoints(
        np.array([4.0, 2.0, 1.0]), np.ones(3), backend, 150, seed=3)
    assert est == 2
    assert len(pts) >= 50


def test_affine_rank():
    gen = oracle.philox_stream(0)
    flat = np.column_stack([gen.standard_normal(40),
                            gen.standard_normal(40),
                            np.zeros(40)])
    assert oracle.affine_rank(flat) == 2
    assert oracle.affine_rank(flat + 7.0) == 2  # affine, not linear
    assert oracle.affine_rank(np.ones((10, 4))) == 0
    assert oracle.affine_rank(np.ones((1, 4))) == 0


def test_brute_force_worked_examples():
    res = oracle.brute_force_standard(np.array([4.0, 2.0, 1.0]), np.ones(3),
                                      grid_points_per_axis=13)
    assert res.dimension == 2
    assert res.accepted >= 1
    singleton = oracle.brute_force_standard(np.array([4.0, 0.25]), np.ones(2),
                                            grid_points_per_axis=13)
    assert singleton.dimension == 0
    assert singleton.accepted == 1


def test_brute_force_equal_gauges_pair():
    # both gauges equal: x = (9, 3, 1, 1/9) against the unit
    x = np.array([9.0, 3.0, 1.0, 1.0 / 9.0])
    res = oracle.brute_force_standard(x, np.ones(4), grid_points_per_axis=9)
    assert res.dimension == 2


def test_brute_force_validation():
    with pytest.raises(ValueError):
        oracle.brute_force_standard(np.array([2.0, 1.0]), np.ones(2),
                                    grid_points_per_axis=12)  # even grid
    with pytest.raises(ValueError):
        oracle.brute_force_standard(np.ones(9), np.full(9, 2.0),
                                    grid_points_per_axis=21)  # 21^9 nodes


def test_brute_force_box():
    res = oracle.brute_force_standard(np.array([4.0, 1.0]), np.ones(2),
                                      grid_points_per_axis=11)
    # midpoint box: first coordinate [4 e^{-log 2}, e^{log 2}] = [2, 2]
    assert res.box_lo[0] == pytest.approx(2.0)
    assert res.box_hi[0] == pytest.approx(2.0)
    assert res.box_lo[1] == pytest.approx(0.5)
    assert res.box_hi[1] == pytest.approx(2.0)


def test_run_verification_worked_example():
    x, y = diag(4, 2, 1), SYM3.unit()
    vr = oracle.run_verification(x, y, SYM3, n_samples=120, seed=4)
    assert vr.ok
    assert vr.predicted_dimension == 3
    assert vr.formula_dimension == 3
    assert vr.sample_conclusive
    assert vr.estimated_dimension == 3
    assert vr.tolerances["tie"] == midspan.TIE_TOL


def test_run_verification_random_pairs(rng):
    for alg in (ejalg.sym_real(3), ejalg.herm_complex(2), ejalg.spin_factor(5)):
        cone = JordanCone(alg)
        x = rand_interior(rng, alg)
        y = rand_interior(rng, alg)
        vr = oracle.run_verification(x, y, cone, n_samples=90, seed=9)
        assert vr.ok, (alg.label(), vr)


def test_verification_catches_wrong_base():
    x, y = diag(4, 2, 1), SYM3.unit()
    rep = midspan.midpoint_span(x, y, SYM3)
    off = dataclasses.replace(rep, base_point=rep.base_point * 1.4)
    res = oracle.verify_span_positive(off, x, y, SYM3)
    assert not res.base_ok and not res.ok
