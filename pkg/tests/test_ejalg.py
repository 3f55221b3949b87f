import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conemid import ejalg
from conemid.ejalg import Element

ALGEBRAS = [
    ejalg.sym_real(1),
    ejalg.sym_real(3),
    ejalg.herm_complex(2),
    ejalg.herm_complex(3),
    ejalg.spin_factor(2),
    ejalg.spin_factor(5),
    ejalg.direct_sum(ejalg.sym_real(2), ejalg.spin_factor(3)),
]


def rand_el(gen, alg, scale=1.0):
    return Element(alg, scale * gen.standard_normal(alg.dim))


def test_descriptor_dimensions():
    assert ejalg.sym_real(3).dim == 6
    assert ejalg.sym_real(3).rank == 3
    assert ejalg.herm_complex(3).dim == 9
    assert ejalg.herm_complex(4).rank == 4
    assert ejalg.spin_factor(7).dim == 7
    assert ejalg.spin_factor(7).rank == 2
    s = ejalg.direct_sum(ejalg.sym_real(2), ejalg.herm_complex(2))
    assert s.dim == 3 + 4 and s.rank == 4


def test_descriptor_validation():
    with pytest.raises(ValueError):
        ejalg.sym_real(0)
    with pytest.raises(ValueError):
        ejalg.spin_factor(1)
    with pytest.raises(ValueError):
        ejalg.direct_sum()


def test_peirce_constants():
    assert ejalg.sym_real(4).peirce_d == 1
    assert ejalg.herm_complex(4).peirce_d == 2
    assert ejalg.spin_factor(6).peirce_d == 4
    assert ejalg.sym_real(1).peirce_d is None


def test_matrix_round_trip_sym(rng):
    alg = ejalg.sym_real(4)
    x = rand_el(rng, alg)
    back = ejalg.from_matrix(alg, ejalg.to_matrix(x))
    assert np.allclose(back.coords, x.coords)


def test_matrix_round_trip_herm(rng):
    alg = ejalg.herm_complex(3)
    x = rand_el(rng, alg)
    m = ejalg.to_matrix(x)
    assert np.allclose(m, m.conj().T)
    back = ejalg.from_matrix(alg, m)
    assert np.allclose(back.coords, x.coords)


def test_inner_matches_trace_form(rng):
    # coordinates are orthonormal for tr(XY) on matrix kinds
    alg = ejalg.herm_complex(3)
    a, b = rand_el(rng, alg), rand_el(rng, alg)
    expected = np.trace(ejalg.to_matrix(a) @ ejalg.to_matrix(b)).real
    assert abs(ejalg.inner(a, b) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_jordan_product_matches_matrix_anticommutator(rng):
    for alg in (ejalg.sym_real(3), ejalg.herm_complex(3)):
        a, b = rand_el(rng, alg), rand_el(rng, alg)
        ma, mb = ejalg.to_matrix(a), ejalg.to_matrix(b)
        expected = 0.5 * (ma @ mb + mb @ ma)
        got = ejalg.to_matrix(ejalg.jordan_product(a, b))
        assert np.allclose(got, expected, atol=1e-12 * max(1.0, np.abs(expected).max()))


def test_spin_product_closed_form(rng):
    alg = ejalg.spin_factor(4)
    a, b = rand_el(rng, alg), rand_el(rng, alg)
    s, w = ejalg.spin_parts(a)
    t, z = ejalg.spin_parts(b)
    prod = ejalg.jordan_product(a, b)
    pt, pw = ejalg.spin_parts(prod)
    assert abs(pt - (s * t + w @ z)) <= 1e-12
    assert np.allclose(pw, s * z + t * w, atol=1e-12)


def test_unit_is_neutral(rng):
    for alg in ALGEBRAS:
        x = rand_el(rng, alg)
        e = ejalg.unit(alg)
        assert (ejalg.jordan_product(e, x) - x).norm() <= 1e-12 * max(1.0, x.norm())


def test_quad_matrix_matches_quad_apply(rng):
    for alg in (ejalg.sym_real(3), ejalg.spin_factor(4),
                ejalg.direct_sum(ejalg.sym_real(2), ejalg.spin_factor(3))):
        x, z = rand_el(rng, alg), rand_el(rng, alg)
        via_matrix = ejalg.quad_matrix(x) @ z.coords
        direct = ejalg.quad_apply(x, z)
        assert np.allclose(via_matrix, direct.coords, atol=1e-10)


def test_quad_apply_matrix_kind_is_sandwich(rng):
    alg = ejalg.herm_complex(3)
    x, z = rand_el(rng, alg), rand_el(rng, alg)
    mx, mz = ejalg.to_matrix(x), ejalg.to_matrix(z)
    got = ejalg.to_matrix(ejalg.quad_apply(x, z))
    assert np.allclose(got, mx @ mz @ mx, atol=1e-10)


def test_frame_matches_numpy_sym(rng):
    alg = ejalg.sym_real(5)
    x = rand_el(rng, alg)
    frame = ejalg.jordan_frame(x)
    w = np.linalg.eigvalsh(ejalg.to_matrix(x))
    assert np.allclose(frame.eigenvalues, w, atol=1e-9)
    rebuilt = ejalg.from_frame(frame, frame.eigenvalues)
    assert (rebuilt - x).norm() <= 1e-8 * max(1.0, x.norm())


def test_frame_matches_numpy_herm(rng):
    alg = ejalg.herm_complex(4)
    x = rand_el(rng, alg)
    frame = ejalg.jordan_frame(x)
    w = np.linalg.eigvalsh(ejalg.to_matrix(x))
    assert np.allclose(frame.eigenvalues, w, atol=1e-8)
    for p in frame.primitives:
        mp = ejalg.to_matrix(p)
        assert np.allclose(mp @ mp, mp, atol=1e-8)
        assert abs(np.trace(mp).real - 1.0) <= 1e-8
    rebuilt = ejalg.from_frame(frame, frame.eigenvalues)
    assert (rebuilt - x).norm() <= 1e-7 * max(1.0, x.norm())


def test_herm_frame_with_repeated_eigenvalues():
    alg = ejalg.herm_complex(3)
    x = ejalg.from_diag(alg, [2.0, 2.0, 5.0])
    frame = ejalg.jordan_frame(x)
    assert np.allclose(frame.eigenvalues, [2.0, 2.0, 5.0], atol=1e-10)
    total = frame.primitives[0]
    for p in frame.primitives[1:]:
        total = total + p
    assert (total - ejalg.unit(alg)).norm() <= 1e-8


def test_spin_frame_closed_form():
    alg = ejalg.spin_factor(4)
    x = ejalg.from_spin_parts(alg, 2.0, np.array([3.0, 0.0, 0.0]))
    frame = ejalg.jordan_frame(x)
    assert np.allclose(frame.eigenvalues, [-1.0, 5.0])
    for lam, p in zip(frame.eigenvalues, frame.primitives):
        res = ejalg.jordan_product(x, p) - p * lam
        assert res.norm() <= 1e-12


def test_eigenvalues_of_agrees_with_frame(rng):
    for alg in ALGEBRAS:
        x = rand_el(rng, alg)
        frame = ejalg.jordan_frame(x)
        lam = ejalg.eigenvalues_of(x)
        assert np.allclose(np.sort(lam), frame.eigenvalues, atol=1e-9)


def test_spectral_decompose_groups(rng):
    alg = ejalg.sym_real(4)
    frame = ejalg.jordan_frame(rand_el(rng, alg))
    x = ejalg.from_frame(frame, np.array([1.0, 1.0, 3.0, 7.0]))
    sd = ejalg.spectral_decompose(x)
    assert list(sd.multiplicities) == [2, 1, 1]
    assert np.allclose(sd.eigenvalues, [1.0, 3.0, 7.0], atol=1e-8)
    for val, idem in zip(sd.eigenvalues, sd.idempotents):
        assert (ejalg.jordan_product(idem, idem) - idem).norm() <= 1e-7


def test_power_laws(rng):
    alg = ejalg.herm_complex(3)
    frame = ejalg.jordan_frame(rand_el(rng, alg))
    x = ejalg.from_frame(frame, np.exp(rng.uniform(-1, 1, 3)))
    half = ejalg.power(x, 0.5)
    assert (ejalg.jordan_product(half, half) - x).norm() <= 1e-8
    inv = ejalg.power(x, -1.0)
    assert (ejalg.jordan_product(ejalg.jordan_product(inv, x), x) - x).norm() <= 1e-7
    assert (ejalg.power(x, 0) - ejalg.unit(alg)).norm() == 0.0


def test_power_validation(rng):
    alg = ejalg.sym_real(2)
    x = ejalg.from_diag(alg, [1.0, -2.0])
    with pytest.raises(ValueError):
        ejalg.power(x, 0.5)
    singular = ejalg.from_diag(alg, [1.0, 0.0])
    with pytest.raises(ValueError):
        ejalg.power(singular, -1)


def test_in_cone():
    alg = ejalg.sym_real(2)
    assert ejalg.in_cone(ejalg.from_diag(alg, [1.0, 2.0])) == ejalg.ConeLocation.INTERIOR
    assert ejalg.in_cone(ejalg.from_diag(alg, [1.0, 0.0])) == ejalg.ConeLocation.BOUNDARY
    assert ejalg.in_cone(ejalg.from_diag(alg, [1.0, -0.5])) == ejalg.ConeLocation.OUTSIDE


def test_peirce_zero_basis_diag():
    alg = ejalg.sym_real(3)
    c = ejalg.from_diag(alg, [1.0, 0.0, 0.0])
    basis = ejalg.peirce_zero_basis(c)
    # V(c,0) is the lower-right 2x2 block: dimension 3
    assert len(basis) == 3
    for b in basis:
        m = ejalg.to_matrix(b)
        assert np.allclose(m[0, :], 0.0, atol=1e-9)
        assert np.allclose(m[:, 0], 0.0, atol=1e-9)


def test_peirce_zero_rejects_non_idempotent():
    alg = ejalg.sym_real(2)
    with pytest.raises(ValueError):
        ejalg.peirce_zero_basis(ejalg.from_diag(alg, [0.5, 0.0]))


def test_orthonormal_span_drops_dependent(rng):
    alg = ejalg.sym_real(3)
    a = rand_el(rng, alg)
    b = rand_el(rng, alg)
    got = ejalg.orthonormal_span([a, b, a + b, a * 2.0])
    assert len(got) == 2
    g = np.array([v.coords for v in got])
    assert np.allclose(g @ g.T, np.eye(2), atol=1e-10)


def test_direct_sum_blocks_round_trip(rng):
    alg = ejalg.direct_sum(ejalg.sym_real(2), ejalg.spin_factor(3))
    x = rand_el(rng, alg)
    parts = ejalg.split_blocks(x)
    assert [p.algebra for p in parts] == list(alg.summands)
    back = ejalg.join_blocks(alg, parts)
    assert np.allclose(back.coords, x.coords)


def test_direct_sum_frame_is_blockwise(rng):
    alg = ejalg.direct_sum(ejalg.sym_real(2), ejalg.sym_real(2))
    a = ejalg.from_diag(alg.summands[0], [1.0, 4.0])
    b = ejalg.from_diag(alg.summands[1], [2.0, 3.0])
    x = ejalg.join_blocks(alg, [a, b])
    frame = ejalg.jordan_frame(x)
    assert np.allclose(frame.eigenvalues, [1.0, 2.0, 3.0, 4.0], atol=1e-10)


def test_trace_is_eigenvalue_sum(rng):
    for alg in ALGEBRAS:
        x = rand_el(rng, alg)
        lam = ejalg.eigenvalues_of(x)
        assert abs(ejalg.trace(x) - lam.sum()) <= 1e-8 * max(1.0, abs(lam).max())


def test_algebra_mismatch_raises(rng):
    a = rand_el(rng, ejalg.sym_real(2))
    b = rand_el(rng, ejalg.sym_real(3))
    with pytest.raises(ValueError):
        ejalg.jordan_product(a, b)


@given(st.integers(min_value=0, max_value=5000))
def test_element_arithmetic_is_coordinatewise(seed):
    gen = np.random.Generator(np.random.Philox(key=seed))
    alg = ejalg.spin_factor(3)
    a, b = rand_el(gen, alg), rand_el(gen, alg)
    assert np.allclose((a + b).coords, a.coords + b.coords)
    assert np.allclose((a - b).coords, a.coords - b.coords)
    assert np.allclose((a * 2.5).coords, 2.5 * a.coords)
    assert np.allclose((a / 2.0).coords, a.coords / 2.0)
    assert np.allclose((-a).coords, -a.coords)
