"""Euclidean Jordan algebra kernel.

Four families are supported: real symmetric matrices, complex Hermitian
matrices, spin factors on R x R^(m-1), and finite direct sums of those.
An element is stored as a coordinate vector in a fixed basis that is
orthonormal for the trace inner product, so plain dot products of
coordinates realise the algebra inner product and orthonormal coordinate
operations respect the algebra geometry.

Conventions:

* sym-real(m): V = m x m real symmetric matrices, x.y = (xy + yx)/2,
  <x, y> = tr(xy).  Basis: E_ii and (E_ij + E_ji)/sqrt(2).
* herm-complex(m): complex Hermitian matrices with the same product and
  <x, y> = Re tr(xy).  Basis adds i(E_ij - E_ji)/sqrt(2) units.
* spin(m): pairs (t, w) in R x R^(m-1) with
  (t, w).(s, z) = (ts + <w, z>, tz + sw) and <x, y> = 2(ts + <w, z>);
  stored coordinates are sqrt(2) * (t, w) so they are orthonormal.
* direct-sum: concatenated coordinates, blockwise operations.

Spectral work runs through the cyclic Jacobi solver in :mod:`.jacobi`;
complex Hermitian matrices use the doubled real symmetric embedding
[[A, -B], [B, A]] whose spectrum repeats every eigenvalue twice, followed
by deduplication.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .jacobi import jacobi_eigh, jacobi_eigenvalues

__all__ = [
    "KIND_SYM",
    "KIND_HERM",
    "KIND_SPIN",
    "KIND_SUM",
    "AlgebraDescriptor",
    "sym_real",
    "herm_complex",
    "spin_factor",
    "direct_sum",
    "Element",
    "ConeLocation",
    "SpectralDecomposition",
    "JordanFrame",
    "basis_element",
    "unit",
    "from_matrix",
    "to_matrix",
    "from_diag",
    "spin_parts",
    "from_spin_parts",
    "split_blocks",
    "join_blocks",
    "jordan_product",
    "inner",
    "trace",
    "lmul_matrix",
    "quad_apply",
    "quad_matrix",
    "jordan_frame",
    "eigenvalues_of",
    "spectral_decompose",
    "from_frame",
    "power",
    "in_cone",
    "peirce_zero_basis",
    "orthonormal_span",
    "cluster_sorted",
    "GROUP_TOL",
    "IDEMPOTENT_TOL",
]

KIND_SYM = "sym-real"
KIND_HERM = "herm-complex"
KIND_SPIN = "spin"
KIND_SUM = "direct-sum"

#: relative eigenvalue clustering tolerance (fraction of spectral radius)
GROUP_TOL = 1e-8
#: acceptance tolerance on ||c.c - c|| for idempotent inputs
IDEMPOTENT_TOL = 1e-8
#: an L(c) eigenvalue farther than this from {0, 1/2, 1} means bad input
_PEIRCE_SNAP_LIMIT = 0.25

_SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraDescriptor:
    """Identifies an algebra: a simple family and size, or a direct sum."""

    kind: str
    size: int = 0
    summands: tuple["AlgebraDescriptor", ...] = ()

    def __post_init__(self):
        if self.kind in (KIND_SYM, KIND_HERM):
            if self.size < 1:
                raise ValueError(f"{self.kind} needs matrix order >= 1")
        elif self.kind == KIND_SPIN:
            if self.size < 2:
                raise ValueError("spin factor needs total dimension >= 2")
        elif self.kind == KIND_SUM:
            if len(self.summands) < 1:
                raise ValueError("direct sum needs at least one summand")
            if any(s.kind == KIND_SUM for s in self.summands):
                raise ValueError("direct sums must be flattened")
        else:
            raise ValueError(f"unknown algebra kind {self.kind!r}")

    @property
    def dim(self) -> int:
        if self.kind == KIND_SYM:
            return self.size * (self.size + 1) // 2
        if self.kind == KIND_HERM:
            return self.size * self.size
        if self.kind == KIND_SPIN:
            return self.size
        return sum(s.dim for s in self.summands)

    @property
    def rank(self) -> int:
        if self.kind in (KIND_SYM, KIND_HERM):
            return self.size
        if self.kind == KIND_SPIN:
            return 2
        return sum(s.rank for s in self.summands)

    @property
    def peirce_d(self) -> int | None:
        """Common off-diagonal Peirce multiplicity, simple kinds of rank > 1."""
        if self.kind == KIND_SYM:
            return 1 if self.size > 1 else None
        if self.kind == KIND_HERM:
            return 2 if self.size > 1 else None
        if self.kind == KIND_SPIN:
            return self.size - 2
        return None

    def label(self) -> str:
        if self.kind == KIND_SUM:
            return "(" + " + ".join(s.label() for s in self.summands) + ")"
        return f"{self.kind}({self.size})"


def sym_real(m: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(KIND_SYM, m)


def herm_complex(m: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(KIND_HERM, m)


def spin_factor(m: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(KIND_SPIN, m)


def direct_sum(*parts: AlgebraDescriptor) -> AlgebraDescriptor:
    flat: list[AlgebraDescriptor] = []
    for p in parts:
        if p.kind == KIND_SUM:
            flat.extend(p.summands)
        else:
            flat.append(p)
    return AlgebraDescriptor(KIND_SUM, 0, tuple(flat))


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Element:
    """Algebra element as an orthonormal coordinate vector.

    Immutable after construction; supports addition, subtraction and
    scalar multiplication so geometric code can treat elements and plain
    vectors uniformly.
    """

    algebra: AlgebraDescriptor
    coords: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coords, dtype=float, copy=True)
        if arr.shape != (self.algebra.dim,):
            raise ValueError(
                f"coordinate shape {arr.shape} does not match "
                f"dim {self.algebra.dim} of {self.algebra.label()}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @classmethod
    def _fresh(cls, algebra: AlgebraDescriptor, arr: np.ndarray) -> "Element":
        # internal fast path: arr is a new float array of the right length
        self = object.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coords", arr)
        return self

    def _check_mate(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ValueError(
                f"algebra mismatch: {self.algebra.label()} vs "
                f"{other.algebra.label()}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check_mate(other)
        return Element._fresh(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        self._check_mate(other)
        return Element._fresh(self.algebra, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element._fresh(self.algebra, -self.coords)

    def __mul__(self, scalar) -> "Element":
        s = float(scalar)
        return Element._fresh(self.algebra, self.coords * s)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Element":
        return self * (1.0 / float(scalar))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __repr__(self) -> str:
        body = np.array2string(self.coords, precision=6, suppress_small=True)
        return f"Element({self.algebra.label()}, {body})"


class ConeLocation(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


# ---------------------------------------------------------------------------
# coordinate charts per kind
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _sym_maps(m: int):
    iu, ju = np.triu_indices(m)
    weight = np.where(iu == ju, 1.0, _SQRT2)
    return iu, ju, weight


@lru_cache(maxsize=None)
def _herm_maps(m: int):
    iu, ju = np.triu_indices(m, k=1)
    return iu, ju


@lru_cache(maxsize=None)
def _sum_offsets(desc: AlgebraDescriptor):
    sizes = [s.dim for s in desc.summands]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    return offs


def to_matrix(x: Element) -> np.ndarray:
    """Matrix picture of a sym-real or herm-complex element."""
    alg = x.algebra
    m = alg.size
    if alg.kind == KIND_SYM:
        iu, ju, w = _sym_maps(m)
        vals = x.coords / w
        out = np.zeros((m, m))
        out[iu, ju] = vals
        out[ju, iu] = vals
        return out
    if alg.kind == KIND_HERM:
        iu, ju = _herm_maps(m)
        k = len(iu)
        diag = x.coords[:m]
        re = x.coords[m:m + k] / _SQRT2
        im = x.coords[m + k:] / _SQRT2
        out = np.zeros((m, m), dtype=complex)
        out[np.arange(m), np.arange(m)] = diag
        out[iu, ju] = re + 1j * im
        out[ju, iu] = re - 1j * im
        return out
    raise TypeError(f"{alg.label()} has no matrix picture")


def from_matrix(algebra: AlgebraDescriptor, matrix: np.ndarray) -> Element:
    """Element from a (numerically) symmetric or Hermitian matrix."""
    m = algebra.size
    if algebra.kind == KIND_SYM:
        a = np.asarray(matrix, dtype=float)
        iu, ju, w = _sym_maps(m)
        sym = 0.5 * (a + a.T)
        return Element._fresh(algebra, sym[iu, ju] * w)
    if algebra.kind == KIND_HERM:
        a = np.asarray(matrix, dtype=complex)
        herm = 0.5 * (a + a.conj().T)
        iu, ju = _herm_maps(m)
        coords = np.concatenate([
            herm.diagonal().real,
            _SQRT2 * herm[iu, ju].real,
            _SQRT2 * herm[iu, ju].imag,
        ])
        return Element._fresh(algebra, coords)
    raise TypeError(f"{algebra.label()} has no matrix picture")


def from_diag(algebra: AlgebraDescriptor, values) -> Element:
    """Diagonal matrix element for the matrix kinds."""
    vals = np.asarray(values, dtype=float)
    if algebra.kind == KIND_SYM:
        return from_matrix(algebra, np.diag(vals))
    if algebra.kind == KIND_HERM:
        return from_matrix(algebra, np.diag(vals).astype(complex))
    raise TypeError(f"{algebra.label()} has no diagonal picture")


def spin_parts(x: Element) -> tuple[float, np.ndarray]:
    if x.algebra.kind != KIND_SPIN:
        raise TypeError("spin_parts needs a spin-factor element")
    parts = x.coords / _SQRT2
    return float(parts[0]), parts[1:].copy()


def from_spin_parts(algebra: AlgebraDescriptor, t: float, w) -> Element:
    if algebra.kind != KIND_SPIN:
        raise TypeError("from_spin_parts needs a spin-factor descriptor")
    coords = _SQRT2 * np.concatenate([[float(t)], np.asarray(w, dtype=float)])
    return Element(algebra, coords)


def split_blocks(x: Element) -> list[Element]:
    alg = x.algebra
    if alg.kind != KIND_SUM:
        return [x]
    offs = _sum_offsets(alg)
    return [
        Element._fresh(s, x.coords[offs[i]:offs[i + 1]].copy())
        for i, s in enumerate(alg.summands)
    ]


def join_blocks(algebra: AlgebraDescriptor, parts) -> Element:
    if algebra.kind != KIND_SUM:
        raise TypeError("join_blocks needs a direct-sum descriptor")
    parts = list(parts)
    if len(parts) != len(algebra.summands):
        raise ValueError("wrong number of blocks")
    for part, s in zip(parts, algebra.summands):
        if part.algebra != s:
            raise ValueError("block does not match summand descriptor")
    return Element._fresh(algebra, np.concatenate([p.coords for p in parts]))


def basis_element(algebra: AlgebraDescriptor, index: int) -> Element:
    coords = np.zeros(algebra.dim)
    coords[index] = 1.0
    return Element._fresh(algebra, coords)


def unit(algebra: AlgebraDescriptor) -> Element:
    if algebra.kind in (KIND_SYM, KIND_HERM):
        return from_diag(algebra, np.ones(algebra.size))
    if algebra.kind == KIND_SPIN:
        return from_spin_parts(algebra, 1.0, np.zeros(algebra.size - 1))
    return join_blocks(algebra, [unit(s) for s in algebra.summands])


# ---------------------------------------------------------------------------
# product, inner product, multiplication operators
# ---------------------------------------------------------------------------

def jordan_product(a: Element, b: Element) -> Element:
    a._check_mate(b)
    alg = a.algebra
    if alg.kind == KIND_SYM or alg.kind == KIND_HERM:
        ma = to_matrix(a)
        mb = to_matrix(b)
        return from_matrix(alg, 0.5 * (ma @ mb + mb @ ma))
    if alg.kind == KIND_SPIN:
        t1, w1 = spin_parts(a)
        t2, w2 = spin_parts(b)
        return from_spin_parts(
            alg, t1 * t2 + float(w1 @ w2), t1 * w2 + t2 * w1
        )
    return join_blocks(
        alg,
        [jordan_product(p, q) for p, q in zip(split_blocks(a), split_blocks(b))],
    )


def inner(a: Element, b: Element) -> float:
    """Trace inner product; equals the dot product of coordinates."""
    a._check_mate(b)
    return float(a.coords @ b.coords)


def trace(x: Element) -> float:
    return inner(x, unit(x.algebra))


def lmul_matrix(x: Element) -> np.ndarray:
    """Matrix of L(x): z -> x.z on orthonormal coordinates (symmetric)."""
    alg = x.algebra
    n = alg.dim
    out = np.empty((n, n))
    for j in range(n):
        out[:, j] = jordan_product(x, basis_element(alg, j)).coords
    return out


def quad_apply(x: Element, z: Element) -> Element:
    """Quadratic representation P(x) z = 2 x.(x.z) - (x.x).z."""
    x._check_mate(z)
    xz = jordan_product(x, z)
    xsq = jordan_product(x, x)
    return 2.0 * jordan_product(x, xz) - jordan_product(xsq, z)


def quad_matrix(x: Element) -> np.ndarray:
    """Matrix of P(x) = 2 L(x)^2 - L(x.x) on coordinates."""
    lx = lmul_matrix(x)
    lxx = lmul_matrix(jordan_product(x, x))
    return 2.0 * (lx @ lx) - lxx


# ---------------------------------------------------------------------------
# spectral theory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JordanFrame:
    """Complete orthogonal system of primitive idempotents for one element.

    ``eigenvalues`` is ascending with repeats; ``primitives[i]`` carries
    eigenvalue ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    primitives: tuple[Element, ...]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues with their (possibly non-primitive) idempotents."""

    eigenvalues: np.ndarray
    idempotents: tuple[Element, ...]
    multiplicities: np.ndarray


def _sym_frame(x: Element) -> JordanFrame:
    w, v = jacobi_eigh(to_matrix(x))
    alg = x.algebra
    prims = tuple(
        from_matrix(alg, np.outer(v[:, i], v[:, i])) for i in range(len(w))
    )
    return JordanFrame(w, prims)


def _herm_frame(x: Element) -> JordanFrame:
    alg = x.algebra
    m = alg.size
    h = to_matrix(x)
    a = h.real
    b = h.imag
    embed = np.block([[a, -b], [b, a]])
    w, v = jacobi_eigh(embed)
    # Every eigenvalue of h appears twice in the embedding.  Cluster the
    # doubled spectrum, then pick one complex eigenvector per pair by
    # pivoted Gram-Schmidt over the embedded eigenvectors of the cluster.
    scale = max(1.0, float(np.max(np.abs(w))))
    slices = cluster_sorted(w, 1e-10 * scale)
    # a mis-split cluster has odd size; merge forward until all are even
    merged: list[tuple[int, int]] = []
    for lo, hi in slices:
        if merged and (merged[-1][1] - merged[-1][0]) % 2 == 1:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    values: list[float] = []
    prims: list[Element] = []
    for lo, hi in merged:
        count = hi - lo
        if count % 2 != 0:
            raise RuntimeError("embedded spectrum failed to pair up")
        half = count // 2
        cand = v[:m, lo:hi] + 1j * v[m:, lo:hi]
        chosen: list[np.ndarray] = []
        work = cand.copy()
        for _ in range(half):
            norms = np.linalg.norm(work, axis=0)
            j = int(np.argmax(norms))
            if norms[j] < 1e-6:
                raise RuntimeError("failed to deduplicate embedded eigenvectors")
            u = work[:, j] / norms[j]
            work = work - np.outer(u, u.conj() @ work)
            chosen.append(u)
        val = float(np.mean(w[lo:hi]))
        for u in chosen:
            values.append(val)
            prims.append(from_matrix(alg, np.outer(u, u.conj())))
    return JordanFrame(np.array(values), tuple(prims))


def _spin_frame(x: Element) -> JordanFrame:
    alg = x.algebra
    t, w = spin_parts(x)
    nw = float(np.linalg.norm(w))
    if nw == 0.0:
        axis = np.zeros(alg.size - 1)
        axis[0] = 1.0
    else:
        axis = w / nw
    c_lo = from_spin_parts(alg, 0.5, -0.5 * axis)
    c_hi = from_spin_parts(alg, 0.5, 0.5 * axis)
    return JordanFrame(np.array([t - nw, t + nw]), (c_lo, c_hi))


def _sum_frame(x: Element) -> JordanFrame:
    alg = x.algebra
    offs = _sum_offsets(alg)
    values: list[float] = []
    prims: list[Element] = []
    for i, block in enumerate(split_blocks(x)):
        sub = jordan_frame(block)
        for val, prim in zip(sub.eigenvalues, sub.primitives):
            coords = np.zeros(alg.dim)
            coords[offs[i]:offs[i + 1]] = prim.coords
            values.append(float(val))
            prims.append(Element._fresh(alg, coords))
    order = np.argsort(values, kind="stable")
    vals = np.array(values)[order]
    return JordanFrame(vals, tuple(prims[i] for i in order))


def jordan_frame(x: Element) -> JordanFrame:
    """Spectral resolution of x into rank(V) primitive idempotents."""
    kind = x.algebra.kind
    if kind == KIND_SYM:
        return _sym_frame(x)
    if kind == KIND_HERM:
        return _herm_frame(x)
    if kind == KIND_SPIN:
        return _spin_frame(x)
    return _sum_frame(x)


def eigenvalues_of(x: Element) -> np.ndarray:
    """Ascending eigenvalues with multiplicity (no idempotents built)."""
    alg = x.algebra
    if alg.kind == KIND_SYM:
        return jacobi_eigenvalues(to_matrix(x))
    if alg.kind == KIND_HERM:
        h = to_matrix(x)
        embed = np.block([[h.real, -h.imag], [h.imag, h.real]])
        w = jacobi_eigenvalues(embed)
        # doubled spectrum: adjacent entries pair up after sorting
        return 0.5 * (w[0::2] + w[1::2])
    if alg.kind == KIND_SPIN:
        t, w = spin_parts(x)
        nw = float(np.linalg.norm(w))
        return np.array([t - nw, t + nw])
    vals = np.concatenate([eigenvalues_of(b) for b in split_blocks(x)])
    return np.sort(vals)


def cluster_sorted(values: np.ndarray, threshold: float) -> list[tuple[int, int]]:
    """Group an ascending 1-d array into runs with gaps <= threshold.

    Returns half-open index ranges (lo, hi).
    """
    n = len(values)
    out: list[tuple[int, int]] = []
    lo = 0
    for i in range(1, n):
        if values[i] - values[i - 1] > threshold:
            out.append((lo, i))
            lo = i
    out.append((lo, n))
    return out


def spectral_decompose(x: Element, group_tol: float = GROUP_TOL) -> SpectralDecomposition:
    """Distinct eigenvalues and idempotents, clustering relative gaps.

    Frame eigenvalues closer than ``group_tol`` times the spectral radius
    are merged into one block whose idempotent is the sum of primitives.
    """
    frame = jordan_frame(x)
    lam = frame.eigenvalues
    radius = float(np.max(np.abs(lam))) if len(lam) else 0.0
    slices = cluster_sorted(lam, group_tol * radius)
    values = np.array([float(np.mean(lam[lo:hi])) for lo, hi in slices])
    mults = np.array([hi - lo for lo, hi in slices], dtype=int)
    idems = []
    for lo, hi in slices:
        coords = np.zeros(x.algebra.dim)
        for p in frame.primitives[lo:hi]:
            coords += p.coords
        idems.append(Element._fresh(x.algebra, coords))
    return SpectralDecomposition(values, tuple(idems), mults)


def from_frame(frame: JordanFrame, eigenvalues) -> Element:
    """Rebuild an element from a frame with replaced eigenvalues."""
    vals = np.asarray(eigenvalues, dtype=float)
    if vals.shape != frame.eigenvalues.shape:
        raise ValueError("eigenvalue count does not match the frame")
    alg = frame.primitives[0].algebra
    coords = np.zeros(alg.dim)
    for v, p in zip(vals, frame.primitives):
        coords += v * p.coords
    return Element._fresh(alg, coords)


def power(x: Element, t: float) -> Element:
    """Spectral power x^t.

    Any eigenvalues are fine for nonnegative integer t; negative integer t
    needs invertibility; fractional t needs strictly positive spectrum.
    """
    t = float(t)
    if t == 0.0:
        return unit(x.algebra)
    if t == 1.0:
        return x
    frame = jordan_frame(x)
    lam = frame.eigenvalues
    if t.is_integer():
        if t < 0 and np.any(lam == 0.0):
            raise ValueError("negative power of a singular element")
    elif np.any(lam <= 0.0):
        raise ValueError(
            "fractional power needs strictly positive eigenvalues "
            f"(min {lam.min():.3e})"
        )
    return from_frame(frame, lam ** t)


def in_cone(x: Element, tol: float = 1e-9) -> ConeLocation:
    """Classify x against the cone of squares by its minimal eigenvalue."""
    lam = eigenvalues_of(x)
    scale = max(1.0, float(np.max(np.abs(lam))))
    lo = float(lam[0])
    if lo > tol * scale:
        return ConeLocation.INTERIOR
    if lo < -tol * scale:
        return ConeLocation.OUTSIDE
    return ConeLocation.BOUNDARY


# ---------------------------------------------------------------------------
# Peirce zero space
# ---------------------------------------------------------------------------

def peirce_zero_basis(c: Element, idempotent_tol: float = IDEMPOTENT_TOL) -> list[Element]:
    """Orthonormal basis of V(c, 0) = {z : c.z = 0} for an idempotent c.

    Diagonalises L(c), snaps its eigenvalues to {0, 1/2, 1}, and returns
    the eigenvectors snapped to 0.  Raises ValueError when c is not an
    idempotent within tolerance or an L(c) eigenvalue is farther than 1/4
    from the admissible set.
    """
    residual = (jordan_product(c, c) - c).norm()
    if residual > idempotent_tol * max(1.0, c.norm()):
        raise ValueError(f"not an idempotent: ||c.c - c|| = {residual:.3e}")
    lop = lmul_matrix(c)
    w, v = jacobi_eigh(lop)
    targets = np.array([0.0, 0.5, 1.0])
    snapped = targets[np.argmin(np.abs(w[:, None] - targets[None, :]), axis=1)]
    worst = float(np.max(np.abs(w - snapped)))
    if worst > _PEIRCE_SNAP_LIMIT:
        raise ValueError(
            f"multiplication spectrum off {{0, 1/2, 1}} by {worst:.3e}; "
            "input is not an idempotent"
        )
    alg = c.algebra
    return [
        Element._fresh(alg, v[:, i].copy())
        for i in range(len(w))
        if snapped[i] == 0.0
    ]


def orthonormal_span(elements, tol: float = 1e-10) -> list[Element]:
    """Orthonormalise a list of elements by pivoted Gram-Schmidt.

    Drops directions whose residual norm falls below ``tol`` times the
    largest input norm, so the result has full numerical rank.
    """
    elems = list(elements)
    if not elems:
        return []
    alg = elems[0].algebra
    work = np.stack([e.coords for e in elems]).astype(float)
    cutoff = tol * max(1.0, float(np.max(np.linalg.norm(work, axis=1))))
    out: list[Element] = []
    for _ in range(len(elems)):
        norms = np.linalg.norm(work, axis=1)
        j = int(np.argmax(norms))
        if norms[j] <= cutoff:
            break
        u = work[j] / norms[j]
        work = work - np.outer(work @ u, u)
        out.append(Element._fresh(alg, u.copy()))
    return out
