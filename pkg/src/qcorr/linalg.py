"""Dense complex linear algebra for small multipartite quantum states.

Everything operates on plain numpy arrays wrapped in a few thin dataclasses.
States live on Hilbert spaces of total dimension <= ~64, so clarity and
robustness win over asymptotic performance throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-10
TOL_SCHMIDT = 1e-12
TOL_UNITARY = 1e-10


class NotSquare(ValueError):
    pass


class DimMismatch(ValueError):
    pass


class NotPositive(ValueError):
    pass


class TraceZero(ValueError):
    pass


class BadSubsystemIndex(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class NotUnitary(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one positive semidefinite matrix with a declared subsystem split.

    Construct through :func:`make_density`, which hermitizes, clips tiny
    negative eigenvalues and renormalizes; operations in this module preserve
    validity and build instances directly.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Biorthogonal expansion of a bipartite pure state.

    ``coefficients`` are the squared Schmidt coefficients above TOL_SCHMIDT in
    decreasing order; ``basis_a``/``basis_b`` are complete orthonormal bases
    whose k-th columns pair up in the expansion; ``schmidt_number`` counts the
    retained coefficients.
    """

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    schmidt_number: int


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def check_unitary(u: np.ndarray, tol: float = TOL_UNITARY) -> None:
    """Raise NotUnitary unless u^dag u = I entrywise within tol."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    dev = np.max(np.abs(dag(u) @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise NotUnitary(f"deviation from unitarity {dev:.3e} exceeds {tol:.1e}")


def make_density(matrix, dims) -> DensityOperator:
    """Validate and normalize a candidate density matrix.

    The input is hermitized as (m + m^dag)/2; eigenvalues in [-TOL_PSD, 0)
    are clipped to zero and the result is renormalized to unit trace.

    Raises NotSquare, DimMismatch, NotPositive (eigenvalue below -TOL_PSD)
    or TraceZero.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or math.prod(dims) != m.shape[0]:
        raise DimMismatch(f"dims {dims} incompatible with dimension {m.shape[0]}")
    h = 0.5 * (m + dag(m))
    w, v = _eigh(h)
    if w[0] < -TOL_PSD:
        raise NotPositive(f"eigenvalue {w[0]:.3e} below -{TOL_PSD:.1e}")
    w = np.clip(w, 0.0, None)
    tr = float(w.sum())
    if tr <= TOL_TRACE:
        raise TraceZero("state has (near-)zero trace")
    h = (v * (w / tr)) @ dag(v)
    return DensityOperator(0.5 * (h + dag(h)), dims)


def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Kronecker product state; dims are concatenated."""
    return DensityOperator(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced state on the subsystems listed in ``keep`` (original order)."""
    dims = rho.dims
    keep = sorted({int(i) for i in keep})
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise BadSubsystemIndex(f"keep={keep} invalid for dims {dims}")
    t = rho.matrix.reshape(dims + dims)
    nsub = len(dims)
    for i in (i for i in reversed(range(len(dims))) if i not in keep):
        t = np.trace(t, axis1=i, axis2=i + nsub)
        nsub -= 1
    new_dims = tuple(dims[i] for i in keep)
    n = math.prod(new_dims)
    return DensityOperator(t.reshape(n, n), new_dims)


def permute_subsystems(rho: DensityOperator, order) -> DensityOperator:
    """Reorder the tensor factors of ``rho`` according to ``order``."""
    dims = rho.dims
    order = [int(i) for i in order]
    if sorted(order) != list(range(len(dims))):
        raise BadSubsystemIndex(f"order {order} is not a permutation of {len(dims)} subsystems")
    k = len(dims)
    t = rho.matrix.reshape(dims + dims)
    t = t.transpose(order + [i + k for i in order])
    new_dims = tuple(dims[i] for i in order)
    n = math.prod(new_dims)
    return DensityOperator(t.reshape(n, n).copy(), new_dims)


def regroup(rho: DensityOperator, block) -> DensityOperator:
    """Bipartition a multipartite state as (block | rest), merging each side.

    The subsystems in ``block`` are moved to the front (in the order given)
    and fused into a single factor; the remaining subsystems are fused into
    the second factor.  Result always has two dims.
    """
    block = [int(i) for i in block]
    rest = [i for i in range(len(rho.dims)) if i not in block]
    if not block or not rest or len(set(block)) != len(block) \
            or any(i < 0 or i >= len(rho.dims) for i in block):
        raise BadSubsystemIndex(f"block {block} invalid for dims {rho.dims}")
    perm = permute_subsystems(rho, block + rest)
    na = math.prod(rho.dims[i] for i in block)
    nb = math.prod(rho.dims[i] for i in rest)
    return DensityOperator(perm.matrix, (na, nb))


def _eigh(h: np.ndarray):
    try:
        return np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def eig_hermitian(rho: DensityOperator):
    """Spectral decomposition of a state.

    Returns (spectrum, basis): eigenvalues sorted decreasing and clipped at
    zero, and the matching orthonormal eigenvector columns.
    """
    w, v = _eigh(rho.matrix)
    order = np.argsort(w)[::-1]
    return np.clip(w[order], 0.0, None), v[:, order]


def spectrum(rho: DensityOperator) -> np.ndarray:
    """Eigenvalues only, sorted decreasing and clipped at zero."""
    try:
        w = np.linalg.eigvalsh(rho.matrix)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return np.clip(w[::-1], 0.0, None)


def hs_norm_sq(a) -> float:
    """Squared Hilbert-Schmidt norm Tr(A^dag A)."""
    a = np.asarray(a)
    return float(np.vdot(a, a).real)


def schmidt(psi, dims) -> SchmidtDecomposition:
    """Schmidt decomposition of a unit vector on dims [N_A, N_B]."""
    psi = np.asarray(psi, dtype=complex).ravel()
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or psi.size != dims[0] * dims[1]:
        raise DimMismatch(f"vector of size {psi.size} does not split as {dims}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise NotNormalized(f"norm {np.linalg.norm(psi):.12f} != 1")
    u, sv, vh = np.linalg.svd(psi.reshape(dims), full_matrices=True)
    lam = sv**2
    n = int(np.count_nonzero(lam > TOL_SCHMIDT))
    return SchmidtDecomposition(lam[:n], u, vh.T, n)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    if n < 1:
        raise DimMismatch("dimension must be >= 1")
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0  # measure-zero guard
    return q * (d / np.abs(d))


def random_density(dims, rng: np.random.Generator) -> DensityOperator:
    """Hilbert-Schmidt-induced random state: G G^dag / Tr, G square Ginibre."""
    if isinstance(dims, (int, np.integer)):
        dims = (int(dims),)
    dims = tuple(int(d) for d in dims)
    n = math.prod(dims)
    if n < 1:
        raise DimMismatch("dimension must be >= 1")
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ dag(g)
    m /= np.trace(m).real
    return DensityOperator(0.5 * (m + dag(m)), dims)


def random_pure(dims, rng: np.random.Generator) -> np.ndarray:
    """Normalized complex Gaussian vector on the given dims."""
    if isinstance(dims, (int, np.integer)):
        dims = (int(dims),)
    n = math.prod(int(d) for d in dims)
    if n < 1:
        raise DimMismatch("dimension must be >= 1")
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def majorizes(p, q_vec, tol: float = 1e-10) -> bool:
    """True iff p is majorized by q_vec (p < q_vec in the majorization order).

    Vectors are sorted decreasing and the shorter one is zero-padded; the
    check is that every partial sum of q_vec dominates the matching partial
    sum of p within tol.
    """
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    q = np.sort(np.asarray(q_vec, dtype=float))[::-1]
    n = max(p.size, q.size)
    p = np.pad(p, (0, n - p.size))
    q = np.pad(q, (0, n - q.size))
    return bool(np.all(np.cumsum(p) <= np.cumsum(q) + tol))
