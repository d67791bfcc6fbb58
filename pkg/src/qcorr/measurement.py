"""Rank-one local projective measurements and entropic disturbance.

A complete rank-one measurement is represented by the unitary whose columns
are the measured basis; applying it without postselection dephases the state
in that basis.  Local measurements act on one block of a bipartite split
(sides "A", "B") or on both ("AB").  The disturbance of a measurement is the
entropy increase it causes, rescaled by the generalized purity (Tr rho^q)^s;
the rescale factor and the purity ratio are identically 1 in the von Neumann
and Renyi limit regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .entropy import EntropicIndices, Regime, log_power_sum, unified_entropy_spectrum
from .linalg import DensityOperator, DimMismatch, dag

SIDES = ("A", "B", "AB")


@dataclass(frozen=True)
class ProjectiveBasis:
    """Orthonormal basis given as unitary columns; P_i = |col_i><col_i|."""

    unitary: np.ndarray

    def __post_init__(self):
        linalg.check_unitary(self.unitary)

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]


@dataclass(frozen=True)
class LocalMeasurement:
    """A projective measurement on side A, B, or both, of a bipartite split."""

    side: str
    basis_a: ProjectiveBasis | None = None
    basis_b: ProjectiveBasis | None = None

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.side in ("A", "AB") and self.basis_a is None:
            raise ValueError(f"side {self.side} requires basis_a")
        if self.side in ("B", "AB") and self.basis_b is None:
            raise ValueError(f"side {self.side} requires basis_b")


@dataclass(frozen=True)
class ConditionalDecomposition:
    """Outcome probabilities and conditional states of a local measurement.

    For side A (B), ``conditionals`` holds the post-outcome states of the
    unmeasured side, with None where the outcome probability is below 1e-12.
    For side AB, ``probabilities`` is the joint (N_A, N_B) table and
    ``conditionals`` is empty.
    """

    side: str
    probabilities: np.ndarray
    conditionals: tuple[DensityOperator | None, ...]


@dataclass(frozen=True)
class DisturbanceReport:
    entropy_before: float
    entropy_after: float
    purity_ratio: float
    rescale: float
    disturbance: float


def _require_bipartite(rho: DensityOperator) -> tuple[int, int]:
    if len(rho.dims) != 2:
        raise DimMismatch(
            f"expected a two-block dims split, got {rho.dims}; regroup() first"
        )
    return rho.dims


def _check_measurement_dims(rho: DensityOperator, m: LocalMeasurement):
    na, nb = _require_bipartite(rho)
    if m.basis_a is not None and m.side in ("A", "AB") and m.basis_a.dim != na:
        raise DimMismatch(f"basis_a has dim {m.basis_a.dim}, side A has dim {na}")
    if m.basis_b is not None and m.side in ("B", "AB") and m.basis_b.dim != nb:
        raise DimMismatch(f"basis_b has dim {m.basis_b.dim}, side B has dim {nb}")
    return na, nb


def dephase(rho: DensityOperator, basis: ProjectiveBasis) -> DensityOperator:
    """Full-space measurement: keep only the diagonal in the given basis."""
    if basis.dim != rho.dim:
        raise DimMismatch(f"basis dim {basis.dim} != state dim {rho.dim}")
    u = basis.unitary
    p = np.real(np.einsum("ij,jk,ki->i", dag(u), rho.matrix, u))
    mat = (u * np.clip(p, 0.0, None)) @ dag(u)
    return DensityOperator(0.5 * (mat + dag(mat)), rho.dims)


def _dephase_side(mat: np.ndarray, na: int, nb: int, axis: int, u: np.ndarray) -> np.ndarray:
    """Dephase one tensor factor of a bipartite matrix in basis u."""
    t = mat.reshape(na, nb, na, nb)
    if axis == 0:
        t = np.einsum("ai,abcd,ck->ibkd", u.conj(), t, u)
        t = t * np.eye(na)[:, None, :, None]
        t = np.einsum("ai,ibkd,ck->abcd", u, t, u.conj())
    else:
        t = np.einsum("bj,abcd,dl->ajcl", u.conj(), t, u)
        t = t * np.eye(nb)[None, :, None, :]
        t = np.einsum("bj,ajcl,dl->abcd", u, t, u.conj())
    return t.reshape(na * nb, na * nb)


def apply_local(rho: DensityOperator, m: LocalMeasurement) -> DensityOperator:
    """Post-measurement state for a local measurement without postselection."""
    na, nb = _check_measurement_dims(rho, m)
    mat = rho.matrix
    if m.side in ("A", "AB"):
        mat = _dephase_side(mat, na, nb, 0, m.basis_a.unitary)
    if m.side in ("B", "AB"):
        mat = _dephase_side(mat, na, nb, 1, m.basis_b.unitary)
    return DensityOperator(0.5 * (mat + dag(mat)), rho.dims)


def _spectrum_side_a(t: np.ndarray, ua: np.ndarray) -> np.ndarray:
    """Spectrum after measuring side A: union of conditional-block spectra."""
    blocks = np.einsum("ai,abcd,ci->ibd", ua.conj(), t, ua)
    return np.clip(np.linalg.eigvalsh(blocks).ravel(), 0.0, None)


def _spectrum_side_b(t: np.ndarray, ub: np.ndarray) -> np.ndarray:
    blocks = np.einsum("bj,abcd,dj->jac", ub.conj(), t, ub)
    return np.clip(np.linalg.eigvalsh(blocks).ravel(), 0.0, None)


def _spectrum_side_ab(t: np.ndarray, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    """Spectrum after a bilocal measurement: the rotated joint diagonal."""
    probs = np.real(
        np.einsum("ai,bj,abcd,ci,dj->ij", ua.conj(), ub.conj(), t, ua, ub)
    )
    return np.clip(probs.ravel(), 0.0, None)


def measured_spectrum(rho: DensityOperator, m: LocalMeasurement) -> np.ndarray:
    """Eigenvalues of apply_local(rho, m), sorted decreasing.

    After measuring side A the state is block-diagonal over the measured
    basis, so its spectrum is the union of the spectra of the conditional
    blocks; after a bilocal measurement it is the rotated diagonal.
    """
    na, nb = _check_measurement_dims(rho, m)
    t = rho.matrix.reshape(na, nb, na, nb)
    if m.side == "AB":
        vals = _spectrum_side_ab(t, m.basis_a.unitary, m.basis_b.unitary)
    elif m.side == "A":
        vals = _spectrum_side_a(t, m.basis_a.unitary)
    else:
        vals = _spectrum_side_b(t, m.basis_b.unitary)
    return np.sort(vals)[::-1]


def conditional_decomposition(rho: DensityOperator, m: LocalMeasurement) -> ConditionalDecomposition:
    """Outcome probabilities and conditional states of the unmeasured side."""
    na, nb = _check_measurement_dims(rho, m)
    t = rho.matrix.reshape(na, nb, na, nb)
    if m.side == "AB":
        ua, ub = m.basis_a.unitary, m.basis_b.unitary
        probs = np.real(
            np.einsum("ai,bj,abcd,ci,dj->ij", ua.conj(), ub.conj(), t, ua, ub)
        )
        return ConditionalDecomposition("AB", np.clip(probs, 0.0, None), ())
    if m.side == "A":
        u = m.basis_a.unitary
        blocks = np.einsum("ai,abcd,ci->ibd", u.conj(), t, u)
        cond_dims = (nb,)
    else:
        u = m.basis_b.unitary
        blocks = np.einsum("bj,abcd,dj->jac", u.conj(), t, u)
        cond_dims = (na,)
    probs = np.clip(np.real(np.trace(blocks, axis1=1, axis2=2)), 0.0, None)
    conditionals = []
    for blk, p in zip(blocks, probs):
        if p < 1e-12:
            conditionals.append(None)
            continue
        c = blk / p
        conditionals.append(DensityOperator(0.5 * (c + dag(c)), cond_dims))
    return ConditionalDecomposition(m.side, probs, tuple(conditionals))


def rescale_factor(before_spectrum: np.ndarray, idx: EntropicIndices) -> float:
    """The divisor (Tr rho^q)^s; identically 1 in the limit regimes."""
    if idx.regime is not Regime.UNIFIED:
        return 1.0
    return math.exp(idx.s * log_power_sum(before_spectrum, idx.q))


def purity_ratio_spectra(before: np.ndarray, after: np.ndarray, idx: EntropicIndices) -> float:
    """((Tr after^q) / (Tr before^q))^s; identically 1 in the limit regimes."""
    if idx.regime is not Regime.UNIFIED:
        return 1.0
    return math.exp(idx.s * (log_power_sum(after, idx.q) - log_power_sum(before, idx.q)))


def disturbance_spectra(before, after, idx: EntropicIndices) -> float:
    """Purity-rescaled entropy increase between two spectra.

    Algebraically equal to (S(after) - S(before)) / (Tr before^q)^s, but
    evaluated through the log of the power-sum ratio, which is exact in the
    limit regimes and stable near them.
    """
    before = np.clip(np.asarray(before, dtype=float), 0.0, None)
    after = np.clip(np.asarray(after, dtype=float), 0.0, None)
    regime = idx.regime
    if regime is Regime.VON_NEUMANN:
        return unified_entropy_spectrum(after, idx) - unified_entropy_spectrum(before, idx)
    dlog = log_power_sum(after, idx.q) - log_power_sum(before, idx.q)
    if regime is Regime.RENYI:
        return dlog / (1.0 - idx.q)
    x = idx.s * dlog
    if abs(x) < 1e-12:
        return dlog / (1.0 - idx.q) * (1.0 + 0.5 * x)
    return math.expm1(x) / ((1.0 - idx.q) * idx.s)


def purity_ratio(rho: DensityOperator, m: LocalMeasurement, idx: EntropicIndices) -> float:
    """Purity ratio of the measurement on this state."""
    if idx.regime is not Regime.UNIFIED:
        return 1.0
    return purity_ratio_spectra(linalg.spectrum(rho), measured_spectrum(rho, m), idx)


def disturbance(rho: DensityOperator, m: LocalMeasurement, idx: EntropicIndices) -> DisturbanceReport:
    """Entropies before/after, purity ratio, rescale and disturbance value."""
    before = linalg.spectrum(rho)
    after = measured_spectrum(rho, m)
    return DisturbanceReport(
        entropy_before=unified_entropy_spectrum(before, idx),
        entropy_after=unified_entropy_spectrum(after, idx),
        purity_ratio=purity_ratio_spectra(before, after, idx),
        rescale=rescale_factor(before, idx),
        disturbance=disturbance_spectra(before, after, idx),
    )
