"""Symmetric state families with analytic correlation values.

Pseudopure states (pure state mixed with white noise), isotropic states and
Werner states all admit closed-form correlation measures: the optimal local
measurement is known (Schmidt basis, respectively any local basis), so the
minimized measure reduces to the disturbance between two analytic spectra.
These serve as oracles for the numerical optimizer.

The printed closed form for Werner states circulating in the literature
disagrees with the direct spectral computation (see werner_printed_form);
the spectrum-derived value is the one used as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .entropy import EntropicIndices, Regime
from .linalg import DensityOperator
from .measurement import disturbance_spectra

KINDS = ("pseudopure", "isotropic", "werner")


class BadKind(ValueError):
    pass


class BadParameter(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """One-parameter family member: kind, side dimensions and mix parameter.

    The parameter is p in [0, 1] for pseudopure, y in [1/N^2, 1] for
    isotropic, x in [-1, 1] for Werner.  ``psi`` optionally fixes the pure
    state of a pseudopure member; the default is the maximally entangled
    vector on min(n_a, n_b) levels.
    """

    kind: str
    n_a: int
    n_b: int
    parameter: float
    psi: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadKind(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n_a < 1 or self.n_b < 1:
            raise BadParameter("side dimensions must be >= 1")
        if self.kind in ("isotropic", "werner") and self.n_a != self.n_b:
            raise BadParameter(f"{self.kind} states need n_a == n_b")
        p = self.parameter
        if self.kind == "pseudopure" and not 0.0 <= p <= 1.0:
            raise BadParameter(f"pseudopure parameter must be in [0, 1], got {p}")
        if self.kind == "werner" and not -1.0 <= p <= 1.0:
            raise BadParameter(f"werner parameter must be in [-1, 1], got {p}")
        if self.kind == "isotropic" and not 1.0 / self.n_a**2 - 1e-12 <= p <= 1.0:
            raise BadParameter(
                f"isotropic parameter must be in [1/N^2, 1], got {p}"
            )
        if self.psi is not None and self.kind != "pseudopure":
            raise BadParameter("psi only applies to pseudopure states")


def maximally_entangled(n_a: int, n_b: int | None = None) -> np.ndarray:
    """Uniform superposition over paired levels, as a unit vector."""
    n_b = n_a if n_b is None else n_b
    k = min(n_a, n_b)
    psi = np.zeros(n_a * n_b, dtype=complex)
    for i in range(k):
        psi[i * n_b + i] = 1.0
    return psi / math.sqrt(k)


def swap_operator(n: int) -> np.ndarray:
    """The flip F = sum_ij |ij><ji| on two n-dimensional systems."""
    return (
        np.eye(n * n).reshape(n, n, n, n).transpose(0, 1, 3, 2).reshape(n * n, n * n)
    ).astype(complex)


def _pseudopure_psi(spec: FamilySpec) -> np.ndarray:
    if spec.psi is not None:
        psi = np.asarray(spec.psi, dtype=complex).ravel()
        if psi.size != spec.n_a * spec.n_b:
            raise BadParameter(f"psi has size {psi.size}, expected {spec.n_a * spec.n_b}")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
            raise BadParameter("psi must be a unit vector")
        return psi
    return maximally_entangled(spec.n_a, spec.n_b)


def build(spec: FamilySpec) -> DensityOperator:
    """Construct the density operator of a family member."""
    dims = (spec.n_a, spec.n_b)
    n = spec.n_a * spec.n_b
    if spec.kind == "pseudopure":
        psi = _pseudopure_psi(spec)
        p = spec.parameter
        mat = (1.0 - p) * np.eye(n) / n + p * np.outer(psi, psi.conj())
    elif spec.kind == "isotropic":
        y, nn = spec.parameter, spec.n_a
        psi = maximally_entangled(nn)
        mat = (1.0 - y) / (nn**2 - 1) * np.eye(n) + (nn**2 * y - 1.0) / (
            nn**2 - 1
        ) * np.outer(psi, psi.conj())
    else:
        x, nn = spec.parameter, spec.n_a
        mat = (nn - x) / (nn**3 - nn) * np.eye(n) + (nn * x - 1.0) / (
            nn**3 - nn
        ) * swap_operator(nn)
    return linalg.make_density(mat, dims)


def _pseudopure_spectra(n_total: int, p: float, lam: np.ndarray):
    """Spectra before/after measuring a pseudopure state in its Schmidt basis."""
    base = (1.0 - p) / n_total
    before = np.full(n_total, base)
    before[0] += p
    after = np.full(n_total, base)
    after[: lam.size] += p * lam
    return before, after


def pseudopure_closed_form(spec: FamilySpec, side: str, idx: EntropicIndices) -> float:
    """Correlation measure of a pseudopure state, exact for every side.

    The optimal measurement is the local Schmidt basis independently of the
    entropic indices, and the semiquantum and total quantifiers coincide, so
    the value does not depend on ``side``.
    """
    if spec.kind != "pseudopure":
        raise BadKind(f"expected a pseudopure spec, got {spec.kind!r}")
    if side not in ("A", "B", "AB"):
        raise ValueError(f"side must be A, B or AB, got {side!r}")
    psi = _pseudopure_psi(spec)
    lam = linalg.schmidt(psi, (spec.n_a, spec.n_b)).coefficients
    before, after = _pseudopure_spectra(spec.n_a * spec.n_b, spec.parameter, lam)
    return disturbance_spectra(before, after, idx)


def isotropic_closed_form(n: int, y: float, idx: EntropicIndices) -> float:
    """Correlation measure of the isotropic state, via its exact spectra.

    Before the measurement the spectrum is {y} + {(1-y)/(N^2-1)} x (N^2-1);
    after a standard-basis local measurement it is
    {(1-y+Ny-1/N)/(N^2-1)} x N + {(1-y)/(N^2-1)} x (N^2-N).  By symmetry any
    local measurement gives the same disturbance, so this is the minimized
    measure for every side.
    """
    FamilySpec("isotropic", n, n, y)  # parameter validation
    fill = (1.0 - y) / (n**2 - 1)
    before = np.full(n**2, fill)
    before[0] = y
    after = np.full(n**2, fill)
    after[:n] = (1.0 - y + n * y - 1.0 / n) / (n**2 - 1)
    return disturbance_spectra(before, after, idx)


def werner_spectrum_form(n: int, x: float, idx: EntropicIndices) -> float:
    """Correlation measure of the Werner state, via its exact spectra.

    Before: eigenvalue (1+x)/(N^2+N) on the symmetric subspace (multiplicity
    N(N+1)/2) and (1-x)/(N^2-N) on the antisymmetric one (N(N-1)/2).  After a
    standard-basis local measurement the diagonal carries (1+x)/(N^2+N) on the
    N matched levels and (N-x)/(N^3-N) elsewhere.  Measurement-independent by
    symmetry, hence equal to the minimized measure for every side.
    """
    FamilySpec("werner", n, n, x)
    before = np.concatenate(
        [
            np.full(n * (n + 1) // 2, (1.0 + x) / (n**2 + n)),
            np.full(n * (n - 1) // 2, (1.0 - x) / (n**2 - n)),
        ]
    )
    after = np.concatenate(
        [
            np.full(n, (1.0 + x) / (n**2 + n)),
            np.full(n**2 - n, (n - x) / (n**3 - n)),
        ]
    )
    return disturbance_spectra(before, after, idx)


def _power_sum(terms, q: float) -> float:
    """sum of c * b^q over (coefficient, base) pairs, with 0^q := 0."""
    return float(sum(c * b**q for c, b in terms if b > 0.0))


def _power_sum_dq(terms, q: float) -> float:
    """d/dq of _power_sum: sum of c * b^q * ln(b)."""
    return float(sum(c * b**q * math.log(b) for c, b in terms if b > 0.0))


def _ratio_closed_form(num_terms, den_terms, idx: EntropicIndices) -> float:
    """((num(q)/den(q))^s - 1) / ((1-q)s) with the regime limits.

    num and den are power sums over (coefficient, base) pairs; the von
    Neumann limit is the -d/dq log-ratio at q = 1 (valid whenever
    num(1) = den(1)).
    """
    if idx.regime is Regime.VON_NEUMANN:
        num, den = _power_sum(num_terms, 1.0), _power_sum(den_terms, 1.0)
        return -(_power_sum_dq(num_terms, 1.0) / num - _power_sum_dq(den_terms, 1.0) / den)
    q = idx.q
    log_ratio = math.log(_power_sum(num_terms, q)) - math.log(_power_sum(den_terms, q))
    if idx.regime is Regime.RENYI:
        return log_ratio / (1.0 - q)
    x = idx.s * log_ratio
    if abs(x) < 1e-12:
        return log_ratio / (1.0 - q) * (1.0 + 0.5 * x)
    return math.expm1(x) / ((1.0 - q) * idx.s)


def werner_printed_form(n: int, x: float, idx: EntropicIndices) -> float:
    """Literal evaluation of the published Werner closed form.

    Kept for documentation and comparison only: at (N=2, x=-1, von Neumann)
    it evaluates to about 0.1308 while the direct spectral computation of the
    same quantity gives ln 2, so it is never used as an oracle.
    """
    FamilySpec("werner", n, n, x)
    # num = 2 [ (N-1)^q (x+1)^q + (N-1)(N-x)^q ]
    num_terms = [
        (2.0, (n - 1) * (x + 1.0)),
        (2.0 * (n - 1), float(n - x)),
    ]
    # den = 2 (N-1)^q (x+1)^q
    #       + (N-1) [ (N-x+Nx/2-1/2)^q + (N-x-Nx/2+1/2)^q ]
    den_terms = [
        (2.0, (n - 1) * (x + 1.0)),
        (float(n - 1), n - x + n * x / 2.0 - 0.5),
        (float(n - 1), n - x - n * x / 2.0 + 0.5),
    ]
    return _ratio_closed_form(num_terms, den_terms, idx)


def isotropic_specializations(n: int, p: float, q: float) -> tuple[float, float]:
    """Tsallis (s=1) and Renyi (s->0) values for the isotropic family at p.

    The Renyi value follows the published specialization, which matches the
    s -> 0 limit of the general expression.  The published Tsallis line drops
    the purity rescaling and a sign, so the Tsallis value here is derived
    from the general expression at s = 1 instead.
    """
    FamilySpec("pseudopure", n, n, p)
    if abs(q - 1.0) <= 1e-8:
        raise BadParameter("specializations are for q != 1; use the general form")
    lam = np.full(n, 1.0 / n)
    before, after = _pseudopure_spectra(n * n, p, lam)
    tsallis = disturbance_spectra(before, after, EntropicIndices(q, 1.0))
    num_terms = [(float(n), 1.0 - p + n * p), (float(n * n - n), 1.0 - p)]
    den_terms = [(1.0, 1.0 - p + n * n * p), (float(n * n - 1), 1.0 - p)]
    renyi = (
        math.log(_power_sum(num_terms, q)) - math.log(_power_sum(den_terms, q))
    ) / (1.0 - q)
    return tsallis, renyi
