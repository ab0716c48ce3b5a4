"""Gaussian equilibria and the coefficient pairs that preserve them.

A centred Gaussian with covariance ``K`` stays stationary under the linear
drift-diffusion evolution with coefficients ``(C, D)`` exactly when
``C = (D + J) K^{-1}`` for some antisymmetric ``J``, with ``D`` symmetric
positive semi-definite and the injected randomness capped by the trace
budget ``Tr(D) <= d``.  This module holds the equilibrium object with its
cached spectral data, the coefficient-pair object with its whitened forms,
quantitative validation, the spectral gap, and the baseline decay envelope
of the classical two-phase (symmetric start) scheme.
"""

from __future__ import annotations

import numpy as np

from . import kernel
from .errors import (
    InvalidConstant,
    NotAntisymmetric,
    NotPSD,
    NotSymmetric,
    TraceBudgetExceeded,
)

#: Absolute slack on the trace budget Tr(D) <= d.  Pairs over budget are
#: rejected, never rescaled: rescaling would silently change the time unit.
TRACE_TOL = 1e-12

#: Relative tolerance on the stationarity residual ||C K + K C^T - 2 D||_F
#: below which a pair counts as preserving the equilibrium.
ADMISSIBILITY_TOL = 1e-10


class Covariance:
    """Symmetric positive-definite covariance with eagerly cached spectral data.

    Accepts a full SPD matrix or a 1-D array of variances (the diagonal
    case); :meth:`from_eigen` builds one from a prescribed eigenbasis.  All
    derived matrices (inverse, square root, inverse square root) and the
    fastest attainable decay data are computed once here, so instances are
    immutable and cheap to share between threads.

    Attributes
    ----------
    matrix, inv, sqrt, inv_sqrt : ndarray
        K and its inverse, principal square root, and inverse square root.
    variances, axes : ndarray
        Eigenvalues of K in ascending order and the orthonormal eigenvectors.
    condition_number : float
        Ratio of extreme variances.
    fastest_rate : float
        Largest eigenvalue of K^{-1}, i.e. 1 / min variance; the hard upper
        limit for the exponential decay rate of any admissible pair.
    fastest_direction : ndarray
        Unit eigenvector of K^{-1} for ``fastest_rate``, with the sign fixed
        so its first nonvanishing component is positive (determinism).
    """

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim == 1:
            m = np.diag(m)
        m = kernel.as_square(m)
        if m.shape[0] < 1:
            raise NotPSD("covariance must be at least 1x1")
        if kernel.symmetry_defect(m) > kernel.SYM_TOL:
            raise NotSymmetric("covariance must be symmetric")
        m = 0.5 * (m + m.T)
        w, v = np.linalg.eigh(m)
        if w[0] <= 0.0:
            raise NotPSD("covariance must be positive definite")
        self.matrix = m
        self.matrix.flags.writeable = False
        self.dim = int(m.shape[0])
        self.variances = w
        self.axes = v
        self.inv = v @ np.diag(1.0 / w) @ v.T
        self.sqrt = v @ np.diag(np.sqrt(w)) @ v.T
        self.inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.T
        self.condition_number = float(w[-1] / w[0])
        self.fastest_rate = float(1.0 / w[0])
        direction = v[:, 0].copy()
        lead = np.nonzero(np.abs(direction) > 1e-12 * np.abs(direction).max())[0][0]
        if direction[lead] < 0.0:
            direction = -direction
        self.fastest_direction = direction

    @classmethod
    def from_eigen(cls, variances, axes) -> "Covariance":
        """Build from eigenvalues plus an orthogonal eigenvector matrix."""
        variances = np.asarray(variances, dtype=float)
        axes = kernel.as_square(axes)
        if variances.ndim != 1 or variances.size != axes.shape[0]:
            raise ValueError("need one variance per eigenvector column")
        defect = np.linalg.norm(axes.T @ axes - np.eye(axes.shape[0]))
        if defect > 1e-10 * axes.shape[0]:
            raise ValueError(f"eigenvector matrix is not orthogonal (defect {defect:.3e})")
        return cls(axes @ np.diag(variances) @ axes.T)

    # Whitening: the change of variables that maps the equilibrium Gaussian
    # to the standard normal.  Drifts transform by similarity, quadratic
    # forms (diffusion, skew) by congruence.
    def whiten_drift(self, c) -> np.ndarray:
        """Similarity transform K^{-1/2} c K^{1/2}."""
        return self.inv_sqrt @ c @ self.sqrt

    def unwhiten_drift(self, c) -> np.ndarray:
        """Inverse of :meth:`whiten_drift`."""
        return self.sqrt @ c @ self.inv_sqrt

    def whiten_form(self, m) -> np.ndarray:
        """Congruence transform K^{-1/2} m K^{-1/2}."""
        return self.inv_sqrt @ m @ self.inv_sqrt

    def __repr__(self):
        return f"Covariance(dim={self.dim}, fastest_rate={self.fastest_rate:.6g})"


def same_equilibrium(a: Covariance, b: Covariance) -> bool:
    """Whether two covariances describe the same equilibrium (tight tolerance)."""
    if a is b:
        return True
    if a.dim != b.dim:
        return False
    scale = max(np.linalg.norm(a.matrix), np.linalg.norm(b.matrix), 1.0)
    return bool(np.linalg.norm(a.matrix - b.matrix) <= 1e-12 * scale)


class CoefficientPair:
    """A drift/diffusion pair tied to a fixed Gaussian equilibrium.

    Stores the raw matrices, the skew certificate ``J`` (the antisymmetric
    part of ``C K``), and the whitened forms every norm computation runs on:
    ``C~ = K^{-1/2} C K^{1/2}``, ``D~ = K^{-1/2} D K^{-1/2}``,
    ``J~ = K^{-1/2} J K^{-1/2}``.  Construction enforces shape, finiteness,
    symmetry and positive semi-definiteness of the diffusion, and the trace
    budget.  Whether the pair actually preserves the equilibrium is a
    quantitative question answered by :func:`validate_pair`; the residual is
    stored here so reports stay cheap.
    """

    def __init__(self, covariance: Covariance, drift, diffusion):
        drift = kernel.as_square(drift)
        diffusion = kernel.as_square(diffusion)
        d = covariance.dim
        if drift.shape != (d, d) or diffusion.shape != (d, d):
            raise ValueError("coefficient matrices must match the covariance dimension")
        if kernel.symmetry_defect(diffusion) > kernel.SYM_TOL:
            raise NotSymmetric("diffusion must be symmetric")
        diffusion = 0.5 * (diffusion + diffusion.T)
        eigs = np.linalg.eigvalsh(diffusion)
        if eigs[0] < -1e-10 * max(1.0, float(np.abs(eigs).max())):
            raise NotPSD(f"diffusion has negative eigenvalue {eigs[0]:.3e}")
        trace = float(np.trace(diffusion))
        if trace > d + TRACE_TOL:
            raise TraceBudgetExceeded(f"Tr(D) = {trace:.12g} exceeds the budget d = {d}")
        self.covariance = covariance
        self.drift = drift
        self.diffusion = diffusion
        ck = drift @ covariance.matrix
        self.skew = 0.5 * (ck - ck.T)
        self.stationarity_residual = float(np.linalg.norm(ck + ck.T - 2.0 * diffusion))
        self.whitened_drift = covariance.whiten_drift(drift)
        self.whitened_diffusion = covariance.whiten_form(diffusion)
        self.whitened_skew = covariance.whiten_form(self.skew)
        self.trace_diffusion = trace

    @property
    def dim(self) -> int:
        return self.covariance.dim

    @property
    def admissibility_defect(self) -> float:
        """Stationarity residual relative to the natural scale of the pair."""
        scale = (np.linalg.norm(self.drift) * np.linalg.norm(self.covariance.matrix)
                 + np.linalg.norm(self.diffusion))
        return self.stationarity_residual / max(scale, 1e-300)

    def __repr__(self):
        return (f"CoefficientPair(dim={self.dim}, trace_diffusion="
                f"{self.trace_diffusion:.6g})")


def make_pair(covariance: Covariance, diffusion, skew) -> CoefficientPair:
    """Assemble the admissible pair with drift ``C = (D + J) K^{-1}``.

    ``diffusion`` must be symmetric positive semi-definite within the trace
    budget, ``skew`` antisymmetric; those are exactly the degrees of freedom
    that leave the equilibrium invariant.
    """
    diffusion = kernel.as_square(diffusion)
    skew = kernel.as_square(skew)
    if kernel.antisymmetry_defect(skew) > kernel.SYM_TOL:
        raise NotAntisymmetric("skew part must be antisymmetric")
    skew = 0.5 * (skew - skew.T)
    drift = (diffusion + skew) @ covariance.inv
    return CoefficientPair(covariance, drift, diffusion)


class ValidationReport:
    """Outcome of the stationarity / uniqueness checks, with raw residuals.

    ``admissible`` means the pair preserves the equilibrium (small Lyapunov
    residual); ``steady_state_unique`` is the conjunction of positive
    stability and hypoellipticity, the two conditions under which the
    preserved Gaussian is the only normalized steady state.
    """

    def __init__(self, stationarity_residual, admissible, spectral_gap,
                 positive_stable, hypoelliptic, trace_diffusion, rank_diffusion):
        self.stationarity_residual = float(stationarity_residual)
        self.admissible = bool(admissible)
        self.spectral_gap = float(spectral_gap)
        self.positive_stable = bool(positive_stable)
        self.hypoelliptic = bool(hypoelliptic)
        self.steady_state_unique = bool(positive_stable and hypoelliptic)
        self.trace_diffusion = float(trace_diffusion)
        self.rank_diffusion = int(rank_diffusion)

    @property
    def passed(self) -> bool:
        return self.admissible and self.steady_state_unique

    def as_dict(self) -> dict:
        return {
            "stationarity_residual": self.stationarity_residual,
            "admissible": self.admissible,
            "spectral_gap": self.spectral_gap,
            "positive_stable": self.positive_stable,
            "hypoelliptic": self.hypoelliptic,
            "steady_state_unique": self.steady_state_unique,
            "trace_diffusion": self.trace_diffusion,
            "rank_diffusion": self.rank_diffusion,
            "passed": self.passed,
        }

    def __repr__(self):
        status = "passed" if self.passed else "FAILED"
        return (f"ValidationReport({status}, residual="
                f"{self.stationarity_residual:.3e}, gap={self.spectral_gap:.6g})")


def validate_pair(pair: CoefficientPair) -> ValidationReport:
    """Run the full check battery on a pair and report residuals.

    Checks: stationarity of the equilibrium (Lyapunov residual
    ``||C K + K C^T - 2 D||_F`` against :data:`ADMISSIBILITY_TOL`), positive
    stability of the drift, and hypoellipticity via the rank test on
    ``[D, C D, ..., C^{d-1} D]``.  Failures are reported, never raised.
    """
    scale = (np.linalg.norm(pair.drift) * np.linalg.norm(pair.covariance.matrix)
             + np.linalg.norm(pair.diffusion))
    admissible = pair.stationarity_residual <= ADMISSIBILITY_TOL * max(scale, 1.0)
    gap = kernel.spectral_abscissa_gap(pair.drift)
    sv = np.linalg.svd(pair.diffusion, compute_uv=False)
    if sv[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(sv > kernel.RANK_TOL * sv[0]))
    return ValidationReport(
        stationarity_residual=pair.stationarity_residual,
        admissible=admissible,
        spectral_gap=gap,
        positive_stable=gap > 0.0,
        hypoelliptic=kernel.kalman_rank(pair.drift, pair.diffusion),
        trace_diffusion=pair.trace_diffusion,
        rank_diffusion=rank,
    )


def spectral_gap(pair: CoefficientPair) -> float:
    """Smallest real part over the drift spectrum: the sharp asymptotic rate."""
    return kernel.spectral_abscissa_gap(pair.drift)


def baseline_envelope(covariance: Covariance, slack: float, t):
    """Norm-level decay envelope of the classical two-phase scheme.

    The scheme runs the plain symmetric evolution on an initial layer of
    length ``t0 = min variance / 2`` and only then switches to a fast
    non-symmetric pair.  The resulting guarantee, at norm level, is 1 up to
    ``t0`` and ``min(1, sqrt(slack * kappa(K)) * exp((1 - 2 r t) / 2))``
    afterwards, with ``r`` the fastest rate; its multiplicative constant
    ``sqrt(slack * kappa(K) * e)`` cannot go below ``sqrt(kappa(K) e)``,
    which is the gap the single-equation construction closes.

    ``t`` may be a scalar or an array; ``slack`` must exceed 1.
    """
    if not slack > 1.0:
        raise InvalidConstant("slack constant must be > 1")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be nonnegative")
    rate = covariance.fastest_rate
    t0 = 0.5 * covariance.variances[0]
    tail = np.sqrt(slack * covariance.condition_number) * np.exp(0.5 * (1.0 - 2.0 * rate * t))
    out = np.where(t <= t0, 1.0, np.minimum(1.0, tail))
    if out.ndim == 0:
        return float(out)
    return out
