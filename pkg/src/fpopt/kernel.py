"""Dense linear-algebra primitives shared by the rest of the package.

Everything here operates on plain float ``numpy`` arrays, allocates fresh
outputs, and holds no state, so all functions are safe to call concurrently.
The heavy lifting is delegated to LAPACK through numpy/scipy: the matrix
exponential uses scipy's scaling-and-squaring Pade code, symmetric spectra
use ``eigh``, general spectra use the Hessenberg + shifted-QR path behind
``eigvals``.  The Lyapunov equation is deliberately solved by vectorisation
to a dense n^2 x n^2 system: dimensions stay small in this package and the
direct solve is trivial to audit.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    EigenFailure,
    InvalidMatrix,
    NotPositiveStable,
    NotSymmetric,
)

#: Relative Frobenius tolerance for accepting a matrix as (anti)symmetric.
#: Inputs in this package are constructed analytically, so the tolerance is
#: tight on purpose: a larger defect is a real bug, not noise.
SYM_TOL = 1e-12

#: Singular values below RANK_TOL * sigma_max count as zero in rank tests.
RANK_TOL = 1e-10


def as_square(a) -> np.ndarray:
    """Coerce ``a`` to a finite square float array.

    Raises
    ------
    InvalidMatrix
        If the array is not two-dimensional square or contains NaN/Inf.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix entries must be finite")
    return a


def symmetry_defect(a) -> float:
    """Relative Frobenius distance ||a - a^T|| / ||a|| (0 for the zero matrix)."""
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - a.T) / scale)


def antisymmetry_defect(a) -> float:
    """Relative Frobenius distance ||a + a^T|| / ||a|| (0 for the zero matrix)."""
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a + a.T) / scale)


def expm(a, t: float = 1.0) -> np.ndarray:
    """Decay propagator ``exp(-t a)``.

    Mind the sign convention: this is the solution operator after time ``t``
    of the linear ODE ``dx/dt = -a x``, which is the only form the rest of
    the package needs.  Relative accuracy is at working precision for the
    moderate ``||a t||`` arising here (scaling-and-squaring Pade).

    Parameters
    ----------
    a
        Square real matrix.
    t
        Nonnegative time.
    """
    a = as_square(a)
    if not np.isfinite(t) or t < 0:
        raise ValueError("time must be finite and nonnegative")
    return scipy.linalg.expm((-t) * a)


def spectral_norm(a) -> float:
    """Largest singular value of ``a`` (the operator norm on Euclidean space)."""
    a = as_square(a)
    return float(np.linalg.norm(a, 2))


def sym_eigen(a, tol: float = SYM_TOL):
    """Spectral decomposition of a symmetric matrix.

    Returns
    -------
    (w, v)
        Eigenvalues ``w`` in ascending order and orthonormal eigenvector
        columns ``v`` with ``a v[:, i] = w[i] v[:, i]``.

    Raises
    ------
    NotSymmetric
        If the relative symmetry defect of ``a`` exceeds ``tol``.
    """
    a = as_square(a)
    if symmetry_defect(a) > tol:
        raise NotSymmetric(f"symmetry defect {symmetry_defect(a):.3e} exceeds {tol:.1e}")
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return w, v


def general_eigenvalues(a) -> np.ndarray:
    """Full complex spectrum of a real square matrix.

    Uses the LAPACK Hessenberg + shifted-QR iteration.  If the iteration
    fails to converge the failure is raised, never masked: a wrong spectral
    gap must not be reported silently.
    """
    a = as_square(a)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigenvalue iteration failed: {exc}") from exc


def spectral_abscissa_gap(a) -> float:
    """Smallest real part over the spectrum of ``a``."""
    return float(np.min(np.real(general_eigenvalues(a))))


def solve_continuous_lyapunov(a, b) -> np.ndarray:
    """Solve ``a q + q a^T = 2 b`` for the unique symmetric ``q``.

    Uniqueness requires every eigenvalue of ``a`` to have positive real
    part.  The equation is vectorised to a dense n^2 x n^2 linear system and
    solved directly; with ``b`` positive semi-definite the solution is
    symmetric positive semi-definite.

    Raises
    ------
    NotPositiveStable
        If ``min Re sigma(a) <= 0``.
    """
    a = as_square(a)
    b = as_square(b)
    if a.shape != b.shape:
        raise InvalidMatrix("coefficient matrices must have matching shapes")
    if spectral_abscissa_gap(a) <= 0.0:
        raise NotPositiveStable("left coefficient must have spectrum in the open right half-plane")
    n = a.shape[0]
    eye = np.eye(n)
    system = np.kron(a, eye) + np.kron(eye, a)
    q = np.linalg.solve(system, (2.0 * b).reshape(-1)).reshape(n, n)
    return 0.5 * (q + q.T)


def kalman_rank(a, b, tol: float = RANK_TOL) -> bool:
    """Controllability-style rank test.

    True iff ``[b, a b, a^2 b, ..., a^{n-1} b]`` has full rank ``n``, with
    rank counted from singular values above ``tol * sigma_max``.  Applied to
    a drift/diffusion pair this is the hypoellipticity test: no nontrivial
    invariant subspace of the diffusion kernel survives the drift.

    ``a`` is normalised by its spectral norm before the powers are formed;
    block-wise positive scaling leaves the span (hence the rank) unchanged
    but stops ``a^{n-1}`` from drowning the small singular values that the
    relative threshold is supposed to protect.
    """
    a = as_square(a)
    b = as_square(b)
    if a.shape != b.shape:
        raise InvalidMatrix("rank test needs matrices of matching shapes")
    n = a.shape[0]
    scale = spectral_norm(a)
    if scale > 0.0:
        a = a / scale
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    s = np.linalg.svd(np.hstack(blocks), compute_uv=False)
    if s[0] == 0.0:
        return False
    return int(np.count_nonzero(s > tol * s[0])) == n
