"""Dense complex matrix arithmetic and Hermitian spectral analysis.

Everything downstream (effects, observables, instruments, lattice models)
is built on plain ``numpy`` complex arrays.  Operators are small (a few
hundred dimensions at most), so all routines use dense algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    OpmeasError,
    SpectrumOutOfRangeError,
)

# Project-wide tolerances.  Public predicates accept an override.
TOL_EIG = 1e-10
TOL_HERM = 1e-10
TOL_PSD = 1e-9

# Threshold below which an eigenvector component is treated as zero when
# fixing the overall phase.
_PHASE_EPS = 1e-12


def as_matrix(m) -> np.ndarray:
    """Coerce input to a square complex matrix; reject non-square or non-finite."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise OpmeasError("matrix entries must be finite")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m†)/2; used to scrub rounding skew after products."""
    return (m + m.conj().T) / 2


def require_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    """True iff the operator-norm distance between m and its adjoint is <= tol."""
    a = as_matrix(m)
    if tol <= 0:
        raise ValueError("tol must be positive")
    return op_norm(a - a.conj().T) <= tol


@dataclass(frozen=True)
class HermitianEigen:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; the columns of ``eigenvectors``
    are the matching orthonormal eigenvectors, each with a fixed global
    phase (first significant component real and positive) so repeated runs
    on identical input give identical output.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(m, tol: float = TOL_HERM) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix with deterministic phases.

    Raises NotHermitianError if the input fails the Hermiticity check.
    """
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        raise NotHermitianError("input is not Hermitian within tolerance")
    evals, vecs = np.linalg.eigh(hermitize(a))
    vecs = _fix_phases(vecs)
    evals = np.asarray(evals, dtype=float)
    evals.setflags(write=False)
    vecs.setflags(write=False)
    return HermitianEigen(eigenvalues=evals, eigenvectors=vecs)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant component is real positive."""
    out = np.array(vecs, dtype=complex)
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > _PHASE_EPS)
        if idx.size == 0:
            continue
        pivot = col[idx[0]]
        out[:, j] = col * (pivot.conj() / abs(pivot))
    return out


def psd_sqrt(m, tol: float = TOL_PSD) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol is a
    genuine negativity and raises SpectrumOutOfRangeError.
    """
    eig = eig_hermitian(m)
    evals = eig.eigenvalues
    if evals.size and evals[0] < -tol:
        raise SpectrumOutOfRangeError(evals[0], f"matrix is not PSD: eigenvalue {evals[0]}")
    clamped = np.clip(evals, 0.0, None)
    v = eig.eigenvectors
    return hermitize((v * np.sqrt(clamped)) @ v.conj().T)


def op_norm(m) -> float:
    """Operator (spectral) norm: the largest singular value."""
    a = as_matrix(m)
    if a.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def commutator(a, b) -> np.ndarray:
    x = as_matrix(a)
    y = as_matrix(b)
    require_same_dim(x, y)
    return x @ y - y @ x


def commutator_norm(a, b) -> float:
    """Operator norm of the commutator ab - ba."""
    return op_norm(commutator(a, b))


def outer(v: np.ndarray) -> np.ndarray:
    """Rank-one projector |v><v| for a vector v (not normalized here)."""
    w = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(w, w.conj())
